//! Temperature sampling over per-language pair counts.
//!
//! Language `l` with `n_l` pairs out of `N` is drawn with probability
//! proportional to `(n_l / N)^(1/T)`. `T = 1` keeps the raw shares; larger
//! temperatures flatten the distribution toward uniform.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::apportion::largest_remainder;
use crate::corpus::{CorpusStats, ParallelCorpus, SentencePair};
use crate::error::{Error, Result};
use crate::lang::LanguageTag;
use crate::rng;

pub const DEFAULT_TEMPERATURE: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanEntry {
    pub lang: LanguageTag,
    /// Available pairs.
    pub count: u64,
    pub probability: f64,
    /// Pairs to draw; zero until a budget is set.
    pub target: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplingPlan {
    pub temperature: f64,
    pub entries: Vec<PlanEntry>,
    pub budget: u64,
    pub seed: u64,
}

/// Temperature-scaled probabilities for every language in `stats`.
pub fn distribution(stats: &CorpusStats, temperature: f64) -> Result<SamplingPlan> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    if stats.is_empty() {
        return Err(Error::EmptyInput("corpus statistics".into()));
    }
    if let Some((tag, _)) = stats.iter().find(|(_, n)| *n == 0) {
        return Err(Error::InvalidParameter(format!("{tag} has no pairs")));
    }
    let total = stats.total() as f64;
    let scaled: Vec<f64> = stats
        .iter()
        .map(|(_, n)| (n as f64 / total).powf(1.0 / temperature))
        .collect();
    let norm: f64 = scaled.iter().sum();
    let entries = stats
        .iter()
        .zip(scaled)
        .map(|((lang, count), s)| PlanEntry {
            lang,
            count,
            probability: s / norm,
            target: 0,
        })
        .collect();
    Ok(SamplingPlan {
        temperature,
        entries,
        budget: 0,
        seed: 0,
    })
}

impl SamplingPlan {
    /// Sets per-language targets by largest-remainder rounding of
    /// `budget * p_l`; the targets sum to `budget` exactly.
    pub fn with_budget(mut self, budget: u64) -> Self {
        let weights: Vec<f64> = self.entries.iter().map(|e| e.probability).collect();
        for (e, c) in self
            .entries
            .iter_mut()
            .zip(largest_remainder(&weights, budget))
        {
            e.target = c;
        }
        self.budget = budget;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn entry(&self, lang: LanguageTag) -> Option<&PlanEntry> {
        self.entries.iter().find(|e| e.lang == lang)
    }

    pub fn probability(&self, lang: LanguageTag) -> f64 {
        self.entry(lang).map_or(0.0, |e| e.probability)
    }

    /// `lang\tn\tp\tc` with a header row.
    pub fn write_tsv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "lang\tn\tp\tc")?;
        for e in &self.entries {
            writeln!(out, "{}\t{}\t{}\t{}", e.lang, e.count, e.probability, e.target)?;
        }
        Ok(())
    }

    /// Raw versus sampled distribution, as both shares and pair counts.
    pub fn write_plot_data(&self, mut out: impl Write) -> std::io::Result<()> {
        let total: u64 = self.entries.iter().map(|e| e.count).sum();
        writeln!(out, "lang\traw_count\traw_share\tsampled_count\tsampled_share")?;
        for e in &self.entries {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                e.lang,
                e.count,
                e.count as f64 / total as f64,
                e.target,
                e.probability
            )?;
        }
        Ok(())
    }

    pub fn save(&self, plan_path: &Path, plot_path: Option<&Path>) -> Result<()> {
        let mut buf = Vec::new();
        self.write_tsv(&mut buf).map_err(|e| Error::io(plan_path, e))?;
        std::fs::write(plan_path, buf).map_err(|e| Error::io(plan_path, e))?;
        if let Some(path) = plot_path {
            let mut buf = Vec::new();
            self.write_plot_data(&mut buf).map_err(|e| Error::io(path, e))?;
            std::fs::write(path, buf).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }
}

/// Draws `budget` pairs according to `plan`.
///
/// Languages whose target does not exceed their size are downsampled
/// without replacement. Larger targets take whole copies of the language
/// plus a sampled remainder; each copy carries its repetition index.
/// Output is grouped by language in plan order, corpus order within a copy.
pub fn materialize(
    plan: &SamplingPlan,
    corpus: &ParallelCorpus,
    budget: u64,
) -> Result<ParallelCorpus> {
    if budget == 0 {
        return Err(Error::InvalidParameter("sampling budget must be > 0".into()));
    }
    let plan = plan.clone().with_budget(budget);

    let mut by_lang: HashMap<LanguageTag, Vec<usize>> = HashMap::new();
    for (i, p) in corpus.pairs().iter().enumerate() {
        by_lang.entry(p.language()).or_default().push(i);
    }
    for lang in by_lang.keys() {
        if plan.entry(*lang).is_none() {
            return Err(Error::PlanMismatch(format!("{lang} is not in the plan")));
        }
    }
    for e in &plan.entries {
        if e.target > 0 && !by_lang.contains_key(&e.lang) {
            return Err(Error::PlanMismatch(format!(
                "{} has a target of {} but no pairs in the corpus",
                e.lang, e.target
            )));
        }
    }

    let pairs = corpus.pairs();
    let per_lang: Vec<Vec<SentencePair>> = plan
        .entries
        .par_iter()
        .map(|e| {
            let Some(indices) = by_lang.get(&e.lang) else {
                return Vec::new();
            };
            draw(pairs, indices, e.target, plan.seed, e.lang)
        })
        .collect();
    Ok(ParallelCorpus::from_pairs(
        per_lang.into_iter().flatten().collect(),
    ))
}

fn draw(
    pairs: &[SentencePair],
    indices: &[usize],
    target: u64,
    seed: u64,
    lang: LanguageTag,
) -> Vec<SentencePair> {
    let n = indices.len() as u64;
    let copies = target / n;
    let extra = (target % n) as usize;
    let mut out = Vec::with_capacity(target as usize);
    for rep in 0..copies {
        out.extend(indices.iter().map(|&i| {
            let mut p = pairs[i].clone();
            p.repetition = rep as u32;
            p
        }));
    }
    if extra > 0 {
        let mut rng = rng::stream(seed, "materialize", lang.to_string().as_bytes(), 0);
        let mut chosen = rand::seq::index::sample(&mut rng, indices.len(), extra).into_vec();
        chosen.sort_unstable();
        out.extend(chosen.into_iter().map(|j| {
            let mut p = pairs[indices[j]].clone();
            p.repetition = copies as u32;
            p
        }));
    }
    out
}
