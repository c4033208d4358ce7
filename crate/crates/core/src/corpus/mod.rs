//! Parallel corpora: sentence pairs, per-language statistics, high-resource
//! reduction and direction reversal. File formats live in [`io`].

pub mod io;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{LanguagePair, LanguageTag};
use crate::rng;

pub use io::{
    ingest, ingest_tsv, read_tsv, write_skip_report, write_tsv, IngestOptions, Ingested, PairReader,
    Skip, TsvLayout, TsvWriter,
};

/// Where a pair in an assembled corpus came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    #[default]
    Orig,
    Rev,
    Aug,
    Seed,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SentencePair {
    pub source: String,
    pub target: String,
    pub src_lang: LanguageTag,
    pub tgt_lang: LanguageTag,
    /// Provenance label such as `ILCI`, `Wiki` or `general`.
    pub subset: Arc<str>,
    pub origin: Origin,
    /// Copy index when a pair is repeated by upsampling; 0 otherwise.
    pub repetition: u32,
}

impl SentencePair {
    pub fn new(
        source: impl Into<String>,
        target: impl Into<String>,
        src_lang: LanguageTag,
        tgt_lang: LanguageTag,
        subset: Arc<str>,
    ) -> Result<Self> {
        let pair = SentencePair {
            source: source.into(),
            target: target.into(),
            src_lang,
            tgt_lang,
            subset,
            origin: Origin::Orig,
            repetition: 0,
        };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        if self.source.trim().is_empty() || self.target.trim().is_empty() {
            return Err(Error::InvalidParameter(
                "sentence pair with empty side".into(),
            ));
        }
        if self.src_lang == self.tgt_lang {
            return Err(Error::InvalidParameter(format!(
                "sentence pair with identical languages {}",
                self.src_lang
            )));
        }
        Ok(())
    }

    pub fn direction(&self) -> LanguagePair {
        LanguagePair::new(self.src_lang, self.tgt_lang)
    }

    /// The language a pair is counted under: its non-English side, or the
    /// target side when neither side is English.
    pub fn language(&self) -> LanguageTag {
        if self.tgt_lang.is_english() {
            self.src_lang
        } else {
            self.tgt_lang
        }
    }

    pub fn reversed(&self) -> SentencePair {
        SentencePair {
            source: self.target.clone(),
            target: self.source.clone(),
            src_lang: self.tgt_lang,
            tgt_lang: self.src_lang,
            subset: self.subset.clone(),
            origin: match self.origin {
                Origin::Orig => Origin::Rev,
                Origin::Rev => Origin::Orig,
                other => other,
            },
            repetition: self.repetition,
        }
    }

    /// Label written in the origin column of mixture files.
    pub fn origin_label(&self) -> String {
        match self.origin {
            Origin::Orig => "orig".into(),
            Origin::Rev => "rev".into(),
            Origin::Aug => "aug".into(),
            Origin::Seed => format!("seed:{}", self.subset),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Fixed(LanguagePair),
    Mixed,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Fixed(p) => p.fmt(f),
            Direction::Mixed => f.write_str("mixed"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParallelCorpus {
    pairs: Vec<SentencePair>,
    direction: Direction,
}

impl Default for ParallelCorpus {
    fn default() -> Self {
        ParallelCorpus {
            pairs: Vec::new(),
            direction: Direction::Mixed,
        }
    }
}

impl ParallelCorpus {
    /// Builds a corpus; the direction is fixed when every pair shares one.
    pub fn from_pairs(pairs: Vec<SentencePair>) -> Self {
        let direction = match pairs.first() {
            Some(first) if pairs.iter().all(|p| p.direction() == first.direction()) => {
                Direction::Fixed(first.direction())
            }
            _ => Direction::Mixed,
        };
        ParallelCorpus { pairs, direction }
    }

    pub fn pairs(&self) -> &[SentencePair] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<SentencePair> {
        self.pairs
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Every pair translates out of English into a non-English language.
    pub fn is_en_to_xx(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| p.src_lang.is_english() && !p.tgt_lang.is_english())
    }
}

impl FromIterator<SentencePair> for ParallelCorpus {
    fn from_iter<I: IntoIterator<Item = SentencePair>>(iter: I) -> Self {
        ParallelCorpus::from_pairs(iter.into_iter().collect())
    }
}

/// Exact pair counts per language (see [`SentencePair::language`]).
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    counts: BTreeMap<LanguageTag, u64>,
    total: u64,
}

impl CorpusStats {
    pub fn from_counts(counts: impl IntoIterator<Item = (LanguageTag, u64)>) -> Self {
        let mut stats = CorpusStats::default();
        for (tag, n) in counts {
            stats.add(tag, n);
        }
        stats
    }

    pub fn add(&mut self, tag: LanguageTag, n: u64) {
        *self.counts.entry(tag).or_insert(0) += n;
        self.total += n;
    }

    pub fn count(&self, tag: LanguageTag) -> u64 {
        self.counts.get(&tag).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (LanguageTag, u64)> + '_ {
        self.counts.iter().map(|(t, n)| (*t, *n))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Per-language counts after [`reduce_highresource`] with the same
    /// threshold and factor.
    pub fn reduced(&self, threshold: u64, factor: f64) -> Result<CorpusStats> {
        check_reduction_params(threshold, factor)?;
        Ok(CorpusStats::from_counts(self.iter().map(|(t, n)| {
            (t, if n > threshold { retained_count(n, factor) } else { n })
        })))
    }
}

pub fn stats(corpus: &ParallelCorpus) -> CorpusStats {
    stats_of(corpus.pairs())
}

pub fn stats_of<'a>(pairs: impl IntoIterator<Item = &'a SentencePair>) -> CorpusStats {
    let mut counts: HashMap<LanguageTag, u64> = HashMap::new();
    for p in pairs {
        *counts.entry(p.language()).or_insert(0) += 1;
    }
    CorpusStats::from_counts(counts)
}

pub const DEFAULT_THRESHOLD: u64 = 10_000_000;
pub const DEFAULT_FACTOR: f64 = 0.5;

fn check_reduction_params(threshold: u64, factor: f64) -> Result<()> {
    if !(factor > 0.0 && factor <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "reduction factor {factor} outside (0, 1]"
        )));
    }
    if threshold == 0 {
        return Err(Error::InvalidParameter("reduction threshold must be > 0".into()));
    }
    Ok(())
}

/// `ceil(factor * n)`, treating products within float noise of an integer as
/// that integer (0.3 * 10 must give 3, not 4).
pub(crate) fn retained_count(n: u64, factor: f64) -> u64 {
    let x = factor * n as f64;
    let nearest = x.round();
    let kept = if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    (kept as u64).min(n)
}

/// Halves (by default) every language with strictly more than `threshold`
/// pairs, keeping a seeded uniform sample in original order.
pub fn reduce_highresource(
    corpus: &ParallelCorpus,
    threshold: u64,
    factor: f64,
    seed: u64,
) -> Result<ParallelCorpus> {
    check_reduction_params(threshold, factor)?;
    let mut by_lang: BTreeMap<LanguageTag, Vec<usize>> = BTreeMap::new();
    for (i, p) in corpus.pairs().iter().enumerate() {
        by_lang.entry(p.language()).or_default().push(i);
    }
    let mut keep = vec![true; corpus.len()];
    for (tag, indices) in &by_lang {
        let n = indices.len() as u64;
        if n <= threshold {
            continue;
        }
        let k = retained_count(n, factor) as usize;
        let mut rng = rng::stream(seed, "reduce", tag.to_string().as_bytes(), 0);
        for &i in indices {
            keep[i] = false;
        }
        for j in rand::seq::index::sample(&mut rng, indices.len(), k) {
            keep[indices[j]] = true;
        }
    }
    Ok(corpus
        .pairs()
        .iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then(|| p.clone()))
        .collect())
}

/// Swaps sides of every pair; `reverse(reverse(c)) == c`.
pub fn reverse(corpus: &ParallelCorpus) -> ParallelCorpus {
    ParallelCorpus {
        pairs: corpus.pairs().iter().map(SentencePair::reversed).collect(),
        direction: match corpus.direction() {
            Direction::Fixed(p) => Direction::Fixed(LanguagePair::new(p.tgt, p.src)),
            Direction::Mixed => Direction::Mixed,
        },
    }
}
