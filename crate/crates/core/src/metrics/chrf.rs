use std::collections::HashMap;
use std::hash::Hash;

use super::tokenize::{is_py_space, py_split};
use super::ChrfConfig;

/// Per-order `[hypothesis, reference, matched]` n-gram counts: character
/// orders first, then word orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChrfStats(pub Vec<[u64; 3]>);

impl ChrfStats {
    pub fn zero(orders: usize) -> Self {
        ChrfStats(vec![[0; 3]; orders])
    }

    pub fn merge(mut self, other: &ChrfStats) -> Self {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            for k in 0..3 {
                a[k] += b[k];
            }
        }
        self
    }
}

fn counts<K: Eq + Hash>(items: impl Iterator<Item = K>) -> HashMap<K, u32> {
    let mut map = HashMap::new();
    for k in items {
        *map.entry(k).or_insert(0) += 1;
    }
    map
}

fn match_stats<K: Eq + Hash>(hyp: &HashMap<K, u32>, reference: &HashMap<K, u32>) -> [u64; 3] {
    let mut matched = 0u64;
    let mut hyp_count = 0u64;
    for (ngram, &count) in hyp {
        hyp_count += count as u64;
        if let Some(&r) = reference.get(ngram) {
            matched += count.min(r) as u64;
        }
    }
    let ref_count: u64 = reference.values().map(|&c| c as u64).sum();
    // Hypothesis n-grams only count when the reference has any of this order.
    [
        if reference.is_empty() { 0 } else { hyp_count },
        ref_count,
        matched,
    ]
}

/// Splits a leading or trailing ASCII punctuation mark off each word
/// (only one side per word, trailing first).
pub(crate) fn split_punctuation(sentence: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for w in py_split(sentence) {
        let mut chars = w.chars();
        let first = chars.next().unwrap();
        let Some(last) = chars.next_back() else {
            out.push(w);
            continue;
        };
        if last.is_ascii_punctuation() {
            out.push(&w[..w.len() - last.len_utf8()]);
            out.push(&w[w.len() - last.len_utf8()..]);
        } else if first.is_ascii_punctuation() {
            out.push(&w[..first.len_utf8()]);
            out.push(&w[first.len_utf8()..]);
        } else {
            out.push(w);
        }
    }
    out
}

pub fn sentence_stats(hypothesis: &str, reference: &str, cfg: &ChrfConfig) -> ChrfStats {
    let (hyp, reference) = if cfg.lowercase {
        (hypothesis.to_lowercase(), reference.to_lowercase())
    } else {
        (hypothesis.to_string(), reference.to_string())
    };
    let chars = |s: &str| -> Vec<char> {
        if cfg.whitespace {
            s.chars().collect()
        } else {
            s.chars().filter(|&c| !is_py_space(c)).collect()
        }
    };
    let hyp_chars = chars(&hyp);
    let ref_chars = chars(&reference);
    let mut stats = Vec::with_capacity(cfg.char_order + cfg.word_order);
    for n in 1..=cfg.char_order {
        let h = counts(hyp_chars.windows(n));
        let r = counts(ref_chars.windows(n));
        stats.push(match_stats(&h, &r));
    }
    if cfg.word_order > 0 {
        let hyp_words = split_punctuation(&hyp);
        let ref_words = split_punctuation(&reference);
        for n in 1..=cfg.word_order {
            let h = counts(hyp_words.windows(n));
            let r = counts(ref_words.windows(n));
            stats.push(match_stats(&h, &r));
        }
    }
    ChrfStats(stats)
}

/// F-beta in [0, 100] over the orders with both hypothesis and reference
/// n-grams, or with epsilon smoothing when configured.
pub fn score_from_stats(stats: &ChrfStats, cfg: &ChrfConfig) -> f64 {
    const EPS: f64 = 1e-16;
    let factor = cfg.beta * cfg.beta;
    let mut smoothed = 0.0;
    let mut effective_order = 0usize;
    let (mut avg_prec, mut avg_rec) = (0.0, 0.0);
    for &[n_hyp, n_ref, n_match] in &stats.0 {
        let prec = if n_hyp > 0 {
            n_match as f64 / n_hyp as f64
        } else {
            EPS
        };
        let rec = if n_ref > 0 {
            n_match as f64 / n_ref as f64
        } else {
            EPS
        };
        let denom = factor * prec + rec;
        smoothed += if denom > 0.0 {
            (1.0 + factor) * prec * rec / denom
        } else {
            EPS
        };
        if n_hyp > 0 && n_ref > 0 {
            avg_prec += prec;
            avg_rec += rec;
            effective_order += 1;
        }
    }
    if cfg.eps_smoothing {
        return 100.0 * smoothed / stats.0.len() as f64;
    }
    if effective_order == 0 {
        return 0.0;
    }
    avg_prec /= effective_order as f64;
    avg_rec /= effective_order as f64;
    if avg_prec + avg_rec == 0.0 {
        return 0.0;
    }
    100.0 * (1.0 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec)
}
