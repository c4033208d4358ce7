use std::collections::HashMap;

use super::tokenize::{is_py_space, py_split, tokenize_13a};
use super::{BleuConfig, Smoothing, Tokenizer};

/// Sufficient statistics for corpus BLEU. Sums of per-sentence stats give
/// the corpus stats, so sentences can be processed in any order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BleuStats {
    pub sys_len: u64,
    pub ref_len: u64,
    pub correct: Vec<u64>,
    pub total: Vec<u64>,
}

impl BleuStats {
    pub fn zero(max_order: usize) -> Self {
        BleuStats {
            sys_len: 0,
            ref_len: 0,
            correct: vec![0; max_order],
            total: vec![0; max_order],
        }
    }

    pub fn merge(mut self, other: &BleuStats) -> Self {
        self.sys_len += other.sys_len;
        self.ref_len += other.ref_len;
        for (a, b) in self.correct.iter_mut().zip(&other.correct) {
            *a += b;
        }
        for (a, b) in self.total.iter_mut().zip(&other.total) {
            *a += b;
        }
        self
    }
}

fn preprocess(sentence: &str, cfg: &BleuConfig) -> String {
    let lowered;
    let mut s = sentence;
    if cfg.lowercase {
        lowered = s.to_lowercase();
        s = &lowered;
    }
    let s = s.trim_end_matches(is_py_space);
    match cfg.tokenizer {
        Tokenizer::ThirteenA => tokenize_13a(s),
        Tokenizer::None => s.to_string(),
    }
}

fn ngram_counts<'a>(tokens: &'a [&'a str], max_order: usize) -> HashMap<&'a [&'a str], u32> {
    let mut counts = HashMap::new();
    for n in 1..=max_order {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

pub fn sentence_stats(hypothesis: &str, reference: &str, cfg: &BleuConfig) -> BleuStats {
    let hyp = preprocess(hypothesis, cfg);
    let reference = preprocess(reference, cfg);
    let hyp_tokens: Vec<&str> = py_split(&hyp).collect();
    let ref_tokens: Vec<&str> = py_split(&reference).collect();
    let ref_counts = ngram_counts(&ref_tokens, cfg.max_order);
    let mut stats = BleuStats::zero(cfg.max_order);
    stats.sys_len = hyp_tokens.len() as u64;
    stats.ref_len = ref_tokens.len() as u64;
    for (ngram, count) in ngram_counts(&hyp_tokens, cfg.max_order) {
        let n = ngram.len() - 1;
        stats.total[n] += count as u64;
        if let Some(&r) = ref_counts.get(ngram) {
            stats.correct[n] += count.min(r) as u64;
        }
    }
    stats
}

fn floored_ln(x: f64) -> f64 {
    if x == 0.0 {
        -9_999_999_999.0
    } else {
        x.ln()
    }
}

/// BLEU in [0, 100] from corpus statistics.
pub fn score_from_stats(stats: &BleuStats, cfg: &BleuConfig) -> f64 {
    let max_order = cfg.max_order;
    let (sys_len, ref_len) = (stats.sys_len as f64, stats.ref_len as f64);
    let bp = if stats.sys_len < stats.ref_len {
        if stats.sys_len > 0 {
            (1.0 - ref_len / sys_len).exp()
        } else {
            0.0
        }
    } else {
        1.0
    };
    if stats.correct.iter().all(|&c| c == 0) {
        return 0.0;
    }
    let mut correct: Vec<f64> = stats.correct.iter().map(|&c| c as f64).collect();
    let mut total: Vec<f64> = stats.total.iter().map(|&t| t as f64).collect();
    let mut precisions = vec![0.0; max_order];
    let mut smooth_mteval = 1.0;
    let mut eff_order = max_order;
    for n in 1..=max_order {
        if let Smoothing::AddK(k) = cfg.smoothing {
            if n > 1 {
                correct[n - 1] += k;
                total[n - 1] += k;
            }
        }
        if total[n - 1] == 0.0 {
            break;
        }
        if cfg.effective_order {
            eff_order = n;
        }
        if correct[n - 1] == 0.0 {
            match cfg.smoothing {
                Smoothing::Exp => {
                    smooth_mteval *= 2.0;
                    precisions[n - 1] = 100.0 / (smooth_mteval * total[n - 1]);
                }
                Smoothing::Floor(v) => precisions[n - 1] = 100.0 * v / total[n - 1],
                _ => {}
            }
        } else {
            precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1];
        }
    }
    let log_sum: f64 = precisions[..eff_order].iter().map(|&p| floored_ln(p)).sum();
    bp * (log_sum / eff_order as f64).exp()
}
