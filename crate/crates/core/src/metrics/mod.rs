//! Corpus-level BLEU and chrF/chrF++, matching the reference implementation
//! used for published scores.

pub mod bleu;
pub mod chrf;
pub mod tokenize;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use bleu::BleuStats;
pub use chrf::ChrfStats;
pub use tokenize::tokenize_13a;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Smoothing {
    None,
    Floor(f64),
    AddK(f64),
    Exp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tokenizer {
    ThirteenA,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BleuConfig {
    pub max_order: usize,
    pub tokenizer: Tokenizer,
    pub smoothing: Smoothing,
    pub lowercase: bool,
    pub effective_order: bool,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig {
            max_order: 4,
            tokenizer: Tokenizer::ThirteenA,
            smoothing: Smoothing::Exp,
            lowercase: false,
            effective_order: false,
        }
    }
}

impl BleuConfig {
    pub fn signature(&self) -> String {
        let tok = match self.tokenizer {
            Tokenizer::ThirteenA => "13a",
            Tokenizer::None => "none",
        };
        let smooth = match self.smoothing {
            Smoothing::None => "none".to_string(),
            Smoothing::Exp => "exp".to_string(),
            Smoothing::Floor(v) => format!("floor[{v}]"),
            Smoothing::AddK(k) => format!("add-k[{k}]"),
        };
        format!(
            "BLEU|nrefs:1|case:{}|eff:{}|n:{}|tok:{tok}|smooth:{smooth}",
            case(self.lowercase),
            yes_no(self.effective_order),
            self.max_order,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChrfConfig {
    pub char_order: usize,
    pub word_order: usize,
    pub beta: f64,
    pub lowercase: bool,
    pub whitespace: bool,
    pub eps_smoothing: bool,
}

impl ChrfConfig {
    pub fn chrf() -> Self {
        ChrfConfig {
            char_order: 6,
            word_order: 0,
            beta: 2.0,
            lowercase: false,
            whitespace: false,
            eps_smoothing: false,
        }
    }

    pub fn chrf_plus_plus() -> Self {
        ChrfConfig {
            word_order: 2,
            ..Self::chrf()
        }
    }

    pub fn signature(&self) -> String {
        let pluses = "+".repeat(self.word_order);
        format!(
            "chrF{}{pluses}|nrefs:1|case:{}|eff:{}|nc:{}|nw:{}|space:{}",
            self.beta,
            case(self.lowercase),
            yes_no(!self.eps_smoothing),
            self.char_order,
            self.word_order,
            yes_no(self.whitespace),
        )
    }
}

impl Default for ChrfConfig {
    fn default() -> Self {
        Self::chrf()
    }
}

fn case(lower: bool) -> &'static str {
    if lower {
        "lc"
    } else {
        "mixed"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Score {
    pub value: f64,
    pub signature: String,
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2} ({})", self.value, self.signature)
    }
}

fn check<S: AsRef<str>>(hyps: &[S], refs: &[S]) -> Result<()> {
    if hyps.len() != refs.len() {
        return Err(Error::LengthMismatch {
            hypotheses: hyps.len(),
            references: refs.len(),
        });
    }
    if hyps.is_empty() {
        return Err(Error::EmptyInput("no hypotheses to score".into()));
    }
    Ok(())
}

pub fn bleu_stats<S: AsRef<str> + Sync>(hyps: &[S], refs: &[S], cfg: &BleuConfig) -> Result<BleuStats> {
    check(hyps, refs)?;
    let per: Vec<BleuStats> = hyps
        .par_iter()
        .zip(refs)
        .map(|(h, r)| bleu::sentence_stats(h.as_ref(), r.as_ref(), cfg))
        .collect();
    Ok(per
        .iter()
        .fold(BleuStats::zero(cfg.max_order), |acc, s| acc.merge(s)))
}

pub fn chrf_stats<S: AsRef<str> + Sync>(hyps: &[S], refs: &[S], cfg: &ChrfConfig) -> Result<ChrfStats> {
    check(hyps, refs)?;
    let per: Vec<ChrfStats> = hyps
        .par_iter()
        .zip(refs)
        .map(|(h, r)| chrf::sentence_stats(h.as_ref(), r.as_ref(), cfg))
        .collect();
    Ok(per.iter().fold(
        ChrfStats::zero(cfg.char_order + cfg.word_order),
        |acc, s| acc.merge(s),
    ))
}

/// Corpus BLEU with a single reference per hypothesis.
pub fn bleu<S: AsRef<str> + Sync>(hyps: &[S], refs: &[S], cfg: &BleuConfig) -> Result<Score> {
    let stats = bleu_stats(hyps, refs, cfg)?;
    Ok(Score {
        value: bleu::score_from_stats(&stats, cfg),
        signature: cfg.signature(),
    })
}

/// Corpus chrF (or chrF++ when `word_order > 0`).
pub fn chrf<S: AsRef<str> + Sync>(hyps: &[S], refs: &[S], cfg: &ChrfConfig) -> Result<Score> {
    let stats = chrf_stats(hyps, refs, cfg)?;
    Ok(Score {
        value: chrf::score_from_stats(&stats, cfg),
        signature: cfg.signature(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(h: &[&str], r: &[&str]) -> f64 {
        bleu(h, r, &BleuConfig::default()).unwrap().value
    }

    fn c(h: &[&str], r: &[&str], cfg: ChrfConfig) -> f64 {
        chrf(h, r, &cfg).unwrap().value
    }

    #[test]
    fn identical_is_perfect() {
        let s = ["the cat sat on the mat .", "एक दो तीन चार"];
        assert!((b(&s, &s) - 100.0).abs() < 1e-9);
        assert!((c(&s, &s, ChrfConfig::chrf()) - 100.0).abs() < 1e-9);
        assert!((c(&s, &s, ChrfConfig::chrf_plus_plus()) - 100.0).abs() < 1e-9);
    }

    #[test]
    fn disjoint_is_zero() {
        assert_eq!(b(&["aaa bbb"], &["ccc ddd"]), 0.0);
        assert_eq!(c(&["aaa bbb"], &["ccc ddd"], ChrfConfig::chrf()), 0.0);
    }

    #[test]
    fn hand_computed_bleu() {
        // hyp 4 tokens, ref 4 tokens; unigrams 3/4, bigrams 1/3, trigrams 0/2,
        // 4-grams 0/1 -> exp smoothing gives 100/(2*2) and 100/(4*1).
        let got = b(&["a b c d"], &["a b x c"]);
        let p = [75.0f64, 100.0 / 3.0, 25.0, 25.0];
        let want = (p.iter().map(|v| v.ln()).sum::<f64>() / 4.0).exp();
        assert!((got - want).abs() < 1e-9, "{got} {want}");
    }

    #[test]
    fn brevity_penalty() {
        let got = b(&["a b c d"], &["a b c d e f"]);
        assert!((got - 100.0 * (-0.5f64).exp()).abs() < 1e-9);
        // No 4-grams in the hypothesis: the zero precision floors the score.
        assert!(b(&["a b c"], &["a b c"]) < 1e-9);
    }

    #[test]
    fn recall_weighted_more() {
        // Short hypothesis: precision 1, recall low. Long hypothesis: mirror.
        let short = c(&["abcdef"], &["abcdefghijkl"], ChrfConfig::chrf());
        let long = c(&["abcdefghijkl"], &["abcdef"], ChrfConfig::chrf());
        assert!(long > short);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            bleu(&["a"], &["a", "b"], &BleuConfig::default()),
            Err(Error::LengthMismatch { hypotheses: 1, references: 2 })
        ));
        let empty: [&str; 0] = [];
        assert!(matches!(chrf(&empty, &empty, &ChrfConfig::chrf()), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn word_order_matters() {
        let h = ["the cat sat"];
        let r = ["cat the sat"];
        assert_ne!(c(&h, &r, ChrfConfig::chrf()), c(&h, &r, ChrfConfig::chrf_plus_plus()));
    }

    #[test]
    fn signatures() {
        assert_eq!(
            BleuConfig::default().signature(),
            "BLEU|nrefs:1|case:mixed|eff:no|n:4|tok:13a|smooth:exp"
        );
        assert_eq!(
            ChrfConfig::chrf_plus_plus().signature(),
            "chrF2++|nrefs:1|case:mixed|eff:yes|nc:6|nw:2|space:no"
        );
    }

    proptest! {
        #[test]
        fn corruption_never_helps(len in 1usize..30, at in 0usize..30, extra in 0usize..3) {
            let words: Vec<String> = (0..len).map(|i| format!("w{i}")).collect();
            let reference = words.join(" ");
            let mut bad = words.clone();
            bad[at % len] = "zzz".into();
            let others: Vec<String> = (0..extra).map(|i| format!("x{i} y{i} z{i}")).collect();
            let mut h = others.clone();
            let mut r = others;
            h.push(words.join(" "));
            r.push(reference.clone());
            let clean = bleu(&h, &r, &BleuConfig::default()).unwrap().value;
            *h.last_mut().unwrap() = bad.join(" ");
            let dirty = bleu(&h, &r, &BleuConfig::default()).unwrap().value;
            prop_assert!(dirty <= clean);
        }

        #[test]
        fn bounded_and_order_free(
            lines in proptest::collection::vec(("[a-d ]{0,12}", "[a-d ]{0,12}"), 1..8),
            rot in 0usize..8,
        ) {
            let h: Vec<String> = lines.iter().map(|l| l.0.clone()).collect();
            let r: Vec<String> = lines.iter().map(|l| l.1.clone()).collect();
            let k = rot % h.len();
            let mut h2 = h.clone();
            let mut r2 = r.clone();
            h2.rotate_left(k);
            r2.rotate_left(k);
            for cfg in [ChrfConfig::chrf(), ChrfConfig::chrf_plus_plus()] {
                let a = chrf(&h, &r, &cfg).unwrap().value;
                prop_assert!((0.0..=100.0 + 1e-9).contains(&a));
                prop_assert_eq!(a, chrf(&h2, &r2, &cfg).unwrap().value);
            }
            let a = bleu(&h, &r, &BleuConfig::default()).unwrap().value;
            prop_assert!((0.0..=100.0 + 1e-9).contains(&a));
            prop_assert_eq!(a, bleu(&h2, &r2, &BleuConfig::default()).unwrap().value);
        }
    }
}
