//! Code-switching augmentation: English source words are replaced by
//! dictionary translations into an Indic language, producing mixed-language
//! sources paired with the untouched original target.

pub mod mixture;
pub mod seed;

pub use mixture::{build_pretraining_mixture, write_mixture, MixtureManifest};
pub use seed::{group_by_subset, seed_allocation, select_seed, SeedSubset, DEFAULT_SEED_BUDGET};

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::io::Record;
use crate::corpus::{Origin, ParallelCorpus, SentencePair, TsvWriter};
use crate::error::{Error, Result};
use crate::lang::LanguageTag;
use crate::lexicon::{fold_case, truncate_topk, BilingualLexicon, DEFAULT_TOP_K};
use crate::rng;

pub const DEFAULT_PROBABILITY: f64 = 0.3;

/// How the substitution language is picked for each sentence.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LanguageChoice {
    /// The pair's own target language.
    PairTarget,
    /// Uniformly among languages that have a lexicon, per sentence.
    RandomLanguage,
}

impl FromStr for LanguageChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pair-target" => Ok(LanguageChoice::PairTarget),
            "random-language" => Ok(LanguageChoice::RandomLanguage),
            _ => Err(Error::InvalidParameter(format!(
                "unknown mode {s:?}: expected `pair-target` or `random-language`"
            ))),
        }
    }
}

impl fmt::Display for LanguageChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LanguageChoice::PairTarget => "pair-target",
            LanguageChoice::RandomLanguage => "random-language",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct AugmentationPolicy {
    /// Chance that a dictionary-matched token is replaced.
    pub probability: f64,
    pub top_k: usize,
    pub mode: LanguageChoice,
    pub seed: u64,
}

impl Default for AugmentationPolicy {
    fn default() -> Self {
        AugmentationPolicy {
            probability: DEFAULT_PROBABILITY,
            top_k: DEFAULT_TOP_K,
            mode: LanguageChoice::RandomLanguage,
            seed: 0,
        }
    }
}

impl AugmentationPolicy {
    pub fn new(probability: f64, top_k: usize, mode: LanguageChoice, seed: u64) -> Result<Self> {
        let policy = AugmentationPolicy {
            probability,
            top_k,
            mode,
            seed,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.probability) {
            return Err(Error::InvalidParameter(format!(
                "replacement probability {} outside [0, 1]",
                self.probability
            )));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidParameter("top-k must be > 0".into()));
        }
        Ok(())
    }
}

/// Lexicons keyed by target language, each truncated to the policy's top-k.
#[derive(Clone, Debug, Default)]
pub struct LexiconSet {
    lexicons: BTreeMap<LanguageTag, BilingualLexicon>,
}

impl LexiconSet {
    pub fn new(lexicons: impl IntoIterator<Item = BilingualLexicon>, top_k: usize) -> Result<Self> {
        let mut set = LexiconSet::default();
        for lex in lexicons {
            if !lex.src_lang().is_english() {
                return Err(Error::Direction(format!(
                    "lexicon for {} is not English-centric",
                    lex.tgt_lang()
                )));
            }
            let lex = truncate_topk(&lex, top_k)?;
            set.lexicons.insert(lex.tgt_lang(), lex);
        }
        Ok(set)
    }

    pub fn get(&self, lang: LanguageTag) -> Option<&BilingualLexicon> {
        self.lexicons.get(&lang)
    }

    /// Lexicon-bearing languages in tag order.
    pub fn languages(&self) -> Vec<LanguageTag> {
        self.lexicons.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.lexicons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lexicons.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    /// Whitespace-token position in the source.
    pub token: usize,
    /// The matched word, punctuation stripped, as written in the source.
    pub original: String,
    pub replacement: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Augmentation {
    pub pair: SentencePair,
    /// Language whose lexicon supplied the replacements.
    pub language: LanguageTag,
    pub replacements: Vec<Replacement>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SentenceOutcome {
    pub augmented: Option<Augmentation>,
    /// Tokens found in the chosen lexicon.
    pub matched: u64,
    pub replaced: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct AugmentStats {
    pub pairs_seen: u64,
    pub pairs_augmented: u64,
    pub tokens_matched: u64,
    pub tokens_replaced: u64,
}

impl AugmentStats {
    fn add(&mut self, o: &SentenceOutcome) {
        self.pairs_seen += 1;
        self.pairs_augmented += o.augmented.is_some() as u64;
        self.tokens_matched += o.matched;
        self.tokens_replaced += o.replaced;
    }

    /// Replaced over dictionary-matched tokens.
    pub fn replacement_rate(&self) -> f64 {
        if self.tokens_matched == 0 {
            0.0
        } else {
            self.tokens_replaced as f64 / self.tokens_matched as f64
        }
    }
}

/// Byte spans of whitespace-separated tokens.
fn token_spans(text: &str) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut start = None;
    let mut chars = text.char_indices().chain(std::iter::once((text.len(), ' ')));
    std::iter::from_fn(move || {
        for (i, c) in chars.by_ref() {
            match (start, c.is_whitespace()) {
                (None, false) => start = Some(i),
                (Some(s), true) => {
                    start = None;
                    return Some((s, i));
                }
                _ => {}
            }
        }
        None
    })
}

/// The word inside a token with leading/trailing punctuation removed, as a
/// byte range relative to the token.
fn word_core(token: &str) -> Option<(usize, usize)> {
    let start = token.char_indices().find(|(_, c)| c.is_alphanumeric())?.0;
    let (last, c) = token
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_alphanumeric())?;
    Some((start, last + c.len_utf8()))
}

/// Substitutes dictionary words in one English-source pair.
///
/// Returns an augmented pair only when at least one token was replaced.
pub fn augment_sentence<R: Rng>(
    pair: &SentencePair,
    lexicons: &LexiconSet,
    policy: &AugmentationPolicy,
    rng: &mut R,
) -> Result<SentenceOutcome> {
    if !pair.src_lang.is_english() {
        return Err(Error::Direction(format!(
            "augmentation needs an English source, got {}",
            pair.src_lang
        )));
    }
    let language = match policy.mode {
        LanguageChoice::PairTarget => pair.tgt_lang,
        LanguageChoice::RandomLanguage => {
            let langs = &lexicons.lexicons;
            if langs.is_empty() {
                return Ok(SentenceOutcome::default());
            }
            *langs.keys().nth(rng.gen_range(0..langs.len())).unwrap()
        }
    };
    let Some(lexicon) = lexicons.get(language) else {
        return Ok(SentenceOutcome::default());
    };

    let source = pair.source.as_str();
    let mut out = String::with_capacity(source.len() + 16);
    let mut copied = 0;
    let mut replacements = Vec::new();
    let mut matched = 0;
    for (token_idx, (ts, te)) in token_spans(source).enumerate() {
        let Some((cs, ce)) = word_core(&source[ts..te]) else {
            continue;
        };
        let (ws, we) = (ts + cs, ts + ce);
        let word = &source[ws..we];
        let Some(entry) = lexicon.get(&fold_case(word)) else {
            continue;
        };
        if entry.multiword {
            continue;
        }
        matched += 1;
        if rng.gen::<f64>() < policy.probability {
            let choice = &entry.targets[rng.gen_range(0..entry.targets.len())];
            out.push_str(&source[copied..ws]);
            out.push_str(choice);
            copied = we;
            replacements.push(Replacement {
                token: token_idx,
                original: word.to_string(),
                replacement: choice.clone(),
            });
        }
    }
    if replacements.is_empty() {
        return Ok(SentenceOutcome {
            augmented: None,
            matched,
            replaced: 0,
        });
    }
    out.push_str(&source[copied..]);
    let replaced = replacements.len() as u64;
    let augmented = SentencePair {
        source: out,
        target: pair.target.clone(),
        src_lang: pair.src_lang,
        tgt_lang: pair.tgt_lang,
        subset: pair.subset.clone(),
        origin: Origin::Aug,
        repetition: pair.repetition,
    };
    Ok(SentenceOutcome {
        augmented: Some(Augmentation {
            pair: augmented,
            language,
            replacements,
        }),
        matched,
        replaced,
    })
}

/// Augments the pair at `index` with its own derived random stream.
pub fn augment_indexed(
    index: u64,
    pair: &SentencePair,
    lexicons: &LexiconSet,
    policy: &AugmentationPolicy,
) -> Result<SentenceOutcome> {
    let mut rng = rng::stream(policy.seed, "augment", b"", index);
    augment_sentence(pair, lexicons, policy, &mut rng)
}

fn augment_batch(
    offset: u64,
    pairs: &[SentencePair],
    lexicons: &LexiconSet,
    policy: &AugmentationPolicy,
) -> Result<Vec<SentenceOutcome>> {
    pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| augment_indexed(offset + i as u64, p, lexicons, policy))
        .collect()
}

/// Augments every pair of an English-source corpus; pairs without any
/// replacement produce no output.
pub fn augment_corpus(
    corpus: &ParallelCorpus,
    lexicons: &LexiconSet,
    policy: &AugmentationPolicy,
) -> Result<(ParallelCorpus, AugmentStats)> {
    policy.validate()?;
    let outcomes = augment_batch(0, corpus.pairs(), lexicons, policy)?;
    let mut stats = AugmentStats::default();
    let mut out = Vec::new();
    for o in outcomes {
        stats.add(&o);
        if let Some(a) = o.augmented {
            out.push(a.pair);
        }
    }
    Ok((ParallelCorpus::from_pairs(out), stats))
}

pub const STREAM_CHUNK: usize = 1 << 15;

/// Streaming form of [`augment_corpus`]: reads pairs in fixed-size chunks,
/// augments each chunk in parallel and writes results in input order.
/// Output is byte-identical to writing the result of `augment_corpus`.
pub fn augment_stream<W: Write>(
    records: impl Iterator<Item = Result<Record>>,
    lexicons: &LexiconSet,
    policy: &AugmentationPolicy,
    writer: &mut TsvWriter<W>,
    chunk_size: usize,
) -> Result<AugmentStats> {
    policy.validate()?;
    let chunk_size = chunk_size.max(1);
    let mut stats = AugmentStats::default();
    let mut chunk = Vec::with_capacity(chunk_size);
    let mut records = records.peekable();
    while records.peek().is_some() {
        chunk.clear();
        while chunk.len() < chunk_size {
            match records.next() {
                Some(r) => {
                    if let Record::Pair(p) = r? {
                        chunk.push(p);
                    }
                }
                None => break,
            }
        }
        for o in augment_batch(stats.pairs_seen, &chunk, lexicons, policy)? {
            stats.add(&o);
            if let Some(a) = o.augmented {
                writer
                    .write(&a.pair)
                    .map_err(|e| Error::io("<augment output>", e))?;
            }
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::tag;
    use crate::lang::ENGLISH;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn pair(src: &str, tgt: &str, lang: &str) -> SentencePair {
        SentencePair::new(src, tgt, ENGLISH, tag(lang), Arc::from("general")).unwrap()
    }

    fn hindi_lexicon() -> LexiconSet {
        LexiconSet::new(
            [BilingualLexicon::from_pairs(
                tag("hin_Deva"),
                [("dog", "कुत्ता"), ("cat", "बिल्ली"), ("cat", "मांजर"), ("ice cream", "आइसक्रीम")],
            )],
            DEFAULT_TOP_K,
        )
        .unwrap()
    }

    fn policy(p: f64, mode: LanguageChoice) -> AugmentationPolicy {
        AugmentationPolicy::new(p, DEFAULT_TOP_K, mode, 11).unwrap()
    }

    #[test]
    fn spans_and_cores() {
        let spans: Vec<_> = token_spans("  a bc\td ").collect();
        assert_eq!(spans, vec![(2, 3), (4, 6), (7, 8)]);
        assert_eq!(word_core("\"dog,\""), Some((1, 4)));
        assert_eq!(word_core("don't"), Some((0, 5)));
        assert_eq!(word_core("..."), None);
    }

    #[test]
    fn zero_probability_never_augments() {
        let lex = hindi_lexicon();
        let p = policy(0.0, LanguageChoice::PairTarget);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let o = augment_sentence(&pair("the dog and cat", "x", "hin_Deva"), &lex, &p, &mut rng).unwrap();
            assert!(o.augmented.is_none());
            assert_eq!(o.matched, 2);
        }
    }

    #[test]
    fn forced_replacement() {
        let lex = hindi_lexicon();
        let p = policy(1.0, LanguageChoice::PairTarget);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let src = pair("the dog", "target text", "hin_Deva");
        let o = augment_sentence(&src, &lex, &p, &mut rng).unwrap();
        let a = o.augmented.unwrap();
        assert_eq!(a.pair.source, "the कुत्ता");
        assert_eq!(a.pair.target, "target text");
        assert_eq!(a.pair.origin, Origin::Aug);
        assert_eq!(a.replacements[0].token, 1);
    }

    #[test]
    fn punctuation_and_case_preserved_around_replacement() {
        let lex = hindi_lexicon();
        let p = policy(1.0, LanguageChoice::PairTarget);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let o = augment_sentence(&pair("\"Dog,\"  said  the CAT.", "x", "hin_Deva"), &lex, &p, &mut rng)
            .unwrap();
        let a = o.augmented.unwrap();
        assert!(a.pair.source.starts_with("\"कुत्ता,\"  said  the "));
        assert!(a.pair.source.ends_with('.'));
        assert_eq!(a.replacements.len(), 2);
        assert_eq!(a.replacements[1].original, "CAT");
        assert!(["बिल्ली", "मांजर"].contains(&a.replacements[1].replacement.as_str()));
    }

    #[test]
    fn multiword_entries_skipped() {
        let lex = hindi_lexicon();
        let p = policy(1.0, LanguageChoice::PairTarget);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let o = augment_sentence(&pair("ice cream", "x", "hin_Deva"), &lex, &p, &mut rng).unwrap();
        assert!(o.augmented.is_none());
        assert_eq!(o.matched, 0);
    }

    #[test]
    fn non_english_source_rejected() {
        let lex = hindi_lexicon();
        let p = policy(1.0, LanguageChoice::PairTarget);
        let bad = pair("a", "b", "hin_Deva").reversed();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            augment_sentence(&bad, &lex, &p, &mut rng),
            Err(Error::Direction(_))
        ));
    }

    #[test]
    fn no_lexicon_passthrough() {
        let corpus = ParallelCorpus::from_pairs(vec![
            pair("the dog", "x", "tam_Taml"),
            pair("a cat", "y", "ben_Beng"),
        ]);
        let (out, stats) =
            augment_corpus(&corpus, &hindi_lexicon(), &policy(1.0, LanguageChoice::PairTarget)).unwrap();
        assert!(out.is_empty());
        assert_eq!(stats.pairs_seen, 2);
        let (out, _) =
            augment_corpus(&corpus, &LexiconSet::default(), &policy(1.0, LanguageChoice::RandomLanguage))
                .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn random_language_mode_uses_lexicon_languages() {
        let lex = LexiconSet::new(
            [
                BilingualLexicon::from_pairs(tag("hin_Deva"), [("dog", "कुत्ता")]),
                BilingualLexicon::from_pairs(tag("ben_Beng"), [("dog", "কুকুর")]),
            ],
            DEFAULT_TOP_K,
        )
        .unwrap();
        let corpus: ParallelCorpus = (0..200).map(|i| pair(&format!("dog {i}"), "t", "tam_Taml")).collect();
        let (out, stats) = augment_corpus(&corpus, &lex, &policy(1.0, LanguageChoice::RandomLanguage)).unwrap();
        assert_eq!(stats.pairs_augmented, 200);
        let hindi = out.pairs().iter().filter(|p| p.source.starts_with("कुत्ता")).count();
        let bengali = out.pairs().iter().filter(|p| p.source.starts_with("কুকুর")).count();
        assert_eq!(hindi + bengali, 200);
        assert!(hindi > 60 && bengali > 60, "{hindi} / {bengali}");
    }

    #[test]
    fn every_pair_augmented_at_full_probability() {
        let corpus: ParallelCorpus = (0..1000)
            .map(|i| pair(&format!("sentence {i} with a dog"), &format!("t{i}"), "hin_Deva"))
            .collect();
        let p = policy(1.0, LanguageChoice::PairTarget);
        let (out, stats) = augment_corpus(&corpus, &hindi_lexicon(), &p).unwrap();
        assert_eq!(out.len(), 1000);
        assert_eq!(stats.pairs_augmented, 1000);
        assert_eq!(stats.tokens_replaced, 1000);
        for (a, o) in out.pairs().iter().zip(corpus.pairs()) {
            assert_eq!(a.target, o.target);
        }
    }

    #[test]
    fn deterministic_and_stream_equivalent() {
        let corpus: ParallelCorpus = (0..500)
            .map(|i| pair(&format!("dog {i} cat"), &format!("t{i}"), "hin_Deva"))
            .collect();
        let p = policy(0.3, LanguageChoice::PairTarget);
        let lex = hindi_lexicon();
        let (a, sa) = augment_corpus(&corpus, &lex, &p).unwrap();
        let (b, _) = augment_corpus(&corpus, &lex, &p).unwrap();
        assert_eq!(a, b);

        let mut expected = TsvWriter::new(Vec::new(), crate::corpus::TsvLayout::Corpus);
        for pair in a.pairs() {
            expected.write(pair).unwrap();
        }
        let expected = expected.finish().unwrap();
        let records = corpus.pairs().iter().cloned().map(|p| Ok(Record::Pair(p)));
        let mut w = TsvWriter::new(Vec::new(), crate::corpus::TsvLayout::Corpus);
        let ss = augment_stream(records, &lex, &p, &mut w, 37).unwrap();
        assert_eq!(w.finish().unwrap(), expected);
        assert_eq!(ss, sa);
    }

    #[test]
    fn policy_validation() {
        assert!(AugmentationPolicy::new(1.5, 10, LanguageChoice::PairTarget, 0).is_err());
        assert!(AugmentationPolicy::new(-0.1, 10, LanguageChoice::PairTarget, 0).is_err());
        assert!(AugmentationPolicy::new(0.3, 0, LanguageChoice::PairTarget, 0).is_err());
        assert_eq!("pair-target".parse::<LanguageChoice>().unwrap(), LanguageChoice::PairTarget);
        assert!("other".parse::<LanguageChoice>().is_err());
    }
}
