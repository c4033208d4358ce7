#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn read_lines(rel: &str) -> Vec<String> {
    std::fs::read_to_string(fixture(rel))
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}

pub struct OracleRow {
    pub name: String,
    pub lines: Vec<usize>,
    pub bleu: f64,
    pub chrf: f64,
    pub chrfpp: f64,
}

/// Rows of the recorded reference scores; line indices are 1-based.
pub fn oracle_rows() -> Vec<OracleRow> {
    read_lines("metric_suite/oracle.tsv")
        .into_iter()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            OracleRow {
                name: f[0].to_string(),
                lines: f[1].split(',').map(|i| i.parse().unwrap()).collect(),
                bleu: f[2].parse().unwrap(),
                chrf: f[3].parse().unwrap(),
                chrfpp: f[4].parse().unwrap(),
            }
        })
        .collect()
}

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use mtprep::corpus::{ParallelCorpus, SentencePair};
use mtprep::lang::{parse_tag, LanguageTag, ENGLISH};
use mtprep::lexicon::BilingualLexicon;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn tag(s: &str) -> LanguageTag {
    parse_tag(s).unwrap()
}

pub fn en_pair(lang: LanguageTag, source: String, target: String, subset: &Arc<str>) -> SentencePair {
    SentencePair::new(source, target, ENGLISH, lang, subset.clone()).unwrap()
}

/// English-source corpus with `n` pairs per language, sources unique.
pub fn synthetic(counts: &[(LanguageTag, u64)]) -> ParallelCorpus {
    let subset: Arc<str> = Arc::from("general");
    counts
        .iter()
        .flat_map(|&(lang, n)| {
            let subset = subset.clone();
            (0..n).map(move |i| en_pair(lang, format!("s{i} {lang}"), format!("t{i}"), &subset))
        })
        .collect()
}

pub const DICT_WORDS: usize = 200;

pub fn dict_word(i: usize) -> String {
    format!("word{i}")
}

/// Lexicon with 1 to 3 translations per dictionary word.
pub fn lexicon_for(lang: LanguageTag, marker: &str) -> BilingualLexicon {
    let mut pairs = Vec::new();
    for i in 0..DICT_WORDS {
        for k in 0..=(i % 3) {
            pairs.push((dict_word(i), format!("{marker}{i}x{k}")));
        }
    }
    BilingualLexicon::from_pairs(lang, pairs)
}

/// MUSE-format text of [`lexicon_for`].
pub fn muse_text(marker: &str) -> String {
    let mut s = String::new();
    for i in 0..DICT_WORDS {
        for k in 0..=(i % 3) {
            s.push_str(&format!("{} {marker}{i}x{k}\n", dict_word(i)));
        }
    }
    s
}

/// Eight-token English sentence, about half dictionary words, some
/// capitalised or wrapped in punctuation.
pub fn sentence(rng: &mut ChaCha8Rng) -> String {
    let mut toks = Vec::with_capacity(8);
    for _ in 0..8 {
        let mut t = if rng.gen_bool(0.5) {
            dict_word(rng.gen_range(0..DICT_WORDS))
        } else {
            format!("filler{}", rng.gen_range(0..500))
        };
        match rng.gen_range(0..10) {
            0 => t = format!("{t},"),
            1 => t = format!("({t})"),
            2 => t = t[..1].to_uppercase() + &t[1..],
            _ => {}
        }
        toks.push(t);
    }
    toks.join(" ")
}

pub fn sentence_corpus(n: usize, langs: &[LanguageTag], seed: u64) -> ParallelCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subset: Arc<str> = Arc::from("general");
    (0..n)
        .map(|i| {
            let lang = langs[i % langs.len()];
            en_pair(lang, sentence(&mut rng), format!("लक्ष्य वाक्य {i}"), &subset)
        })
        .collect()
}

pub fn write_file(path: &Path, text: &str) {
    std::fs::File::create(path).unwrap().write_all(text.as_bytes()).unwrap();
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mtprep")
}

/// Runs the binary with `PIPELINE_CONFIG` unset; panics on failure.
pub fn run_bin(args: &[&str]) -> String {
    let out = Command::new(bin())
        .args(args)
        .env_remove("PIPELINE_CONFIG")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "mtprep {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}
