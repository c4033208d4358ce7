//! English-centric bilingual lexicons in MUSE (whitespace-separated) and
//! GATITOS (tab-separated) formats.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{LanguageTag, ENGLISH};

pub const DEFAULT_TOP_K: usize = 4000;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LexiconFormat {
    Muse,
    Gatitos,
}

impl FromStr for LexiconFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "muse" => Ok(LexiconFormat::Muse),
            "gatitos" | "tsv" => Ok(LexiconFormat::Gatitos),
            _ => Err(Error::InvalidParameter(format!(
                "unknown lexicon format {s:?}: expected `muse` or `gatitos`"
            ))),
        }
    }
}

impl fmt::Display for LexiconFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LexiconFormat::Muse => "muse",
            LexiconFormat::Gatitos => "gatitos",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconEntry {
    /// Case-folded source word.
    pub source: String,
    /// Translations in first-seen order, verbatim.
    pub targets: Vec<String>,
    /// Source side contains whitespace; skipped by the augmenter.
    pub multiword: bool,
}

#[derive(Clone, Debug)]
pub struct BilingualLexicon {
    src_lang: LanguageTag,
    tgt_lang: LanguageTag,
    entries: Vec<LexiconEntry>,
    index: HashMap<String, usize>,
    top_k: Option<usize>,
}

impl PartialEq for BilingualLexicon {
    fn eq(&self, other: &Self) -> bool {
        self.src_lang == other.src_lang
            && self.tgt_lang == other.tgt_lang
            && self.entries == other.entries
            && self.top_k == other.top_k
    }
}

/// A loaded lexicon plus the 1-based line numbers of malformed lines.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub lexicon: BilingualLexicon,
    pub skipped_lines: Vec<u64>,
}

pub fn fold_case(word: &str) -> String {
    word.to_lowercase()
}

impl BilingualLexicon {
    /// Builds an English-to-`tgt_lang` lexicon from `(source, target)` pairs,
    /// merging repeated source words.
    pub fn from_pairs<S: AsRef<str>, T: Into<String>>(
        tgt_lang: LanguageTag,
        pairs: impl IntoIterator<Item = (S, T)>,
    ) -> Self {
        let mut lex = BilingualLexicon {
            src_lang: ENGLISH,
            tgt_lang,
            entries: Vec::new(),
            index: HashMap::new(),
            top_k: None,
        };
        for (s, t) in pairs {
            lex.insert(s.as_ref(), t.into());
        }
        lex
    }

    fn insert(&mut self, source: &str, target: String) {
        let key = fold_case(source);
        match self.index.get(&key) {
            Some(&i) => {
                let targets = &mut self.entries[i].targets;
                if !targets.contains(&target) {
                    targets.push(target);
                }
            }
            None => {
                self.index.insert(key.clone(), self.entries.len());
                self.entries.push(LexiconEntry {
                    multiword: key.split_whitespace().nth(1).is_some(),
                    source: key,
                    targets: vec![target],
                });
            }
        }
    }

    pub fn src_lang(&self) -> LanguageTag {
        self.src_lang
    }

    pub fn tgt_lang(&self) -> LanguageTag {
        self.tgt_lang
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Truncation bound applied by [`truncate_topk`], if any.
    pub fn top_k(&self) -> Option<usize> {
        self.top_k
    }

    /// Translations of a source word, matched case-insensitively.
    pub fn lookup(&self, word: &str) -> Option<&[String]> {
        self.lookup_folded(&fold_case(word))
    }

    /// Lookup for a word that is already case-folded.
    pub fn lookup_folded(&self, folded: &str) -> Option<&[String]> {
        self.index
            .get(folded)
            .map(|&i| self.entries[i].targets.as_slice())
    }

    pub fn get(&self, folded: &str) -> Option<&LexiconEntry> {
        self.index.get(folded).map(|&i| &self.entries[i])
    }

    /// GATITOS-style TSV, one `source\ttarget` line per translation.
    pub fn write_tsv(&self, mut out: impl Write) -> std::io::Result<()> {
        for e in &self.entries {
            for t in &e.targets {
                writeln!(out, "{}\t{}", e.source, t)?;
            }
        }
        Ok(())
    }
}

fn parse_line(line: &str, format: LexiconFormat) -> Option<(&str, &str)> {
    match format {
        LexiconFormat::Muse => {
            let mut it = line.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some(s), Some(t), None) => Some((s, t)),
                _ => None,
            }
        }
        LexiconFormat::Gatitos => {
            let mut it = line.split('\t');
            match (it.next(), it.next(), it.next()) {
                (Some(s), Some(t), None) => {
                    let (s, t) = (s.trim(), t.trim());
                    (!s.is_empty() && !t.is_empty()).then_some((s, t))
                }
                _ => None,
            }
        }
    }
}

/// Loads an English-to-`tgt_lang` lexicon. Malformed lines are skipped and
/// reported; blank lines are ignored.
pub fn load(path: &Path, format: LexiconFormat, tgt_lang: LanguageTag) -> Result<Loaded> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut lexicon = BilingualLexicon::from_pairs::<&str, String>(tgt_lang, []);
    let mut skipped_lines = Vec::new();
    let mut buf = Vec::new();
    let mut line_no = 0u64;
    loop {
        buf.clear();
        let n = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        line_no += 1;
        let Ok(line) = std::str::from_utf8(&buf) else {
            return Err(Error::InvalidUtf8 {
                path: path.to_path_buf(),
                line: line_no,
            });
        };
        let line = line.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(line, format) {
            Some((s, t)) => lexicon.insert(s, t.to_string()),
            None => skipped_lines.push(line_no),
        }
    }
    if lexicon.is_empty() {
        return Err(Error::EmptyLexicon(path.to_path_buf()));
    }
    Ok(Loaded {
        lexicon,
        skipped_lines,
    })
}

/// Keeps the first `k` entries in file order.
pub fn truncate_topk(lex: &BilingualLexicon, k: usize) -> Result<BilingualLexicon> {
    if k == 0 {
        return Err(Error::InvalidParameter("top-k must be > 0".into()));
    }
    let mut out = lex.clone();
    if out.entries.len() > k {
        for e in out.entries.drain(k..) {
            out.index.remove(&e.source);
        }
    }
    out.top_k = Some(out.top_k.map_or(k, |prev| prev.min(k)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_tag;
    use std::fs;

    fn hin() -> LanguageTag {
        parse_tag("hin_Deva").unwrap()
    }

    fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn muse_merges_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "m.txt", "dog कुत्ता\ndog श्वान\ncat बिल्ली\n");
        let got = load(&p, LexiconFormat::Muse, hin()).unwrap();
        assert_eq!(got.lexicon.len(), 2);
        assert_eq!(got.lexicon.lookup("dog").unwrap(), ["कुत्ता", "श्वान"]);
        assert_eq!(got.lexicon.lookup("DOG").unwrap().len(), 2);
        assert_eq!(got.lexicon.entries()[1].source, "cat");
        assert_eq!(got.lexicon.src_lang(), ENGLISH);
        assert!(got.skipped_lines.is_empty());
    }

    #[test]
    fn case_folding_merges_sources() {
        let lex = BilingualLexicon::from_pairs(hin(), [("Dog", "कुत्ता"), ("dog", "कुत्ता"), ("DOG", "श्वान")]);
        assert_eq!(lex.len(), 1);
        assert_eq!(lex.lookup("dog").unwrap(), ["कुत्ता", "श्वान"]);
    }

    #[test]
    fn empty_file_is_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "e.txt", "");
        assert!(matches!(
            load(&p, LexiconFormat::Muse, hin()),
            Err(Error::EmptyLexicon(_))
        ));
        let p = write(dir.path(), "bad.txt", "onlyone\n");
        assert!(matches!(
            load(&p, LexiconFormat::Muse, hin()),
            Err(Error::EmptyLexicon(_))
        ));
    }

    #[test]
    fn malformed_lines_counted() {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::new();
        for i in 0..10 {
            if i == 4 {
                text.push_str("broken\n");
            } else {
                text.push_str(&format!("word{i} शब्द{i}\n"));
            }
        }
        let p = write(dir.path(), "m.txt", &text);
        let got = load(&p, LexiconFormat::Muse, hin()).unwrap();
        assert_eq!(got.lexicon.len(), 9);
        assert_eq!(got.skipped_lines, vec![5]);
    }

    #[test]
    fn gatitos_tsv_and_multiword() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "g.tsv",
            "water\tपानी\nice cream\tआइसक्रीम\nno tab here\nred\tलाल\textra\n\nwater\tजल\n",
        );
        let got = load(&p, LexiconFormat::Gatitos, hin()).unwrap();
        assert_eq!(got.lexicon.len(), 2);
        assert!(got.lexicon.get("ice cream").unwrap().multiword);
        assert!(!got.lexicon.get("water").unwrap().multiword);
        assert_eq!(got.lexicon.lookup("water").unwrap(), ["पानी", "जल"]);
        assert_eq!(got.skipped_lines, vec![3, 4]);

        let mut buf = Vec::new();
        got.lexicon.write_tsv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "water\tपानी\nwater\tजल\nice cream\tआइसक्रीम\n"
        );
    }

    #[test]
    fn reload_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "m.txt", "b x\na y\nb z\n");
        let a = load(&p, LexiconFormat::Muse, hin()).unwrap().lexicon;
        let b = load(&p, LexiconFormat::Muse, hin()).unwrap().lexicon;
        assert_eq!(a, b);
    }

    #[test]
    fn truncation() {
        let big = BilingualLexicon::from_pairs(hin(), (0..5000).map(|i| (format!("w{i}"), format!("t{i}"))));
        let t = truncate_topk(&big, DEFAULT_TOP_K).unwrap();
        assert_eq!(t.len(), 4000);
        assert_eq!(t.entries()[3999].source, "w3999");
        assert!(t.lookup("w4000").is_none());
        assert!(t.lookup("w0").is_some());
        assert_eq!(truncate_topk(&t, 4000).unwrap(), t);

        let small = BilingualLexicon::from_pairs(hin(), (0..100).map(|i| (format!("w{i}"), "t")));
        assert_eq!(truncate_topk(&small, 4000).unwrap().entries(), small.entries());
        assert!(truncate_topk(&small, 0).is_err());
    }

    #[test]
    fn lookup_total_over_entries() {
        let lex = BilingualLexicon::from_pairs(hin(), [("A", "1"), ("b", "2"), ("a", "3")]);
        for e in lex.entries() {
            let t = lex.lookup(&e.source).unwrap();
            assert!(!t.is_empty());
        }
    }
}
