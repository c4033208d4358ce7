//! Language + script tags in FLORES style (`hin_Deva`) and the compiled-in
//! registry of the 22 scheduled Indic languages (24 language/script rows)
//! plus the English pivot.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// ISO-639-3 code plus ISO-15924 script, stored inline so tags are `Copy`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageTag {
    code: [u8; 3],
    script: [u8; 4],
}

pub const ENGLISH: LanguageTag = LanguageTag::from_bytes(*b"eng", *b"Latn");

impl LanguageTag {
    const fn from_bytes(code: [u8; 3], script: [u8; 4]) -> Self {
        LanguageTag { code, script }
    }

    /// Checks syntax only; registry membership is checked by [`parse_tag`].
    pub fn parse_syntax(text: &str) -> Result<Self> {
        let malformed = || Error::MalformedTag(text.to_string());
        let (code, script) = text.split_once('_').ok_or_else(malformed)?;
        let code = code.as_bytes();
        let script = script.as_bytes();
        if code.len() != 3 || !code.iter().all(u8::is_ascii_lowercase) {
            return Err(malformed());
        }
        if script.len() != 4
            || !script[0].is_ascii_uppercase()
            || !script[1..].iter().all(u8::is_ascii_lowercase)
        {
            return Err(malformed());
        }
        Ok(LanguageTag {
            code: [code[0], code[1], code[2]],
            script: [script[0], script[1], script[2], script[3]],
        })
    }

    pub fn code(&self) -> &str {
        // Validated ASCII on construction.
        std::str::from_utf8(&self.code).unwrap()
    }

    pub fn script(&self) -> &str {
        std::str::from_utf8(&self.script).unwrap()
    }

    pub fn is_english(&self) -> bool {
        *self == ENGLISH
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.code(), self.script())
    }
}

impl fmt::Debug for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for LanguageTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_tag(s)
    }
}

impl Serialize for LanguageTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LanguageTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        LanguageTag::parse_syntax(&s).map_err(serde::de::Error::custom)
    }
}

/// A translation direction such as `asm_Beng-eng_Latn`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LanguagePair {
    pub src: LanguageTag,
    pub tgt: LanguageTag,
}

impl LanguagePair {
    pub fn new(src: LanguageTag, tgt: LanguageTag) -> Self {
        LanguagePair { src, tgt }
    }

    pub fn parse_with(registry: &Registry, text: &str) -> Result<Self> {
        let (src, tgt) = text
            .split_once('-')
            .ok_or_else(|| Error::MalformedPair(text.to_string()))?;
        Ok(LanguagePair {
            src: registry.parse(src)?,
            tgt: registry.parse(tgt)?,
        })
    }
}

impl fmt::Display for LanguagePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.src, self.tgt)
    }
}

impl Serialize for LanguagePair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for LanguagePair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LanguagePair::parse_with(Registry::builtin(), s)
    }
}

/// One row of the compiled-in table: tag, language name, script name and
/// the reported bitext count in millions of sentence pairs.
#[derive(Clone, Copy, Debug)]
pub struct RegistryEntry {
    pub tag: LanguageTag,
    pub language: &'static str,
    pub script_name: &'static str,
    pub reported_millions: Option<f64>,
}

macro_rules! entry {
    ($code:literal, $script:literal, $lang:literal, $sname:literal, $m:expr) => {
        RegistryEntry {
            tag: LanguageTag::from_bytes(*$code, *$script),
            language: $lang,
            script_name: $sname,
            reported_millions: $m,
        }
    };
}

const BUILTIN: [RegistryEntry; 25] = [
    entry!(b"asm", b"Beng", "Assamese", "Bengali", Some(1.42)),
    entry!(b"brx", b"Deva", "Bodo", "Devanagari", Some(0.12)),
    entry!(b"ben", b"Beng", "Bengali", "Bengali", Some(16.39)),
    entry!(b"doi", b"Deva", "Dogri", "Devanagari", Some(0.02)),
    entry!(b"gom", b"Deva", "Konkani", "Devanagari", Some(0.10)),
    entry!(b"guj", b"Gujr", "Gujarati", "Gujarati", Some(10.12)),
    entry!(b"hin", b"Deva", "Hindi", "Devanagari", Some(19.24)),
    entry!(b"kan", b"Knda", "Kannada", "Kannada", Some(11.60)),
    entry!(b"kas", b"Deva", "Kashmiri", "Devanagari", Some(0.20)),
    entry!(b"kas", b"Arab", "Kashmiri", "Arabic", Some(0.15)),
    entry!(b"mai", b"Deva", "Maithili", "Devanagari", Some(0.09)),
    entry!(b"mal", b"Mlym", "Malayalam", "Malayalam", Some(11.69)),
    entry!(b"mni", b"Mtei", "Manipuri", "Meetei Mayek", Some(0.04)),
    entry!(b"mni", b"Beng", "Manipuri", "Bengali", Some(0.37)),
    entry!(b"mar", b"Deva", "Marathi", "Devanagari", Some(9.37)),
    entry!(b"npi", b"Deva", "Nepali", "Devanagari", Some(1.68)),
    entry!(b"ory", b"Orya", "Odia", "Oriya", Some(5.80)),
    entry!(b"pan", b"Guru", "Punjabi", "Gurmukhi", Some(9.75)),
    entry!(b"san", b"Deva", "Sanskrit", "Devanagari", Some(0.28)),
    entry!(b"sat", b"Olck", "Santali", "Ol Chiki", Some(0.02)),
    entry!(b"snd", b"Deva", "Sindhi", "Devanagari", Some(0.01)),
    entry!(b"tam", b"Taml", "Tamil", "Tamil", Some(10.18)),
    entry!(b"tel", b"Telu", "Telugu", "Telugu", Some(11.54)),
    entry!(b"urd", b"Arab", "Urdu", "Arabic", Some(2.99)),
    entry!(b"eng", b"Latn", "English", "Latin", None),
];

/// Ordered set of accepted tags. Immutable once built.
#[derive(Clone, Debug)]
pub struct Registry {
    tags: Vec<LanguageTag>,
}

impl Registry {
    pub fn builtin() -> &'static Registry {
        static BUILTIN_REGISTRY: OnceLock<Registry> = OnceLock::new();
        BUILTIN_REGISTRY.get_or_init(|| Registry {
            tags: BUILTIN.iter().map(|e| e.tag).collect(),
        })
    }

    /// Builtin registry extended by an override file: one tag per line,
    /// blank lines and `#` comments ignored.
    pub fn with_overrides(path: &Path) -> Result<Registry> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut registry = Registry::builtin().clone();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tag = LanguageTag::parse_syntax(line).map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: i as u64 + 1,
                message: format!("malformed language tag {line:?}"),
            })?;
            if !registry.contains(tag) {
                registry.tags.push(tag);
            }
        }
        Ok(registry)
    }

    pub fn tags(&self) -> &[LanguageTag] {
        &self.tags
    }

    pub fn contains(&self, tag: LanguageTag) -> bool {
        self.tags.contains(&tag)
    }

    /// Registry position, used as a stable ordering key.
    pub fn position(&self, tag: LanguageTag) -> Option<usize> {
        self.tags.iter().position(|t| *t == tag)
    }

    pub fn parse(&self, text: &str) -> Result<LanguageTag> {
        let tag = LanguageTag::parse_syntax(text)?;
        if self.contains(tag) {
            Ok(tag)
        } else {
            Err(Error::UnknownTag(text.to_string()))
        }
    }
}

/// Parses and validates a tag against the builtin registry.
pub fn parse_tag(text: &str) -> Result<LanguageTag> {
    Registry::builtin().parse(text)
}

/// The builtin registry: 24 Indic language/script rows plus `eng_Latn`.
pub fn registry() -> Vec<LanguageTag> {
    Registry::builtin().tags().to_vec()
}

pub fn registry_entries() -> &'static [RegistryEntry] {
    &BUILTIN
}

/// Reported per-language bitext counts (millions of pairs) for the Indic rows.
pub fn reported_counts_millions() -> Vec<(LanguageTag, f64)> {
    BUILTIN
        .iter()
        .filter_map(|e| e.reported_millions.map(|m| (e.tag, m)))
        .collect()
}
