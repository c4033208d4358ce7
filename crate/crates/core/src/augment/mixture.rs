use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::corpus::{self, io::Record, IngestOptions, Origin, PairReader, ParallelCorpus, TsvWriter};
use crate::digest::file_sha256;
use crate::error::{Error, Result};

use super::AugmentationPolicy;

/// Counts of a pre-training mixture: originals, their reversals and the
/// augmented pairs. `total == 2 * original + augmented` always holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixtureManifest {
    pub original: u64,
    pub reversed: u64,
    pub augmented: u64,
    pub total: u64,
    pub seed: Option<u64>,
    pub policy: Option<AugmentationPolicy>,
    /// Input name to SHA-256 digest.
    pub inputs: BTreeMap<String, String>,
}

impl MixtureManifest {
    pub fn new(original: u64, augmented: u64) -> Self {
        MixtureManifest {
            original,
            reversed: original,
            augmented,
            total: 2 * original + augmented,
            seed: None,
            policy: None,
            inputs: BTreeMap::new(),
        }
    }

    pub fn with_policy(mut self, policy: AugmentationPolicy) -> Self {
        self.seed = Some(policy.seed);
        self.policy = Some(policy);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_en_source(corpus: &ParallelCorpus, what: &str) -> Result<()> {
    if corpus.is_en_to_xx() {
        Ok(())
    } else {
        Err(Error::Direction(format!(
            "{what} must translate out of English into another language"
        )))
    }
}

/// `en_indic ++ reverse(en_indic) ++ augmented`, tagged `orig`/`rev`/`aug`.
pub fn build_pretraining_mixture(
    en_indic: &ParallelCorpus,
    augmented: &ParallelCorpus,
) -> Result<(ParallelCorpus, MixtureManifest)> {
    check_en_source(en_indic, "original corpus")?;
    check_en_source(augmented, "augmented corpus")?;
    let mut pairs = Vec::with_capacity(2 * en_indic.len() + augmented.len());
    pairs.extend(en_indic.pairs().iter().map(|p| {
        let mut p = p.clone();
        p.origin = Origin::Orig;
        p
    }));
    pairs.extend(corpus::reverse(en_indic).into_pairs().into_iter().map(|mut p| {
        p.origin = Origin::Rev;
        p
    }));
    pairs.extend(augmented.pairs().iter().map(|p| {
        let mut p = p.clone();
        p.origin = Origin::Aug;
        p
    }));
    let manifest = MixtureManifest::new(en_indic.len() as u64, augmented.len() as u64);
    Ok((ParallelCorpus::from_pairs(pairs), manifest))
}

/// Streams a mixture from two corpus TSV files into `out` (mixture layout)
/// without holding either corpus in memory.
pub fn write_mixture<W: Write>(
    original: &Path,
    augmented: &Path,
    out: &mut TsvWriter<W>,
) -> Result<MixtureManifest> {
    let options = IngestOptions::default();
    let mut pass = |path: &Path, origin: Origin, reverse: bool| -> Result<u64> {
        let mut n = 0;
        for record in PairReader::tsv(path, &options)? {
            let Record::Pair(mut p) = record? else {
                continue;
            };
            if !p.src_lang.is_english() || p.tgt_lang.is_english() {
                return Err(Error::Direction(format!(
                    "{}: pair {} is not out of English",
                    path.display(),
                    p.direction()
                )));
            }
            if reverse {
                p = p.reversed();
            }
            p.origin = origin;
            out.write(&p).map_err(|e| Error::io(path, e))?;
            n += 1;
        }
        Ok(n)
    };
    let original_count = pass(original, Origin::Orig, false)?;
    pass(original, Origin::Rev, true)?;
    let augmented_count = pass(augmented, Origin::Aug, false)?;
    let mut manifest = MixtureManifest::new(original_count, augmented_count);
    manifest
        .inputs
        .insert("original".into(), file_sha256(original)?);
    manifest
        .inputs
        .insert("augmented".into(), file_sha256(augmented)?);
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::synthetic;
    use crate::corpus::{write_tsv, TsvLayout};

    #[test]
    fn identity_holds() {
        let c = synthetic(&[("hin_Deva", 10)]);
        let (m, manifest) = build_pretraining_mixture(&c, &ParallelCorpus::default()).unwrap();
        assert_eq!(m.len(), 20);
        assert_eq!(manifest.total, 20);

        let c = synthetic(&[("hin_Deva", 600), ("ben_Beng", 400)]);
        let a = synthetic(&[("hin_Deva", 300)]);
        let (m, manifest) = build_pretraining_mixture(&c, &a).unwrap();
        assert_eq!(manifest.total, 2300);
        assert_eq!(m.len(), 2300);
        let count = |o: Origin| m.pairs().iter().filter(|p| p.origin == o).count();
        assert_eq!((count(Origin::Orig), count(Origin::Rev), count(Origin::Aug)), (1000, 1000, 300));
        assert!(m.pairs()[1000].tgt_lang.is_english());
    }

    #[test]
    fn reported_magnitudes() {
        let m = MixtureManifest::new(113_650_000, 56_000_000);
        assert_eq!(m.total, 283_300_000);
    }

    #[test]
    fn direction_checked() {
        let c = synthetic(&[("hin_Deva", 3)]);
        let r = corpus::reverse(&c);
        assert!(matches!(
            build_pretraining_mixture(&r, &ParallelCorpus::default()),
            Err(Error::Direction(_))
        ));
        assert!(build_pretraining_mixture(&c, &r).is_err());
    }

    #[test]
    fn streaming_matches_in_memory() {
        let dir = tempfile::tempdir().unwrap();
        let c = synthetic(&[("hin_Deva", 40), ("tam_Taml", 20)]);
        let a = synthetic(&[("tam_Taml", 7)]);
        let (cp, ap) = (dir.path().join("c.tsv"), dir.path().join("a.tsv"));
        write_tsv(&cp, c.pairs(), TsvLayout::Corpus).unwrap();
        write_tsv(&ap, a.pairs(), TsvLayout::Corpus).unwrap();

        let mut w = TsvWriter::new(Vec::new(), TsvLayout::Mixture);
        let manifest = write_mixture(&cp, &ap, &mut w).unwrap();
        let streamed = w.finish().unwrap();

        let (m, expected) = build_pretraining_mixture(&c, &a).unwrap();
        let mut w = TsvWriter::new(Vec::new(), TsvLayout::Mixture);
        for p in m.pairs() {
            w.write(p).unwrap();
        }
        assert_eq!(streamed, w.finish().unwrap());
        assert_eq!(manifest.total, expected.total);
        assert_eq!(manifest.inputs.len(), 2);
        let text = String::from_utf8(streamed).unwrap();
        assert!(text.lines().next().unwrap().ends_with("\torig"));
        assert!(text.lines().last().unwrap().ends_with("\taug"));
    }
}
