//! Combines a corpus, its reversal and its augmented copy.

use std::sync::Arc;

use mtprep::augment::build_pretraining_mixture;
use mtprep::corpus::{ParallelCorpus, SentencePair};
use mtprep::lang::LanguageTag;

pub fn run_example() -> mtprep::Result<String> {
    let eng: LanguageTag = "eng_Latn".parse()?;
    let tam: LanguageTag = "tam_Taml".parse()?;
    let subset: Arc<str> = Arc::from("general");
    let pair = |s: &str, t: &str| SentencePair::new(s, t, eng, tam, subset.clone());
    let original = ParallelCorpus::from_pairs(vec![pair("good morning", "காலை வணக்கம்")?, pair("thank you", "நன்றி")?]);
    let augmented = ParallelCorpus::from_pairs(vec![pair("good காலை", "காலை வணக்கம்")?]);
    let (mixture, manifest) = build_pretraining_mixture(&original, &augmented)?;

    let mut out = String::new();
    for p in mixture.pairs() {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", p.origin_label(), p.direction(), p.source, p.target));
    }
    out.push_str(&manifest.to_json()?);
    out.push('\n');
    Ok(out)
}

#[allow(dead_code)]
fn main() -> mtprep::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
