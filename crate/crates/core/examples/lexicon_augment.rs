//! Replaces English words with dictionary translations on the source side.

use std::sync::Arc;

use mtprep::augment::{augment_corpus, AugmentationPolicy, LanguageChoice, LexiconSet};
use mtprep::corpus::{ParallelCorpus, SentencePair};
use mtprep::lang::LanguageTag;
use mtprep::lexicon::BilingualLexicon;

pub fn run_example() -> mtprep::Result<String> {
    let eng: LanguageTag = "eng_Latn".parse()?;
    let hin: LanguageTag = "hin_Deva".parse()?;
    let lexicon = BilingualLexicon::from_pairs(
        hin,
        [("water", "पानी"), ("house", "घर"), ("river", "नदी"), ("the", "यह")],
    );
    let subset: Arc<str> = Arc::from("general");
    let corpus = ParallelCorpus::from_pairs(vec![
        SentencePair::new("The house is near the river.", "घर नदी के पास है।", eng, hin, subset.clone())?,
        SentencePair::new("Water flows in the river.", "नदी में पानी बहता है।", eng, hin, subset.clone())?,
        SentencePair::new("Nothing matches here.", "यहाँ कुछ नहीं।", eng, hin, subset)?,
    ]);
    let lexicons = LexiconSet::new([lexicon], 4000)?;
    let policy = AugmentationPolicy::new(0.5, 4000, LanguageChoice::PairTarget, 3)?;
    let (augmented, stats) = augment_corpus(&corpus, &lexicons, &policy)?;

    let mut out = String::new();
    for p in augmented.pairs() {
        out.push_str(&format!("{}\t{}\n", p.source, p.target));
    }
    out.push_str(&format!(
        "{} matched, {} replaced, rate {:.3}\n",
        stats.tokens_matched,
        stats.tokens_replaced,
        stats.replacement_rate()
    ));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> mtprep::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
