//! Halves high-resource languages, builds a temperature sampling plan and
//! draws a fixed budget from a small synthetic corpus.

use std::sync::Arc;

use mtprep::corpus::{self, CorpusStats, ParallelCorpus, SentencePair};
use mtprep::lang::{reported_counts_millions, LanguageTag};
use mtprep::sampling::{distribution, materialize};

pub fn run_example() -> mtprep::Result<String> {
    let eng: LanguageTag = "eng_Latn".parse()?;
    let subset: Arc<str> = Arc::from("general");
    let mut pairs = Vec::new();
    for (tag, millions) in reported_counts_millions() {
        let n = ((millions * 100.0).round() as u64).max(1);
        for i in 0..n {
            pairs.push(SentencePair::new(format!("s{i}"), format!("t{i}"), eng, tag, subset.clone())?);
        }
    }
    let corpus = ParallelCorpus::from_pairs(pairs);
    let reduced = corpus::reduce_highresource(&corpus, 1000, 0.5, 1)?;
    let stats: CorpusStats = corpus::stats(&reduced);
    let plan = distribution(&stats, 5.0)?.with_seed(1);
    let sampled = materialize(&plan, &reduced, 5000)?;
    let drawn = corpus::stats(&sampled);

    let mut out = format!("{} pairs, {} after reduction\n", corpus.len(), reduced.len());
    for e in &plan.entries {
        out.push_str(&format!("{:<10} p={:.4} drawn={}\n", e.lang, e.probability, drawn.count(e.lang)));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> mtprep::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
