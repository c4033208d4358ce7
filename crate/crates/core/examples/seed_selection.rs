//! Draws a fixed budget from the seed subsets in proportion to their size.

use std::collections::BTreeMap;
use std::sync::Arc;

use mtprep::augment::{seed_allocation, select_seed, SeedSubset};
use mtprep::corpus::{ParallelCorpus, SentencePair};
use mtprep::lang::LanguageTag;

pub fn run_example() -> mtprep::Result<String> {
    let eng: LanguageTag = "eng_Latn".parse()?;
    let ben: LanguageTag = "ben_Beng".parse()?;
    let sizes = [(SeedSubset::Ilci, 500u64), (SeedSubset::Massive, 210), (SeedSubset::Wiki, 90)];
    let mut subsets = BTreeMap::new();
    for (s, n) in sizes {
        let label: Arc<str> = Arc::from(s.label());
        let pairs = (0..n)
            .map(|i| SentencePair::new(format!("{s} {i}"), format!("t {i}"), eng, ben, label.clone()))
            .collect::<mtprep::Result<Vec<_>>>()?;
        subsets.insert(s, ParallelCorpus::from_pairs(pairs));
    }
    let budget = 333;
    let allocation = seed_allocation(&sizes.into_iter().collect(), budget)?;
    let selected = select_seed(subsets, budget, 5)?;

    let mut out = format!("selected {} of 800\n", selected.len());
    for (s, k) in allocation {
        out.push_str(&format!("{s}: {k}\n"));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> mtprep::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
