use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::apportion::largest_remainder_exact;
use crate::corpus::{Origin, ParallelCorpus};
use crate::error::{Error, Result};
use crate::rng;

pub const DEFAULT_SEED_BUDGET: u64 = 2_260_000;

/// The small human-translated subsets used for direction-specific
/// fine-tuning. Ordering is the allocation tie-break order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SeedSubset {
    Ilci,
    NllbSeed,
    Massive,
    Daily,
    Wiki,
}

impl SeedSubset {
    pub const ALL: [SeedSubset; 5] = [
        SeedSubset::Ilci,
        SeedSubset::NllbSeed,
        SeedSubset::Massive,
        SeedSubset::Daily,
        SeedSubset::Wiki,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SeedSubset::Ilci => "ILCI",
            SeedSubset::NllbSeed => "NLLB-Seed",
            SeedSubset::Massive => "Massive",
            SeedSubset::Daily => "Daily",
            SeedSubset::Wiki => "Wiki",
        }
    }
}

impl fmt::Display for SeedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SeedSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "ilci" => Ok(SeedSubset::Ilci),
            "nllbseed" => Ok(SeedSubset::NllbSeed),
            "massive" => Ok(SeedSubset::Massive),
            "daily" => Ok(SeedSubset::Daily),
            "wiki" => Ok(SeedSubset::Wiki),
            _ => Err(Error::UnknownSubset(s.to_string())),
        }
    }
}

/// Splits a corpus by its subset labels, which must all name seed subsets.
pub fn group_by_subset(corpus: ParallelCorpus) -> Result<BTreeMap<SeedSubset, ParallelCorpus>> {
    let mut groups: BTreeMap<SeedSubset, Vec<_>> = BTreeMap::new();
    for p in corpus.into_pairs() {
        let subset: SeedSubset = p.subset.parse()?;
        groups.entry(subset).or_default().push(p);
    }
    Ok(groups
        .into_iter()
        .map(|(k, v)| (k, ParallelCorpus::from_pairs(v)))
        .collect())
}

/// Per-subset draw sizes: proportional to subset size, largest remainder.
pub fn seed_allocation(
    sizes: &BTreeMap<SeedSubset, u64>,
    budget: u64,
) -> Result<BTreeMap<SeedSubset, u64>> {
    let available: u64 = sizes.values().sum();
    if budget > available {
        return Err(Error::BudgetExceedsAvailable { budget, available });
    }
    let counts: Vec<u64> = sizes.values().copied().collect();
    Ok(sizes
        .keys()
        .copied()
        .zip(largest_remainder_exact(&counts, budget))
        .collect())
}

/// Draws exactly `budget` pairs across the seed subsets without replacement.
/// Output is grouped by subset, original order within a subset, each pair
/// tagged `seed` with its canonical subset label.
pub fn select_seed(
    subsets: BTreeMap<SeedSubset, ParallelCorpus>,
    budget: u64,
    seed: u64,
) -> Result<ParallelCorpus> {
    let sizes: BTreeMap<SeedSubset, u64> =
        subsets.iter().map(|(k, v)| (*k, v.len() as u64)).collect();
    let allocation = seed_allocation(&sizes, budget)?;
    let mut out = Vec::with_capacity(budget as usize);
    for (subset, corpus) in subsets {
        let k = allocation[&subset] as usize;
        let n = corpus.len();
        let mut rng = rng::stream(seed, "seed-select", subset.label().as_bytes(), 0);
        let mut keep = vec![false; n];
        for i in rand::seq::index::sample(&mut rng, n, k) {
            keep[i] = true;
        }
        let label: Arc<str> = Arc::from(subset.label());
        out.extend(
            corpus
                .into_pairs()
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(mut p, _)| {
                    p.origin = Origin::Seed;
                    p.subset = label.clone();
                    p
                }),
        );
    }
    Ok(ParallelCorpus::from_pairs(out))
}
