//! Corpus preparation and evaluation for multilingual machine translation.
//!
//! The pipeline covers high-resource reduction, temperature sampling,
//! bilingual-lexicon code-switching augmentation, pre-training mixture and
//! seed-data assembly, training-config manifests, and sacreBLEU-compatible
//! BLEU / chrF / chrF++ scoring. Every random choice is drawn from streams
//! keyed by an explicit seed and a record index, so output is identical for
//! any thread count.

pub mod apportion;
pub mod augment;
pub mod cli;
pub mod corpus;
pub mod digest;
pub mod evalharness;
pub mod error;
pub mod lang;
pub mod lexicon;
pub mod metrics;
pub mod rng;
pub mod sampling;
pub mod trainconfig;

pub use error::{Error, Result};
