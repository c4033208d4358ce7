//! Hyperparameter manifests for an external sequence-to-sequence trainer.
//!
//! The JSON schema is the field list of [`TrainConfig`] in declaration order.
//! Every key is required exactly once and unknown keys are rejected. Batch
//! size, token budget and update count are not fixed by the recipe and are
//! emitted as `null`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Pretrain,
    Finetune,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Pretrain => "pretrain",
            Phase::Finetune => "finetune",
        })
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pretrain" => Ok(Phase::Pretrain),
            "finetune" => Ok(Phase::Finetune),
            _ => Err(Error::UnknownPhase(s.to_string())),
        }
    }
}

// Present-but-null is allowed, absent is not.
fn required<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<u64>, D::Error> {
    Option::<u64>::deserialize(d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub phase: Phase,
    pub arch: String,
    pub encoder_layers: u32,
    pub decoder_layers: u32,
    pub embedding_dim: u32,
    pub ffn_dim: u32,
    pub attention_heads: u32,
    pub share_embeddings: bool,
    pub optimizer: String,
    pub adam_betas: [f64; 2],
    pub lr: f64,
    pub warmup_init_lr: f64,
    pub warmup_updates: u32,
    pub dropout: f64,
    pub label_smoothing: f64,
    #[serde(deserialize_with = "required")]
    pub batch_size: Option<u64>,
    #[serde(deserialize_with = "required")]
    pub max_tokens: Option<u64>,
    #[serde(deserialize_with = "required")]
    pub max_updates: Option<u64>,
}

pub fn emit(phase: Phase) -> TrainConfig {
    let (lr, dropout) = match phase {
        Phase::Pretrain => (5e-4, 0.1),
        Phase::Finetune => (3e-5, 0.2),
    };
    TrainConfig {
        phase,
        arch: "transformer_big".into(),
        encoder_layers: 6,
        decoder_layers: 6,
        embedding_dim: 1024,
        ffn_dim: 4096,
        attention_heads: 16,
        share_embeddings: true,
        optimizer: "adam".into(),
        adam_betas: [0.9, 0.98],
        lr,
        warmup_init_lr: 1e-7,
        warmup_updates: 4000,
        dropout,
        label_smoothing: 0.1,
        batch_size: None,
        max_tokens: None,
        max_updates: None,
    }
}

pub fn emit_named(phase: &str) -> Result<TrainConfig> {
    Ok(emit(phase.parse()?))
}

impl TrainConfig {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Parses and checks a manifest: schema, then the per-phase settings.
    pub fn from_json(text: &str) -> Result<TrainConfig> {
        let cfg: TrainConfig = serde_json::from_str(text)?;
        let expected = emit(cfg.phase);
        let mut pinned = cfg.clone();
        pinned.batch_size = None;
        pinned.max_tokens = None;
        pinned.max_updates = None;
        if pinned != expected {
            return Err(Error::InvalidParameter(format!(
                "{} manifest differs from the recipe",
                cfg.phase
            )));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases() {
        let p = emit(Phase::Pretrain);
        assert_eq!(p.ffn_dim, 4096);
        assert_eq!((p.lr, p.dropout), (5e-4, 0.1));
        let f = emit(Phase::Finetune);
        assert_eq!((f.lr, f.dropout), (3e-5, 0.2));
        assert_eq!(f.warmup_updates, p.warmup_updates);
        assert_eq!(emit(Phase::Pretrain), emit(Phase::Pretrain));
        assert!(matches!(emit_named("distill"), Err(Error::UnknownPhase(_))));
    }

    #[test]
    fn json_shape() {
        let text = emit(Phase::Pretrain).to_json().unwrap();
        assert_eq!(text, emit(Phase::Pretrain).to_json().unwrap());
        assert!(text.starts_with("{\n  \"phase\": \"pretrain\",\n  \"arch\""));
        assert!(text.contains("\"warmup_init_lr\": 1e-7"));
        assert!(text.contains("\"batch_size\": null"));
        assert_eq!(TrainConfig::from_json(&text).unwrap(), emit(Phase::Pretrain));
    }

    #[test]
    fn schema_rejects() {
        let text = emit(Phase::Finetune).to_json().unwrap();
        let extra = text.replacen('{', "{\n  \"seed\": 1,", 1);
        assert!(TrainConfig::from_json(&extra).is_err());
        let dup = text.replacen('{', "{\n  \"lr\": 3e-5,", 1);
        assert!(TrainConfig::from_json(&dup).is_err());
        let missing = text.replace("  \"max_updates\": null\n", "").replace("null,\n}", "null\n}");
        assert!(TrainConfig::from_json(&missing).is_err());
        let wrong = text.replace("\"dropout\": 0.2", "\"dropout\": 0.3");
        assert!(matches!(TrainConfig::from_json(&wrong), Err(Error::InvalidParameter(_))));
    }
}
