//! Emits the pretraining and finetuning manifests and checks them back in.

use mtprep::trainconfig::{emit, Phase, TrainConfig};

pub fn run_example() -> mtprep::Result<String> {
    let mut out = String::new();
    for phase in [Phase::Pretrain, Phase::Finetune] {
        let text = emit(phase).to_json()?;
        let back = TrainConfig::from_json(&text)?;
        out.push_str(&format!("{phase}: lr {} dropout {}\n", back.lr, back.dropout));
        out.push_str(&text);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> mtprep::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
