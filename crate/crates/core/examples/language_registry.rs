//! Lists the supported languages and parses tags and direction pairs.

use mtprep::lang::{registry_entries, LanguagePair, LanguageTag};

pub fn run_example() -> mtprep::Result<String> {
    let mut out = String::new();
    for e in registry_entries() {
        let m = e.reported_millions.map_or("-".to_string(), |m| format!("{m:.2}"));
        out.push_str(&format!("{:<10} {:<12} {:<14} {m}\n", e.tag, e.language, e.script_name));
    }
    let tag: LanguageTag = "mni_Mtei".parse()?;
    let pair: LanguagePair = "eng_Latn-mni_Mtei".parse()?;
    out.push_str(&format!("parsed {tag} and {pair}\n"));
    if "xx_Latn".parse::<LanguageTag>().is_err() {
        out.push_str("rejected xx_Latn\n");
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> mtprep::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
