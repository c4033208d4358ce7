//! Scores two system outputs and prints the report table.

use mtprep::evalharness::{report, score_lines};

pub fn run_example() -> mtprep::Result<String> {
    let refs: Vec<String> = ["the cat sat on the mat today", "a quick brown fox jumps over the dog"]
        .map(String::from)
        .to_vec();
    let good: Vec<String> = ["the cat sat on the mat today", "a quick brown fox jumped over a dog"]
        .map(String::from)
        .to_vec();
    let weak: Vec<String> = ["a cat is on a mat", "the fox jumps"].map(String::from).to_vec();
    let rows = vec![
        score_lines(&good, &refs, "eng_Latn-hin_Deva".parse()?)?,
        score_lines(&weak, &refs, "eng_Latn-tam_Taml".parse()?)?,
    ];
    let report = report(rows)?;
    let mut out = report.render_text();
    for s in &report.signatures {
        out.push_str(&format!("{s}\n"));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> mtprep::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
