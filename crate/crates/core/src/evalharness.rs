//! Per-pair scoring of system outputs and report tables with an average row.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::digest::file_sha256;
use crate::error::{Error, Result};
use crate::lang::LanguagePair;
use crate::metrics::{self, BleuConfig, ChrfConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreRow {
    pub pair: LanguagePair,
    pub bleu: f64,
    pub chrf: f64,
    pub chrfpp: f64,
}

/// Scores for several pairs, the rounded column means and the provenance of
/// the numbers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreReport {
    pub rows: Vec<ScoreRow>,
    pub average: [f64; 3],
    pub signatures: [String; 3],
    /// File name to SHA-256 digest of every scored file.
    pub digests: BTreeMap<String, String>,
}

/// A system output file scored against its reference.
#[derive(Clone, Debug)]
pub struct Run {
    pub hypothesis: PathBuf,
    pub reference: PathBuf,
    pub pair: LanguagePair,
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = Vec::new();
    for (i, line) in BufReader::new(file).split(b'\n').enumerate() {
        let mut bytes = line.map_err(|e| Error::io(path, e))?;
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
        lines.push(String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 {
            path: path.to_path_buf(),
            line: i as u64 + 1,
        })?);
    }
    Ok(lines)
}

pub fn score_lines(hyps: &[String], refs: &[String], pair: LanguagePair) -> Result<ScoreRow> {
    Ok(ScoreRow {
        pair,
        bleu: metrics::bleu(hyps, refs, &BleuConfig::default())?.value,
        chrf: metrics::chrf(hyps, refs, &ChrfConfig::chrf())?.value,
        chrfpp: metrics::chrf(hyps, refs, &ChrfConfig::chrf_plus_plus())?.value,
    })
}

/// BLEU, chrF and chrF++ of one hypothesis file against one reference file.
pub fn score_run(hyp_path: &Path, ref_path: &Path, pair: LanguagePair) -> Result<ScoreRow> {
    let hyps = read_lines(hyp_path)?;
    let refs = read_lines(ref_path)?;
    if hyps.len() != refs.len() {
        return Err(Error::LineCountMismatch {
            source_path: hyp_path.to_path_buf(),
            source_lines: hyps.len() as u64,
            target_path: ref_path.to_path_buf(),
            target_lines: refs.len() as u64,
        });
    }
    if hyps.is_empty() {
        return Err(Error::EmptyInput(format!("{} has no lines", hyp_path.display())));
    }
    score_lines(&hyps, &refs, pair)
}

/// Scores every run in parallel and assembles the report in input order.
pub fn score_runs(runs: &[Run]) -> Result<ScoreReport> {
    let rows = runs
        .par_iter()
        .map(|r| score_run(&r.hypothesis, &r.reference, r.pair))
        .collect::<Result<Vec<_>>>()?;
    let mut report = report(rows)?;
    for r in runs {
        for path in [&r.hypothesis, &r.reference] {
            report
                .digests
                .insert(path.display().to_string(), file_sha256(path)?);
        }
    }
    Ok(report)
}

pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Builds a report; the average row is the mean of each column rounded to
/// two decimals.
pub fn report(rows: Vec<ScoreRow>) -> Result<ScoreReport> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("a report needs at least one row".into()));
    }
    let n = rows.len() as f64;
    let mean = |f: fn(&ScoreRow) -> f64| round2(rows.iter().map(f).sum::<f64>() / n);
    let average = [mean(|r| r.bleu), mean(|r| r.chrf), mean(|r| r.chrfpp)];
    Ok(ScoreReport {
        rows,
        average,
        signatures: [
            BleuConfig::default().signature(),
            ChrfConfig::chrf().signature(),
            ChrfConfig::chrf_plus_plus().signature(),
        ],
        digests: BTreeMap::new(),
    })
}

impl ScoreReport {
    /// Aligned table: scores to one decimal, the average row to two.
    pub fn render_text(&self) -> String {
        let pairs: Vec<String> = self.rows.iter().map(|r| r.pair.to_string()).collect();
        let w = pairs.iter().map(String::len).max().unwrap_or(0).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "{:<w$}  {:>7}  {:>7}  {:>7}", "Pair", "BLEU", "chrF", "chrF++");
        let _ = writeln!(out, "{}", "-".repeat(w + 27));
        for (r, p) in self.rows.iter().zip(&pairs) {
            let _ = writeln!(out, "{p:<w$}  {:>7.1}  {:>7.1}  {:>7.1}", r.bleu, r.chrf, r.chrfpp);
        }
        let _ = writeln!(out, "{}", "-".repeat(w + 27));
        let [b, c, cpp] = self.average;
        let _ = writeln!(out, "{:<w$}  {b:>7.2}  {c:>7.2}  {cpp:>7.2}", "Avg.");
        out
    }

    /// `pair\tbleu\tchrf\tchrfpp` with a header and a final `Avg.` row.
    pub fn render_tsv(&self) -> String {
        let mut out = String::from("pair\tbleu\tchrf\tchrfpp\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{:.4}\t{:.4}\t{:.4}", r.pair, r.bleu, r.chrf, r.chrfpp);
        }
        let [b, c, cpp] = self.average;
        let _ = writeln!(out, "Avg.\t{b:.2}\t{c:.2}\t{cpp:.2}");
        out
    }
}

/// Reads rows back from the TSV form, ignoring the header and `Avg.` row.
pub fn parse_rows_tsv(path: &Path) -> Result<Vec<ScoreRow>> {
    let mut rows = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        if i == 0 || line.is_empty() || line.starts_with("Avg.") {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i as u64 + 1,
            message,
        };
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 4 {
            return Err(parse_err(format!("expected 4 columns, found {}", f.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| parse_err(format!("{s:?}: {e}")));
        rows.push(ScoreRow {
            pair: f[0].parse()?,
            bleu: num(f[1])?,
            chrf: num(f[2])?,
            chrfpp: num(f[3])?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn pair(s: &str) -> LanguagePair {
        s.parse().unwrap()
    }

    fn row(p: &str, v: f64) -> ScoreRow {
        ScoreRow { pair: pair(p), bleu: v, chrf: v, chrfpp: v }
    }

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        File::create(&p).unwrap().write_all(text.as_bytes()).unwrap();
        p
    }

    #[test]
    fn identical_files_score_100() {
        let dir = tempfile::tempdir().unwrap();
        let h = write(dir.path(), "h", "মই ঘৰলৈ এতিয়া যাওঁ।\nhello big wide world .\n");
        let r = score_run(&h, &h, pair("asm_Beng-eng_Latn")).unwrap();
        for v in [r.bleu, r.chrf, r.chrfpp] {
            assert!((v - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn file_errors() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a", "x\ny\n");
        let b = write(dir.path(), "b", "x\n");
        let e = write(dir.path(), "e", "");
        let p = pair("hin_Deva-eng_Latn");
        assert!(matches!(score_run(&a, &b, p), Err(Error::LineCountMismatch { source_lines: 2, target_lines: 1, .. })));
        assert!(matches!(score_run(&e, &e, p), Err(Error::EmptyInput(_))));
        assert!(matches!(score_run(&dir.path().join("nope"), &a, p), Err(Error::Io { .. })));
    }

    #[test]
    fn averages() {
        let one = report(vec![row("hin_Deva-eng_Latn", 33.333)]).unwrap();
        assert_eq!(one.average, [33.33; 3]);
        let two = report(vec![row("hin_Deva-eng_Latn", 40.0), row("tam_Taml-eng_Latn", 50.0)]).unwrap();
        assert_eq!(two.average, [45.0; 3]);
        assert!(two.render_tsv().ends_with("Avg.\t45.00\t45.00\t45.00\n"));
        assert!(report(vec![]).is_err());
    }

    const LANGS: [&str; 22] = [
        "asm_Beng", "ben_Beng", "brx_Deva", "doi_Deva", "gom_Deva", "guj_Gujr", "hin_Deva",
        "kan_Knda", "kas_Arab", "mai_Deva", "mal_Mlym", "mni_Mtei", "mar_Deva", "npi_Deva",
        "ory_Orya", "pan_Guru", "san_Deva", "sat_Olck", "snd_Deva", "tam_Taml", "tel_Telu",
        "urd_Arab",
    ];

    fn published(cells: [f64; 22], avg: f64, en_source: bool) {
        let rows = LANGS
            .iter()
            .zip(cells)
            .map(|(l, v)| {
                let p = if en_source { format!("eng_Latn-{l}") } else { format!("{l}-eng_Latn") };
                row(&p, v)
            })
            .collect();
        let r = report(rows).unwrap();
        // Independent recomputation in integer tenths.
        let tenths: i64 = cells.iter().map(|v| (v * 10.0).round() as i64).sum();
        let oracle = ((tenths as f64 / 22.0) * 10.0).round() / 100.0;
        assert_eq!(r.average[0], oracle);
        assert_eq!(r.average[0], avg);
    }

    #[test]
    fn published_averages_reproduce() {
        published(
            [17.8, 17.2, 16.2, 33.4, 16.4, 19.6, 28.0, 15.6, 13.4, 17.8, 13.1, 18.2, 17.5, 15.6,
             17.4, 22.6, 9.1, 8.8, 11.1, 11.7, 16.2, 43.4],
            18.19,
            true,
        );
        published(
            [58.4, 56.9, 54.5, 64.5, 51.6, 59.2, 58.7, 56.5, 53.8, 59.5, 56.0, 52.7, 57.3, 62.1,
             59.3, 56.1, 46.9, 48.2, 52.6, 53.2, 56.8, 64.7],
            56.34,
            false,
        );
    }

    #[test]
    fn rendering() {
        let r = report(vec![row("hin_Deva-eng_Latn", 40.04), row("tam_Taml-eng_Latn", 50.0)]).unwrap();
        let text = r.render_text();
        assert_eq!(text, r.render_text());
        assert!(text.contains("hin_Deva-eng_Latn     40.0"));
        assert!(text.lines().last().unwrap().contains("45.02"));

        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "r.tsv", &r.render_tsv());
        let back = parse_rows_tsv(&p).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].pair, pair("hin_Deva-eng_Latn"));
        assert!((back[0].bleu - 40.04).abs() < 1e-9);
    }
}
