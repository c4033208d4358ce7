mod common;

use mtprep::metrics::{bleu, chrf, BleuConfig, ChrfConfig};

const TOL: f64 = 0.005;

#[test]
fn matches_recorded_scores() {
    let hyp = common::read_lines("metric_suite/hyp.txt");
    let reference = common::read_lines("metric_suite/ref.txt");
    let rows = common::oracle_rows();
    assert!(rows.len() >= 55);
    let mut worst = 0.0f64;
    for row in &rows {
        let h: Vec<&str> = row.lines.iter().map(|&i| hyp[i - 1].as_str()).collect();
        let r: Vec<&str> = row.lines.iter().map(|&i| reference[i - 1].as_str()).collect();
        let got = [
            bleu(&h, &r, &BleuConfig::default()).unwrap().value,
            chrf(&h, &r, &ChrfConfig::chrf()).unwrap().value,
            chrf(&h, &r, &ChrfConfig::chrf_plus_plus()).unwrap().value,
        ];
        for (g, w) in got.iter().zip([row.bleu, row.chrf, row.chrfpp]) {
            assert!((g - w).abs() <= TOL, "{}: got {g}, expected {w}", row.name);
            worst = worst.max((g - w).abs());
        }
    }
    println!("max abs deviation {worst:e}");
}
