//! Streaming readers and writers for paired line files and corpus TSV.
//!
//! Corpus TSV rows are `src_lang\ttgt_lang\tsource\ttarget\tsubset`, with an
//! optional sixth `repetition` column on sampled output. Mixture files carry
//! an origin label (`orig`, `rev`, `aug`, `seed:<subset>`) in the fifth column.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lang::{LanguageTag, Registry};

use super::{ParallelCorpus, SentencePair};

#[derive(Clone, Debug)]
pub struct IngestOptions {
    /// Provenance label attached to pairs read from paired line files.
    pub subset: String,
    /// Subsets dropped at ingest (matched case-insensitively), e.g. `comparable`.
    pub exclude_subsets: BTreeSet<String>,
    pub registry: Registry,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            subset: "general".into(),
            exclude_subsets: BTreeSet::new(),
            registry: Registry::builtin().clone(),
        }
    }
}

impl IngestOptions {
    pub fn excludes(&self, subset: &str) -> bool {
        self.exclude_subsets
            .iter()
            .any(|s| s.eq_ignore_ascii_case(subset))
    }
}

/// A dropped input line and why.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Skip {
    pub line: u64,
    pub reason: &'static str,
}

#[derive(Debug)]
pub struct Ingested {
    pub corpus: ParallelCorpus,
    pub skipped: Vec<Skip>,
    /// Rows dropped by the subset filter.
    pub excluded: u64,
}

pub enum Record {
    Pair(SentencePair),
    Skipped(Skip),
    Excluded,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(|f| BufReader::with_capacity(1 << 16, f))
        .map_err(|e| Error::io(path, e))
}

/// Reads one line into `buf` without its terminator. `Ok(false)` at EOF.
fn read_line(reader: &mut impl BufRead, buf: &mut Vec<u8>, path: &Path) -> Result<bool> {
    buf.clear();
    let n = reader
        .read_until(b'\n', buf)
        .map_err(|e| Error::io(path, e))?;
    if n == 0 {
        return Ok(false);
    }
    if buf.last() == Some(&b'\n') {
        buf.pop();
        if buf.last() == Some(&b'\r') {
            buf.pop();
        }
    }
    Ok(true)
}

fn utf8<'a>(buf: &'a [u8], path: &Path, line: u64) -> Result<&'a str> {
    std::str::from_utf8(buf).map_err(|_| Error::InvalidUtf8 {
        path: path.to_path_buf(),
        line,
    })
}

fn count_rest(reader: &mut impl BufRead, path: &Path) -> Result<u64> {
    let mut buf = Vec::new();
    let mut n = 0;
    while read_line(reader, &mut buf, path)? {
        n += 1;
    }
    Ok(n)
}

enum Source {
    Paired {
        src: BufReader<File>,
        tgt: BufReader<File>,
        src_path: PathBuf,
        tgt_path: PathBuf,
        src_lang: LanguageTag,
        tgt_lang: LanguageTag,
        subset: Arc<str>,
        excluded: bool,
        tgt_buf: Vec<u8>,
    },
    Tsv {
        reader: BufReader<File>,
        path: PathBuf,
        registry: Registry,
        exclude: Vec<String>,
        last_subset: Option<Arc<str>>,
    },
}

/// Streaming pair source; memory use is one line per side regardless of
/// input size.
pub struct PairReader {
    source: Source,
    line: u64,
    buf: Vec<u8>,
    done: bool,
}

impl PairReader {
    pub fn paired(
        source_path: &Path,
        target_path: &Path,
        src_lang: LanguageTag,
        tgt_lang: LanguageTag,
        options: &IngestOptions,
    ) -> Result<Self> {
        if src_lang == tgt_lang {
            return Err(Error::InvalidParameter(format!(
                "source and target language are both {src_lang}"
            )));
        }
        Ok(PairReader {
            source: Source::Paired {
                src: open(source_path)?,
                tgt: open(target_path)?,
                src_path: source_path.to_path_buf(),
                tgt_path: target_path.to_path_buf(),
                src_lang,
                tgt_lang,
                subset: Arc::from(options.subset.as_str()),
                excluded: options.excludes(&options.subset),
                tgt_buf: Vec::new(),
            },
            line: 0,
            buf: Vec::new(),
            done: false,
        })
    }

    pub fn tsv(path: &Path, options: &IngestOptions) -> Result<Self> {
        Ok(PairReader {
            source: Source::Tsv {
                reader: open(path)?,
                path: path.to_path_buf(),
                registry: options.registry.clone(),
                exclude: options.exclude_subsets.iter().cloned().collect(),
                last_subset: None,
            },
            line: 0,
            buf: Vec::new(),
            done: false,
        })
    }

    fn next_record(&mut self) -> Result<Option<Record>> {
        self.line += 1;
        let line = self.line;
        match &mut self.source {
            Source::Paired {
                src,
                tgt,
                src_path,
                tgt_path,
                src_lang,
                tgt_lang,
                subset,
                excluded,
                tgt_buf,
            } => {
                let has_src = read_line(src, &mut self.buf, src_path)?;
                let has_tgt = read_line(tgt, tgt_buf, tgt_path)?;
                match (has_src, has_tgt) {
                    (false, false) => return Ok(None),
                    (true, true) => {}
                    (true, false) => {
                        let rest = count_rest(src, src_path)?;
                        return Err(Error::LineCountMismatch {
                            source_path: src_path.clone(),
                            source_lines: line + rest,
                            target_path: tgt_path.clone(),
                            target_lines: line - 1,
                        });
                    }
                    (false, true) => {
                        let rest = count_rest(tgt, tgt_path)?;
                        return Err(Error::LineCountMismatch {
                            source_path: src_path.clone(),
                            source_lines: line - 1,
                            target_path: tgt_path.clone(),
                            target_lines: line + rest,
                        });
                    }
                }
                let s = utf8(&self.buf, src_path, line)?;
                let t = utf8(tgt_buf, tgt_path, line)?;
                if *excluded {
                    return Ok(Some(Record::Excluded));
                }
                if let Some(reason) = text_problem(s, t) {
                    return Ok(Some(Record::Skipped(Skip { line, reason })));
                }
                Ok(Some(Record::Pair(SentencePair {
                    source: s.to_string(),
                    target: t.to_string(),
                    src_lang: *src_lang,
                    tgt_lang: *tgt_lang,
                    subset: subset.clone(),
                    origin: Default::default(),
                    repetition: 0,
                })))
            }
            Source::Tsv {
                reader,
                path,
                registry,
                exclude,
                last_subset,
            } => {
                if !read_line(reader, &mut self.buf, path)? {
                    return Ok(None);
                }
                let row = utf8(&self.buf, path, line)?;
                let parse_err = |message: String| Error::Parse {
                    path: path.clone(),
                    line,
                    message,
                };
                let cols: Vec<&str> = row.split('\t').collect();
                if cols.len() != 5 && cols.len() != 6 {
                    return Err(parse_err(format!(
                        "expected 5 or 6 tab-separated columns, found {}",
                        cols.len()
                    )));
                }
                let src_lang = registry
                    .parse(cols[0])
                    .map_err(|e| parse_err(e.to_string()))?;
                let tgt_lang = registry
                    .parse(cols[1])
                    .map_err(|e| parse_err(e.to_string()))?;
                if src_lang == tgt_lang {
                    return Err(parse_err(format!("identical languages {src_lang}")));
                }
                let repetition = match cols.get(5) {
                    Some(r) => r
                        .parse()
                        .map_err(|_| parse_err(format!("bad repetition index {r:?}")))?,
                    None => 0,
                };
                if exclude.iter().any(|x| x.eq_ignore_ascii_case(cols[4])) {
                    return Ok(Some(Record::Excluded));
                }
                if cols[2].trim().is_empty() || cols[3].trim().is_empty() {
                    return Ok(Some(Record::Skipped(Skip {
                        line,
                        reason: "empty side",
                    })));
                }
                // Share the subset allocation across consecutive rows.
                let subset = match last_subset {
                    Some(s) if &**s == cols[4] => s.clone(),
                    _ => {
                        let s: Arc<str> = Arc::from(cols[4]);
                        *last_subset = Some(s.clone());
                        s
                    }
                };
                Ok(Some(Record::Pair(SentencePair {
                    source: cols[2].to_string(),
                    target: cols[3].to_string(),
                    src_lang,
                    tgt_lang,
                    subset,
                    origin: Default::default(),
                    repetition,
                })))
            }
        }
    }
}

fn text_problem(source: &str, target: &str) -> Option<&'static str> {
    if source.trim().is_empty() || target.trim().is_empty() {
        Some("empty side")
    } else if source.contains('\t') || target.contains('\t') {
        Some("embedded tab")
    } else {
        None
    }
}

impl Iterator for PairReader {
    type Item = Result<Record>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_record() {
            Ok(Some(r)) => Some(Ok(r)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

fn collect(reader: PairReader) -> Result<Ingested> {
    let mut pairs = Vec::new();
    let mut skipped = Vec::new();
    let mut excluded = 0;
    for record in reader {
        match record? {
            Record::Pair(p) => pairs.push(p),
            Record::Skipped(s) => skipped.push(s),
            Record::Excluded => excluded += 1,
        }
    }
    Ok(Ingested {
        corpus: ParallelCorpus::from_pairs(pairs),
        skipped,
        excluded,
    })
}

/// Reads two aligned one-sentence-per-line files into a corpus.
pub fn ingest(
    source_path: &Path,
    target_path: &Path,
    src_lang: LanguageTag,
    tgt_lang: LanguageTag,
    options: &IngestOptions,
) -> Result<Ingested> {
    collect(PairReader::paired(
        source_path,
        target_path,
        src_lang,
        tgt_lang,
        options,
    )?)
}

pub fn ingest_tsv(path: &Path, options: &IngestOptions) -> Result<Ingested> {
    collect(PairReader::tsv(path, options)?)
}

/// Reads a corpus TSV with default options, failing on skipped rows.
pub fn read_tsv(path: &Path) -> Result<ParallelCorpus> {
    let ingested = ingest_tsv(path, &IngestOptions::default())?;
    if let Some(skip) = ingested.skipped.first() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: skip.line,
            message: skip.reason.to_string(),
        });
    }
    Ok(ingested.corpus)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TsvLayout {
    /// Five columns ending in the subset label.
    Corpus,
    /// Corpus columns plus the repetition index.
    Sampled,
    /// Five columns ending in the origin label.
    Mixture,
}

pub struct TsvWriter<W: Write> {
    out: BufWriter<W>,
    layout: TsvLayout,
}

impl TsvWriter<File> {
    pub fn create(path: &Path, layout: TsvLayout) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(TsvWriter::new(file, layout))
    }
}

impl<W: Write> TsvWriter<W> {
    pub fn new(inner: W, layout: TsvLayout) -> Self {
        TsvWriter {
            out: BufWriter::with_capacity(1 << 16, inner),
            layout,
        }
    }

    pub fn write(&mut self, p: &SentencePair) -> std::io::Result<()> {
        write!(
            self.out,
            "{}\t{}\t{}\t{}\t",
            p.src_lang, p.tgt_lang, p.source, p.target
        )?;
        match self.layout {
            TsvLayout::Corpus => writeln!(self.out, "{}", p.subset),
            TsvLayout::Sampled => writeln!(self.out, "{}\t{}", p.subset, p.repetition),
            TsvLayout::Mixture => writeln!(self.out, "{}", p.origin_label()),
        }
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.out.flush()?;
        self.out.into_inner().map_err(|e| e.into_error())
    }
}

pub fn write_tsv<'a>(
    path: &Path,
    pairs: impl IntoIterator<Item = &'a SentencePair>,
    layout: TsvLayout,
) -> Result<()> {
    let mut w = TsvWriter::create(path, layout)?;
    for p in pairs {
        w.write(p).map_err(|e| Error::io(path, e))?;
    }
    w.finish().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Plain-text sidecar: `line\treason` per dropped line.
pub fn write_skip_report(path: &Path, skipped: &[Skip]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for s in skipped {
        writeln!(out, "{}\t{}", s.line, s.reason).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_tag, ENGLISH};
    use std::fs;

    fn hin() -> LanguageTag {
        parse_tag("hin_Deva").unwrap()
    }

    #[test]
    fn paired_ingest_basic() {
        let dir = tempfile::tempdir().unwrap();
        let s = dir.path().join("s.txt");
        let t = dir.path().join("t.txt");
        fs::write(&s, "a\nb\nc\n").unwrap();
        fs::write(&t, "क\nख\nग").unwrap();
        let got = ingest(&s, &t, ENGLISH, hin(), &IngestOptions::default()).unwrap();
        assert_eq!(got.corpus.len(), 3);
        assert!(got.skipped.is_empty());
        assert_eq!(got.corpus.pairs()[2].target, "ग");
        assert_eq!(&*got.corpus.pairs()[0].subset, "general");
    }

    #[test]
    fn paired_ingest_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let s = dir.path().join("s.txt");
        let t = dir.path().join("t.txt");
        fs::write(&s, "a\nb\nc\n").unwrap();
        fs::write(&t, "x\ny\n").unwrap();
        match ingest(&s, &t, ENGLISH, hin(), &IngestOptions::default()) {
            Err(Error::LineCountMismatch {
                source_lines: 3,
                target_lines: 2,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match ingest(&t, &s, ENGLISH, hin(), &IngestOptions::default()) {
            Err(Error::LineCountMismatch {
                source_lines: 2,
                target_lines: 3,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn paired_ingest_skips_blank() {
        let dir = tempfile::tempdir().unwrap();
        let s = dir.path().join("s.txt");
        let t = dir.path().join("t.txt");
        fs::write(&s, "a\nb\nc\nd\ne\n").unwrap();
        fs::write(&t, "1\n2\n  \n4\n5\n").unwrap();
        let got = ingest(&s, &t, ENGLISH, hin(), &IngestOptions::default()).unwrap();
        assert_eq!(got.corpus.len(), 4);
        assert_eq!(
            got.skipped,
            vec![Skip {
                line: 3,
                reason: "empty side"
            }]
        );
        let report = dir.path().join("skips.txt");
        write_skip_report(&report, &got.skipped).unwrap();
        assert_eq!(fs::read_to_string(report).unwrap(), "3\tempty side\n");
    }

    #[test]
    fn invalid_utf8_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let s = dir.path().join("s.txt");
        let t = dir.path().join("t.txt");
        fs::write(&s, b"a\nb\xff\n").unwrap();
        fs::write(&t, "x\ny\n").unwrap();
        match ingest(&s, &t, ENGLISH, hin(), &IngestOptions::default()) {
            Err(Error::InvalidUtf8 { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.txt");
        assert!(matches!(
            ingest(&missing, &missing, ENGLISH, hin(), &IngestOptions::default()),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn tsv_round_trip_and_filter() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        fs::write(
            &path,
            "eng_Latn\thin_Deva\thello\tनमस्ते\tWiki\n\
             eng_Latn\tben_Beng\tbye\t \tWiki\n\
             eng_Latn\ttam_Taml\tyes\tஆம்\tcomparable\n",
        )
        .unwrap();
        let mut opts = IngestOptions::default();
        opts.exclude_subsets.insert("Comparable".into());
        let got = ingest_tsv(&path, &opts).unwrap();
        assert_eq!(got.corpus.len(), 1);
        assert_eq!(got.skipped.len(), 1);
        assert_eq!(got.excluded, 1);

        let out = dir.path().join("out.tsv");
        write_tsv(&out, got.corpus.pairs(), TsvLayout::Corpus).unwrap();
        assert_eq!(read_tsv(&out).unwrap(), got.corpus);
        assert_eq!(
            fs::read_to_string(&out).unwrap(),
            "eng_Latn\thin_Deva\thello\tनमस्ते\tWiki\n"
        );
    }

    #[test]
    fn tsv_structural_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        fs::write(&path, "eng_Latn\thin_Deva\thello\n").unwrap();
        assert!(matches!(read_tsv(&path), Err(Error::Parse { line: 1, .. })));
        fs::write(&path, "eng_Latn\txyz_Deva\ta\tb\tx\n").unwrap();
        assert!(matches!(read_tsv(&path), Err(Error::Parse { line: 1, .. })));
    }
}
