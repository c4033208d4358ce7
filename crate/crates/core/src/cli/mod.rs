//! The `mtprep` command line: one subcommand per pipeline stage.
//!
//! Every subcommand that writes a file also writes a [`RunManifest`] to
//! `<out>.manifest.json`. Settings resolve as flag, then the
//! `PIPELINE_CONFIG` file (see [`config`]), then the built-in default.

pub mod config;
pub mod manifest;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::augment::{
    self, mixture, seed as seedsel, AugmentationPolicy, LanguageChoice, LexiconSet,
};
use crate::corpus::{
    self, io::Record, CorpusStats, IngestOptions, PairReader, ParallelCorpus, TsvLayout, TsvWriter,
};
use crate::error::{Error, Result};
use crate::evalharness::{self, ScoreRow};
use crate::lang::{registry_entries, LanguagePair, LanguageTag, Registry};
use crate::lexicon::{self, LexiconFormat};
use crate::sampling;
use crate::trainconfig::{self, Phase};

pub use config::PipelineConfig;
pub use manifest::RunManifest;

#[derive(Parser, Debug)]
#[command(name = "mtprep", version, about = "Corpus preparation and scoring for multilingual MT")]
pub struct Cli {
    /// Seed for every random choice; a random seed is drawn and recorded when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (output does not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Extra accepted language tags, one per line.
    #[arg(long, global = true, value_name = "PATH")]
    pub registry: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Read paired line files or a corpus TSV into a validated corpus TSV.
    Ingest(IngestArgs),
    /// Per-language pair counts of a corpus TSV or a counts file.
    Stats(StatsArgs),
    /// Downsample languages above a size threshold.
    Reduce(ReduceArgs),
    /// Temperature-sampling plan and, for a corpus, the sampled corpus.
    Sample(SampleArgs),
    /// Load a MUSE or GATITOS lexicon and keep the top-k entries.
    Lexicon(LexiconArgs),
    /// Code-switch English sources by dictionary substitution.
    Augment(AugmentArgs),
    /// Originals, their reversals and augmented pairs in one file.
    Mixture(MixtureArgs),
    /// Proportional draw from the seed subsets.
    SeedSelect(SeedSelectArgs),
    /// BLEU, chrF and chrF++ of one system output.
    Score(ScoreArgs),
    /// Table of score rows with an average row.
    Report(ReportArgs),
    /// Trainer hyperparameter manifest.
    TrainConfig(TrainConfigArgs),
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// Corpus TSV (`src_lang, tgt_lang, source, target, subset`).
    #[arg(long = "in", conflicts_with_all = ["src", "tgt"])]
    pub input: Option<PathBuf>,
    /// Source side, one sentence per line.
    #[arg(long, requires_all = ["tgt", "pair"])]
    pub src: Option<PathBuf>,
    #[arg(long, requires = "src")]
    pub tgt: Option<PathBuf>,
    /// Direction of the paired files, e.g. `eng_Latn-hin_Deva`.
    #[arg(long)]
    pub pair: Option<String>,
    /// Subset label for paired files.
    #[arg(long, default_value = "general")]
    pub subset: String,
    /// Drop rows of this subset (repeatable), e.g. `comparable`.
    #[arg(long = "exclude-subset")]
    pub exclude_subset: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
    /// Skip report; defaults to `<out>.skipped`.
    #[arg(long)]
    pub skipped: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `corpus` (TSV of pairs) or `counts` (`lang<TAB>count` lines).
    #[arg(long, default_value = "corpus")]
    pub format: String,
    /// Counts TSV `lang<TAB>pairs`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub threshold: Option<u64>,
    #[arg(long)]
    pub factor: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `corpus` writes the sampled corpus to `--out`; `counts` writes the plan.
    #[arg(long, default_value = "corpus")]
    pub format: String,
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Pairs to draw; defaults to the input size.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Plan TSV `lang, n, p, c` (corpus format only).
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Raw versus sampled distribution for plotting.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LexiconArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `muse` or `gatitos`.
    #[arg(long)]
    pub format: Option<String>,
    /// `eng_Latn-<lang>`.
    #[arg(long)]
    pub pair: String,
    #[arg(long)]
    pub topk: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AugmentArgs {
    /// English-source corpus TSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `LANG=PATH`, repeatable.
    #[arg(long = "lexicon", required = true)]
    pub lexicons: Vec<String>,
    /// Lexicon file format.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub topk: Option<usize>,
    #[arg(long)]
    pub prob: Option<f64>,
    /// `random-language` or `pair-target`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MixtureArgs {
    /// Original English-source corpus TSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Augmented corpus TSV.
    #[arg(long)]
    pub augmented: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SeedSelectArgs {
    /// Corpus TSV whose subset column names seed subsets.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[arg(long)]
    pub hyp: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub pair: String,
    /// Row TSV, readable by `report`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Row TSVs from `score` or `report` (repeatable).
    #[arg(long = "in", required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrainConfigArgs {
    /// `pretrain` or `finetune`.
    #[arg(long)]
    pub phase: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ingest(_) => "ingest",
            Command::Stats(_) => "stats",
            Command::Reduce(_) => "reduce",
            Command::Sample(_) => "sample",
            Command::Lexicon(_) => "lexicon",
            Command::Augment(_) => "augment",
            Command::Mixture(_) => "mixture",
            Command::SeedSelect(_) => "seed-select",
            Command::Score(_) => "score",
            Command::Report(_) => "report",
            Command::TrainConfig(_) => "train-config",
        }
    }
}

/// What a subcommand did, before digests and timing are attached.
struct Outcome {
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    /// Where the manifest goes; `None` when nothing was written.
    primary: Option<PathBuf>,
    config: BTreeMap<String, Value>,
    summary: Value,
}

impl Outcome {
    fn new(inputs: Vec<PathBuf>, outputs: Vec<PathBuf>, primary: Option<PathBuf>) -> Self {
        Outcome {
            inputs,
            outputs,
            primary,
            config: BTreeMap::new(),
            summary: Value::Null,
        }
    }

    fn set(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.config.insert(key.to_string(), value.into());
        self
    }

    fn summary(mut self, summary: Value) -> Self {
        self.summary = summary;
        self
    }
}

struct Ctx<'a> {
    cfg: &'a PipelineConfig,
    seed: u64,
    registry: Registry,
    stdout: &'a mut (dyn Write + Send),
    stderr: &'a mut (dyn Write + Send),
}

impl Ctx<'_> {
    fn options(&self) -> IngestOptions {
        IngestOptions {
            registry: self.registry.clone(),
            ..IngestOptions::default()
        }
    }

    fn pair(&self, text: &str) -> Result<LanguagePair> {
        LanguagePair::parse_with(&self.registry, text)
    }

    fn say(&mut self, text: &str) -> Result<()> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))
    }

    fn warn(&mut self, text: &str) {
        let _ = writeln!(self.stderr, "{text}");
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

/// Reads a whole corpus TSV, failing on malformed rows.
fn load_corpus(path: &Path, options: &IngestOptions) -> Result<ParallelCorpus> {
    let ingested = corpus::io::ingest_tsv(path, options)?;
    if let Some(skip) = ingested.skipped.first() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: skip.line,
            message: skip.reason.to_string(),
        });
    }
    Ok(ingested.corpus)
}

/// `lang<TAB>count` per line; a header starting with `lang` is skipped.
fn read_counts(path: &Path, registry: &Registry) -> Result<CorpusStats> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut stats = CorpusStats::default();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("lang")) {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i as u64 + 1,
            message,
        };
        let mut f = line.split('\t');
        let (Some(tag), Some(n)) = (f.next(), f.next()) else {
            return Err(err("expected `lang<TAB>count`".into()));
        };
        let tag = registry.parse(tag)?;
        let n: u64 = n.trim().parse().map_err(|e| err(format!("count {n:?}: {e}")))?;
        if stats.count(tag) > 0 {
            return Err(err(format!("{tag} listed twice")));
        }
        stats.add(tag, n);
    }
    Ok(stats)
}

fn stream_stats(path: &Path, options: &IngestOptions) -> Result<(CorpusStats, u64)> {
    let mut stats = CorpusStats::default();
    let mut skipped = 0;
    for record in PairReader::tsv(path, options)? {
        match record? {
            Record::Pair(p) => stats.add(p.language(), 1),
            Record::Skipped(_) => skipped += 1,
            Record::Excluded => {}
        }
    }
    Ok((stats, skipped))
}

fn stats_json(stats: &CorpusStats) -> Value {
    let per: serde_json::Map<String, Value> = stats
        .iter()
        .map(|(t, n)| (t.to_string(), json!(n)))
        .collect();
    json!({ "total": stats.total(), "languages": per })
}

/// Table in the registry's row order: language, script, tag, pairs, millions.
pub fn render_stats(stats: &CorpusStats) -> String {
    let mut rows: Vec<(String, String, LanguageTag, u64)> = Vec::new();
    let entries = registry_entries();
    for e in entries {
        let n = stats.count(e.tag);
        if n > 0 {
            rows.push((e.language.into(), e.script_name.into(), e.tag, n));
        }
    }
    for (tag, n) in stats.iter() {
        if !entries.iter().any(|e| e.tag == tag) {
            rows.push(("-".into(), "-".into(), tag, n));
        }
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12}{:<14}{:<10}{:>12}{:>10}",
        "Language", "Script", "Tag", "Pairs", "Millions"
    );
    for (lang, script, tag, n) in rows {
        let _ = writeln!(
            out,
            "{lang:<12}{script:<14}{:<10}{n:>12}{:>10.2}",
            tag.to_string(),
            n as f64 / 1e6
        );
    }
    let _ = writeln!(
        out,
        "{:<36}{:>12}{:>10.2}",
        "Total",
        stats.total(),
        stats.total() as f64 / 1e6
    );
    out
}

fn write_counts(path: &Path, stats: &CorpusStats) -> Result<()> {
    let mut text = String::from("lang\tpairs\n");
    for (t, n) in stats.iter() {
        let _ = writeln!(text, "{t}\t{n}");
    }
    std::fs::write(path, text).map_err(io_err(path))
}

fn parse_format(text: &str) -> Result<LexiconFormat> {
    text.parse()
}

fn cmd_ingest(a: &IngestArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let mut options = ctx.options();
    options.subset = a.subset.clone();
    options.exclude_subsets = a.exclude_subset.iter().cloned().collect();
    let skipped_path = a.skipped.clone().unwrap_or_else(|| {
        let mut s = a.out.as_os_str().to_owned();
        s.push(".skipped");
        PathBuf::from(s)
    });
    let (reader, inputs) = match (&a.input, &a.src, &a.tgt) {
        (Some(tsv), None, None) => (PairReader::tsv(tsv, &options)?, vec![tsv.clone()]),
        (None, Some(src), Some(tgt)) => {
            let pair = ctx.pair(a.pair.as_deref().unwrap_or_default())?;
            let reader = PairReader::paired(src, tgt, pair.src, pair.tgt, &options)?;
            (reader, vec![src.clone(), tgt.clone()])
        }
        _ => {
            return Err(Error::InvalidParameter(
                "ingest needs either --in or both --src and --tgt".into(),
            ))
        }
    };
    let mut writer = TsvWriter::create(&a.out, TsvLayout::Corpus)?;
    let mut skips = Vec::new();
    let mut excluded = 0u64;
    let mut stats = CorpusStats::default();
    for record in reader {
        match record? {
            Record::Pair(p) => {
                stats.add(p.language(), 1);
                writer.write(&p).map_err(io_err(&a.out))?;
            }
            Record::Skipped(s) => skips.push(s),
            Record::Excluded => excluded += 1,
        }
    }
    writer.finish().map_err(io_err(&a.out))?;
    corpus::io::write_skip_report(&skipped_path, &skips)?;
    if !skips.is_empty() {
        ctx.warn(&format!(
            "skipped {} line(s), see {}",
            skips.len(),
            skipped_path.display()
        ));
    }
    Ok(Outcome::new(inputs, vec![a.out.clone(), skipped_path], Some(a.out.clone()))
        .set("subset", a.subset.clone())
        .set("exclude_subsets", a.exclude_subset.clone())
        .set("pair", a.pair.clone())
        .summary(json!({
            "pairs": stats.total(),
            "skipped": skips.len(),
            "excluded": excluded,
            "stats": stats_json(&stats),
        })))
}

fn cmd_stats(a: &StatsArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let (stats, skipped) = match a.format.as_str() {
        "corpus" => stream_stats(&a.input, &ctx.options())?,
        "counts" => (read_counts(&a.input, &ctx.registry)?, 0),
        f => {
            return Err(Error::InvalidParameter(format!(
                "unknown stats format {f:?}: expected `corpus` or `counts`"
            )))
        }
    };
    ctx.say(&render_stats(&stats))?;
    let mut outputs = Vec::new();
    if let Some(out) = &a.out {
        write_counts(out, &stats)?;
        outputs.push(out.clone());
    }
    Ok(Outcome::new(vec![a.input.clone()], outputs, a.out.clone())
        .set("format", a.format.clone())
        .summary(json!({ "skipped": skipped, "stats": stats_json(&stats) })))
}

fn cmd_reduce(a: &ReduceArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let threshold = ctx.cfg.pick(a.threshold, "threshold", corpus::DEFAULT_THRESHOLD)?;
    let factor = ctx.cfg.pick(a.factor, "factor", corpus::DEFAULT_FACTOR)?;
    let input = load_corpus(&a.input, &ctx.options())?;
    let before = corpus::stats(&input);
    let reduced = corpus::reduce_highresource(&input, threshold, factor, ctx.seed)?;
    drop(input);
    corpus::io::write_tsv(&a.out, reduced.pairs(), TsvLayout::Corpus)?;
    let after = corpus::stats(&reduced);
    Ok(Outcome::new(vec![a.input.clone()], vec![a.out.clone()], Some(a.out.clone()))
        .set("threshold", threshold)
        .set("factor", factor)
        .summary(json!({ "before": stats_json(&before), "after": stats_json(&after) })))
}

fn cmd_sample(a: &SampleArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let temperature = ctx
        .cfg
        .pick(a.temperature, "temperature", sampling::DEFAULT_TEMPERATURE)?;
    let mut outputs = vec![a.out.clone()];
    let plan = match a.format.as_str() {
        "counts" => {
            let stats = read_counts(&a.input, &ctx.registry)?;
            let budget = ctx.cfg.pick(a.budget, "budget", stats.total())?;
            let plan = sampling::distribution(&stats, temperature)?
                .with_budget(budget)
                .with_seed(ctx.seed);
            plan.save(&a.out, a.plot.as_deref())?;
            plan
        }
        "corpus" => {
            let corpus = load_corpus(&a.input, &ctx.options())?;
            let stats = corpus::stats(&corpus);
            let budget = ctx.cfg.pick(a.budget, "budget", stats.total())?;
            let plan = sampling::distribution(&stats, temperature)?
                .with_budget(budget)
                .with_seed(ctx.seed);
            let sampled = sampling::materialize(&plan, &corpus, budget)?;
            drop(corpus);
            corpus::io::write_tsv(&a.out, sampled.pairs(), TsvLayout::Sampled)?;
            if let Some(p) = &a.plan {
                plan.save(p, None)?;
                outputs.push(p.clone());
            }
            plan
        }
        f => {
            return Err(Error::InvalidParameter(format!(
                "unknown sample format {f:?}: expected `corpus` or `counts`"
            )))
        }
    };
    if let Some(p) = &a.plot {
        if a.format == "corpus" {
            let mut buf = Vec::new();
            plan.write_plot_data(&mut buf).map_err(io_err(p))?;
            std::fs::write(p, buf).map_err(io_err(p))?;
        }
        outputs.push(p.clone());
    }
    let mut table = String::from("lang\tn\tp\tc\n");
    for e in &plan.entries {
        let _ = writeln!(table, "{}\t{}\t{:.6}\t{}", e.lang, e.count, e.probability, e.target);
    }
    ctx.say(&table)?;
    Ok(Outcome::new(vec![a.input.clone()], outputs, Some(a.out.clone()))
        .set("format", a.format.clone())
        .set("temperature", temperature)
        .set("budget", plan.budget)
        .summary(serde_json::to_value(&plan)?))
}

fn cmd_lexicon(a: &LexiconArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let format = parse_format(&ctx.cfg.pick(a.format.clone(), "format", "muse".into())?)?;
    let topk = ctx.cfg.pick(a.topk, "topk", lexicon::DEFAULT_TOP_K)?;
    let pair = ctx.pair(&a.pair)?;
    if !pair.src.is_english() {
        return Err(Error::Direction(format!(
            "lexicons are English-centric, got {pair}"
        )));
    }
    let loaded = lexicon::load(&a.input, format, pair.tgt)?;
    if !loaded.skipped_lines.is_empty() {
        ctx.warn(&format!(
            "{}: skipped {} malformed line(s): {:?}",
            a.input.display(),
            loaded.skipped_lines.len(),
            loaded.skipped_lines
        ));
    }
    let lex = lexicon::truncate_topk(&loaded.lexicon, topk)?;
    let mut buf = Vec::new();
    lex.write_tsv(&mut buf).map_err(io_err(&a.out))?;
    std::fs::write(&a.out, buf).map_err(io_err(&a.out))?;
    Ok(Outcome::new(vec![a.input.clone()], vec![a.out.clone()], Some(a.out.clone()))
        .set("format", format.to_string())
        .set("topk", topk)
        .set("pair", pair.to_string())
        .summary(json!({
            "loaded_entries": loaded.lexicon.len(),
            "kept_entries": lex.len(),
            "skipped_lines": loaded.skipped_lines,
        })))
}

fn parse_lexicon_arg(text: &str, ctx: &Ctx) -> Result<(LanguageTag, PathBuf)> {
    let (lang, path) = text.split_once('=').ok_or_else(|| {
        Error::InvalidParameter(format!("--lexicon expects LANG=PATH, got {text:?}"))
    })?;
    Ok((ctx.registry.parse(lang)?, PathBuf::from(path)))
}

fn cmd_augment(a: &AugmentArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let format = parse_format(&ctx.cfg.pick(a.format.clone(), "format", "muse".into())?)?;
    let topk = ctx.cfg.pick(a.topk, "topk", lexicon::DEFAULT_TOP_K)?;
    let prob = ctx.cfg.pick(a.prob, "prob", augment::DEFAULT_PROBABILITY)?;
    let mode: LanguageChoice = ctx
        .cfg
        .pick(a.mode.clone(), "mode", "random-language".into())?
        .parse()?;
    let policy = AugmentationPolicy::new(prob, topk, mode, ctx.seed)?;
    let mut inputs = vec![a.input.clone()];
    let mut lexicons = Vec::new();
    let mut lexicon_sizes = serde_json::Map::new();
    for spec in &a.lexicons {
        let (lang, path) = parse_lexicon_arg(spec, ctx)?;
        let loaded = lexicon::load(&path, format, lang)?;
        if !loaded.skipped_lines.is_empty() {
            ctx.warn(&format!(
                "{}: skipped {} malformed line(s)",
                path.display(),
                loaded.skipped_lines.len()
            ));
        }
        lexicon_sizes.insert(lang.to_string(), json!(loaded.lexicon.len().min(topk)));
        lexicons.push(loaded.lexicon);
        inputs.push(path);
    }
    let set = LexiconSet::new(lexicons, topk)?;
    let records = PairReader::tsv(&a.input, &ctx.options())?;
    let mut writer = TsvWriter::create(&a.out, TsvLayout::Corpus)?;
    let stats = augment::augment_stream(records, &set, &policy, &mut writer, augment::STREAM_CHUNK)?;
    writer.finish().map_err(io_err(&a.out))?;
    Ok(Outcome::new(inputs, vec![a.out.clone()], Some(a.out.clone()))
        .set("format", format.to_string())
        .set("topk", topk)
        .set("prob", prob)
        .set("mode", mode.to_string())
        .set("lexicons", a.lexicons.clone())
        .summary(json!({
            "stats": stats,
            "replacement_rate": stats.replacement_rate(),
            "lexicon_entries": lexicon_sizes,
        })))
}

fn cmd_mixture(a: &MixtureArgs, _ctx: &mut Ctx) -> Result<Outcome> {
    let mut writer = TsvWriter::create(&a.out, TsvLayout::Mixture)?;
    let manifest = mixture::write_mixture(&a.input, &a.augmented, &mut writer)?;
    writer.finish().map_err(io_err(&a.out))?;
    Ok(Outcome::new(
        vec![a.input.clone(), a.augmented.clone()],
        vec![a.out.clone()],
        Some(a.out.clone()),
    )
    .summary(serde_json::to_value(&manifest)?))
}

fn cmd_seed_select(a: &SeedSelectArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let budget = ctx.cfg.pick(a.budget, "budget", seedsel::DEFAULT_SEED_BUDGET)?;
    let pool = load_corpus(&a.input, &ctx.options())?;
    let groups = seedsel::group_by_subset(pool)?;
    let sizes: BTreeMap<_, _> = groups.iter().map(|(k, v)| (*k, v.len() as u64)).collect();
    let allocation = seedsel::seed_allocation(&sizes, budget)?;
    let selected = seedsel::select_seed(groups, budget, ctx.seed)?;
    corpus::io::write_tsv(&a.out, selected.pairs(), TsvLayout::Mixture)?;
    let alloc: serde_json::Map<String, Value> = allocation
        .iter()
        .map(|(k, v)| (k.label().to_string(), json!({ "available": sizes[k], "selected": v })))
        .collect();
    Ok(Outcome::new(vec![a.input.clone()], vec![a.out.clone()], Some(a.out.clone()))
        .set("budget", budget)
        .summary(json!({ "selected": selected.len(), "subsets": alloc })))
}

fn cmd_score(a: &ScoreArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let pair = ctx.pair(&a.pair)?;
    let row = evalharness::score_run(&a.hyp, &a.reference, pair)?;
    let report = evalharness::report(vec![row.clone()])?;
    ctx.say(&report.render_text())?;
    let mut outputs = Vec::new();
    if let Some(out) = &a.out {
        std::fs::write(out, report.render_tsv()).map_err(io_err(out))?;
        outputs.push(out.clone());
    }
    Ok(Outcome::new(vec![a.hyp.clone(), a.reference.clone()], outputs, a.out.clone())
        .set("pair", pair.to_string())
        .set("signatures", report.signatures.to_vec())
        .summary(json!({ "bleu": row.bleu, "chrf": row.chrf, "chrfpp": row.chrfpp })))
}

fn cmd_report(a: &ReportArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let mut rows: Vec<ScoreRow> = Vec::new();
    for p in &a.inputs {
        rows.extend(evalharness::parse_rows_tsv(p)?);
    }
    let report = evalharness::report(rows)?;
    ctx.say(&report.render_text())?;
    let mut outputs = Vec::new();
    if let Some(out) = &a.out {
        std::fs::write(out, report.render_tsv()).map_err(io_err(out))?;
        outputs.push(out.clone());
    }
    Ok(Outcome::new(a.inputs.clone(), outputs, a.out.clone())
        .summary(json!({ "rows": report.rows.len(), "average": report.average })))
}

fn cmd_train_config(a: &TrainConfigArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let phase: Phase = a.phase.parse()?;
    let text = trainconfig::emit(phase).to_json()?;
    match &a.out {
        Some(out) => std::fs::write(out, &text).map_err(io_err(out))?,
        None => ctx.say(&text)?,
    }
    Ok(Outcome::new(vec![], a.out.iter().cloned().collect(), a.out.clone())
        .set("phase", phase.to_string()))
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Result<Outcome> {
    match command {
        Command::Ingest(a) => cmd_ingest(a, ctx),
        Command::Stats(a) => cmd_stats(a, ctx),
        Command::Reduce(a) => cmd_reduce(a, ctx),
        Command::Sample(a) => cmd_sample(a, ctx),
        Command::Lexicon(a) => cmd_lexicon(a, ctx),
        Command::Augment(a) => cmd_augment(a, ctx),
        Command::Mixture(a) => cmd_mixture(a, ctx),
        Command::SeedSelect(a) => cmd_seed_select(a, ctx),
        Command::Score(a) => cmd_score(a, ctx),
        Command::Report(a) => cmd_report(a, ctx),
        Command::TrainConfig(a) => cmd_train_config(a, ctx),
    }
}

/// Runs a parsed command line with an explicit defaults file. Returns the
/// manifest, which is also written beside the primary output if there is one.
pub fn execute(
    cli: &Cli,
    cfg: &PipelineConfig,
    stdout: &mut (dyn Write + Send),
    stderr: &mut (dyn Write + Send),
) -> Result<RunManifest> {
    let start = Instant::now();
    let (seed, seed_source) = match (cli.seed, cfg.get::<u64>("seed")?) {
        (Some(s), _) => (s, "flag"),
        (None, Some(s)) => (s, "config"),
        (None, None) => (rand::random::<u64>(), "random"),
    };
    let threads = cfg.pick(cli.threads, "threads", 0usize)?;
    let registry = match &cli.registry {
        Some(p) => Registry::with_overrides(p)?,
        None => Registry::builtin().clone(),
    };
    let mut ctx = Ctx {
        cfg,
        seed,
        registry,
        stdout,
        stderr,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| dispatch(&cli.command, &mut ctx))?;

    let mut config = outcome.config;
    config.insert("threads".into(), json!(pool.current_num_threads()));
    if let Some(p) = &cli.registry {
        config.insert("registry".into(), json!(p.display().to_string()));
    }
    if let Some(p) = &cfg.path {
        config.insert("config_file".into(), json!(p.display().to_string()));
    }
    let mut inputs = outcome.inputs;
    if let Some(p) = &cli.registry {
        inputs.push(p.clone());
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: cli.command.name().into(),
        config,
        seed,
        seed_source: seed_source.into(),
        inputs: manifest::digests(&inputs)?,
        outputs: manifest::digests(&outcome.outputs)?,
        summary: outcome.summary,
        wall_time_secs: start.elapsed().as_secs_f64(),
        peak_rss_kb: manifest::peak_rss_kb(),
    };
    if let Some(primary) = &outcome.primary {
        manifest.write(&manifest::manifest_path(primary))?;
    }
    Ok(manifest)
}

/// Entry point for the binary: parses `argv`, reads `PIPELINE_CONFIG` and
/// returns the process exit status.
pub fn run<I, T>(argv: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let result = PipelineConfig::from_env().and_then(|cfg| execute(&cli, &cfg, stdout, stderr));
    match result {
        Ok(_) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "mtprep {}: error: {e}", cli.command.name());
            1
        }
    }
}
