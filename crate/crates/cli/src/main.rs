mod config;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use strahler_core::binarize::{binarize, Binary2Order, BinarizeMethod, PriorityTable};
use strahler_core::conllu::{parse_conllu, scan_corpus, CorpusSource, IngestReport, SentenceOutcome};
use strahler_core::ensembles::{r2_table, r_limit_table, EnsembleError, EnsembleTable, DEFAULT_N_MAX, R2_SIZE_LIMIT};
use strahler_core::limits::{limit_pair, LimitMode};
use strahler_core::shift_reduce::{evaluate, min_stack_depth, sethi_ullman_order, TraversalOrder, MAX_EXHAUSTIVE_INNER};
use strahler_core::stats::{
    aggregate, analyze, export_text, histogram, length_histogram, median, resample_r2, resample_expectation,
    write_histograms, write_records, write_rows, Analysis, AnalysisConfig, ExportFormat, GroupBy, Measure,
    StatsError,
};
use strahler_core::tree::{strahler, BinTree, Side};

use config::{load_config, parse_bool, Overrides, Settings};

/// Strahler numbers of dependency trees and random-tree baselines.
#[derive(Debug, Parser)]
#[command(name = "strahler", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Key-value settings file; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory searched (recursively) for UD_* treebank directories.
    #[arg(long, global = true, value_name = "DIR")]
    ud_root: Option<PathBuf>,
    /// Relation priorities for Binary1, `label<TAB>rank` per line.
    #[arg(long, global = true, value_name = "FILE")]
    priority_table: Option<PathBuf>,
    /// Remove `punct` nodes before computing anything (`--drop-punct=false` to override a config file).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true", value_parser = parse_bool, value_name = "BOOL")]
    drop_punct: Option<bool>,
    /// Attachment order used by Binary2 and for Binary1 ties.
    #[arg(long, global = true, value_name = "near-first|far-first")]
    binary2_order: Option<Binary2Order>,
    /// Largest tree size for ensemble tables.
    #[arg(long, global = true, value_name = "N")]
    n_max: Option<usize>,
    /// Random seed for resampling.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_name = "csv|json")]
    format: Option<ExportFormat>,
    /// Output file (standard output if absent).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-sentence measures over treebanks: aggregates, records or histograms.
    Analyze {
        /// CoNLL-U files or directories; defaults to the UD root.
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "all", value_name = "all|corpus|n")]
        group_by: GroupBy,
        #[arg(long, value_enum, default_value_t = Emit::Aggregate)]
        emit: Emit,
    },
    /// Limits and binarization Strahler numbers for each sentence of CoNLL-U input.
    Limits {
        /// CoNLL-U files; standard input if none or `-`.
        inputs: Vec<PathBuf>,
    },
    /// Exact random-tree ensemble statistics for every size up to n-max.
    Ensemble {
        #[arg(long, value_enum, default_value_t = Kind::R2)]
        kind: Kind,
        /// One row per (n, value) instead of per-size summaries.
        #[arg(long)]
        distribution: bool,
    },
    /// Shift-reduce evaluation trace of a bracketed binary tree such as `((1,2),(3,4))`.
    Shiftreduce {
        tree: String,
        /// sethi-ullman, left, right, or a bit mask (bit i set: inner node i evaluates its right child first).
        #[arg(long, default_value = "sethi-ullman")]
        order: String,
    },
    /// Draws Strahler numbers of random binary trees with the corpus sentence lengths.
    Resample {
        /// CoNLL-U files or directories; defaults to the UD root.
        inputs: Vec<PathBuf>,
    },
    /// Writes one corpus as plain text, one sentence per line.
    ExportText {
        /// Treebank directory name, e.g. UD_English-EWT.
        corpus: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Aggregate,
    Records,
    Histogram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    R2,
    RUpper,
    RLower,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

type Result<T, E = CliError> = std::result::Result<T, E>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = cli.global;
    let flags = Overrides {
        ud_root: g.ud_root,
        priority_table: g.priority_table,
        drop_punct: g.drop_punct,
        binary2_order: g.binary2_order,
        n_max: g.n_max,
        seed: g.seed,
        format: g.format,
        out: g.out,
    };
    let file = match &g.config {
        Some(path) => load_config(path)?,
        None => Overrides::default(),
    };
    let settings = Settings::from(flags.over(file));
    match cli.command {
        Command::Analyze { inputs, group_by, emit } => cmd_analyze(&settings, &inputs, group_by, emit),
        Command::Limits { inputs } => cmd_limits(&settings, &inputs),
        Command::Ensemble { kind, distribution } => cmd_ensemble(&settings, kind, distribution),
        Command::Shiftreduce { tree, order } => cmd_shiftreduce(&settings, &tree, &order),
        Command::Resample { inputs } => cmd_resample(&settings, &inputs),
        Command::ExportText { corpus } => cmd_export_text(&settings, &corpus),
    }
}

fn output(settings: &Settings) -> Result<Box<dyn Write>> {
    Ok(match &settings.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn analysis_config(settings: &Settings) -> Result<AnalysisConfig> {
    let priority_table = match &settings.priority_table {
        Some(path) => {
            let f = File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            PriorityTable::read(BufReader::new(f)).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        }
        None => PriorityTable::default(),
    };
    Ok(AnalysisConfig {
        priority_table,
        binary2_order: settings.binary2_order,
        drop_punct: settings.drop_punct,
    })
}

/// Corpora from explicit inputs, or from the UD root.
fn sources(settings: &Settings, inputs: &[PathBuf]) -> Result<Vec<CorpusSource>> {
    if inputs.is_empty() {
        let Some(root) = &settings.ud_root else {
            return Err(CliError::Usage("no inputs given and no --ud-root set".into()));
        };
        if !root.is_dir() {
            return Err(CliError::Data(format!("{} is not a directory", root.display())));
        }
        let found = scan_corpus(root)?;
        if found.is_empty() {
            return Err(CliError::Data(format!("no UD_* treebanks under {}", root.display())));
        }
        return Ok(found);
    }
    let mut out = Vec::new();
    let mut loose: BTreeMap<String, Vec<PathBuf>> = BTreeMap::new();
    for input in inputs {
        if input.is_dir() {
            let found = scan_corpus(input)?;
            if found.is_empty() {
                return Err(CliError::Data(format!("no UD_* treebanks under {}", input.display())));
            }
            out.extend(found);
        } else if input.is_file() {
            let name = input
                .parent()
                .and_then(Path::file_name)
                .and_then(|n| n.to_str())
                .unwrap_or("input")
                .to_string();
            loose.entry(name).or_default().push(input.clone());
        } else {
            return Err(CliError::Data(format!("{}: no such file or directory", input.display())));
        }
    }
    for (name, paths) in loose {
        out.push(CorpusSource::from_files(name, paths)?);
    }
    Ok(out)
}

fn report_ingest(report: &IngestReport, per_corpus: &BTreeMap<String, IngestReport>) {
    eprintln!("parsed {} sentences, skipped {}", report.parsed, report.skipped);
    for (reason, count) in &report.skip_reasons {
        eprintln!("  skipped {reason}: {count}");
    }
    for (name, r) in per_corpus.iter().filter(|(_, r)| r.skipped > 0) {
        eprintln!("  {name}: {} skipped of {}", r.skipped, r.total());
    }
}

fn run_analysis(settings: &Settings, inputs: &[PathBuf]) -> Result<Analysis> {
    let corpora = sources(settings, inputs)?;
    let records: usize = corpora.iter().map(|c| c.sentence_count).sum();
    eprintln!("analyzing {} corpora ({records} sentence records)", corpora.len());
    let analysis = analyze(&corpora, &analysis_config(settings)?)?;
    report_ingest(&analysis.report, &analysis.per_corpus);
    let violations = analysis.bracket_violations().count();
    if violations > 0 {
        return Err(CliError::Data(format!("{violations} sentences violate lower <= binary <= upper")));
    }
    Ok(analysis)
}

fn cmd_analyze(settings: &Settings, inputs: &[PathBuf], by: GroupBy, emit: Emit) -> Result<()> {
    let analysis = run_analysis(settings, inputs)?;
    let mut out = output(settings)?;
    match emit {
        Emit::Aggregate => write_rows(&aggregate(&analysis.records, by)?, settings.format(), &mut out)?,
        Emit::Records => write_records(&analysis.records, settings.format(), &mut out)?,
        Emit::Histogram => {
            let hists: Vec<(&str, BTreeMap<u32, usize>)> =
                Measure::ALL.iter().map(|&m| (m.name(), histogram(&analysis.records, m))).collect();
            for (name, h) in &hists {
                if let Some(m) = median(h) {
                    eprintln!("median {name}: {m}");
                }
            }
            write_histograms(&hists, settings.format(), &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct LimitsRow {
    sent_id: String,
    n: usize,
    lower: u32,
    upper: u32,
    binary1: u32,
    binary2: u32,
}

fn cmd_limits(settings: &Settings, inputs: &[PathBuf]) -> Result<()> {
    let cfg = analysis_config(settings)?;
    let binary1 = BinarizeMethod::Binary1 {
        table: cfg.priority_table.clone(),
        order: cfg.binary2_order,
    };
    let binary2 = BinarizeMethod::Binary2 { order: cfg.binary2_order };
    let mut texts = Vec::new();
    if inputs.is_empty() || inputs.iter().any(|p| p.as_os_str() == "-") {
        if io::stdin().is_terminal() && inputs.is_empty() {
            eprintln!("reading CoNLL-U from standard input");
        }
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        texts.push(("-".to_string(), text));
    }
    for p in inputs.iter().filter(|p| p.as_os_str() != "-") {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
        texts.push((p.display().to_string(), text));
    }
    let mut rows = Vec::new();
    let mut report = IngestReport::default();
    for (name, text) in &texts {
        for (i, outcome) in parse_conllu(text.as_bytes()).enumerate() {
            let outcome = outcome?;
            report.record(&outcome);
            match outcome {
                SentenceOutcome::Tree(s) => {
                    let tree = if cfg.drop_punct { s.tree.without_relation("punct") } else { s.tree };
                    let limits = limit_pair(&tree);
                    rows.push(LimitsRow {
                        sent_id: s.sent_id.unwrap_or_else(|| format!("{}#{}", name, i + 1)),
                        n: tree.len(),
                        lower: limits.lower,
                        upper: limits.upper,
                        binary1: strahler(&binarize(&tree, &binary1)).get(),
                        binary2: strahler(&binarize(&tree, &binary2)).get(),
                    });
                }
                SentenceOutcome::Skipped(skip) => eprintln!(
                    "{name}:{}: skipped {}: {:?}",
                    skip.line,
                    skip.sent_id.as_deref().unwrap_or("-"),
                    skip.reason
                ),
            }
        }
    }
    eprintln!("parsed {} sentences, skipped {}", report.parsed, report.skipped);
    let mut out = output(settings)?;
    match settings.format() {
        ExportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
            for r in &rows {
                w.serialize(r)?;
            }
            if rows.is_empty() {
                w.write_record(["sent_id", "n", "lower", "upper", "binary1", "binary2"])?;
            }
            w.flush()?;
        }
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn ensemble_error(e: EnsembleError) -> CliError {
    match e {
        EnsembleError::NMaxExceeded { .. } | EnsembleError::ZeroSize => CliError::Usage(e.to_string()),
    }
}

#[derive(Serialize)]
struct EnsembleRow {
    n: usize,
    total: String,
    mean: f64,
    std: f64,
}

#[derive(Serialize)]
struct DistributionRow {
    n: usize,
    value: u32,
    count: String,
}

fn cmd_ensemble(settings: &Settings, kind: Kind, distribution: bool) -> Result<()> {
    let n_max = settings.n_max.unwrap_or(DEFAULT_N_MAX);
    eprintln!("building {} table to n = {n_max}", kind.to_possible_value().expect("no skipped variants").get_name());
    let table: EnsembleTable = match kind {
        Kind::R2 => r2_table(n_max),
        Kind::RUpper => r_limit_table(n_max, LimitMode::Max),
        Kind::RLower => r_limit_table(n_max, LimitMode::Min),
    }
    .map_err(ensemble_error)?;
    let mut out = output(settings)?;
    let format = settings.format();
    if distribution {
        let mut rows = Vec::new();
        for n in 1..=n_max {
            for (&value, count) in table.distribution(n).map_err(ensemble_error)? {
                rows.push(DistributionRow { n, value, count: count.to_string() });
            }
        }
        write_serialized(&rows, format, &mut out)?;
    } else {
        let mut rows = Vec::new();
        for n in 1..=n_max {
            rows.push(EnsembleRow {
                n,
                total: table.total(n).map_err(ensemble_error)?.to_string(),
                mean: table.mean(n).map_err(ensemble_error)?,
                std: table.variance(n).map_err(ensemble_error)?.sqrt(),
            });
        }
        write_serialized(&rows, format, &mut out)?;
    }
    out.flush()?;
    Ok(())
}

fn write_serialized<T: Serialize>(rows: &[T], format: ExportFormat, out: &mut dyn Write) -> Result<()> {
    match format {
        ExportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn traversal_order(tree: &BinTree, name: &str) -> Result<TraversalOrder> {
    Ok(match name {
        "sethi-ullman" => sethi_ullman_order(tree),
        "left" => TraversalOrder::uniform(tree, Side::Left),
        "right" => TraversalOrder::uniform(tree, Side::Right),
        bits => {
            let bits: u64 = bits.parse().map_err(|_| {
                CliError::Usage(format!("--order: expected sethi-ullman, left, right or a number, got {bits:?}"))
            })?;
            if tree.inner_count() < 64 && bits >> tree.inner_count() != 0 {
                return Err(CliError::Usage(format!(
                    "--order: tree has {} inner nodes, mask {bits} is too large",
                    tree.inner_count()
                )));
            }
            TraversalOrder::from_bits(tree, bits)
        }
    })
}

#[derive(Serialize)]
struct ShiftReduceReport<'a> {
    tree: String,
    strahler: u32,
    min_stack_depth: Option<usize>,
    trace: &'a strahler_core::shift_reduce::EvalTrace,
}

fn cmd_shiftreduce(settings: &Settings, literal: &str, order: &str) -> Result<()> {
    let tree: BinTree = literal.parse().map_err(|e| CliError::Usage(format!("tree literal: {e}")))?;
    let ord = traversal_order(&tree, order)?;
    let trace = evaluate(&tree, &ord).map_err(|e| CliError::Usage(e.to_string()))?;
    let s = strahler(&tree).get();
    let min = min_stack_depth(&tree, MAX_EXHAUSTIVE_INNER).ok();
    let mut out = output(settings)?;
    if settings.format == Some(ExportFormat::Json) {
        let report = ShiftReduceReport {
            tree: tree.to_string(),
            strahler: s,
            min_stack_depth: min,
            trace: &trace,
        };
        serde_json::to_writer_pretty(&mut out, &report)?;
        out.write_all(b"\n")?;
    } else {
        writeln!(out, "{trace}")?;
        writeln!(out, "strahler {s}")?;
        if let Some(m) = min {
            writeln!(out, "min stack depth {m}")?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ResampleReport {
    seed: u64,
    sentences: usize,
    mean: f64,
    exact_mean: f64,
    sd_of_mean: f64,
    histogram: Vec<HistogramBin>,
}

#[derive(Serialize)]
struct HistogramBin {
    strahler: u32,
    count: usize,
}

fn cmd_resample(settings: &Settings, inputs: &[PathBuf]) -> Result<()> {
    let analysis = run_analysis(settings, inputs)?;
    let lengths = length_histogram(&analysis.records);
    let Some((&longest, _)) = lengths.last_key_value() else {
        return Err(StatsError::EmptyInput.into());
    };
    let n_max = match settings.n_max {
        Some(n) if n < longest => {
            return Err(CliError::Data(format!("longest sentence has {longest} words, above n-max {n}")))
        }
        Some(n) => n,
        None if longest > R2_SIZE_LIMIT => {
            return Err(CliError::Data(format!("longest sentence has {longest} words, above {R2_SIZE_LIMIT}")))
        }
        None => longest,
    };
    let table = r2_table(n_max).map_err(ensemble_error)?;
    let hist = resample_r2(&lengths, &table, settings.seed)?;
    let (exact_mean, sd_of_mean) = resample_expectation(&lengths, &table)?;
    let sentences: usize = hist.values().sum();
    let mean = hist.iter().map(|(&s, &c)| s as f64 * c as f64).sum::<f64>() / sentences as f64;
    eprintln!("resampled mean {mean:.4} (exact {exact_mean:.4}, sd of mean {sd_of_mean:.4}), seed {}", settings.seed);
    let mut out = output(settings)?;
    match settings.format() {
        ExportFormat::Csv => write_histograms(&[("r2", hist)], ExportFormat::Csv, &mut out)?,
        ExportFormat::Json => {
            let report = ResampleReport {
                seed: settings.seed,
                sentences,
                mean,
                exact_mean,
                sd_of_mean,
                histogram: hist.into_iter().map(|(strahler, count)| HistogramBin { strahler, count }).collect(),
            };
            serde_json::to_writer_pretty(&mut out, &report)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_export_text(settings: &Settings, name: &str) -> Result<()> {
    let corpora = sources(settings, &[])?;
    let Some(corpus) = corpora.iter().find(|c| c.name == name) else {
        return Err(CliError::Data(format!("no treebank named {name}")));
    };
    let path = settings.out.clone().unwrap_or_else(|| PathBuf::from(format!("{name}.txt")));
    export_text(corpus, &path)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
