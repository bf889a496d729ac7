//! Corpus analysis: per-sentence Strahler measures, grouped aggregates,
//! histograms, null-model resampling and exports.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binarize::{binarize, Binary2Order, BinarizeMethod, PriorityTable};
use crate::conllu::{parse_conllu, CorpusSource, IngestReport, SentenceOutcome};
use crate::ensembles::{rational_to_f64, EnsembleError, EnsembleKind, EnsembleTable};
use crate::limits::limit_pair;
use crate::tree::{strahler, DepTree};

/// Corpora whose sentence structures come without word forms.
pub const WORDLESS_CORPORA: &[&str] = &[
    "UD_Hindi_English-HIENCS",
    "UD_Arabic-NYUAD",
    "UD_Japanese-BCCWJ",
    "UD_English-ESL",
    "UD_French-FTB",
    "UD_English-GUMReddit",
    "UD_Mbya_Guarani-Dooley",
];

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("no records to aggregate")]
    EmptyInput,
    #[error("corpus {0} provides no word forms")]
    WordlessCorpus(String),
    #[error("expected a binary-tree Strahler table, got {0}")]
    WrongTable(EnsembleKind),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub priority_table: PriorityTable,
    pub binary2_order: Binary2Order,
    pub drop_punct: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            priority_table: PriorityTable::default(),
            binary2_order: Binary2Order::NearFirst,
            drop_punct: false,
        }
    }
}

/// The four Strahler measures of one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub corpus: String,
    pub n: usize,
    pub lower: u32,
    pub upper: u32,
    pub s_binary1: u32,
    pub s_binary2: u32,
}

impl SentenceRecord {
    pub fn value(&self, measure: Measure) -> u32 {
        match measure {
            Measure::Upper => self.upper,
            Measure::Lower => self.lower,
            Measure::Binary1 => self.s_binary1,
            Measure::Binary2 => self.s_binary2,
        }
    }

    /// `lower <= binary1, binary2 <= upper`.
    pub fn is_bracketed(&self) -> bool {
        self.lower <= self.s_binary1.min(self.s_binary2) && self.s_binary1.max(self.s_binary2) <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Upper,
    Lower,
    Binary1,
    Binary2,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Upper, Measure::Lower, Measure::Binary1, Measure::Binary2];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Upper => "upper",
            Measure::Lower => "lower",
            Measure::Binary1 => "binary1",
            Measure::Binary2 => "binary2",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown measure {s:?} (expected upper, lower, binary1 or binary2)"))
    }
}

pub fn analyze_tree(corpus: &str, tree: &DepTree, config: &AnalysisConfig) -> SentenceRecord {
    let pruned;
    let tree = if config.drop_punct {
        pruned = tree.without_relation("punct");
        &pruned
    } else {
        tree
    };
    let limits = limit_pair(tree);
    let binary1 = BinarizeMethod::Binary1 {
        table: config.priority_table.clone(),
        order: config.binary2_order,
    };
    let binary2 = BinarizeMethod::Binary2 {
        order: config.binary2_order,
    };
    SentenceRecord {
        corpus: corpus.to_string(),
        n: tree.len(),
        lower: limits.lower,
        upper: limits.upper,
        s_binary1: strahler(&binarize(tree, &binary1)).get(),
        s_binary2: strahler(&binarize(tree, &binary2)).get(),
    }
}

/// Records of a corpus run, in corpus, file and sentence order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Analysis {
    pub records: Vec<SentenceRecord>,
    pub report: IngestReport,
    pub per_corpus: BTreeMap<String, IngestReport>,
}

impl Analysis {
    pub fn bracket_violations(&self) -> impl Iterator<Item = &SentenceRecord> {
        self.records.iter().filter(|r| !r.is_bracketed())
    }
}

/// Analyzes every sentence of every corpus. Files are processed in parallel;
/// the result does not depend on scheduling.
pub fn analyze(corpora: &[CorpusSource], config: &AnalysisConfig) -> io::Result<Analysis> {
    let jobs: Vec<(&str, &Path)> = corpora
        .iter()
        .flat_map(|c| c.paths.iter().map(move |p| (c.name.as_str(), p.as_path())))
        .collect();
    let results: Vec<io::Result<(Vec<SentenceRecord>, IngestReport)>> = jobs
        .par_iter()
        .map(|&(name, path)| {
            let mut records = Vec::new();
            let mut report = IngestReport::default();
            for outcome in parse_conllu(io::BufReader::new(File::open(path)?)) {
                let outcome = outcome?;
                report.record(&outcome);
                if let SentenceOutcome::Tree(s) = outcome {
                    records.push(analyze_tree(name, &s.tree, config));
                }
            }
            Ok((records, report))
        })
        .collect();

    let mut analysis = Analysis::default();
    for ((name, _), result) in jobs.iter().zip(results) {
        let (records, report) = result?;
        analysis.records.extend(records);
        analysis.report.merge(&report);
        analysis.per_corpus.entry(name.to_string()).or_default().merge(&report);
    }
    Ok(analysis)
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    sum: u64,
    sum_sq: u64,
}

impl Moments {
    fn push(&mut self, v: u32) {
        self.count += 1;
        self.sum += v as u64;
        self.sum_sq += (v as u64) * (v as u64);
    }

    fn mean_std(&self) -> MeanStd {
        let c = self.count as f64;
        let mean = self.sum as f64 / c;
        let var = (self.sum_sq as f64 / c - mean * mean).max(0.0);
        MeanStd { mean, std: var.sqrt() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    All,
    Corpus,
    Length,
}

impl FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(GroupBy::All),
            "corpus" => Ok(GroupBy::Corpus),
            "n" | "length" => Ok(GroupBy::Length),
            other => Err(format!("unknown grouping {other:?} (expected all, corpus or n)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub group: String,
    pub count: u64,
    pub upper: MeanStd,
    pub lower: MeanStd,
    pub binary1: MeanStd,
    pub binary2: MeanStd,
}

impl AggregateRow {
    pub fn measure(&self, m: Measure) -> MeanStd {
        match m {
            Measure::Upper => self.upper,
            Measure::Lower => self.lower,
            Measure::Binary1 => self.binary1,
            Measure::Binary2 => self.binary2,
        }
    }

    /// The row as exported: every mean and std rounded to two decimals.
    pub fn rounded(&self) -> AggregateRow {
        let r = |m: MeanStd| MeanStd {
            mean: round2(m.mean),
            std: round2(m.std),
        };
        AggregateRow {
            group: self.group.clone(),
            count: self.count,
            upper: r(self.upper),
            lower: r(self.lower),
            binary1: r(self.binary1),
            binary2: r(self.binary2),
        }
    }
}

fn round2(x: f64) -> f64 {
    format!("{x:.2}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, Default)]
struct GroupAcc([Moments; 4]);

impl GroupAcc {
    fn push(&mut self, r: &SentenceRecord) {
        for (acc, m) in self.0.iter_mut().zip(Measure::ALL) {
            acc.push(r.value(m));
        }
    }

    fn row(&self, group: String) -> AggregateRow {
        AggregateRow {
            group,
            count: self.0[0].count,
            upper: self.0[0].mean_std(),
            lower: self.0[1].mean_std(),
            binary1: self.0[2].mean_std(),
            binary2: self.0[3].mean_std(),
        }
    }
}

/// Grouped means and population standard deviations, ordered by key
/// (numerically for lengths).
pub fn aggregate(records: &[SentenceRecord], by: GroupBy) -> Result<Vec<AggregateRow>, StatsError> {
    if records.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    Ok(match by {
        GroupBy::All => {
            let mut acc = GroupAcc::default();
            records.iter().for_each(|r| acc.push(r));
            vec![acc.row("all".to_string())]
        }
        GroupBy::Corpus => {
            let mut groups: BTreeMap<&str, GroupAcc> = BTreeMap::new();
            records.iter().for_each(|r| groups.entry(r.corpus.as_str()).or_default().push(r));
            groups.into_iter().map(|(k, acc)| acc.row(k.to_string())).collect()
        }
        GroupBy::Length => {
            let mut groups: BTreeMap<usize, GroupAcc> = BTreeMap::new();
            records.iter().for_each(|r| groups.entry(r.n).or_default().push(r));
            groups.into_iter().map(|(k, acc)| acc.row(k.to_string())).collect()
        }
    })
}

pub fn histogram(records: &[SentenceRecord], measure: Measure) -> BTreeMap<u32, usize> {
    let mut hist = BTreeMap::new();
    for r in records {
        *hist.entry(r.value(measure)).or_default() += 1;
    }
    hist
}

/// Lower median of a histogram.
pub fn median(hist: &BTreeMap<u32, usize>) -> Option<u32> {
    let total: usize = hist.values().sum();
    if total == 0 {
        return None;
    }
    let target = (total - 1) / 2;
    let mut seen = 0;
    for (&v, &c) in hist {
        seen += c;
        if seen > target {
            return Some(v);
        }
    }
    None
}

/// Mean and population std of a histogram.
pub fn histogram_mean_std(hist: &BTreeMap<u32, usize>) -> Option<MeanStd> {
    let mut m = Moments::default();
    for (&v, &c) in hist {
        m.count += c as u64;
        m.sum += v as u64 * c as u64;
        m.sum_sq += (v as u64) * (v as u64) * c as u64;
    }
    (m.count > 0).then(|| m.mean_std())
}

/// Number of sentences of each length.
pub fn length_histogram(records: &[SentenceRecord]) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for r in records {
        *hist.entry(r.n).or_default() += 1;
    }
    hist
}

fn check_binary_table(table: &EnsembleTable, lengths: &BTreeMap<usize, usize>) -> Result<(), StatsError> {
    if table.kind() != EnsembleKind::BinaryStrahler {
        return Err(StatsError::WrongTable(table.kind()));
    }
    if let Some((&n, _)) = lengths.last_key_value() {
        table.distribution(n)?;
    }
    Ok(())
}

/// Draws one Strahler value from the exact binary-tree distribution for every
/// sentence length occurrence. Reproducible for a given seed.
pub fn resample_r2(
    length_histogram: &BTreeMap<usize, usize>,
    table: &EnsembleTable,
    seed: u64,
) -> Result<BTreeMap<u32, usize>, StatsError> {
    check_binary_table(table, length_histogram)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for (&n, &count) in length_histogram {
        let dist = table.distribution(n)?;
        let total = num_rational::BigRational::from_integer(dist.values().sum::<num_bigint::BigUint>().into());
        let values: Vec<u32> = dist.keys().copied().collect();
        let weights: Vec<f64> = dist
            .values()
            .map(|c| rational_to_f64(&(num_rational::BigRational::from_integer(c.clone().into()) / &total)))
            .collect();
        let sampler = WeightedIndex::new(&weights).expect("distribution has positive mass");
        for _ in 0..count {
            *out.entry(values[sampler.sample(&mut rng)]).or_default() += 1;
        }
    }
    Ok(out)
}

/// Exact mean of the length-weighted mixture and the standard deviation of
/// the sample mean of [`resample_r2`].
pub fn resample_expectation(
    length_histogram: &BTreeMap<usize, usize>,
    table: &EnsembleTable,
) -> Result<(f64, f64), StatsError> {
    check_binary_table(table, length_histogram)?;
    let total: usize = length_histogram.values().sum();
    if total == 0 {
        return Err(StatsError::EmptyInput);
    }
    let mut mean = 0.0;
    let mut var_sum = 0.0;
    for (&n, &count) in length_histogram {
        mean += table.mean(n)? * count as f64;
        var_sum += table.variance(n)? * count as f64;
    }
    Ok((mean / total as f64, var_sum.sqrt() / total as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// Column names of aggregate exports. Standard deviations are population values.
pub const ROW_HEADER: [&str; 10] = [
    "group",
    "count",
    "upper_mean",
    "upper_std_pop",
    "lower_mean",
    "lower_std_pop",
    "binary1_mean",
    "binary1_std_pop",
    "binary2_mean",
    "binary2_std_pop",
];

pub fn write_rows<W: Write>(rows: &[AggregateRow], format: ExportFormat, mut out: W) -> Result<(), StatsError> {
    let rows: Vec<AggregateRow> = rows.iter().map(AggregateRow::rounded).collect();
    match format {
        ExportFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(ROW_HEADER)?;
            for row in &rows {
                let mut fields = vec![row.group.clone(), row.count.to_string()];
                for m in Measure::ALL {
                    let ms = row.measure(m);
                    fields.push(format!("{:.2}", ms.mean));
                    fields.push(format!("{:.2}", ms.std));
                }
                w.write_record(&fields)?;
            }
            w.flush()?;
        }
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn read_rows_json(text: &str) -> Result<Vec<AggregateRow>, StatsError> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_records<W: Write>(records: &[SentenceRecord], format: ExportFormat, mut out: W) -> Result<(), StatsError> {
    match format {
        ExportFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["corpus", "n", "lower", "upper", "binary1", "binary2"])?;
            for r in records {
                w.write_record([
                    r.corpus.clone(),
                    r.n.to_string(),
                    r.lower.to_string(),
                    r.upper.to_string(),
                    r.s_binary1.to_string(),
                    r.s_binary2.to_string(),
                ])?;
            }
            w.flush()?;
        }
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct HistogramRow<'a> {
    measure: &'a str,
    strahler: u32,
    count: usize,
}

/// Writes `measure,strahler,count` rows, one per histogram bin.
pub fn write_histograms<W: Write>(
    hists: &[(&str, BTreeMap<u32, usize>)],
    format: ExportFormat,
    mut out: W,
) -> Result<(), StatsError> {
    let rows: Vec<HistogramRow> = hists
        .iter()
        .flat_map(|(name, h)| h.iter().map(move |(&strahler, &count)| HistogramRow { measure: name, strahler, count }))
        .collect();
    match format {
        ExportFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["measure", "strahler", "count"])?;
            for r in &rows {
                w.serialize((r.measure, r.strahler, r.count))?;
            }
            w.flush()?;
        }
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Writes aggregate rows to a file.
pub fn export_rows(rows: &[AggregateRow], format: ExportFormat, path: &Path) -> Result<(), StatsError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_rows(rows, format, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Writes sentence records to a file.
pub fn export_records(records: &[SentenceRecord], format: ExportFormat, path: &Path) -> Result<(), StatsError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_records(records, format, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Writes the corpus as plain text, one sentence per line, words separated by
/// single spaces, for use with external compressors.
pub fn export_text(corpus: &CorpusSource, path: &Path) -> Result<(), StatsError> {
    if WORDLESS_CORPORA.contains(&corpus.name.as_str()) {
        return Err(StatsError::WordlessCorpus(corpus.name.clone()));
    }
    let (sentences, _) = corpus.read()?;
    if !sentences.is_empty() && sentences.iter().all(|s| s.tree.forms().all(|f| f == "_")) {
        return Err(StatsError::WordlessCorpus(corpus.name.clone()));
    }
    let mut out = BufWriter::new(File::create(path)?);
    for s in &sentences {
        let line: Vec<&str> = s.tree.forms().collect();
        out.write_all(line.join(" ").as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
