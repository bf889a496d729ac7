//! Python bindings: `import strahler`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigUint;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use strahler_core::binarize::{self, Binary2Order, BinarizeMethod, PriorityTable};
use strahler_core::conllu::{self, SentenceOutcome};
use strahler_core::ensembles::{self, EnsembleTable};
use strahler_core::limits::{self, LimitMode};
use strahler_core::shift_reduce::{self, TraversalOrder};
use strahler_core::stats::{self, AnalysisConfig, GroupBy, Measure, SentenceRecord};
use strahler_core::tree::{self, Side};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn stats_error(e: stats::StatsError) -> PyErr {
    match e {
        stats::StatsError::Io(io) => PyOSError::new_err(io.to_string()),
        other => value_error(other),
    }
}

/// Binary tree with words at the leaves.
#[pyclass(module = "strahler", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct BinTree(tree::BinTree);

#[pymethods]
impl BinTree {
    /// Parses a bracketed literal such as `((1,2),(3,4))`.
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        literal.parse().map(BinTree).map_err(value_error)
    }

    fn strahler(&self) -> u32 {
        tree::strahler(&self.0).get()
    }

    fn depth(&self) -> usize {
        tree::depth(&self.0)
    }

    #[getter]
    fn leaf_count(&self) -> usize {
        self.0.leaf_count()
    }

    fn leaves(&self) -> Vec<String> {
        self.0.leaves().into_iter().map(str::to_string).collect()
    }

    fn mirror(&self) -> BinTree {
        BinTree(self.0.mirror())
    }

    /// Shift-reduce evaluation. `order` is "sethi-ullman", "left", "right",
    /// or an integer mask (bit i set: inner node i evaluates its right child first).
    #[pyo3(signature = (order = None))]
    fn shift_reduce<'py>(&self, py: Python<'py>, order: Option<&Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyDict>> {
        let ord = match order {
            None => shift_reduce::sethi_ullman_order(&self.0),
            Some(o) => {
                if let Ok(bits) = o.extract::<u64>() {
                    TraversalOrder::from_bits(&self.0, bits)
                } else {
                    match o.extract::<String>()?.as_str() {
                        "sethi-ullman" => shift_reduce::sethi_ullman_order(&self.0),
                        "left" => TraversalOrder::uniform(&self.0, Side::Left),
                        "right" => TraversalOrder::uniform(&self.0, Side::Right),
                        other => return Err(value_error(format!("unknown order {other:?}"))),
                    }
                }
            }
        };
        let trace = shift_reduce::evaluate(&self.0, &ord).map_err(value_error)?;
        let steps: Vec<(String, Option<String>, usize)> = trace
            .steps
            .into_iter()
            .map(|s| {
                let op = match s.op {
                    shift_reduce::StackOp::Shift => "shift",
                    shift_reduce::StackOp::Reduce => "reduce",
                };
                (op.to_string(), s.leaf, s.stack_depth_after)
            })
            .collect();
        let d = PyDict::new(py);
        d.set_item("steps", steps)?;
        d.set_item("max_depth", trace.max_depth)?;
        Ok(d)
    }

    /// Smallest maximum stack depth over all evaluation orders (exhaustive).
    fn min_stack_depth(&self) -> PyResult<usize> {
        shift_reduce::min_stack_depth(&self.0, shift_reduce::MAX_EXHAUSTIVE_INNER).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("BinTree({:?})", self.0.to_string())
    }
}

fn binary2_order(order: &str) -> PyResult<Binary2Order> {
    order.parse().map_err(value_error)
}

fn priority_table(path: Option<PathBuf>) -> PyResult<PriorityTable> {
    match path {
        None => Ok(PriorityTable::default()),
        Some(p) => {
            let f = std::fs::File::open(&p).map_err(|e| PyOSError::new_err(format!("{}: {e}", p.display())))?;
            PriorityTable::read(std::io::BufReader::new(f)).map_err(value_error)
        }
    }
}

/// Dependency tree over the words of one sentence.
#[pyclass(module = "strahler", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct DepTree(tree::DepTree);

#[pymethods]
impl DepTree {
    /// `heads[i]` is the 1-based head of word i + 1, 0 for the root.
    #[new]
    #[pyo3(signature = (heads, relations = None, forms = None))]
    fn new(heads: Vec<u32>, relations: Option<Vec<String>>, forms: Option<Vec<String>>) -> PyResult<Self> {
        let n = heads.len();
        if relations.as_ref().is_some_and(|r| r.len() != n) || forms.as_ref().is_some_and(|f| f.len() != n) {
            return Err(value_error("heads, relations and forms must have the same length"));
        }
        let nodes = heads
            .iter()
            .enumerate()
            .map(|(i, &h)| {
                let rel = relations.as_ref().map_or(if h == 0 { "root" } else { "dep" }, |r| r[i].as_str());
                let form = forms.as_ref().map_or_else(|| format!("w{}", i + 1), |f| f[i].clone());
                tree::DepNode::new(i as u32 + 1, h, rel, form)
            })
            .collect();
        tree::validate_dep_tree(nodes).map(DepTree).map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn forms(&self) -> Vec<String> {
        self.0.forms().map(str::to_string).collect()
    }

    /// `(lower, upper)` Strahler limits over all binarizations.
    fn limits(&self) -> (u32, u32) {
        let p = limits::limit_pair(&self.0);
        (p.lower, p.upper)
    }

    /// `method` is "binary1" or "binary2".
    #[pyo3(signature = (method = "binary2", order = "near-first", priority_table = None))]
    fn binarize(&self, method: &str, order: &str, priority_table: Option<PathBuf>) -> PyResult<BinTree> {
        let order = binary2_order(order)?;
        let m = match method {
            "binary1" => BinarizeMethod::Binary1 {
                table: self::priority_table(priority_table)?,
                order,
            },
            "binary2" => BinarizeMethod::Binary2 { order },
            other => return Err(value_error(format!("unknown method {other:?}"))),
        };
        Ok(BinTree(binarize::binarize(&self.0, &m)))
    }

    /// Every binarization, refusing more than `cap` of them.
    #[pyo3(signature = (cap = 100_000))]
    fn all_binarizations(&self, cap: usize) -> PyResult<Vec<BinTree>> {
        binarize::all_binarizations(&self.0, cap)
            .map(|v| v.into_iter().map(BinTree).collect())
            .map_err(value_error)
    }

    fn without_relation(&self, relation: &str) -> DepTree {
        DepTree(self.0.without_relation(relation))
    }
}

type Parsed = (Vec<DepTree>, Vec<(usize, String)>);

/// Parses CoNLL-U text into `(trees, skipped)`, where skipped entries are
/// `(line, reason)`.
#[pyfunction]
fn parse_conllu(text: &str) -> PyResult<Parsed> {
    let mut trees = Vec::new();
    let mut skipped = Vec::new();
    for outcome in conllu::parse_conllu(text.as_bytes()) {
        match outcome.map_err(|e| PyOSError::new_err(e.to_string()))? {
            SentenceOutcome::Tree(s) => trees.push(DepTree(s.tree)),
            SentenceOutcome::Skipped(s) => skipped.push((s.line, s.reason.key().to_string())),
        }
    }
    Ok((trees, skipped))
}

/// Exact counts of a random-tree ensemble, by size.
#[pyclass(module = "strahler", frozen)]
struct Ensemble(EnsembleTable);

#[pymethods]
impl Ensemble {
    /// `kind` is "r2" (binary trees by leaves, Strahler number), "r-upper" or
    /// "r-lower" (plane trees by nodes, limits).
    #[new]
    #[pyo3(signature = (kind, n_max = ensembles::DEFAULT_N_MAX))]
    fn new(py: Python<'_>, kind: &str, n_max: usize) -> PyResult<Self> {
        let build = match kind {
            "r2" => ensembles::r2_table,
            "r-upper" => |n| ensembles::r_limit_table(n, LimitMode::Max),
            "r-lower" => |n| ensembles::r_limit_table(n, LimitMode::Min),
            other => return Err(value_error(format!("unknown ensemble {other:?}"))),
        };
        py.detach(|| build(n_max)).map(Ensemble).map_err(value_error)
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.0.n_max()
    }

    fn distribution(&self, n: usize) -> PyResult<BTreeMap<u32, BigUint>> {
        self.0.distribution(n).cloned().map_err(value_error)
    }

    fn total(&self, n: usize) -> PyResult<BigUint> {
        self.0.total(n).map_err(value_error)
    }

    fn mean(&self, n: usize) -> PyResult<f64> {
        self.0.mean(n).map_err(value_error)
    }

    fn variance(&self, n: usize) -> PyResult<f64> {
        self.0.variance(n).map_err(value_error)
    }
}

/// Number of Strahler values `s` among binary trees with `n` leaves.
#[pyfunction]
fn r2_distribution(py: Python<'_>, n: usize) -> PyResult<BTreeMap<u32, BigUint>> {
    py.detach(|| ensembles::r2_strahler_distribution(n)).map_err(value_error)
}

fn record_dict<'py>(py: Python<'py>, r: &SentenceRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("corpus", &r.corpus)?;
    d.set_item("n", r.n)?;
    d.set_item("lower", r.lower)?;
    d.set_item("upper", r.upper)?;
    d.set_item("binary1", r.s_binary1)?;
    d.set_item("binary2", r.s_binary2)?;
    Ok(d)
}

/// Analyzes every UD_* treebank under `root`. Returns `(records, report)`.
#[pyfunction]
#[pyo3(signature = (root, drop_punct = false, binary2_order = "near-first", priority_table = None))]
fn analyze<'py>(
    py: Python<'py>,
    root: PathBuf,
    drop_punct: bool,
    binary2_order: &str,
    priority_table: Option<PathBuf>,
) -> PyResult<(Vec<Bound<'py, PyDict>>, Bound<'py, PyDict>)> {
    let config = AnalysisConfig {
        priority_table: self::priority_table(priority_table)?,
        binary2_order: self::binary2_order(binary2_order)?,
        drop_punct,
    };
    let analysis = py
        .detach(|| {
            let corpora = conllu::scan_corpus(&root)?;
            stats::analyze(&corpora, &config)
        })
        .map_err(|e| PyOSError::new_err(e.to_string()))?;
    let records = analysis.records.iter().map(|r| record_dict(py, r)).collect::<PyResult<_>>()?;
    let report = PyDict::new(py);
    report.set_item("parsed", analysis.report.parsed)?;
    report.set_item("skipped", analysis.report.skipped)?;
    report.set_item("skip_reasons", analysis.report.skip_reasons.clone())?;
    Ok((records, report))
}

fn record_from(d: &Bound<'_, PyDict>) -> PyResult<SentenceRecord> {
    let get = |k: &str| -> PyResult<Bound<'_, PyAny>> {
        d.get_item(k)?.ok_or_else(|| value_error(format!("record lacks {k:?}")))
    };
    Ok(SentenceRecord {
        corpus: get("corpus")?.extract()?,
        n: get("n")?.extract()?,
        lower: get("lower")?.extract()?,
        upper: get("upper")?.extract()?,
        s_binary1: get("binary1")?.extract()?,
        s_binary2: get("binary2")?.extract()?,
    })
}

/// Groups records (as returned by `analyze`) by "all", "corpus" or "n" and
/// returns `{group, count, <measure>: (mean, population std)}` dicts.
#[pyfunction]
#[pyo3(signature = (records, by = "all"))]
fn aggregate<'py>(py: Python<'py>, records: Vec<Bound<'py, PyDict>>, by: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let by: GroupBy = by.parse().map_err(value_error)?;
    let records = records.iter().map(record_from).collect::<PyResult<Vec<_>>>()?;
    let rows = stats::aggregate(&records, by).map_err(stats_error)?;
    rows.iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("group", &row.group)?;
            d.set_item("count", row.count)?;
            for m in Measure::ALL {
                let ms = row.measure(m);
                d.set_item(m.name(), (ms.mean, ms.std))?;
            }
            Ok(d)
        })
        .collect()
}

/// Draws one binary-tree Strahler number per sentence from
/// `{length: count}`; reproducible for a seed.
#[pyfunction]
#[pyo3(signature = (length_histogram, seed = 0))]
fn resample_r2(py: Python<'_>, length_histogram: BTreeMap<usize, usize>, seed: u64) -> PyResult<BTreeMap<u32, usize>> {
    let Some((&n_max, _)) = length_histogram.last_key_value() else {
        return Ok(BTreeMap::new());
    };
    py.detach(|| {
        let table = ensembles::r2_table(n_max).map_err(stats::StatsError::from)?;
        stats::resample_r2(&length_histogram, &table, seed)
    })
    .map_err(stats_error)
}

#[pymodule]
fn strahler(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<BinTree>()?;
    m.add_class::<DepTree>()?;
    m.add_class::<Ensemble>()?;
    m.add_function(wrap_pyfunction!(parse_conllu, m)?)?;
    m.add_function(wrap_pyfunction!(r2_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(aggregate, m)?)?;
    m.add_function(wrap_pyfunction!(resample_r2, m)?)?;
    Ok(())
}
