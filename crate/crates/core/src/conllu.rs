//! CoNLL-U ingestion and Universal Dependencies corpus discovery.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::tree::{validate_dep_tree, DepNode, DepTree, DepTreeError};

/// Why a sentence record did not produce a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    ColumnCount { line: usize, found: usize },
    BadId { line: usize, value: String },
    BadHead { line: usize, value: String },
    Invalid(DepTreeError),
}

impl SkipReason {
    /// Stable key used in reports.
    pub fn key(&self) -> &'static str {
        match self {
            SkipReason::ColumnCount { .. } => "ColumnCount",
            SkipReason::BadId { .. } => "BadId",
            SkipReason::BadHead { .. } => "BadHead",
            SkipReason::Invalid(e) => e.kind(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSentence {
    pub sent_id: Option<String>,
    pub tree: DepTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkipRecord {
    pub sent_id: Option<String>,
    /// 1-based line where the record starts.
    pub line: usize,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SentenceOutcome {
    Tree(ParsedSentence),
    Skipped(SkipRecord),
}

/// Streams sentence records from CoNLL-U text.
///
/// Multiword ranges (`4-5`) and empty nodes (`8.1`) are not part of the tree.
/// Blocks containing only comments are not sentence records.
pub struct ConlluReader<R> {
    lines: io::Lines<R>,
    line_no: usize,
    done: bool,
}

pub fn parse_conllu<R: BufRead>(reader: R) -> ConlluReader<R> {
    ConlluReader {
        lines: reader.lines(),
        line_no: 0,
        done: false,
    }
}

impl<R: BufRead> Iterator for ConlluReader<R> {
    type Item = io::Result<SentenceOutcome>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut sent_id = None;
        let mut start = 0;
        let mut nodes = Vec::new();
        let mut error: Option<SkipReason> = None;
        let mut has_tokens = false;
        loop {
            let line = match self.lines.next() {
                None => {
                    self.done = true;
                    break;
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e));
                }
                Some(Ok(line)) => line,
            };
            self.line_no += 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                if has_tokens {
                    break;
                }
                sent_id = None;
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(id) = comment.trim().strip_prefix("sent_id") {
                    sent_id = Some(id.trim_start().trim_start_matches('=').trim().to_string());
                }
                continue;
            }
            if !has_tokens {
                has_tokens = true;
                start = self.line_no;
            }
            if error.is_some() {
                continue;
            }
            match parse_token(line, self.line_no) {
                Ok(Some(node)) => nodes.push(node),
                Ok(None) => {}
                Err(reason) => error = Some(reason),
            }
        }
        if !has_tokens {
            return None;
        }
        let reason = match error {
            Some(reason) => reason,
            None => match validate_dep_tree(nodes) {
                Ok(tree) => return Some(Ok(SentenceOutcome::Tree(ParsedSentence { sent_id, tree }))),
                Err(e) => SkipReason::Invalid(e),
            },
        };
        Some(Ok(SentenceOutcome::Skipped(SkipRecord {
            sent_id,
            line: start,
            reason,
        })))
    }
}

fn parse_token(line: &str, line_no: usize) -> Result<Option<DepNode>, SkipReason> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(SkipReason::ColumnCount {
            line: line_no,
            found: cols.len(),
        });
    }
    let id = cols[0];
    if id.contains('-') || id.contains('.') {
        return Ok(None);
    }
    let id: u32 = match id.parse() {
        Ok(v) if v > 0 => v,
        _ => {
            return Err(SkipReason::BadId {
                line: line_no,
                value: id.to_string(),
            })
        }
    };
    let head: u32 = cols[6].parse().map_err(|_| SkipReason::BadHead {
        line: line_no,
        value: cols[6].to_string(),
    })?;
    Ok(Some(DepNode::new(id, head, cols[7], cols[1])))
}

/// Sentence accounting for one ingestion run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub parsed: usize,
    pub skipped: usize,
    pub skip_reasons: BTreeMap<String, usize>,
}

impl IngestReport {
    pub fn record(&mut self, outcome: &SentenceOutcome) {
        match outcome {
            SentenceOutcome::Tree(_) => self.parsed += 1,
            SentenceOutcome::Skipped(skip) => {
                self.skipped += 1;
                *self.skip_reasons.entry(skip.reason.key().to_string()).or_default() += 1;
            }
        }
    }

    pub fn merge(&mut self, other: &IngestReport) {
        self.parsed += other.parsed;
        self.skipped += other.skipped;
        for (k, v) in &other.skip_reasons {
            *self.skip_reasons.entry(k.clone()).or_default() += v;
        }
    }

    pub fn total(&self) -> usize {
        self.parsed + self.skipped
    }
}

/// One treebank: all `*.conllu` files of a `UD_*` directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSource {
    pub name: String,
    pub paths: Vec<PathBuf>,
    pub sentence_count: usize,
}

impl CorpusSource {
    /// Builds a source from explicit files, counting their sentence records.
    pub fn from_files(name: impl Into<String>, mut paths: Vec<PathBuf>) -> io::Result<Self> {
        paths.sort();
        let mut sentence_count = 0;
        for p in &paths {
            sentence_count += count_records(BufReader::new(File::open(p)?))?;
        }
        Ok(CorpusSource {
            name: name.into(),
            paths,
            sentence_count,
        })
    }

    /// Parses every file, returning trees and the skip accounting.
    pub fn read(&self) -> io::Result<(Vec<ParsedSentence>, IngestReport)> {
        let mut trees = Vec::new();
        let mut report = IngestReport::default();
        for path in &self.paths {
            for outcome in parse_conllu(BufReader::new(File::open(path)?)) {
                let outcome = outcome?;
                report.record(&outcome);
                if let SentenceOutcome::Tree(s) = outcome {
                    trees.push(s);
                }
            }
        }
        Ok((trees, report))
    }
}

/// Number of sentence records (blocks with at least one token line).
pub fn count_records(reader: impl BufRead) -> io::Result<usize> {
    let mut count = 0;
    let mut in_block = false;
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            in_block = false;
        } else if !line.starts_with('#') && !in_block {
            in_block = true;
            count += 1;
        }
    }
    Ok(count)
}

/// Finds `UD_*` directories under `root_dir` (at any depth) and their CoNLL-U files.
pub fn scan_corpus(root_dir: &Path) -> io::Result<Vec<CorpusSource>> {
    let mut corpora = Vec::new();
    let mut pending = vec![root_dir.to_path_buf()];
    while let Some(dir) = pending.pop() {
        let mut files = Vec::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.is_dir() {
                pending.push(path);
            } else if path.extension().is_some_and(|e| e == "conllu") {
                files.push(path);
            }
        }
        let name = dir.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("UD_") && !files.is_empty() {
            corpora.push(CorpusSource::from_files(name, files)?);
        }
    }
    corpora.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(corpora)
}
