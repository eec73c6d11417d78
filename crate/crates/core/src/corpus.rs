//! Directory-tree scanning and aggregate statistics.
//!
//! [`scan_tree`] walks a tree, runs detection on every matching file, and
//! folds the results into [`CorpusStats`]. Aggregation is a commutative,
//! associative merge of per-file partials, so files may be processed in any
//! order or in parallel without changing the result.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use globset::Glob;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::detect::{self, LambdaExpression, Typing};

/// Remove every whitespace code point; the uniqueness key for expressions.
/// Used only for keys, never for display.
pub fn normalize_whitespace(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Options for [`scan_tree`].
#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// File-name glob for files to scan.
    pub glob: String,
    /// Process files in parallel. The result is identical either way.
    pub parallel: bool,
    /// Descend into dot-directories such as `.git`.
    pub include_hidden: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            glob: "*.java".to_string(),
            parallel: true,
            include_hidden: false,
        }
    }
}

/// A file the scan could not read, with the reason it was skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub path: String,
    pub reason: String,
}

/// One detected lambda tied to the file it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRecord {
    pub path: String,
    #[serde(flatten)]
    pub lambda: LambdaExpression,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentCoverage {
    pub none: u64,
    pub above_only: u64,
    pub within_only: u64,
    pub both: u64,
}

impl CommentCoverage {
    pub fn total(&self) -> u64 {
        self.none + self.above_only + self.within_only + self.both
    }
}

/// Aggregate usage and documentation statistics over a corpus.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub files_scanned: u64,
    pub files_with_lambdas: u64,
    pub total_lambdas: u64,
    /// Distinct expressions after whitespace normalization (case-sensitive).
    pub unique_lambdas: u64,
    pub line_count_histogram: BTreeMap<usize, u64>,
    pub param_count_histogram: BTreeMap<usize, u64>,
    pub explicit_count: u64,
    pub implicit_count: u64,
    pub comment_coverage: CommentCoverage,
    /// Fraction of unique expressions containing "exception",
    /// case-insensitively.
    pub exception_unique_fraction: f64,
    /// Normalized expressions seen more than once, most frequent first.
    pub duplicates: Vec<DuplicateEntry>,
    pub skipped: Vec<SkippedFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateEntry {
    pub text: String,
    pub count: u64,
}

/// Mergeable intermediate for corpus statistics.
///
/// Merging is commutative and associative; [`StatsAccumulator::finalize`]
/// derives the set-based fields (uniques, duplicates, the exception
/// fraction) at the end.
#[derive(Clone, Debug, Default)]
pub struct StatsAccumulator {
    files_scanned: u64,
    files_with_lambdas: u64,
    total_lambdas: u64,
    line_count_histogram: BTreeMap<usize, u64>,
    param_count_histogram: BTreeMap<usize, u64>,
    explicit_count: u64,
    implicit_count: u64,
    coverage: CommentCoverage,
    occurrences: HashMap<String, u64>,
    skipped: Vec<SkippedFile>,
}

impl StatsAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fold one scanned file's lambdas into the accumulator.
    pub fn add_file(&mut self, lambdas: &[LambdaExpression]) {
        self.files_scanned += 1;
        if !lambdas.is_empty() {
            self.files_with_lambdas += 1;
        }
        for lambda in lambdas {
            self.add_lambda(lambda);
        }
    }

    fn add_lambda(&mut self, lambda: &LambdaExpression) {
        self.total_lambdas += 1;
        *self
            .line_count_histogram
            .entry(lambda.line_count)
            .or_insert(0) += 1;
        *self
            .param_count_histogram
            .entry(lambda.param_count)
            .or_insert(0) += 1;
        match lambda.typing {
            Typing::Explicit => self.explicit_count += 1,
            Typing::Implicit => self.implicit_count += 1,
        }
        match (lambda.has_above_comment(), lambda.has_within_comment()) {
            (false, false) => self.coverage.none += 1,
            (true, false) => self.coverage.above_only += 1,
            (false, true) => self.coverage.within_only += 1,
            (true, true) => self.coverage.both += 1,
        }
        *self
            .occurrences
            .entry(normalize_whitespace(&lambda.raw_text))
            .or_insert(0) += 1;
    }

    pub fn add_skipped(&mut self, path: String, reason: String) {
        self.skipped.push(SkippedFile { path, reason });
    }

    /// Merge another accumulator into this one.
    pub fn merge(&mut self, other: StatsAccumulator) {
        self.files_scanned += other.files_scanned;
        self.files_with_lambdas += other.files_with_lambdas;
        self.total_lambdas += other.total_lambdas;
        for (k, v) in other.line_count_histogram {
            *self.line_count_histogram.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.param_count_histogram {
            *self.param_count_histogram.entry(k).or_insert(0) += v;
        }
        self.explicit_count += other.explicit_count;
        self.implicit_count += other.implicit_count;
        self.coverage.none += other.coverage.none;
        self.coverage.above_only += other.coverage.above_only;
        self.coverage.within_only += other.coverage.within_only;
        self.coverage.both += other.coverage.both;
        for (k, v) in other.occurrences {
            *self.occurrences.entry(k).or_insert(0) += v;
        }
        self.skipped.extend(other.skipped);
    }

    pub fn finalize(mut self) -> CorpusStats {
        let unique_lambdas = self.occurrences.len() as u64;
        let exceptional = self
            .occurrences
            .keys()
            .filter(|k| k.to_lowercase().contains("exception"))
            .count() as u64;
        let exception_unique_fraction = if unique_lambdas == 0 {
            0.0
        } else {
            exceptional as f64 / unique_lambdas as f64
        };
        let mut duplicates: Vec<DuplicateEntry> = self
            .occurrences
            .into_iter()
            .filter(|(_, count)| *count > 1)
            .map(|(text, count)| DuplicateEntry { text, count })
            .collect();
        duplicates.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.text.cmp(&b.text)));
        self.skipped.sort_by(|a, b| a.path.cmp(&b.path));

        CorpusStats {
            files_scanned: self.files_scanned,
            files_with_lambdas: self.files_with_lambdas,
            total_lambdas: self.total_lambdas,
            unique_lambdas,
            line_count_histogram: self.line_count_histogram,
            param_count_histogram: self.param_count_histogram,
            explicit_count: self.explicit_count,
            implicit_count: self.implicit_count,
            comment_coverage: self.coverage,
            exception_unique_fraction,
            duplicates,
            skipped: self.skipped,
        }
    }
}

/// Result of scanning a directory tree.
#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub stats: CorpusStats,
    /// Every detected lambda, ordered by path and position.
    pub records: Vec<LambdaRecord>,
}

/// Scan every matching file under `root`.
///
/// Unreadable files end up in the skip list and never abort the scan;
/// symbolic links are not followed; dot-directories are skipped unless
/// requested. The outcome does not depend on traversal order.
pub fn scan_tree(root: &Path, options: &ScanOptions) -> io::Result<ScanOutcome> {
    if !root.exists() {
        return Err(io::Error::new(
            io::ErrorKind::NotFound,
            format!("scan root {} does not exist", root.display()),
        ));
    }
    let matcher = Glob::new(&options.glob)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?
        .compile_matcher();

    let mut files: Vec<PathBuf> = Vec::new();
    let mut acc = StatsAccumulator::new();
    let walker = WalkDir::new(root)
        .follow_links(false)
        .into_iter()
        .filter_entry(|e| {
            options.include_hidden
                || e.depth() == 0
                || !e.file_name().to_string_lossy().starts_with('.')
        });
    for entry in walker {
        match entry {
            Ok(e) if e.file_type().is_file() => {
                if matcher.is_match(e.file_name()) {
                    files.push(e.into_path());
                }
            }
            Ok(_) => {}
            Err(e) => {
                let path = e
                    .path()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| root.display().to_string());
                acc.add_skipped(path, e.to_string());
            }
        }
    }
    files.sort();

    let process = |path: &PathBuf| -> (StatsAccumulator, Vec<LambdaRecord>) {
        let mut partial = StatsAccumulator::new();
        let mut records = Vec::new();
        match fs::read(path) {
            Ok(bytes) => {
                let text = String::from_utf8_lossy(&bytes);
                let detection = detect::detect_lambdas(&text);
                partial.add_file(&detection.lambdas);
                let display = path.display().to_string();
                records.extend(detection.lambdas.into_iter().map(|lambda| LambdaRecord {
                    path: display.clone(),
                    lambda,
                }));
            }
            Err(e) => partial.add_skipped(path.display().to_string(), e.to_string()),
        }
        (partial, records)
    };

    let (file_acc, mut records) = if options.parallel {
        files
            .par_iter()
            .map(process)
            .reduce(
                || (StatsAccumulator::new(), Vec::new()),
                |(mut a, mut ra), (b, rb)| {
                    a.merge(b);
                    ra.extend(rb);
                    (a, ra)
                },
            )
    } else {
        let mut a = StatsAccumulator::new();
        let mut r = Vec::new();
        for file in &files {
            let (partial, partial_records) = process(file);
            a.merge(partial);
            r.extend(partial_records);
        }
        (a, r)
    };
    acc.merge(file_acc);
    records.sort_by(|a, b| a.path.cmp(&b.path).then(a.lambda.start.cmp(&b.lambda.start)));

    Ok(ScanOutcome {
        stats: acc.finalize(),
        records,
    })
}
