//! Acceptance suite.
//!
//! One test per criterion; each prints a `criterion N PASS` line when it
//! holds (run with `-- --nocapture` to see them). Tolerances and runtime
//! budgets are asserted in the tests themselves.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use jlambda::corpus::{self, normalize_whitespace, ScanOptions};
use jlambda::detect::{self, BodyKind, Typing};
use jlambda::diff::{self, LineLabel};
use jlambda::docgen;
use jlambda::report::{render_report, ReportFormat};
use jlambda::SourceLocation;

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn fixture(name: &str) -> String {
    fs::read_to_string(fixture_path(name))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Independent char-level slicer; the span oracle.
fn char_slice(source: &str, start: SourceLocation, end: SourceLocation) -> String {
    let lines: Vec<&str> = source.split('\n').collect();
    let mut out = String::new();
    for (offset, line) in lines[start.line..=end.line].iter().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let last = start.line + offset == end.line;
        let from = if offset == 0 { start.column } else { 0 };
        let to = if last { end.column + 1 } else { chars.len() };
        out.extend(&chars[from..to]);
        if !last {
            out.push('\n');
        }
    }
    out
}

/// Token sequence after stripping quote marks and the `~` artifact.
fn doc_tokens(text: &str) -> Vec<String> {
    text.chars()
        .filter(|c| !matches!(c, '`' | '\'' | '"' | '~'))
        .collect::<String>()
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

// ---------------------------------------------------------------------------
// Criterion 1: golden documentation suite
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_golden_documentation() {
    let cases: &[(&str, &str)] = &[
        (
            "callInContext( REPO_USER_2, repo2.getId(), MASTER_BRANCH, () -> createNode ( NodePath.ROOT, \"repo2Node\" ) );",
            "This lambda expression does not take any parameter and returns the result of the \
             execution of the ``create Node'' method with two parameters ``NodePath ROOT and \
             ``repo2Node''~''.",
        ),
        (
            "(Integer t, Integer t1) -> Double.compare(splitEvaluation[t], splitEvaluation[t1])",
            "This lambda expression takes 2 parameters Integer t and Integer t1 and returns the \
             result of the execution of Double's ``compared to'' method with two parameters \
             element of ``split Evaluation'' array t and element of ``split Evaluation'' array t1.",
        ),
        (
            ".peek(batch->count3= count3+batch.size())",
            "This lambda expression takes 1 parameter batch and returns count3 equal count3 plus \
             the result of the execution of the ``size'' method on it.",
        ),
        (
            ".beforeResolved(ExecutableComponent.class, ec -> ec.set(\"c\"))",
            "This lambda expression takes 1 parameter ec and returns the result of the execution \
             of the ``set'' method on it with parameter ``c''.",
        ),
        (
            "return stream.flatMap(t -> Stream.of(value, t))",
            "This lambda expression takes 1 parameter t and returns the result of the execution \
             of Stream's ``of'' method with two parameters ``value and t''.",
        ),
    ];

    let started = Instant::now();
    for (expression, expected) in cases {
        let doc = docgen::generate_doc(expression)
            .unwrap_or_else(|e| panic!("doc generation failed for {expression:?}: {e}"));
        assert_eq!(
            doc_tokens(&doc.text),
            doc_tokens(expected),
            "token mismatch for {expression:?}\n  got:      {}\n  expected: {}",
            doc.text,
            expected
        );
        assert!(doc.warnings.is_empty(), "unexpected operator warnings");
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "golden suite took {elapsed:?}");
    println!("criterion 1 PASS: five golden sentences match (token sequence) in {elapsed:?}");
}

// ---------------------------------------------------------------------------
// Criterion 2: detector accuracy fixture
// ---------------------------------------------------------------------------

fn load_labeled(name: &str) -> Vec<(bool, String)> {
    fixture(name)
        .lines()
        .map(|line| {
            let (label, content) = line
                .split_once('\t')
                .unwrap_or_else(|| panic!("unlabeled fixture line: {line:?}"));
            assert!(
                content.contains("->"),
                "fixture line carries no arrow: {content:?}"
            );
            (label == "L", content.to_string())
        })
        .collect()
}

struct Tally {
    true_positive: usize,
    false_positive: usize,
    false_negative: usize,
    true_negative: usize,
}

impl Tally {
    fn precision(&self) -> f64 {
        self.true_positive as f64 / (self.true_positive + self.false_positive) as f64
    }

    fn recall(&self) -> f64 {
        self.true_positive as f64 / (self.true_positive + self.false_negative) as f64
    }
}

fn tally(labels: &[bool], predictions: &[bool]) -> Tally {
    let mut t = Tally {
        true_positive: 0,
        false_positive: 0,
        false_negative: 0,
        true_negative: 0,
    };
    for (&label, &predicted) in labels.iter().zip(predictions) {
        match (label, predicted) {
            (true, true) => t.true_positive += 1,
            (false, true) => t.false_positive += 1,
            (true, false) => t.false_negative += 1,
            (false, false) => t.true_negative += 1,
        }
    }
    t
}

#[test]
fn criterion_2_detector_accuracy() {
    let started = Instant::now();

    // Source-file side: whole-file scan with cross-line state.
    let source_rows = load_labeled("detector_accuracy_source.tsv");
    assert!(source_rows.len() >= 100, "need at least 100 source lines");
    let source_text = source_rows
        .iter()
        .map(|(_, c)| c.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    let classified = diff::classify_source_lines(&source_text);
    assert_eq!(
        classified.len(),
        source_rows.len(),
        "every fixture line must be classified"
    );
    let labels: Vec<bool> = source_rows.iter().map(|(l, _)| *l).collect();
    let predictions: Vec<bool> = classified
        .iter()
        .map(|c| c.label == LineLabel::LambdaStart)
        .collect();
    for (i, (&label, &predicted)) in labels.iter().zip(&predictions).enumerate() {
        assert_eq!(
            label, predicted,
            "source line {} misclassified: {:?}",
            i + 1,
            source_rows[i].1
        );
    }
    let source_tally = tally(&labels, &predictions);
    assert_eq!(source_tally.precision(), 1.0, "source precision");
    assert_eq!(source_tally.recall(), 1.0, "source recall");

    // Diff side: one synthetic patch, fresh state per line.
    let diff_rows = load_labeled("detector_accuracy_diff.tsv");
    assert!(diff_rows.len() >= 100, "need at least 100 diff lines");
    let old: usize = diff_rows
        .iter()
        .filter(|(_, c)| !c.starts_with('+'))
        .count();
    let new: usize = diff_rows
        .iter()
        .filter(|(_, c)| !c.starts_with('-'))
        .count();
    let patch = format!(
        "--- a/Fixture.java\n+++ b/Fixture.java\n@@ -1,{old} +1,{new} @@\n{}\n",
        diff_rows
            .iter()
            .map(|(_, c)| c.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    );
    let classified = diff::classify_diff_lines(&patch).expect("fixture patch parses");
    assert_eq!(classified.len(), diff_rows.len());
    let labels: Vec<bool> = diff_rows.iter().map(|(l, _)| *l).collect();
    let predictions: Vec<bool> = classified
        .iter()
        .map(|c| c.label == LineLabel::LambdaStart)
        .collect();
    for (i, (&label, &predicted)) in labels.iter().zip(&predictions).enumerate() {
        assert_eq!(
            label, predicted,
            "diff line {} misclassified: {:?}",
            i + 1,
            diff_rows[i].1
        );
    }
    let diff_tally = tally(&labels, &predictions);
    assert_eq!(diff_tally.precision(), 1.0, "diff precision");
    assert_eq!(diff_tally.recall(), 1.0, "diff recall");

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "accuracy fixture took {elapsed:?}");
    println!(
        "criterion 2 PASS: precision=1.0 recall=1.0 over {} source + {} diff lines in {elapsed:?}",
        source_rows.len(),
        diff_rows.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: canonical metadata of the two introductory examples
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_canonical_example_metadata() {
    let ex1 = detect::detect_lambdas("(int x) -> x + 1");
    assert_eq!(ex1.lambdas.len(), 1);
    let ex1 = &ex1.lambdas[0];
    assert_eq!(ex1.body_kind, BodyKind::SingleLine);
    assert_eq!(ex1.typing, Typing::Explicit);
    assert_eq!(ex1.param_count, 1);

    let ex2_source = "(x, y) -> \n{int max = x > y ? x : y;\nreturn max;}";
    let ex2 = detect::detect_lambdas(ex2_source);
    assert_eq!(ex2.lambdas.len(), 1);
    let ex2 = &ex2.lambdas[0];
    assert_eq!(ex2.body_kind, BodyKind::MultiLine);
    assert_eq!(ex2.typing, Typing::Implicit);
    assert_eq!(ex2.param_count, 2);
    assert_eq!(ex2.line_count, 3);

    // The classification rule and its known label confusion are documented.
    let doc = fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/typing-classification.md"),
    )
    .expect("docs/typing-classification.md exists");
    assert!(doc.contains("erratum"), "erratum note missing from docs");
    assert!(doc.contains("explicit") && doc.contains("implicit"));

    println!("criterion 3 PASS: explicit single-line and implicit 3-line metadata pinned; erratum documented");
}

// ---------------------------------------------------------------------------
// Criterion 4: statistics conservation on synthetic corpora
// ---------------------------------------------------------------------------

/// Snippet pool with known shapes; indices come from the property strategy.
fn snippet(kind: u8, salt: usize) -> String {
    match kind % 8 {
        0 => format!("sl(x{salt} -> x{salt} + 1);"),
        1 => format!("se((int a{salt}) -> a{salt} * 2);"),
        2 => format!("ml((a{salt}, b{salt}) -> {{\n    return a{salt} + b{salt};\n}});"),
        3 => format!("// helper {salt}\nca(v{salt} -> v{salt});"),
        4 => format!("wc(u{salt} -> {{\n    // inner note {salt}\n    return u{salt};\n}});"),
        5 => format!("String s{salt} = \"x -> y\";"),
        6 => "// a -> b".to_string(),
        7 => format!("ex(e{salt} -> new RuntimeException(e{salt}));"),
        _ => unreachable!(),
    }
}

fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<(u8, usize)>>> {
    prop::collection::vec(
        prop::collection::vec((0u8..8, 0usize..50), 0..12),
        0..8,
    )
}

#[test]
fn criterion_4_statistics_conservation() {
    let mut runner = TestRunner::new(Config {
        cases: 200,
        ..Config::default()
    });

    runner
        .run(&corpus_strategy(), |files| {
            let dir = tempfile::tempdir().expect("tempdir");
            let mut expected_total = 0u64;
            for (i, snippets) in files.iter().enumerate() {
                let content = snippets
                    .iter()
                    .map(|(kind, salt)| snippet(*kind, *salt))
                    .collect::<Vec<_>>()
                    .join("\n");
                expected_total +=
                    detect::detect_lambdas(&content).lambdas.len() as u64;
                fs::write(dir.path().join(format!("F{i}.java")), content).expect("write");
            }

            let serial = corpus::scan_tree(
                dir.path(),
                &ScanOptions {
                    parallel: false,
                    ..ScanOptions::default()
                },
            )
            .expect("serial scan");
            let parallel = corpus::scan_tree(dir.path(), &ScanOptions::default())
                .expect("parallel scan");

            let stats = &serial.stats;
            // Conservation: per-file detection counts sum to the total.
            prop_assert_eq!(stats.total_lambdas, expected_total);
            let line_sum: u64 = stats.line_count_histogram.values().sum();
            let param_sum: u64 = stats.param_count_histogram.values().sum();
            prop_assert_eq!(line_sum, stats.total_lambdas);
            prop_assert_eq!(param_sum, stats.total_lambdas);
            prop_assert_eq!(
                stats.explicit_count + stats.implicit_count,
                stats.total_lambdas
            );
            prop_assert_eq!(stats.comment_coverage.total(), stats.total_lambdas);
            prop_assert!(stats.unique_lambdas <= stats.total_lambdas);
            prop_assert!(
                (0.0..=1.0).contains(&stats.exception_unique_fraction),
                "fraction out of range"
            );

            // Parallel equals serial, down to the report bytes.
            prop_assert_eq!(&serial.stats, &parallel.stats);
            prop_assert_eq!(&serial.records, &parallel.records);
            prop_assert_eq!(
                render_report(&serial.stats, None, ReportFormat::Json),
                render_report(&parallel.stats, None, ReportFormat::Json)
            );
            Ok(())
        })
        .unwrap();

    // Planted proportions: 7 single-line + 3 multi-line lambdas.
    let dir = tempfile::tempdir().expect("tempdir");
    let mut content = String::new();
    for i in 0..7 {
        content.push_str(&snippet(0, i));
        content.push('\n');
    }
    for i in 0..3 {
        content.push_str(&snippet(2, i));
        content.push('\n');
    }
    fs::write(dir.path().join("Planted.java"), content).expect("write");
    let outcome = corpus::scan_tree(dir.path(), &ScanOptions::default()).expect("scan");
    let stats = outcome.stats;
    assert_eq!(stats.total_lambdas, 10);
    let single = *stats.line_count_histogram.get(&1).unwrap_or(&0);
    let multi: u64 = stats
        .line_count_histogram
        .iter()
        .filter(|(lines, _)| **lines > 1)
        .map(|(_, count)| *count)
        .sum();
    assert_eq!(single, 7, "planted single-line share is 70%");
    assert_eq!(multi, 3, "planted multi-line share is 30%");

    println!("criterion 4 PASS: conservation held over 200 random corpora; planted 70%/30% split exact");
}

// ---------------------------------------------------------------------------
// Criterion 5: whitespace-normalization oracle
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_normalization_oracle() {
    let compact =
        "return () -> { try { return task.call(); } catch (Exception e) { handle(e); throw e; } };";
    let airy = "return ()  ->  {  try  {  return task.call();  }\n  catch (Exception e)  {  handle(e);  throw e;  }  };";

    let key_a = normalize_whitespace(compact);
    let key_b = normalize_whitespace(airy);
    assert_eq!(key_a, key_b, "whitespace variants share one uniqueness key");
    assert_eq!(key_a, normalize_whitespace(&key_a), "idempotent");

    // The two renderings collapse to one unique expression in corpus stats.
    let dir = tempfile::tempdir().expect("tempdir");
    fs::write(dir.path().join("A.java"), compact).expect("write");
    fs::write(dir.path().join("B.java"), airy).expect("write");
    let outcome = corpus::scan_tree(dir.path(), &ScanOptions::default()).expect("scan");
    assert_eq!(outcome.stats.total_lambdas, 2);
    assert_eq!(outcome.stats.unique_lambdas, 1);

    println!("criterion 5 PASS: normalization is idempotent and folds whitespace variants to one key");
}

// ---------------------------------------------------------------------------
// Criterion 6: span round-trips across the test corpus
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_span_round_trip() {
    let mut texts: Vec<(String, String)> = Vec::new();

    for entry in fs::read_dir(fixture_path(".")).expect("fixtures dir") {
        let path = entry.expect("entry").path();
        if path.extension().is_some_and(|e| e == "java") {
            texts.push((
                path.display().to_string(),
                fs::read_to_string(&path).expect("fixture readable"),
            ));
        }
    }
    let accuracy_text = load_labeled("detector_accuracy_source.tsv")
        .into_iter()
        .map(|(_, c)| c)
        .collect::<Vec<_>>()
        .join("\n");
    texts.push(("detector_accuracy_source.tsv".to_string(), accuracy_text));
    texts.push((
        "synthetic".to_string(),
        (0u8..8)
            .flat_map(|k| (0..12).map(move |s| snippet(k, s)))
            .collect::<Vec<_>>()
            .join("\n"),
    ));

    let mut checked = 0usize;
    for (name, text) in &texts {
        for lambda in detect::detect_lambdas(text).lambdas {
            assert_eq!(
                char_slice(text, lambda.start, lambda.end),
                lambda.raw_text,
                "span mismatch in {name}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 100, "expected a substantial corpus, checked {checked}");
    println!("criterion 6 PASS: {checked} spans sliced back byte-identically");
}

// ---------------------------------------------------------------------------
// Criterion 7: throughput and determinism at scale
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_performance_smoke() {
    // Mostly plain code, a handful of lambdas per file, arrow-bearing noise
    // in strings and comments.
    let filler = concat!(
        "    private int balance(int left, int right) {\n",
        "        int acc = left * 31 + right;\n",
        "        if (acc > THRESHOLD) { acc -= right; }\n",
        "        for (int k = 0; k < left; k++) { acc ^= k; }\n",
        "        return acc;\n",
        "    }\n",
        "    // ledger note: debit -> credit\n",
        "    private String describe(String key) {\n",
        "        return \"state -> \" + key;\n",
        "    }\n",
    );
    let lambdas = concat!(
        "    void wire(java.util.List<String> xs) {\n",
        "        xs.forEach(x -> sink.accept(x));\n",
        "        xs.sort((a, b) -> a.compareTo(b));\n",
        "        longTail(() -> {\n",
        "            helper.work();\n",
        "            // inner note -> none\n",
        "        });\n",
        "    }\n",
    );

    let dir = tempfile::tempdir().expect("tempdir");
    for i in 0..1_000 {
        let mut content = format!("// file {i}\npackage gen;\npublic class Gen{i:04} {{\n");
        let mut block = 0;
        while content.len() < 100_000 {
            block += 1;
            if block % 10 == 0 {
                content.push_str(lambdas);
            } else {
                content.push_str(filler);
            }
        }
        content.push_str("}\n");
        fs::write(dir.path().join(format!("Gen{i:04}.java")), content).expect("write");
    }

    let started = Instant::now();
    let first = corpus::scan_tree(dir.path(), &ScanOptions::default()).expect("scan 1");
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "scan of 1000 files took {elapsed:?}"
    );

    let second = corpus::scan_tree(dir.path(), &ScanOptions::default()).expect("scan 2");
    let report_a = render_report(&first.stats, Some(&first.records), ReportFormat::Json);
    let report_b = render_report(&second.stats, Some(&second.records), ReportFormat::Json);
    assert_eq!(report_a, report_b, "reports differ between runs");
    assert_eq!(first.stats.files_scanned, 1_000);
    assert!(first.stats.total_lambdas > 0);

    println!(
        "criterion 7 PASS: scanned 1000 files ({} lambdas) in {elapsed:?}; reports byte-equal",
        first.stats.total_lambdas
    );
}
