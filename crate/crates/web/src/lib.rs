//! Browser bindings for the lambda tooling.
//!
//! Three operations back the demo page in `www/`: documentation generation
//! for a pasted expression, detection over pasted source, and unified-diff
//! line classification. Each returns a JSON string so the page needs no
//! generated type glue.

use wasm_bindgen::prelude::*;

use jlambda::diff;
use jlambda::docgen::{self, DocError};
use jlambda::{detect, scan};

fn ok(value: serde_json::Value) -> String {
    serde_json::json!({ "ok": true, "result": value }).to_string()
}

fn err(kind: &str, message: String) -> String {
    serde_json::json!({ "ok": false, "kind": kind, "message": message }).to_string()
}

/// Generate the documentation sentence for a single-statement lambda.
#[wasm_bindgen]
pub fn doc_expression(expression: &str) -> String {
    match docgen::generate_doc(expression) {
        Ok(sentence) => ok(serde_json::to_value(&sentence).expect("sentence serializes")),
        Err(e) => {
            let kind = match &e {
                DocError::NoArrow => "NoArrow",
                DocError::Malformed(_) => "Malformed",
                DocError::MultiStatementBody { .. } => "MultiStatementBody",
                DocError::NestedLambdaBody { .. } => "NestedLambdaBody",
            };
            err(kind, e.to_string())
        }
    }
}

/// Detect every lambda in the pasted source and return metadata records.
#[wasm_bindgen]
pub fn detect_lambdas(source: &str) -> String {
    let detection = detect::detect_lambdas(source);
    ok(serde_json::json!({
        "lambdas": detection.lambdas,
        "errors": detection.errors,
        "arrows": scan::scan_text(source),
    }))
}

/// Classify the arrow-bearing lines of a unified diff.
#[wasm_bindgen]
pub fn classify_diff(patch: &str) -> String {
    match diff::classify_diff_lines(patch) {
        Ok(lines) => ok(serde_json::to_value(&lines).expect("classifications serialize")),
        Err(e) => err("MalformedPatch", e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doc_expression_round_trips_json() {
        let raw = doc_expression("ec -> ec.set(\"c\")");
        let value: serde_json::Value = serde_json::from_str(&raw).unwrap();
        assert_eq!(value["ok"], true);
        let text = value["result"]["text"].as_str().unwrap();
        assert!(text.starts_with("This lambda expression"));
    }

    #[test]
    fn doc_expression_reports_errors() {
        let raw = doc_expression("no arrow here");
        let value: serde_json::Value = serde_json::from_str(&raw).unwrap();
        assert_eq!(value["ok"], false);
        assert_eq!(value["kind"], "NoArrow");
    }

    #[test]
    fn detect_lambdas_returns_records_and_arrows() {
        let raw = detect_lambdas("// note\nf((int x) -> x + 1);\n");
        let value: serde_json::Value = serde_json::from_str(&raw).unwrap();
        assert_eq!(value["ok"], true);
        assert_eq!(value["result"]["lambdas"].as_array().unwrap().len(), 1);
        assert_eq!(value["result"]["arrows"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn classify_diff_flags_malformed_patches() {
        let raw = classify_diff("@@ bad @@");
        let value: serde_json::Value = serde_json::from_str(&raw).unwrap();
        assert_eq!(value["ok"], false);
        assert_eq!(value["kind"], "MalformedPatch");
    }
}
