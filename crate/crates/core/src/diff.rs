//! Classification of arrow-bearing lines in unified diffs.
//!
//! Commits carry fragments, so every hunk line is scanned with a fresh
//! [`ScanState`](crate::scan::ScanState): a block comment opened outside the
//! hunk is invisible here. This mirrors treating each committed line as its
//! own evaluation unit and is a known divergence from whole-file scanning.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scan::{self, ScanState};
use crate::SourceLocation;

/// Where a classified line came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineSource {
    /// A plain source file (not a diff).
    File,
    DiffAdded,
    DiffRemoved,
    DiffContext,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineLabel {
    /// The line contains an arrow that starts a lambda expression.
    LambdaStart,
    /// Every arrow on the line serves some other purpose.
    NotLambda,
}

/// Classification of one line that contains at least one `->`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineClassification {
    /// Line is the 0-based position in the scanned input (the patch for diff
    /// lines, the file for file lines); column points at the first arrow.
    pub location: SourceLocation,
    pub label: LineLabel,
    pub source: LineSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum DiffError {
    #[error("malformed patch at line {line}: {reason}")]
    MalformedPatch { line: usize, reason: String },
}

fn classify_content(
    content: &str,
    line_idx: usize,
    source: LineSource,
    state: ScanState,
) -> Option<LineClassification> {
    let (hits, _) = scan::scan_line(content, line_idx, state);
    let first = hits.first()?;
    let label = if hits.iter().any(|h| h.is_code()) {
        LineLabel::LambdaStart
    } else {
        LineLabel::NotLambda
    };
    Some(LineClassification {
        location: SourceLocation::new(line_idx, first.location.column),
        label,
        source,
    })
}

/// Classify every arrow-bearing line of a source file, with cross-line
/// lexical state.
pub fn classify_source_lines(source: &str) -> Vec<LineClassification> {
    let mut state = ScanState::new();
    let mut out = Vec::new();
    for (idx, line) in source.split('\n').enumerate() {
        if let Some(c) = classify_content(line, idx, LineSource::File, state) {
            out.push(c);
        }
        let (_, next) = scan::scan_line(line, idx, state);
        state = next;
    }
    out
}

/// Parse a unified diff and classify every added, removed, and context line
/// that contains an arrow.
///
/// Column positions refer to the patch line, i.e. they include the leading
/// `+`/`-`/space marker.
pub fn classify_diff_lines(patch: &str) -> Result<Vec<LineClassification>, DiffError> {
    let mut out = Vec::new();
    let mut lines = patch.split('\n').enumerate().peekable();

    while let Some((idx, line)) = lines.next() {
        if !line.starts_with("@@") {
            continue;
        }
        let (mut old_rem, mut new_rem) = parse_hunk_header(line).ok_or_else(|| {
            DiffError::MalformedPatch {
                line: idx + 1,
                reason: format!("unparseable hunk header {line:?}"),
            }
        })?;

        while old_rem > 0 || new_rem > 0 {
            let (content_idx, content_line) =
                lines.next().ok_or(DiffError::MalformedPatch {
                    line: idx + 1,
                    reason: "hunk is shorter than its header declares".to_string(),
                })?;
            let marker = content_line.chars().next();
            let source = match marker {
                Some('+') => {
                    new_rem -= 1;
                    LineSource::DiffAdded
                }
                Some('-') => {
                    old_rem -= 1;
                    LineSource::DiffRemoved
                }
                Some(' ') | None => {
                    // Some tools emit fully blank context lines.
                    old_rem = old_rem.saturating_sub(1);
                    new_rem = new_rem.saturating_sub(1);
                    LineSource::DiffContext
                }
                Some('\\') => continue, // "\ No newline at end of file"
                Some(other) => {
                    return Err(DiffError::MalformedPatch {
                        line: content_idx + 1,
                        reason: format!("unexpected hunk line marker {other:?}"),
                    });
                }
            };
            let content = if content_line.is_empty() {
                content_line
            } else {
                &content_line[1..]
            };
            if let Some(mut c) =
                classify_content(content, content_idx, source, ScanState::new())
            {
                // Report the column in the patch line, past the marker.
                c.location.column += 1;
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Extract the old/new line counts from `@@ -a,b +c,d @@`.
fn parse_hunk_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix("@@ ")?;
    let end = rest.find(" @@")?;
    let ranges = &rest[..end];
    let mut parts = ranges.split(' ');
    let old = parts.next()?.strip_prefix('-')?;
    let new = parts.next()?.strip_prefix('+')?;
    if parts.next().is_some() {
        return None;
    }
    let count = |range: &str| -> Option<usize> {
        match range.split_once(',') {
            Some((start, count)) => {
                start.parse::<usize>().ok()?;
                count.parse().ok()
            }
            None => {
                range.parse::<usize>().ok()?;
                Some(1)
            }
        }
    };
    Some((count(old)?, count(new)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATCH: &str = "\
diff --git a/A.java b/A.java
--- a/A.java
+++ b/A.java
@@ -1,3 +1,4 @@
 class A {
+    list.map(x -> x + 1);
+    // see a -> b
-    String s = \"p -> q\";
 }
";

    #[test]
    fn classifies_hunk_lines() {
        let lines = classify_diff_lines(PATCH).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].label, LineLabel::LambdaStart);
        assert_eq!(lines[0].source, LineSource::DiffAdded);
        assert_eq!(lines[1].label, LineLabel::NotLambda);
        assert_eq!(lines[1].source, LineSource::DiffAdded);
        assert_eq!(lines[2].label, LineLabel::NotLambda);
        assert_eq!(lines[2].source, LineSource::DiffRemoved);
    }

    #[test]
    fn lines_without_arrows_are_not_classified() {
        let patch = "@@ -1,1 +1,1 @@\n-int a = 1;\n+int a = 2;\n";
        assert!(classify_diff_lines(patch).unwrap().is_empty());
    }

    #[test]
    fn file_headers_are_ignored_even_with_arrows() {
        let patch = "--- a/weird->name.java\n+++ b/weird->name.java\n@@ -1 +1 @@\n-x\n+y\n";
        assert!(classify_diff_lines(patch).unwrap().is_empty());
    }

    #[test]
    fn malformed_header_is_an_error() {
        let err = classify_diff_lines("@@ nonsense\n+x -> y\n").unwrap_err();
        assert!(matches!(err, DiffError::MalformedPatch { line: 1, .. }));
    }

    #[test]
    fn truncated_hunk_is_an_error() {
        let err = classify_diff_lines("@@ -1,5 +1,5 @@\n x -> y\n").unwrap_err();
        assert!(matches!(err, DiffError::MalformedPatch { .. }));
    }

    #[test]
    fn hunk_lines_use_fresh_state() {
        // The opening of a block comment outside the hunk is not visible;
        // the arrow counts as code.
        let patch = "@@ -2,1 +2,1 @@\n+ inside comment a -> b\n";
        let lines = classify_diff_lines(patch).unwrap();
        assert_eq!(lines[0].label, LineLabel::LambdaStart);
    }

    #[test]
    fn source_lines_keep_cross_line_state() {
        let classified = classify_source_lines("/*\n a -> b\n*/\nrun(x -> x);");
        assert_eq!(classified.len(), 2);
        assert_eq!(classified[0].label, LineLabel::NotLambda);
        assert_eq!(classified[1].label, LineLabel::LambdaStart);
        assert_eq!(classified[1].source, LineSource::File);
    }

    #[test]
    fn hunk_header_parsing() {
        assert_eq!(parse_hunk_header("@@ -1,3 +1,4 @@"), Some((3, 4)));
        assert_eq!(parse_hunk_header("@@ -10 +12 @@ void f()"), Some((1, 1)));
        assert_eq!(parse_hunk_header("@@ bad @@"), None);
    }
}
