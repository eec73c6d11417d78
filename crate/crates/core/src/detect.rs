//! Lambda expression extraction around code-context arrows.
//!
//! Given the arrows found by [`crate::scan`], this module recovers each
//! lambda's full extent, parses its parameter list, classifies typing, and
//! associates comments written directly above or within the expression.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scan::{self, ArrowHit, CharClass, ScanState};
use crate::SourceLocation;

/// Whether a parameter list declares types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Typing {
    Explicit,
    Implicit,
}

/// Whether the expression spans one physical line or several.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BodyKind {
    SingleLine,
    MultiLine,
}

/// One formal parameter of a lambda.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    /// Declared type text, absent for implicit parameters. `var` counts as
    /// a declared type.
    pub declared_type: Option<String>,
}

/// Placement of a comment relative to the lambda it accompanies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CommentPlacement {
    Above,
    Within,
}

/// A comment associated with a lambda expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaComment {
    pub placement: CommentPlacement,
    pub text: String,
    pub location: SourceLocation,
}

/// A detected lambda expression and its metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaExpression {
    /// Exact source slice; `source[start..=end]` reproduces it byte for byte.
    pub raw_text: String,
    pub start: SourceLocation,
    /// Location of the last character of the expression (inclusive).
    pub end: SourceLocation,
    pub line_count: usize,
    pub parameters: Vec<Parameter>,
    pub param_count: usize,
    pub typing: Typing,
    pub body_kind: BodyKind,
    pub nesting_depth: usize,
    pub comments: Vec<LambdaComment>,
}

impl LambdaExpression {
    pub fn contains(&self, loc: SourceLocation) -> bool {
        loc >= self.start && loc <= self.end
    }

    fn has_comment(&self, placement: CommentPlacement) -> bool {
        self.comments.iter().any(|c| c.placement == placement)
    }

    pub fn has_above_comment(&self) -> bool {
        self.has_comment(CommentPlacement::Above)
    }

    pub fn has_within_comment(&self) -> bool {
        self.has_comment(CommentPlacement::Within)
    }
}

/// Extraction failure for a single arrow. Other arrows in the same file are
/// unaffected.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum DetectError {
    #[error("unbalanced delimiters: '{delimiter}' opened at {open} is never closed")]
    UnbalancedDelimiters {
        open: SourceLocation,
        delimiter: char,
    },
    #[error("no parseable parameter list left of the arrow: {head:?}")]
    MalformedHead { head: String },
}

/// A [`DetectError`] tied to the arrow that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectIssue {
    pub arrow: SourceLocation,
    pub error: DetectError,
}

/// Result of running detection over one text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detection {
    pub lambdas: Vec<LambdaExpression>,
    pub errors: Vec<DetectIssue>,
}

// ---------------------------------------------------------------------------
// Classified source text
// ---------------------------------------------------------------------------

struct LineInfo {
    byte_start: usize,
    chars: Vec<char>,
    classes: Vec<CharClass>,
    /// Scanner state after this line; tells whether a block comment or text
    /// block is still open at the line boundary.
    end_state: ScanState,
}

/// Source text with per-character lexical classes and byte offsets, the
/// working representation shared by extraction, comment association, and
/// the documentation generator.
pub(crate) struct SourceText<'a> {
    source: &'a str,
    lines: Vec<LineInfo>,
}

impl<'a> SourceText<'a> {
    pub(crate) fn new(source: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut state = ScanState::new();
        let mut byte_start = 0;
        for line in source.split('\n') {
            let chars: Vec<char> = line.chars().collect();
            let (classes, next) = scan::classify_line(&chars, state);
            lines.push(LineInfo {
                byte_start,
                chars,
                classes,
                end_state: next,
            });
            byte_start += line.len() + 1;
            state = next;
        }
        Self { source, lines }
    }

    fn line_count(&self) -> usize {
        self.lines.len()
    }

    fn line(&self, idx: usize) -> &LineInfo {
        &self.lines[idx]
    }

    fn char_at(&self, loc: SourceLocation) -> Option<char> {
        self.lines
            .get(loc.line)
            .and_then(|l| l.chars.get(loc.column))
            .copied()
    }

    fn class_at(&self, loc: SourceLocation) -> Option<CharClass> {
        self.lines
            .get(loc.line)
            .and_then(|l| l.classes.get(loc.column))
            .copied()
    }

    /// Byte offset of the character at `loc` within the original source.
    fn byte_offset(&self, loc: SourceLocation) -> usize {
        let line = self.line(loc.line);
        let within: usize = line.chars[..loc.column].iter().map(|c| c.len_utf8()).sum();
        line.byte_start + within
    }

    /// Exact source slice between two locations, end inclusive.
    pub(crate) fn slice(&self, start: SourceLocation, end: SourceLocation) -> &'a str {
        let from = self.byte_offset(start);
        let to = self.byte_offset(end) + self.char_at(end).map_or(0, |c| c.len_utf8());
        &self.source[from..to]
    }

    /// Everything after the character at `end`.
    pub(crate) fn text_after(&self, end: SourceLocation) -> &'a str {
        let to = self.byte_offset(end) + self.char_at(end).map_or(0, |c| c.len_utf8());
        &self.source[to..]
    }

    /// Next position in reading order, crossing line boundaries.
    fn next_pos(&self, loc: SourceLocation) -> Option<SourceLocation> {
        let line = self.line(loc.line);
        if loc.column + 1 < line.chars.len() {
            return Some(SourceLocation::new(loc.line, loc.column + 1));
        }
        let mut l = loc.line + 1;
        while l < self.line_count() {
            if !self.lines[l].chars.is_empty() {
                return Some(SourceLocation::new(l, 0));
            }
            l += 1;
        }
        None
    }

    /// Previous position in reading order, crossing line boundaries.
    fn prev_pos(&self, loc: SourceLocation) -> Option<SourceLocation> {
        if loc.column > 0 {
            return Some(SourceLocation::new(loc.line, loc.column - 1));
        }
        let mut l = loc.line;
        while l > 0 {
            l -= 1;
            let len = self.lines[l].chars.len();
            if len > 0 {
                return Some(SourceLocation::new(l, len - 1));
            }
        }
        None
    }

    fn arrows(&self) -> Vec<ArrowHit> {
        let mut hits = Vec::new();
        for (idx, line) in self.lines.iter().enumerate() {
            hits.extend(scan::find_arrows(&line.chars, &line.classes, idx));
        }
        hits
    }
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

/// Where and how an extracted body ended; used by the documentation
/// generator to reason about statement structure.
pub(crate) struct BodyInfo {
    /// First significant character of the body, if the body is non-empty.
    pub(crate) start: Option<SourceLocation>,
    /// Last significant character of the expression.
    pub(crate) end: SourceLocation,
    /// True when a top-level `;` terminated an expression body.
    pub(crate) semicolon_terminated: bool,
    /// True when the body is a `{ ... }` block.
    pub(crate) block: bool,
}

/// Extract the lambda expression around a code-context arrow.
///
/// The head is the maximal parameter list left of the arrow; the body
/// extends right until its block closes, a top-level `;` appears, or a
/// closing delimiter unbalances the expression. Bracket matching ignores
/// delimiters inside strings, character literals, and comments.
pub fn extract_lambda(source: &str, hit: ArrowHit) -> Result<LambdaExpression, DetectError> {
    let st = SourceText::new(source);
    extract_in(&st, hit).map(|(l, _)| l)
}

pub(crate) fn extract_in(
    st: &SourceText<'_>,
    hit: ArrowHit,
) -> Result<(LambdaExpression, BodyInfo), DetectError> {
    let arrow = hit.location;
    let (start, head) = find_head(st, arrow)?;
    let parameters = parse_parameters(&head)?;
    let body = find_body_end(st, arrow)?;

    let end = body.end;
    let raw_text = st.slice(start, end).to_string();
    let line_count = end.line - start.line + 1;
    let typing = classify_typing(&parameters);
    Ok((
        LambdaExpression {
            raw_text,
            start,
            end,
            line_count,
            param_count: parameters.len(),
            parameters,
            typing,
            body_kind: if line_count > 1 {
                BodyKind::MultiLine
            } else {
                BodyKind::SingleLine
            },
            nesting_depth: 0,
            comments: Vec::new(),
        },
        body,
    ))
}

/// Locate the head left of the arrow: either a parenthesized parameter list
/// or a bare identifier.
fn find_head(
    st: &SourceText<'_>,
    arrow: SourceLocation,
) -> Result<(SourceLocation, String), DetectError> {
    let malformed = |head: String| DetectError::MalformedHead { head };

    // Skip whitespace and comments backwards from the character before `-`.
    let mut pos = match st.prev_pos(arrow) {
        Some(p) => p,
        None => return Err(malformed(String::new())),
    };
    loop {
        let c = st.char_at(pos).unwrap_or(' ');
        let class = st.class_at(pos).unwrap_or(CharClass::Code);
        if class.is_comment() || c.is_whitespace() {
            match st.prev_pos(pos) {
                Some(p) => pos = p,
                None => return Err(malformed(String::new())),
            }
        } else {
            break;
        }
    }

    let c = st.char_at(pos).unwrap_or(' ');
    if c == ')' && st.class_at(pos) == Some(CharClass::Code) {
        // Match back to the opening parenthesis, ignoring non-code chars.
        let mut depth = 0usize;
        let mut cur = pos;
        loop {
            if st.class_at(cur) == Some(CharClass::Code) {
                match st.char_at(cur) {
                    Some(')') => depth += 1,
                    Some('(') => {
                        depth -= 1;
                        if depth == 0 {
                            let head = st.slice(cur, pos).to_string();
                            return Ok((cur, head));
                        }
                    }
                    _ => {}
                }
            }
            match st.prev_pos(cur) {
                Some(p) => cur = p,
                None => {
                    return Err(malformed(st.slice(SourceLocation::new(0, 0), pos).to_string()))
                }
            }
        }
    }

    if scan::is_ident_part(c) && st.class_at(pos) == Some(CharClass::Code) {
        // Bare identifier head: scan left over the identifier run.
        let mut first = pos;
        while let Some(p) = st.prev_pos(first) {
            if p.line == first.line
                && st.class_at(p) == Some(CharClass::Code)
                && st.char_at(p).is_some_and(scan::is_ident_part)
            {
                first = p;
            } else {
                break;
            }
        }
        let head = st.slice(first, pos).to_string();
        if head.chars().next().is_some_and(scan::is_ident_start) {
            return Ok((first, head));
        }
        return Err(malformed(head));
    }

    Err(malformed(c.to_string()))
}

/// Scan the body right of the arrow and find where the expression ends.
fn find_body_end(st: &SourceText<'_>, arrow: SourceLocation) -> Result<BodyInfo, DetectError> {
    let gt = SourceLocation::new(arrow.line, arrow.column + 1);

    // First significant character after the arrow.
    let mut pos = st.next_pos(gt);
    while let Some(p) = pos {
        let c = st.char_at(p).unwrap_or(' ');
        let class = st.class_at(p).unwrap_or(CharClass::Code);
        if class.is_comment() || (class == CharClass::Code && c.is_whitespace()) {
            pos = st.next_pos(p);
        } else {
            break;
        }
    }

    let body_start = match pos {
        Some(p) => p,
        None => {
            // Arrow with nothing after it; the expression ends at the `>`.
            return Ok(BodyInfo {
                start: None,
                end: gt,
                semicolon_terminated: false,
                block: false,
            });
        }
    };

    let is_block = st.char_at(body_start) == Some('{')
        && st.class_at(body_start) == Some(CharClass::Code);

    let mut open_stack: Vec<(SourceLocation, char)> = Vec::new();
    let mut last_significant = body_start;
    let mut cur = Some(body_start);
    while let Some(p) = cur {
        let class = st.class_at(p).unwrap_or(CharClass::Code);
        let c = st.char_at(p).unwrap_or(' ');
        if class == CharClass::Code {
            match c {
                '(' | '[' | '{' => open_stack.push((p, c)),
                ')' | ']' | '}' => {
                    if open_stack.pop().is_none() {
                        // Unbalanced closer: the expression ended just before.
                        return Ok(BodyInfo {
                            start: Some(body_start),
                            end: last_significant,
                            semicolon_terminated: false,
                            block: false,
                        });
                    }
                    if is_block && open_stack.is_empty() && c == '}' {
                        return Ok(BodyInfo {
                            start: Some(body_start),
                            end: p,
                            semicolon_terminated: false,
                            block: true,
                        });
                    }
                }
                ';' if open_stack.is_empty() => {
                    return Ok(BodyInfo {
                        start: Some(body_start),
                        end: last_significant,
                        semicolon_terminated: true,
                        block: false,
                    });
                }
                _ => {}
            }
        }
        if !class.is_comment() && !c.is_whitespace() {
            last_significant = p;
        }
        cur = st.next_pos(p);
    }

    if let Some(&(open, delimiter)) = open_stack.first() {
        return Err(DetectError::UnbalancedDelimiters { open, delimiter });
    }
    Ok(BodyInfo {
        start: Some(body_start),
        end: last_significant,
        semicolon_terminated: false,
        block: false,
    })
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Parse a lambda head into parameters.
///
/// Accepts the three Java forms: a bare identifier, an empty list `()`, and
/// a parenthesized list with optional types, annotations, and `final`
/// modifiers. Anything else is a [`DetectError::MalformedHead`].
pub fn parse_parameters(head: &str) -> Result<Vec<Parameter>, DetectError> {
    let t = head.trim();
    let malformed = || DetectError::MalformedHead {
        head: head.to_string(),
    };

    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        return split_top_level_commas(inner)
            .into_iter()
            .map(|item| parse_param_item(item.trim()).ok_or_else(malformed))
            .collect();
    }

    if is_valid_param_name(t) {
        return Ok(vec![Parameter {
            name: t.to_string(),
            declared_type: None,
        }]);
    }

    Err(malformed())
}

/// Reserved words that can never name a lambda parameter. `_` stays legal
/// as an unnamed parameter; `var` only appears in type position.
const JAVA_KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "false", "final", "finally",
    "float", "for", "goto", "if", "implements", "import", "instanceof", "int", "interface",
    "long", "native", "new", "null", "package", "private", "protected", "public", "return",
    "short", "static", "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
    "transient", "true", "try", "void", "volatile", "while",
];

fn is_valid_param_name(name: &str) -> bool {
    !name.is_empty()
        && name.chars().next().is_some_and(scan::is_ident_start)
        && name.chars().all(scan::is_ident_part)
        && !JAVA_KEYWORDS.contains(&name)
}

/// Split `inner` at commas that are not nested in `()`, `[]`, or `<>`.
fn split_top_level_commas(inner: &str) -> Vec<&str> {
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            ',' if depth == 0 => {
                items.push(&inner[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    items.push(&inner[start..]);
    items
}

/// Parse one parameter item: `[annotations] [final] [type] name`.
fn parse_param_item(item: &str) -> Option<Parameter> {
    let mut rest = item.trim();

    // Drop annotations, including argument lists: `@NonNull`, `@Value("x")`.
    while rest.starts_with('@') {
        let mut end = rest.len();
        let mut depth = 0i32;
        for (i, c) in rest.char_indices().skip(1) {
            if depth == 0 {
                if scan::is_ident_part(c) || c == '.' {
                    continue;
                }
                if c == '(' {
                    depth = 1;
                    continue;
                }
                end = i;
                break;
            }
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        end = i + c.len_utf8();
                        break;
                    }
                }
                _ => {}
            }
        }
        rest = rest[end..].trim_start();
    }

    // Drop `final` modifiers.
    while let Some(r) = rest.strip_prefix("final") {
        if r.starts_with(|c: char| c.is_whitespace()) {
            rest = r.trim_start();
        } else {
            break;
        }
    }

    if rest.is_empty() {
        return None;
    }

    // The name is the trailing identifier run; what precedes it is the type.
    let name_start = rest
        .char_indices()
        .rev()
        .take_while(|(_, c)| scan::is_ident_part(*c))
        .last()?
        .0;
    let name = &rest[name_start..];
    if !is_valid_param_name(name) {
        return None;
    }
    let ty = rest[..name_start].trim();
    Some(Parameter {
        name: name.to_string(),
        declared_type: if ty.is_empty() {
            None
        } else {
            Some(ty.to_string())
        },
    })
}

/// Explicit iff at least one parameter declares a type; a zero-parameter
/// lambda is implicit.
pub fn classify_typing(parameters: &[Parameter]) -> Typing {
    if parameters.iter().any(|p| p.declared_type.is_some()) {
        Typing::Explicit
    } else {
        Typing::Implicit
    }
}

// ---------------------------------------------------------------------------
// Comments
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum CommentKind {
    Line,
    Block,
}

#[derive(Clone, Debug)]
struct CommentToken {
    start: SourceLocation,
    end: SourceLocation,
    kind: CommentKind,
    text: String,
}

/// All comment tokens of the text, in document order.
fn lex_comments(st: &SourceText<'_>) -> Vec<CommentToken> {
    let mut tokens: Vec<CommentToken> = Vec::new();
    let mut open_block: Option<SourceLocation> = None;

    for (line_idx, line) in st.lines.iter().enumerate() {
        let mut col = 0;
        let len = line.chars.len();
        while col < len {
            match line.classes[col] {
                CharClass::LineComment => {
                    let start = SourceLocation::new(line_idx, col);
                    while col < len && line.classes[col] == CharClass::LineComment {
                        col += 1;
                    }
                    let end = SourceLocation::new(line_idx, col - 1);
                    tokens.push(CommentToken {
                        start,
                        end,
                        kind: CommentKind::Line,
                        text: String::new(),
                    });
                }
                CharClass::BlockComment => {
                    if open_block.is_none() {
                        open_block = Some(SourceLocation::new(line_idx, col));
                    }
                    while col < len && line.classes[col] == CharClass::BlockComment {
                        col += 1;
                    }
                    // A run that stops mid-line closed here; a run reaching
                    // EOL closed iff the line's end state left the comment.
                    let ends_here = col < len || !line.end_state.in_block_comment;
                    if ends_here {
                        let start = open_block.take().expect("open block comment");
                        tokens.push(CommentToken {
                            start,
                            end: SourceLocation::new(line_idx, col - 1),
                            kind: CommentKind::Block,
                            text: String::new(),
                        });
                    }
                }
                _ => col += 1,
            }
        }
    }
    // An unterminated block comment still counts, ending at the last char.
    if let Some(start) = open_block {
        if let Some(end) = last_position(st) {
            tokens.push(CommentToken {
                start,
                end,
                kind: CommentKind::Block,
                text: String::new(),
            });
        }
    }

    for token in &mut tokens {
        token.text = normalize_comment_text(st.slice(token.start, token.end), &token.kind);
    }
    tokens.sort_by_key(|t| t.start);
    tokens
}

fn last_position(st: &SourceText<'_>) -> Option<SourceLocation> {
    (0..st.line_count()).rev().find_map(|l| {
        let len = st.lines[l].chars.len();
        (len > 0).then(|| SourceLocation::new(l, len - 1))
    })
}

/// Strip comment markers and per-line `*` decoration.
fn normalize_comment_text(raw: &str, kind: &CommentKind) -> String {
    match kind {
        CommentKind::Line => raw.trim_start_matches('/').trim().to_string(),
        CommentKind::Block => {
            let inner = raw
                .trim_start_matches("/*")
                .trim_end_matches("*/")
                .trim_start_matches('*');
            inner
                .lines()
                .map(|l| l.trim().trim_start_matches('*').trim())
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}

/// True when every line the token touches contains nothing but whitespace
/// outside the comment itself.
fn is_standalone(st: &SourceText<'_>, token: &CommentToken) -> bool {
    for line_idx in token.start.line..=token.end.line {
        let line = st.line(line_idx);
        for (col, &c) in line.chars.iter().enumerate() {
            let loc = SourceLocation::new(line_idx, col);
            let inside = loc >= token.start && loc <= token.end;
            if !inside && !c.is_whitespace() {
                return false;
            }
        }
    }
    true
}

/// Comments directly above a lambda and comments inside a multi-line one.
///
/// The above comment must be adjacent: its last line is exactly the line
/// before the lambda starts and its lines carry nothing but the comment. A
/// blank line breaks the association. Contiguous standalone `//` lines merge
/// into one comment.
pub fn associate_comments(source: &str, lambda: &LambdaExpression) -> Vec<LambdaComment> {
    let st = SourceText::new(source);
    let comments = lex_comments(&st);
    associate_in(&st, &comments, lambda)
}

fn associate_in(
    st: &SourceText<'_>,
    comments: &[CommentToken],
    lambda: &LambdaExpression,
) -> Vec<LambdaComment> {
    let mut out = Vec::new();

    if lambda.start.line > 0 {
        let above_line = lambda.start.line - 1;
        if let Some(idx) = comments
            .iter()
            .position(|t| t.end.line == above_line && is_standalone(st, t))
        {
            let token = &comments[idx];
            match token.kind {
                CommentKind::Block => out.push(LambdaComment {
                    placement: CommentPlacement::Above,
                    text: token.text.clone(),
                    location: token.start,
                }),
                CommentKind::Line => {
                    // Extend upward over contiguous standalone `//` lines.
                    let mut first = idx;
                    while first > 0 {
                        let prev = &comments[first - 1];
                        if prev.kind == CommentKind::Line
                            && prev.start.line + 1 == comments[first].start.line
                            && is_standalone(st, prev)
                        {
                            first -= 1;
                        } else {
                            break;
                        }
                    }
                    let text = comments[first..=idx]
                        .iter()
                        .map(|t| t.text.as_str())
                        .collect::<Vec<_>>()
                        .join("\n");
                    out.push(LambdaComment {
                        placement: CommentPlacement::Above,
                        text,
                        location: comments[first].start,
                    });
                }
            }
        }
    }

    if lambda.body_kind == BodyKind::MultiLine {
        for token in comments {
            if token.start > lambda.start && token.end < lambda.end {
                out.push(LambdaComment {
                    placement: CommentPlacement::Within,
                    text: token.text.clone(),
                    location: token.start,
                });
            }
        }
    }

    out.sort_by_key(|c| c.location);
    out
}

// ---------------------------------------------------------------------------
// Whole-text detection
// ---------------------------------------------------------------------------

/// Detect every lambda expression in `source`.
///
/// Lambdas come back in document order. A nested lambda on its own line
/// inside a multi-line body is reported with `nesting_depth` one above its
/// parent; a second arrow on the same line as an arrow whose expression
/// already covers it is folded into that expression and not reported
/// separately.
pub fn detect_lambdas(source: &str) -> Detection {
    let st = SourceText::new(source);
    let comments = lex_comments(&st);
    let mut detection = Detection::default();
    // Arrow line of each reported lambda, for the same-line folding rule.
    let mut arrow_lines: Vec<usize> = Vec::new();

    for hit in st.arrows() {
        if !hit.is_code() {
            continue;
        }
        let container = detection
            .lambdas
            .iter()
            .rposition(|l| l.contains(hit.location));
        let depth = match container {
            Some(idx) => {
                if arrow_lines[idx] == hit.location.line {
                    continue; // folded into the expression that covers it
                }
                detection.lambdas[idx].nesting_depth + 1
            }
            None => 0,
        };
        match extract_in(&st, hit) {
            Ok((mut lambda, _)) => {
                lambda.nesting_depth = depth;
                lambda.comments = associate_in(&st, &comments, &lambda);
                detection.lambdas.push(lambda);
                arrow_lines.push(hit.location.line);
            }
            Err(error) => detection.errors.push(DetectIssue {
                arrow: hit.location,
                error,
            }),
        }
    }
    detection
}
