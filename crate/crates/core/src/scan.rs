//! Line-oriented lexical scanning for lambda arrows.
//!
//! The scanner never builds a token stream. It tracks just enough lexical
//! state (string literals, character literals, line and block comments,
//! text blocks) to decide, for every `->` in the input, whether the arrow
//! can start a lambda expression or serves some other purpose.
//!
//! Only block comments and text blocks survive a newline in Java; strings,
//! character literals, and line comments always end with their line, so
//! [`ScanState`] is two flags and a file can be scanned line by line.

use serde::{Deserialize, Serialize};

use crate::SourceLocation;

/// Lexical state carried across line boundaries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScanState {
    /// Inside a `/* ... */` comment that has not closed yet.
    pub in_block_comment: bool,
    /// Inside a `"""` text block that has not closed yet.
    pub in_text_block: bool,
}

impl ScanState {
    /// Fresh state for the start of a file or an isolated line.
    pub fn new() -> Self {
        Self::default()
    }
}

/// Lexical context of a single `->` occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArrowContext {
    /// Ordinary code position; the only context that can start a lambda.
    Code,
    /// Inside a `//` or `/* ... */` comment.
    Comment,
    /// Inside a string literal or text block.
    String,
    /// Inside a character literal.
    CharLiteral,
    /// Arrow of a `case ... ->` / `default ->` switch rule.
    SwitchCaseArrow,
    /// The trailing `->` of a `-->` sequence, as in `i-->0`.
    DecrementGt,
}

/// One `->` occurrence. `location` points at the `-` character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowHit {
    pub location: SourceLocation,
    pub context: ArrowContext,
}

impl ArrowHit {
    pub fn is_code(&self) -> bool {
        self.context == ArrowContext::Code
    }
}

/// Per-character lexical class, the scanner's working representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CharClass {
    Code,
    LineComment,
    BlockComment,
    Str,
    TextBlock,
    CharLit,
}

impl CharClass {
    pub(crate) fn is_comment(self) -> bool {
        matches!(self, CharClass::LineComment | CharClass::BlockComment)
    }
}

/// Classify every character of one line and fold the cross-line state.
///
/// `chars` must not contain line terminators.
pub(crate) fn classify_line(chars: &[char], state: ScanState) -> (Vec<CharClass>, ScanState) {
    #[derive(Clone, Copy, PartialEq)]
    enum Mode {
        Code,
        Block,
        Str,
        CharLit,
        Text,
    }

    let len = chars.len();
    let mut classes = vec![CharClass::Code; len];
    let mut mode = if state.in_block_comment {
        Mode::Block
    } else if state.in_text_block {
        Mode::Text
    } else {
        Mode::Code
    };

    let mut i = 0;
    while i < len {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match mode {
            Mode::Code => match c {
                '/' if next == Some('/') => {
                    // Line comment runs to the end of the line.
                    for class in classes.iter_mut().skip(i) {
                        *class = CharClass::LineComment;
                    }
                    i = len;
                }
                '/' if next == Some('*') => {
                    classes[i] = CharClass::BlockComment;
                    classes[i + 1] = CharClass::BlockComment;
                    i += 2;
                    mode = Mode::Block;
                }
                '"' if next == Some('"') && chars.get(i + 2) == Some(&'"') => {
                    classes[i] = CharClass::TextBlock;
                    classes[i + 1] = CharClass::TextBlock;
                    classes[i + 2] = CharClass::TextBlock;
                    i += 3;
                    mode = Mode::Text;
                }
                '"' => {
                    classes[i] = CharClass::Str;
                    i += 1;
                    mode = Mode::Str;
                }
                '\'' => {
                    classes[i] = CharClass::CharLit;
                    i += 1;
                    mode = Mode::CharLit;
                }
                _ => {
                    i += 1;
                }
            },
            Mode::Block => {
                if c == '*' && next == Some('/') {
                    classes[i] = CharClass::BlockComment;
                    classes[i + 1] = CharClass::BlockComment;
                    i += 2;
                    mode = Mode::Code;
                } else {
                    classes[i] = CharClass::BlockComment;
                    i += 1;
                }
            }
            Mode::Str => {
                classes[i] = CharClass::Str;
                if c == '\\' {
                    if i + 1 < len {
                        classes[i + 1] = CharClass::Str;
                    }
                    i += 2;
                } else {
                    if c == '"' {
                        mode = Mode::Code;
                    }
                    i += 1;
                }
            }
            Mode::CharLit => {
                classes[i] = CharClass::CharLit;
                if c == '\\' {
                    if i + 1 < len {
                        classes[i + 1] = CharClass::CharLit;
                    }
                    i += 2;
                } else {
                    if c == '\'' {
                        mode = Mode::Code;
                    }
                    i += 1;
                }
            }
            Mode::Text => {
                classes[i] = CharClass::TextBlock;
                if c == '\\' {
                    if i + 1 < len {
                        classes[i + 1] = CharClass::TextBlock;
                    }
                    i += 2;
                } else if c == '"' && next == Some('"') && chars.get(i + 2) == Some(&'"') {
                    classes[i + 1] = CharClass::TextBlock;
                    classes[i + 2] = CharClass::TextBlock;
                    i += 3;
                    mode = Mode::Code;
                } else {
                    i += 1;
                }
            }
        }
    }

    // Unterminated strings, char literals, and line comments reset at the
    // line boundary; only block comments and text blocks carry over.
    let out = ScanState {
        in_block_comment: mode == Mode::Block,
        in_text_block: mode == Mode::Text,
    };
    (classes, out)
}

/// Classify a char sequence that may contain newlines, folding state across
/// them. Newline characters come back as [`CharClass::Code`].
pub(crate) fn classify_text(chars: &[char]) -> Vec<CharClass> {
    let mut classes = Vec::with_capacity(chars.len());
    let mut state = ScanState::new();
    let mut start = 0;
    for (i, &c) in chars.iter().enumerate() {
        if c == '\n' {
            let (line_classes, next) = classify_line(&chars[start..i], state);
            classes.extend(line_classes);
            classes.push(CharClass::Code);
            state = next;
            start = i + 1;
        }
    }
    let (line_classes, _) = classify_line(&chars[start..], state);
    classes.extend(line_classes);
    classes
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

pub(crate) fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Decide whether the code arrow at `arrow` is a switch rule arrow.
///
/// Walks backwards over code characters to the nearest statement boundary
/// (`;`, `{`, `}`, `:`, a previous `->`, or the start of the line) and checks
/// whether that segment's first token is `case` or `default`.
fn is_switch_rule_arrow(chars: &[char], classes: &[CharClass], arrow: usize) -> bool {
    let mut seg_start = 0;
    let mut j = arrow;
    while j > 0 {
        j -= 1;
        if classes[j] != CharClass::Code {
            continue;
        }
        match chars[j] {
            ';' | '{' | '}' | ':' => {
                seg_start = j + 1;
                break;
            }
            '>' if j > 0 && chars[j - 1] == '-' && classes[j - 1] == CharClass::Code => {
                seg_start = j + 1;
                break;
            }
            _ => {}
        }
    }

    // First identifier token of the segment.
    let mut k = seg_start;
    while k < arrow {
        if classes[k] == CharClass::Code && is_ident_start(chars[k]) {
            let start = k;
            while k < arrow && classes[k] == CharClass::Code && is_ident_part(chars[k]) {
                k += 1;
            }
            let token: String = chars[start..k].iter().collect();
            return token == "case" || token == "default";
        }
        if classes[k] == CharClass::Code && !chars[k].is_whitespace() {
            return false;
        }
        k += 1;
    }
    false
}

/// Find every `->` in a classified line and label its context.
pub(crate) fn find_arrows(
    chars: &[char],
    classes: &[CharClass],
    line_idx: usize,
) -> Vec<ArrowHit> {
    let mut hits = Vec::new();
    let len = chars.len();
    for i in 0..len.saturating_sub(1) {
        if chars[i] != '-' || chars[i + 1] != '>' {
            continue;
        }
        let context = match classes[i] {
            CharClass::LineComment | CharClass::BlockComment => ArrowContext::Comment,
            CharClass::Str | CharClass::TextBlock => ArrowContext::String,
            CharClass::CharLit => ArrowContext::CharLiteral,
            CharClass::Code => {
                if i > 0 && chars[i - 1] == '-' && classes[i - 1] == CharClass::Code {
                    ArrowContext::DecrementGt
                } else if is_switch_rule_arrow(chars, classes, i) {
                    ArrowContext::SwitchCaseArrow
                } else {
                    ArrowContext::Code
                }
            }
        };
        hits.push(ArrowHit {
            location: SourceLocation::new(line_idx, i),
            context,
        });
    }
    hits
}

/// Scan a single line for arrows, folding the cross-line state.
///
/// `line` must not contain line terminators. The returned hits carry
/// `line_idx` as their line number. Arbitrary content is tolerated; the
/// function never fails.
pub fn scan_line(line: &str, line_idx: usize, state: ScanState) -> (Vec<ArrowHit>, ScanState) {
    let chars: Vec<char> = line.chars().collect();
    let (classes, next) = classify_line(&chars, state);
    (find_arrows(&chars, &classes, line_idx), next)
}

/// Scan a whole text from a fresh state, one line at a time.
pub fn scan_text(source: &str) -> Vec<ArrowHit> {
    let mut state = ScanState::new();
    let mut hits = Vec::new();
    for (idx, line) in source.split('\n').enumerate() {
        let (mut line_hits, next) = scan_line(line, idx, state);
        hits.append(&mut line_hits);
        state = next;
    }
    hits
}
