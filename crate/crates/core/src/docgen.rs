//! English documentation for single-statement lambda expressions.
//!
//! Every generated sentence opens with "This lambda expression", names the
//! parameters, and verbalizes the body after "and returns". Method names are
//! split on camel case, known method names can be replaced from a lexicon
//! (`compare` reads as "compared to"), and operators are worded (`+` becomes
//! "plus"). Bodies with more than one statement are rejected rather than
//! half-documented.

use std::collections::BTreeMap;
use std::io::{self, BufRead};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detect::{self, DetectError, Parameter};
use crate::scan::{self, CharClass};
use crate::SourceLocation;

const INTRO: &str = "This lambda expression";

/// Fixed wording for the operators the generator understands.
const OPERATOR_WORDS: &[(&str, &str)] = &[
    ("==", "equals"),
    ("!=", "not equal"),
    ("&&", "and"),
    ("||", "or"),
    ("+", "plus"),
    ("-", "minus"),
    ("*", "times"),
    ("/", "divided by"),
    ("=", "equal"),
    (">", "greater than"),
    ("<", "less than"),
];

/// Multi-character operator tokens recognized by the body tokenizer, worded
/// or not. Longest match wins.
const COMPOUND_OPERATORS: &[&str] = &[
    "==", "!=", "&&", "||", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "++", "--", "::", "<<",
    ">>",
];

/// How one argument of a method call is rendered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArgKind {
    StringLiteral,
    Identifier,
    QualifiedName,
    ArrayAccess,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgRendering {
    pub kind: ArgKind,
    pub rendered: String,
}

/// Receiver of a detected method call.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Receiver {
    /// The call has no explicit receiver (`createNode(...)`).
    None,
    /// The receiver is the lambda's own single parameter; reads as "on it".
    SelfParameter,
    /// Any other receiver text, rendered possessively.
    Named(String),
}

/// The first method call found in a lambda body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BodyCall {
    pub receiver: Receiver,
    pub method_name: String,
    pub arguments: Vec<ArgRendering>,
}

/// Template slots that were filled while rendering.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocSlots {
    pub param_clause: String,
    pub return_clause: Option<String>,
}

/// A generated sentence plus a trace of how it was assembled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocSentence {
    pub text: String,
    pub slots: DocSlots,
    /// Method-name substitutions taken from the lexicon, in order.
    pub lexicon_hits: Vec<(String, String)>,
    /// Operators that had no wording and were rendered verbatim.
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum DocError {
    #[error("no lambda arrow found in the input")]
    NoArrow,
    #[error(transparent)]
    Malformed(#[from] DetectError),
    #[error("unsupported: body is not a single statement: {span:?}")]
    MultiStatementBody { span: String },
    #[error("unsupported: the body contains another lambda expression at {location}")]
    NestedLambdaBody { location: SourceLocation },
}

impl DocError {
    /// Unsupported-but-well-formed inputs, as opposed to malformed ones.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            DocError::MultiStatementBody { .. } | DocError::NestedLambdaBody { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown operator: {0:?}")]
pub struct UnknownOperator(pub String);

/// Replace an operator token with its wording.
pub fn operator_to_word(operator: &str) -> Result<&'static str, UnknownOperator> {
    OPERATOR_WORDS
        .iter()
        .find(|(op, _)| *op == operator)
        .map(|(_, word)| *word)
        .ok_or_else(|| UnknownOperator(operator.to_string()))
}

/// Insert spaces at camel-case boundaries.
///
/// Runs of capitals stay together (`HTMLParser` reads "HTML Parser");
/// digits stay attached to their word.
pub fn camel_case_split(identifier: &str) -> String {
    let chars: Vec<char> = identifier.chars().collect();
    let mut out = String::with_capacity(identifier.len() + 4);
    for (i, &c) in chars.iter().enumerate() {
        if i > 0 && c.is_uppercase() {
            let prev = chars[i - 1];
            let acronym_end =
                prev.is_uppercase() && chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || acronym_end {
                out.push(' ');
            }
        }
        out.push(c);
    }
    out
}

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

/// Method-name wordings. Lookup first, camel-case split as the fallback.
#[derive(Clone, Debug)]
pub struct Lexicon {
    methods: BTreeMap<String, String>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Lexicon {
    /// The built-in wordings.
    pub fn builtin() -> Self {
        let mut methods = BTreeMap::new();
        methods.insert("compare".to_string(), "compared to".to_string());
        Self { methods }
    }

    /// Extend the built-in lexicon with `name<TAB>phrase` lines. Later
    /// entries override earlier ones; blank lines and `#` lines are skipped.
    pub fn with_overrides<R: BufRead>(reader: R) -> io::Result<Self> {
        let mut lexicon = Self::builtin();
        for line in reader.lines() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some((name, phrase)) = trimmed.split_once('\t') {
                lexicon
                    .methods
                    .insert(name.trim().to_string(), phrase.trim().to_string());
            } else {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("lexicon line has no tab separator: {trimmed:?}"),
                ));
            }
        }
        Ok(lexicon)
    }

    pub fn from_file(path: &Path) -> io::Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::with_overrides(io::BufReader::new(file))
    }

    fn lookup(&self, name: &str) -> Option<&str> {
        self.methods.get(name).map(String::as_str)
    }
}

/// Word a method name: lexicon first, camel-case split otherwise.
pub fn verbalize_method_name(name: &str, lexicon: &Lexicon) -> String {
    lexicon
        .lookup(name)
        .map(str::to_string)
        .unwrap_or_else(|| camel_case_split(name))
}

// ---------------------------------------------------------------------------
// Parameter clause
// ---------------------------------------------------------------------------

fn display_param(p: &Parameter) -> String {
    match &p.declared_type {
        Some(ty) => format!("{ty} {}", p.name),
        None => p.name.clone(),
    }
}

fn join_with_and(items: &[String]) -> String {
    match items.len() {
        0 => String::new(),
        1 => items[0].clone(),
        _ => format!(
            "{} and {}",
            items[..items.len() - 1].join(", "),
            items[items.len() - 1]
        ),
    }
}

/// Render the parameter clause of the sentence.
pub fn render_param_clause(parameters: &[Parameter]) -> String {
    match parameters.len() {
        0 => "does not take any parameter".to_string(),
        1 => format!("takes 1 parameter {}", display_param(&parameters[0])),
        n => {
            let names: Vec<String> = parameters.iter().map(display_param).collect();
            format!("takes {n} parameters {}", join_with_and(&names))
        }
    }
}

// ---------------------------------------------------------------------------
// Body tokenization
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Number(String),
    Str(String),
    CharLit(String),
    Op(String),
    Punct(char),
}

/// Tokenize a statement. Decimal literals keep their dot, so `3.14` never
/// looks like a member access.
fn tokenize(statement: &str) -> Vec<Token> {
    let chars: Vec<char> = statement.chars().collect();
    let classes = scan::classify_text(&chars);
    let mut tokens = Vec::new();
    let mut i = 0;
    let len = chars.len();

    while i < len {
        let c = chars[i];
        match classes[i] {
            CharClass::LineComment | CharClass::BlockComment => {
                i += 1;
            }
            CharClass::Str | CharClass::TextBlock => {
                let start = i;
                while i < len && matches!(classes[i], CharClass::Str | CharClass::TextBlock) {
                    i += 1;
                }
                let raw: String = chars[start..i].iter().collect();
                let inner = raw
                    .trim_start_matches('"')
                    .trim_end_matches('"')
                    .to_string();
                tokens.push(Token::Str(inner));
            }
            CharClass::CharLit => {
                let start = i;
                while i < len && classes[i] == CharClass::CharLit {
                    i += 1;
                }
                let raw: String = chars[start..i].iter().collect();
                tokens.push(Token::CharLit(
                    raw.trim_matches('\'').to_string(),
                ));
            }
            CharClass::Code => {
                if c.is_whitespace() {
                    i += 1;
                } else if scan::is_ident_start(c) {
                    let start = i;
                    while i < len && scan::is_ident_part(chars[i]) {
                        i += 1;
                    }
                    tokens.push(Token::Ident(chars[start..i].iter().collect()));
                } else if c.is_ascii_digit() {
                    let start = i;
                    while i < len && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i + 1 < len && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                        i += 1;
                        while i < len && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                    // Numeric suffixes: 1L, 2.5f, 0x1F.
                    while i < len && chars[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    tokens.push(Token::Number(chars[start..i].iter().collect()));
                } else if matches!(c, '(' | ')' | '[' | ']' | '{' | '}' | ',' | '.' | ';') {
                    tokens.push(Token::Punct(c));
                    i += 1;
                } else {
                    let pair: String = chars[i..(i + 2).min(len)].iter().collect();
                    if COMPOUND_OPERATORS.contains(&pair.as_str()) {
                        tokens.push(Token::Op(pair));
                        i += 2;
                    } else {
                        tokens.push(Token::Op(c.to_string()));
                        i += 1;
                    }
                }
            }
        }
    }
    tokens
}

// ---------------------------------------------------------------------------
// Method call detection
// ---------------------------------------------------------------------------

/// Find the first method call in a body.
///
/// A call is an identifier directly followed by `(`; the receiver is the
/// dotted name chain read backwards from the qualifying dot. A dot followed
/// by a digit belongs to a decimal literal and never starts a call.
/// `sole_param` marks a receiver equal to the lambda's only parameter.
pub fn detect_method_call(body: &str, sole_param: Option<&str>) -> Option<BodyCall> {
    let tokens = tokenize(body);
    let mut i = 0;
    while i < tokens.len() {
        if let Token::Ident(_) = tokens[i] {
            let (chain, after) = read_name_chain(&tokens, i);
            if tokens.get(after) == Some(&Token::Punct('(')) {
                let (args, _) = split_call_args(&tokens, after);
                return Some(make_call(&chain, args, sole_param));
            }
            i = after.max(i + 1);
        } else {
            i += 1;
        }
    }
    None
}

/// Read `a.b.c` starting at an identifier token; returns the chain and the
/// index of the first token after it.
fn read_name_chain(tokens: &[Token], start: usize) -> (Vec<String>, usize) {
    let mut chain = Vec::new();
    let mut i = start;
    while let Some(Token::Ident(name)) = tokens.get(i) {
        chain.push(name.clone());
        if tokens.get(i + 1) == Some(&Token::Punct('.')) {
            if let Some(Token::Ident(_)) = tokens.get(i + 2) {
                i += 2;
                continue;
            }
        }
        i += 1;
        break;
    }
    (chain, i)
}

/// Token index just past the `(` at `open`, with the argument token groups
/// split at top-level commas.
fn split_call_args(tokens: &[Token], open: usize) -> (Vec<Vec<Token>>, usize) {
    let mut args: Vec<Vec<Token>> = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut depth = 1usize;
    let mut i = open + 1;
    while i < tokens.len() {
        match &tokens[i] {
            Token::Punct('(') | Token::Punct('[') | Token::Punct('{') => {
                depth += 1;
                current.push(tokens[i].clone());
            }
            Token::Punct(')') | Token::Punct(']') | Token::Punct('}') => {
                depth -= 1;
                if depth == 0 {
                    i += 1;
                    break;
                }
                current.push(tokens[i].clone());
            }
            Token::Punct(',') if depth == 1 => {
                args.push(std::mem::take(&mut current));
            }
            t => current.push(t.clone()),
        }
        i += 1;
    }
    if !current.is_empty() {
        args.push(current);
    }
    (args, i)
}

fn make_call(chain: &[String], arg_groups: Vec<Vec<Token>>, sole_param: Option<&str>) -> BodyCall {
    let method_name = chain.last().cloned().unwrap_or_default();
    let receiver_chain = &chain[..chain.len().saturating_sub(1)];
    let receiver = if receiver_chain.is_empty() {
        Receiver::None
    } else if receiver_chain.len() == 1 && Some(receiver_chain[0].as_str()) == sole_param {
        Receiver::SelfParameter
    } else {
        Receiver::Named(receiver_chain.join(" "))
    };
    let arguments = arg_groups.iter().map(|g| render_arg(g)).collect();
    BodyCall {
        receiver,
        method_name,
        arguments,
    }
}

fn render_arg(tokens: &[Token]) -> ArgRendering {
    match tokens {
        [Token::Str(s)] => ArgRendering {
            kind: ArgKind::StringLiteral,
            rendered: format!("\"{s}\""),
        },
        [Token::Ident(name)] => ArgRendering {
            kind: ArgKind::Identifier,
            rendered: name.clone(),
        },
        [Token::Number(n)] => ArgRendering {
            kind: ArgKind::Other,
            rendered: n.clone(),
        },
        _ => {
            if let Some(arg) = try_render_qualified(tokens) {
                return arg;
            }
            if let Some(arg) = try_render_array_access(tokens) {
                return arg;
            }
            ArgRendering {
                kind: ArgKind::Other,
                rendered: render_raw_tokens(tokens),
            }
        }
    }
}

/// `a.b.c` as an argument reads with the dots as spaces.
fn try_render_qualified(tokens: &[Token]) -> Option<ArgRendering> {
    let (chain, after) = match tokens.first() {
        Some(Token::Ident(_)) => read_name_chain(tokens, 0),
        _ => return None,
    };
    (after == tokens.len() && chain.len() > 1).then(|| ArgRendering {
        kind: ArgKind::QualifiedName,
        rendered: chain.join(" "),
    })
}

/// `base[index]` reads as `element of "<split base>" array <index>`.
fn try_render_array_access(tokens: &[Token]) -> Option<ArgRendering> {
    let (chain, after) = match tokens.first() {
        Some(Token::Ident(_)) => read_name_chain(tokens, 0),
        _ => return None,
    };
    if tokens.get(after) != Some(&Token::Punct('[')) || tokens.last() != Some(&Token::Punct(']'))
    {
        return None;
    }
    let index = render_raw_tokens(&tokens[after + 1..tokens.len() - 1]);
    let base = camel_case_split(&chain.join(" "));
    Some(ArgRendering {
        kind: ArgKind::ArrayAccess,
        rendered: format!("element of \"{base}\" array {index}"),
    })
}

/// Fallback rendering: the tokens, lightly re-joined.
fn render_raw_tokens(tokens: &[Token]) -> String {
    let mut out = String::new();
    for token in tokens {
        let piece = match token {
            Token::Ident(s) | Token::Number(s) | Token::Op(s) => s.clone(),
            Token::Str(s) => format!("\"{s}\""),
            Token::CharLit(s) => format!("'{s}'"),
            Token::Punct(c) => c.to_string(),
        };
        if !out.is_empty()
            && !matches!(token, Token::Punct('.') | Token::Punct(',') | Token::Punct(')') | Token::Punct(']'))
            && !out.ends_with(['.', '(', '['])
        {
            out.push(' ');
        }
        out.push_str(&piece);
    }
    out
}

// ---------------------------------------------------------------------------
// Sentence generation
// ---------------------------------------------------------------------------

struct Renderer<'a> {
    lexicon: &'a Lexicon,
    sole_param: Option<String>,
    lexicon_hits: Vec<(String, String)>,
    warnings: Vec<String>,
}

impl Renderer<'_> {
    fn render_statement(&mut self, statement: &str) -> String {
        let tokens = tokenize(statement);
        let mut words: Vec<String> = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            match &tokens[i] {
                Token::Ident(_) => {
                    let (chain, after) = read_name_chain(&tokens, i);
                    if tokens.get(after) == Some(&Token::Punct('(')) {
                        let (args, past) = split_call_args(&tokens, after);
                        let call = make_call(&chain, args, self.sole_param.as_deref());
                        words.push(self.render_call(&call));
                        i = past;
                    } else if tokens.get(after) == Some(&Token::Punct('[')) {
                        // Array access in expression position.
                        let (group, past) = consume_bracket_group(&tokens, i, after);
                        words.push(render_arg(&group).rendered);
                        i = past;
                    } else {
                        words.push(chain.join(" "));
                        i = after;
                    }
                }
                Token::Op(op) => {
                    match operator_to_word(op) {
                        Ok(word) => words.push(word.to_string()),
                        Err(_) => {
                            self.warnings.push(op.clone());
                            words.push(op.clone());
                        }
                    }
                    i += 1;
                }
                Token::Str(s) => {
                    words.push(format!("\"{s}\""));
                    i += 1;
                }
                Token::CharLit(s) => {
                    words.push(format!("'{s}'"));
                    i += 1;
                }
                Token::Number(n) => {
                    words.push(n.clone());
                    i += 1;
                }
                Token::Punct(_) => {
                    // Grouping parentheses and stray punctuation add nothing.
                    i += 1;
                }
            }
        }
        words.join(" ")
    }

    fn render_call(&mut self, call: &BodyCall) -> String {
        let name = match self.lexicon.lookup(&call.method_name) {
            Some(phrase) => {
                self.lexicon_hits
                    .push((call.method_name.clone(), phrase.to_string()));
                phrase.to_string()
            }
            None => camel_case_split(&call.method_name),
        };

        let mut out = String::from("the result of the execution of ");
        match &call.receiver {
            Receiver::None => {
                out.push_str(&format!("the \"{name}\" method"));
            }
            Receiver::SelfParameter => {
                out.push_str(&format!("the \"{name}\" method on it"));
            }
            Receiver::Named(receiver) => {
                out.push_str(&format!("{receiver}'s \"{name}\" method"));
            }
        }

        let rendered: Vec<String> = call.arguments.iter().map(|a| a.rendered.clone()).collect();
        match rendered.len() {
            0 => {}
            1 => out.push_str(&format!(" with parameter {}", rendered[0])),
            2 => out.push_str(&format!(
                " with two parameters {} and {}",
                rendered[0], rendered[1]
            )),
            n => out.push_str(&format!(
                " with {n} parameters {}",
                join_with_and(&rendered)
            )),
        }
        out
    }
}

/// Consume `base[...]` starting at the identifier index; returns the token
/// group and the index past the closing bracket.
fn consume_bracket_group(tokens: &[Token], start: usize, open: usize) -> (Vec<Token>, usize) {
    let mut depth = 0usize;
    let mut end = open;
    for (offset, token) in tokens[open..].iter().enumerate() {
        match token {
            Token::Punct('[') => depth += 1,
            Token::Punct(']') => {
                depth -= 1;
                if depth == 0 {
                    end = open + offset;
                    break;
                }
            }
            _ => {}
        }
    }
    (tokens[start..=end].to_vec(), end + 1)
}

/// Generate documentation for a lambda expression using the built-in lexicon.
pub fn generate_doc(expression: &str) -> Result<DocSentence, DocError> {
    generate_doc_with(expression, &Lexicon::builtin())
}

/// Generate documentation with a caller-supplied lexicon.
pub fn generate_doc_with(expression: &str, lexicon: &Lexicon) -> Result<DocSentence, DocError> {
    let hits: Vec<_> = scan::scan_text(expression)
        .into_iter()
        .filter(|h| h.is_code())
        .collect();
    let first = *hits.first().ok_or(DocError::NoArrow)?;
    if let Some(second) = hits.get(1) {
        return Err(DocError::NestedLambdaBody {
            location: second.location,
        });
    }

    let st = detect::SourceText::new(expression);
    let (lambda, body) = detect::extract_in(&st, first)?;

    let statement = match body.start {
        None => None,
        Some(start) => {
            let text = st.slice(start, body.end);
            resolve_single_statement(text, &body, st.text_after(body.end))?
        }
    };

    let param_clause = render_param_clause(&lambda.parameters);
    let mut renderer = Renderer {
        lexicon,
        sole_param: (lambda.parameters.len() == 1)
            .then(|| lambda.parameters[0].name.clone()),
        lexicon_hits: Vec::new(),
        warnings: Vec::new(),
    };

    let return_clause = statement
        .as_deref()
        .map(|s| renderer.render_statement(s))
        .filter(|s| !s.is_empty());

    let text = match &return_clause {
        Some(clause) => format!("{INTRO} {param_clause} and returns {clause}."),
        None => format!("{INTRO} {param_clause}."),
    };

    Ok(DocSentence {
        text,
        slots: DocSlots {
            param_clause,
            return_clause,
        },
        lexicon_hits: renderer.lexicon_hits,
        warnings: renderer.warnings,
    })
}

/// Reduce the extracted body to one statement, or reject it.
fn resolve_single_statement(
    body_text: &str,
    body: &detect::BodyInfo,
    tail: &str,
) -> Result<Option<String>, DocError> {
    if body.block {
        let inner = body_text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(body_text)
            .trim();
        let statements = split_statements(inner);
        match statements.len() {
            0 => Ok(None),
            1 => {
                let stmt = statements[0]
                    .trim()
                    .strip_prefix("return")
                    .filter(|r| {
                        r.is_empty() || r.starts_with(|c: char| !scan::is_ident_part(c))
                    })
                    .unwrap_or(statements[0])
                    .trim();
                Ok(Some(stmt.to_string()))
            }
            _ => Err(DocError::MultiStatementBody {
                span: inner.to_string(),
            }),
        }
    } else {
        if body.semicolon_terminated {
            // Anything after the terminating `;` other than whitespace and
            // closers means a second statement.
            if tail
                .chars()
                .any(|c| !c.is_whitespace() && !matches!(c, ')' | ']' | '}' | ';'))
            {
                return Err(DocError::MultiStatementBody {
                    span: tail.trim().to_string(),
                });
            }
        }
        Ok(Some(body_text.trim().to_string()))
    }
}

/// Split a block interior at top-level semicolons.
fn split_statements(inner: &str) -> Vec<&str> {
    let chars: Vec<char> = inner.chars().collect();
    let classes = scan::classify_text(&chars);
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start_byte = 0;
    let mut byte = 0;
    for (i, &c) in chars.iter().enumerate() {
        if classes[i] == CharClass::Code {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                ';' if depth == 0 => {
                    let piece = &inner[start_byte..byte];
                    if !piece.trim().is_empty() {
                        parts.push(piece);
                    }
                    start_byte = byte + c.len_utf8();
                }
                _ => {}
            }
        }
        byte += c.len_utf8();
    }
    let last = &inner[start_byte..];
    if !last.trim().is_empty() {
        parts.push(last);
    }
    parts
}
