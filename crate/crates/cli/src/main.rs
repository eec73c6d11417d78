//! `jlambda` — detect, document, and measure Java lambda expressions.
//!
//! Exit codes are stable: 0 on success, 1 for input or usage errors, 2 when
//! the input is well-formed but unsupported (multi-statement or nested
//! bodies). Machine output goes to stdout, diagnostics to stderr.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use jlambda::corpus::{self, ScanOptions};
use jlambda::diff;
use jlambda::docgen::{self, DocError, Lexicon};
use jlambda::report::{self, ReportFormat};
use jlambda::{detect, SourceLocation};

const EXIT_INPUT_ERROR: u8 = 1;
const EXIT_UNSUPPORTED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "jlambda",
    version,
    about = "Detect, document, and measure Java lambda expressions in source text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an English sentence for a single-statement lambda expression
    Doc {
        /// Inline expression; reads stdin when omitted
        #[arg(short = 'e', long = "expr")]
        expr: Option<String>,

        /// Extra method-name wordings, one `name<TAB>phrase` per line
        #[arg(long)]
        lexicon: Option<PathBuf>,

        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },

    /// Detect lambda expressions in a file and print their metadata
    Detect {
        path: PathBuf,

        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },

    /// Scan a directory tree and aggregate usage statistics
    Scan {
        root: PathBuf,

        /// Write the report here instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,

        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormatArg,

        /// File-name glob to scan
        #[arg(long, default_value = "*.java")]
        glob: String,
    },

    /// Classify arrow-bearing lines of a unified diff
    Diff {
        patch: PathBuf,

        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormatArg {
    Json,
    Csv,
}

impl From<ReportFormatArg> for ReportFormat {
    fn from(value: ReportFormatArg) -> Self {
        match value {
            ReportFormatArg::Json => ReportFormat::Json,
            ReportFormatArg::Csv => ReportFormat::Csv,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed stdout (e.g. piping into `head`) is not an error.
        Err(CliError { code: 0, .. }) => ExitCode::SUCCESS,
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT_ERROR,
            message: message.into(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError {
                code: 0,
                message: String::new(),
            };
        }
        CliError::input(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Doc {
            expr,
            lexicon,
            format,
        } => cmd_doc(expr, lexicon.as_deref(), format),
        Command::Detect { path, format } => cmd_detect(&path, format),
        Command::Scan {
            root,
            report,
            format,
            glob,
        } => cmd_scan(&root, report.as_deref(), format.into(), glob),
        Command::Diff { patch, format } => cmd_diff(&patch, format),
    }
}

fn cmd_doc(
    expr: Option<String>,
    lexicon: Option<&Path>,
    format: OutputFormat,
) -> Result<(), CliError> {
    let input = match expr {
        Some(e) => e,
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    if input.trim().is_empty() {
        return Err(CliError::input("empty expression"));
    }

    let lexicon = match lexicon {
        Some(path) => Lexicon::from_file(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
        None => Lexicon::builtin(),
    };

    match docgen::generate_doc_with(&input, &lexicon) {
        Ok(sentence) => {
            match format {
                OutputFormat::Text | OutputFormat::Csv => println!("{}", sentence.text),
                OutputFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&sentence).expect("sentence serializes")
                ),
            }
            Ok(())
        }
        Err(e) => Err(CliError {
            code: if e.is_unsupported() {
                EXIT_UNSUPPORTED
            } else {
                EXIT_INPUT_ERROR
            },
            message: doc_error_message(&e),
        }),
    }
}

fn doc_error_message(e: &DocError) -> String {
    let kind = match e {
        DocError::NoArrow => "NoArrow",
        DocError::Malformed(detect::DetectError::MalformedHead { .. }) => "MalformedHead",
        DocError::Malformed(detect::DetectError::UnbalancedDelimiters { .. }) => {
            "UnbalancedDelimiters"
        }
        DocError::MultiStatementBody { .. } => "MultiStatementBody",
        DocError::NestedLambdaBody { .. } => "NestedLambdaBody",
    };
    format!("{kind}: {e}")
}

fn cmd_detect(path: &Path, format: OutputFormat) -> Result<(), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8_lossy(&bytes);
    let detection = detect::detect_lambdas(&text);

    for issue in &detection.errors {
        eprintln!("warning: arrow at {}: {}", issue.arrow, issue.error);
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &detection.lambdas)
                .map_err(|e| CliError::input(e.to_string()))?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            writeln!(
                out,
                "start,end,line_count,param_count,typing,body_kind,nesting_depth,comments,raw_text"
            )?;
            let mut w = csv::WriterBuilder::new().from_writer(out);
            for l in &detection.lambdas {
                w.write_record([
                    l.start.to_string(),
                    l.end.to_string(),
                    l.line_count.to_string(),
                    l.param_count.to_string(),
                    format!("{:?}", l.typing),
                    format!("{:?}", l.body_kind),
                    l.nesting_depth.to_string(),
                    l.comments.len().to_string(),
                    l.raw_text.clone(),
                ])
                .map_err(|e| CliError::input(e.to_string()))?;
            }
            w.flush()?;
        }
        OutputFormat::Text => {
            for l in &detection.lambdas {
                writeln!(
                    out,
                    "{}..{} lines={} params={} {:?} {:?} depth={} comments={}",
                    l.start,
                    l.end,
                    l.line_count,
                    l.param_count,
                    l.typing,
                    l.body_kind,
                    l.nesting_depth,
                    l.comments.len(),
                )?;
                writeln!(out, "    {}", l.raw_text.replace('\n', "\n    "))?;
                for c in &l.comments {
                    writeln!(
                        out,
                        "    [{:?} @ {}] {}",
                        c.placement,
                        c.location,
                        c.text.replace('\n', " ")
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_scan(
    root: &Path,
    report_path: Option<&Path>,
    format: ReportFormat,
    glob: String,
) -> Result<(), CliError> {
    let options = ScanOptions {
        glob,
        ..ScanOptions::default()
    };
    let outcome = corpus::scan_tree(root, &options)
        .map_err(|e| CliError::input(format!("{}: {e}", root.display())))?;

    let summary = format!(
        "total={} unique={}",
        outcome.stats.total_lambdas, outcome.stats.unique_lambdas
    );
    match report_path {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            report::write_report(&outcome.stats, Some(&outcome.records), format, file)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            println!("{summary}");
        }
        None => {
            report::write_report(
                &outcome.stats,
                Some(&outcome.records),
                format,
                io::stdout().lock(),
            )?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_diff(patch: &Path, format: OutputFormat) -> Result<(), CliError> {
    let text = std::fs::read_to_string(patch)
        .map_err(|e| CliError::input(format!("{}: {e}", patch.display())))?;
    let lines = diff::classify_diff_lines(&text).map_err(|e| CliError::input(e.to_string()))?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &lines)
                .map_err(|e| CliError::input(e.to_string()))?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "line,column,label,source")?;
            for c in &lines {
                writeln!(
                    out,
                    "{},{},{:?},{:?}",
                    c.location.line, c.location.column, c.label, c.source
                )?;
            }
        }
        OutputFormat::Text => {
            for c in &lines {
                writeln!(out, "{} {:?} {:?}", location_display(c.location), c.label, c.source)?;
            }
        }
    }
    Ok(())
}

fn location_display(loc: SourceLocation) -> String {
    loc.to_string()
}
