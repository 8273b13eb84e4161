use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use kronholm::families;
use kronholm::io::{module_from_documents, parse_complex, parse_complex_unchecked, ReportDocument};
use kronholm::module::FreeModule;
use kronholm::oracle::{verify_trace, DEFAULT_MARGIN};
use kronholm::pipeline::{compute_partial, query_finite_type, validate, FiniteStream};
use kronholm::render::{default_window, render_ascii, render_svg};
use kronholm::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NOT_REALIZABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "kronholm", version, about = "Free RO(C2)-graded cohomology of Rep(C2)-complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the attachment pipeline and print a JSON report.
    Compute {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report a non-realizable stage as a warning and stop there.
        #[arg(long)]
        algebraic: bool,
        #[arg(long)]
        margin: Option<i64>,
    },
    /// Check every stage against the long exact sequence.
    Verify {
        file: PathBuf,
        #[arg(long)]
        margin: Option<i64>,
    },
    /// Draw the cohomology of a stage.
    Render {
        /// A complex or a report produced by `compute`.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// 1-based stage index, or `final`.
        #[arg(long, default_value = "final")]
        stage: String,
    },
    /// Dimension of one bidegree, using truncation for infinite families.
    Query {
        /// A built-in name (rp2tw, gr1-r41, rp-infinity-trivial) or a file.
        source: String,
        #[arg(short, allow_hyphen_values = true)]
        p: i64,
        #[arg(short, allow_hyphen_values = true)]
        q: i64,
    },
    /// Check a complex for ordering, degree and label errors.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: EXIT_INPUT, error: e.into() }
    }
}

type CliResult = Result<u8, Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn margin(flag: Option<i64>) -> anyhow::Result<i64> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match std::env::var("KRONHOLM_MARGIN") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("KRONHOLM_MARGIN is not an integer: {v:?}")),
        Err(_) => Ok(DEFAULT_MARGIN),
    }
}

fn stage_failure(e: &Error) -> Failure {
    let (index, root) = match e {
        Error::Stage { index, source } => (Some(*index), source.as_ref()),
        other => (None, other),
    };
    let code = if root.is_not_realizable() { EXIT_NOT_REALIZABLE } else { EXIT_INPUT };
    let error = match index {
        Some(i) => anyhow::anyhow!("stage {}: {root}", i + 1),
        None => anyhow::anyhow!("{root}"),
    };
    Failure { code, error }
}

fn compute_cmd(file: &Path, out: Option<&Path>, algebraic: bool, margin: i64) -> CliResult {
    let spec = parse_complex(&read(file)?)?;
    let partial = compute_partial(&spec);
    if let Some(e) = &partial.error {
        let f = stage_failure(e);
        if !(algebraic && f.code == EXIT_NOT_REALIZABLE) {
            return Err(f);
        }
        eprintln!("warning: {}; stopping before this stage", f.error);
    }
    let check = verify_trace(&partial.trace, margin);
    let report = ReportDocument::from_trace(&spec.name, &partial.trace, Some(&check));
    let json = report.to_json();
    match out {
        Some(path) => fs::write(path, json + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(0)
}

fn verify_cmd(file: &Path, margin: i64) -> CliResult {
    let spec = parse_complex(&read(file)?)?;
    let partial = compute_partial(&spec);
    if let Some(e) = &partial.error {
        return Err(stage_failure(e));
    }
    let check = verify_trace(&partial.trace, margin);
    for (s, c) in partial.trace.stages.iter().zip(&check.stages) {
        let status = if c.passed() { "ok" } else { "FAIL" };
        println!(
            "stage {} cell {} {}: {status}",
            c.index + 1,
            s.cell.deg,
            s.result.case
        );
        for (b, d) in &c.discrepancies.values {
            println!("  {b}: engine {} oracle {}", d.engine, d.oracle);
        }
        if c.localization == Some(false) {
            println!("  localization mismatch");
        }
    }
    if check.passed() {
        println!("verified {} stages", check.stages.len());
        Ok(0)
    } else {
        Ok(EXIT_VERIFY)
    }
}

fn render_cmd(file: &Path, format: Format, stage: &str) -> CliResult {
    let text = read(file)?;
    let stage_index = match stage {
        "final" => None,
        s => Some(s.parse::<usize>().with_context(|| format!("bad stage {s:?}"))?),
    };
    let module = if let Ok(report) = ReportDocument::from_json(&text) {
        match stage_index {
            None => module_from_documents(&report.generators)?,
            Some(0) => FreeModule::empty(),
            Some(k) => match report.stages.get(k - 1) {
                Some(s) => module_from_documents(&s.basis)?,
                None => return Err(anyhow::anyhow!("report has {} stages", report.stages.len()).into()),
            },
        }
    } else {
        let spec = parse_complex(&text)?;
        let partial = compute_partial(&spec);
        let stages = &partial.trace.stages;
        match stage_index {
            None => {
                if let Some(e) = &partial.error {
                    return Err(stage_failure(e));
                }
                partial.trace.final_module
            }
            Some(0) => FreeModule::empty(),
            Some(k) if k <= stages.len() => stages[k - 1].result.new_module.clone(),
            Some(_) => match &partial.error {
                Some(e) => return Err(stage_failure(e)),
                None => return Err(anyhow::anyhow!("complex has {} stages", stages.len()).into()),
            },
        }
    };
    let window = default_window(&module);
    match format {
        Format::Ascii => print!("{}", render_ascii(&module, window)),
        Format::Svg => print!("{}", render_svg(&module, window)),
    }
    Ok(0)
}

fn query_cmd(source: &str, p: i64, q: i64) -> CliResult {
    let stream = match families::stream_by_name(source) {
        Some(s) => s,
        None => Box::new(FiniteStream(parse_complex(&read(Path::new(source))?)?)),
    };
    let dim = query_finite_type(stream.as_ref(), p, q).map_err(|e| stage_failure(&e))?;
    println!("{dim}");
    Ok(0)
}

fn validate_cmd(file: &Path) -> CliResult {
    let spec = parse_complex_unchecked(&read(file)?)?;
    let violations = validate(&spec);
    if violations.is_empty() {
        println!("ok: {} cells", spec.cells.len());
        return Ok(0);
    }
    for v in &violations {
        println!("{v}");
    }
    Ok(EXIT_INPUT)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Compute { file, out, algebraic, margin: m } => {
            compute_cmd(&file, out.as_deref(), algebraic, margin(m)?)
        }
        Command::Verify { file, margin: m } => verify_cmd(&file, margin(m)?),
        Command::Render { file, format, stage } => render_cmd(&file, format, &stage),
        Command::Query { source, p, q } => query_cmd(&source, p, q),
        Command::Validate { file } => validate_cmd(&file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
