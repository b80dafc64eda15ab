mod render;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use merozero::{KernelModel, TruncationPolicy};

/// Power sums of the zeros of Cauchy-kernel sums, computed from pole data.
#[derive(Debug, Parser)]
#[command(name = "merozero", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every analysis below in one document.
    Report(Options),
    /// Power sums of the zeros of f (and of f′ for simple kernels).
    Zeros(Options),
    /// Main-formula residuals and the zero-free decision.
    Criterion(Options),
    /// Zeros located by the argument principle, with direct power sums.
    Oracle(Options),
    /// Characteristic samples and order estimates.
    Nevanlinna(Options),
    /// Classification of zero-free sums.
    Classify(Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Kernel spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 8)]
    n_max: u32,
    /// Disk radius for the oracle and top radius for characteristic
    /// samples; defaults to twice the modulus of the 16th pole.
    #[arg(long)]
    radius: Option<f64>,
    /// Target for truncated tails.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<merozero::Error> for Failure {
    fn from(e: merozero::Error) -> Self {
        Failure {
            code: if e.is_numeric() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn policy(tol: f64) -> Result<TruncationPolicy, Failure> {
    let mut policy = TruncationPolicy::default().with_target(tol);
    if let Ok(v) = std::env::var("MEROZERO_MAX_TERMS") {
        policy.max_terms = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("MEROZERO_MAX_TERMS must be a positive integer, got {v:?}")))?;
    }
    policy.validate()?;
    Ok(policy)
}

fn run(command: Command) -> Result<(), Failure> {
    let (kind, opts) = match command {
        Command::Report(o) => (report::Kind::Report, o),
        Command::Zeros(o) => (report::Kind::Zeros, o),
        Command::Criterion(o) => (report::Kind::Criterion, o),
        Command::Oracle(o) => (report::Kind::Oracle, o),
        Command::Nevanlinna(o) => (report::Kind::Nevanlinna, o),
        Command::Classify(o) => (report::Kind::Classify, o),
    };
    if !(opts.tol > 0.0) {
        return Err(usage(format!("--tol must be positive, got {}", opts.tol)));
    }
    if let Some(r) = opts.radius {
        if !(r > 0.0) || !r.is_finite() {
            return Err(usage(format!("--radius must be positive, got {r}")));
        }
    }
    let policy = policy(opts.tol)?;
    let text = fs::read_to_string(&opts.spec)
        .map_err(|e| usage(format!("cannot read {}: {e}", opts.spec.display())))?;
    let model = KernelModel::from_json(&text, &policy)?;
    let radius = opts.radius.unwrap_or_else(|| 2.0 * model.pole_modulus_rank(16));

    let doc = report::build(kind, &model, &policy, opts.n_max, radius)?;
    let failed = match &doc {
        report::Document::Report(r) => r.failures(),
        _ => Vec::new(),
    };
    let rendered = render::render(&doc, opts.format).map_err(|e| Failure {
        code: 1,
        message: format!("cannot render output: {e}"),
    })?;
    let written = match &opts.out {
        Some(path) => fs::write(path, rendered.as_bytes()),
        None => std::io::stdout().lock().write_all(rendered.as_bytes()),
    };
    written.map_err(|e| Failure {
        code: 1,
        message: format!("cannot write output: {e}"),
    })?;
    for (name, message, _) in &failed {
        eprintln!("error: section {name}: {message}");
    }
    match failed.iter().map(|f| f.2).reduce(|a, b| a && b) {
        None => Ok(()),
        Some(all_numeric) => Err(Failure {
            code: if all_numeric { 3 } else { 2 },
            message: format!("{} report section(s) failed", failed.len()),
        }),
    }
}
