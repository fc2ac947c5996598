use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hypint::{run, CliError, Command, Options, ProblemFile};

/// Differential systems, Γ-series, contour quadrature and verification for
/// non-Gaussian integrals.
#[derive(Parser, Debug)]
#[command(name = "hypint", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Problem file (JSON).
    problem: PathBuf,
    /// Truncation order of series.
    #[arg(long = "order", value_name = "M")]
    order: Option<u32>,
    /// Quadrature tolerance (eval, series) or residual threshold (verify).
    #[arg(long = "tol", value_name = "T")]
    tol: Option<f64>,
    /// Base as 0-based indices into the exponent set.
    #[arg(long = "base", value_name = "i1,...,in", value_delimiter = ',')]
    base: Option<Vec<usize>>,
    /// Write the JSON report here.
    #[arg(long = "out", value_name = "report.json")]
    out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HYPINT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("HYPINT_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn execute(args: &Args) -> Result<i32, CliError> {
    configure_threads()?;
    let source = args.problem.display().to_string();
    let text = std::fs::read_to_string(&args.problem)
        .map_err(|e| CliError::Input(format!("cannot read {source}: {e}")))?;
    let problem = ProblemFile::parse(&text).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{source}: {m}")),
        other => other,
    })?;
    let options = Options {
        order: args.order,
        tol: args.tol,
        base: args.base.clone(),
    };
    if let Some(t) = options.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Input(format!("--tol must be positive, got {t}")));
        }
    }
    let outcome = run(args.command, &problem, &source, &options)?;
    print!("{}", outcome.text);
    if let Some(out) = &args.out {
        std::fs::write(out, outcome.report.to_json())
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("hypint: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
