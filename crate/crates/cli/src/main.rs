//! Command-line front end: matrix I/O, seeded generators, per-identity
//! verification suites, and machine-readable reports.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 I/O error,
//! 3 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use schatten_opsys::io::MatrixFile;
use schatten_opsys::radius::{nu_p, nu_p_bruteforce, witness_functional, RadiusOptions};
use schatten_opsys::report::{Summary, VerificationReport};
use schatten_opsys::sampling::{generate, MatrixKind};
use schatten_opsys::schatten::{schatten_norm, Exponent};
use schatten_opsys::CMatrix;

mod output;
mod suites;

use suites::{Suite, SuiteConfig};

const EXIT_CHECK_FAILURE: i32 = 1;
const EXIT_IO: i32 = 2;
const EXIT_USAGE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "schatten-opsys",
    version,
    about = "Schatten p-class operator-system checks: norms, dilations, numerical radius"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Schatten p-norm of a matrix file.
    Norm {
        /// Matrix file ({"rows", "cols", "entries": [[re, im], ...]}).
        #[arg(long)]
        input: PathBuf,
        /// Exponent p in [1, inf]; accepts "inf".
        #[arg(long, default_value = "2")]
        p: String,
    },
    /// Run a verification suite over seeded random matrices.
    Verify {
        /// calculus | power | spectral | doubling | theorem | tightness |
        /// duality | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Base seed (default: SCHATTEN_OPSYS_SEED or 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Random matrices per suite.
        #[arg(long, default_value_t = 20)]
        count: u32,
        /// Comma-separated exponent grid.
        #[arg(long, default_value = "1,1.5,2,3,7.3")]
        p: String,
        /// Numerical-rank / eigenvalue-cluster tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Emit JSON lines (default).
        #[arg(long)]
        json: bool,
        /// Emit CSV instead of JSON.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        /// Write reports to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for case evaluation (output order is unaffected).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Record wall-clock times in reports (breaks byte-reproducibility).
        #[arg(long)]
        timings: bool,
    },
    /// Generate a deterministic matrix file.
    Gen {
        /// ginibre | hermitian | psd | rankdef
        #[arg(long)]
        kind: String,
        /// Matrix size (n x n).
        #[arg(long)]
        n: usize,
        /// Seed (default: SCHATTEN_OPSYS_SEED or 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the modified numerical radius of a matrix file.
    Radius {
        #[arg(long)]
        input: PathBuf,
        /// Exponent p in [1, inf]; accepts "inf".
        #[arg(long, default_value = "2")]
        p: String,
        /// closed | witness | bruteforce
        #[arg(long, default_value = "closed")]
        method: String,
        /// Restarts for the bruteforce optimizer.
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        /// Seed for the bruteforce optimizer (default: SCHATTEN_OPSYS_SEED
        /// or 0).
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                err.exit();
            }
            let _ = err.print();
            std::process::exit(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            std::process::exit(failure.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Norm { input, p } => cmd_norm(&input, &p),
        Command::Verify {
            suite,
            seed,
            count,
            p,
            tol,
            json: _,
            csv,
            out,
            jobs,
            timings,
        } => {
            let suite: Suite = suite.parse().map_err(Failure::Usage)?;
            if count == 0 {
                return Err(Failure::Usage("--count must be at least 1".into()));
            }
            if jobs == 0 {
                return Err(Failure::Usage("--jobs must be at least 1".into()));
            }
            let config = SuiteConfig {
                seed: resolve_seed(seed)?,
                count,
                grid: parse_grid(&p)?,
                rank_tol: tol,
                timings,
                jobs,
            };
            let reports = suites::run(suite, &config);
            let summary = Summary::of(&reports);
            write_reports(&reports, &summary, csv, out.as_deref())?;
            eprintln!(
                "{}: {}/{} checks passed",
                suite.name(),
                summary.passed,
                summary.total
            );
            Ok(if summary.failed == 0 {
                0
            } else {
                EXIT_CHECK_FAILURE
            })
        }
        Command::Gen { kind, n, seed, out } => cmd_gen(&kind, n, seed, out.as_deref()),
        Command::Radius {
            input,
            p,
            method,
            restarts,
            seed,
        } => cmd_radius(&input, &p, &method, restarts, seed),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("SCHATTEN_OPSYS_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "SCHATTEN_OPSYS_SEED must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn parse_exponent(text: &str) -> Result<Exponent, Failure> {
    Exponent::parse(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_grid(text: &str) -> Result<Vec<Exponent>, Failure> {
    let grid: Result<Vec<Exponent>, Failure> =
        text.split(',').map(parse_exponent).collect();
    let grid = grid?;
    if grid.is_empty() {
        return Err(Failure::Usage("the exponent grid is empty".into()));
    }
    Ok(grid)
}

fn load_matrix(path: &Path) -> Result<CMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let file = MatrixFile::from_json(&text)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    file.to_matrix()
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn cmd_norm(input: &Path, p_text: &str) -> Result<i32, Failure> {
    let p = parse_exponent(p_text)?;
    let a = load_matrix(input)?;
    println!("{:.12}", schatten_norm(&a, p));
    Ok(0)
}

fn cmd_gen(
    kind: &str,
    n: usize,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let kind: MatrixKind = kind
        .parse()
        .map_err(|e: schatten_opsys::Error| Failure::Usage(e.to_string()))?;
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let seed = resolve_seed(seed)?;
    let matrix = generate(kind, n, seed);
    let text = MatrixFile::from_matrix(&matrix).to_json();
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn cmd_radius(
    input: &Path,
    p_text: &str,
    method: &str,
    restarts: u32,
    seed: Option<u64>,
) -> Result<i32, Failure> {
    let p = parse_exponent(p_text)?;
    let a = load_matrix(input)?;
    match method {
        "closed" => {
            let value = nu_p(&a, p).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{value:.12}");
        }
        "witness" => {
            let witness =
                witness_functional(&a, p).map_err(|e| Failure::Usage(e.to_string()))?;
            let h = schatten_opsys::dilation::off_diagonal(&a)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let pairing = witness
                .apply(&h)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            // the witness pairing certifies nu_p >= 2^(-1/p) |a|_p
            println!("{:.12}", pairing.re / p.doubling_constant());
        }
        "bruteforce" => {
            if restarts == 0 {
                return Err(Failure::Usage("--restarts must be at least 1".into()));
            }
            let opts = RadiusOptions {
                restarts,
                seed: resolve_seed(seed)?,
                ..RadiusOptions::default()
            };
            let (value, witness) =
                nu_p_bruteforce(&a, p, &opts).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{value:.12}");
            let feas = witness.feasibility();
            println!("witness_hermitian_residual {:.3e}", feas.hermitian_residual);
            println!("witness_min_eigenvalue {:.3e}", feas.min_eigenvalue);
            println!("witness_norm_excess {:.3e}", feas.norm_excess);
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown method {other:?} (expected closed, witness, or bruteforce)"
            )))
        }
    }
    Ok(0)
}

fn write_reports(
    reports: &[VerificationReport],
    summary: &Summary,
    csv: bool,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let body = if csv {
        output::to_csv(reports).map_err(Failure::Io)?
    } else {
        output::to_jsonl(reports, summary)
    };
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())
                .map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    Ok(0)
}
