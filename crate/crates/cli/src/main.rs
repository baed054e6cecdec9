use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use farkas_cli::commands::{self, CliError, Outcome};
use farkas_cli::problem::{digest, parse_problem, InputError, Problem};
use farkas_cli::report::{envelope, render_json};
use farkas_cli::selftest;
use farkas_core::limits;

/// Exact Farkas-type certificates and diagnostics for polyhedral convex systems.
#[derive(Parser)]
#[command(name = "farkas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed for sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Cap on generators kept by one double description run.
    #[arg(long, global = true, default_value_t = limits::DEFAULT_MAX_GENERATORS)]
    max_generators: usize,

    /// Cap on active-set rounds per exact membership query.
    #[arg(long, global = true, default_value_t = limits::DEFAULT_MAX_SUBSETS)]
    max_subsets: usize,

    /// Machine-readable output.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Human-readable output (the default).
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Args)]
struct ProblemArg {
    /// Problem file (JSON).
    problem: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Is f(x) - <x*, x> >= s a consequence of the system?
    Check(ProblemArg),
    /// Emit a finite certificate, or re-verify one with --verify.
    Certify {
        #[command(flatten)]
        problem: ProblemArg,
        /// Report written by an earlier `certify --json`.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Primal solution or dual certificate of inconsistency.
    Consistency(ProblemArg),
    /// Farkas-Minkowski constraint qualification.
    Fm(ProblemArg),
    /// Does some solution of the system lie in dom f?
    Hidden(ProblemArg),
    /// Run every diagnostic with a narrative.
    Diagnose(ProblemArg),
    /// Is x̄ optimal for min f(x) - <x*, x> over the solutions?
    Optimal(ProblemArg),
    /// KKT multipliers at x̄.
    Kkt(ProblemArg),
    /// Golden values and randomized checks at small scale.
    Selftest {
        /// Golden values file; the bundled copy is used when absent.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| {
        CliError::Input(InputError {
            path: String::new(),
            message: format!("cannot read {}: {e}", path.display()),
        })
    })
}

fn load(arg: &ProblemArg) -> Result<(Problem, Vec<u8>), CliError> {
    let bytes = read(&arg.problem)?;
    let p = parse_problem(&bytes).map_err(|e| InputError {
        path: e.path,
        message: format!("{} (in {})", e.message, arg.problem.display()),
    })?;
    Ok((p, bytes))
}

fn emit(cli: &Cli, name: &str, digest: Option<&str>, out: &Outcome) {
    if cli.json {
        print!("{}", render_json(&envelope(name, digest, cli.seed, out.json.clone())));
    } else {
        for line in &out.text {
            println!("{line}");
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    limits::set_max_generators(cli.max_generators);
    limits::set_max_subsets(cli.max_subsets);
    let (name, arg) = match &cli.command {
        Command::Selftest { golden } => {
            let (bytes, d) = match golden {
                Some(path) => {
                    let b = read(path)?;
                    let d = digest(&b);
                    (b, d)
                }
                None => (selftest::DEFAULT_GOLDEN.as_bytes().to_vec(), digest(selftest::DEFAULT_GOLDEN.as_bytes())),
            };
            let (out, failure) = selftest::run(&bytes, cli.seed)?;
            emit(cli, "selftest", Some(&d), &out);
            return Ok(match failure {
                Some(check) => {
                    eprintln!("selftest failed: {check}");
                    3
                }
                None => 0,
            });
        }
        Command::Check(a) => ("check", a),
        Command::Certify { problem, .. } => ("certify", problem),
        Command::Consistency(a) => ("consistency", a),
        Command::Fm(a) => ("fm", a),
        Command::Hidden(a) => ("hidden", a),
        Command::Diagnose(a) => ("diagnose", a),
        Command::Optimal(a) => ("optimal", a),
        Command::Kkt(a) => ("kkt", a),
    };
    let (p, _) = load(arg)?;
    let out = match &cli.command {
        Command::Check(_) => commands::check(&p, cli.seed)?,
        Command::Certify { verify: Some(r), .. } => commands::verify_certificate(&p, &read(r)?)?,
        Command::Certify { .. } => commands::certify(&p)?,
        Command::Consistency(_) => commands::consistency(&p)?,
        Command::Fm(_) => commands::fm(&p)?,
        Command::Hidden(_) => commands::hidden(&p)?,
        Command::Diagnose(_) => commands::diagnose(&p)?,
        Command::Optimal(_) => commands::optimal(&p)?,
        Command::Kkt(_) => commands::kkt(&p)?,
        Command::Selftest { .. } => unreachable!("handled above"),
    };
    emit(cli, name, Some(&p.digest), &out);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
