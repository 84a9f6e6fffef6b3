use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use galsym_cli::commands::{self, parse_modules, ApproximateArgs, DEFAULT_PRECISION, DEFAULT_SEED};
use galsym_cli::{exit_code, verify_report, CliError, Outcome, RunReport, Scope};
use galsym_core::elliptic::{parse_curves, WeierstrassCurve, BUNDLED_CORPUS};

const ALL_MODULES: &str = "trivial,V,sym2,ad,VxV";

#[derive(Parser)]
#[command(name = "galsym", version, about = "Batch verifier for cohomology of GL2(F_p) subgroups, elliptic prime scans and p-adic approximation certificates")]
struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H^1 and its locally trivial part over a family of subgroups.
    ShaScan {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value = ALL_MODULES)]
        modules: String,
        /// all (p = 3 only), families, or random:K
        #[arg(long, default_value = "families")]
        scope: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Injectivity of restriction from SL2(F_p) to its Borel subgroup.
    SerreCheck {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value = ALL_MODULES)]
        modules: String,
    },
    /// Borel / SL2 dichotomy for the group generated by the given matrices.
    Classify {
        #[arg(long)]
        p: u32,
        /// A generator "a,b,c,d" (row-major); repeat for more.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
    },
    /// H^0, H^1, Sha^1 (and H^2 for small groups) of one group.
    Cohomology {
        #[arg(long)]
        p: u32,
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long, default_value = ALL_MODULES)]
        modules: String,
    },
    /// Per-prime elimination verdicts for each curve.
    PrimeScan {
        /// CSV "label,a1,a2,a3,a4,a6"; defaults to the bundled corpus.
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        bound: u64,
        /// Degree of the Galois closure over Q.
        #[arg(long, default_value_t = 1)]
        degree: u64,
    },
    /// Certify a point congruent to a p-adic point modulo pE(Q_p).
    Approximate {
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long)]
        label: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        depth_max: u32,
        /// Also certify a second, independently seeded point.
        #[arg(long)]
        pair: bool,
        /// A rational point "x,y" (fractions allowed as "n/d") instead of a random one.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Re-run every record of a report from its JSON alone.
    Verify {
        /// Report to check.
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_curves(path: &Option<PathBuf>) -> Result<Vec<WeierstrassCurve>, CliError> {
    let text = match path {
        Some(p) => read(p)?,
        None => BUNDLED_CORPUS.to_string(),
    };
    Ok(parse_curves(&text)?)
}

fn rational_pair(s: &str) -> Result<(String, String), CliError> {
    let (x, y) = s.split_once(',').ok_or_else(|| CliError::Usage(format!("expected \"x,y\", got {s:?}")))?;
    let norm = |t: &str| if t.contains('/') { t.trim().to_string() } else { format!("{}/1", t.trim()) };
    Ok((norm(x), norm(y)))
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::ShaScan { p, modules, scope, seed } => {
            commands::sha_scan(p, &parse_modules(&modules)?, scope.parse::<Scope>()?, seed)
        }
        Command::SerreCheck { p, modules } => commands::serre_check(p, &parse_modules(&modules)?),
        Command::Classify { p, gens } => commands::classify(p, &gens),
        Command::Cohomology { p, gens, modules } => commands::cohomology(p, &gens, &parse_modules(&modules)?),
        Command::PrimeScan { curves, bound, degree } => commands::prime_scan(&load_curves(&curves)?, bound, degree),
        Command::Approximate { curves, label, p, seed, depth_max, pair, point, precision } => {
            let args = ApproximateArgs {
                label,
                p,
                seed,
                depth_max,
                pair,
                point: point.as_deref().map(rational_pair).transpose()?,
                precision,
            };
            commands::approximate(&load_curves(&curves)?, &args)
        }
        Command::Verify { input } => {
            let report: RunReport = serde_json::from_str(&read(&input)?)?;
            verify_report(&report)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(cli.command);
    let code = exit_code(&result);
    match &result {
        Ok(outcome) => {
            let json = outcome.report.to_json();
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, json) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{json}"),
            }
            if !outcome.passed {
                eprintln!("check failed: see report summary");
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code)
}
