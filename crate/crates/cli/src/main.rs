//! `mubs`: generate, verify and search for mutually unbiased bases.
//!
//! Exit codes: 0 success, 1 verification or oracle failure and I/O errors,
//! 2 invalid usage or input, 3 search finished without converging.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mubs_core::verifier::{self, Evidence, GammaCase, VerificationReport};
use mubs_core::{
    bounds_table, export_family, import_family, make_field, make_ring, prime_power_family, search,
    Error, MubFamily, SearchConfig, StepSchedule,
};

#[derive(Parser)]
#[command(
    name = "mubs",
    version,
    about = "Mutually unbiased bases: exact constructions, certification and search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family and write it as JSON.
    Generate(GenerateArgs),
    /// Certify a family file.
    Verify(VerifyArgs),
    /// Run an exhaustive exponential-sum oracle.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
    /// Numerically search for a family of unbiased bases.
    Search(SearchArgs),
    /// Print lower and upper bounds on the number of unbiased bases.
    Table {
        #[arg(long, default_value_t = 16)]
        max_d: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Standard,
    WoottersFields,
    Alltop,
    GaloisRing,
    Macneish,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    construction: Construction,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// Dimension of the standard basis.
    #[arg(long)]
    d: Option<usize>,
    /// Prime-power dimensions to tensor, e.g. `2,3`.
    #[arg(long, value_delimiter = ',')]
    factors: Vec<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = verifier::DEFAULT_FLOAT_TOLERANCE)]
    tol: f64,
    /// Also write the full report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleKind {
    /// Every quadratic over F_{p^n} has Weil sum of squared magnitude q.
    Weil {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Classify the Gamma sums of every element of GR(4, n).
    Gamma {
        #[arg(long)]
        n: u32,
    },
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    target: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    #[arg(long, default_value_t = StepSchedule::default().initial)]
    step: f64,
    #[arg(long, default_value_t = StepSchedule::default().decay)]
    decay: f64,
    #[arg(long, default_value_t = StepSchedule::default().minimum)]
    min_step: f64,
    /// Family file whose bases stay fixed during the search.
    #[arg(long)]
    prefix: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn need<T>(v: Option<T>, flag: &str, construction: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for {construction}")))
}

fn build(args: &GenerateArgs) -> Result<MubFamily, Failure> {
    Ok(match args.construction {
        Construction::Standard => {
            let d = need(args.d, "d", "standard")?;
            if d == 0 {
                return Err(Failure::Usage("--d must be positive".into()));
            }
            MubFamily::new(
                d,
                1,
                "standard",
                Default::default(),
                vec![mubs_core::standard_basis(d)],
            )?
        }
        Construction::WoottersFields => {
            let p = need(args.p, "p", "wootters-fields")?;
            mubs_core::wootters_fields(&make_field(p, args.n.unwrap_or(1), None)?)?
        }
        Construction::Alltop => {
            let p = need(args.p, "p", "alltop")?;
            mubs_core::alltop(&make_field(p, args.n.unwrap_or(1), None)?)?
        }
        Construction::GaloisRing => {
            let n = need(args.n, "n", "galois-ring")?;
            mubs_core::galois_ring_mubs(&make_ring(n, None)?)?
        }
        Construction::Macneish => {
            if args.factors.is_empty() {
                return Err(Failure::Usage("--factors is required for macneish".into()));
            }
            let parts = args
                .factors
                .iter()
                .map(|&q| prime_power_family(q))
                .collect::<Result<Vec<_>, _>>()?;
            mubs_core::macneish_tensor(&parts)?
        }
    })
}

fn cmd_generate(args: GenerateArgs) -> Outcome {
    let family = build(&args)?;
    write(&args.out, &export_family(&family))?;
    println!(
        "{}: dimension {}, {} bases, root order {}",
        family.construction(),
        family.dimension(),
        family.len(),
        family.root_order()
    );
    Ok(ExitCode::SUCCESS)
}

fn print_report(r: &VerificationReport) {
    println!(
        "{}: dimension {}, {} bases, {} pairs, {} violations",
        r.status.as_str(),
        r.dimension,
        r.family_size,
        r.verdicts.len(),
        r.violations
    );
    for v in r
        .verdicts
        .iter()
        .filter(|v| v.kind == verifier::VerdictKind::Violation)
    {
        match &v.evidence {
            Some(Evidence::Exact { vector_i, vector_j, inner_product, norm_squared }) => println!(
                "  violation bases ({}, {}) vectors ({vector_i}, {vector_j}): S = {inner_product:?}, |S|^2 = {norm_squared:?}",
                v.i, v.j
            ),
            Some(Evidence::Float { max_deviation }) => {
                println!("  violation bases ({}, {}): max deviation {max_deviation:e}", v.i, v.j)
            }
            _ => println!("  violation bases ({}, {})", v.i, v.j),
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let family = import_family(&read(&args.input)?)?;
    let report = match args.mode {
        Mode::Exact => verifier::verify_exact(&family)?,
        Mode::Float => verifier::verify_float(&family, args.tol)?,
    };
    print_report(&report);
    if let Some(path) = &args.report {
        write(path, &report.to_json())?;
    }
    Ok(if report.status.is_certified() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_oracle(kind: OracleKind) -> Outcome {
    match kind {
        OracleKind::Weil { p, n } => {
            let summary = verifier::weil_sweep(&make_field(p, n, None)?)?;
            if summary.all_equal_q {
                println!(
                    "{} quadratics checked, all |S|^2={}",
                    summary.checked, summary.q
                );
                return Ok(ExitCode::SUCCESS);
            }
            println!("{} quadratics checked, mismatches found", summary.checked);
            for (a2, a1, a0, s) in &summary.failures {
                println!("  a2={a2} a1={a1} a0={a0}: |S|^2 constant term {s}");
            }
            Ok(ExitCode::from(1))
        }
        OracleKind::Gamma { n } => {
            let table = verifier::gamma_oracle(&make_ring(n, None)?)?;
            println!("{:<24} {:>12} {:>10}  case", "r", "Gamma", "|Gamma|^2");
            for row in &table.rows {
                let case = match row.case {
                    GammaCase::Zero => "zero",
                    GammaCase::TwiceTeichmuller => "2T",
                    GammaCase::Unit => "unit",
                };
                let gamma = format!("{}{:+}i", row.gamma[0], row.gamma[1]);
                let flag = if row.matches { "" } else { "  MISMATCH" };
                println!(
                    "{:<24} {gamma:>12} {:>10}  {case}{flag}",
                    row.element, row.norm_squared
                );
            }
            let [z, t, u] = table.case_counts;
            println!(
                "{} rows, cases zero/2T/unit = {z}/{t}/{u}, match={}",
                table.rows.len(),
                table.all_match
            );
            Ok(if table.all_match {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn cmd_search(args: SearchArgs) -> Outcome {
    let prefix = match &args.prefix {
        Some(path) => Some(import_family(&read(path)?)?),
        None => None,
    };
    let config = SearchConfig {
        dimension: args.d,
        target: args.target,
        prefix,
        restarts: args.restarts,
        max_iterations: args.max_iter,
        schedule: StepSchedule {
            initial: args.step,
            decay: args.decay,
            minimum: args.min_step,
        },
        seed: args.seed,
    };
    let result = search(&config)?;
    write(&args.out, &result.to_json())?;
    println!(
        "d={} target={} seed={}: objective {:e}, converged={}, restart {}, {} iterations",
        args.d,
        args.target,
        args.seed,
        result.objective,
        result.converged,
        result.best_restart,
        result.iterations
    );
    Ok(if result.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_table(max_d: u64) -> Outcome {
    println!("{:>6} {:>6} {:>6}  factors", "d", "lower", "upper");
    for row in bounds_table(max_d)? {
        let factors: Vec<String> = row.factors.iter().map(u64::to_string).collect();
        let mark = if row.is_extremal() { "  extremal" } else { "" };
        println!(
            "{:>6} {:>6} {:>6}  {}{mark}",
            row.dimension,
            row.lower,
            row.upper,
            factors.join("*")
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle { kind } => cmd_oracle(kind),
        Command::Search(a) => cmd_search(a),
        Command::Table { max_d } => cmd_table(max_d),
    };
    outcome.unwrap_or_else(|failure| {
        eprintln!("error: {failure}");
        match failure {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Io(_) => ExitCode::from(1),
        }
    })
}
