use std::fs::File;
use std::io::{self, Write};
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use blockdeg::arith::{p_valuation_of_value, primes_in};
use blockdeg::census::{census, omega_sets, principal_core, Group};
use blockdeg::degrees::{degree, is_p_prime_macdonald, p_valuation_of_degree};
use blockdeg::dsl::{Bindings, DegreeExpr};
use blockdeg::report::VerificationReport;
use blockdeg::tables::LieType;
use blockdeg::verify::{self, TableCheck};
use blockdeg::{Error, Partition};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

/// Partition blocks, p'-degrees and unipotent table checks.
#[derive(Parser)]
#[command(name = "blockdeg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// p-core and p-weight of a partition.
    Core {
        #[arg(long)]
        partition: Partition,
        #[arg(long)]
        p: usize,
    },
    /// Degree of the irreducible character of S_n labelled by a partition.
    Degree {
        #[arg(long)]
        partition: Partition,
    },
    /// p-valuation of the degree and Macdonald's criterion.
    Pprime {
        #[arg(long)]
        partition: Partition,
        #[arg(long)]
        p: u64,
    },
    /// p'-degree census of one block of S_n or A_n.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        /// Defaults to the core of the principal block.
        #[arg(long)]
        core: Option<Partition>,
        #[arg(long, default_value = "sn")]
        group: Group,
    },
    /// The H and Omega families of a block.
    Omega {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        core: Option<Partition>,
    },
    /// Generic-degree expressions.
    Cyclo {
        #[command(subcommand)]
        command: CycloCommand,
    },
    /// Exhaustive grid verifiers.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Subcommand)]
enum CycloCommand {
    /// Factor an expression into cyclotomic polynomials.
    Factor {
        #[arg(long)]
        expr: String,
        /// Evaluate at this q.
        #[arg(long)]
        q: Option<u64>,
        /// Report the p-valuation of the value (needs --q).
        #[arg(long)]
        p: Option<u64>,
        /// Variable bindings, `name=value`.
        #[arg(long = "set", value_parser = parse_binding)]
        set: Vec<(String, i64)>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        eps: i8,
    },
}

#[derive(Subcommand, Clone, Copy)]
enum VerifyCommand {
    Macdonald,
    DegreeSum,
    #[command(name = "lemma-3-2")]
    StarGrid,
    #[command(name = "prop-3-5")]
    Extendable,
    #[command(name = "prop-3-6")]
    AltPrincipal,
    OmegaBound,
    Cyclo,
    Tables,
    Coverage,
    D4,
    Exceptions,
    TypeA,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, global = true)]
    max_n: Option<usize>,
    #[arg(long, global = true)]
    min_n: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long, global = true)]
    q_max: Option<u64>,
    #[arg(long, global = true)]
    p_max: Option<u64>,
    #[arg(long, global = true)]
    n_max: Option<u64>,
    #[arg(long, global = true)]
    max_m: Option<u64>,
    #[arg(long, global = true, value_delimiter = ',')]
    types: Option<Vec<LieType>>,
    /// q values for the type A cross-check.
    #[arg(long, global = true, value_delimiter = ',')]
    qs: Option<Vec<u64>>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "BLOCKDEG_JOBS", default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

fn parse_binding(s: &str) -> Result<(String, i64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let value = value.trim().parse().map_err(|e| format!("`{value}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn emit_json(value: &serde_json::Value, out: Option<&PathBuf>) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(sink, "{text}")
}

fn emit_report(report: &VerificationReport, grid: &GridArgs) -> io::Result<()> {
    match grid.format {
        Format::Json => emit_json(&serde_json::to_value(report).map_err(io::Error::other)?, grid.out.as_ref()),
        Format::Csv => {
            let sink: Box<dyn Write> = match &grid.out {
                Some(path) => Box::new(File::create(path)?),
                None => Box::new(io::stdout().lock()),
            };
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["status", "cell", "kind", "detail"])?;
            for (status, list) in [("violation", &report.violations), ("ambiguous", &report.ambiguous)] {
                for v in list {
                    w.write_record([status, &v.cell, &v.kind, &v.detail])?;
                }
            }
            w.flush()
        }
    }
}

fn run_verify(command: VerifyCommand, g: &GridArgs) -> Result<VerificationReport, Failure> {
    let jobs = g.jobs;
    let primes = |default: &[u64]| g.primes.clone().unwrap_or_else(|| default.to_vec());
    let report = match command {
        VerifyCommand::Macdonald => verify::verify_macdonald(g.max_n.unwrap_or(25), &primes(&[2, 3, 5, 7, 11]), jobs)?,
        VerifyCommand::DegreeSum => verify::verify_degree_sum(g.max_n.unwrap_or(25), jobs)?,
        VerifyCommand::StarGrid => verify::verify_star_grid(&primes(&[5, 7, 11]), g.max_n.unwrap_or(45), jobs)?,
        VerifyCommand::Extendable => verify::verify_extendable_grid(g.max_n.unwrap_or(35), &primes(&[5, 7, 11, 13]), jobs)?,
        VerifyCommand::OmegaBound => {
            verify::verify_omega_bound_grid(g.max_n.unwrap_or(35), &primes(&[5, 7, 11, 13]), jobs)?
        }
        VerifyCommand::AltPrincipal => {
            verify::verify_alt_principal_grid(g.min_n.unwrap_or(7), g.max_n.unwrap_or(40), &primes(&primes_in(5, 37)), jobs)?
        }
        VerifyCommand::Cyclo => {
            verify::verify_cyclotomic(g.max_m.unwrap_or(60), g.q_max.unwrap_or(16), g.p_max.unwrap_or(31), jobs)?
        }
        VerifyCommand::Tables | VerifyCommand::Coverage => {
            let types = g.types.clone().unwrap_or_else(|| LieType::ALL.to_vec());
            let bounds: Vec<(LieType, u64)> =
                types.into_iter().map(|t| (t, g.n_max.unwrap_or_else(|| verify::default_n_max(t)))).collect();
            let check = if matches!(command, VerifyCommand::Tables) { TableCheck::Rows } else { TableCheck::Coverage };
            verify::verify_tables(&bounds, g.q_max.unwrap_or(27), g.p_max.unwrap_or(31), check, jobs)?
        }
        VerifyCommand::D4 => verify::verify_d4_grid(g.q_max.unwrap_or(128), g.p_max.unwrap_or(31), jobs)?,
        VerifyCommand::Exceptions => {
            verify::verify_exceptions_grid(g.q_max.unwrap_or(27), g.p_max.unwrap_or(31), jobs)?
        }
        VerifyCommand::TypeA => {
            let qs = g.qs.clone().unwrap_or_else(|| vec![2, 3, 4, 5, 7, 8, 9]);
            verify::verify_type_a_cross_check(g.n_max.unwrap_or(8), &qs, g.p_max.unwrap_or(31), jobs)?
        }
    };
    Ok(report)
}

fn block_core(n: usize, p: u64, core: Option<Partition>) -> Partition {
    core.unwrap_or_else(|| principal_core(n, p))
}

/// Returns whether the run found violations.
fn run(cli: Cli) -> Result<bool, Failure> {
    let value = match cli.command {
        Command::Verify { command, grid } => {
            let report = run_verify(command, &grid)?;
            emit_report(&report, &grid)?;
            if !report.passed() {
                eprintln!(
                    "{}: {} violation(s) in {} checked cell(s)",
                    report.command,
                    report.violations.len(),
                    report.cells_checked
                );
            }
            return Ok(!report.passed());
        }
        Command::Core { partition, p } => {
            if p == 0 {
                return Err(Failure::Usage("p must be positive".into()));
            }
            let core = partition.core(p);
            let weight = (partition.size() - core.size()) / p;
            json!({ "partition": partition.to_string(), "p": p, "core": core.to_string(), "weight": weight })
        }
        Command::Degree { partition } => json!({
            "partition": partition.to_string(),
            "n": partition.size(),
            "degree": degree(&partition).to_string(),
        }),
        Command::Pprime { partition, p } => {
            blockdeg::arith::require_prime(p)?;
            json!({
                "partition": partition.to_string(),
                "p": p,
                "p_valuation": p_valuation_of_degree(&partition, p),
                "p_prime": is_p_prime_macdonald(&partition, p),
            })
        }
        Command::Census { n, p, core, group } => {
            let core = block_core(n, p, core);
            serde_json::to_value(census(n, p, &core, group)?).map_err(io::Error::other)?
        }
        Command::Omega { n, p, core } => {
            let core = block_core(n, p, core);
            serde_json::to_value(omega_sets(n, p, &core)?).map_err(io::Error::other)?
        }
        Command::Cyclo { command: CycloCommand::Factor { expr, q, p, set, eps } } => {
            if eps != 1 && eps != -1 {
                return Err(Failure::Usage(format!("eps must be 1 or -1, got {eps}")));
            }
            let parsed = DegreeExpr::parse(&expr)?;
            let mut bindings = Bindings::new().with_eps(eps);
            for (name, value) in &set {
                bindings.set(name, *value);
            }
            let factors = parsed.factorize(&bindings)?;
            let value = match q {
                Some(q0) => Some(parsed.evaluate(&bindings, &BigRational::from_integer(BigInt::from(q0)))?),
                None => None,
            };
            let p_valuation = match (p, &value) {
                (Some(p), Some(v)) => Some(p_valuation_of_value(v, p)?),
                (Some(_), None) => return Err(Failure::Usage("--p needs --q".into())),
                _ => None,
            };
            json!({
                "expr": parsed.to_string(),
                "factors": factors,
                "value": value.map(|v| v.to_string()),
                "p_valuation": p_valuation,
            })
        }
    };
    emit_json(&value, None)?;
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(false)) => ExitCode::SUCCESS,
        Ok(Ok(true)) => ExitCode::from(1),
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Ok(Err(Failure::Io(e))) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(_) => {
            eprintln!("error: internal consistency failure");
            ExitCode::from(3)
        }
    }
}
