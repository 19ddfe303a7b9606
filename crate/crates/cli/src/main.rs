mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use commands::{Outcome, Timer};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "forest-ara", version, about = "Projective dimension and arithmetical rank of forest edge ideals")]
struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Record wall-clock timings in the report (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct ForestSource {
    /// Edge list file (`label1 label2` per line), `-` for stdin.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Built-in family: `star R`, `line R` or `double-star R S`.
    #[arg(long, num_args = 2..=3, value_names = ["NAME", "ARGS"])]
    pub family: Option<Vec<String>>,
}

#[derive(Args, Clone)]
pub struct OracleArgs {
    /// Primes for the vanishing oracle.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub fields: Vec<u64>,
    /// Largest variable count to enumerate (default depends on the prime).
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Sv,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Given,
    Lex,
}

#[derive(Subcommand)]
enum Command {
    /// Projective dimension with the recursion trace.
    Pd {
        #[command(flatten)]
        source: ForestSource,
    },
    /// Tree-like system of length pd for a stretched forest or a family.
    Ara {
        #[command(flatten)]
        source: ForestSource,
        /// Checks to run on the certificate.
        #[arg(long, value_delimiter = ',', default_value = "sv")]
        verify: Vec<Check>,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Also write the bare system JSON here.
        #[arg(long)]
        tls_out: Option<PathBuf>,
    },
    /// Operations on tree-like systems.
    Tls {
        #[command(subcommand)]
        action: TlsAction,
    },
    /// Schmitt-Vogel partition checks.
    Sv {
        #[command(subcommand)]
        action: SvAction,
    },
    /// Compare the zeros of a system with those of its support over small fields.
    Oracle {
        /// System JSON or an `ara --json` report.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Lyubeznik resolution, Betti numbers and linearity.
    Resolution {
        /// Monomials (`a*b`, `x^2*y`) or monomial ideal JSON.
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        gens: Option<PathBuf>,
        /// Edge ideal of a family: `star R`, `line R` or `double-star R S`.
        #[arg(long, num_args = 2..=3, value_names = ["NAME", "ARGS"])]
        family: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "given")]
        order: Order,
        /// Include the differential matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Print a family member as an edge list with its invariants.
    Family {
        #[arg(num_args = 2..=3, value_names = ["NAME", "ARGS"], required = true)]
        args: Vec<String>,
    },
}

#[derive(Subcommand)]
enum TlsAction {
    /// Validate a system; optionally compare its support with an edge list.
    Verify {
        /// System JSON or an `ara --json` report.
        #[arg(long)]
        input: PathBuf,
        /// Edge list the support must equal.
        #[arg(long)]
        forest: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SvAction {
    /// Check a partition JSON, or the partition derived from a system.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Serialize)]
struct RunReport<'a> {
    format_version: u32,
    command: &'a str,
    input_digest: &'a str,
    results: &'a Value,
    timings: Option<&'a Value>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut timer = Timer::default();
    let (name, result) = match &cli.command {
        Command::Pd { source } => ("pd", commands::pd(source, &mut timer)),
        Command::Ara { source, verify, oracle, tls_out } => {
            ("ara", commands::ara(source, verify, oracle, tls_out.as_deref(), &mut timer))
        }
        Command::Tls { action: TlsAction::Verify { input, forest } } => {
            ("tls verify", commands::tls_verify(input, forest.as_deref(), &mut timer))
        }
        Command::Sv { action: SvAction::Check { input } } => ("sv check", commands::sv_check(input, &mut timer)),
        Command::Oracle { input, oracle } => ("oracle", commands::oracle(input, oracle, &mut timer)),
        Command::Resolution { gens, family, order, matrices } => (
            "resolution",
            commands::resolution(gens.as_deref(), family.as_deref(), *order, *matrices, &mut timer),
        ),
        Command::Family { args } => ("family", commands::family(args, &mut timer)),
    };
    match result {
        Ok(outcome) => {
            let timings = cli.timings.then(|| timer.finish(start));
            emit(&cli, name, &outcome, timings.as_ref());
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let code = commands::exit_code(&err);
            if cli.json {
                let report = serde_json::json!({
                    "format_version": FORMAT_VERSION,
                    "command": name,
                    "error": { "kind": commands::error_kind(&err), "message": format!("{err:#}") },
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            }
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}

/// Write errors on stdout (a closed pipe, say) are ignored.
fn emit(cli: &Cli, name: &str, outcome: &Outcome, timings: Option<&Value>) {
    let mut out = String::new();
    if cli.json {
        let report = RunReport {
            format_version: FORMAT_VERSION,
            command: name,
            input_digest: &outcome.digest,
            results: &outcome.results,
            timings,
        };
        out = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    } else {
        out.push_str(&format!("# forest-ara {name}, format-version {FORMAT_VERSION}\n"));
        out.push_str(&format!("# input sha256 {}\n", outcome.digest));
        out.push_str(&outcome.text);
        if let Some(t) = timings {
            out.push_str(&format!("# timings {t}\n"));
        }
    }
    let _ = std::io::stdout().write_all(out.as_bytes());
}
