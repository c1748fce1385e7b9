//! `cyclehom`: invariants of direct systems of 4-cycle algebras.
//!
//! Every subcommand prints one JSON report on stdout. Exit status is 0 on
//! success, 2 on bad input and 1 when a verification finds violations.

mod commands;
mod enc;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyclehom_core::limits::compare::DEFAULT_HORIZON;
use cyclehom_core::numeric::{RIGIDITY_TOL, SAMPLER_MARGIN, VALIDATION_TOL};

pub const REPORT_VERSION: &str = "1";

#[derive(Parser, Debug)]
#[command(name = "cyclehom", version, about = "Invariants of direct systems of 4-cycle digraph algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Limit invariants of a system file.
    Invariants {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Homology range of a rigid-type K0 matrix (a, b, c, d).
    Homrange {
        #[arg(allow_negative_numbers = true)]
        a: String,
        #[arg(allow_negative_numbers = true)]
        b: String,
        #[arg(allow_negative_numbers = true)]
        c: String,
        #[arg(allow_negative_numbers = true)]
        d: String,
    },
    /// Compose two signatures, given as eight integers (outer then inner).
    Compose {
        #[arg(num_args = 8, allow_negative_numbers = true, value_name = "R")]
        values: Vec<String>,
    },
    /// Joint scale of one stage of a system.
    Jointscale {
        file: PathBuf,
        #[arg(long)]
        stage: usize,
    },
    /// Classify two systems up to isomorphism of their limits.
    Compare {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Composite homology ranges and the sign test.
    HrCheck {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Outer automorphism group of the limit's homology.
    Outgroup {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// The lattice of digraph algebras between the 4-cycle algebra and its C*-envelope.
    Lattice,
    /// Clique-complex homology of a digraph edge list.
    Homology {
        file: PathBuf,
        /// Highest homology degree reported; defaults to the complex dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Use the digraph as given rather than its reduced form.
        #[arg(long)]
        full: bool,
    },
    /// Randomized and worked-example checks.
    Verify {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = VALIDATION_TOL)]
        validation_tol: f64,
        #[arg(long, default_value_t = RIGIDITY_TOL)]
        rigidity_tol: f64,
        #[arg(long, default_value_t = SAMPLER_MARGIN)]
        margin: f64,
    },
    /// Generate example systems.
    Examples {
        #[arg(value_enum)]
        kind: ExampleKind,
        #[arg(long, default_value_t = 2)]
        count: usize,
        /// Factors for the index-2 chain; defaults to `count` copies of 2.
        #[arg(long, value_delimiter = ',')]
        factors: Option<Vec<u64>>,
        /// Also write the system file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    #[value(name = "6.2")]
    BlockCorner,
    #[value(name = "6.5")]
    Projections,
    Factorization,
    UpperRank,
    RigidRecovery,
    Equirank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleKind {
    Stationary,
    StandardIndex2,
    HrAsymmetric,
}

pub struct Metadata {
    pub horizon: Option<usize>,
    pub tolerances: Option<[f64; 3]>,
    pub seed: Option<u64>,
}

impl Metadata {
    pub fn none() -> Self {
        Metadata { horizon: None, tolerances: None, seed: None }
    }

    fn to_json(&self) -> Value {
        let tolerances = self.tolerances.map(|[v, r, m]| {
            json!({ "validation": enc::real(v), "rigidity": enc::real(r), "sampler_margin": enc::real(m) })
        });
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "report_version": REPORT_VERSION,
            "horizon": self.horizon,
            "tolerances": tolerances,
            "seed": self.seed,
        })
    }
}

pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
    pub metadata: Metadata,
    /// False when a verification found violations.
    pub passed: bool,
}

fn run(cmd: Command) -> Result<(&'static str, Outcome), String> {
    use commands::*;
    Ok(match cmd {
        Command::Invariants { file, horizon } => ("invariants", invariants(&file, horizon)?),
        Command::Homrange { a, b, c, d } => ("homrange", homrange([&a, &b, &c, &d])?),
        Command::Compose { values } => ("compose", compose(&values)?),
        Command::Jointscale { file, stage } => ("jointscale", jointscale(&file, stage)?),
        Command::Compare { file_a, file_b, horizon } => ("compare", compare(&file_a, &file_b, horizon)?),
        Command::HrCheck { file, horizon } => ("hr-check", hr_check(&file, horizon)?),
        Command::Outgroup { file, horizon } => ("outgroup", outgroup(&file, horizon)?),
        Command::Lattice => ("lattice", lattice()),
        Command::Homology { file, dim, full } => ("homology", homology(&file, dim, full)?),
        Command::Verify { lemma, samples, seed, validation_tol, rigidity_tol, margin } => {
            ("verify", verify(lemma, samples, seed, [validation_tol, rigidity_tol, margin])?)
        }
        Command::Examples { kind, count, factors, out } => {
            ("examples", examples(kind, count, factors, out.as_deref())?)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((command, out)) => {
            let report = json!({
                "command": command,
                "inputs": out.inputs,
                "results": out.results,
                "metadata": out.metadata.to_json(),
            });
            let text = serde_json::to_string_pretty(&report).expect("serializable");
            if let Err(e) = writeln!(std::io::stdout().lock(), "{text}") {
                // a closed pipe is the reader's choice, not a failure
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("cyclehom: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("cyclehom: {msg}");
            ExitCode::from(2)
        }
    }
}
