use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

mod commands;

#[derive(Parser)]
#[command(name = "rbsuper", version, about = "Exact checks of Rota-Baxter operators on graded algebras")]
struct Cli {
    /// Print one JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice (numeric solving, oracle sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grading, skew-symmetry and the identities of the algebra's kind (and of its module, if any).
    Check { algebra: String },
    /// Check every operator of a file against the algebra, by role.
    VerifyRb {
        algebra: String,
        /// Operator file; defaults to the operators stored in the algebra file.
        operators: Option<String>,
    },
    /// Apply a construction and write the derived algebra in the input format.
    Derive {
        construction: String,
        algebra: String,
        /// File holding the operator (R, T, or R with R_V).
        #[arg(long)]
        rb: Option<String>,
        /// Algebra file whose [module] section is used.
        #[arg(long)]
        module: Option<String>,
        /// Operator id to use when the file holds several.
        #[arg(long)]
        family: Option<String>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Solve the weight-zero Rota-Baxter equations for the entries of an even map.
    SolveRb {
        algebra: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        /// Values for structure parameters, `name=value,...`.
        #[arg(long)]
        pin: Option<String>,
        #[arg(long, default_value_t = 500)]
        max_basis: usize,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
    },
    /// The embedded classification tables.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Compare exact verdicts with evaluations at five random points.
    OracleCheck {
        algebra: String,
        operators: Option<String>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print an entry in the algebra file format.
    Show { id: String },
    Verify {
        /// Shell-style glob on entry ids.
        #[arg(long, default_value = "*")]
        filter: String,
        /// Write errata as JSON lines to this path.
        #[arg(long)]
        errata: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Groebner,
    Numeric,
    Both,
}

/// What a command hands back to be printed.
pub struct Outcome {
    pub passed: bool,
    pub witnesses: Vec<Value>,
    pub lines: Vec<String>,
    pub details: Map<String, Value>,
    pub seeded: bool,
}

impl Outcome {
    pub fn new(passed: bool) -> Self {
        Outcome { passed, witnesses: Vec::new(), lines: Vec::new(), details: Map::new(), seeded: false }
    }
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::VerifyRb { .. } => "verify-rb",
        Command::Derive { .. } => "derive",
        Command::SolveRb { .. } => "solve-rb",
        Command::Catalog { .. } => "catalog",
        Command::OracleCheck { .. } => "oracle-check",
    }
}

fn run(cli: &Cli) -> rbsuper::Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Check { algebra } => commands::check(algebra),
        Command::VerifyRb { algebra, operators } => commands::verify_rb(algebra, operators.as_deref()),
        Command::Derive { construction, algebra, rb, module, family, output } => {
            commands::derive(construction, algebra, rb.as_deref(), module.as_deref(), family.as_deref(), output.as_deref())
        }
        Command::SolveRb { algebra, method, restarts, pin, max_basis, max_degree } => {
            let caps = rbsuper::solver::Caps { max_basis: *max_basis, max_degree: *max_degree, ..Default::default() };
            commands::solve_rb(algebra, *method, *restarts, pin.as_deref(), caps, seed)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => commands::catalog_list(),
            CatalogAction::Show { id } => commands::catalog_show(id),
            CatalogAction::Verify { filter, errata } => commands::catalog_verify(filter, errata.as_deref()),
        },
        Command::OracleCheck { algebra, operators } => commands::oracle(algebra, operators.as_deref(), seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = name(&cli.command);
    let start = Instant::now();
    let result = run(&cli);
    let timing = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(out) => {
            let status = if out.passed { "pass" } else { "fail" };
            if cli.json {
                let mut obj = Map::new();
                obj.insert("command".into(), json!(command));
                obj.insert("status".into(), json!(status));
                obj.insert("witnesses".into(), Value::Array(out.witnesses));
                obj.insert("timing".into(), json!(timing));
                if out.seeded {
                    obj.insert("seed".into(), json!(cli.seed));
                }
                for (k, v) in out.details {
                    obj.entry(k).or_insert(v);
                }
                println!("{}", Value::Object(obj));
            } else {
                for l in &out.lines {
                    println!("{}", l);
                }
                eprintln!("{}: {} ({:.1} ms)", command, status, timing);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                let obj = json!({ "command": command, "status": "error", "witnesses": [], "timing": timing, "error": e.to_string() });
                println!("{}", obj);
            } else {
                eprintln!("rbsuper {}: {}", command, e);
            }
            ExitCode::from(2)
        }
    }
}
