use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tnlab::commands::{self, CohomKind, ModuleChoice, Outcome, PairingKind};
use tnlab::instance::{self, InstanceFile, Loaded};
use tnlab::{exit_code, resolve, sha256_hex, Report, EXIT_INVALID, EXIT_OK};
use tnlab_core::global_mult::NormOracle;
use tnlab_core::{Error, Result};

#[derive(Parser)]
#[command(name = "tnlab", version, about = "Exact Tate-Nakayama, local Langlands and multiplicity computations")]
struct Cli {
    /// Bound on finite supports used when realizing cocycles.
    #[arg(long, global = true, default_value_t = 3)]
    support: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct Fixture {
    /// Instance file, or a name in the fixtures directory.
    fixture: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Module {
    X,
    Torus,
    Dual,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tn,
    Kottwitz,
    Langlands,
    Functor,
}

#[derive(Subcommand)]
enum Command {
    /// Group, Tate or hypercohomology of the instance's lattice.
    Cohomology {
        #[command(flatten)]
        fx: Fixture,
        #[arg(long, conflicts_with_all = ["tate", "hyper"])]
        degree: Option<usize>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "hyper")]
        tate: Option<i32>,
        #[arg(long)]
        hyper: bool,
        #[arg(long, value_enum, default_value_t = Module::X)]
        module: Module,
    },
    /// Evaluate a duality pairing.
    Pairing {
        #[command(flatten)]
        fx: Fixture,
        #[arg(long, value_enum, default_value_t = Kind::Tn)]
        kind: Kind,
    },
    /// Stabilizers, the local packet and the correspondence.
    Llc {
        #[command(flatten)]
        fx: Fixture,
        #[arg(long)]
        unramified: bool,
    },
    /// Global pairing and both multiplicity formulas.
    Multiplicity {
        #[command(flatten)]
        fx: Fixture,
    },
    /// Rank-one catalog of disconnected tori.
    Catalog {
        case: String,
        /// Whether -1 is a norm from E.
        #[arg(long)]
        minus_one_norm: Option<bool>,
        /// Whether y is a norm, in the semidirect case.
        #[arg(long)]
        y_norm: Option<bool>,
        /// Whether a is a norm from the fixed field of σ.
        #[arg(long)]
        a_norm: Option<bool>,
    },
    /// Check every structural condition in an instance.
    Validate {
        #[command(flatten)]
        fx: Fixture,
    },
}

fn load(fx: &Fixture) -> Result<(InstanceFile, Loaded, (String, String))> {
    let path = resolve(&fx.fixture);
    let bytes = std::fs::read(&path).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse("fixture is not UTF-8".into()))?;
    let inst = instance::parse(&text)?;
    let loaded = instance::load(&inst)?;
    let name = fx.fixture.display().to_string();
    Ok((inst, loaded, (name, sha256_hex(&bytes))))
}

fn run(cli: &Cli) -> (Option<(String, String)>, Result<Outcome>) {
    let bound = cli.support;
    let with = |fx: &Fixture, f: &dyn Fn(&InstanceFile, &Loaded) -> Result<Outcome>| match load(fx) {
        Ok((inst, l, id)) => (Some(id.clone()), f(&inst, &l)),
        Err(e) => (None, Err(e)),
    };
    match &cli.command {
        Command::Cohomology { fx, degree, tate, hyper, module } => {
            let kind = match (degree, tate, hyper) {
                (_, _, true) => CohomKind::Hyper,
                (_, Some(k), _) => CohomKind::Tate(*k),
                (Some(k), _, _) => CohomKind::Group(*k),
                _ => CohomKind::Group(1),
            };
            let which = match module {
                Module::X => ModuleChoice::X,
                Module::Torus => ModuleChoice::TorusModel,
                Module::Dual => ModuleChoice::Dual,
            };
            with(fx, &|i, l| commands::cohomology_cmd(i, l, kind, which))
        }
        Command::Pairing { fx, kind } => {
            let k = match kind {
                Kind::Tn => PairingKind::Tn,
                Kind::Kottwitz => PairingKind::Kottwitz,
                Kind::Langlands => PairingKind::Langlands,
                Kind::Functor => PairingKind::Functor,
            };
            with(fx, &|i, l| commands::pairing_cmd(i, l, k, bound))
        }
        Command::Llc { fx, unramified } => with(fx, &|i, l| commands::llc_cmd(i, l, *unramified, bound)),
        Command::Multiplicity { fx } => with(fx, &|i, l| commands::multiplicity_cmd(i, l, bound)),
        Command::Validate { fx } => with(fx, &|i, l| commands::validate_cmd(i, l, bound)),
        Command::Catalog { case, minus_one_norm, y_norm, a_norm } => {
            let norms = NormOracle { minus_one: *minus_one_norm, y: *y_norm, a_from_fixed_sigma: *a_norm };
            (None, commands::catalog_cmd(case, &norms))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cohomology { .. } => "cohomology",
        Command::Pairing { .. } => "pairing",
        Command::Llc { .. } => "llc",
        Command::Multiplicity { .. } => "multiplicity",
        Command::Catalog { .. } => "catalog",
        Command::Validate { .. } => "validate",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (fixture, outcome) = run(&cli);
    let (report, code) = match outcome {
        Ok(o) => {
            let code = if o.valid { EXIT_OK } else { EXIT_INVALID };
            let status = if o.valid { "ok" } else { "invalid" };
            (
                Report {
                    command: command_name(&cli.command).into(),
                    fixture,
                    support: cli.support,
                    status,
                    results: o.results,
                    error: None,
                    rows: o.rows,
                },
                code,
            )
        }
        Err(e) => {
            let code = exit_code(&e);
            (
                Report {
                    command: command_name(&cli.command).into(),
                    fixture,
                    support: cli.support,
                    status: "error",
                    results: serde_json::Value::Null,
                    error: Some(e.to_string()),
                    rows: Vec::new(),
                },
                code,
            )
        }
    };
    let json = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, format!("{}\n", json)) {
            eprintln!("cannot write {}: {}", path.display(), e);
            return ExitCode::from(EXIT_INVALID as u8);
        }
    }
    match cli.format {
        Format::Json => println!("{}", json),
        Format::Table => print!("{}", report.table()),
    }
    ExitCode::from(code as u8)
}
