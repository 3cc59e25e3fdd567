mod suites;

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use commvar::cohomtab::{a0_lambda_table, poincare_poly};
use commvar::commodel::{commuting_to_config, config_to_commuting, CommutingTuple, TupleKind};
use commvar::gammaconf::Configuration;
use commvar::isodecomp::{decomposition_type, fixed_subspace_dim, is_complete_type, DecompType};
use commvar::numkit::{Field, Tolerances};
use commvar::rankstrata::{subquotient_chart, trace_split, SubquotientChart, TraceSplit};
use commvar::sample::{gen_random_commuting, random_configuration, random_tuple_of_rank, SplitMix64};
use commvar::symuniverse::UniverseBasis;
use commvar::Error;

use suites::RunConfig;

#[derive(Parser)]
#[command(name = "commvar", version, about = "Commuting-tuple model of connective K-theory at finite truncation")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    #[arg(long, env = "COMMVAR_SEED", default_value_t = 0, global = true)]
    seed: u64,
    #[arg(long, default_value_t = 100, global = true)]
    trials: usize,
    #[arg(long = "tol-struct", global = true)]
    tol_struct: Option<f64>,
    #[arg(long = "tol-cluster", global = true)]
    tol_cluster: Option<f64>,
    /// Number of matrices, or its cap in `verify`.
    #[arg(long, default_value_t = 3, global = true)]
    n: usize,
    /// Matrix size, or its cap in `verify`.
    #[arg(long, default_value_t = 5, global = true)]
    s: usize,
    /// Truncation degree of the universe, or its cap in `verify`.
    #[arg(long = "D", default_value_t = 2, global = true)]
    degree: usize,
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Unitary,
    SkewHermitian,
    RealSymmetric,
}

impl From<KindArg> for TupleKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Unitary => TupleKind::Unitary,
            KindArg::SkewHermitian => TupleKind::SkewHermitian,
            KindArg::RealSymmetric => TupleKind::RealSymmetric,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Random exactly commuting tuple. With --rank, a unitary tuple on the
    /// universe of level n and degree D with that stratum rank.
    Gen {
        #[arg(long, value_enum, default_value_t = KindArg::Unitary)]
        kind: KindArg,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Random canonical configuration on the universe of level n and degree D.
    GenConfig {
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Rank, chart, trace split and decomposition type of a unitary tuple.
    Stratify {
        /// Tuple JSON; stdin when omitted.
        input: Option<PathBuf>,
    },
    /// Decomposition type of any commuting tuple.
    Decompose { input: Option<PathBuf> },
    /// Configuration JSON to its commuting tuple.
    ToTuple { input: Option<PathBuf> },
    /// Unitary tuple JSON (with universe) to its canonical configuration.
    ToConfig { input: Option<PathBuf> },
    /// Mod-p Poincaré polynomial of the flag manifold and its reduced table.
    Poincare {
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
    /// Run a property suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Failure of a command, with its exit code.
enum Failure {
    Input(String),
    Model(Error),
    Suite(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) | Failure::Suite(_) => 2,
            Failure::Model(e) => match e {
                Error::WrongStratum(_)
                | Error::NoConvergence { .. }
                | Error::SingularAtOne { .. }
                | Error::NotRealizable { .. }
                | Error::RankDeficient { .. }
                | Error::TruncationOverflow { .. } => 3,
                _ => 2,
            },
        }
    }

    fn body(&self) -> serde_json::Value {
        match self {
            Failure::Input(m) => json!({ "error": "InvalidInput", "message": m }),
            Failure::Suite(m) => json!({ "error": "UnknownSuite", "message": m }),
            Failure::Model(e) => {
                let debug = format!("{e:?}");
                let kind: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
                json!({ "error": kind, "message": e.to_string() })
            }
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(input: &Option<PathBuf>) -> Result<T, Failure> {
    let text = match input {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed JSON: {e}")))
}

fn read_tuple(input: &Option<PathBuf>, tol: &Tolerances) -> Result<CommutingTuple, Failure> {
    let t: CommutingTuple = read_json(input)?;
    t.validate(tol)?;
    Ok(t)
}

/// Command result: JSON value plus its human-readable rendering.
struct Report {
    json: serde_json::Value,
    text: String,
    passed: bool,
}

impl Report {
    fn plain<T: Serialize>(value: &T) -> Report {
        let json = serde_json::to_value(value).expect("serializable");
        let text = serde_json::to_string_pretty(&json).expect("serializable");
        Report { json, text, passed: true }
    }
}

#[derive(Serialize)]
struct StratifyReport {
    rank: usize,
    chart: SubquotientChart,
    split: Option<TraceSplit>,
    decomposition_type: Option<DecompType>,
}

fn stratify(t: &CommutingTuple, tol: &Tolerances) -> Result<Report, Failure> {
    if t.kind() != TupleKind::Unitary {
        return Err(Failure::Input(format!("stratify needs a unitary tuple, got {:?}", t.kind())));
    }
    let chart = subquotient_chart(t, tol)?;
    let split = chart.split.clone().or_else(|| (chart.s > 0).then(|| trace_split(&chart.x)));
    let decomposition_type = if chart.s > 0 { Some(decomposition_type(&chart.x, tol)?) } else { None };
    let report = StratifyReport {
        rank: chart.s,
        split,
        decomposition_type,
        chart,
    };
    let mut text = format!("rank {}\n", report.rank);
    if let Some(d) = &report.decomposition_type {
        text += &format!("decomposition type {d}\n");
    }
    if let Some(sp) = &report.split {
        text += &format!("tau {:?}\n", sp.tau);
    }
    let mut r = Report::plain(&report);
    r.text = text.trim_end().to_string();
    Ok(r)
}

fn decompose(t: &CommutingTuple, tol: &Tolerances) -> Result<Report, Failure> {
    let field = if t.kind() == TupleKind::RealSymmetric { Field::Real } else { Field::Complex };
    let d = if t.s() == 0 { DecompType::new(vec![]) } else { decomposition_type(t, tol)? };
    let json = json!({
        "decomposition_type": d,
        "blocks": d.blocks(),
        "complete": is_complete_type(&d),
        "field": field,
        "fixed_subspace_dim": fixed_subspace_dim(&d, t.n(), field),
    });
    let text = format!(
        "decomposition type {d}\nblocks {}\ncomplete {}\nfixed subspace dimension {}",
        d.blocks(),
        is_complete_type(&d),
        fixed_subspace_dim(&d, t.n(), field)
    );
    Ok(Report { json, text, passed: true })
}

fn poincare(p: u64) -> Result<Report, Failure> {
    let full = poincare_poly(p)?;
    let reduced = a0_lambda_table(p)?;
    let json = json!({
        "p": p,
        "poincare": full,
        "poincare_text": full.to_string(),
        "a0_lambda": reduced,
        "a0_lambda_text": reduced.to_string(),
    });
    let text = format!("P(t) = {full}\nreduced = {reduced}");
    Ok(Report { json, text, passed: true })
}

fn run_config(g: &GlobalArgs, tol: Tolerances) -> Result<RunConfig, Failure> {
    if g.trials == 0 || g.n == 0 || g.s == 0 || g.degree == 0 {
        return Err(Failure::Input("--trials, --n, --s and --D must be at least 1".into()));
    }
    Ok(RunConfig {
        seed: g.seed,
        trials: g.trials,
        tol,
        n_max: g.n,
        s_max: g.s,
        d_max: g.degree,
    })
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    let mut tol = Tolerances::default();
    if let Some(t) = g.tol_struct {
        tol.structure = t;
    }
    if let Some(t) = g.tol_cluster {
        tol.cluster = t;
    }
    tol.validate()?;
    match &cli.command {
        Command::Gen { kind, rank } => {
            let t = match rank {
                Some(r) => {
                    let u = UniverseBasis::new(g.n, g.degree);
                    if *r > u.dim() {
                        return Err(Failure::Input(format!("rank {r} exceeds universe dimension {}", u.dim())));
                    }
                    random_tuple_of_rank(&mut SplitMix64::new(g.seed), &u, *r)
                }
                None => gen_random_commuting(g.seed, g.n, g.s, (*kind).into()),
            };
            Ok(Report::plain(&t))
        }
        Command::GenConfig { rank } => {
            let u = UniverseBasis::new(g.n, g.degree);
            if *rank > u.dim() {
                return Err(Failure::Input(format!("rank {rank} exceeds universe dimension {}", u.dim())));
            }
            Ok(Report::plain(&random_configuration(&mut SplitMix64::new(g.seed), &u, *rank)))
        }
        Command::Stratify { input } => stratify(&read_tuple(input, &tol)?, &tol),
        Command::Decompose { input } => decompose(&read_tuple(input, &tol)?, &tol),
        Command::ToTuple { input } => {
            let c: Configuration = read_json(input)?;
            Ok(Report::plain(&config_to_commuting(&c.canonicalize(&tol)?)))
        }
        Command::ToConfig { input } => Ok(Report::plain(&commuting_to_config(&read_tuple(input, &tol)?, &tol)?)),
        Command::Poincare { p } => poincare(*p),
        Command::Verify { suite } => {
            let cfg = run_config(g, tol)?;
            let summary = suites::run(suite, &cfg).ok_or_else(|| {
                Failure::Suite(format!("unknown suite {suite:?}; expected one of {:?} or \"all\"", suites::SUITES))
            })?;
            let mut text = String::new();
            for s in std::iter::once(&summary).chain(&summary.suites) {
                text += &format!(
                    "{} {}: {} trials, {} failures, worst residual {:.3e}\n",
                    if s.failures == 0 { "PASS" } else { "FAIL" },
                    s.suite,
                    s.trials,
                    s.failures,
                    s.worst_residual
                );
                for m in &s.messages {
                    text += &format!("  {m}\n");
                }
            }
            let mut r = Report::plain(&summary);
            r.text = text.trim_end().to_string();
            r.passed = summary.failures == 0;
            Ok(r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.global.output;
    match execute(&cli) {
        Ok(report) => {
            match output {
                Output::Json => println!("{}", serde_json::to_string(&report.json).expect("serializable")),
                Output::Text => println!("{}", report.text),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            match output {
                Output::Json => println!("{}", f.body()),
                Output::Text => eprintln!("error: {}", f.body()["message"].as_str().unwrap_or_default()),
            }
            ExitCode::from(f.code())
        }
    }
}
