//! `arithdisc`: runs verification scenarios and writes JSON reports.
//!
//! Exit status is 0 when every check passes, 1 when some check fails or is
//! undecidable, and 2 on errors (including malformed scenarios).

mod exec;
mod gen;
mod report;
mod scenario;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use report::{exit_code, status, Report};
use scenario::{Kind, Overrides, Scenario};

#[derive(Parser)]
#[command(name = "arithdisc", version, about = "Exact power-series verification scenarios")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Truncation order N.
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Builtin field name or a JSON file describing a field.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Highest embedding precision, in bits, for strict norm bounds.
    #[arg(long, global = true, env = "ARITHDISC_PRECISION_CAP")]
    precision_cap: Option<u32>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Power series root of 1 - k^2 t.
    Hensel {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Cyclic Kummer data over R[1/a].
    Kummer {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Weierstrass division.
    Wdiv {
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Additive splitting over a layout.
    Split {
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Matrix factorization over a layout.
    Factor {
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Root of a normalized polynomial over a power series ring.
    Root {
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Assemble and validate patching data.
    PatchDrill {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Run scenario files, each carrying its own `kind`.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
    },
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides { order: self.order, seed: self.seed, field: self.field.clone(), precision_cap: self.precision_cap }
    }
}

fn single(path: Option<&Path>, kind: Kind, extra: Map<String, Value>, ov: &Overrides) -> Report {
    let loaded = match path {
        Some(p) => Scenario::load(p, Some(kind), ov).map(|mut s| {
            s.params.extend(extra);
            s
        }),
        None => Scenario::from_value(Value::Object(extra), Some(kind), ov),
    };
    match loaded {
        Ok(sc) => exec::execute(&sc),
        Err(e) => exec::schema_report(json!({ "kind": kind.name(), "path": path.map(|p| p.display().to_string()) }), &e),
    }
}

fn run_file(path: &Path, ov: &Overrides) -> Report {
    match Scenario::load(path, None, ov) {
        Ok(sc) => exec::execute(&sc),
        Err(e) => exec::schema_report(json!({ "path": path.display().to_string() }), &e),
    }
}

fn emit(value: &impl serde::Serialize, target: Option<&Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    match target {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn k_param(k: Option<u32>) -> Map<String, Value> {
    k.map(|k| Map::from_iter([("k".to_string(), Value::from(k))])).unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    let ov = cli.global.overrides();
    let target = cli.global.report.as_deref();

    let (code, written) = match &cli.command {
        Command::Run { scenarios } => {
            let reports: Vec<Report> = scenarios.par_iter().map(|p| run_file(p, &ov)).collect();
            let overall = reports.iter().fold(arithdisc::Verdict::Pass, |acc, r| acc.and(r.status));
            let batch = json!({ "status": overall, "reports": reports });
            (exit_code(overall), emit(&batch, target))
        }
        cmd => {
            let report = match cmd {
                Command::Hensel { k, scenario } => single(scenario.as_deref(), Kind::Hensel, k_param(*k), &ov),
                Command::Kummer { k, scenario } => single(scenario.as_deref(), Kind::Kummer, k_param(*k), &ov),
                Command::Wdiv { scenario } => single(scenario.as_deref(), Kind::Wdiv, Map::new(), &ov),
                Command::Split { scenario } => single(scenario.as_deref(), Kind::Split, Map::new(), &ov),
                Command::Factor { scenario } => single(scenario.as_deref(), Kind::Factor, Map::new(), &ov),
                Command::Root { scenario } => single(scenario.as_deref(), Kind::Root, Map::new(), &ov),
                Command::PatchDrill { scenario } => single(Some(scenario), Kind::PatchDrill, Map::new(), &ov),
                Command::Run { .. } => unreachable!(),
            };
            debug_assert_eq!(report.status, status(&report.entries));
            (report.exit_code(), emit(&report, target))
        }
    };
    if let Err(e) = written {
        eprintln!("arithdisc: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
