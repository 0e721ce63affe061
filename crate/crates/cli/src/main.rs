//! `exacta`: run query files, probe axiom families, and validate inputs.
//!
//! Exit code 0 means a verdict was computed (counterexamples included);
//! nonzero means the input was rejected or an operation failed.

use clap::{Parser, Subcommand, ValueEnum};
use exacta_core::io::{self, axiom_report_to_json};
use exacta_core::probe::{probe, AxiomId, ProbeBound};
use exacta_core::{cmon::CMonCat, fgab::AbCat, fingrp::Grp, setpt::SetPt};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "exacta", version, about = "kernel/cokernel calculus over finite backends")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Setpt,
    Cmon,
    Group,
    Ab,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxiomArg {
    Ann,
    Dpn,
    Hsd,
    Aen,
    Ksg,
    Pne,
}

impl From<AxiomArg> for AxiomId {
    fn from(a: AxiomArg) -> AxiomId {
        match a {
            AxiomArg::Ann => AxiomId::Ann,
            AxiomArg::Dpn => AxiomId::Dpn,
            AxiomArg::Hsd => AxiomId::Hsd,
            AxiomArg::Aen => AxiomId::Aen,
            AxiomArg::Ksg => AxiomId::Ksg,
            AxiomArg::Pne => AxiomId::Pne,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Execute the query of a JSON input file and print the report.
    Run {
        file: PathBuf,
        /// Worker threads for sharded scans.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan an instance family for an axiom counterexample.
    Probe {
        #[arg(long)]
        backend: BackendArg,
        #[arg(long)]
        axiom: AxiomArg,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report wall time on stderr (never part of the report bytes).
        #[arg(long, default_value_t = false)]
        timings: bool,
    },
    /// Parse and validate an input file without executing it.
    Validate { file: PathBuf },
}

fn emit(report: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, report),
        None => std::io::stdout().write_all(report.as_bytes()),
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(f)
}

fn run() -> Result<i32, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, jobs, out } => {
            let input = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let report =
                with_pool(jobs, || io::run_file_str(&input)).map_err(|e| e.to_string())?;
            emit(&report, &out).map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::Probe { backend, axiom, max_size, jobs, out, timings } => {
            let bound = ProbeBound::size(max_size);
            let axiom: AxiomId = axiom.into();
            let start = Instant::now();
            let value = with_pool(jobs, || match backend {
                BackendArg::Setpt => {
                    let cat = SetPt;
                    probe(&cat, axiom, &bound).map(|r| axiom_report_to_json(&cat, &r))
                }
                BackendArg::Cmon => {
                    let cat = CMonCat;
                    probe(&cat, axiom, &bound).map(|r| axiom_report_to_json(&cat, &r))
                }
                BackendArg::Group => {
                    let cat = Grp;
                    probe(&cat, axiom, &bound).map(|r| axiom_report_to_json(&cat, &r))
                }
                BackendArg::Ab => {
                    let cat = AbCat;
                    probe(&cat, axiom, &bound).map(|r| axiom_report_to_json(&cat, &r))
                }
            })
            .map_err(|e| e.to_string())?;
            if timings {
                eprintln!("elapsed: {:?}", start.elapsed());
            }
            let report = format!(
                "{}\n",
                serde_json::to_string_pretty(&value).expect("report serializes")
            );
            emit(&report, &out).map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::Validate { file } => {
            let input = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let value = io::validate_file_str(&input).map_err(|e| e.to_string())?;
            let report = format!(
                "{}\n",
                serde_json::to_string_pretty(&value).expect("report serializes")
            );
            emit(&report, &None).map_err(|e| e.to_string())?;
            Ok(0)
        }
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}
