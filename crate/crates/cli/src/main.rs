//! csflux: benchmark harness for continuum surface flux two-phase heat
//! transfer models.
//!
//! Subcommands: `run` (single row), `sweep` (parameter grids), `reference`
//! (build/cache sharp 1D references), `verify` (model identity checks).
//! Exit codes: 0 success, 1 validation error, 2 solver failure.

use csflux_cli::{config, report, verify};

use clap::{Args, Parser, Subcommand};
use csflux_core::benchmarks::refcache::ReferenceCache;
use csflux_core::benchmarks::{
    reference_key, run_benchmark, sharp_reference, sweep, ReportRow, RunOutput,
};

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "csflux", version, about = "Diffuse-interface CSF heat transfer benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's out_dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (overrides the config's workers).
    #[arg(long)]
    workers: Option<usize>,
    /// Wall-clock budget; remaining sweep rows are skipped once exceeded.
    #[arg(long)]
    budget_minutes: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a single benchmark row and write its report.
    Run(CommonArgs),
    /// Execute a parameter sweep and write the combined report.
    Sweep(CommonArgs),
    /// Build (or reuse) the sharp-interface reference for the configured
    /// benchmark and print its location.
    Reference(CommonArgs),
    /// Run the model identity and scalar oracle checks.
    Verify,
}

enum Failure {
    Validation(String),
    Solver(String),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Validation(_) => ExitCode::from(1),
            Failure::Solver(_) => ExitCode::from(2),
        }
    }
}

fn core_err(e: csflux_core::CsfError) -> Failure {
    if e.is_solver_failure() {
        Failure::Solver(e.to_string())
    } else {
        Failure::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_mode(args),
        Command::Sweep(args) => sweep_mode(args),
        Command::Reference(args) => reference_mode(args),
        Command::Verify => verify_mode(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (kind, msg) = match &failure {
                Failure::Validation(m) => ("validation error", m),
                Failure::Solver(m) => ("solver failure", m),
            };
            eprintln!("csflux: {kind}: {msg}");
            failure.exit_code()
        }
    }
}

struct Session {
    config: config::RunConfig,
    out_dir: PathBuf,
    cache: ReferenceCache,
    workers: usize,
    budget: Option<Duration>,
    started_at: chrono::DateTime<chrono::Utc>,
}

fn open_session(args: &CommonArgs) -> Result<Session, Failure> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::Validation(format!("cannot read {:?}: {e}", args.config)))?;
    let config = config::parse_config(&text).map_err(|e| Failure::Validation(e.to_string()))?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("csflux-out"));
    report::ensure_writable(&out_dir)
        .map_err(|e| Failure::Validation(format!("output directory {out_dir:?}: {e}")))?;
    let cache = ReferenceCache::new(Some(out_dir.join("refs")));
    let workers = args.workers.unwrap_or(config.workers).max(1);
    let budget = args.budget_minutes.map(|m| Duration::from_secs(m * 60));
    Ok(Session {
        config,
        out_dir,
        cache,
        workers,
        budget,
        started_at: chrono::Utc::now(),
    })
}

fn finish(session: &Session, rows: Vec<ReportRow>) -> Result<(), Failure> {
    report::write_csv(&rows, &session.out_dir.join("report.csv"))
        .map_err(|e| Failure::Validation(format!("writing report.csv: {e}")))?;
    report::write_meta(&session.config.document, &rows, session.started_at, &session.out_dir)
        .map_err(|e| Failure::Validation(format!("writing meta.json: {e}")))?;
    let mut failed = 0;
    for row in &rows {
        println!(
            "{} {} {} eps={:.4e} n_i={} -> {}{}",
            row.benchmark,
            row.case,
            row.method,
            row.eps,
            row.n_i,
            row.status,
            row.l2_rel_err
                .map(|e| format!(" (L2 err {e:.4e})"))
                .unwrap_or_default()
        );
        if !row.is_ok() {
            failed += 1;
        }
    }
    println!(
        "report: {} rows -> {}",
        rows.len(),
        session.out_dir.join("report.csv").display()
    );
    if failed > 0 {
        return Err(Failure::Solver(format!("{failed} row(s) did not complete")));
    }
    Ok(())
}

fn run_mode(args: CommonArgs) -> Result<(), Failure> {
    let session = open_session(&args)?;
    let spec = session
        .config
        .single_run_spec()
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let output: RunOutput = run_benchmark(&spec, &session.cache).map_err(core_err)?;
    if session.config.dump_fields && output.solution.is_some() {
        report::write_field_dump(&output, &session.out_dir)
            .map_err(|e| Failure::Validation(format!("writing field dump: {e}")))?;
    }
    finish(&session, vec![output.row])
}

fn sweep_mode(args: CommonArgs) -> Result<(), Failure> {
    let session = open_session(&args)?;
    let spec = session.config.sweep_spec();
    let marker_dir = session.out_dir.join("rows");
    let dump_dir = session.out_dir.clone();
    let dump = session.config.dump_fields;
    let on_output = move |output: &RunOutput| -> csflux_core::Result<()> {
        if dump && output.solution.is_some() {
            report::write_field_dump(output, &dump_dir)?;
        }
        Ok(())
    };
    let rows = sweep(
        &spec,
        &session.cache,
        session.workers,
        Some(&marker_dir),
        session.budget,
        Some(&on_output),
    )
    .map_err(core_err)?;
    finish(&session, rows)
}

fn reference_mode(args: CommonArgs) -> Result<(), Failure> {
    let session = open_session(&args)?;
    let mut printed = false;
    for spec in session.config.sweep_spec().runs() {
        let Some(key) = reference_key(&spec).map_err(core_err)? else {
            continue;
        };
        let profile = sharp_reference(&spec, &session.cache).map_err(core_err)?.expect("keyed");
        if !printed {
            println!(
                "reference {} ({}): h = {:.4e} m, dt = {:.1e} s, {} steps, T_interface = {:.3} K",
                key, profile.policy, profile.h, profile.dt, profile.steps, profile.interface_temperature
            );
            println!(
                "cached at {}",
                session.out_dir.join("refs").join(format!("{key}.json")).display()
            );
            printed = true;
        }
    }
    if !printed {
        println!("benchmark {} needs no sharp 1D reference", session.config.benchmark);
    }
    Ok(())
}

fn verify_mode() -> Result<(), Failure> {
    let checks = verify::run_all();
    let mut failed = 0;
    for check in &checks {
        let tag = if check.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {} — {}", check.name, check.detail);
        if !check.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        Err(Failure::Solver(format!("{failed} verification check(s) failed")))
    } else {
        println!("all {} checks passed", checks.len());
        Ok(())
    }
}
