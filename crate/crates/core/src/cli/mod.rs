//! The `pmeans` command line.
//!
//! ```text
//! pmeans simulate|ensemble|oracle|gibbs|diagnose|validate-schedule \
//!     --config <path> [--seed N] [--threads N] [--out DIR]
//! ```
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::diagnostics::lstar_scaling_study;
use crate::gibbs::gibbs_build;
use crate::measures::CircleMeasure;
use crate::oracle::{exact_mean_p2_empirical, grid_minimize, OracleResult};
use crate::potential::PotentialGrid;
use crate::schedules::{validate, Schedule, ValidationReport};
use crate::simulator::{run_ensemble, run_trajectory, Algorithm, EnsembleOptions};
use config::{ConfigError, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pmeans", version, about = "Intrinsic p-means on the circle by annealed jump-diffusions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for ensemble and grid work.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one trajectory.
    Simulate(Common),
    /// Simulate an ensemble and compare it with the Gibbs measures.
    Ensemble(Common),
    /// Compute the p-means by grid search (and exactly for p = 2 atoms).
    Oracle(Common),
    /// Tabulate the potential and its Gibbs densities.
    Gibbs {
        #[command(flatten)]
        common: Common,
        /// Inverse temperatures, comma separated.
        #[arg(long, value_delimiter = ',')]
        beta: Vec<f64>,
    },
    /// Run the adjoint scaling study (p = 2).
    Diagnose(Common),
    /// Check the schedule against the convergence conditions.
    ValidateSchedule(Common),
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            EXIT_CONFIG
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            EXIT_RUNTIME
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    measure: CircleMeasure,
    out: PathBuf,
}

fn load(common: &Common) -> Result<Ctx, Failure> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        if let Some(sim) = cfg.sim.as_mut() {
            sim.seed = seed;
        }
    }
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(Failure::Config("--threads must be ≥ 1".into()));
        }
        cfg.threads = t;
    }
    if let Some(out) = &common.out {
        cfg.output = out.clone();
    }
    let measure = CircleMeasure::from_spec(&cfg.measure).map_err(|e| Failure::Config(e.to_string()))?;
    let out = cfg.output.clone();
    Ok(Ctx { cfg, measure, out })
}

fn execute(command: Command) -> Outcome {
    let (common, job): (Common, Box<dyn FnOnce(Ctx) -> Outcome + Send>) = match command {
        Command::Simulate(c) => (c, Box::new(cmd_simulate)),
        Command::Ensemble(c) => (c, Box::new(cmd_ensemble)),
        Command::Oracle(c) => (c, Box::new(cmd_oracle)),
        Command::Gibbs { common, beta } => (common, Box::new(move |ctx| cmd_gibbs(ctx, beta))),
        Command::Diagnose(c) => (c, Box::new(cmd_diagnose)),
        Command::ValidateSchedule(c) => (c, Box::new(cmd_validate_schedule)),
    };
    let ctx = load(&common)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.cfg.threads)
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    pool.install(|| job(ctx))
}

fn write(dir: &Path, name: &str, contents: &str) -> Outcome {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn schedule(ctx: &Ctx) -> Result<Schedule, Failure> {
    ctx.cfg.schedule_spec()?.build().map_err(|e| Failure::Config(e.to_string()))
}

fn schedule_report(ctx: &Ctx, s: &Schedule) -> ValidationReport {
    let grid = PotentialGrid::build(ctx.cfg.p, &ctx.measure, ctx.cfg.grid_n);
    let b_estimate = grid.critical_depth().b;
    let a = ctx.measure.holder().map(|h| h.a).unwrap_or(1.0);
    validate(s, ctx.cfg.p, b_estimate, a)
}

fn print_warnings(report: &ValidationReport) {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn cmd_simulate(ctx: Ctx) -> Outcome {
    let started = Instant::now();
    let sim = ctx.cfg.sim_config()?;
    let s = schedule(&ctx)?;
    if sim.algorithm == Algorithm::X && ctx.measure.is_atomic() {
        eprintln!("warning: algorithm X on an atomic measure; convergence needs a density (use Z)");
    }
    let report = schedule_report(&ctx, &s);
    print_warnings(&report);
    let rec = run_trajectory(&ctx.measure, &s, &sim, 0)?;
    let mut lines = String::new();
    for (t, x) in sim.checkpoints.iter().zip(&rec.checkpoints) {
        lines.push_str(&serde_json::to_string(&json!({"t": t, "theta": x})).expect("serializes"));
        lines.push('\n');
    }
    write(&ctx.out, "trajectory.jsonl", &lines)?;
    let summary = json!({
        "command": "simulate",
        "config": ctx.cfg,
        "seed": sim.seed,
        "final_position": rec.final_position,
        "jump_count": rec.jump_count,
        "warnings": report.warnings,
        "metadata": {"wall_time_s": started.elapsed().as_secs_f64()},
    });
    write(&ctx.out, "summary.json", &to_json(&summary))?;
    println!("final position {} after {} clock events", rec.final_position, rec.jump_count);
    Ok(())
}

fn cmd_ensemble(ctx: Ctx) -> Outcome {
    let started = Instant::now();
    let sim = ctx.cfg.sim_config()?;
    let spec = ctx.cfg.sim_spec()?.clone();
    let s = schedule(&ctx)?;
    let report = schedule_report(&ctx, &s);
    print_warnings(&report);
    let minima = match &spec.minima {
        Some(v) => Some(
            v.iter()
                .map(|a| crate::CirclePoint::new(*a))
                .collect::<crate::Result<Vec<_>>>()
                .map_err(|e| Failure::Config(e.to_string()))?,
        ),
        None => None,
    };
    let opts = EnsembleOptions { bins: spec.bins, delta: spec.delta, grid_n: ctx.cfg.grid_n, minima };
    let e = run_ensemble(&ctx.measure, &s, &sim, spec.n_traj, &opts)?;
    write(&ctx.out, "ensemble.jsonl", &e.to_jsonl())?;
    write(&ctx.out, "histograms.csv", &e.histograms_csv())?;
    let summary = json!({
        "command": "ensemble",
        "config": ctx.cfg,
        "seed": sim.seed,
        "n_traj": e.n_traj,
        "minima": e.minima,
        "jumps": e.jumps,
        "warnings": report.warnings,
        "metadata": {"wall_time_s": started.elapsed().as_secs_f64()},
    });
    write(&ctx.out, "summary.json", &to_json(&summary))?;
    for c in &e.checkpoints {
        println!("t = {:<10} β = {:<10.4} nbhd mass = {:.4}  tv = {:.4}", c.t, c.beta, c.nbhd_mass, c.tv);
    }
    Ok(())
}

fn cmd_oracle(ctx: Ctx) -> Outcome {
    let p = ctx.cfg.p;
    let o = &ctx.cfg.oracle;
    if o.n < 256 {
        return Err(Failure::Config("oracle.n must be ≥ 256".into()));
    }
    let grid = grid_minimize(p, &ctx.measure, o.n, o.tol)?;
    let grid_result = OracleResult { method: "grid", p, degenerate: grid.degenerate, minimizers: grid.minimizers };
    let exact = match ctx.measure.atoms() {
        Some((atoms, weights)) if p == 2.0 => Some(OracleResult {
            method: "exact_p2_empirical",
            p,
            degenerate: false,
            minimizers: exact_mean_p2_empirical(atoms, weights)?,
        }),
        _ => None,
    };
    let doc = json!({"grid": grid_result, "exact": exact});
    write(&ctx.out, "oracle.json", &to_json(&doc))?;
    let shown = exact.as_ref().unwrap_or(&grid_result);
    if shown.degenerate {
        println!("U_{p} is constant: every point is a minimizer");
    }
    for m in &shown.minimizers {
        println!("{} U={}", m.theta, m.value);
    }
    Ok(())
}

fn cmd_gibbs(ctx: Ctx, cli_betas: Vec<f64>) -> Outcome {
    let betas = if cli_betas.is_empty() { ctx.cfg.gibbs.betas.clone() } else { cli_betas };
    if betas.is_empty() {
        return Err(Failure::Config("no inverse temperatures given (--beta or gibbs.betas)".into()));
    }
    if betas.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(Failure::Config("inverse temperatures must be finite and ≥ 0".into()));
    }
    let grid = PotentialGrid::build(ctx.cfg.p, &ctx.measure, ctx.cfg.grid_n);
    write(&ctx.out, "potential.csv", &grid.to_csv())?;
    let mut csv = String::from("beta,theta,density\n");
    for &beta in &betas {
        let g = gibbs_build(&grid, beta);
        for (i, d) in g.density().iter().enumerate() {
            csv.push_str(&format!("{},{},{}\n", beta, g.theta(i).theta(), d));
        }
        println!("β = {beta}: ln Z = {}", g.log_partition());
    }
    write(&ctx.out, "gibbs.csv", &csv)
}

fn cmd_diagnose(ctx: Ctx) -> Outcome {
    if ctx.cfg.p != 2.0 {
        return Err(Failure::Config("diagnose evaluates the p = 2 adjoint only".into()));
    }
    let d = &ctx.cfg.diagnose;
    let table = lstar_scaling_study(&ctx.measure, &d.alphas, &d.betas, d.grid_n, d.n_quad)?;
    write(&ctx.out, "scaling.csv", &table.to_csv())?;
    write(&ctx.out, "diagnose.json", &to_json(&json!({"table": table, "pass": table.pass()})))?;
    for r in &table.rows {
        println!("α = {:<8} β = {:<6} sup|L*1| = {:.6e}", r.alpha, r.beta, r.sup_abs_lstar);
    }
    for s in &table.slopes {
        println!("β = {}: slope in α = {:.4} ({})", s.beta, s.slope, if s.pass { "pass" } else { "fail" });
    }
    Ok(())
}

fn cmd_validate_schedule(ctx: Ctx) -> Outcome {
    let s = schedule(&ctx)?;
    let report = schedule_report(&ctx, &s);
    write(&ctx.out, "validate.json", &to_json(&serde_json::to_value(&report).expect("serializes")))?;
    println!("estimated critical depth b(U_p) = {}", report.b_estimate);
    println!("recommended b ≥ {}", report.recommended_b);
    if let Some(b) = report.b {
        println!("b = {b}: {}", if report.rate_ok == Some(true) { "ok" } else { "too small" });
    }
    if let Some(ok) = report.kappa_ok {
        println!("c ≥ 2k + 1: {}", if ok { "ok" } else { "violated" });
    }
    match report.dominance_time {
        Some(t) => println!("error terms dominated from t* = {t:.6e}"),
        None => println!("error terms not dominated before t = 1e12"),
    }
    print_warnings(&report);
    Ok(())
}
