//! Batch front-end behind the `choquard` binary: `run`, `check` and `selftest`.

mod config;
mod selftest;

pub use config::RunConfig;
pub use selftest::{selftest, SelftestOptions, SelftestReport, SuiteResult};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;

use crate::energy::Problem;
use crate::kernel::{cache, riesz_green, Convolver};
use crate::lattice::{make_potential, LatticeBox};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{lambda_sweep, SolveReport, SweepOptions, SweepTable, ROUNDOFF};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

/// Column order of `sweep.csv`.
pub const CSV_HEADER: &str =
    "lambda,m_lambda,nehari_residual,grad_norm,tail_mass,dist_to_limit,iterations,restarts_converged";

/// Relative tolerance for the Nehari residual and the energy identity of a converged state.
pub const STATE_IDENTITY_TOL: f64 = 1e-8;

/// Twelve significant digits, `.` decimal point.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Json(_) | Error::Io(_) => EXIT_VALIDATION,
        Error::NotConverged(_) => EXIT_NOT_CONVERGED,
        _ => EXIT_INVARIANT,
    }
}

/// Assemble lattice, potentials, kernel and coupling; uses the kernel cache when configured.
pub fn build_problem(cfg: &RunConfig) -> Result<Problem> {
    let lattice = LatticeBox::build(cfg.dim, cfg.radius)?;
    let a = make_potential(&lattice, &cfg.well_a)?;
    let b = make_potential(&lattice, &cfg.well_b)?;
    a.check_sublevel(cfg.m1)?;
    b.check_sublevel(cfg.m2)?;
    let kernel = match &cfg.cache {
        Some(path) => cache::load_or_build(path, &lattice, cfg.alpha, cfg.backend, &cfg.quadrature)?,
        None => riesz_green(&lattice, cfg.alpha, cfg.backend, &cfg.quadrature)?,
    };
    let conv = Convolver::new(&lattice, kernel, cfg.convolution)?;
    let nl = NonlinearitySpec::new(cfg.nonlinearity)?;
    Problem::new(lattice, a, b, cfg.p, conv, nl)
}

/// Validate a config file; on success the text starts with `OK` and lists the resolved parameters.
pub fn check(path: &Path) -> Result<String> {
    let cfg = RunConfig::load(path)?;
    Ok(format!("OK\n{}\n", serde_json::to_string_pretty(&cfg)?))
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub table: SweepTable,
    pub out_dir: PathBuf,
    /// Invariant checks that failed, one line each.
    pub failures: Vec<String>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if !self.table.checks.all_converged {
            EXIT_NOT_CONVERGED
        } else if !self.failures.is_empty() {
            EXIT_INVARIANT
        } else {
            EXIT_OK
        }
    }
}

pub fn run(opts: &RunOptions) -> Result<RunOutcome> {
    let mut cfg = RunConfig::load(&opts.config)?;
    if let Some(seed) = opts.seed {
        cfg.solver.seed = seed;
    }
    let out = opts.out.clone().unwrap_or_else(|| cfg.output.clone());
    run_config(&cfg, &out, opts.jobs)
}

/// Run the sweep described by `cfg` and write all outputs into `out`.
pub fn run_config(cfg: &RunConfig, out: &Path, jobs: Option<usize>) -> Result<RunOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let problem = build_problem(cfg)?;
    let table = pool.install(|| {
        lambda_sweep(&problem, &cfg.lambdas, &cfg.solver, SweepOptions { warm_start: cfg.warm_start })
    })?;
    let failures = invariant_failures(&table);

    fs::create_dir_all(out)?;
    fs::write(out.join("sweep.csv"), sweep_csv(&table))?;
    for (i, (row, rep)) in table.rows.iter().zip(&table.reports).enumerate() {
        let title = format!("ground state, lambda = {}", fmt_num(row.lambda));
        fs::write(out.join(format!("lambda_{i:02}.txt")), state_report(&problem, &title, rep))?;
    }
    fs::write(out.join("limit_report.txt"), state_report(&problem, "limit problem", &table.limit))?;
    fs::write(out.join("summary.txt"), summary(cfg, &table, &failures)?)?;
    info!("outputs written to {}", out.display());
    Ok(RunOutcome { table, out_dir: out.to_path_buf(), failures })
}

fn state_failures(label: &str, r: &SolveReport, out: &mut Vec<String>) {
    if !r.converged {
        return;
    }
    let res = r.relative_nehari_residual();
    if !(res <= STATE_IDENTITY_TOL) {
        out.push(format!("{label}: relative Nehari residual {res:e} > {STATE_IDENTITY_TOL:e}"));
    }
    let id = r.identity_defect / r.norm_p;
    if !(id <= STATE_IDENTITY_TOL) {
        out.push(format!("{label}: relative energy identity defect {id:e} > {STATE_IDENTITY_TOL:e}"));
    }
    if !(r.m > 0.0) {
        out.push(format!("{label}: ground state energy {} is not positive", r.m));
    }
    let scale = r.m.abs();
    if r.trace.windows(2).any(|w| w[1].energy > w[0].energy + ROUNDOFF * scale) {
        out.push(format!("{label}: energy trace increased"));
    }
}

fn invariant_failures(table: &SweepTable) -> Vec<String> {
    let mut out = Vec::new();
    if !table.checks.monotone {
        out.push("m_lambda is not nondecreasing in lambda".into());
    }
    if !table.checks.bounded_by_limit {
        out.push("m_lambda exceeds m_Omega".into());
    }
    state_failures("limit problem", &table.limit, &mut out);
    for (row, rep) in table.rows.iter().zip(&table.reports) {
        state_failures(&format!("lambda = {}", row.lambda), rep, &mut out);
    }
    out
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            fmt_num(r.lambda),
            fmt_num(r.m_lambda),
            fmt_num(r.nehari_residual),
            fmt_num(r.grad_norm),
            fmt_num(r.tail_mass),
            fmt_num(r.dist_to_limit),
            r.iterations,
            r.restarts_converged
        );
    }
    s
}

fn state_report(problem: &Problem, title: &str, r: &SolveReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {title}");
    let _ = writeln!(s, "m                 {}", fmt_num(r.m));
    let _ = writeln!(s, "norm_p            {}", fmt_num(r.norm_p));
    let _ = writeln!(s, "nehari_residual   {}", fmt_num(r.relative_nehari_residual()));
    let _ = writeln!(s, "grad_norm         {}", fmt_num(r.grad_norm));
    let _ = writeln!(s, "identity_defect   {}", fmt_num(r.identity_defect));
    let _ = writeln!(s, "iterations        {}", r.iterations);
    let _ = writeln!(s, "converged         {}", r.converged);
    let _ = writeln!(s, "best_restart      {}", r.restart_index);
    let _ = writeln!(s, "tail_mass         {}", fmt_num(problem.tail_mass(&r.state)));
    let _ = writeln!(s, "\n# restart energy converged iterations reseeds");
    for (i, o) in r.restarts.iter().enumerate() {
        let _ = writeln!(s, "{i} {} {} {} {}", fmt_num(o.energy), o.converged, o.iterations, o.reseeds);
    }
    let _ = writeln!(s, "\n# x u v");
    for i in 0..problem.sites() {
        let x: Vec<String> = problem.lattice.coords(i).iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "{} {} {}", x.join(" "), fmt_num(r.state.u[i]), fmt_num(r.state.v[i]));
    }
    s
}

fn summary(cfg: &RunConfig, table: &SweepTable, failures: &[String]) -> Result<String> {
    let pf = |b: bool| if b { "PASS" } else { "FAIL" };
    let mut s = String::new();
    let _ = writeln!(s, "m_Omega              {}", fmt_num(table.limit.m));
    let _ = writeln!(s, "limit converged      {}", table.limit.converged);
    let _ = writeln!(s, "all solves converged {}", pf(table.checks.all_converged));
    let _ = writeln!(s, "m_lambda monotone    {}", pf(table.checks.monotone));
    let _ = writeln!(s, "m_lambda <= m_Omega  {}", pf(table.checks.bounded_by_limit));
    let _ = writeln!(s, "invariant checks     {}", pf(failures.is_empty()));
    for f in failures {
        let _ = writeln!(s, "  {f}");
    }
    let _ = writeln!(s, "\n# resolved configuration\n{}", serde_json::to_string_pretty(cfg)?);
    Ok(s)
}
