use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{InitialStyle, RestartOutcome, SolveReport, SolverConfig, StepRule, TracePoint};
use crate::energy::{nehari_scale, EnergyBreakdown, PairState, Problem};
use crate::lattice::SiteSet;
use crate::{Error, Result};

/// Which functional is minimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMode {
    /// `J_λ` on the whole box.
    Full { lambda: f64 },
    /// `J_Ω` on fields supported in `Ω_a × Ω_b`.
    Limit,
}

impl SolveMode {
    fn lambda(self) -> f64 {
        match self {
            SolveMode::Full { lambda } => lambda,
            // a = b = 0 on the wells, so any λ gives J_Ω there
            SolveMode::Limit => 0.0,
        }
    }
}

struct Iterate {
    state: PairState,
    energy: EnergyBreakdown,
    grad: PairState,
    grad_norm: f64,
    precond: PairState,
}

struct Workspace<'a> {
    problem: &'a Problem,
    lambda: f64,
    keep_u: SiteSet,
    keep_v: SiteSet,
    precond: PairState,
}

impl<'a> Workspace<'a> {
    fn new(problem: &'a Problem, mode: SolveMode) -> Self {
        let n = problem.sites();
        let (keep_u, keep_v) = match mode {
            SolveMode::Full { .. } => (SiteSet::from_mask(vec![true; n]), SiteSet::from_mask(vec![true; n])),
            SolveMode::Limit => (problem.masks.omega_a.clone(), problem.masks.omega_b.clone()),
        };
        let lambda = mode.lambda();
        let deg = 2.0 * problem.lattice.dim() as f64;
        let precond = PairState {
            u: problem.a.values.iter().map(|h| lambda * h + 1.0 + deg).collect(),
            v: problem.b.values.iter().map(|h| lambda * h + 1.0 + deg).collect(),
        };
        Workspace { problem, lambda, keep_u, keep_v, precond }
    }

    /// Project onto the Nehari manifold and evaluate energy and gradient there.
    fn project(&self, mut w: PairState) -> Result<Iterate> {
        w.restrict(&self.keep_u, &self.keep_v);
        let pr = self.problem;
        let e = pr.energy(self.lambda, &w)?;
        let t0 = nehari_scale(e.norm_p, e.choquard, pr.p, pr.nl.gamma())?;
        let state = w.scaled(t0);
        let (energy, mut grad, mut lin) = pr.evaluate_with_linear(self.lambda, &state)?;
        grad.restrict(&self.keep_u, &self.keep_v);
        lin.restrict(&self.keep_u, &self.keep_v);
        let scale = lin.norm2();
        let grad_norm = if scale > 0.0 { grad.norm2() / scale } else { f64::INFINITY };
        let precond = self.preconditioner(&state);
        Ok(Iterate { state, energy, grad, grad_norm, precond })
    }

    /// Diagonal of the Hessian of `‖·‖_λ^p / p` at `state`, floored at a fraction of its
    /// maximum where the p-Laplacian degenerates. Constant for `p = 2`.
    fn preconditioner(&self, state: &PairState) -> PairState {
        let p = self.problem.p;
        if p == 2.0 {
            return self.precond.clone();
        }
        let lat = &self.problem.lattice;
        let diag = |w: &[f64], h: &[f64]| -> Vec<f64> {
            let mut d: Vec<f64> = (0..w.len())
                .map(|i| {
                    let edges: f64 = lat
                        .neighbors(i)
                        .iter()
                        .map(|y| (y.map_or(0.0, |y| w[y]) - w[i]).abs().powf(p - 2.0))
                        .sum();
                    (p - 1.0) * (edges + (self.lambda * h[i] + 1.0) * w[i].abs().powf(p - 2.0))
                })
                .collect();
            let floor = PRECOND_FLOOR * d.iter().cloned().fold(0.0, f64::max);
            d.iter_mut().for_each(|x| *x = x.max(floor).max(f64::MIN_POSITIVE));
            d
        };
        PairState { u: diag(&state.u, &self.problem.a.values), v: diag(&state.v, &self.problem.b.values) }
    }

    fn direction(&self, it: &Iterate) -> PairState {
        PairState {
            u: it.grad.u.iter().zip(&it.precond.u).map(|(g, p)| -g / p).collect(),
            v: it.grad.v.iter().zip(&it.precond.v).map(|(g, p)| -g / p).collect(),
        }
    }

    fn metric_dot(&self, a: &PairState, b: &PairState, metric: &PairState) -> f64 {
        let u: f64 = a.u.iter().zip(&b.u).zip(&metric.u).map(|((x, y), p)| x * y * p).sum();
        let v: f64 = a.v.iter().zip(&b.v).zip(&metric.v).map(|((x, y), p)| x * y * p).sum();
        u + v
    }
}

/// Relative floor of the state-dependent preconditioner for `p > 2`.
const PRECOND_FLOOR: f64 = 1e-2;

/// Relative energy noise tolerated when the Armijo test can no longer resolve a decrease.
pub const ROUNDOFF: f64 = 8.0 * f64::EPSILON;

struct RunResult {
    iterate: Iterate,
    converged: bool,
    iterations: usize,
    trace: Vec<TracePoint>,
}

fn descend(ws: &Workspace, start: Iterate, cfg: &SolverConfig) -> Result<RunResult> {
    let mut it = start;
    let mut trace = vec![TracePoint {
        energy: it.energy.j,
        nehari_residual: it.energy.nehari_residual,
        grad_norm: it.grad_norm,
        step: 0.0,
    }];
    let mut rel_change = f64::INFINITY;
    let mut step = match cfg.step {
        StepRule::Fixed { step } => step,
        _ => 1.0,
    };
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        if it.grad_norm <= cfg.tol_grad && rel_change <= cfg.tol_energy {
            converged = true;
            break;
        }
        let dir = ws.direction(&it);
        let slope = it.grad.dot(&dir); // < 0
        let mut s = step;
        let accepted = loop {
            let trial = ws.project(it.state.step(s, &dir));
            match (trial, cfg.step) {
                (Ok(t), StepRule::Fixed { .. }) => break Some(t),
                (Ok(t), StepRule::Backtracking { c } | StepRule::BarzilaiBorwein { c })
                    if t.energy.j <= it.energy.j + c * s * slope =>
                {
                    break Some(t)
                }
                // below the rounding level of J the Armijo test is blind; fall back on the gradient
                (Ok(t), _) if t.energy.j <= it.energy.j + ROUNDOFF * it.energy.j.abs() && t.grad_norm < it.grad_norm => {
                    break Some(t)
                }
                (Ok(_), _) | (Err(Error::DegenerateChoquard), _) => {}
                (Err(e), _) => return Err(e),
            }
            s *= 0.5;
            if s < 1e-14 * step.max(1.0) || matches!(cfg.step, StepRule::Fixed { .. }) && s < 1e-300 {
                break None;
            }
        };
        iterations += 1;
        let Some(next) = accepted else {
            // no decrease representable in floating point
            converged = it.grad_norm <= cfg.tol_grad;
            debug!("line search stalled at grad {:e}", it.grad_norm);
            break;
        };
        rel_change = (next.energy.j - it.energy.j).abs() / next.energy.j.abs().max(f64::MIN_POSITIVE);
        step = match cfg.step {
            StepRule::Fixed { step } => step,
            StepRule::Backtracking { .. } => (2.0 * s).min(1e6),
            StepRule::BarzilaiBorwein { .. } => {
                let sw = next.state.step(-1.0, &it.state);
                let sy = next.grad.step(-1.0, &it.grad);
                let curv = sw.dot(&sy);
                if curv > 0.0 {
                    (ws.metric_dot(&sw, &sw, &next.precond) / curv).clamp(1e-6, 1e6)
                } else {
                    (2.0 * s).min(1e6)
                }
            }
        };
        trace.push(TracePoint {
            energy: next.energy.j,
            nehari_residual: next.energy.nehari_residual,
            grad_norm: next.grad_norm,
            step: s,
        });
        it = next;
    }
    if !converged && it.grad_norm <= cfg.tol_grad && rel_change <= cfg.tol_energy {
        converged = true;
    }
    Ok(RunResult { iterate: it, converged, iterations, trace })
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(restart as u64 + 1)
}

/// Starting fields for one restart, before Nehari projection.
pub fn initial_state(problem: &Problem, mode: SolveMode, style: &InitialStyle, rng: &mut impl Rng) -> Result<PairState> {
    let n = problem.sites();
    let mut s = match style {
        InitialStyle::Profile { u, v } => PairState::new(u.clone(), v.clone())?,
        InitialStyle::RandomBump { width, noise } => {
            let lat = &problem.lattice;
            let omega: Vec<Vec<i64>> = problem.masks.omega.indices().map(|i| lat.coords(i)).collect();
            let dim = lat.dim();
            let center: Vec<f64> = (0..dim)
                .map(|k| omega.iter().map(|x| x[k] as f64).sum::<f64>() / omega.len() as f64)
                .collect();
            let extent = omega
                .iter()
                .map(|x| x.iter().zip(&center).map(|(a, c)| (*a as f64 - c).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            let w = width.unwrap_or(extent.max(1.0));
            let bump: Vec<f64> = (0..n)
                .map(|i| {
                    let r2: f64 = lat.coords(i).iter().zip(&center).map(|(a, c)| (*a as f64 - c).powi(2)).sum();
                    (-r2 / (2.0 * w * w)).exp()
                })
                .collect();
            let mut draw = |b: &f64| b + noise * rng.random_range(-1.0..1.0);
            let u = bump.iter().map(&mut draw).collect();
            let v = bump.iter().map(&mut draw).collect();
            PairState { u, v }
        }
    };
    if s.len() != n {
        return Err(Error::Shape { expected: n, got: s.len() });
    }
    if mode == SolveMode::Limit {
        s.restrict(&problem.masks.omega_a, &problem.masks.omega_b);
    }
    Ok(s)
}

fn finish(problem: &Problem, mode: SolveMode, run: RunResult, restart_index: usize, restarts: Vec<RestartOutcome>) -> Result<SolveReport> {
    let e = match mode {
        SolveMode::Full { .. } => run.iterate.energy,
        SolveMode::Limit => problem.limit_energy(&run.iterate.state)?,
    };
    let (p, g) = (problem.p, problem.nl.gamma());
    Ok(SolveReport {
        state: run.iterate.state,
        m: e.j,
        norm_p: e.norm_p,
        nehari_residual: e.nehari_residual,
        grad_norm: run.iterate.grad_norm,
        iterations: run.iterations,
        converged: run.converged,
        restart_index,
        restarts,
        trace: run.trace,
        identity_defect: (e.norm_p - 2.0 * g * p * e.j / (2.0 * g - p)).abs(),
    })
}

fn single_restart(ws: &Workspace, mode: SolveMode, cfg: &SolverConfig, restart: usize) -> Result<(RunResult, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(cfg.seed, restart));
    let mut reseeds = 0;
    let start = loop {
        let w = initial_state(ws.problem, mode, &cfg.initial, &mut rng)?;
        match ws.project(w) {
            Ok(it) => break it,
            Err(Error::DegenerateChoquard) if reseeds < cfg.max_reseeds => reseeds += 1,
            Err(e) => return Err(e),
        }
    };
    Ok((descend(ws, start, cfg)?, reseeds))
}

fn solve(problem: &Problem, mode: SolveMode, cfg: &SolverConfig) -> Result<SolveReport> {
    let errs = cfg.validate();
    if !errs.is_empty() {
        return Err(Error::Config(errs));
    }
    let ws = Workspace::new(problem, mode);
    let runs: Vec<(RunResult, usize)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| single_restart(&ws, mode, cfg, r))
        .collect::<Result<_>>()?;
    let outcomes: Vec<RestartOutcome> = runs
        .iter()
        .map(|(r, reseeds)| RestartOutcome {
            energy: r.iterate.energy.j,
            converged: r.converged,
            iterations: r.iterations,
            reseeds: *reseeds,
        })
        .collect();
    let best = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.converged)
        .min_by(|a, b| a.1.energy.total_cmp(&b.1.energy))
        .map(|(i, _)| i);
    let any_converged = best.is_some();
    let index = best.unwrap_or_else(|| {
        outcomes
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.energy.total_cmp(&b.1.energy))
            .map(|(i, _)| i)
            .unwrap()
    });
    let run = runs.into_iter().nth(index).unwrap().0;
    let report = finish(problem, mode, run, index, outcomes)?;
    if any_converged {
        Ok(report)
    } else {
        Err(Error::NotConverged(Box::new(report)))
    }
}

/// Minimize `J_λ` over the Nehari manifold with multi-start descent.
pub fn solve_ground_state(problem: &Problem, lambda: f64, cfg: &SolverConfig) -> Result<SolveReport> {
    if !(lambda >= 0.0) {
        return Err(Error::Precondition(format!("lambda must be nonnegative, got {lambda}")));
    }
    solve(problem, SolveMode::Full { lambda }, cfg)
}

/// Minimize `J_Ω` over fields supported in the wells.
pub fn solve_limit_problem(problem: &Problem, cfg: &SolverConfig) -> Result<SolveReport> {
    solve(problem, SolveMode::Limit, cfg)
}

/// Single descent run from a given state (warm start).
pub fn solve_from(problem: &Problem, mode: SolveMode, cfg: &SolverConfig, start: &PairState) -> Result<SolveReport> {
    let ws = Workspace::new(problem, mode);
    let it = ws.project(start.clone())?;
    let run = descend(&ws, it, cfg)?;
    let outcome = RestartOutcome { energy: run.iterate.energy.j, converged: run.converged, iterations: run.iterations, reseeds: 0 };
    let converged = run.converged;
    let report = finish(problem, mode, run, 0, vec![outcome])?;
    if converged {
        Ok(report)
    } else {
        Err(Error::NotConverged(Box::new(report)))
    }
}
