//! Ground states by descent on the Nehari manifold.
//!
//! Each iteration takes a (preconditioned) gradient step on `J_λ` from a Nehari point and
//! rescales the trial point back onto the manifold. Along the manifold the reduced energy
//! `w ↦ J_λ(t₀(w) w)` has the same gradient as `J_λ`, so Armijo backtracking on the
//! projected trial points gives a monotone energy trace.

mod descent;
mod sweep;

pub use descent::{ROUNDOFF, initial_state, solve_from, solve_ground_state, solve_limit_problem, SolveMode};
pub use sweep::{aligned_distance, lambda_sweep, SweepChecks, SweepOptions, SweepRow, SweepTable, SWEEP_CHECK_TOL};

use serde::{Deserialize, Serialize};

use crate::energy::PairState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StepRule {
    Fixed { step: f64 },
    /// Armijo backtracking with sufficient-decrease constant `c`.
    Backtracking { c: f64 },
    /// Barzilai–Borwein trial steps, safeguarded by Armijo backtracking.
    BarzilaiBorwein { c: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialStyle {
    /// Gaussian bump of amplitude 1 centered in `Ω`, plus seeded uniform noise.
    RandomBump { width: Option<f64>, noise: f64 },
    /// Fixed fields (perturbed by nothing); must match the box size.
    Profile { u: Vec<f64>, v: Vec<f64> },
}

impl Default for InitialStyle {
    fn default() -> Self {
        InitialStyle::RandomBump { width: None, noise: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub step: StepRule,
    /// Relative gradient tolerance, `‖J'‖ / ‖linear part‖`.
    pub tol_grad: f64,
    /// Relative energy change between accepted iterates.
    pub tol_energy: f64,
    pub restarts: usize,
    pub seed: u64,
    pub initial: InitialStyle,
    /// Re-randomizations allowed per restart when the Choquard term vanishes.
    pub max_reseeds: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 20_000,
            step: StepRule::BarzilaiBorwein { c: 1e-4 },
            tol_grad: 1e-9,
            tol_energy: 1e-13,
            restarts: 8,
            seed: 1,
            initial: InitialStyle::default(),
            max_reseeds: 10,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.tol_grad > 0.0) {
            errs.push("solver.tol_grad must be positive".to_string());
        }
        if !(self.tol_energy > 0.0) {
            errs.push("solver.tol_energy must be positive".to_string());
        }
        if self.restarts == 0 {
            errs.push("solver.restarts must be at least 1".to_string());
        }
        if self.max_iters == 0 {
            errs.push("solver.max_iters must be at least 1".to_string());
        }
        match self.step {
            StepRule::Fixed { step } if !(step > 0.0) => errs.push("solver.step.step must be positive".into()),
            StepRule::Backtracking { c } | StepRule::BarzilaiBorwein { c } if !(c > 0.0 && c < 1.0) => {
                errs.push("solver.step.c must lie in (0, 1)".into())
            }
            _ => {}
        }
        errs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub energy: f64,
    pub nehari_residual: f64,
    pub grad_norm: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub energy: f64,
    pub converged: bool,
    pub iterations: usize,
    pub reseeds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub state: PairState,
    /// Attained energy `m`.
    pub m: f64,
    /// `‖state‖_λ^p`
    pub norm_p: f64,
    pub nehari_residual: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restart_index: usize,
    pub restarts: Vec<RestartOutcome>,
    pub trace: Vec<TracePoint>,
    /// `|‖state‖_λ^p - 2γp m / (2γ - p)|`
    pub identity_defect: f64,
}

impl SolveReport {
    pub fn restarts_converged(&self) -> usize {
        self.restarts.iter().filter(|r| r.converged).count()
    }

    pub fn relative_nehari_residual(&self) -> f64 {
        self.nehari_residual.abs() / self.norm_p
    }
}
