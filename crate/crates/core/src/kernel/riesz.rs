use serde::{Deserialize, Serialize};

use super::bessel::{heat_tail_coefficients, scaled_bessel_i_seq};
use super::quadrature::composite;
use crate::lattice::LatticeBox;
use crate::{Error, Result};

/// How the kernel table is produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KernelBackend {
    /// Heat-kernel time integral; requires `0 < α < N/2`.
    Integral,
    /// `κ · max(|z|, 1)^{α-N}` with Euclidean `|z|`; `R(0) = zero_value`.
    PowerLaw { kappa: f64, zero_value: f64 },
}

impl KernelBackend {
    pub fn power_law(kappa: f64) -> Self {
        KernelBackend::PowerLaw { kappa, zero_value: kappa }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelBackend::Integral => "integral",
            KernelBackend::PowerLaw { .. } => "power_law",
        }
    }

    /// Admissible range of `α` for this backend in dimension `dim`.
    pub fn check_alpha(&self, dim: usize, alpha: f64) -> Result<()> {
        let n = dim as f64;
        match self {
            KernelBackend::Integral => {
                if !(alpha > 0.0 && alpha < 0.5 * n) {
                    return Err(Error::Kernel(format!(
                        "integral backend requires 0 < alpha < N/2 = {} (the time integral diverges otherwise), got alpha = {alpha}",
                        0.5 * n
                    )));
                }
                if alpha.fract() == 0.0 {
                    return Err(Error::Kernel(format!(
                        "alpha = {alpha} is a pole of Gamma(-alpha)"
                    )));
                }
            }
            KernelBackend::PowerLaw { kappa, zero_value } => {
                if !(alpha > 0.0 && alpha < n) {
                    return Err(Error::Kernel(format!(
                        "power-law backend requires 0 < alpha < N = {dim}, got alpha = {alpha}"
                    )));
                }
                if !(*kappa > 0.0) || !(*zero_value > 0.0) {
                    return Err(Error::Kernel("power-law kappa and R(0) must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Quadrature parameters for the integral backend.
///
/// The time integral is taken in `σ = ln t` over `[ln t_min, ln T]` with composite
/// Gauss–Legendre panels. Below `t_min` the small-time expansion of `k_t` is integrated in
/// closed form; above `T = tail_factor · ((2R)^2 + 1)` the large-time Hankel expansion is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    pub panel_width: f64,
    pub t_min: f64,
    pub tail_factor: f64,
    pub tail_terms: usize,
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_panel: 16,
            panel_width: 0.25,
            t_min: 1e-8,
            tail_factor: 100.0,
            tail_terms: 10,
            tolerance: 1e-9,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 8
            || !(self.panel_width > 0.0)
            || !(self.t_min > 0.0 && self.t_min < 1.0)
            || !(self.tail_factor >= 10.0)
            || self.tail_terms < 2
            || !(self.tolerance > 0.0)
        {
            return Err(Error::Kernel(format!(
                "quadrature needs nodes_per_panel >= 8, panel_width > 0, 0 < t_min < 1, \
                 tail_factor >= 10, tail_terms >= 2, tolerance > 0; got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub nodes: usize,
    pub t_min: f64,
    pub t_tail: f64,
    /// Max relative change over all lags between the rule and a rule with 4 fewer nodes per panel.
    pub error_estimate: f64,
}

/// Table of `R_α(z)` for all lags `|z_i| ≤ 2R` of a box of radius `R`.
#[derive(Debug, Clone)]
pub struct RieszKernel {
    dim: usize,
    reach: usize,
    alpha: f64,
    backend: KernelBackend,
    table: Vec<f64>,
    quadrature: Option<QuadratureReport>,
}

/// `|Γ(-α)| = |Γ(1-α)| / α` for non-integer `α > 0`.
pub fn abs_gamma_neg(alpha: f64) -> f64 {
    statrs::function::gamma::gamma(1.0 - alpha).abs() / alpha
}

pub fn riesz_green(
    lattice: &LatticeBox,
    alpha: f64,
    backend: KernelBackend,
    quadrature: &QuadratureSpec,
) -> Result<RieszKernel> {
    backend.check_alpha(lattice.dim(), alpha)?;
    let reach = 2 * lattice.radius();
    match backend {
        KernelBackend::Integral => RieszKernel::integral(lattice.dim(), reach, alpha, quadrature),
        KernelBackend::PowerLaw { kappa, zero_value } => {
            Ok(RieszKernel::power_law(lattice.dim(), reach, alpha, kappa, zero_value))
        }
    }
}

impl RieszKernel {
    fn power_law(dim: usize, reach: usize, alpha: f64, kappa: f64, zero_value: f64) -> Self {
        let mut k = RieszKernel {
            dim,
            reach,
            alpha,
            backend: KernelBackend::PowerLaw { kappa, zero_value },
            table: Vec::new(),
            quadrature: None,
        };
        let expo = alpha - dim as f64;
        k.table = (0..k.lag_count())
            .map(|i| {
                let z = k.lag_of(i);
                if z.iter().all(|&c| c == 0) {
                    zero_value
                } else {
                    let r = z.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
                    kappa * r.max(1.0).powf(expo)
                }
            })
            .collect();
        k
    }

    fn integral(dim: usize, reach: usize, alpha: f64, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let mut k = RieszKernel {
            dim,
            reach,
            alpha,
            backend: KernelBackend::Integral,
            table: Vec::new(),
            quadrature: None,
        };
        let t_tail = spec.tail_factor * ((reach * reach) as f64 + 1.0);
        let fine = k.integrate(spec, spec.nodes_per_panel, t_tail);
        let coarse = k.integrate(spec, spec.nodes_per_panel - 4, t_tail);

        let quad_err = fine
            .iter()
            .zip(&coarse)
            .map(|(f, c)| (f - c).abs() / f.abs())
            .fold(0.0, f64::max);
        // first neglected Hankel term, relative to the tail integral itself
        let mu = 4.0 * (reach * reach) as f64;
        let hankel_err = dim as f64
            * (mu / (16.0 * t_tail)).powi(spec.tail_terms as i32)
            / (1..=spec.tail_terms).map(|j| j as f64).product::<f64>();
        let error_estimate = quad_err + hankel_err;
        if !(error_estimate <= spec.tolerance) {
            return Err(Error::Quadrature { estimate: error_estimate, tolerance: spec.tolerance });
        }
        let norm = abs_gamma_neg(alpha);
        k.table = fine.into_iter().map(|v| v / norm).collect();
        k.quadrature = Some(QuadratureReport {
            nodes: k.node_count(spec, spec.nodes_per_panel, t_tail),
            t_min: spec.t_min,
            t_tail,
            error_estimate,
        });
        Ok(k)
    }

    fn node_count(&self, spec: &QuadratureSpec, n: usize, t_tail: f64) -> usize {
        composite(spec.t_min.ln(), t_tail.ln(), spec.panel_width, n).len()
    }

    /// Unnormalized `∫_0^∞ k_t(z) t^{α-1} dt` for every lag.
    fn integrate(&self, spec: &QuadratureSpec, n: usize, t_tail: f64) -> Vec<f64> {
        let alpha = self.alpha;
        let dim = self.dim;
        let nd = dim as f64;
        let lags: Vec<Vec<usize>> = (0..self.lag_count())
            .map(|i| self.lag_of(i).iter().map(|c| c.unsigned_abs() as usize).collect())
            .collect();

        let mut acc = vec![0.0; lags.len()];
        for (sigma, w) in composite(spec.t_min.ln(), t_tail.ln(), spec.panel_width, n) {
            let t = sigma.exp();
            let weight = w * (alpha * sigma).exp();
            let k1 = scaled_bessel_i_seq(2.0 * t, self.reach);
            for (a, z) in acc.iter_mut().zip(&lags) {
                *a += weight * z.iter().map(|&m| k1[m]).product::<f64>();
            }
        }

        // (0, t_min]: k_t(z) ≈ Π t^{m_i}/m_i! · (1 - 2N t) for small t
        let t0 = spec.t_min;
        for (a, z) in acc.iter_mut().zip(&lags) {
            let l: usize = z.iter().sum();
            let fact: f64 = z.iter().map(|&m| (1..=m).map(|j| j as f64).product::<f64>()).product();
            let e = alpha + l as f64;
            *a += (t0.powf(e) / e - 2.0 * nd * t0.powf(e + 1.0) / (e + 1.0)) / fact;
        }

        // [T, ∞): product of per-axis Hankel series in 1/t, integrated term by term
        let terms = spec.tail_terms;
        let per_axis: Vec<Vec<f64>> =
            (0..=self.reach).map(|m| heat_tail_coefficients(m, terms)).collect();
        let pref = (4.0 * std::f64::consts::PI).powf(-0.5 * nd);
        for (a, z) in acc.iter_mut().zip(&lags) {
            let mut poly = vec![1.0];
            for &m in z {
                let c = &per_axis[m];
                let mut next = vec![0.0; terms.min(poly.len() + c.len() - 1)];
                for (i, p) in poly.iter().enumerate() {
                    for (j, q) in c.iter().enumerate() {
                        if i + j < next.len() {
                            next[i + j] += p * q;
                        }
                    }
                }
                poly = next;
            }
            let tail: f64 = poly
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let e = 0.5 * nd + k as f64 - alpha;
                    c * t_tail.powf(-e) / e
                })
                .sum();
            *a += pref * tail;
        }
        acc
    }

    /// Rebuild a kernel from a raw table, e.g. loaded from the cache.
    pub fn from_table(
        dim: usize,
        reach: usize,
        alpha: f64,
        backend: KernelBackend,
        table: Vec<f64>,
    ) -> Result<Self> {
        let k = RieszKernel { dim, reach, alpha, backend, table: Vec::new(), quadrature: None };
        if table.len() != k.lag_count() {
            return Err(Error::Shape { expected: k.lag_count(), got: table.len() });
        }
        Ok(RieszKernel { table, ..k })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Largest `|z_i|` covered by the table.
    pub fn reach(&self) -> usize {
        self.reach
    }

    pub fn backend(&self) -> KernelBackend {
        self.backend
    }

    pub fn quadrature(&self) -> Option<&QuadratureReport> {
        self.quadrature.as_ref()
    }

    /// Table in lexicographic lag order, first axis slowest.
    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Mutable table access for fault-injection in tests and the self-test negative control.
    pub fn table_mut(&mut self) -> &mut [f64] {
        &mut self.table
    }

    pub fn lag_count(&self) -> usize {
        (2 * self.reach + 1).pow(self.dim as u32)
    }

    pub fn lag_index(&self, lag: &[i64]) -> Option<usize> {
        let r = self.reach as i64;
        let side = 2 * self.reach + 1;
        let mut idx = 0;
        for &z in lag {
            if z.abs() > r {
                return None;
            }
            idx = idx * side + (z + r) as usize;
        }
        Some(idx)
    }

    pub fn lag_of(&self, mut idx: usize) -> Vec<i64> {
        let side = 2 * self.reach + 1;
        let mut z = vec![0; self.dim];
        for axis in (0..self.dim).rev() {
            z[axis] = (idx % side) as i64 - self.reach as i64;
            idx /= side;
        }
        z
    }

    /// `R_α(z)`; panics if the lag is outside the table.
    pub fn at(&self, lag: &[i64]) -> f64 {
        self.table[self.lag_index(lag).expect("lag outside kernel table")]
    }
}
