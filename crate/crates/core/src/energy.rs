//! Energies, gradients and the Nehari projection for the coupled system.
//!
//! With `‖u‖_{λ,h}^p = ∫ |∇u|^p + (λh + 1)|u|^p` and `D = ∫ (R_α * F(u,v)) F(u,v)`,
//!
//! ```text
//! J_λ(u, v) = (1/p) (‖u‖_{λ,a}^p + ‖v‖_{λ,b}^p) - D / (2γ)
//! ⟨J_λ'(u, v), (u, v)⟩ = ‖(u, v)‖_λ^p - D
//! ```
//!
//! All lattice sums run over the box with fields extended by zero outside it.

use crate::kernel::Convolver;
use crate::lattice::{DomainMask, LatticeBox, PotentialField, SiteSet};
use crate::nonlinearity::{sgnpow, NonlinearitySpec};
use crate::{Error, Result};

/// The unknown pair `(u, v)` of fields on the box.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl PairState {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Shape { expected: u.len(), got: v.len() });
        }
        if u.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::Precondition("state has non-finite entries".into()));
        }
        Ok(PairState { u, v })
    }

    pub fn zeros(n: usize) -> Self {
        PairState { u: vec![0.0; n], v: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().chain(&self.v).all(|&x| x == 0.0)
    }

    pub fn scaled(&self, t: f64) -> PairState {
        PairState {
            u: self.u.iter().map(|x| t * x).collect(),
            v: self.v.iter().map(|x| t * x).collect(),
        }
    }

    /// `self + s · dir`
    pub fn step(&self, s: f64, dir: &PairState) -> PairState {
        PairState {
            u: self.u.iter().zip(&dir.u).map(|(a, b)| a + s * b).collect(),
            v: self.v.iter().zip(&dir.v).map(|(a, b)| a + s * b).collect(),
        }
    }

    pub fn dot(&self, other: &PairState) -> f64 {
        let a: f64 = self.u.iter().zip(&other.u).map(|(a, b)| a * b).sum();
        let b: f64 = self.v.iter().zip(&other.v).map(|(a, b)| a * b).sum();
        a + b
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Zero `u` outside `keep_u` and `v` outside `keep_v`.
    pub fn restrict(&mut self, keep_u: &SiteSet, keep_v: &SiteSet) {
        for (i, x) in self.u.iter_mut().enumerate() {
            if !keep_u.contains(i) {
                *x = 0.0;
            }
        }
        for (i, x) in self.v.iter_mut().enumerate() {
            if !keep_v.contains(i) {
                *x = 0.0;
            }
        }
    }
}

#[inline]
fn abspow(s: f64, p: f64) -> f64 {
    if p == 2.0 { s * s } else { s.abs().powf(p) }
}

/// `Δ_p u(x) = Σ_{y~x} |u(y) - u(x)|^{p-2} (u(y) - u(x))`.
pub fn p_laplacian(lattice: &LatticeBox, u: &[f64], p: f64) -> Vec<f64> {
    (0..lattice.site_count())
        .map(|x| {
            lattice
                .neighbors(x)
                .iter()
                .map(|y| sgnpow(y.map_or(0.0, |y| u[y]) - u[x], p - 1.0))
                .sum()
        })
        .collect()
}

/// Pointwise `|∇u(x)|_p^p = (1/2) Σ_{y~x} |u(y) - u(x)|^p`.
fn local_grad_p(lattice: &LatticeBox, u: &[f64], p: f64, x: usize) -> f64 {
    0.5 * lattice
        .neighbors(x)
        .iter()
        .map(|y| abspow(y.map_or(0.0, |y| u[y]) - u[x], p))
        .sum::<f64>()
}

/// `∫_{Z^N} |∇u|_p^p dμ`, each edge counted once. Edges leaving the box see the zero
/// extension.
pub fn grad_pnorm(lattice: &LatticeBox, u: &[f64], p: f64) -> f64 {
    (0..lattice.site_count())
        .map(|x| {
            lattice
                .neighbors(x)
                .iter()
                .map(|y| match y {
                    Some(y) => 0.5 * abspow(u[*y] - u[x], p),
                    None => abspow(u[x], p),
                })
                .sum::<f64>()
        })
        .sum()
}

/// `‖u‖_{W^{1,p}}^p = ∫ |∇u|^p + |u|^p`.
pub fn w1p_norm_p(lattice: &LatticeBox, u: &[f64], p: f64) -> f64 {
    grad_pnorm(lattice, u, p) + u.iter().map(|x| abspow(*x, p)).sum::<f64>()
}

/// `|∫ |∇u|^{p-2} ∇u ∇φ + ∫ (Δ_p u) φ|` for `φ` supported at depth ≥ 1 inside the box.
pub fn ibp_check(lattice: &LatticeBox, u: &[f64], phi: &[f64], p: f64) -> Result<f64> {
    lattice.check_len(u.len())?;
    lattice.check_len(phi.len())?;
    if let Some(x) = (0..lattice.site_count()).find(|&x| phi[x] != 0.0 && lattice.depth(x) == 0) {
        return Err(Error::Precondition(format!(
            "test function is nonzero on the box face at {:?}",
            lattice.coords(x)
        )));
    }
    let lhs: f64 = (0..lattice.site_count())
        .map(|x| {
            0.5 * lattice
                .neighbors(x)
                .iter()
                .map(|y| {
                    let (uy, py) = y.map_or((0.0, 0.0), |y| (u[y], phi[y]));
                    sgnpow(uy - u[x], p - 1.0) * (py - phi[x])
                })
                .sum::<f64>()
        })
        .sum();
    let rhs: f64 = -p_laplacian(lattice, u, p).iter().zip(phi).map(|(a, b)| a * b).sum::<f64>();
    Ok((lhs - rhs).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    /// `(1/p) ∫ |∇u|^p`
    pub grad_energy_u: f64,
    pub grad_energy_v: f64,
    /// `(1/p) ∫ (λa + 1)|u|^p`
    pub potential_energy_u: f64,
    pub potential_energy_v: f64,
    /// `D = ∫ (R_α * F) F`
    pub choquard: f64,
    /// `‖(u, v)‖_λ^p`
    pub norm_p: f64,
    pub j: f64,
    /// `‖(u, v)‖_λ^p - D`
    pub nehari_residual: f64,
}

/// Everything but `λ`: geometry, potentials, exponent, kernel and coupling.
#[derive(Debug)]
pub struct Problem {
    pub lattice: LatticeBox,
    pub a: PotentialField,
    pub b: PotentialField,
    pub masks: DomainMask,
    pub p: f64,
    pub conv: Convolver,
    pub nl: NonlinearitySpec,
}

impl Problem {
    pub fn new(
        lattice: LatticeBox,
        a: PotentialField,
        b: PotentialField,
        p: f64,
        conv: Convolver,
        nl: NonlinearitySpec,
    ) -> Result<Self> {
        if !(p >= 2.0) || !p.is_finite() {
            return Err(Error::Precondition(format!("p must be >= 2, got {p}")));
        }
        lattice.check_len(a.values.len())?;
        lattice.check_len(b.values.len())?;
        nl.check_degree(lattice.dim(), conv.kernel().alpha(), p)?;
        let masks = DomainMask::new(&lattice, &a, &b)?;
        Ok(Problem { lattice, a, b, masks, p, conv, nl })
    }

    pub fn sites(&self) -> usize {
        self.lattice.site_count()
    }

    fn check(&self, state: &PairState) -> Result<()> {
        self.lattice.check_len(state.u.len())?;
        self.lattice.check_len(state.v.len())
    }

    fn coupling_field(&self, state: &PairState) -> Vec<f64> {
        state.u.iter().zip(&state.v).map(|(&u, &v)| self.nl.f(u, v)).collect()
    }

    fn assemble(&self, grad: [f64; 2], pot: [f64; 2], choquard: f64) -> EnergyBreakdown {
        let p = self.p;
        let norm_p = grad[0] + grad[1] + pot[0] + pot[1];
        EnergyBreakdown {
            grad_energy_u: grad[0] / p,
            grad_energy_v: grad[1] / p,
            potential_energy_u: pot[0] / p,
            potential_energy_v: pot[1] / p,
            choquard,
            norm_p,
            j: norm_p / p - choquard / (2.0 * self.nl.gamma()),
            nehari_residual: norm_p - choquard,
        }
    }

    fn weighted_pnorm(&self, f: &[f64], h: &PotentialField, lambda: f64) -> f64 {
        f.iter().zip(&h.values).map(|(x, hv)| (lambda * hv + 1.0) * abspow(*x, self.p)).sum()
    }

    pub fn energy(&self, lambda: f64, state: &PairState) -> Result<EnergyBreakdown> {
        self.check(state)?;
        let p = self.p;
        let grad = [grad_pnorm(&self.lattice, &state.u, p), grad_pnorm(&self.lattice, &state.v, p)];
        let pot = [
            self.weighted_pnorm(&state.u, &self.a, lambda),
            self.weighted_pnorm(&state.v, &self.b, lambda),
        ];
        let f = self.coupling_field(state);
        let rf = self.conv.apply(&f)?;
        let d = rf.iter().zip(&f).map(|(a, b)| a * b).sum();
        Ok(self.assemble(grad, pot, d))
    }

    /// Energy together with the L² representative of `J_λ'`.
    pub fn evaluate(&self, lambda: f64, state: &PairState) -> Result<(EnergyBreakdown, PairState)> {
        let (e, g, _) = self.evaluate_with_linear(lambda, state)?;
        Ok((e, g))
    }

    /// `J_λ'(u, v)` as a pair of fields:
    /// `-Δ_p u + (λa + 1)|u|^{p-2}u - (1/γ)(R_α * F) F_u` and likewise for `v`.
    pub fn energy_gradient(&self, lambda: f64, state: &PairState) -> Result<PairState> {
        Ok(self.evaluate_with_linear(lambda, state)?.1)
    }

    /// Energy, gradient, and the linear part `-Δ_p u + (λa + 1)|u|^{p-2}u` of the gradient.
    pub fn evaluate_with_linear(
        &self,
        lambda: f64,
        state: &PairState,
    ) -> Result<(EnergyBreakdown, PairState, PairState)> {
        self.check(state)?;
        let p = self.p;
        let inv_gamma = 1.0 / self.nl.gamma();
        let f = self.coupling_field(state);
        let rf = self.conv.apply(&f)?;
        let d = rf.iter().zip(&f).map(|(a, b)| a * b).sum();
        let grad = [grad_pnorm(&self.lattice, &state.u, p), grad_pnorm(&self.lattice, &state.v, p)];
        let pot = [
            self.weighted_pnorm(&state.u, &self.a, lambda),
            self.weighted_pnorm(&state.v, &self.b, lambda),
        ];
        let linear = |w: &[f64], h: &PotentialField| -> Vec<f64> {
            p_laplacian(&self.lattice, w, p)
                .iter()
                .zip(w)
                .zip(&h.values)
                .map(|((lap, x), hv)| -lap + (lambda * hv + 1.0) * sgnpow(*x, p - 1.0))
                .collect()
        };
        let lin = PairState { u: linear(&state.u, &self.a), v: linear(&state.v, &self.b) };
        let mut g = lin.clone();
        for i in 0..self.sites() {
            let (u, v) = (state.u[i], state.v[i]);
            g.u[i] -= inv_gamma * rf[i] * self.nl.fu(u, v);
            g.v[i] -= inv_gamma * rf[i] * self.nl.fv(u, v);
        }
        Ok((self.assemble(grad, pot, d), g, lin))
    }

    /// Scale `state` onto the Nehari manifold: `t₀ = (‖state‖_λ^p / D)^{1/(2γ - p)}`.
    pub fn nehari_project(&self, lambda: f64, state: &PairState) -> Result<(f64, PairState)> {
        let e = self.energy(lambda, state)?;
        let t0 = nehari_scale(e.norm_p, e.choquard, self.p, self.nl.gamma())?;
        Ok((t0, state.scaled(t0)))
    }

    /// `J_Ω` for a state supported in `Ω_a × Ω_b`: gradient terms over `Ω̄_a ∪ Ω̄_b`,
    /// zeroth-order and Choquard terms over `Ω_a ∪ Ω_b`.
    pub fn limit_energy(&self, state: &PairState) -> Result<EnergyBreakdown> {
        self.check(state)?;
        let m = &self.masks;
        for i in 0..self.sites() {
            if (state.u[i] != 0.0 && !m.omega_a.contains(i)) || (state.v[i] != 0.0 && !m.omega_b.contains(i)) {
                return Err(Error::Precondition(format!(
                    "state is nonzero outside the wells at {:?}",
                    self.lattice.coords(i)
                )));
            }
        }
        let p = self.p;
        let closure = m.closure_union();
        let wells = m.omega_a.union(&m.omega_b);
        let sum_over = |set: &SiteSet, f: &dyn Fn(usize) -> f64| set.indices().map(f).sum::<f64>();
        let grad = [
            sum_over(&closure, &|x| local_grad_p(&self.lattice, &state.u, p, x)),
            sum_over(&closure, &|x| local_grad_p(&self.lattice, &state.v, p, x)),
        ];
        let pot = [
            sum_over(&wells, &|x| abspow(state.u[x], p)),
            sum_over(&wells, &|x| abspow(state.v[x], p)),
        ];
        let f = self.coupling_field(state);
        let rf = self.conv.apply(&f)?;
        let d = sum_over(&wells, &|x| rf[x] * f[x]);
        Ok(self.assemble(grad, pot, d))
    }

    /// `(∫_{Ω_a^c} |u|^p + ∫_{Ω_b^c} |v|^p)^{1/p}`
    pub fn tail_mass(&self, state: &PairState) -> f64 {
        let p = self.p;
        let out_u: f64 = (0..self.sites())
            .filter(|&i| !self.masks.omega_a.contains(i))
            .map(|i| abspow(state.u[i], p))
            .sum();
        let out_v: f64 = (0..self.sites())
            .filter(|&i| !self.masks.omega_b.contains(i))
            .map(|i| abspow(state.v[i], p))
            .sum();
        (out_u + out_v).powf(1.0 / p)
    }

    /// `(‖u - u'‖_{W^{1,p}}^p + ‖v - v'‖_{W^{1,p}}^p)^{1/p}`
    pub fn w1p_distance(&self, x: &PairState, y: &PairState) -> f64 {
        let du: Vec<f64> = x.u.iter().zip(&y.u).map(|(a, b)| a - b).collect();
        let dv: Vec<f64> = x.v.iter().zip(&y.v).map(|(a, b)| a - b).collect();
        (w1p_norm_p(&self.lattice, &du, self.p) + w1p_norm_p(&self.lattice, &dv, self.p)).powf(1.0 / self.p)
    }
}

/// Nehari scaling factor for a ray with norm term `norm_p` and Choquard term `choquard`.
pub fn nehari_scale(norm_p: f64, choquard: f64, p: f64, gamma: f64) -> Result<f64> {
    if !(choquard > 0.0) || !(norm_p > 0.0) {
        return Err(Error::DegenerateChoquard);
    }
    Ok((norm_p / choquard).powf(1.0 / (2.0 * gamma - p)))
}
