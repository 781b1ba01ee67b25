//! Positively homogeneous couplings `F(u, v)` of degree `γ`.
//!
//! Both families depend on `|u|` and `|v|` only, so `F` is even in each argument and
//! `C¹` as long as every exponent exceeds 1.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `F = |u|^{γ₁} |v|^{γ₂}`, `γ = γ₁ + γ₂`.
    Product { gamma1: f64, gamma2: f64 },
    /// `F = (|u|^q + |v|^q)^{γ/q}` with `γ > q ≥ 2`.
    PowerSum { q: f64, gamma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearitySpec {
    family: Family,
    gamma: f64,
    m_f: f64,
}

/// `sign(s) |s|^e`, with `sgnpow(0, e) = 0` for `e > 0` and `e = 1` short-circuited.
#[inline]
pub fn sgnpow(s: f64, e: f64) -> f64 {
    if e == 1.0 {
        s
    } else if s == 0.0 {
        0.0
    } else {
        s.signum() * s.abs().powf(e)
    }
}

#[inline]
fn abspow(s: f64, e: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else if e == 2.0 {
        s * s
    } else {
        s.abs().powf(e)
    }
}

impl NonlinearitySpec {
    pub fn product(gamma1: f64, gamma2: f64) -> Result<Self> {
        Self::new(Family::Product { gamma1, gamma2 })
    }

    pub fn power_sum(q: f64, gamma: f64) -> Result<Self> {
        Self::new(Family::PowerSum { q, gamma })
    }

    pub fn new(family: Family) -> Result<Self> {
        let gamma = match family {
            Family::Product { gamma1, gamma2 } => {
                if !(gamma1 > 1.0 && gamma2 > 1.0) || !gamma1.is_finite() || !gamma2.is_finite() {
                    return Err(Error::Nonlinearity(format!(
                        "product exponents must satisfy gamma1, gamma2 > 1 for F to be C^1, got {gamma1}, {gamma2}"
                    )));
                }
                gamma1 + gamma2
            }
            Family::PowerSum { q, gamma } => {
                if !(q >= 2.0) || !q.is_finite() {
                    return Err(Error::Nonlinearity(format!("power-sum inner exponent q must be >= 2, got {q}")));
                }
                if !(gamma > q) || !gamma.is_finite() {
                    return Err(Error::Nonlinearity(format!(
                        "power-sum degree must exceed q for continuous partials at the axes, got gamma = {gamma}, q = {q}"
                    )));
                }
                gamma
            }
        };
        let mut spec = NonlinearitySpec { family, gamma, m_f: 0.0 };
        spec.m_f = spec.max_on_unit_curve();
        Ok(spec)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Homogeneity degree `γ`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `M_F = max{F(u, v) : |u|^γ + |v|^γ = 1}`.
    pub fn m_f(&self) -> f64 {
        self.m_f
    }

    /// Check `γ > (N + α) p / (2N)`.
    pub fn check_degree(&self, dim: usize, alpha: f64, p: f64) -> Result<()> {
        let n = dim as f64;
        let bound = (n + alpha) * p / (2.0 * n);
        if self.gamma > bound {
            Ok(())
        } else {
            Err(Error::Nonlinearity(format!(
                "gamma = {} violates the lower bound (N+alpha)p/(2N) = {bound}",
                self.gamma
            )))
        }
    }

    pub fn f(&self, u: f64, v: f64) -> f64 {
        match self.family {
            Family::Product { gamma1, gamma2 } => abspow(u, gamma1) * abspow(v, gamma2),
            Family::PowerSum { q, gamma } => {
                let s = abspow(u, q) + abspow(v, q);
                if s == 0.0 { 0.0 } else { s.powf(gamma / q) }
            }
        }
    }

    pub fn fu(&self, u: f64, v: f64) -> f64 {
        match self.family {
            Family::Product { gamma1, gamma2 } => gamma1 * sgnpow(u, gamma1 - 1.0) * abspow(v, gamma2),
            Family::PowerSum { q, gamma } => {
                let s = abspow(u, q) + abspow(v, q);
                if s == 0.0 { 0.0 } else { gamma * s.powf(gamma / q - 1.0) * sgnpow(u, q - 1.0) }
            }
        }
    }

    pub fn fv(&self, u: f64, v: f64) -> f64 {
        match self.family {
            Family::Product { gamma1, gamma2 } => gamma2 * abspow(u, gamma1) * sgnpow(v, gamma2 - 1.0),
            Family::PowerSum { .. } => self.fu(v, u),
        }
    }

    // Golden-section search of s ↦ F(s^{1/γ}, (1-s)^{1/γ}) on [0, 1]; both families are
    // unimodal there.
    fn max_on_unit_curve(&self) -> f64 {
        let g = self.gamma;
        let h = |s: f64| self.f(s.powf(1.0 / g), (1.0 - s).powf(1.0 / g));
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut c = hi - phi * (hi - lo);
        let mut d = lo + phi * (hi - lo);
        let (mut hc, mut hd) = (h(c), h(d));
        while hi - lo > 1e-13 {
            if hc >= hd {
                hi = d;
                d = c;
                hd = hc;
                c = hi - phi * (hi - lo);
                hc = h(c);
            } else {
                lo = c;
                c = d;
                hc = hd;
                d = lo + phi * (hi - lo);
                hd = h(d);
            }
        }
        [h(0.0), h(1.0), h(0.5 * (lo + hi))].into_iter().fold(0.0, f64::max)
    }
}

/// Max of `F(u,v) / (|u|^γ + |v|^γ)` over the samples (zero samples are skipped).
pub fn check_growth_bound(spec: &NonlinearitySpec, samples: &[(f64, f64)]) -> f64 {
    let g = spec.gamma();
    samples
        .iter()
        .filter_map(|&(u, v)| {
            let d = abspow(u, g) + abspow(v, g);
            (d > 0.0).then(|| spec.f(u, v) / d)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn product_values() {
        let f = NonlinearitySpec::product(2.0, 2.0).unwrap();
        assert_eq!(f.f(1.0, 2.0), 4.0);
        assert_eq!(f.fu(1.0, 2.0), 8.0);
        assert_eq!(f.fv(1.0, 2.0), 4.0);
        assert_eq!(1.0 * f.fu(1.0, 2.0) + 2.0 * f.fv(1.0, 2.0), 4.0 * f.f(1.0, 2.0));
        assert_eq!(f.f(0.0, 0.0), 0.0);
        assert_eq!(f.fu(0.0, 0.0), 0.0);
        assert_eq!(f.fv(0.0, 0.0), 0.0);
    }

    #[test]
    fn growth_constants() {
        let f = NonlinearitySpec::product(2.0, 2.0).unwrap();
        assert!((f.m_f() - 0.5).abs() < 1e-12);
        assert_eq!(check_growth_bound(&f, &[(3.0, 0.0)]), 0.0);

        let ps = NonlinearitySpec::power_sum(2.0, 4.0).unwrap();
        assert_eq!(check_growth_bound(&ps, &[(1.0, 1.0)]), 2.0);
        assert!((ps.m_f() - 2.0).abs() < 1e-12);

        // asymmetric product: max at s = γ₁/γ, value (γ₁/γ)^{γ₁/γ} (γ₂/γ)^{γ₂/γ}
        let a = NonlinearitySpec::product(1.5, 3.0).unwrap();
        let (s, g): (f64, f64) = (1.5 / 4.5, 4.5);
        let want = s.powf(1.5 / g) * (1.0 - s).powf(3.0 / g);
        assert!((a.m_f() - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(NonlinearitySpec::product(1.0, 2.0).is_err());
        assert!(NonlinearitySpec::power_sum(2.0, 2.0).is_err());
        assert!(NonlinearitySpec::power_sum(1.5, 4.0).is_err());
        let f = NonlinearitySpec::product(2.0, 2.0).unwrap();
        assert!(f.check_degree(1, 0.4, 2.0).is_ok());
        // (N+α)p/(2N) = 1.4·6/2 = 4.2
        assert!(f.check_degree(1, 0.4, 6.0).is_err());
    }

    #[test]
    fn partials_match_finite_differences() {
        for spec in [
            NonlinearitySpec::product(2.0, 2.0).unwrap(),
            NonlinearitySpec::product(1.7, 2.6).unwrap(),
            NonlinearitySpec::power_sum(2.0, 4.5).unwrap(),
            NonlinearitySpec::power_sum(3.0, 3.5).unwrap(),
        ] {
            for &(u, v) in &[(0.7, -1.3), (-2.0, 0.4), (1.1, 1.9)] {
                let h = 1e-6;
                let du = (spec.f(u + h, v) - spec.f(u - h, v)) / (2.0 * h);
                let dv = (spec.f(u, v + h) - spec.f(u, v - h)) / (2.0 * h);
                assert!((du - spec.fu(u, v)).abs() <= 1e-5 * spec.fu(u, v).abs());
                assert!((dv - spec.fv(u, v)).abs() <= 1e-5 * spec.fv(u, v).abs());
            }
        }
    }

    fn families() -> impl Strategy<Value = NonlinearitySpec> {
        prop_oneof![
            (1.05f64..4.0, 1.05f64..4.0).prop_map(|(a, b)| NonlinearitySpec::product(a, b).unwrap()),
            (2.0f64..4.0, 0.05f64..3.0).prop_map(|(q, d)| NonlinearitySpec::power_sum(q, q + d).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn euler_identity(spec in families(), u in -5.0f64..5.0, v in -5.0f64..5.0) {
            let f = spec.f(u, v);
            let lhs = u * spec.fu(u, v) + v * spec.fv(u, v);
            prop_assert!((lhs - spec.gamma() * f).abs() <= 1e-10 * (1.0 + f.abs()));
        }

        #[test]
        fn homogeneity(spec in families(), u in -5.0f64..5.0, v in -5.0f64..5.0, t in 0.01f64..10.0) {
            let g = spec.gamma();
            let a = spec.f(t * u, t * v);
            let b = t.powf(g) * spec.f(u, v);
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300));
            let a = spec.fu(t * u, t * v);
            let b = t.powf(g - 1.0) * spec.fu(u, v);
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300));
        }

        #[test]
        fn bounded_by_m_f(spec in families(), u in -5.0f64..5.0, v in -5.0f64..5.0) {
            prop_assert!(check_growth_bound(&spec, &[(u, v)]) <= spec.m_f() + 1e-12);
            prop_assert!(spec.f(u, v) >= 0.0);
        }
    }
}
