//! Run configuration: a JSON document, validated in one pass so that every violated
//! constraint is reported together.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::kernel::{ConvolutionBackend, KernelBackend, QuadratureSpec};
use crate::lattice::{make_potential, LatticeBox, WellShape};
use crate::nonlinearity::{Family, NonlinearitySpec};
use crate::solver::SolverConfig;
use crate::{Error, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    dim: Option<usize>,
    radius: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotentials {
    a: Option<WellShape>,
    b: Option<WellShape>,
    m1: Option<f64>,
    m2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    alpha: Option<f64>,
    backend: Option<KernelBackend>,
    quadrature: Option<QuadratureSpec>,
    cache: Option<PathBuf>,
    convolution: Option<ConvolutionBackend>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNonlinearity {
    family: Option<String>,
    gamma: Option<f64>,
    gamma1: Option<f64>,
    gamma2: Option<f64>,
    q: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lattice: Option<RawLattice>,
    potentials: Option<RawPotentials>,
    kernel: Option<RawKernel>,
    nonlinearity: Option<RawNonlinearity>,
    p: Option<f64>,
    lambdas: Option<Vec<f64>>,
    solver: Option<SolverConfig>,
    warm_start: Option<bool>,
    output: Option<PathBuf>,
    seed: Option<u64>,
}

/// A validated run configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub dim: usize,
    pub radius: usize,
    pub well_a: WellShape,
    pub well_b: WellShape,
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
    pub backend: KernelBackend,
    pub quadrature: QuadratureSpec,
    pub cache: Option<PathBuf>,
    pub convolution: ConvolutionBackend,
    pub nonlinearity: Family,
    pub p: f64,
    pub lambdas: Vec<f64>,
    pub solver: SolverConfig,
    pub warm_start: bool,
    pub output: PathBuf,
}

fn need<T>(v: Option<T>, key: &str, errs: &mut Vec<String>) -> Option<T> {
    if v.is_none() {
        errs.push(format!("missing required key `{key}`"));
    }
    v
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        Self::resolve(raw).map_err(Error::Config)
    }

    fn resolve(raw: RawConfig) -> std::result::Result<Self, Vec<String>> {
        let mut errs = Vec::new();
        let lat = raw.lattice.unwrap_or_default();
        let pots = raw.potentials.unwrap_or_default();
        let ker = raw.kernel.unwrap_or_default();
        let nl = raw.nonlinearity.unwrap_or_default();

        let dim = need(lat.dim, "lattice.dim", &mut errs);
        let radius = need(lat.radius, "lattice.radius", &mut errs);
        let lattice = match (dim, radius) {
            (Some(d), Some(r)) => LatticeBox::build(d, r).map_err(|e| errs.push(e.to_string())).ok(),
            _ => None,
        };

        let well_a = need(pots.a, "potentials.a", &mut errs);
        let well_b = need(pots.b, "potentials.b", &mut errs);
        let (m1, m2) = (pots.m1.unwrap_or(1.0), pots.m2.unwrap_or(1.0));
        if let Some(l) = &lattice {
            for (name, shape, m) in [("a", &well_a, m1), ("b", &well_b, m2)] {
                let Some(shape) = shape else { continue };
                match make_potential(l, shape) {
                    Ok(h) => {
                        if let Err(e) = h.check_sublevel(m) {
                            errs.push(format!("potential {name}: {e}"));
                        }
                    }
                    Err(e) => errs.push(format!("potential {name}: {e}")),
                }
            }
        }

        let p = need(raw.p, "p", &mut errs);
        if let Some(p) = p {
            if !(p >= 2.0) || !p.is_finite() {
                errs.push(format!("p = {p} violates p >= 2 required of the p-Laplacian energy"));
            }
        }

        let alpha = need(ker.alpha, "kernel.alpha", &mut errs);
        let backend = ker.backend.unwrap_or(KernelBackend::Integral);
        if let (Some(a), Some(d)) = (alpha, dim) {
            if let Err(e) = backend.check_alpha(d, a) {
                errs.push(e.to_string());
            }
        }

        let gamma = need(nl.gamma, "nonlinearity.gamma", &mut errs);
        let family = match nl.family.as_deref() {
            None => {
                errs.push("missing required key `nonlinearity.family`".into());
                None
            }
            Some("product") => {
                let g1 = need(nl.gamma1, "nonlinearity.gamma1", &mut errs);
                let g2 = need(nl.gamma2, "nonlinearity.gamma2", &mut errs);
                for (k, g) in [("gamma1", g1), ("gamma2", g2)] {
                    if let Some(g) = g {
                        if !(g > 1.0) {
                            errs.push(format!("{k} = {g} violates {k} > 1 needed for F to be C^1"));
                        }
                    }
                }
                if let (Some(g1), Some(g2), Some(g)) = (g1, g2, gamma) {
                    if (g1 + g2 - g).abs() > 1e-12 * g.abs().max(1.0) {
                        errs.push(format!("gamma = {g} must equal gamma1 + gamma2 = {}", g1 + g2));
                    }
                }
                match (g1, g2) {
                    (Some(gamma1), Some(gamma2)) => Some(Family::Product { gamma1, gamma2 }),
                    _ => None,
                }
            }
            Some("power_sum") => {
                let q = need(nl.q, "nonlinearity.q", &mut errs);
                match (q, gamma) {
                    (Some(q), Some(gamma)) => Some(Family::PowerSum { q, gamma }),
                    _ => None,
                }
            }
            Some(other) => {
                errs.push(format!("unknown nonlinearity family `{other}` (expected product or power_sum)"));
                None
            }
        };
        let family = family.and_then(|f| match NonlinearitySpec::new(f) {
            Ok(spec) => Some((f, spec)),
            Err(e) => {
                if !matches!(f, Family::Product { .. }) {
                    errs.push(e.to_string());
                }
                None
            }
        });
        if let (Some(g), Some(d), Some(a), Some(p)) = (gamma, dim, alpha, p) {
            let bound = (d as f64 + a) * p / (2.0 * d as f64);
            if !(g > bound) {
                errs.push(format!("gamma = {g} violates the lower bound (N+alpha)p/(2N) = {bound}"));
            }
        }

        let lambdas = need(raw.lambdas, "lambdas", &mut errs);
        if let Some(ls) = &lambdas {
            if ls.is_empty() {
                errs.push("lambdas must not be empty".into());
            }
            if ls.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
                errs.push("every lambda must be positive and finite".into());
            }
            if ls.windows(2).any(|w| w[1] <= w[0]) {
                errs.push("lambdas must be strictly increasing".into());
            }
        }

        let mut solver = raw.solver.unwrap_or_default();
        if let Some(seed) = raw.seed {
            solver.seed = seed;
        }
        errs.extend(solver.validate());
        let quadrature = ker.quadrature.unwrap_or_default();
        if backend == KernelBackend::Integral {
            if let Err(e) = quadrature.validate() {
                errs.push(e.to_string());
            }
        }

        if !errs.is_empty() {
            return Err(errs);
        }
        Ok(RunConfig {
            dim: dim.unwrap(),
            radius: radius.unwrap(),
            well_a: well_a.unwrap(),
            well_b: well_b.unwrap(),
            m1,
            m2,
            alpha: alpha.unwrap(),
            backend,
            quadrature,
            cache: ker.cache,
            convolution: ker.convolution.unwrap_or_default(),
            nonlinearity: family.unwrap().0,
            p: p.unwrap(),
            lambdas: lambdas.unwrap(),
            solver,
            warm_start: raw.warm_start.unwrap_or(false),
            output: raw.output.unwrap_or_else(|| PathBuf::from("out")),
        })
    }
}
