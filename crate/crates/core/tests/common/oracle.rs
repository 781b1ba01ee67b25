//! Riesz kernel oracles written independently of the library: the time integral at ten
//! times the quadrature density (heat kernel by trapezoidal Fourier sums, tail by
//! incomplete gamma), and the closed-form Fourier integral
//! `R(z) = Γ(α)/|Γ(-α)| π^{-N} ∫_{[0,π]^N} Π cos(z_i θ_i) (Σ 4 sin²(θ_i/2))^{-α} dθ`.

use std::f64::consts::PI;

use choquard::kernel::{QuadratureSpec, RieszKernel};
use statrs::function::gamma::{gamma, gamma_ui};

pub fn legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            loop {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    let (mut q0, mut q1) = (1.0, x);
                    for k in 2..=n {
                        let q2 = ((2 * k - 1) as f64 * x * q1 - (k - 1) as f64 * q0) / k as f64;
                        q0 = q1;
                        q1 = q2;
                    }
                    let d = n as f64 * (x * q1 - q0) / (x * x - 1.0);
                    return (x, 2.0 / ((1.0 - x * x) * d * d));
                }
            }
        })
        .collect()
}

pub const LEVELS: i32 = 40;

/// Nodes on `[h₀, end]` with `h₀ = top 2^{-LEVELS}`: geometric panels toward 0 below
/// `top`, uniform panels of width at most `h` above. `[0, h₀]` is left to the caller.
pub fn graded_nodes(top: f64, end: f64, h: f64) -> Vec<(f64, f64)> {
    let levels = LEVELS;
    let mut panels = Vec::new();
    for k in (0..levels).rev() {
        panels.push((top * 0.5f64.powi(k + 1), top * 0.5f64.powi(k)));
    }
    let n = ((end - top) / h).ceil().max(0.0) as usize;
    for j in 0..n {
        panels.push((top + (end - top) * j as f64 / n as f64, top + (end - top) * (j + 1) as f64 / n as f64));
    }
    let gl = legendre(16);
    panels
        .into_iter()
        .flat_map(|(a, b)| gl.iter().map(move |(x, w)| (0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w)).collect::<Vec<_>>())
        .collect()
}

pub fn lam(theta: f64) -> f64 {
    4.0 * (0.5 * theta).sin().powi(2)
}

pub fn abs_gamma_neg(alpha: f64) -> f64 {
    gamma(1.0 - alpha) / alpha
}

pub fn fourier_oracle(dim: usize, alpha: f64, lags: &[Vec<usize>]) -> Vec<f64> {
    let nodes = graded_nodes(0.1, PI, 0.05);
    let c = gamma(alpha) / abs_gamma_neg(alpha) / PI.powi(dim as i32);
    let mut out = vec![0.0; lags.len()];
    match dim {
        1 => {
            // λ(θ) = θ² (1 + O(θ²)) on [0, h₀]
            let h0 = 0.1 * 0.5f64.powi(LEVELS);
            out.iter_mut().for_each(|o| *o += h0.powf(1.0 - 2.0 * alpha) / (1.0 - 2.0 * alpha));
            for &(th, w) in &nodes {
                let f = w * lam(th).powf(-alpha);
                for (o, z) in out.iter_mut().zip(lags) {
                    *o += f * (z[0] as f64 * th).cos();
                }
            }
        }
        2 => {
            let mmax = lags.iter().flatten().copied().max().unwrap();
            let cosines: Vec<Vec<f64>> = nodes.iter().map(|(th, _)| (0..=mmax).map(|m| (m as f64 * th).cos()).collect()).collect();
            for (i, &(t1, w1)) in nodes.iter().enumerate() {
                for (j, &(t2, w2)) in nodes.iter().enumerate() {
                    let f = w1 * w2 * (lam(t1) + lam(t2)).powf(-alpha);
                    for (o, z) in out.iter_mut().zip(lags) {
                        *o += f * cosines[i][z[0]] * cosines[j][z[1]];
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    out.iter().map(|v| c * v).collect()
}

/// `k_t(m)` for `m = 0..=mmax` by the trapezoidal rule on the Fourier representation.
pub fn heat_1d(t: f64, mmax: usize) -> Vec<f64> {
    let k = 32 + 16 * t.sqrt().ceil() as usize + mmax;
    let mut out = vec![0.0; mmax + 1];
    for j in 0..=k {
        let th = PI * j as f64 / k as f64;
        let w = if j == 0 || j == k { 0.5 } else { 1.0 } / k as f64;
        let e = w * (-t * lam(th)).exp();
        for (m, o) in out.iter_mut().enumerate() {
            *o += e * (m as f64 * th).cos();
        }
    }
    out
}

pub fn factorial(m: usize) -> f64 {
    (1..=m).map(|j| j as f64).product()
}

/// The time integral with panels a tenth of the default width.
pub fn time_oracle(dim: usize, alpha: f64, lags: &[Vec<usize>]) -> Vec<f64> {
    let (t_min, t_max) = (1e-10f64, 1e4f64);
    let mmax = lags.iter().flatten().copied().max().unwrap();
    let width = QuadratureSpec::default().panel_width / 10.0;
    let (a, b) = (t_min.ln(), t_max.ln());
    let panels = ((b - a) / width).ceil() as usize;
    let gl = legendre(16);
    let mut out = vec![0.0; lags.len()];
    for p in 0..panels {
        let (lo, hi) = (a + (b - a) * p as f64 / panels as f64, a + (b - a) * (p + 1) as f64 / panels as f64);
        for (x, w) in &gl {
            let s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
            let t = s.exp();
            let weight = 0.5 * (hi - lo) * w * (alpha * s).exp();
            let k = heat_1d(t, mmax);
            for (o, z) in out.iter_mut().zip(lags) {
                *o += weight * z.iter().map(|&m| k[m]).product::<f64>();
            }
        }
    }
    // (0, t_min]: k_t(z) = Π t^{m_i}/m_i! (1 - 2N t + O(t²))
    for (o, z) in out.iter_mut().zip(lags) {
        let e = alpha + z.iter().sum::<usize>() as f64;
        let fact: f64 = z.iter().map(|&m| factorial(m)).product();
        *o += (t_min.powf(e) / e - 2.0 * dim as f64 * t_min.powf(e + 1.0) / (e + 1.0)) / fact;
    }
    // [t_max, ∞): ∫ t^{α-1} e^{-tΛ} dt = Λ^{-α} Γ(α, t_max Λ), Λ = Σ λ(θ_i)
    let nodes = graded_nodes(0.05, 0.4, 0.05);
    let tail = |big: f64| big.powf(-alpha) * gamma_ui(alpha, t_max * big);
    match dim {
        1 => {
            // t_max λ ≪ 1 on [0, h₀], where Γ(α, ·) = Γ(α)
            let h0 = 0.05 * 0.5f64.powi(LEVELS);
            let inner = gamma(alpha) * h0.powf(1.0 - 2.0 * alpha) / (1.0 - 2.0 * alpha) / PI;
            out.iter_mut().for_each(|o| *o += inner);
            for &(th, w) in &nodes {
                let f = w * tail(lam(th)) / PI;
                for (o, z) in out.iter_mut().zip(lags) {
                    *o += f * (z[0] as f64 * th).cos();
                }
            }
        }
        2 => {
            for &(t1, w1) in &nodes {
                for &(t2, w2) in &nodes {
                    let f = w1 * w2 * tail(lam(t1) + lam(t2)) / (PI * PI);
                    for (o, z) in out.iter_mut().zip(lags) {
                        *o += f * (z[0] as f64 * t1).cos() * (z[1] as f64 * t2).cos();
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    out.iter().map(|v| v / abs_gamma_neg(alpha)).collect()
}

pub fn nonneg_lags(k: &RieszKernel) -> Vec<Vec<usize>> {
    let r = k.reach();
    match k.dim() {
        1 => (0..=r).map(|m| vec![m]).collect(),
        2 => (0..=r).flat_map(|a| (0..=r).map(move |b| vec![a, b])).collect(),
        _ => unreachable!(),
    }
}

pub fn max_rel(k: &RieszKernel, lags: &[Vec<usize>], oracle: &[f64]) -> f64 {
    lags.iter()
        .zip(oracle)
        .map(|(z, o)| {
            let lag: Vec<i64> = z.iter().map(|&m| m as i64).collect();
            (k.at(&lag) - o).abs() / o.abs()
        })
        .fold(0.0, f64::max)
}
