//! The Riesz-type Green's function `R_α` on `Z^N` and the convolution `R_α * f`.
//!
//! `R_α(z) = |Γ(-α)|^{-1} ∫_0^∞ k_t(z) t^{α-1} dt`, where `k_t` is the heat kernel of the
//! lattice Laplacian, `k_t(z) = Π_i e^{-2t} I_{|z_i|}(2t)`.

pub mod bessel;
pub mod cache;
mod convolve;
mod hls;
pub mod quadrature;
mod riesz;

pub use convolve::{convolve, ConvolutionBackend, Convolver};
pub use hls::{hls_check, HlsReport};
pub use riesz::{
    abs_gamma_neg, riesz_green, KernelBackend, QuadratureReport, QuadratureSpec, RieszKernel,
};

use crate::{Error, Result};

/// Heat kernel `k_t(z)` of the lattice Laplacian at lag `z` and time `t > 0`.
pub fn heat_kernel(lag: &[i64], t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Precondition(format!("heat kernel time must be positive, got {t}")));
    }
    let max_order = lag.iter().map(|z| z.unsigned_abs() as usize).max().unwrap_or(0);
    let seq = bessel::scaled_bessel_i_seq(2.0 * t, max_order);
    Ok(lag.iter().map(|z| seq[z.unsigned_abs() as usize]).product())
}

/// One-dimensional heat kernel values `k_t(m)` for `m = 0..=max_lag`.
pub fn heat_kernel_1d(t: f64, max_lag: usize) -> Result<Vec<f64>> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Precondition(format!("heat kernel time must be positive, got {t}")));
    }
    Ok(bessel::scaled_bessel_i_seq(2.0 * t, max_lag))
}
