use super::Convolver;
use crate::{Error, Result};

/// Ratios whose boundedness over all fields is the discrete HLS inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HlsReport {
    /// `Σ (R * u) v / (‖u‖_r ‖v‖_s)`
    pub bilinear_ratio: f64,
    /// `‖R * u‖_q / ‖u‖_r` with `q = N r / (N - α r)`
    pub operator_ratio: f64,
}

fn lp_norm(f: &[f64], p: f64) -> f64 {
    f.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Evaluate both HLS ratios for one pair of fields.
///
/// Requires `1/r + 1/s + (N - α)/N = 2` and `1 < r, s < ∞`.
pub fn hls_check(conv: &Convolver, u: &[f64], v: &[f64], r: f64, s: f64) -> Result<HlsReport> {
    let n = conv.kernel().dim() as f64;
    let alpha = conv.kernel().alpha();
    if !(r > 1.0 && s > 1.0 && r.is_finite() && s.is_finite()) {
        return Err(Error::Precondition(format!("HLS exponents must satisfy 1 < r, s < inf, got r={r}, s={s}")));
    }
    let defect = 1.0 / r + 1.0 / s + (n - alpha) / n - 2.0;
    if defect.abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "HLS exponents violate 1/r + 1/s + (N-alpha)/N = 2 (defect {defect:e})"
        )));
    }
    if n - alpha * r <= 0.0 {
        return Err(Error::Precondition("N - alpha r must be positive".into()));
    }
    let (nu, nv) = (lp_norm(u, r), lp_norm(v, s));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::Precondition("HLS ratios need nonzero fields".into()));
    }
    let ru = conv.apply(u)?;
    if v.len() != ru.len() {
        return Err(Error::Shape { expected: ru.len(), got: v.len() });
    }
    let pairing: f64 = ru.iter().zip(v).map(|(a, b)| a * b).sum();
    let q = n * r / (n - alpha * r);
    Ok(HlsReport { bilinear_ratio: pairing / (nu * nv), operator_ratio: lp_norm(&ru, q) / nu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{riesz_green, ConvolutionBackend, KernelBackend, QuadratureSpec};
    use crate::lattice::LatticeBox;

    fn setup() -> Convolver {
        let l = LatticeBox::build(1, 6).unwrap();
        let k = riesz_green(&l, 0.4, KernelBackend::power_law(1.3), &QuadratureSpec::default()).unwrap();
        Convolver::new(&l, k, ConvolutionBackend::Direct).unwrap()
    }

    #[test]
    fn delta_ratio_is_kernel_at_origin() {
        let c = setup();
        let mut d = vec![0.0; 13];
        d[6] = 1.0;
        let r = 2.0 / 1.4;
        let rep = hls_check(&c, &d, &d, r, r).unwrap();
        assert!((rep.bilinear_ratio - 1.3).abs() < 1e-15);
    }

    #[test]
    fn scale_invariant() {
        let c = setup();
        let u: Vec<f64> = (0..13).map(|i| ((i * 7 % 5) as f64) - 1.5).collect();
        let v: Vec<f64> = (0..13).map(|i| ((i * 3 % 4) as f64) + 0.5).collect();
        let r = 2.0 / 1.4;
        let a = hls_check(&c, &u, &v, r, r).unwrap();
        let u2: Vec<f64> = u.iter().map(|x| 2.0 * x).collect();
        let b = hls_check(&c, &u2, &v, r, r).unwrap();
        assert!((a.bilinear_ratio - b.bilinear_ratio).abs() < 1e-14 * a.bilinear_ratio.abs());
        assert!((a.operator_ratio - b.operator_ratio).abs() < 1e-14 * a.operator_ratio);
    }

    #[test]
    fn rejects_bad_exponents() {
        let c = setup();
        let u = vec![1.0; 13];
        assert!(hls_check(&c, &u, &u, 2.0, 2.0).is_err());
        assert!(hls_check(&c, &vec![0.0; 13], &u, 2.0 / 1.4, 2.0 / 1.4).is_err());
    }
}
