//! Exponentially scaled modified Bessel functions `e^{-x} I_m(x)` for integer orders.
//!
//! The scaled form is evaluated directly; `e^{-x}` and `I_m(x)` are never formed
//! separately, so large arguments do not overflow.

/// `e^{-x} I_m(x)` for `m = 0..=max_order`, `x ≥ 0`.
pub fn scaled_bessel_i_seq(x: f64, max_order: usize) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "argument must be finite and nonnegative");
    if x == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return out;
    }
    if x <= 1.0 {
        return series(x, max_order);
    }
    let m2 = (max_order * max_order) as f64 + 1.0;
    if x >= 1.0e4 && x >= 1.0e3 * m2 {
        return (0..=max_order).map(|m| asymptotic(x, m, 16)).collect();
    }
    miller(x, max_order)
}

/// Power series, accurate for small arguments.
fn series(x: f64, max_order: usize) -> Vec<f64> {
    let q = 0.25 * x * x;
    let scale = (-x).exp();
    let mut lead = 1.0; // (x/2)^m / m!
    (0..=max_order)
        .map(|m| {
            if m > 0 {
                lead *= 0.5 * x / m as f64;
            }
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..60 {
                term *= q / (k as f64 * (m + k) as f64);
                sum += term;
                if term < 1e-18 * sum {
                    break;
                }
            }
            scale * lead * sum
        })
        .collect()
}

/// Backward recurrence `I_{m-1} = (2m/x) I_m + I_{m+1}`, normalized by
/// `e^{-x}(I_0 + 2 Σ_{m≥1} I_m) = 1`.
fn miller(x: f64, max_order: usize) -> Vec<f64> {
    let start = max_order + 20 + (80.0 * x).sqrt().ceil() as usize;
    let mut out = vec![0.0; max_order + 1];
    let mut above = 0.0;
    let mut cur = 1.0e-30;
    let mut sum = 0.0;
    for m in (1..=start).rev() {
        if m <= max_order {
            out[m] = cur;
        }
        sum += 2.0 * cur;
        let below = (2.0 * m as f64 / x) * cur + above;
        above = cur;
        cur = below;
        if cur > 1.0e250 {
            let s = 1.0e-250;
            cur *= s;
            above *= s;
            sum *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    out[0] = cur;
    sum += cur;
    out.iter_mut().for_each(|v| *v /= sum);
    out
}

/// Hankel expansion `e^{-x} I_m(x) ≈ (2πx)^{-1/2} Σ_k (-1)^k a_k(m) / x^k`.
pub(crate) fn asymptotic(x: f64, m: usize, terms: usize) -> f64 {
    let mu = 4.0 * (m as f64).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..terms {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
        sum += term;
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// Coefficients `c_k` of `e^{-2t} I_m(2t) = (4πt)^{-1/2} Σ_k c_k t^{-k}` as `t → ∞`.
pub(crate) fn heat_tail_coefficients(m: usize, terms: usize) -> Vec<f64> {
    let mu = 4.0 * (m as f64).powi(2);
    let mut out = Vec::with_capacity(terms);
    let mut c = 1.0;
    out.push(c);
    for k in 1..terms {
        let odd = (2 * k - 1) as f64;
        c *= -(mu - odd * odd) / (k as f64 * 16.0);
        out.push(c);
    }
    out
}
