//! Riesz kernel tables: integral and power-law backends, decay fit, binary cache.

use choquard::kernel::{cache, riesz_green, KernelBackend, QuadratureSpec};
use choquard::lattice::LatticeBox;

/// Least-squares slope of log R against log |z| along the first axis.
fn decay_exponent(k: &choquard::kernel::RieszKernel, from: i64, to: i64) -> f64 {
    let pts: Vec<(f64, f64)> = (from..=to).map(|r| ((r as f64).ln(), k.at(&[r, 0]).ln())).collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let cov: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    -cov / var
}

fn main() -> choquard::Result<()> {
    let (dim, alpha) = (2, 0.6);
    let lattice = LatticeBox::build(dim, 15)?;
    let spec = QuadratureSpec::default();

    let k = riesz_green(&lattice, alpha, KernelBackend::Integral, &spec)?;
    let q = k.quadrature().expect("integral backend reports its quadrature");
    println!("integral backend: {} nodes, T = {}, error estimate {:.2e}", q.nodes, q.t_tail, q.error_estimate);
    for r in [0, 1, 2, 5, 10, 20, 30] {
        println!("  R({r:>2}, 0) = {:.12e}", k.at(&[r, 0]));
    }
    println!(
        "fitted decay exponent on |z| in [10, 30]: {:.4} (N - alpha = {}, N - 2 alpha = {})",
        decay_exponent(&k, 10, 30),
        dim as f64 - alpha,
        dim as f64 - 2.0 * alpha
    );

    let pl = riesz_green(&lattice, alpha, KernelBackend::power_law(1.0), &spec)?;
    println!("power-law backend: decay exponent {:.4}", decay_exponent(&pl, 10, 30));

    let dir = std::env::temp_dir().join("choquard-example-cache");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("riesz_2d.bin");
    let cached = cache::load_or_build(&path, &lattice, alpha, KernelBackend::Integral, &spec)?;
    let again = cache::load_or_build(&path, &lattice, alpha, KernelBackend::Integral, &spec)?;
    println!("cache at {}: tables identical = {}", path.display(), cached.table() == again.table());
    Ok(())
}
