//! Convolution with the Riesz kernel (direct and FFT) and the HLS ratios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use choquard::kernel::{hls_check, riesz_green, ConvolutionBackend, Convolver, KernelBackend, QuadratureSpec};
use choquard::lattice::LatticeBox;

fn main() -> choquard::Result<()> {
    let (dim, alpha) = (2, 0.4);
    let lattice = LatticeBox::build(dim, 8)?;
    let kernel = riesz_green(&lattice, alpha, KernelBackend::Integral, &QuadratureSpec::default())?;
    let direct = Convolver::new(&lattice, kernel.clone(), ConvolutionBackend::Direct)?;
    let fft = Convolver::new(&lattice, kernel, ConvolutionBackend::Fft)?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = lattice.site_count();
    let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let a = direct.apply(&f)?;
    let b = fft.apply(&f)?;
    let diff = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
    println!("direct vs FFT on {n} sites: max relative difference {:.2e}", diff / scale);

    let r = 2.0 * dim as f64 / (dim as f64 + alpha);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let rep = hls_check(&fft, &u, &v, r, r)?;
        worst = worst.max(rep.bilinear_ratio.abs());
    }
    let delta: Vec<f64> = (0..n).map(|i| if i == n / 2 { 1.0 } else { 0.0 }).collect();
    let peak = hls_check(&fft, &delta, &delta, r, r)?;
    println!("r = s = {r:.4}: max bilinear ratio over 200 random pairs {worst:.6}, at a point mass {:.6}", peak.bilinear_ratio);
    Ok(())
}
