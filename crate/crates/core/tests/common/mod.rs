#![allow(dead_code)]

use rand::Rng;

use choquard::energy::{PairState, Problem};
use choquard::kernel::{riesz_green, ConvolutionBackend, Convolver, KernelBackend, QuadratureSpec};
use choquard::lattice::{make_potential, LatticeBox, WellShape};
use choquard::nonlinearity::NonlinearitySpec;

pub const ALPHA: f64 = 0.4;

/// `N = 1`, `R = 16`, wells `[-3, 3]` and `[-2, 2]`, product coupling `γ₁ = γ₂ = 2`.
pub fn problem_1d(p: f64) -> Problem {
    let lattice = LatticeBox::build(1, 16).unwrap();
    let a = make_potential(&lattice, &WellShape::centered(1, 3)).unwrap();
    let b = make_potential(&lattice, &WellShape::centered(1, 2)).unwrap();
    let kernel = riesz_green(&lattice, ALPHA, KernelBackend::Integral, &QuadratureSpec::default()).unwrap();
    let conv = Convolver::new(&lattice, kernel, ConvolutionBackend::Direct).unwrap();
    Problem::new(lattice, a, b, p, conv, NonlinearitySpec::product(2.0, 2.0).unwrap()).unwrap()
}

/// `N = 2`, `R = 8`, overlapping square wells of radius 2 centered at the origin and at `(1, 0)`.
pub fn problem_2d(p: f64) -> Problem {
    let lattice = LatticeBox::build(2, 8).unwrap();
    let a = make_potential(&lattice, &WellShape::centered(2, 2)).unwrap();
    let b = make_potential(&lattice, &WellShape { center: vec![1, 0], radius: 2, exponent: 2.0, amplitude: 1.0 }).unwrap();
    let kernel = riesz_green(&lattice, ALPHA, KernelBackend::Integral, &QuadratureSpec::default()).unwrap();
    let conv = Convolver::new(&lattice, kernel, ConvolutionBackend::Fft).unwrap();
    Problem::new(lattice, a, b, p, conv, NonlinearitySpec::product(2.0, 2.0).unwrap()).unwrap()
}

pub fn random_field(rng: &mut impl Rng, n: usize, amp: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-amp..amp)).collect()
}

pub fn random_state(rng: &mut impl Rng, n: usize, amp: f64) -> PairState {
    PairState::new(random_field(rng, n, amp), random_field(rng, n, amp)).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
pub mod oracle;
