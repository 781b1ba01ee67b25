//! Scaling a state onto the Nehari manifold and the energy identity that holds there.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use choquard::energy::{nehari_scale, PairState, Problem};
use choquard::kernel::{riesz_green, ConvolutionBackend, Convolver, KernelBackend, QuadratureSpec};
use choquard::lattice::{make_potential, LatticeBox, WellShape};
use choquard::nonlinearity::NonlinearitySpec;

fn main() -> choquard::Result<()> {
    println!("t0 for p = 2, gamma = 3, norm^p = 1, D = 16: {}", nehari_scale(1.0, 16.0, 2.0, 3.0)?);

    let lattice = LatticeBox::build(1, 16)?;
    let a = make_potential(&lattice, &WellShape::centered(1, 3))?;
    let b = make_potential(&lattice, &WellShape::centered(1, 2))?;
    let kernel = riesz_green(&lattice, 0.4, KernelBackend::Integral, &QuadratureSpec::default())?;
    let conv = Convolver::new(&lattice, kernel, ConvolutionBackend::Direct)?;
    let problem = Problem::new(lattice, a, b, 2.0, conv, NonlinearitySpec::product(2.0, 2.0)?)?;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = problem.sites();
    let state = PairState::new(
        (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
        (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
    )?;
    let lambda = 10.0;
    let before = problem.energy(lambda, &state)?;
    let (t0, projected) = problem.nehari_project(lambda, &state)?;
    let after = problem.energy(lambda, &projected)?;
    let (p, g) = (problem.p, problem.nl.gamma());
    println!("input residual {:+.6e}, t0 = {t0:.6}", before.nehari_residual);
    println!("projected residual / norm^p = {:.2e}", after.nehari_residual.abs() / after.norm_p);
    println!(
        "J = {:.12e}, (1/p - 1/(2 gamma)) norm^p = {:.12e}",
        after.j,
        (1.0 / p - 1.0 / (2.0 * g)) * after.norm_p
    );
    for t in [0.1, 0.5, 1.0, 1.5, 3.0] {
        println!("  J(t * projected) at t = {t}: {:+.6e}", problem.energy(lambda, &projected.scaled(t))?.j);
    }
    Ok(())
}
