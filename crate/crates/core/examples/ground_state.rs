//! Multi-start ground state of the full system at one value of lambda.

use choquard::energy::Problem;
use choquard::kernel::{riesz_green, ConvolutionBackend, Convolver, KernelBackend, QuadratureSpec};
use choquard::lattice::{make_potential, LatticeBox, WellShape};
use choquard::nonlinearity::NonlinearitySpec;
use choquard::solver::{solve_ground_state, SolverConfig};

fn main() -> choquard::Result<()> {
    env_logger::init();
    let lambda: f64 = std::env::args().nth(1).map(|s| s.parse().expect("lambda")).unwrap_or(100.0);

    let lattice = LatticeBox::build(1, 16)?;
    let a = make_potential(&lattice, &WellShape::centered(1, 3))?;
    let b = make_potential(&lattice, &WellShape::centered(1, 2))?;
    let kernel = riesz_green(&lattice, 0.4, KernelBackend::Integral, &QuadratureSpec::default())?;
    let conv = Convolver::new(&lattice, kernel, ConvolutionBackend::Direct)?;
    let problem = Problem::new(lattice, a, b, 2.0, conv, NonlinearitySpec::product(2.0, 2.0)?)?;

    let rep = solve_ground_state(&problem, lambda, &SolverConfig::default())?;
    println!("lambda = {lambda}");
    println!("m = {:.12e}  (restart {} of {})", rep.m, rep.restart_index, rep.restarts.len());
    println!(
        "relative Nehari residual {:.2e}, relative gradient {:.2e}, identity defect {:.2e}, {} iterations",
        rep.relative_nehari_residual(),
        rep.grad_norm,
        rep.identity_defect / rep.norm_p,
        rep.iterations
    );
    let spread = rep.restarts.iter().map(|r| r.energy).fold(f64::NEG_INFINITY, f64::max) - rep.m;
    println!("spread of restart energies: {spread:.2e}");
    println!("tail mass outside the wells: {:.6e}", problem.tail_mass(&rep.state));
    println!("   x          u                  v");
    for i in 0..problem.sites() {
        println!("{:>4}  {:+.12e}  {:+.12e}", problem.lattice.coords(i)[0], rep.state.u[i], rep.state.v[i]);
    }
    Ok(())
}
