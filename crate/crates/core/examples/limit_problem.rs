//! Ground state of the limit problem with Dirichlet conditions outside the wells.

use choquard::energy::Problem;
use choquard::kernel::{riesz_green, ConvolutionBackend, Convolver, KernelBackend, QuadratureSpec};
use choquard::lattice::{make_potential, LatticeBox, WellShape};
use choquard::nonlinearity::NonlinearitySpec;
use choquard::solver::{solve_limit_problem, SolverConfig};

fn main() -> choquard::Result<()> {
    let lattice = LatticeBox::build(2, 8)?;
    let a = make_potential(&lattice, &WellShape { center: vec![-1, 0], radius: 2, exponent: 2.0, amplitude: 1.0 })?;
    let b = make_potential(&lattice, &WellShape { center: vec![1, 0], radius: 2, exponent: 2.0, amplitude: 1.0 })?;
    let kernel = riesz_green(&lattice, 0.4, KernelBackend::Integral, &QuadratureSpec::default())?;
    let conv = Convolver::new(&lattice, kernel, ConvolutionBackend::Fft)?;
    let problem = Problem::new(lattice, a, b, 3.0, conv, NonlinearitySpec::product(2.0, 2.0)?)?;

    let rep = solve_limit_problem(&problem, &SolverConfig { restarts: 4, ..Default::default() })?;
    let m = &problem.masks;
    let outside_u = (0..problem.sites()).filter(|&i| !m.omega_a.contains(i)).map(|i| rep.state.u[i].abs()).fold(0.0, f64::max);
    let outside_v = (0..problem.sites()).filter(|&i| !m.omega_b.contains(i)).map(|i| rep.state.v[i].abs()).fold(0.0, f64::max);
    println!("m_Omega = {:.12e} after {} iterations (converged: {})", rep.m, rep.iterations, rep.converged);
    println!("max |u| outside Omega_a = {outside_u}, max |v| outside Omega_b = {outside_v}");
    println!("|Omega_a| = {}, |boundary of Omega_a| = {}", m.omega_a.len(), m.boundary_a.len());
    println!("u on the row x_1 = 0:");
    for x in -4..=4i64 {
        let i = problem.lattice.index(&[x, 0]).unwrap();
        println!("  {x:>3}  u = {:.9e}  v = {:.9e}", rep.state.u[i], rep.state.v[i]);
    }
    Ok(())
}
