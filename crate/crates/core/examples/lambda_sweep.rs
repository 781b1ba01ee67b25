//! Convergence of ground states toward the limit problem as lambda grows.

use choquard::cli::{sweep_csv, CSV_HEADER};
use choquard::energy::Problem;
use choquard::kernel::{riesz_green, ConvolutionBackend, Convolver, KernelBackend, QuadratureSpec};
use choquard::lattice::{make_potential, LatticeBox, WellShape};
use choquard::nonlinearity::NonlinearitySpec;
use choquard::solver::{lambda_sweep, SolverConfig, SweepOptions};

fn main() -> choquard::Result<()> {
    env_logger::init();
    let warm_start = std::env::args().any(|a| a == "--warm");
    let lattice = LatticeBox::build(1, 16)?;
    let a = make_potential(&lattice, &WellShape::centered(1, 3))?;
    let b = make_potential(&lattice, &WellShape::centered(1, 2))?;
    let kernel = riesz_green(&lattice, 0.4, KernelBackend::Integral, &QuadratureSpec::default())?;
    let conv = Convolver::new(&lattice, kernel, ConvolutionBackend::Direct)?;
    let problem = Problem::new(lattice, a, b, 2.0, conv, NonlinearitySpec::product(2.0, 2.0)?)?;

    let lambdas = [1.0, 10.0, 100.0, 1000.0, 10000.0];
    let table = lambda_sweep(&problem, &lambdas, &SolverConfig::default(), SweepOptions { warm_start })?;
    println!("m_Omega = {:.12e}", table.limit.m);
    println!("{:>8} {:>20} {:>14} {:>14}", "lambda", "m_lambda", "tail_mass", "dist_to_limit");
    for r in &table.rows {
        println!("{:>8} {:>20.12e} {:>14.6e} {:>14.6e}", r.lambda, r.m_lambda, r.tail_mass, r.dist_to_limit);
    }
    println!("{:?}", table.checks);
    let first = &table.rows[0];
    let last = table.rows.last().unwrap();
    println!("T(last)/T(first) = {:.3e}", last.tail_mass / first.tail_mass);
    println!("|m_last - m_Omega| / m_Omega = {:.3e}", (last.m_lambda - table.limit.m).abs() / table.limit.m);
    println!("\nCSV ({CSV_HEADER}):\n{}", sweep_csv(&table));
    Ok(())
}
