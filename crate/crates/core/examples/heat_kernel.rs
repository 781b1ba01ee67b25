//! Heat kernel of the lattice: values, mass and symmetry.

use choquard::kernel::{heat_kernel, heat_kernel_1d};

fn main() -> choquard::Result<()> {
    for t in [0.1, 1.0, 10.0, 100.0] {
        let k = heat_kernel_1d(t, 200)?;
        let mass = k[0] + 2.0 * k[1..].iter().sum::<f64>();
        println!("t = {t:>6}: k_t(0) = {:.12e}, k_t(1) = {:.12e}, |mass - 1| = {:.2e}", k[0], k[1], (mass - 1.0).abs());
    }

    // in several dimensions the kernel factorizes over the axes
    let t = 2.5;
    let k2 = heat_kernel(&[3, -1], t)?;
    let k1 = heat_kernel_1d(t, 3)?;
    println!("k_t(3,-1) = {k2:.12e}, product of axes = {:.12e}", k1[3] * k1[1]);
    println!("k_t(3,-1) - k_t(-3,1) = {:e}", k2 - heat_kernel(&[-3, 1], t)?);
    Ok(())
}
