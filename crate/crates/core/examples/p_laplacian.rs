//! Discrete p-Laplacian, gradient energy and summation by parts on a box.

use choquard::energy::{grad_pnorm, ibp_check, p_laplacian, w1p_norm_p};
use choquard::lattice::LatticeBox;

fn main() -> choquard::Result<()> {
    let lattice = LatticeBox::build(1, 5)?;
    let u: Vec<f64> = (0..lattice.site_count()).map(|i| (-0.3 * (i as f64 - 5.0).powi(2)).exp()).collect();
    let phi: Vec<f64> =
        (0..lattice.site_count()).map(|i| if lattice.depth(i) >= 1 { (i as f64).sin() } else { 0.0 }).collect();

    for p in [2.0, 3.0, 4.0] {
        let lap = p_laplacian(&lattice, &u, p);
        println!(
            "p = {p}: Δ_p u(0) = {:+.6e}, ∫|∇u|^p = {:.6e}, ‖u‖_W1p^p = {:.6e}, summation-by-parts defect = {:.1e}",
            lap[5],
            grad_pnorm(&lattice, &u, p),
            w1p_norm_p(&lattice, &u, p),
            ibp_check(&lattice, &u, &phi, p)?
        );
    }

    let square = LatticeBox::build(2, 1)?;
    let center = square.index(&[0, 0]).unwrap();
    println!("2D box: center neighbors {:?}, corner degree {}", square.neighbors(center), square.degree(0));
    Ok(())
}
