//! The two coupling families, their growth constant and the Euler identity.

use choquard::nonlinearity::{check_growth_bound, NonlinearitySpec};

fn main() -> choquard::Result<()> {
    let specs = [
        ("product 2,2", NonlinearitySpec::product(2.0, 2.0)?),
        ("product 1.5,3", NonlinearitySpec::product(1.5, 3.0)?),
        ("power sum q=2, gamma=4.5", NonlinearitySpec::power_sum(2.0, 4.5)?),
    ];
    let samples: Vec<(f64, f64)> = (0..200)
        .map(|i| {
            let th = i as f64 * std::f64::consts::PI / 100.0;
            (th.cos() * 1.7, th.sin() * 0.9)
        })
        .collect();
    for (name, f) in &specs {
        let (u, v) = (0.8, -1.3);
        let euler = u * f.fu(u, v) + v * f.fv(u, v) - f.gamma() * f.f(u, v);
        println!(
            "{name:<26} gamma = {:<4} M_F = {:.12}  sampled max F/(|u|^g+|v|^g) = {:.12}  Euler defect {euler:e}",
            f.gamma(),
            f.m_f(),
            check_growth_bound(f, &samples)
        );
    }

    let f = &specs[0].1;
    for (n, alpha, p) in [(1, 0.4, 2.0), (1, 0.4, 6.0), (2, 0.6, 3.0)] {
        println!("N={n} alpha={alpha} p={p}: degree admissible = {}", f.check_degree(n, alpha, p).is_ok());
    }
    Ok(())
}
