//! Built-in invariant suites, plus the negative control with a corrupted kernel table.

use choquard::cli::{selftest, SelftestOptions};

fn main() -> choquard::Result<()> {
    let rep = selftest(SelftestOptions::default())?;
    print!("{rep}");
    println!("all passed: {}\n", rep.passed());

    let broken = selftest(SelftestOptions { corrupt_kernel: true, ..Default::default() })?;
    println!("with an asymmetric kernel table:");
    print!("{broken}");
    Ok(())
}
