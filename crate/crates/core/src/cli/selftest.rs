use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{ibp_check, p_laplacian, PairState, Problem};
use crate::kernel::{heat_kernel_1d, hls_check, riesz_green, ConvolutionBackend, Convolver, KernelBackend, QuadratureSpec};
use crate::lattice::{make_potential, LatticeBox, WellShape};
use crate::nonlinearity::NonlinearitySpec;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Break the reflection symmetry of the kernel table before testing (negative control).
    pub corrupt_kernel: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { seed: 7, corrupt_kernel: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub max_defect: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_defect <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(
                f,
                "{:<20} {}  max defect {:.3e} (tolerance {:.1e})",
                s.name,
                if s.passed() { "PASS" } else { "FAIL" },
                s.max_defect,
                s.tolerance
            )?;
        }
        Ok(())
    }
}

const DIM: usize = 1;
const RADIUS: usize = 16;
const ALPHA: f64 = 0.4;

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

fn random_field(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn euler_suite(rng: &mut ChaCha8Rng) -> Result<f64> {
    let specs = [
        NonlinearitySpec::product(2.0, 2.0)?,
        NonlinearitySpec::product(1.7, 2.6)?,
        NonlinearitySpec::power_sum(2.0, 4.5)?,
    ];
    let mut worst = 0.0f64;
    for spec in &specs {
        let g = spec.gamma();
        for _ in 0..10_000 {
            let (u, v) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let t = rng.random_range(0.1..5.0);
            let f = spec.f(u, v);
            let scale = f.abs().max(1e-300);
            worst = worst.max(rel(u * spec.fu(u, v) + v * spec.fv(u, v), g * f, g * scale));
            worst = worst.max(rel(spec.f(t * u, t * v), t.powf(g) * f, t.powf(g) * scale));
            let fu = spec.fu(u, v);
            worst = worst.max(rel(spec.fu(t * u, t * v), t.powf(g - 1.0) * fu, t.powf(g - 1.0) * fu.abs().max(1e-300)));
        }
    }
    Ok(worst)
}

fn ibp_suite(rng: &mut ChaCha8Rng, lattice: &LatticeBox) -> Result<f64> {
    let n = lattice.site_count();
    let mut worst = 0.0f64;
    for p in [2.0, 3.0, 4.0] {
        for _ in 0..100 {
            let u = random_field(rng, n);
            let phi: Vec<f64> = (0..n)
                .map(|x| if lattice.depth(x) >= 1 { rng.random_range(-1.0..1.0) } else { 0.0 })
                .collect();
            let scale: f64 = p_laplacian(lattice, &u, p).iter().zip(&phi).map(|(a, b)| (a * b).abs()).sum();
            worst = worst.max(ibp_check(lattice, &u, &phi, p)? / scale);
        }
    }
    Ok(worst)
}

fn hls_suite(rng: &mut ChaCha8Rng, conv: &Convolver) -> Result<f64> {
    let n = conv.kernel().dim() as f64;
    let r = 2.0 * n / (n + ALPHA);
    let sites = (2 * RADIUS + 1).pow(DIM as u32);
    let mut ratios = Vec::with_capacity(400);
    for _ in 0..400 {
        let (u, v) = (random_field(rng, sites), random_field(rng, sites));
        let rep = hls_check(conv, &u, &v, r, r)?;
        ratios.push(rep.bilinear_ratio.abs().max(rep.operator_ratio));
    }
    let half = ratios[..200].iter().cloned().fold(0.0, f64::max);
    let full = ratios.iter().cloned().fold(0.0, f64::max);
    if !full.is_finite() {
        return Ok(f64::INFINITY);
    }
    Ok((full - half) / half)
}

fn adjoint_suite(rng: &mut ChaCha8Rng, conv: &Convolver, sites: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (f, g) = (random_field(rng, sites), random_field(rng, sites));
        let rf = conv.apply(&f)?;
        let rg = conv.apply(&g)?;
        let a: f64 = rf.iter().zip(&g).map(|(x, y)| x * y).sum();
        let b: f64 = f.iter().zip(&rg).map(|(x, y)| x * y).sum();
        let scale: f64 = rf.iter().zip(&g).map(|(x, y)| (x * y).abs()).sum();
        worst = worst.max(rel(a, b, scale));
    }
    Ok(worst)
}

fn gradient_suite(rng: &mut ChaCha8Rng, lattice: &LatticeBox, conv: &Convolver) -> Result<f64> {
    let n = lattice.site_count();
    let a = make_potential(lattice, &WellShape::centered(DIM, 3))?;
    let b = make_potential(lattice, &WellShape::centered(DIM, 2))?;
    let mut worst = 0.0f64;
    for p in [2.0, 3.0] {
        let conv = Convolver::new(lattice, conv.kernel().clone(), conv.backend())?;
        let pr = Problem::new(lattice.clone(), a.clone(), b.clone(), p, conv, NonlinearitySpec::product(2.0, 2.0)?)?;
        let lambda = 10.0;
        for _ in 0..20 {
            let x = PairState::new(random_field(rng, n), random_field(rng, n))?;
            let d = PairState::new(random_field(rng, n), random_field(rng, n))?;
            let g = pr.energy_gradient(lambda, &x)?;
            let h = 1e-6;
            let jp = pr.energy(lambda, &x.step(h, &d))?.j;
            let jm = pr.energy(lambda, &x.step(-h, &d))?.j;
            let fd = (jp - jm) / (2.0 * h);
            let exact = g.dot(&d);
            worst = worst.max(rel(fd, exact, exact.abs().max(1e-3 * g.norm2() * d.norm2())));
        }
    }
    Ok(worst)
}

fn heat_mass_suite() -> Result<f64> {
    let mut worst = 0.0f64;
    for t in [0.1, 1.0, 10.0] {
        let k = heat_kernel_1d(t, 200)?;
        let mass = k[0] + 2.0 * k[1..].iter().sum::<f64>();
        worst = worst.max((mass - 1.0).abs());
    }
    Ok(worst)
}

/// Run every invariant suite on the `N = 1`, `R = 16`, `α = 0.4` reference box.
pub fn selftest(opts: SelftestOptions) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let lattice = LatticeBox::build(DIM, RADIUS)?;
    let mut kernel = riesz_green(&lattice, ALPHA, KernelBackend::Integral, &QuadratureSpec::default())?;
    if opts.corrupt_kernel {
        let idx = kernel.lag_index(&[1]).expect("lag 1 is in the table");
        kernel.table_mut()[idx] *= 1.5;
    }
    let conv = Convolver::new(&lattice, kernel, ConvolutionBackend::Direct)?;
    let sites = lattice.site_count();

    let suites = vec![
        SuiteResult { name: "euler_identity", max_defect: euler_suite(&mut rng)?, tolerance: 1e-10 },
        SuiteResult { name: "integration_by_parts", max_defect: ibp_suite(&mut rng, &lattice)?, tolerance: 1e-11 },
        SuiteResult { name: "hls_ratio", max_defect: hls_suite(&mut rng, &conv)?, tolerance: 0.1 },
        SuiteResult { name: "self_adjointness", max_defect: adjoint_suite(&mut rng, &conv, sites)?, tolerance: 1e-12 },
        SuiteResult { name: "gradient_fd", max_defect: gradient_suite(&mut rng, &lattice, &conv)?, tolerance: 1e-5 },
        SuiteResult { name: "heat_kernel_mass", max_defect: heat_mass_suite()?, tolerance: 1e-10 },
    ];
    Ok(SelftestReport { suites })
}
