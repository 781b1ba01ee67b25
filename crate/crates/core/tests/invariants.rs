mod common;

use common::{problem_1d, random_field, rel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use choquard::energy::{ibp_check, p_laplacian, PairState};
use choquard::kernel::{convolve, heat_kernel, riesz_green, ConvolutionBackend, Convolver, KernelBackend, QuadratureSpec};
use choquard::lattice::LatticeBox;

fn state_strategy(n: usize) -> impl Strategy<Value = PairState> {
    (prop::collection::vec(-2.0f64..2.0, n), prop::collection::vec(-2.0f64..2.0, n))
        .prop_filter("coupling must not vanish", |(u, v)| u.iter().zip(v).any(|(a, b)| a * b != 0.0))
        .prop_map(|(u, v)| PairState::new(u, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_lands_on_the_manifold(s in state_strategy(33), lambda in 0.0f64..1e4, p3 in any::<bool>()) {
        let pr = problem_1d(if p3 { 3.0 } else { 2.0 });
        let before = pr.energy(lambda, &s).unwrap();
        let (t0, q) = pr.nehari_project(lambda, &s).unwrap();
        let after = pr.energy(lambda, &q).unwrap();
        prop_assert!(after.nehari_residual.abs() <= 1e-9 * after.norm_p);
        if before.nehari_residual <= 0.0 {
            prop_assert!(t0 <= 1.0);
        }
        let g = pr.nl.gamma();
        prop_assert!(rel(after.j, (1.0 / pr.p - 1.0 / (2.0 * g)) * after.norm_p) <= 1e-10);
    }

    #[test]
    fn choquard_term_is_homogeneous(s in state_strategy(33), t in 0.05f64..20.0) {
        let pr = problem_1d(2.0);
        let d = pr.energy(1.0, &s).unwrap().choquard;
        let dt = pr.energy(1.0, &s.scaled(t)).unwrap().choquard;
        prop_assert!(rel(dt, t.powf(8.0) * d) <= 1e-10);
    }

    #[test]
    fn gradient_pairs_to_nehari_residual(s in state_strategy(33), lambda in 0.0f64..100.0) {
        let pr = problem_1d(3.0);
        let (e, g) = pr.evaluate(lambda, &s).unwrap();
        prop_assert!(rel(g.dot(&s), e.nehari_residual) <= 1e-10 * (e.norm_p / e.nehari_residual.abs()).max(1.0));
    }

    #[test]
    fn summation_by_parts(seed in any::<u64>(), p in prop::sample::select(vec![2.0, 3.0, 4.0])) {
        let l = LatticeBox::build(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_field(&mut rng, l.site_count(), 1.0);
        let mut phi = random_field(&mut rng, l.site_count(), 1.0);
        for (i, x) in phi.iter_mut().enumerate() {
            if l.depth(i) == 0 {
                *x = 0.0;
            }
        }
        let scale: f64 = p_laplacian(&l, &u, p).iter().zip(&phi).map(|(a, b)| (a * b).abs()).sum();
        prop_assert!(ibp_check(&l, &u, &phi, p).unwrap() <= 1e-11 * scale);
    }

    #[test]
    fn heat_kernel_is_symmetric_and_positive(a in -40i64..40, b in -40i64..40, t in 1e-3f64..1e3) {
        let k = heat_kernel(&[a, b], t).unwrap();
        prop_assert!(k > 0.0 || (a.abs() + b.abs()) as f64 > 30.0 * (1.0 + t));
        prop_assert_eq!(k, heat_kernel(&[-a, b], t).unwrap());
        prop_assert_eq!(k, heat_kernel(&[b, a], t).unwrap());
    }

    #[test]
    fn convolution_is_self_adjoint_and_backend_independent(seed in any::<u64>()) {
        let l = LatticeBox::build(2, 5).unwrap();
        let k = riesz_green(&l, 0.4, KernelBackend::Integral, &QuadratureSpec::default()).unwrap();
        let fft = Convolver::new(&l, k.clone(), ConvolutionBackend::Fft).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&mut rng, l.site_count(), 1.0);
        let g = random_field(&mut rng, l.site_count(), 1.0);
        let rf = convolve(&l, &k, &f).unwrap();
        let rg = convolve(&l, &k, &g).unwrap();
        let a: f64 = rf.iter().zip(&g).map(|(x, y)| x * y).sum();
        let b: f64 = f.iter().zip(&rg).map(|(x, y)| x * y).sum();
        let scale: f64 = rf.iter().zip(&g).map(|(x, y)| (x * y).abs()).sum();
        prop_assert!((a - b).abs() <= 1e-12 * scale);
        let ff = fft.apply(&f).unwrap();
        let top = rf.iter().map(|x| x.abs()).fold(0.0, f64::max);
        prop_assert!(rf.iter().zip(&ff).all(|(x, y)| (x - y).abs() <= 1e-12 * top));
    }
}

#[test]
fn p_laplacian_at_two_is_the_graph_laplacian() {
    let l = LatticeBox::build(2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_field(&mut rng, l.site_count(), 1.0);
    let lap = p_laplacian(&l, &u, 2.0);
    for x in 0..l.site_count() {
        let want: f64 = l.neighbors(x).iter().map(|y| y.map_or(0.0, |y| u[y])).sum::<f64>() - 4.0 * u[x];
        assert!((lap[x] - want).abs() <= 1e-15);
    }
}
