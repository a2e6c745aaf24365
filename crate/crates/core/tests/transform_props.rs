use approx::assert_relative_eq;
use olct_core::gen::fixtures::random_smooth;
use olct_core::*;
use proptest::prelude::*;

fn unimodular() -> impl Strategy<Value = OlctParams> {
    (0.3f64..2.0, 0.3f64..2.0, any::<bool>(), -2.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(
        |(a, b, neg, c, u0, w0)| {
            let b = if neg { -b } else { b };
            let d = (1.0 + b * c) / a;
            OlctParams::new(a, b, c, d, u0, w0).unwrap()
        },
    )
}

fn grid() -> Grid {
    Grid::centered(1.0 / 8.0, 256).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fast_matches_direct(p in unimodular(), seed in 0u64..1000) {
        let f = random_smooth(seed, grid());
        let fast = olct_fast(&p, &f).unwrap();
        let direct = olct_direct(&p, &f, &fast.grid()).unwrap();
        let cmp = compare(fast.samples(), direct.samples(), 0.0);
        prop_assert!(cmp.rel_err <= 1e-9, "rel err {}", cmp.rel_err);
    }

    #[test]
    fn parseval_holds(p in unimodular(), seed in 0u64..1000) {
        // resolve the spectrum of a signal living in |x| <= 10 with frequencies |k| <= 9
        let reach = 10.0 * p.a().abs() + 9.0 * p.b().abs();
        let dx = (std::f64::consts::PI * p.b().abs() / reach).min(1.0 / 8.0);
        let n = ((32.0 / dx).ceil() as usize).next_power_of_two();
        let f = random_smooth(seed, Grid::centered(32.0 / n as f64, n).unwrap());
        let spec = olct_fast(&p, &f).unwrap();
        prop_assert!((spec.norm_sq() - f.norm_sq()).abs() <= 1e-6 * f.norm_sq());
    }

    #[test]
    fn fast_path_is_linear(p in unimodular(), s1 in 0u64..1000, s2 in 0u64..1000, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let f = random_smooth(s1, grid());
        let g = random_smooth(s2, grid());
        let k = Complex64::new(re, im);
        let lhs = olct_fast(&p, &f.add(&g.scaled(k)).unwrap()).unwrap();
        let ff = olct_fast(&p, &f).unwrap();
        let gg = olct_fast(&p, &g).unwrap();
        let rhs: Vec<Complex64> = ff.samples().iter().zip(gg.samples()).map(|(a, b)| a + k * b).collect();
        prop_assert!(relative_l2(lhs.samples(), &rhs) < 1e-12);
    }

    #[test]
    fn params_text_round_trip(p in unimodular()) {
        let q: OlctParams = p.to_string().parse().unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn non_unimodular_rejected(a in 0.3f64..2.0, b in 0.3f64..2.0, c in -2.0f64..2.0, eps in 1e-6f64..1.0) {
        let d = (1.0 + b * c) / a + eps;
        let rejected = matches!(OlctParams::new(a, b, c, d, 0.0, 0.0), Err(OlctError::UnimodularityViolation { .. }));
        prop_assert!(rejected);
    }
}

#[test]
fn round_trip_on_gaussians() {
    let p = OlctParams::new(1.0, 1.0, 1.0, 2.0, 1.0, 0.0).unwrap();
    let f = olct_core::suite::gaussian_fixture(0.0);
    let back = olct_inverse(&olct_fast(&p, &f).unwrap()).unwrap();
    assert!(relative_l2(&back.samples()[..f.len()], f.samples()) <= 1e-8);
}

#[test]
fn identity_params_return_input() {
    let p = OlctParams::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
    let f = random_smooth(7, grid());
    let out = olct_b_zero(&p, &f).unwrap();
    assert_eq!(out.x_start(), f.x_start());
    for (a, b) in out.samples().iter().zip(f.samples()) {
        assert_relative_eq!(a.re, b.re, epsilon = 1e-14);
        assert_relative_eq!(a.im, b.im, epsilon = 1e-14);
    }
}

#[test]
fn large_transform_is_fast() {
    let grid = Grid::centered(1.0 / 1024.0, 1 << 20).unwrap();
    let f = SampledSignal::from_fn(grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0));
    let p = OlctParams::new(1.0, 1.0, 1.0, 2.0, 1.0, 0.0).unwrap();
    let t = std::time::Instant::now();
    let spec = olct_fast(&p, &f).unwrap();
    assert!(t.elapsed().as_secs_f64() < 10.0);
    assert!((spec.norm_sq() - f.norm_sq()).abs() < 1e-6 * f.norm_sq());
}
