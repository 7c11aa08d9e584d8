use foliation_core::coeff_ring::{ConvolutionMethod, GaussPolyFn, GridFn};
use foliation_core::poly::Poly;
use foliation_core::random::{gauss_poly, seeded};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: &GaussPolyFn, b: &GaussPolyFn) -> f64 {
    let scale = a.sup_norm().max(b.sup_norm()).max(1e-300);
    a.sub(b).sup_norm() / scale
}

fn triple(seed: u64) -> [GaussPolyFn; 3] {
    let mut rng = seeded(seed);
    [gauss_poly(&mut rng), gauss_poly(&mut rng), gauss_poly(&mut rng)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_convolution_is_commutative_and_associative(seed in any::<u64>()) {
        let [f, g, h] = triple(seed);
        prop_assert!(rel(&f.convolve(&g), &g.convolve(&f)) <= 1e-12);
        prop_assert!(rel(&f.convolve(&g).convolve(&h), &f.convolve(&g.convolve(&h))) <= 1e-12);
    }

    #[test]
    fn t_is_a_derivation(seed in any::<u64>()) {
        let [f, g, _] = triple(seed);
        let lhs = f.convolve(&g).mul_by_t();
        let rhs = f.mul_by_t().convolve(&g).add(&f.convolve(&g.mul_by_t()));
        prop_assert!(rel(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn exponential_weight_is_an_automorphism(seed in any::<u64>(), c in -1.5f64..1.5) {
        let [f, g, _] = triple(seed);
        let lhs = f.convolve(&g).mul_by_exp(c);
        let rhs = f.mul_by_exp(c).convolve(&g.mul_by_exp(c));
        prop_assert!(rel(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn mul_by_poly_is_pointwise(seed in any::<u64>(), a in -1.0f64..1.0, b in -1.0f64..1.0, t in -3.0f64..3.0) {
        let [f, _, _] = triple(seed);
        let p = Poly::new(vec![a, b, 0.5]);
        let lhs = f.mul_by_poly(&p).eval(t);
        let rhs = p.eval(t) * f.eval(t);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }
}

fn sampled(f: &GaussPolyFn, radius: f64, step: f64) -> GridFn {
    let count = (2.0 * radius / step).round() as usize + 1;
    let values = f.sample(-radius, step, count).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    GridFn::new(-radius, step, values).unwrap()
}

#[test]
fn grid_convolution_matches_exact() {
    for seed in 0..4 {
        let [f, g, _] = triple(seed);
        let exact = f.convolve(&g);
        let (step, radius) = (0.01, 16.0);
        for method in [ConvolutionMethod::Direct, ConvolutionMethod::Fft] {
            let fg = sampled(&f, radius, step).convolve_with(&sampled(&g, radius, step), method).unwrap();
            let err = (0..fg.len())
                .map(|i| (fg.samples()[i].re - exact.eval(fg.t_at(i))).abs())
                .fold(0.0, f64::max);
            assert!(err <= 1e-6, "seed {seed} {method:?}: {err:e}");
        }
    }
}

#[test]
fn grid_convolution_is_associative() {
    let [f, g, h] = triple(21);
    let (step, radius) = (0.01, 16.0);
    let (f, g, h) = (sampled(&f, radius, step), sampled(&g, radius, step), sampled(&h, radius, step));
    let left = f.convolve(&g).unwrap().convolve(&h).unwrap();
    let right = f.convolve(&g.convolve(&h).unwrap()).unwrap();
    let scale = left.sup_norm().max(right.sup_norm());
    assert!(left.distance(&right) / scale <= 1e-8);
}

#[test]
fn binary_record_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.bin");
    let f = sampled(&GaussPolyFn::standard_gaussian(), 9.0, 0.05);
    f.write_binary(std::fs::File::create(&path).unwrap()).unwrap();
    let back = GridFn::read_binary(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back, f);
}
