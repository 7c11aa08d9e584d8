use foliation_core::flow::FlowModel;
use foliation_core::groupoid::{BaseFn, GroupoidKernel, TGrid, XGrid};
use num_complex::Complex64;
use proptest::prelude::*;

#[derive(Debug, Clone, Copy)]
struct Blob {
    amp: (f64, f64),
    center: (f64, f64),
    decay: (f64, f64),
}

/// Overlapping blobs, so that products are not dominated by tails.
fn blob() -> impl Strategy<Value = Blob> {
    ((-1.0f64..1.0, -1.0f64..1.0), (-0.5f64..0.5, -0.3f64..0.3), (3.0f64..6.0, 12.0f64..20.0))
        .prop_map(|(amp, center, decay)| Blob { amp, center, decay })
}

/// Blobs whose orbits stay inside the x window for every `t` where they are
/// not negligible, so that the adjoint does not lose mass at the edges.
fn tight_blob() -> impl Strategy<Value = Blob> {
    ((-1.0f64..1.0, -1.0f64..1.0), (-0.5f64..0.5, -0.2f64..0.2), (6.0f64..10.0, 16.0f64..24.0))
        .prop_map(|(amp, center, decay)| Blob { amp, center, decay })
}

fn kernel(flow: FlowModel, b: Blob) -> GroupoidKernel {
    let x = XGrid::symmetric(5.0, 0.02).unwrap();
    let t = TGrid::symmetric(1.8, 0.02).unwrap();
    let amp = Complex64::new(b.amp.0, b.amp.1) + 0.5;
    GroupoidKernel::from_fn(flow, x, t, |x, t| {
        amp * (-b.decay.0 * (x - b.center.0).powi(2) - b.decay.1 * (t - b.center.1).powi(2)).exp()
    })
    .unwrap()
}

fn flow(k: u32) -> FlowModel {
    FlowModel::rescaled(k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn convolution_is_associative(k in 1u32..=3, a in blob(), b in blob(), c in blob()) {
        let (f, g, h) = (kernel(flow(k), a), kernel(flow(k), b), kernel(flow(k), c));
        let left = f.convolve(&g).unwrap().convolve(&h).unwrap();
        let right = f.convolve(&g.convolve(&h).unwrap()).unwrap();
        prop_assert!(left.rel_diff(&right).unwrap() <= 1e-6);
    }

    #[test]
    fn adjoint_reverses_products(k in 1u32..=3, a in tight_blob(), b in tight_blob()) {
        let (f, g) = (kernel(flow(k), a), kernel(flow(k), b));
        let lhs = f.convolve(&g).unwrap().adjoint().unwrap();
        let rhs = g.adjoint().unwrap().convolve(&f.adjoint().unwrap()).unwrap();
        prop_assert!(lhs.rel_diff(&rhs).unwrap() <= 1e-6);
        prop_assert!(f.adjoint().unwrap().adjoint().unwrap().rel_diff(&f).unwrap() <= 1e-6);
    }

    #[test]
    fn groupoid_norm_is_submultiplicative(k in 1u32..=3, a in blob(), b in blob()) {
        let (f, g) = (kernel(flow(k), a), kernel(flow(k), b));
        let fg = f.convolve(&g).unwrap();
        let bound = f.l1_groupoid_norm().unwrap() * g.l1_groupoid_norm().unwrap();
        prop_assert!(fg.l1_groupoid_norm().unwrap() <= bound * (1.0 + 1e-6));
        let bound = f.l1_as_norm().unwrap() * g.l1_as_norm().unwrap();
        prop_assert!(fg.l1_as_norm().unwrap() <= bound * (1.0 + 1e-6));
    }

    #[test]
    fn module_actions_associate(k in 1u32..=3, a in blob(), b in blob(), center in -1.0f64..1.0) {
        let (f, g) = (kernel(flow(k), a), kernel(flow(k), b));
        let fg = f.convolve(&g).unwrap();
        for w in [BaseFn::Bump { center, radius: 3.0 }, BaseFn::Power { p: 2 }] {
            let left = f.module_mult_left(&w).unwrap().convolve(&g).unwrap();
            prop_assert!(left.rel_diff(&fg.module_mult_left(&w).unwrap()).unwrap() <= 1e-6);
            let right = f.convolve(&g.module_mult_right(&w)).unwrap();
            prop_assert!(right.rel_diff(&fg.module_mult_right(&w)).unwrap() <= 1e-6);
            let left = f.module_mult_right(&w).convolve(&g).unwrap();
            let right = f.convolve(&g.module_mult_left(&w).unwrap()).unwrap();
            prop_assert!(left.rel_diff(&right).unwrap() <= 1e-6);
        }
    }

    #[test]
    fn x_times_f_is_delta_f_times_x(k in 1u32..=3, a in blob()) {
        let f = kernel(flow(k), a);
        let left = f.module_mult_left(&BaseFn::Identity).unwrap();
        let right = f.mul_by_delta().unwrap().module_mult_right(&BaseFn::Identity);
        prop_assert!(left.rel_diff(&right).unwrap() <= 1e-9);
    }
}

#[test]
fn product_kernel_norm_is_sup_times_l1() {
    let x = XGrid::symmetric(5.0, 0.02).unwrap();
    let t = TGrid::symmetric(1.8, 0.02).unwrap();
    let f = GroupoidKernel::from_real_fn(flow(2), x, t, |x, t| (-8.0 * x * x).exp() * (-16.0 * t * t).exp()).unwrap();
    let expected = (std::f64::consts::PI / 16.0).sqrt();
    let norm = f.l1_groupoid_norm().unwrap();
    assert!((norm - expected).abs() <= 1e-7 * expected, "{norm} vs {expected}");
    let scaled = f.scale(Complex64::new(0.0, 2.0));
    assert!((scaled.l1_groupoid_norm().unwrap() - 2.0 * norm).abs() <= 1e-12 * norm);
}

#[test]
fn kernel_record_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.bin");
    let f = kernel(flow(2).reversed(), Blob { amp: (0.3, -0.2), center: (0.5, 0.1), decay: (5.0, 15.0) });
    f.write_binary(std::fs::File::create(&path).unwrap()).unwrap();
    let back = GroupoidKernel::read_binary(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back, f);
}
