use foliation_core::coeff_ring::GaussPolyFn;
use foliation_core::flow::FlowModel;
use foliation_core::jet::{commutator_witness, random_jet, Jet, JetAlgebra};
use foliation_core::random::seeded;
use proptest::prelude::*;

fn algebra(k: u32, rescaled: bool) -> JetAlgebra {
    let m = if rescaled { FlowModel::rescaled(k) } else { FlowModel::monomial(k) };
    JetAlgebra::new(m.unwrap(), 8)
}

fn rel(a: &Jet<GaussPolyFn>, b: &Jet<GaussPolyFn>) -> f64 {
    let scale = a.sup_norm().max(b.sup_norm()).max(1e-300);
    a.sub(b).unwrap().sup_norm() / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jet_product_is_associative(seed in any::<u64>(), k in 1u32..=3, p in 0usize..=4, rescaled: bool) {
        let mut rng = seeded(seed);
        let alg = algebra(k, rescaled);
        let (f, g, h) = (random_jet(k, p, &mut rng), random_jet(k, p, &mut rng), random_jet(k, p, &mut rng));
        let left = alg.jet_mul(&alg.jet_mul(&f, &g).unwrap(), &h).unwrap();
        let right = alg.jet_mul(&f, &alg.jet_mul(&g, &h).unwrap()).unwrap();
        prop_assert!(rel(&left, &right) <= 1e-12);
    }

    #[test]
    fn truncation_is_a_homomorphism(seed in any::<u64>(), k in 1u32..=3, p in 1usize..=5, q in 0usize..5) {
        prop_assume!(q < p);
        let mut rng = seeded(seed);
        let alg = algebra(k, false);
        let (f, g) = (random_jet(k, p, &mut rng), random_jet(k, p, &mut rng));
        let full = alg.jet_mul(&f, &g).unwrap().truncate(q).unwrap();
        let cut = alg.jet_mul(&f.truncate(q).unwrap(), &g.truncate(q).unwrap()).unwrap();
        prop_assert!(rel(&full, &cut) <= 1e-12);
    }

    #[test]
    fn commutative_exactly_below_k(seed in any::<u64>(), k in 1u32..=4) {
        let mut rng = seeded(seed);
        let alg = algebra(k, false);
        let p = k as usize - 1;
        let (f, g) = (random_jet(k, p, &mut rng), random_jet(k, p, &mut rng));
        prop_assert!(alg.commutator(&f, &g).unwrap().sup_norm() <= 1e-12 * f.sup_norm() * g.sup_norm());
    }

    #[test]
    fn defining_relation_at_order_k(seed in any::<u64>(), k in 1u32..=4) {
        let mut rng = seeded(seed);
        let f = random_jet(k, k as usize, &mut rng);
        prop_assert!(algebra(k, false).relation_defect(&f).unwrap() <= 1e-12 * f.sup_norm().max(1.0));
    }

    #[test]
    fn k1_relation_iterates(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = seeded(seed);
        let alg = algebra(1, false);
        let f = random_jet(1, 5, &mut rng);
        let mut left = f.clone();
        let weighted: Vec<_> = f.coeffs().iter().map(|c| c.mul_by_exp(n as f64)).collect();
        let mut right = Jet::new(1, 5, weighted).unwrap();
        for _ in 0..n {
            left = alg.x_mult_left(&left).unwrap();
            right = alg.x_mult_right(&right).unwrap();
        }
        prop_assert!(rel(&left, &right) <= 1e-12);
        let diag = alg.table().get(n, n);
        prop_assert_eq!(diag.rate, n as f64);
    }
}

/// A jet of order `p` lives in the quotient by `x^{p+1}`; the first
/// noncommutative quotient for `k` is the one by `x^{k+1}`, i.e. order `k`.
#[test]
fn order_convention() {
    for k in 1..=4u32 {
        let alg = algebra(k, false);
        for p in 0..=5usize {
            let (f, g) = commutator_witness(k, p);
            let norm = alg.commutator(&f, &g).unwrap().sup_norm();
            if p < k as usize {
                assert!(norm <= 1e-14, "k={k} p={p}: {norm}");
            } else {
                assert!(norm > 1e-3, "k={k} p={p}: {norm}");
            }
        }
    }
}

#[test]
fn k2_witness_matches_exact_twist() {
    // At order 2 the commutator of (0, b, 0) and (c, 0, 0) is (b * t·c) x².
    let alg = algebra(2, false);
    let (f, g) = commutator_witness(2, 2);
    let c = alg.commutator(&f, &g).unwrap();
    let b = GaussPolyFn::standard_gaussian();
    let expected = b.convolve(&b.mul_by_t()).sup_norm();
    assert!((c.coeff(2).sup_norm() - expected).abs() <= 1e-12 * expected);
    assert!(c.coeff(0).sup_norm() <= 1e-14 && c.coeff(1).sup_norm() <= 1e-14);
}
