//! Seeded random draws of test data.

use crate::coeff_ring::{GaussAtom, GaussPolyFn};
use crate::poly::Poly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One or two atoms of degree at most 2, coefficients in `[−1, 1]`, means in
/// `[−2, 2]` and variances in `[0.5, 2]`.
pub fn gauss_poly<R: Rng>(rng: &mut R) -> GaussPolyFn {
    let atoms = rng.gen_range(1..=2);
    GaussPolyFn::from_atoms(
        (0..atoms)
            .map(|_| {
                let degree = rng.gen_range(0..=2);
                let poly = Poly::new((0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect());
                GaussAtom::new(poly, rng.gen_range(-2.0..2.0), rng.gen_range(0.5..2.0)).expect("positive variance")
            })
            .collect(),
    )
}
