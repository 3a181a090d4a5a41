//! Shared inputs for the benchmarks.

use metaplectic_core::fixtures;
use metaplectic_core::global::GlobalParameter;
use metaplectic_core::parameters::{enumerate_parameters, Restriction};
use metaplectic_core::{ArthurParameter, Catalog, Summand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Good-parity parameters over F1 with the given `n`.
pub fn good_parity(n: u32) -> Vec<ArthurParameter> {
    enumerate_parameters(&fixtures::f1(), n, Restriction::GoodParity).expect("F1 enumerates")
}

/// The parameter over F1 with the most splittings at this `n`.
pub fn widest(n: u32) -> ArthurParameter {
    good_parity(n)
        .into_iter()
        .max_by_key(|p| p.summands().iter().map(|s| s.mult + 1).product::<u32>())
        .expect("nonempty")
}

/// Random global fixtures, reproducible from `seed`.
pub fn global_fixtures(count: usize, seed: u64) -> Vec<(Catalog, GlobalParameter, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let fx = fixtures::random_global_fixture(&mut rng);
            let gp = GlobalParameter::new(&fx.catalog, fx.summands.clone()).expect("fixtures are consistent");
            (fx.catalog, gp, fx.places)
        })
        .collect()
}

/// The auxiliary three-place fixture with its places.
pub fn aux() -> (Catalog, GlobalParameter, Vec<String>) {
    let cat = fixtures::aux_global();
    let summands = fixtures::AUX_PARAMETER.iter().map(|(c, b, m)| Summand::new(*c, *b, *m)).collect();
    let gp = GlobalParameter::new(&cat, summands).expect("aux fixture is consistent");
    let places = cat.places().map(|p| p.id.clone()).collect();
    (cat, gp, places)
}
