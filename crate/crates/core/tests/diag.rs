//! Temporary diagnostics (removed before release).

use hardylab::identities::{evaluate_hardy_stratified, WeightParams};
use hardylab::quadrature::QuadratureSpec;
use hardylab::spaces::{CylindricalSpace, GroupStructure, NormKind};
use hardylab::testfns;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[test]
#[ignore]
fn diag_stratified() {
    let g = GroupStructure::heisenberg(NormKind::Koranyi).unwrap();
    let space = CylindricalSpace::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [2.0f64, 3.0] {
        for i in 0..2 {
            let f = testfns::random_cylindrical(&space, None, &mut rng);
            println!("==== p={p} i={i}: {}", f.label());
            let params = WeightParams::hardy(p, 1.0);
            let t0 = Instant::now();
            match evaluate_hardy_stratified(&g, &params, &f, &QuadratureSpec::default()) {
                Ok(r) => println!("  ok {:?} rel_res {:.2e}", t0.elapsed(), r.rel_residual),
                Err(e) => println!("  err {:?}: {e}", t0.elapsed()),
            }
        }
    }
}
