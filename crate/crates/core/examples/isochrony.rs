//! Periodicity of the new model.
//!
//! The coefficients always return after one period, but possibly permuted;
//! the positions then come back only after a few periods. This prints, for a
//! handful of random starts, how many periods each needs.

use goldfish::spectral::closure_analysis;
use goldfish::{coeffs_from_roots, SystemConfig, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> goldfish::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    println!(
        "{:>3}  {:>10}  {:>12}  {:>12}  {:>7}  {:>10}",
        "#", "z(T)~z(0)", "coeff perm", "pos perm", "periods", "error"
    );
    let mut found = 0;
    while found < 10 {
        let z: Vec<C64> = (0..3)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let v: Vec<C64> = (0..3)
            .map(|_| C64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)))
            .collect();
        let sep = |w: &[C64]| (0..3).all(|i| (i + 1..3).all(|j| (w[i] - w[j]).norm() > 0.2));
        if !sep(&z) || !sep(&coeffs_from_roots(&z)) {
            continue;
        }
        let cfg = SystemConfig::new(1.0, z, v)?;
        let cl = match closure_analysis(&cfg, 500) {
            Ok(cl) => cl,
            // rare near-collisions; skip rather than shrink the step
            Err(e) if e.is_numerical() => continue,
            Err(e) => return Err(e),
        };
        found += 1;
        println!(
            "{found:>3}  {:>10.2e}  {:>12}  {:>12}  {:>7}  {:>10.2e}",
            cl.multiset_at_period,
            format!("{:?}", cl.coefficient_permutation.as_slice()),
            format!("{:?}", cl.position_permutation.as_slice()),
            cl.periods,
            cl.labeled_error
        );
    }
    Ok(())
}
