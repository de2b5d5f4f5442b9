//! The dictionary between roots and coefficients of a monic polynomial.
//!
//! `c_m = (-1)^m e_m(z)` where `e_m` is the m-th elementary symmetric
//! function. Both maps below run the product `Π (z - z_n)` one factor at a
//! time instead of summing over subsets.

use crate::model::{MonicPolynomial, C64};

/// Coefficients `[c_1, …, c_N]` of `Π_n (z - z_n)`.
pub fn coeffs_from_roots(z: &[C64]) -> Vec<C64> {
    let n = z.len();
    // a[k] is the coefficient of z^(deg - k); a[0] = 1 throughout.
    let mut a = vec![C64::new(0.0, 0.0); n + 1];
    a[0] = C64::new(1.0, 0.0);
    for (deg, &root) in z.iter().enumerate() {
        for k in (1..=deg + 1).rev() {
            a[k] = a[k] - root * a[k - 1];
        }
    }
    a.split_off(1)
}

/// Time derivatives `ċ_m` of the coefficients when the roots move with velocities `v`.
///
/// # Panics
/// If `z` and `v` differ in length.
pub fn coeff_velocities(z: &[C64], v: &[C64]) -> Vec<C64> {
    assert_eq!(z.len(), v.len(), "positions and velocities differ in length");
    let n = z.len();
    let zero = C64::new(0.0, 0.0);
    let mut a = vec![zero; n + 1];
    let mut da = vec![zero; n + 1];
    a[0] = C64::new(1.0, 0.0);
    for (deg, (&root, &vel)) in z.iter().zip(v).enumerate() {
        for k in (1..=deg + 1).rev() {
            da[k] = da[k] - vel * a[k - 1] - root * da[k - 1];
            a[k] = a[k] - root * a[k - 1];
        }
    }
    da.split_off(1)
}

/// Horner evaluation of `z^N + Σ c_m z^(N-m)`.
pub fn eval_monic(p: &MonicPolynomial, z: C64) -> C64 {
    horner(p.coeffs(), z)
}

pub(crate) fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().fold(C64::new(1.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative in one Horner pass.
pub(crate) fn horner_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(1.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|z|^N + Σ |c_m| |z|^(N-m)`: the magnitude that bounds rounding error in [`horner`].
pub(crate) fn horner_magnitude(coeffs: &[C64], z: C64) -> f64 {
    let r = z.norm();
    coeffs.iter().fold(1.0, |acc, c| acc * r + c.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn double_root_coefficients() {
        assert_eq!(
            coeffs_from_roots(&[c(1.0, 0.0), c(1.0, 0.0)]),
            vec![c(-2.0, 0.0), c(1.0, 0.0)]
        );
    }

    #[test]
    fn zero_roots_give_zero_coefficients() {
        assert_eq!(coeffs_from_roots(&[c(0.0, 0.0); 3]), vec![c(0.0, 0.0); 3]);
    }

    #[test]
    fn golden_equilibrium_maps_to_hermite_ordering() {
        let z = [c(0.353553, -0.762959), c(0.353553, 0.762959)];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(&coeffs_from_roots(&z), &[c(-h, 0.0), c(h, 0.0)], 1e-5));
    }

    #[test]
    fn explicit_symmetric_functions_for_three_roots() {
        let z = [c(1.0, 2.0), c(-0.5, 0.25), c(3.0, -1.0)];
        let e1 = z[0] + z[1] + z[2];
        let e2 = z[0] * z[1] + z[0] * z[2] + z[1] * z[2];
        let e3 = z[0] * z[1] * z[2];
        assert!(close(&coeffs_from_roots(&z), &[-e1, e2, -e3], 1e-14));
    }

    #[test]
    fn velocities_vanish_without_motion() {
        let z = [c(0.3, 1.0), c(-2.0, 0.1), c(0.7, -0.4)];
        assert_eq!(coeff_velocities(&z, &[c(0.0, 0.0); 3]), vec![c(0.0, 0.0); 3]);
    }

    #[test]
    fn velocities_product_rule() {
        let v = coeff_velocities(&[c(1.0, 0.0), c(2.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(v, vec![c(-1.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn velocities_match_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rand_c = |rng: &mut ChaCha8Rng| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        for _ in 0..100 {
            let z: Vec<C64> = (0..5).map(|_| rand_c(&mut rng)).collect();
            let v: Vec<C64> = (0..5).map(|_| rand_c(&mut rng)).collect();
            let eps = 1e-6;
            let plus: Vec<C64> = z.iter().zip(&v).map(|(a, b)| a + b * eps).collect();
            let minus: Vec<C64> = z.iter().zip(&v).map(|(a, b)| a - b * eps).collect();
            let fd: Vec<C64> = coeffs_from_roots(&plus)
                .iter()
                .zip(coeffs_from_roots(&minus))
                .map(|(p, m)| (p - m) / (2.0 * eps))
                .collect();
            assert!(close(&coeff_velocities(&z, &v), &fd, 1e-7));
        }
    }

    #[test]
    fn velocities_are_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rand_c = |rng: &mut ChaCha8Rng| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let z: Vec<C64> = (0..6).map(|_| rand_c(&mut rng)).collect();
        let u: Vec<C64> = (0..6).map(|_| rand_c(&mut rng)).collect();
        let w: Vec<C64> = (0..6).map(|_| rand_c(&mut rng)).collect();
        let alpha = c(0.3, -1.2);
        let mix: Vec<C64> = u.iter().zip(&w).map(|(a, b)| a * alpha + b).collect();
        let lhs = coeff_velocities(&z, &mix);
        let rhs: Vec<C64> = coeff_velocities(&z, &u)
            .iter()
            .zip(coeff_velocities(&z, &w))
            .map(|(a, b)| a * alpha + b)
            .collect();
        assert!(close(&lhs, &rhs, 1e-13));
    }

    #[test]
    fn eval_examples() {
        let p = MonicPolynomial::new(vec![c(-2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(eval_monic(&p, c(1.0, 0.0)), c(0.0, 0.0));
        let cube = MonicPolynomial::new(vec![c(0.0, 0.0); 3]);
        assert_eq!(eval_monic(&cube, c(2.0, 0.0)), c(8.0, 0.0));
        let h = 0.5f64.sqrt();
        let eq = MonicPolynomial::new(vec![c(-h, 0.0), c(h, 0.0)]);
        assert!(eval_monic(&eq, c(0.353553, -0.762959)).norm() < 1e-5);
    }

    #[test]
    fn derivative_pass_matches_difference() {
        let coeffs = [c(0.5, 1.0), c(-2.0, 0.0), c(0.1, 0.3)];
        let z = c(0.7, -0.2);
        let (p, dp) = horner_with_derivative(&coeffs, z);
        assert!((p - horner(&coeffs, z)).norm() < 1e-15);
        let h = 1e-6;
        let fd = (horner(&coeffs, z + h) - horner(&coeffs, z - h)) / (2.0 * h);
        assert!((dp - fd).norm() < 1e-8);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn permutation_invariant(
                pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..9),
                seed in any::<u64>(),
            ) {
                use rand::seq::SliceRandom;
                let z: Vec<C64> = pts.iter().map(|&(a, b)| c(a, b)).collect();
                let mut shuffled = z.clone();
                shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                let a = coeffs_from_roots(&z);
                let b = coeffs_from_roots(&shuffled);
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((x - y).norm() <= 1e-14 * (1.0 + x.norm()));
                }
            }

            #[test]
            fn roots_annihilate_their_polynomial(
                pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..9),
            ) {
                let z: Vec<C64> = pts.iter().map(|&(a, b)| c(a, b)).collect();
                let p = MonicPolynomial::new(coeffs_from_roots(&z));
                for &r in &z {
                    prop_assert!(eval_monic(&p, r).norm() < 1e-12);
                }
            }
        }
    }
}
