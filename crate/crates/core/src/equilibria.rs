//! Hermite zeros and the equilibrium catalog of the new model.
//!
//! The coefficient system is at rest when its coefficients are the zeros of
//! the Hermite polynomial `H_N` (or `i` times them). Every ordering of such a
//! set, read as the coefficients of a monic polynomial, yields an equilibrium
//! configuration of the particles as that polynomial's roots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CatalogEntry, EquilibriumCatalog, EquilibriumFamily, MonicPolynomial, C64};
use crate::oracle::{rhs_calogero, rhs_newgold};
use crate::roots::{multiset_distance, roots_of_monic};
use crate::symmetry::horner_with_derivative;

/// Entries closer than this (as multisets) are the same configuration.
pub const DEDUP_TOL: f64 = 1e-8;
/// Largest admissible `‖rhs(ẑ, 0)‖_∞` for a catalog entry.
pub const CERTIFY_TOL: f64 = 1e-6;

/// `(H_n(x), H_n'(x))` from the three-term recurrence.
pub fn hermite_eval(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    // H_n' = 2n H_{n−1}
    (cur, 2.0 * n as f64 * prev)
}

/// Coefficients of `H_n`, constant term first.
pub fn hermite_coefficients(n: usize) -> Vec<f64> {
    let mut prev = vec![0.0; n + 1];
    let mut cur = vec![0.0; n + 1];
    cur[0] = 1.0;
    for k in 0..n {
        let mut next = vec![0.0; n + 1];
        for j in 0..n {
            next[j + 1] += 2.0 * cur[j];
        }
        for j in 0..=n {
            next[j] -= 2.0 * k as f64 * prev[j];
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e` (`e[0]` unused), by implicit QL with Wilkinson shifts.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

/// The `n` real zeros of the physicists' Hermite polynomial `H_n`, ascending.
///
/// # Panics
/// If `n == 0`.
pub fn hermite_zeros(n: usize) -> Vec<f64> {
    assert!(n >= 1, "H_0 has no zeros");
    // Jacobi matrix of the recurrence x H_k = H_{k+1}/2 + k H_{k−1}
    let diag = vec![0.0; n];
    let off: Vec<f64> = (0..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut zeros = tridiagonal_eigenvalues(diag, off);
    for x in zeros.iter_mut() {
        for _ in 0..2 {
            let (h, dh) = hermite_eval(n, *x);
            if dh != 0.0 {
                *x -= h / dh;
            }
        }
    }
    zeros.sort_by(f64::total_cmp);
    // the spectrum is symmetric about zero
    for k in 0..n / 2 {
        let m = 0.5 * (zeros[n - 1 - k] - zeros[k]);
        zeros[k] = -m;
        zeros[n - 1 - k] = m;
    }
    if n % 2 == 1 {
        zeros[n / 2] = 0.0;
    }
    zeros
}

fn family_values(n: usize, family: EquilibriumFamily) -> Vec<C64> {
    let unit = match family {
        EquilibriumFamily::Real => C64::new(1.0, 0.0),
        EquilibriumFamily::Imaginary => C64::new(0.0, 1.0),
    };
    hermite_zeros(n).into_iter().map(|x| unit * x).collect()
}

fn check_omega(omega: f64) -> Result<()> {
    if omega == 1.0 {
        Ok(())
    } else {
        Err(Error::UnsupportedOmega(omega))
    }
}

/// Equilibria of the coefficient system, one unordered set per family
/// (`Real` first). Only `ω = 1` is supported.
pub fn calogero_equilibria(n: usize, omega: f64) -> Result<Vec<(EquilibriumFamily, Vec<C64>)>> {
    if n < 2 {
        return Err(Error::validation("n", "n must be ≥ 2"));
    }
    check_omega(omega)?;
    [EquilibriumFamily::Real, EquilibriumFamily::Imaginary]
        .into_iter()
        .map(|family| {
            let c = family_values(n, family);
            let residual = max_norm(&rhs_calogero(&c, omega)?);
            if residual > 1e-10 {
                return Err(Error::Uncertified { residual });
            }
            Ok((family, c))
        })
        .collect()
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// All orderings of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn polish(coeffs: &[C64], roots: &mut [C64]) {
    for z in roots.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = horner_with_derivative(coeffs, *z);
            if dp.norm() > 0.0 {
                let step = p / dp;
                if step.is_finite() {
                    *z -= step;
                }
            }
        }
    }
}

/// Configuration generated by one family and one coefficient ordering
/// (the `perm`-th in lexicographic order), before certification.
pub fn equilibrium_candidate(n: usize, family: EquilibriumFamily, perm: &[usize]) -> Result<(Vec<C64>, Vec<C64>)> {
    let values = family_values(n, family);
    let coeffs: Vec<C64> = perm.iter().map(|&k| values[k]).collect();
    let mut z = roots_of_monic(&MonicPolynomial::new(coeffs.clone()))?;
    polish(&coeffs, &mut z);
    Ok((coeffs, z))
}

/// Equilibrium configurations of the new model built from both Hermite
/// families and every coefficient ordering, deduplicated and certified.
pub fn newgold_equilibria(n: usize, omega: f64) -> Result<EquilibriumCatalog> {
    if n < 2 {
        return Err(Error::validation("n", "n must be ≥ 2"));
    }
    check_omega(omega)?;
    let orderings = permutations(n);
    let mut entries: Vec<CatalogEntry> = Vec::new();
    for family in [EquilibriumFamily::Real, EquilibriumFamily::Imaginary] {
        for (index, perm) in orderings.iter().enumerate() {
            let (_, z) = equilibrium_candidate(n, family, perm)?;
            if entries
                .iter()
                .any(|e| multiset_distance(&e.configuration, &z) <= DEDUP_TOL)
            {
                continue;
            }
            let residual = max_norm(&rhs_newgold(&z, &vec![C64::new(0.0, 0.0); n], omega)?);
            if !(residual <= CERTIFY_TOL) {
                return Err(Error::Uncertified { residual });
            }
            entries.push(CatalogEntry {
                configuration: z,
                family,
                permutation_index: index,
                residual,
            });
        }
    }
    Ok(EquilibriumCatalog { entries })
}

#[derive(Serialize, Deserialize)]
struct WireEntry {
    family: EquilibriumFamily,
    perm: usize,
    z: Vec<[f64; 2]>,
    residual: f64,
}

/// Serializes a catalog as a JSON list of `{family, perm, z, residual}`.
pub fn catalog_to_json(catalog: &EquilibriumCatalog) -> String {
    let wire: Vec<WireEntry> = catalog
        .entries
        .iter()
        .map(|e| WireEntry {
            family: e.family,
            perm: e.permutation_index,
            z: e.configuration.iter().map(|z| [z.re, z.im]).collect(),
            residual: e.residual,
        })
        .collect();
    serde_json::to_string_pretty(&wire).expect("catalog serializes")
}

pub fn catalog_from_json(text: &str) -> Result<EquilibriumCatalog> {
    let wire: Vec<WireEntry> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let entries = wire
        .into_iter()
        .map(|w| CatalogEntry {
            configuration: w.z.iter().map(|p| C64::new(p[0], p[1])).collect(),
            family: w.family,
            permutation_index: w.perm,
            residual: w.residual,
        })
        .collect();
    Ok(EquilibriumCatalog { entries })
}
