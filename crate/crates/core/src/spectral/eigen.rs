//! Dense complex eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form, then single-shift QR with Wilkinson shifts.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::model::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    /// Builds a matrix from rows; `None` if the rows do not form a square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(ComplexMatrix { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|k| self[(k, k)]).collect()
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, a: C64) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|x| a * x).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn linear_combination(&self, a: C64, other: &ComplexMatrix, b: C64) -> ComplexMatrix {
        assert_eq!(self.n, other.n);
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &ComplexMatrix) -> ComplexMatrix {
        self.mul(other).linear_combination(ONE, &other.mul(self), -ONE)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity by powers of two so row and column norms are comparable.
fn balance(a: &mut ComplexMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.n;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// In-place reduction to upper Hessenberg form by Householder reflectors.
fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.n;
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let len = n - k - 1;
        let mut v: Vec<C64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 { ONE } else { v[0] / v[0].norm() };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // A <- (I - 2vv*) A
        for j in k..n {
            let s: C64 = (0..len).map(|i| v[i].conj() * a[(k + 1 + i, j)]).sum();
            for i in 0..len {
                a[(k + 1 + i, j)] -= 2.0 * v[i] * s;
            }
        }
        // A <- A (I - 2vv*)
        for i in 0..n {
            let s: C64 = (0..len).map(|j| a[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..len {
                a[(i, k + 1 + j)] -= 2.0 * s * v[j].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a square complex matrix, with algebraic multiplicity.
///
/// Fails after `30 * N` QR sweeps without full deflation.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix entries"));
    }
    let n = m.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = m.clone();
    balance(&mut h);
    hessenberg(&mut h);

    let norm = h.frobenius_norm();
    let mut eig = vec![ZERO; n];
    if norm == 0.0 {
        return Ok(eig);
    }
    let budget = 30 * n;
    let mut sweeps = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * local || sub <= 1e-14 * norm {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        sweeps += 1;
        since_deflation += 1;
        if sweeps > budget {
            return Err(Error::EigenNotConverged { sweeps: budget });
        }
        let mu = if since_deflation % 10 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(0.75, 0.5) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok(eig)
}

/// One explicitly shifted QR step `H - μ = QR, H <- RQ + μ` on rows/cols `lo..=hi`.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: C64) {
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (a / r, b / r) };
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c.conj() * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let last = (k + 2).min(hi);
        for i in lo..=last {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s;
            h[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

/// LU factorization with partial pivoting: `P A = L U`, packed.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    pivots: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Self {
        let n = a.n;
        let mut lu = a.clone();
        let mut pivots: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                pivots.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            if pivot == ZERO {
                continue;
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Lu { lu, pivots, swaps }
    }

    pub fn determinant(&self) -> C64 {
        let d: C64 = self.lu.diagonal().into_iter().product();
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Solves `A x = b`; zero pivots are replaced by `floor` so the
    /// solve stays finite (used by inverse iteration).
    pub fn solve(&self, b: &[C64], floor: f64) -> Vec<C64> {
        let n = self.lu.n;
        let mut x: Vec<C64> = self.pivots.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                x[i] = x[i] - u * x[j];
            }
            let mut d = self.lu[(i, i)];
            if d.norm() < floor {
                d = C64::new(floor, 0.0);
            }
            x[i] /= d;
        }
        x
    }
}

/// `‖A v − λ v‖ / ‖v‖` for the eigenvector estimate `v` produced by a few
/// steps of inverse iteration at `λ`.
pub fn eigen_residual(m: &ComplexMatrix, lambda: C64) -> f64 {
    let n = m.n;
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let shifted = m.linear_combination(ONE, &ComplexMatrix::identity(n), -lambda);
    let lu = Lu::new(&shifted);
    let floor = f64::EPSILON * scale;
    let mut v: Vec<C64> = (0..n).map(|k| C64::new(1.0, 0.1 * k as f64)).collect();
    let mut best = f64::INFINITY;
    for _ in 0..4 {
        v = lu.solve(&v, floor);
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !vn.is_finite() || vn == 0.0 {
            break;
        }
        for z in &mut v {
            *z /= vn;
        }
        let av = m.mul_vec(&v);
        let r = av
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - lambda * x).norm_sqr())
            .sum::<f64>()
            .sqrt();
        best = best.min(r);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let rows: Vec<Vec<C64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(&rows).unwrap()
    }

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_matrix() {
        let m = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]);
        let e = sorted(eigenvalues(&m).unwrap());
        assert_eq!(e, vec![c(-3.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)]);
    }

    #[test]
    fn swap_matrix() {
        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let e = sorted(eigenvalues(&m).unwrap());
        assert!((e[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((e[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn trace_and_determinant_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_matrix(6, &mut rng);
            let e = eigenvalues(&m).unwrap();
            let sum: C64 = e.iter().sum();
            let prod: C64 = e.iter().product();
            let tr = m.trace();
            let det = Lu::new(&m).determinant();
            assert!((sum - tr).norm() <= 1e-9 * tr.norm().max(1.0));
            assert!((prod - det).norm() <= 1e-9 * det.norm().max(1.0));
        }
    }

    #[test]
    fn residual_contract_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=12 {
            let m = random_matrix(n, &mut rng);
            let norm = m.frobenius_norm();
            for lambda in eigenvalues(&m).unwrap() {
                assert!(eigen_residual(&m, lambda) <= 1e-10 * norm, "n={n}");
            }
        }
    }

    #[test]
    fn non_normal_jordan_like_block() {
        // nilpotent shift plus identity: single eigenvalue 1 with multiplicity 4
        let mut m = ComplexMatrix::identity(4);
        for k in 0..3 {
            m[(k, k + 1)] = ONE;
        }
        for e in eigenvalues(&m).unwrap() {
            assert!((e - ONE).norm() < 1e-3);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(eigenvalues(&m), Err(Error::NonFinite(_))));
    }

    #[test]
    fn hessenberg_preserves_spectrum_and_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(7, &mut rng);
        let mut h = m.clone();
        hessenberg(&mut h);
        for i in 2..7 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], ZERO);
            }
        }
        assert!((h.trace() - m.trace()).norm() < 1e-12);
        assert!((Lu::new(&h).determinant() - Lu::new(&m).determinant()).norm() < 1e-11);
    }
}
