//! Polynomial roots and continuity-based labeling of roots along a path.
//!
//! Roots (and eigenvalues) are only defined up to permutation; labels are
//! carried from one sample to the next by minimal-displacement matching,
//! refining the time step whenever a step moves roots too far relative to
//! their separation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ensure_finite, min_pairwise_distance, MonicPolynomial, Permutation, Trajectory, C64};
use crate::spectral::eigen::{eigenvalues, ComplexMatrix};
use crate::symmetry::{horner, horner_magnitude, horner_with_derivative};

/// Maximum number of interval halvings while tracking.
pub const MAX_BISECTION_DEPTH: usize = 20;

/// Exhaustive matching is used up to this size, the Hungarian method above.
const EXHAUSTIVE_LIMIT: usize = 6;

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Angular offset of the initial guesses on their circle.
    pub rotation: f64,
    pub max_iterations: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            rotation: 0.4,
            max_iterations: 500,
        }
    }
}

/// All `N` roots of a monic polynomial, with multiplicity.
pub fn roots_of_monic(p: &MonicPolynomial) -> Result<Vec<C64>> {
    roots_of_monic_with(p, &RootOptions::default())
}

pub fn roots_of_monic_with(p: &MonicPolynomial, opts: &RootOptions) -> Result<Vec<C64>> {
    let coeffs = p.coeffs();
    ensure_finite(coeffs, "polynomial coefficients")?;
    let n = coeffs.len();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-coeffs[0]]),
        _ => {}
    }
    if let Some(roots) = aberth(coeffs, opts) {
        if let Ok(()) = check_residuals(coeffs, &roots, p.scale()) {
            return Ok(roots);
        }
    }
    let roots = companion_roots(coeffs)?;
    check_residuals(coeffs, &roots, p.scale())?;
    Ok(roots)
}

fn at_rounding_level(coeffs: &[C64], z: C64, value: C64) -> bool {
    value.norm() <= 8.0 * f64::EPSILON * horner_magnitude(coeffs, z)
}

fn check_residuals(coeffs: &[C64], roots: &[C64], scale: f64) -> Result<()> {
    let mut worst = 0.0f64;
    for &r in roots {
        let value = horner(coeffs, r);
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::RootsNotConverged {
                residual: f64::INFINITY,
            });
        }
        if value.norm() > 1e-10 * scale && !at_rounding_level(coeffs, r, value) {
            worst = worst.max(value.norm());
        }
    }
    if worst > 0.0 {
        Err(Error::RootsNotConverged { residual: worst })
    } else {
        Ok(())
    }
}

/// Aberth–Ehrlich simultaneous iteration; `None` when the budget runs out.
fn aberth(coeffs: &[C64], opts: &RootOptions) -> Option<Vec<C64>> {
    let n = coeffs.len();
    let radius = 1.0
        + coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c.norm().powf(1.0 / (m + 1) as f64))
            .fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + opts.rotation))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..opts.max_iterations {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (value, slope) = horner_with_derivative(coeffs, z[k]);
            if at_rounding_level(coeffs, z[k], value) {
                done[k] = true;
                continue;
            }
            let newton = value / slope;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != k && z[j] != z[k])
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let mut step = newton / (1.0 - newton * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                step = if newton.re.is_finite() && newton.im.is_finite() {
                    newton
                } else {
                    // flat spot: nudge off it
                    C64::new(1e-3 * radius, 1e-3 * radius)
                };
            }
            z[k] -= step;
            if step.norm() < 1e-13 * (1.0 + z[k].norm()) {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Some(z);
        }
    }
    None
}

/// Eigenvalues of the companion matrix, polished by a few Newton steps.
fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len();
    let mut m = ComplexMatrix::zeros(n);
    for (j, &c) in coeffs.iter().enumerate() {
        m[(0, j)] = -c;
    }
    for k in 1..n {
        m[(k, k - 1)] = C64::new(1.0, 0.0);
    }
    let mut roots = eigenvalues(&m)?;
    for r in &mut roots {
        for _ in 0..3 {
            let (value, slope) = horner_with_derivative(coeffs, *r);
            if at_rounding_level(coeffs, *r, value) || slope.norm() == 0.0 {
                break;
            }
            let next = *r - value / slope;
            if horner(coeffs, next).norm() < value.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}

fn matching_cost(prev: &[C64], next: &[C64], sigma: &[usize]) -> f64 {
    prev.iter().zip(sigma).map(|(p, &j)| (next[j] - p).norm_sqr()).sum()
}

/// In-place lexicographic successor; `false` after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Assignment `σ` minimizing `Σ_n |next[σ(n)] − prev[n]|²`.
///
/// Exhaustive (lexicographically first optimum) for `N ≤ 6`, Hungarian above.
///
/// # Panics
/// If the two slices differ in length.
pub fn match_labels(prev: &[C64], next: &[C64]) -> Permutation {
    assert_eq!(prev.len(), next.len(), "cannot match sets of different size");
    let n = prev.len();
    let map = if n <= EXHAUSTIVE_LIMIT {
        let mut sigma: Vec<usize> = (0..n).collect();
        let mut best = sigma.clone();
        let mut best_cost = matching_cost(prev, next, &sigma);
        while next_permutation(&mut sigma) {
            let cost = matching_cost(prev, next, &sigma);
            if cost < best_cost {
                best_cost = cost;
                best.copy_from_slice(&sigma);
            }
        }
        best
    } else {
        hungarian(n, |i, j| (next[j] - prev[i]).norm_sqr())
    };
    Permutation::from_vec(map).expect("assignment is a bijection")
}

/// Square assignment by the Hungarian method with potentials, O(n³).
/// Returns the column assigned to each row.
fn hungarian(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    // 1-based arrays; column 0 is a sentinel.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0; n];
    for j in 1..=n {
        col_of_row[row_of_col[j] - 1] = j - 1;
    }
    col_of_row
}

/// Largest displacement under the optimal matching of two equal-size multisets.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    let sigma = match_labels(a, b);
    a.iter()
        .enumerate()
        .map(|(k, x)| (b[sigma.image(k)] - x).norm())
        .fold(0.0, f64::max)
}

/// Allowed per-step displacement for labels currently at `points`.
pub fn tracking_threshold(points: &[C64]) -> f64 {
    (0.1 * min_pairwise_distance(points)).max(1e-6)
}

/// Separation (relative to the size of the points) at which two roots are
/// taken to coincide; a numerically computed double root splits by about √ε.
const COINCIDENT: f64 = 1e-7;

/// Relabels `candidate` to follow `prev`; `None` if the matched step exceeds
/// the tracking threshold of `prev`, or if `candidate` has coincident points
/// (labels are not defined there).
pub(crate) fn follow(prev: &[C64], candidate: &[C64]) -> Option<Vec<C64>> {
    let size = candidate.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if min_pairwise_distance(candidate) <= COINCIDENT * size {
        return None;
    }
    let next = match_labels(prev, candidate).gather(candidate);
    let step = prev.iter().zip(&next).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    (step <= tracking_threshold(prev)).then_some(next)
}

/// Where a continuation step is headed: a grid time, or a refinement point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Target {
    pub t: f64,
    pub grid: Option<usize>,
}

/// Carries a state along `times`, bisecting any step that `advance` rejects
/// (returns `Ok(None)`), up to [`MAX_BISECTION_DEPTH`] halvings.
pub(crate) fn continue_along<S, F>(times: &[f64], first: S, mut advance: F) -> Result<Vec<S>>
where
    S: Clone,
    F: FnMut(&S, Target) -> Result<Option<S>>,
{
    let mut out = Vec::with_capacity(times.len());
    out.push(first);
    for k in 1..times.len() {
        let mut state = out[k - 1].clone();
        let mut t_now = times[k - 1];
        let mut pending = vec![(times[k], Some(k), 0usize)];
        while let Some((t, grid, depth)) = pending.pop() {
            match advance(&state, Target { t, grid })? {
                Some(next) => {
                    state = next;
                    t_now = t;
                }
                None => {
                    if depth >= MAX_BISECTION_DEPTH {
                        return Err(Error::TrackingAmbiguity { time: t_now });
                    }
                    pending.push((t, grid, depth + 1));
                    pending.push((0.5 * (t_now + t), None, depth + 1));
                }
            }
        }
        out.push(state);
    }
    Ok(out)
}

/// Labeled roots along a coefficient path.
///
/// `refine` supplies coefficients at intermediate times when a step has to
/// be bisected. The first sample fixes the labels.
pub fn track_roots<F>(path: &[(f64, Vec<C64>)], refine: F) -> Result<Trajectory>
where
    F: FnMut(f64) -> Result<Vec<C64>>,
{
    track_roots_anchored(path, refine, None)
}

/// As [`track_roots`], but the first sample is labeled by matching to `anchor`.
pub fn track_roots_anchored<F>(path: &[(f64, Vec<C64>)], mut refine: F, anchor: Option<&[C64]>) -> Result<Trajectory>
where
    F: FnMut(f64) -> Result<Vec<C64>>,
{
    if path.is_empty() {
        return Err(Error::TimeGrid("empty coefficient path".into()));
    }
    let times: Vec<f64> = path.iter().map(|(t, _)| *t).collect();
    crate::model::check_increasing(&times)?;
    let mut first = roots_of_monic(&MonicPolynomial::new(path[0].1.clone()))?;
    if let Some(anchor) = anchor {
        if anchor.len() != first.len() {
            return Err(Error::LengthMismatch {
                expected: first.len(),
                got: anchor.len(),
            });
        }
        first = match_labels(anchor, &first).gather(&first);
    }
    let samples = continue_along(&times, first, |prev, target| {
        let coeffs = match target.grid {
            Some(k) => path[k].1.clone(),
            None => refine(target.t)?,
        };
        let roots = roots_of_monic(&MonicPolynomial::new(coeffs))?;
        Ok(follow(prev, &roots))
    })?;
    let mut traj = Trajectory::new(times, samples)?;
    traj.closure_permutation = Some(match_labels(traj.last(), traj.first()));
    Ok(traj)
}

/// Piecewise-linear interpolation of a sampled coefficient path, for use
/// as the `refine` argument of [`track_roots`] when no exact evaluator exists.
pub fn linear_refiner(path: &[(f64, Vec<C64>)]) -> impl FnMut(f64) -> Result<Vec<C64>> + '_ {
    move |t| {
        let k = path.partition_point(|(s, _)| *s <= t).clamp(1, path.len().max(2) - 1);
        let (t0, c0) = &path[k - 1];
        let (t1, c1) = &path[k];
        let w = (t - t0) / (t1 - t0);
        Ok(c0.iter().zip(c1).map(|(a, b)| a * (1.0 - w) + b * w).collect())
    }
}
