//! The classic isochronous goldfish: closed-form solution and Hamiltonian.
//!
//! With `τ(t) = (e^{iωt} − 1)/(iω)`, the positions at time `t` are the zeros of
//! `Σ_ℓ ż_ℓ(0) / (z − z_ℓ(0)) = 1/τ`. Cleared of denominators this is the
//! monic polynomial whose coefficients are `c(0) + τ ċ(0)`, so the
//! coefficients move on a circle of period `T = 2π/ω`.

use crate::error::{Error, Family, Result};
use crate::model::{ensure_distinct, ensure_finite, MonicPolynomial, SystemConfig, Trajectory, C64};
use crate::roots::{match_labels, roots_of_monic, track_roots_anchored};
use crate::symmetry::{coeff_velocities, coeffs_from_roots};

/// Below this `|e^{iωt} − 1|` the solution is taken to be the initial configuration.
const NEAR_PERIOD: f64 = 1e-8;

/// Numerators of the algebraic solution formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolutionForm {
    /// `ż_ℓ(0)`: solves the translation-invariant equations of motion.
    #[default]
    Velocity,
    /// `ż_ℓ(0) + iω z_ℓ(0)`; not translation invariant and does not solve
    /// the equations of motion. Exposed for comparison only.
    ShiftedVelocity,
}

fn tau(omega: f64, t: f64) -> C64 {
    let iw = C64::new(0.0, omega);
    ((iw * t).exp() - 1.0) / iw
}

fn numerators(config: &SystemConfig, form: SolutionForm) -> Vec<C64> {
    match form {
        SolutionForm::Velocity => config.v0().to_vec(),
        SolutionForm::ShiftedVelocity => {
            let iw = C64::new(0.0, config.omega());
            config.v0().iter().zip(config.z0()).map(|(v, z)| v + iw * z).collect()
        }
    }
}

/// Monic polynomial whose zeros are the positions at time `t`.
pub fn isogold_polynomial(config: &SystemConfig, t: f64, form: SolutionForm) -> MonicPolynomial {
    let c0 = coeffs_from_roots(config.z0());
    // Σ_m ċ_m z^{N−m} = −Σ_ℓ a_ℓ Π_{m≠ℓ}(z − z_m)
    let dc = coeff_velocities(config.z0(), &numerators(config, form));
    let tau = tau(config.omega(), t);
    MonicPolynomial::new(c0.iter().zip(&dc).map(|(c, d)| c + tau * d).collect())
}

/// Positions at time `t` as an unordered set.
pub fn solve_isogold(config: &SystemConfig, t: f64) -> Result<Vec<C64>> {
    solve_isogold_with(config, t, SolutionForm::Velocity)
}

pub fn solve_isogold_with(config: &SystemConfig, t: f64, form: SolutionForm) -> Result<Vec<C64>> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    let phase = C64::new(0.0, config.omega() * t).exp() - 1.0;
    if phase.norm() < NEAR_PERIOD {
        return Ok(config.z0().to_vec());
    }
    roots_of_monic(&isogold_polynomial(config, t, form))
}

/// Labeled positions on a grid starting at 0; labels follow continuity from `z(0)`.
pub fn isogold_path(config: &SystemConfig, times: &[f64]) -> Result<Trajectory> {
    if times.first() != Some(&0.0) {
        return Err(Error::TimeGrid("times must start at 0".into()));
    }
    let coeffs = |t: f64| isogold_polynomial(config, t, SolutionForm::Velocity).coeffs().to_vec();
    let path: Vec<(f64, Vec<C64>)> = times.iter().map(|&t| (t, coeffs(t))).collect();
    let mut traj = track_roots_anchored(&path, |t| Ok(coeffs(t)), Some(config.z0()))?;
    traj.closure_permutation = traj
        .index_of_time(config.period(), 1e-12)
        .map(|k| match_labels(&traj.samples[k], traj.first()));
    Ok(traj)
}

fn spreads(z: &[C64]) -> Vec<C64> {
    (0..z.len())
        .map(|n| (0..z.len()).filter(|&l| l != n).map(|l| z[n] - z[l]).product())
        .collect()
}

/// `H(ζ; z) = Σ_n [iω z_n + e^{ζ_n} Π_{ℓ≠n} (z_n − z_ℓ)^{-1}]`.
pub fn hamiltonian_isogold(zeta: &[C64], z: &[C64], omega: f64) -> Result<C64> {
    if zeta.len() != z.len() {
        return Err(Error::LengthMismatch {
            expected: z.len(),
            got: zeta.len(),
        });
    }
    ensure_finite(zeta, "momenta")?;
    ensure_finite(z, "positions")?;
    ensure_distinct(z, Family::Positions)?;
    let iw = C64::new(0.0, omega);
    Ok(z.iter()
        .zip(zeta)
        .zip(spreads(z))
        .map(|((&x, &p), s)| iw * x + p.exp() / s)
        .sum())
}

/// Partial derivatives `(∂H/∂ζ, ∂H/∂z)` in closed form.
pub fn hamiltonian_gradient(zeta: &[C64], z: &[C64], omega: f64) -> Result<(Vec<C64>, Vec<C64>)> {
    hamiltonian_isogold(zeta, z, omega)?;
    let n = z.len();
    let dzeta: Vec<C64> = zeta.iter().zip(spreads(z)).map(|(p, s)| p.exp() / s).collect();
    let iw = C64::new(0.0, omega);
    let dz = (0..n)
        .map(|k| {
            let own: C64 = (0..n).filter(|&l| l != k).map(|l| (z[k] - z[l]).inv()).sum();
            let others: C64 = (0..n).filter(|&l| l != k).map(|l| dzeta[l] / (z[l] - z[k])).sum();
            iw - dzeta[k] * own + others
        })
        .collect();
    Ok((dzeta, dz))
}

/// Hamilton's equations with `ζ` as coordinates and `z` as conjugate momenta:
/// `ζ̇ = ∂H/∂z`, `ż = −∂H/∂ζ`. Under this pairing the flow of `H`
/// reproduces the goldfish equations of motion with `+iω ż`.
pub fn canonical_flow(zeta: &[C64], z: &[C64], omega: f64) -> Result<(Vec<C64>, Vec<C64>)> {
    let (dzeta, dz) = hamiltonian_gradient(zeta, z, omega)?;
    let zdot = dzeta.into_iter().map(|g| -g).collect();
    Ok((zdot, dz))
}

/// Momenta `ζ` that give the velocities `v` under [`canonical_flow`].
pub fn momenta_for_velocities(z: &[C64], v: &[C64]) -> Vec<C64> {
    // ż_n = −e^{ζ_n}/P_n  ⇒  ζ_n = log(−ż_n P_n)
    v.iter().zip(spreads(z)).map(|(vel, s)| (-vel * s).ln()).collect()
}
