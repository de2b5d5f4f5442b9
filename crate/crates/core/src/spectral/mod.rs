//! Exact solution of the new model.
//!
//! The coefficients `c_m(t)` of the monic polynomial whose zeros are the
//! particle positions are the eigenvalues of
//! `C(t) = C(0) cos ωt + Ċ(0) sin(ωt)/ω`, with `C(0) = diag c(0)` and
//! `Ċ(0) = diag ċ(0) + i [M, C(0)]`. The positions then follow as the
//! polynomial's zeros, labeled by continuity from `t = 0`.

pub mod eigen;

pub use eigen::{eigen_residual, eigenvalues, ComplexMatrix, Lu};

use crate::error::{Error, Family, Result};
use crate::model::{
    ensure_distinct, ensure_finite, uniform_grid, MonicPolynomial, Permutation, SystemConfig, Trajectory, C64,
};
use crate::roots::{continue_along, follow, match_labels, multiset_distance, roots_of_monic};
use crate::symmetry::{coeff_velocities, coeffs_from_roots};

/// Which differences build the off-diagonal matrix `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MReading {
    /// `M_{mℓ} = (c_m(0) − c_ℓ(0))^{-2}`: the reading whose eigenvalue flow
    /// solves the coefficient equations.
    #[default]
    Coefficients,
    /// `M_{nm} = (z_n(0) − z_m(0))^{-2}`, built from the initial positions.
    /// Kept for comparison only.
    Positions,
}

/// The frozen data of the matrix propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    c0_diag: Vec<C64>,
    cdot0: ComplexMatrix,
    omega: f64,
}

fn m_matrix(points: &[C64]) -> ComplexMatrix {
    let n = points.len();
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        let mut diag = C64::new(0.0, 0.0);
        for j in 0..n {
            if i != j {
                let v = (points[i] - points[j]).powi(-2);
                m[(i, j)] = v;
                diag -= v;
            }
        }
        m[(i, i)] = diag;
    }
    m
}

impl SpectralData {
    /// Builds the propagator directly from coefficient data.
    pub fn from_coefficients(c0: &[C64], cdot0: &[C64], omega: f64) -> Result<Self> {
        Self::assemble(c0, cdot0, omega, &m_matrix(c0))
    }

    fn assemble(c0: &[C64], cdot0: &[C64], omega: f64, m: &ComplexMatrix) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::validation("omega", "omega must be a finite number > 0"));
        }
        if c0.len() != cdot0.len() {
            return Err(Error::LengthMismatch {
                expected: c0.len(),
                got: cdot0.len(),
            });
        }
        ensure_finite(c0, "coefficients")?;
        ensure_finite(cdot0, "coefficient velocities")?;
        ensure_distinct(c0, Family::Coefficients)?;
        let c_mat = ComplexMatrix::from_diagonal(c0);
        let i = C64::new(0.0, 1.0);
        let mut cdot = m.commutator(&c_mat).scaled(i);
        for (k, &v) in cdot0.iter().enumerate() {
            cdot[(k, k)] += v;
        }
        if !cdot.is_finite() {
            return Err(Error::NonFinite("propagator matrix"));
        }
        Ok(SpectralData {
            c0_diag: c0.to_vec(),
            cdot0: cdot,
            omega,
        })
    }

    pub fn c0_diag(&self) -> &[C64] {
        &self.c0_diag
    }

    pub fn cdot0(&self) -> &ComplexMatrix {
        &self.cdot0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn n(&self) -> usize {
        self.c0_diag.len()
    }

    /// `C(t) = C(0) cos ωt + Ċ(0) sin(ωt)/ω`.
    pub fn matrix_at(&self, t: f64) -> ComplexMatrix {
        let (s, c) = (self.omega * t).sin_cos();
        ComplexMatrix::from_diagonal(&self.c0_diag).linear_combination(
            C64::new(c, 0.0),
            &self.cdot0,
            C64::new(s / self.omega, 0.0),
        )
    }
}

/// Propagator for a configuration, using the coefficient reading of `M`.
pub fn build_spectral(config: &SystemConfig) -> Result<SpectralData> {
    build_spectral_with(config, MReading::Coefficients)
}

pub fn build_spectral_with(config: &SystemConfig, reading: MReading) -> Result<SpectralData> {
    let c0 = coeffs_from_roots(config.z0());
    let cdot0 = coeff_velocities(config.z0(), config.v0());
    let m = match reading {
        MReading::Coefficients => m_matrix(&c0),
        MReading::Positions => m_matrix(config.z0()),
    };
    SpectralData::assemble(&c0, &cdot0, config.omega(), &m)
}

/// Unordered eigenvalues of `C(t)`, i.e. the coefficient multiset at `t`.
pub fn coefficients_at(sd: &SpectralData, t: f64) -> Result<Vec<C64>> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    if t == 0.0 {
        return Ok(sd.c0_diag.clone());
    }
    eigenvalues(&sd.matrix_at(t))
}

fn require_origin(times: &[f64]) -> Result<()> {
    crate::model::check_increasing(times)?;
    match times.first() {
        Some(&0.0) => Ok(()),
        Some(_) => Err(Error::TimeGrid("times must start at 0".into())),
        None => Err(Error::TimeGrid("empty time grid".into())),
    }
}

/// Coefficients labeled by continuity from `c(0)` on a grid starting at 0.
pub fn coefficient_path(sd: &SpectralData, times: &[f64]) -> Result<Trajectory> {
    require_origin(times)?;
    let samples = continue_along(times, sd.c0_diag.clone(), |prev, target| {
        Ok(follow(prev, &coefficients_at(sd, target.t)?))
    })?;
    Trajectory::new(times.to_vec(), samples)
}

/// Positions and the coefficients they were extracted from, on the same grid.
#[derive(Debug, Clone)]
pub struct NewgoldSolution {
    pub positions: Trajectory,
    pub coefficients: Trajectory,
}

/// Exact solution of the new model at `times` (starting at 0).
pub fn solve_newgold(config: &SystemConfig, times: &[f64]) -> Result<Trajectory> {
    Ok(solve_newgold_detailed(config, times)?.positions)
}

pub fn solve_newgold_detailed(config: &SystemConfig, times: &[f64]) -> Result<NewgoldSolution> {
    require_origin(times)?;
    let sd = build_spectral(config)?;
    let c0 = sd.c0_diag.clone();
    let roots = roots_of_monic(&MonicPolynomial::new(c0.clone()))?;
    let z_first = match_labels(config.z0(), &roots).gather(&roots);

    let states = continue_along(times, (c0, z_first), |(prev_c, prev_z), target| {
        let Some(c) = follow(prev_c, &coefficients_at(&sd, target.t)?) else {
            return Ok(None);
        };
        let roots = roots_of_monic(&MonicPolynomial::new(c.clone()))?;
        Ok(follow(prev_z, &roots).map(|z| (c, z)))
    })?;
    let (coeffs, positions): (Vec<_>, Vec<_>) = states.into_iter().unzip();
    let mut positions = Trajectory::new(times.to_vec(), positions)?;
    let coefficients = Trajectory::new(times.to_vec(), coeffs)?;
    if let Some(k) = positions.index_of_time(config.period(), 1e-12) {
        positions.closure_permutation = Some(match_labels(&positions.samples[k], positions.first()));
    }
    Ok(NewgoldSolution {
        positions,
        coefficients,
    })
}

/// How a solution returns to its initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct Closure {
    /// `max` displacement between `{z(T)}` and `{z(0)}` as multisets.
    pub multiset_at_period: f64,
    /// Permutation of the tracked coefficients after one period.
    pub coefficient_permutation: Permutation,
    /// Permutation of the tracked positions after `k_c` periods, `k_c` being
    /// the order of the coefficient permutation.
    pub position_permutation: Permutation,
    /// Smallest number of periods after which every label returns.
    pub periods: usize,
    /// Largest label-wise distance `|z_n(periods · T) − z_n(0)|`.
    pub labeled_error: f64,
}

/// Follows the exact solution, with `samples` intervals per period, until
/// all labels close.
pub fn closure_analysis(config: &SystemConfig, samples: usize) -> Result<Closure> {
    let period = config.period();
    let samples = samples.max(1);
    let run =
        |periods: usize| solve_newgold_detailed(config, &uniform_grid(periods as f64 * period, periods * samples));
    let one = run(1)?;
    let z0 = one.positions.first().to_vec();
    let multiset_at_period = multiset_distance(one.positions.last(), &z0);
    let coefficient_permutation = match_labels(one.coefficients.last(), one.coefficients.first());
    let kc = coefficient_permutation.order();
    let at_kc = if kc == 1 { one } else { run(kc)? };
    let position_permutation = match_labels(at_kc.positions.last(), &z0);
    let periods = kc * position_permutation.order();
    let last = if periods == kc { at_kc } else { run(periods)? };
    let labeled_error = last
        .positions
        .last()
        .iter()
        .zip(&z0)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(Closure {
        multiset_at_period,
        coefficient_permutation,
        position_permutation,
        periods,
        labeled_error,
    })
}
