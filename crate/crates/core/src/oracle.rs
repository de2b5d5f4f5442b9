//! Equations of motion integrated directly, as ground truth for the exact
//! solvers: the new many-body model (generic and the hard-coded two- and
//! three-body forms with `ω = 1`), the coefficient system, and the classic
//! isochronous goldfish.

use crate::error::{Error, Family, Result};
use crate::model::{ensure_distinct, ensure_finite, Trajectory, C64, COLLISION_TOL};
use crate::ode::{dopri5, OdeOptions};
use crate::symmetry::coeffs_from_roots;

fn nonzero(d: C64, context: &'static str) -> Result<C64> {
    if d.norm() <= COLLISION_TOL {
        Err(Error::Denominator(context))
    } else {
        Ok(d)
    }
}

/// `c̈_m = −ω² c_m + 2 Σ_{ℓ≠m} (c_m − c_ℓ)^{-3}`.
pub fn rhs_calogero(c: &[C64], omega: f64) -> Result<Vec<C64>> {
    ensure_finite(c, "coefficients")?;
    ensure_distinct(c, Family::Coefficients)?;
    let w2 = omega * omega;
    Ok((0..c.len())
        .map(|m| {
            let pair: C64 = (0..c.len()).filter(|&l| l != m).map(|l| (c[m] - c[l]).powi(-3)).sum();
            -w2 * c[m] + 2.0 * pair
        })
        .collect())
}

/// `Σ_{ℓ≠n} 2 ż_n ż_ℓ / (z_n − z_ℓ)`: the goldfish velocity coupling.
fn velocity_coupling(z: &[C64], v: &[C64], n: usize) -> C64 {
    (0..z.len())
        .filter(|&l| l != n)
        .map(|l| 2.0 * v[n] * v[l] / (z[n] - z[l]))
        .sum()
}

fn check_state(z: &[C64], v: &[C64]) -> Result<()> {
    if z.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: z.len(),
            got: v.len(),
        });
    }
    ensure_finite(z, "positions")?;
    ensure_finite(v, "velocities")?;
    ensure_distinct(z, Family::Positions)
}

/// Accelerations of the new many-body model for arbitrary `N` and `ω`.
pub fn rhs_newgold(z: &[C64], v: &[C64], omega: f64) -> Result<Vec<C64>> {
    check_state(z, v)?;
    let n = z.len();
    let c = coeffs_from_roots(z);
    // c̈, shared by every particle
    let cdd = rhs_calogero(&c, omega)?;
    Ok((0..n)
        .map(|k| {
            let bracket = cdd.iter().fold(C64::new(0.0, 0.0), |acc, &a| acc * z[k] + a);
            let spread: C64 = (0..n).filter(|&l| l != k).map(|l| z[k] - z[l]).product();
            velocity_coupling(z, v, k) - bracket / spread
        })
        .collect())
}

/// Two-body equations of motion written out for `ω = 1`.
pub fn rhs_newgold_n2(z: [C64; 2], v: [C64; 2]) -> Result<[C64; 2]> {
    check_state(&z, &v)?;
    let [z1, z2] = z;
    let [v1, v2] = v;
    let d12 = z1 - z2;
    let s = nonzero(z1 + z2 + z1 * z2, "z1 + z2 + z1 z2")?.powi(3);
    let coupling = 2.0 * v1 * v2 / d12;
    Ok([
        coupling - (z1 * z1 - 2.0 * (z1 - 1.0) / s) / d12,
        -coupling + (z2 * z2 - 2.0 * (z2 - 1.0) / s) / d12,
    ])
}

/// Three-body equations of motion written out for `ω = 1`.
pub fn rhs_newgold_n3(z: [C64; 3], v: [C64; 3]) -> Result<[C64; 3]> {
    check_state(&z, &v)?;
    let [z1, z2, z3] = z;
    let [v1, v2, v3] = v;
    let e1 = z1 + z2 + z3;
    let e2 = z1 * z2 + z1 * z3 + z2 * z3;
    let e3 = z1 * z2 * z3;
    let a = nonzero(e1 - e3, "z1 + z2 + z3 − z1 z2 z3")?.powi(3);
    let b = nonzero(e1 + e2, "z1 + z2 + z3 + z1 z2 + z1 z3 + z2 z3")?.powi(3);
    let d = nonzero(e2 + e3, "z1 z2 + z1 z3 + z2 z3 + z1 z2 z3")?.powi(3);
    let f1 = e1 - 2.0 / a - 2.0 / b;
    let f2 = -e2 + 2.0 / b + 2.0 / d;
    let f3 = e3 + 2.0 / a - 2.0 / d;
    let bracket = |x: C64| x * x * f1 + x * f2 + f3;
    let (d12, d13, d23) = (z1 - z2, z1 - z3, z2 - z3);
    Ok([
        2.0 * v1 * v2 / d12 + 2.0 * v1 * v3 / d13 - bracket(z1) / (d12 * d13),
        -2.0 * v1 * v2 / d12 + 2.0 * v2 * v3 / d23 + bracket(z2) / (d12 * d23),
        -2.0 * v1 * v3 / d13 - 2.0 * v2 * v3 / d23 - bracket(z3) / (d13 * d23),
    ])
}

/// `z̈_n = iω ż_n + Σ_{ℓ≠n} 2 ż_n ż_ℓ / (z_n − z_ℓ)`.
pub fn rhs_isogold(z: &[C64], v: &[C64], omega: f64) -> Result<Vec<C64>> {
    check_state(z, v)?;
    let iw = C64::new(0.0, omega);
    Ok((0..z.len()).map(|n| iw * v[n] + velocity_coupling(z, v, n)).collect())
}

/// Second-order system selectable for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeSystem {
    /// Particle positions of the new model.
    NewGold,
    /// Polynomial coefficients (Calogero system with harmonic term).
    Calogero,
    /// The classic isochronous goldfish.
    IsoGold,
}

impl OdeSystem {
    pub fn accelerations(self, x: &[C64], v: &[C64], omega: f64) -> Result<Vec<C64>> {
        match self {
            OdeSystem::NewGold => rhs_newgold(x, v, omega),
            OdeSystem::Calogero => rhs_calogero(x, omega),
            OdeSystem::IsoGold => rhs_isogold(x, v, omega),
        }
    }
}

/// Positions and velocities at the start of an integration.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub positions: Vec<C64>,
    pub velocities: Vec<C64>,
}

impl PhaseState {
    pub fn new(positions: Vec<C64>, velocities: Vec<C64>) -> Self {
        PhaseState { positions, velocities }
    }
}

// Real layout: [Re x_0, Im x_0, …, Re v_0, Im v_0, …].
fn pack(x: &[C64], v: &[C64]) -> Vec<f64> {
    x.iter().chain(v).flat_map(|z| [z.re, z.im]).collect()
}

fn unpack(y: &[f64]) -> (Vec<C64>, Vec<C64>) {
    let n = y.len() / 4;
    let all: Vec<C64> = y.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
    (all[..n].to_vec(), all[n..].to_vec())
}

/// Integrates `system` over `t_span` and samples it at `samples + 1` equally
/// spaced times.
pub fn integrate(
    system: OdeSystem,
    state0: &PhaseState,
    omega: f64,
    t_span: (f64, f64),
    samples: usize,
    opts: &OdeOptions,
) -> Result<Trajectory> {
    let (t0, t1) = t_span;
    if !(t1 > t0) {
        return Err(Error::TimeGrid("t_span must be increasing".into()));
    }
    let samples = samples.max(1);
    let times: Vec<f64> = (0..=samples)
        .map(|k| {
            if k == samples {
                t1
            } else {
                t0 + (t1 - t0) * k as f64 / samples as f64
            }
        })
        .collect();
    integrate_at(system, state0, omega, &times, opts)
}

/// As [`integrate`], but on an explicit increasing grid starting at the initial time.
pub fn integrate_at(
    system: OdeSystem,
    state0: &PhaseState,
    omega: f64,
    times: &[f64],
    opts: &OdeOptions,
) -> Result<Trajectory> {
    let n = state0.positions.len();
    if state0.velocities.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: state0.velocities.len(),
        });
    }
    if times.is_empty() {
        return Err(Error::TimeGrid("empty time grid".into()));
    }
    crate::model::check_increasing(times)?;
    if !omega.is_finite() {
        return Err(Error::NonFinite("omega"));
    }
    // validate the initial state once so errors point at the input
    system.accelerations(&state0.positions, &state0.velocities, omega)?;

    let y0 = pack(&state0.positions, &state0.velocities);
    let raw = dopri5(
        |_, y, dy| {
            let (x, v) = unpack(y);
            let a = system.accelerations(&x, &v, omega)?;
            let packed = pack(&v, &a);
            dy.copy_from_slice(&packed);
            Ok(())
        },
        times[0],
        &y0,
        times,
        opts,
    )?;
    let (samples, velocities): (Vec<_>, Vec<_>) = raw.iter().map(|y| unpack(y)).unzip();
    let mut traj = Trajectory::new(times.to_vec(), samples)?;
    traj.velocities = Some(velocities);
    Ok(traj)
}

/// First integral of the coefficient system:
/// `Σ (ċ_m² + ω² c_m²)/2 + Σ_{m<ℓ} (c_m − c_ℓ)^{-2}` (complex-valued).
pub fn calogero_energy(c: &[C64], cdot: &[C64], omega: f64) -> C64 {
    let kinetic: C64 = c
        .iter()
        .zip(cdot)
        .map(|(x, v)| 0.5 * (v * v + omega * omega * x * x))
        .sum();
    let mut pair = C64::new(0.0, 0.0);
    for m in 0..c.len() {
        for l in m + 1..c.len() {
            pair += (c[m] - c[l]).powi(-2);
        }
    }
    kinetic + pair
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn max_norm(v: &[C64]) -> f64 {
        v.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn random_c(rng: &mut ChaCha8Rng, r: f64) -> C64 {
        c(rng.gen_range(-r..r), rng.gen_range(-r..r))
    }

    #[test]
    fn calogero_hermite_equilibria() {
        let h = FRAC_1_SQRT_2;
        assert!(max_norm(&rhs_calogero(&[c(h, 0.0), c(-h, 0.0)], 1.0).unwrap()) < 1e-15);
        assert!(max_norm(&rhs_calogero(&[c(0.0, h), c(0.0, -h)], 1.0).unwrap()) < 1e-15);
        let s = 1.5f64.sqrt();
        assert!(max_norm(&rhs_calogero(&[c(0.0, 0.0), c(s, 0.0), c(-s, 0.0)], 1.0).unwrap()) < 1e-15);
    }

    #[test]
    fn calogero_collision_is_reported() {
        let err = rhs_calogero(&[c(1.0, 0.0), c(1.0, 0.0)], 1.0).unwrap_err();
        assert!(matches!(
            err,
            Error::Collision {
                family: Family::Coefficients,
                ..
            }
        ));
    }

    #[test]
    fn newgold_golden_equilibria() {
        let zero = [c(0.0, 0.0); 3];
        let a = rhs_newgold(&[c(-1.26575, 0.0), c(0.558645, 0.0)], &zero[..2], 1.0).unwrap();
        assert!(max_norm(&a) < 1e-4);
        let z3 = [c(0.720239, -0.575751), c(0.720239, 0.575751), c(-1.44048, 0.0)];
        assert!(max_norm(&rhs_newgold(&z3, &zero, 1.0).unwrap()) < 1e-4);
    }

    #[test]
    fn newgold_position_collision() {
        let err = rhs_newgold(&[c(0.5, 0.0), c(0.5, 0.0)], &[c(0.0, 0.0); 2], 1.0).unwrap_err();
        assert!(matches!(
            err,
            Error::Collision {
                family: Family::Positions,
                ..
            }
        ));
    }

    #[test]
    fn n2_golden_and_symmetry() {
        let zero = [c(0.0, 0.0); 2];
        let a = rhs_newgold_n2([c(0.353553, -0.762959), c(0.353553, 0.762959)], zero).unwrap();
        assert!(max_norm(&a) < 1e-4);
        let z = [c(0.3, 0.7), c(-1.1, 0.2)];
        let v = [c(0.4, -0.1), c(0.05, 0.3)];
        let a = rhs_newgold_n2(z, v).unwrap();
        let b = rhs_newgold_n2([z[1], z[0]], [v[1], v[0]]).unwrap();
        assert!((a[0] - b[1]).norm() < 1e-14 && (a[1] - b[0]).norm() < 1e-14);
    }

    #[test]
    fn n2_denominator_error() {
        // z1 + z2 + z1 z2 = 0 at z1 = 1, z2 = -1/2
        let err = rhs_newgold_n2([c(1.0, 0.0), c(-0.5, 0.0)], [c(0.0, 0.0); 2]).unwrap_err();
        assert!(matches!(err, Error::Denominator(_)));
    }

    #[test]
    fn n3_golden_equilibria() {
        let zero = [c(0.0, 0.0); 3];
        let a = rhs_newgold_n3([c(0.0, 0.0), c(-1.87718, 0.0), c(0.652438, 0.0)], zero).unwrap();
        assert!(max_norm(&a) < 1e-4);
        let a = rhs_newgold_n3([c(0.0, 0.0), c(0.612372, 0.921816), c(0.612372, -0.921816)], zero).unwrap();
        assert!(max_norm(&a) < 1e-4);
    }

    fn close_rel(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * x.norm().max(1.0))
    }

    #[test]
    fn specialized_forms_match_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 200 {
            let z = [random_c(&mut rng, 1.5), random_c(&mut rng, 1.5)];
            let v = [random_c(&mut rng, 1.0), random_c(&mut rng, 1.0)];
            let Ok(special) = rhs_newgold_n2(z, v) else { continue };
            let generic = rhs_newgold(&z, &v, 1.0).unwrap();
            assert!(close_rel(&generic, &special, 1e-10));
            checked += 1;
        }
        checked = 0;
        while checked < 200 {
            let z = [
                random_c(&mut rng, 1.5),
                random_c(&mut rng, 1.5),
                random_c(&mut rng, 1.5),
            ];
            let v = [
                random_c(&mut rng, 1.0),
                random_c(&mut rng, 1.0),
                random_c(&mut rng, 1.0),
            ];
            let Ok(special) = rhs_newgold_n3(z, v) else { continue };
            let generic = rhs_newgold(&z, &v, 1.0).unwrap();
            assert!(close_rel(&generic, &special, 1e-10));
            checked += 1;
        }
    }

    #[test]
    fn isogold_still_and_translation_invariant() {
        let z = [c(0.1, 0.2), c(-0.7, 1.0), c(1.3, -0.4)];
        assert_eq!(rhs_isogold(&z, &[c(0.0, 0.0); 3], 2.0).unwrap(), vec![c(0.0, 0.0); 3]);
        let v = [c(0.3, 0.0), c(-0.2, 0.5), c(0.1, -0.1)];
        let shift = c(3.0, -2.0);
        let moved: Vec<C64> = z.iter().map(|x| x + shift).collect();
        assert!(close_rel(
            &rhs_isogold(&z, &v, 1.3).unwrap(),
            &rhs_isogold(&moved, &v, 1.3).unwrap(),
            1e-13
        ));
    }

    #[test]
    fn isogold_single_body_closed_form() {
        let (z0, v0, omega) = (c(0.5, -0.3), c(0.2, 0.7), 1.7);
        let state = PhaseState::new(vec![z0], vec![v0]);
        let traj = integrate(
            OdeSystem::IsoGold,
            &state,
            omega,
            (0.0, 3.0),
            30,
            &OdeOptions::default(),
        )
        .unwrap();
        for (t, s) in traj.times.iter().zip(&traj.samples) {
            let iw = c(0.0, omega);
            let exact = z0 + v0 * ((iw * *t).exp() - 1.0) / iw;
            assert!((s[0] - exact).norm() < 1e-9);
        }
    }

    #[test]
    fn calogero_equilibrium_stays_put() {
        let h = FRAC_1_SQRT_2;
        let state = PhaseState::new(vec![c(-h, 0.0), c(h, 0.0)], vec![c(0.0, 0.0); 2]);
        let traj = integrate(
            OdeSystem::Calogero,
            &state,
            1.0,
            (0.0, 2.0 * PI),
            50,
            &OdeOptions::default(),
        )
        .unwrap();
        for s in &traj.samples {
            assert!((s[0] - c(-h, 0.0)).norm() < 1e-8 && (s[1] - c(h, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn calogero_energy_is_conserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 2..=5 {
            let x: Vec<C64> = (0..n)
                .map(|k| c(k as f64 - 2.0, 0.0) + random_c(&mut rng, 0.3))
                .collect();
            let v: Vec<C64> = (0..n).map(|_| random_c(&mut rng, 0.3)).collect();
            let e0 = calogero_energy(&x, &v, 1.0);
            let traj = integrate(
                OdeSystem::Calogero,
                &PhaseState::new(x, v),
                1.0,
                (0.0, 2.0 * PI),
                20,
                &OdeOptions::default(),
            )
            .unwrap();
            let vel = traj.velocities.as_ref().unwrap();
            for (s, u) in traj.samples.iter().zip(vel) {
                let e = calogero_energy(s, u, 1.0);
                assert!((e - e0).norm() <= 1e-8 * e0.norm(), "n={n}");
            }
        }
    }

    #[test]
    fn halving_tolerance_barely_moves_endpoint() {
        let x = vec![c(-1.0, 0.2), c(0.3, -0.1), c(1.2, 0.4)];
        let v = vec![c(0.1, 0.0), c(-0.2, 0.1), c(0.05, 0.05)];
        let state = PhaseState::new(x, v);
        let tol = 1e-10;
        let a = integrate(
            OdeSystem::Calogero,
            &state,
            1.0,
            (0.0, 2.0 * PI),
            1,
            &OdeOptions::default().with_rtol(tol),
        )
        .unwrap();
        let b = integrate(
            OdeSystem::Calogero,
            &state,
            1.0,
            (0.0, 2.0 * PI),
            1,
            &OdeOptions::default().with_rtol(tol / 2.0),
        )
        .unwrap();
        let scale = a.samples.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        assert!(a.max_deviation(&b) < 10.0 * tol * scale);
    }

    #[test]
    fn collision_aborts_integration() {
        // head-on approach on the real line: z² = 1 − 2t, so they meet at t = 1/2
        let state = PhaseState::new(vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        let err = integrate(OdeSystem::IsoGold, &state, 0.0, (0.0, 5.0), 10, &OdeOptions::default()).unwrap_err();
        assert!(err.is_numerical());
        assert!(matches!(err, Error::StepSizeUnderflow { time } if (time - 0.5).abs() < 1e-6));
    }
}
