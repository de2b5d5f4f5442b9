//! Adaptive Dormand–Prince 5(4) integration with dense output.

use crate::error::{Error, Result};

// Butcher tableau (FSAL: the 7th stage is f at the new point).
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order solution minus embedded fourth-order solution
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 2_000_000,
        }
    }
}

impl OdeOptions {
    pub fn with_rtol(self, rtol: f64) -> Self {
        OdeOptions { rtol, ..self }
    }
}

fn axpy(out: &mut [f64], y: &[f64], terms: &[(f64, &[f64])], h: f64) {
    for i in 0..out.len() {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        out[i] = y[i] + h * acc;
    }
}

/// Integrates `y' = f(t, y)` from `t0` and reports `y` at each of `t_out`
/// (non-decreasing, all `≥ t0`).
pub fn dopri5<F>(mut f: F, t0: f64, y0: &[f64], t_out: &[f64], opts: &OdeOptions) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if t_out.iter().any(|&t| !t.is_finite() || t < t0) || t_out.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::TimeGrid("output times must be non-decreasing and ≥ t0".into()));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial state"));
    }
    let dim = y0.len();
    let mut out = Vec::with_capacity(t_out.len());
    let mut next_out = 0;
    while next_out < t_out.len() && t_out[next_out] == t0 {
        out.push(y0.to_vec());
        next_out += 1;
    }
    let Some(&t_final) = t_out.last() else {
        return Ok(out);
    };
    if next_out == t_out.len() {
        return Ok(out);
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; dim];
    f(t, &y, &mut k1)?;
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
    );
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];

    let mut h = initial_step(&mut f, t, &y, &k1, opts)?.min(t_final - t0);
    let mut steps = 0;
    let mut last_rejected = false;

    while next_out < t_out.len() {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::TooManySteps {
                steps: opts.max_steps,
                time: t,
            });
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { time: t });
        }
        if t + h > t_final {
            h = t_final - t;
        }

        axpy(&mut stage, &y, &[(A21, &k1)], h);
        f(t + C2 * h, &stage, &mut k2)?;
        axpy(&mut stage, &y, &[(A31, &k1), (A32, &k2)], h);
        f(t + C3 * h, &stage, &mut k3)?;
        axpy(&mut stage, &y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h);
        f(t + C4 * h, &stage, &mut k4)?;
        axpy(&mut stage, &y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h);
        f(t + C5 * h, &stage, &mut k5)?;
        axpy(
            &mut stage,
            &y,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            h,
        );
        f(t + h, &stage, &mut k6)?;
        axpy(
            &mut y_new,
            &y,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            h,
        );
        let finite_stage = y_new.iter().all(|v| v.is_finite());
        if finite_stage {
            f(t + h, &y_new, &mut k7)?;
        }

        let err = if finite_stage && k7.iter().all(|v| v.is_finite()) {
            let mut sum = 0.0;
            for i in 0..dim {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                sum += (e / sc).powi(2);
            }
            (sum / dim as f64).sqrt()
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            let t_new = t + h;
            while next_out < t_out.len() && t_out[next_out] <= t_new {
                let theta = (t_out[next_out] - t) / h;
                let theta1 = 1.0 - theta;
                let mut yi = vec![0.0; dim];
                for i in 0..dim {
                    let r1 = y[i];
                    let r2 = y_new[i] - y[i];
                    let r3 = h * k1[i] - r2;
                    let r4 = r2 - h * k7[i] - r3;
                    let r5 = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                    yi[i] = r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
                }
                if t_out[next_out] == t_new {
                    yi.copy_from_slice(&y_new);
                }
                out.push(yi);
                next_out += 1;
            }
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            let mut factor = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
            factor = factor.clamp(0.2, 5.0);
            if last_rejected {
                factor = factor.min(1.0);
            }
            h *= factor;
            last_rejected = false;
        } else {
            let factor = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h *= factor;
            last_rejected = true;
        }
    }
    Ok(out)
}

fn initial_step<F>(f: &mut F, t: f64, y: &[f64], f0: &[f64], opts: &OdeOptions) -> Result<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let dim = y.len() as f64;
    let sc: Vec<f64> = y.iter().map(|v| opts.atol + opts.rtol * v.abs()).collect();
    let norm = |v: &[f64]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / dim).sqrt();
    let d0 = norm(y);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; y.len()];
    f(t + h0, &y1, &mut f1)?;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_dense_output() {
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
        let out = dopri5(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
                Ok(())
            },
            0.0,
            &[1.0, 0.0],
            &times,
            &OdeOptions::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&out) {
            assert!((y[0] - t.cos()).abs() < 1e-9, "t={t}");
            assert!((y[1] + t.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn exponential_growth() {
        let out = dopri5(
            |_, y, dy| {
                dy[0] = y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            &[0.5, 1.0, 2.0],
            &OdeOptions::default(),
        )
        .unwrap();
        assert!((out[2][0] - 2f64.exp()).abs() < 1e-8 * 2f64.exp());
    }

    #[test]
    fn blow_up_underflows() {
        // y' = y², y(0) = 1 blows up at t = 1
        let err = dopri5(
            |_, y, dy| {
                dy[0] = y[0] * y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            &[2.0],
            &OdeOptions::default(),
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::StepSizeUnderflow { time } | Error::TooManySteps { time, .. } if time < 1.0 && time > 0.99)
        );
    }

    #[test]
    fn rejects_backwards_output() {
        let f = |_: f64, _: &[f64], dy: &mut [f64]| {
            dy[0] = 0.0;
            Ok(())
        };
        assert!(dopri5(f, 1.0, &[0.0], &[0.5], &OdeOptions::default()).is_err());
    }
}
