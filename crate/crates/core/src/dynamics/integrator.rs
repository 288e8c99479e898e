//! Dormand-Prince 5(4) with adaptive step control on complex state vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegratorStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

fn combine(out: &mut [Complex64], y: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, k) in terms {
            acc += k[i] * c;
        }
        *o = y[i] + acc * h;
    }
}

/// Max-norm so that the tolerance bounds every component, including the
/// small coherences that an RMS norm would average away.
fn error_norm(err: &[Complex64], y: &[Complex64], y_new: &[Complex64], ctl: &StepControl) -> f64 {
    err.iter()
        .zip(y.iter().zip(y_new))
        .map(|(e, (a, b))| e.norm() / (ctl.atol + ctl.rtol * a.norm().max(b.norm())))
        .fold(0.0, f64::max)
}

fn rms(v: &[Complex64], y: &[Complex64], ctl: &StepControl) -> f64 {
    let n = v.len().max(1) as f64;
    let sum: f64 = v
        .iter()
        .zip(y)
        .map(|(a, b)| (a.norm() / (ctl.atol + ctl.rtol * b.norm())).powi(2))
        .sum();
    (sum / n).sqrt()
}

/// Integrates y' = f(t, y) through every time in `outputs` (strictly
/// increasing, the first equal to the start time).
///
/// `after_step` may project the state after each accepted step. `record` is
/// called once per output time with the state at exactly that time.
pub(crate) fn integrate<F, P, R>(
    mut rhs: F,
    y0: Vec<Complex64>,
    outputs: &[f64],
    ctl: StepControl,
    mut after_step: P,
    mut record: R,
) -> Result<IntegratorStats>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
    P: FnMut(f64, &mut [Complex64]) -> Result<()>,
    R: FnMut(usize, f64, &[Complex64]) -> Result<()>,
{
    let mut stats = IntegratorStats::default();
    let n = y0.len();
    let mut y = y0;
    let Some(&t0) = outputs.first() else {
        return Ok(stats);
    };
    record(0, t0, &y)?;
    if outputs.len() == 1 {
        return Ok(stats);
    }

    let zero = Complex64::new(0.0, 0.0);
    let mut k: Vec<Vec<Complex64>> = vec![vec![zero; n]; 7];
    let mut tmp = vec![zero; n];
    let mut y_new = vec![zero; n];
    let mut err = vec![zero; n];

    let mut t = t0;
    rhs(t, &y, &mut k[0]);
    stats.rhs_evaluations += 1;

    // initial step from the local scale of y and f
    let mut h = {
        let d0 = rms(&y, &y, &ctl);
        let d1 = rms(&k[0], &y, &ctl);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let span = outputs[outputs.len() - 1] - t0;
        h0.min(span)
    };

    let mut next_out = 1;
    while next_out < outputs.len() {
        let target = outputs[next_out];
        if stats.accepted_steps + stats.rejected_steps >= ctl.max_steps {
            return Err(Error::Integration {
                time: t,
                reason: format!("exceeded {} steps", ctl.max_steps),
            });
        }
        let mut hits_output = false;
        if t + h >= target || (target - (t + h)) < 1e-12 * target.abs().max(1.0) {
            h = target - t;
            hits_output = true;
        }
        if h <= f64::EPSILON * t.abs().max(1.0) * 16.0 {
            return Err(Error::Integration { time: t, reason: "step size underflow".into() });
        }

        {
            let (k1, rest) = k.split_at_mut(1);
            let k1 = &k1[0];
            combine(&mut tmp, &y, h, &[(A21, k1)]);
            rhs(t + C2 * h, &tmp, &mut rest[0]);
            combine(&mut tmp, &y, h, &[(A31, k1), (A32, &rest[0])]);
            rhs(t + C3 * h, &tmp, &mut rest[1]);
            combine(&mut tmp, &y, h, &[(A41, k1), (A42, &rest[0]), (A43, &rest[1])]);
            rhs(t + C4 * h, &tmp, &mut rest[2]);
            combine(
                &mut tmp,
                &y,
                h,
                &[(A51, k1), (A52, &rest[0]), (A53, &rest[1]), (A54, &rest[2])],
            );
            rhs(t + C5 * h, &tmp, &mut rest[3]);
            combine(
                &mut tmp,
                &y,
                h,
                &[(A61, k1), (A62, &rest[0]), (A63, &rest[1]), (A64, &rest[2]), (A65, &rest[3])],
            );
            rhs(t + h, &tmp, &mut rest[4]);
            combine(
                &mut y_new,
                &y,
                h,
                &[(B1, k1), (B3, &rest[1]), (B4, &rest[2]), (B5, &rest[3]), (B6, &rest[4])],
            );
            rhs(t + h, &y_new, &mut rest[5]);
            stats.rhs_evaluations += 6;
            for i in 0..n {
                err[i] = (k1[i] * E1
                    + rest[1][i] * E3
                    + rest[2][i] * E4
                    + rest[3][i] * E5
                    + rest[4][i] * E6
                    + rest[5][i] * E7)
                    * h;
            }
        }

        let en = error_norm(&err, &y, &y_new, &ctl);
        if !en.is_finite() {
            return Err(Error::Integration { time: t, reason: "non-finite error estimate".into() });
        }
        if en <= 1.0 {
            stats.accepted_steps += 1;
            t = if hits_output { target } else { t + h };
            std::mem::swap(&mut y, &mut y_new);
            after_step(t, &mut y)?;
            // the projection may move y, so restart the stage sequence from it
            rhs(t, &y, &mut k[0]);
            stats.rhs_evaluations += 1;
            if hits_output {
                record(next_out, t, &y)?;
                next_out += 1;
            }
            let factor = if en == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * en.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h *= factor;
        } else {
            stats.rejected_steps += 1;
            h *= (SAFETY * en.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> StepControl {
        StepControl { rtol: 1e-10, atol: 1e-12, max_steps: 100_000 }
    }

    #[test]
    fn exponential_decay_and_rotation() {
        let rate = Complex64::new(-0.3, 2.0);
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let mut got = Vec::new();
        let stats = integrate(
            |_, y, dy| dy[0] = rate * y[0],
            vec![Complex64::new(1.0, 0.0)],
            &times,
            ctl(),
            |_, _| Ok(()),
            |_, t, y| {
                got.push((t, y[0]));
                Ok(())
            },
        )
        .unwrap();
        assert_eq!(got.len(), times.len());
        for (t, y) in got {
            assert!((y - (rate * t).exp()).norm() < 1e-8);
        }
        assert!(stats.accepted_steps > 0);
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos t, y(0) = 0
        let times = [0.0, 1.0, 2.0, 7.5];
        let mut last = Complex64::new(0.0, 0.0);
        integrate(
            |t, _, dy| dy[0] = Complex64::new(t.cos(), 0.0),
            vec![Complex64::new(0.0, 0.0)],
            &times,
            ctl(),
            |_, _| Ok(()),
            |_, _, y| {
                last = y[0];
                Ok(())
            },
        )
        .unwrap();
        assert!((last.re - 7.5f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn step_budget_is_enforced() {
        let r = integrate(
            |_, y, dy| dy[0] = y[0] * Complex64::new(0.0, 1e4),
            vec![Complex64::new(1.0, 0.0)],
            &[0.0, 100.0],
            StepControl { rtol: 1e-10, atol: 1e-12, max_steps: 10 },
            |_, _| Ok(()),
            |_, _, _| Ok(()),
        );
        assert!(matches!(r, Err(Error::Integration { .. })));
    }
}
