use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::units::mhz_to_angular;

/// Slowly varying envelope S(t) multiplying a microwave drive.
#[derive(Clone, Debug, PartialEq)]
pub enum Envelope {
    Constant { amplitude: f64 },
    /// S(t) = sin(omega_e t) with omega_e / 2pi given in MHz.
    Sine { omega_e_mhz: f64 },
    /// Piecewise-linear samples (t in ns, value); zero outside the table.
    Table { samples: Vec<(f64, f64)> },
}

impl Envelope {
    pub fn validate(&self) -> Result<()> {
        match self {
            Envelope::Constant { amplitude } if !amplitude.is_finite() => {
                Err(invalid("envelope amplitude must be finite"))
            }
            Envelope::Sine { omega_e_mhz } if !(*omega_e_mhz > 0.0 && omega_e_mhz.is_finite()) => {
                Err(invalid("sine envelope frequency must be positive"))
            }
            Envelope::Table { samples } => {
                if samples.len() < 2 {
                    return Err(invalid("envelope table needs at least two samples"));
                }
                if samples.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                    return Err(invalid("envelope table entries must be finite"));
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(invalid("envelope table times must be strictly increasing"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Envelope::Constant { amplitude } => *amplitude,
            Envelope::Sine { omega_e_mhz } => (mhz_to_angular(*omega_e_mhz) * t).sin(),
            Envelope::Table { samples } => {
                let (first, last) = (samples[0].0, samples[samples.len() - 1].0);
                if t < first || t > last {
                    return 0.0;
                }
                let k = samples.partition_point(|s| s.0 <= t).clamp(1, samples.len() - 1);
                let (t0, v0) = samples[k - 1];
                let (t1, v1) = samples[k];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Integral of S over [0, t].
    pub fn integral(&self, t: f64) -> f64 {
        match self {
            Envelope::Constant { amplitude } => amplitude * t,
            Envelope::Sine { omega_e_mhz } => {
                let w = mhz_to_angular(*omega_e_mhz);
                (1.0 - (w * t).cos()) / w
            }
            Envelope::Table { samples } => {
                // integrate segment by segment so the kinks sit on interval ends
                let mut knots: Vec<f64> = samples
                    .iter()
                    .map(|s| s.0)
                    .filter(|&k| k > 0.0 && k < t)
                    .collect();
                knots.insert(0, 0.0);
                knots.push(t);
                knots
                    .windows(2)
                    .map(|w| adaptive_simpson(&|x| self.value(x), w[0], w[1], 1e-10))
                    .sum()
            }
        }
    }
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 40)
}

/// Rotation angle -g * integral_0^t S(t') dt' (radians), g / 2pi in MHz.
pub fn pulse_angle(envelope: &Envelope, g_mhz: f64, t: f64) -> Result<f64> {
    envelope.validate()?;
    if !(t >= 0.0) {
        return Err(invalid(format!("pulse time must be non-negative, got {t}")));
    }
    Ok(-mhz_to_angular(g_mhz) * envelope.integral(t))
}

/// Shortest pulse whose rotation angle reaches `target` radians in magnitude.
pub fn duration_for_angle(envelope: &Envelope, g_mhz: f64, target: f64) -> Result<f64> {
    envelope.validate()?;
    if !(target > 0.0) || !target.is_finite() {
        return Err(invalid(format!("target angle must be positive, got {target}")));
    }
    let g = mhz_to_angular(g_mhz);
    let horizon = match envelope {
        Envelope::Constant { amplitude } => {
            let rate = (g * amplitude).abs();
            if rate == 0.0 {
                return Err(Error::UnreachableAngle { target, max: 0.0 });
            }
            return Ok(target / rate);
        }
        // |Theta| is maximal at half a period and periodic afterwards
        Envelope::Sine { omega_e_mhz } => PI / mhz_to_angular(*omega_e_mhz),
        Envelope::Table { samples } => samples[samples.len() - 1].0,
    };
    let angle = |t: f64| (g * envelope.integral(t)).abs();

    const SCAN: usize = 2048;
    let mut best = 0.0f64;
    let mut prev_t = 0.0;
    for k in 1..=SCAN {
        let t = horizon * k as f64 / SCAN as f64;
        let a = angle(t);
        if a >= target {
            return Ok(bisect(&|x| angle(x) - target, prev_t, t));
        }
        best = best.max(a);
        prev_t = t;
    }
    Err(Error::UnreachableAngle { target, max: best })
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * hi.abs().max(1e-12) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form Rabi excitation probability g^2/Omega^2 sin^2(Omega t / 2)
/// with Omega = sqrt(g^2 + (omega_q - omega_d)^2). `g_mhz` is g/2pi in MHz,
/// the qubit and drive frequencies are in GHz.
pub fn rabi_probability_analytic(g_mhz: f64, omega_q: f64, omega_d: f64, t: f64) -> Result<f64> {
    if !(g_mhz >= 0.0) {
        return Err(invalid("drive strength must be non-negative"));
    }
    let g = mhz_to_angular(g_mhz);
    let detuning = 2.0 * PI * (omega_q - omega_d);
    let omega_r = g.hypot(detuning);
    if omega_r == 0.0 {
        return Ok(0.0);
    }
    Ok((g / omega_r).powi(2) * (0.5 * omega_r * t).sin().powi(2))
}
