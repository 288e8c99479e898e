//! Closed-form cavity physics: mode frequencies, thermal quality factor and
//! loss rates.

use crate::error::{invalid, Result};
use crate::units::SPEED_OF_LIGHT;

/// Cavity shapes. Lengths in metres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CavityGeometry {
    Rectangular { lx: f64, ly: f64, lz: f64 },
    /// Coaxial quarter-wave stub of length `stub_length` with inner radius
    /// `inner_radius` and outer radius `outer_radius`.
    QuarterWave { stub_length: f64, inner_radius: f64, outer_radius: f64 },
}

impl CavityGeometry {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CavityGeometry::Rectangular { lx, ly, lz } => {
                if [lx, ly, lz].iter().any(|&l| !(l > 0.0)) {
                    return Err(invalid("cavity edges must be positive"));
                }
            }
            CavityGeometry::QuarterWave { stub_length, inner_radius, outer_radius } => {
                if !(stub_length > 0.0) || !(inner_radius > 0.0) {
                    return Err(invalid("stub length and radii must be positive"));
                }
                if !(outer_radius > inner_radius) {
                    return Err(invalid("outer radius must exceed inner radius"));
                }
            }
        }
        Ok(())
    }
}

/// Resonance of the (n_x, n_y, n_z) mode of a rectangular box (GHz).
///
/// Mode names such as "TE110" depend on which edge is taken as the
/// propagation axis; modes here are addressed by the explicit index triple.
pub fn rectangular_mode_frequency(geometry: &CavityGeometry, n: [u32; 3]) -> Result<f64> {
    geometry.validate()?;
    let CavityGeometry::Rectangular { lx, ly, lz } = *geometry else {
        return Err(invalid("rectangular mode frequency needs a rectangular geometry"));
    };
    if n.iter().filter(|&&k| k > 0).count() < 2 {
        return Err(invalid(format!("mode {n:?} needs at least two non-zero indices")));
    }
    let term = |k: u32, l: f64| (k as f64 / l).powi(2);
    let f = SPEED_OF_LIGHT / 2.0 * (term(n[0], lx) + term(n[1], ly) + term(n[2], lz)).sqrt();
    Ok(f * 1e-9)
}

/// c / (4 L) in GHz.
pub fn quarter_wave_frequency(stub_length: f64) -> Result<f64> {
    if !(stub_length > 0.0) {
        return Err(invalid(format!("stub length must be positive, got {stub_length}")));
    }
    Ok(SPEED_OF_LIGHT / (4.0 * stub_length) * 1e-9)
}

/// Exponential fit of the quality factor of an aluminium cavity against
/// temperature: Q = q_ref * amplitude * exp(-T / decay_mk).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityModel {
    /// Quality factor at 200 mK.
    pub q_ref: f64,
    pub amplitude: f64,
    pub decay_mk: f64,
}

impl Default for QualityModel {
    fn default() -> Self {
        Self { q_ref: 1.0, amplitude: 9.06, decay_mk: 105.0 }
    }
}

impl QualityModel {
    pub fn with_reference(q_ref: f64) -> Self {
        Self { q_ref, ..Self::default() }
    }
}

pub fn quality_factor_thermal(t_mk: f64, model: &QualityModel) -> Result<f64> {
    if !(t_mk > 0.0) {
        return Err(invalid(format!("temperature must be positive, got {t_mk} mK")));
    }
    if !(model.q_ref > 0.0) || !(model.amplitude > 0.0) || !(model.decay_mk > 0.0) {
        return Err(invalid("quality model parameters must be positive"));
    }
    Ok(model.q_ref * model.amplitude * (-t_mk / model.decay_mk).exp())
}

/// Energy decay rate kappa_1 / 2pi = f / Q, returned in MHz.
pub fn kappa_from_quality(f_ghz: f64, q: f64) -> Result<f64> {
    if !(f_ghz > 0.0) || !(q > 0.0) {
        return Err(invalid("frequency and quality factor must be positive"));
    }
    Ok(f_ghz / q * 1e3)
}

/// Loss budget of a coaxial quarter-wave cavity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoaxLosses {
    pub q_conductor: f64,
    pub q_dielectric: f64,
    pub q_total: f64,
}

/// Conductor and dielectric quality factors of a coaxial line.
///
/// The conductor term is evaluated as 1/Q_C = 2 sqrt(pi f mu sigma) ln(b/a) /
/// (1/a + 1/b) with f in Hz. That expression is not dimensionless, so Q_C is
/// only meaningful for relative comparisons (e.g. its sqrt(sigma) scaling).
/// The dielectric term uses Q_d = 1/tan(delta).
pub fn coax_losses(
    a: f64,
    b: f64,
    f_ghz: f64,
    mu: f64,
    sigma: f64,
    tan_delta: f64,
) -> Result<CoaxLosses> {
    if !(a > 0.0) || !(b > a) {
        return Err(invalid(format!("radii must satisfy b > a > 0 (a = {a}, b = {b})")));
    }
    if !(f_ghz > 0.0) || !(sigma > 0.0) || !(mu > 0.0) {
        return Err(invalid("frequency, permeability and conductivity must be positive"));
    }
    if !(tan_delta >= 0.0) {
        return Err(invalid("loss tangent must be non-negative"));
    }
    let f = f_ghz * 1e9;
    let inv_qc =
        2.0 * (std::f64::consts::PI * f * mu * sigma).sqrt() * (b / a).ln() / (1.0 / a + 1.0 / b);
    let q_conductor = 1.0 / inv_qc;
    let q_dielectric = 1.0 / tan_delta;
    let q_total = 1.0 / (inv_qc + tan_delta);
    Ok(CoaxLosses { q_conductor, q_dielectric, q_total })
}
