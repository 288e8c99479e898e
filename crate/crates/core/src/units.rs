//! Physical constants and unit conversions.
//!
//! Energies are ordinary frequencies E/h in GHz, times are in ns, temperatures
//! in mK. The integrator works in angular units (rad/ns) with hbar = 1.

use std::f64::consts::PI;

/// Planck constant (J s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced flux quantum hbar/(2e) (Wb).
pub const FLUX_QUANTUM: f64 = HBAR / (2.0 * ELEMENTARY_CHARGE);
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Ordinary frequency in GHz to angular frequency in rad/ns.
#[inline]
pub fn ghz_to_angular(f_ghz: f64) -> f64 {
    2.0 * PI * f_ghz
}

/// Ordinary frequency in MHz to angular frequency in rad/ns.
#[inline]
pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    2.0 * PI * f_mhz * 1e-3
}

/// Energy in joules to an ordinary frequency in GHz.
#[inline]
pub fn joules_to_ghz(e: f64) -> f64 {
    e / PLANCK * 1e-9
}

/// Dimensionless ratio h f / (k_B T) for f in GHz and T in mK.
#[inline]
pub fn reduced_energy(f_ghz: f64, t_mk: f64) -> f64 {
    PLANCK * f_ghz * 1e9 / (BOLTZMANN * t_mk * 1e-3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_quantum_matches_reduced_definition() {
        assert!((FLUX_QUANTUM - 3.29106e-16).abs() < 1e-20);
    }
}
