//! Finite-temperature bath quantities.
//!
//! Rates are ordinary frequencies in MHz (rate / 2pi), temperatures in mK.

use crate::error::{invalid, Result};
use crate::units::reduced_energy;

/// Temperature and bare dissipation rates of a qubit-cavity bath.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathSpec {
    pub temperature_mk: f64,
    /// Resonator energy decay kappa_1 (MHz).
    pub kappa1: f64,
    /// Resonator pure dephasing kappa_phi (MHz).
    pub kappa_phi: f64,
    /// Qubit energy decay Gamma_1 (MHz).
    pub gamma1: f64,
    /// Qubit pure dephasing Gamma_phi (MHz).
    pub gamma_phi: f64,
}

impl BathSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature_mk > 0.0) {
            return Err(invalid("bath temperature must be positive"));
        }
        let rates = [self.kappa1, self.kappa_phi, self.gamma1, self.gamma_phi];
        if rates.iter().any(|&r| !(r >= 0.0) || !r.is_finite()) {
            return Err(invalid("dissipation rates must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Emission/absorption split of a decay channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalRates {
    pub kappa_down: f64,
    pub kappa_up: f64,
    pub n_th: f64,
    /// Transverse rate base/2 + dephasing (MHz).
    pub kappa2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Resonator,
    Qubit,
}

/// Boltzmann factor and two-level excited-state occupation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Boltzmann {
    pub factor: f64,
    pub p_excited: f64,
}

fn check(f_ghz: f64, t_mk: f64) -> Result<f64> {
    if !(f_ghz > 0.0) || !(t_mk > 0.0) {
        return Err(invalid(format!(
            "frequency ({f_ghz} GHz) and temperature ({t_mk} mK) must be positive"
        )));
    }
    Ok(reduced_energy(f_ghz, t_mk))
}

pub fn boltzmann_excitation(f_ghz: f64, t_mk: f64) -> Result<Boltzmann> {
    let x = check(f_ghz, t_mk)?;
    let factor = (-x).exp();
    Ok(Boltzmann { factor, p_excited: factor / (1.0 + factor) })
}

/// Bose-Einstein occupation 1/(exp(hf/kT) - 1).
pub fn thermal_occupancy(f_ghz: f64, t_mk: f64) -> Result<f64> {
    let x = check(f_ghz, t_mk)?;
    Ok(1.0 / x.exp_m1())
}

pub fn thermal_rates(bath: &BathSpec, f_ghz: f64, subsystem: Subsystem) -> Result<ThermalRates> {
    bath.validate()?;
    let n_th = thermal_occupancy(f_ghz, bath.temperature_mk)?;
    let (base, dephasing) = match subsystem {
        Subsystem::Resonator => (bath.kappa1, bath.kappa_phi),
        Subsystem::Qubit => (bath.gamma1, bath.gamma_phi),
    };
    Ok(ThermalRates {
        kappa_down: (1.0 + n_th) * base,
        kappa_up: n_th * base,
        n_th,
        kappa2: base / 2.0 + dephasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bath(t: f64, k1: f64, kphi: f64) -> BathSpec {
        BathSpec { temperature_mk: t, kappa1: k1, kappa_phi: kphi, gamma1: 0.01, gamma_phi: 0.0 }
    }

    #[test]
    fn boltzmann_examples() {
        let b = boltzmann_excitation(7.0, 200.0).unwrap();
        assert!((b.factor - 0.1866).abs() < 5e-4, "{}", b.factor);
        assert!((b.p_excited - 0.157).abs() < 5e-4);
        let b = boltzmann_excitation(7.0, 1000.0).unwrap();
        assert!((b.factor - 0.715).abs() < 5e-4);
        assert!((b.p_excited - 0.417).abs() < 5e-4);
        let hot = boltzmann_excitation(7.0, 1e9).unwrap();
        assert!((hot.p_excited - 0.5).abs() < 1e-6);
        assert!(boltzmann_excitation(0.0, 10.0).is_err());
        assert!(boltzmann_excitation(5.0, -1.0).is_err());
    }

    #[test]
    fn occupancy_examples() {
        assert!((thermal_occupancy(7.0, 200.0).unwrap() - 0.229).abs() < 5e-4);
        assert!((thermal_occupancy(7.0, 1000.0).unwrap() - 2.506).abs() < 2e-3);
        assert!(thermal_occupancy(7.0, 1.0).unwrap() < 1e-100);
    }

    #[test]
    fn rate_examples() {
        let r = thermal_rates(&bath(1e-3, 0.5, 0.0), 7.0, Subsystem::Resonator).unwrap();
        assert!(r.kappa_up.abs() < 1e-300 && (r.kappa_down - 0.5).abs() < 1e-15);

        let r = thermal_rates(&bath(200.0, 0.5, 0.0), 7.0, Subsystem::Resonator).unwrap();
        assert!((r.kappa_down - 0.6146).abs() < 1e-4);
        assert!((r.kappa_up - 0.1146).abs() < 1e-4);

        let r = thermal_rates(&bath(200.0, 0.5, 0.25), 7.0, Subsystem::Resonator).unwrap();
        assert!((r.kappa2 - 0.5).abs() < 1e-15);

        let q = thermal_rates(&bath(200.0, 0.5, 0.25), 7.0, Subsystem::Qubit).unwrap();
        assert!((q.kappa2 - 0.005).abs() < 1e-15);
        assert!(thermal_rates(&bath(200.0, -0.5, 0.0), 7.0, Subsystem::Qubit).is_err());
    }
}
