use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::collapse::SlotLayout;
use super::drive::Envelope;
use crate::error::{invalid, Result};
use crate::hilbert::{
    embed_operator, ladder_operator, pauli_operator, LadderKind, PauliKind, QuantumOperator,
    SpaceDescriptor,
};
use crate::units::ghz_to_angular;

/// Reference frame of a Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    #[default]
    Lab,
    /// Jaynes-Cummings: frame rotating at the cavity frequency for both
    /// cavity and qubit (exact, excitation number is conserved).
    /// Driven qubit: frame rotating at the drive frequency with the
    /// rotating-wave approximation.
    Rotating,
}

/// Description of one of the supported model Hamiltonians. All frequencies
/// are ordinary frequencies in GHz.
#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianSpec {
    /// omega_r a^dag a - omega_q/2 sigma_z + g (a sigma_+ + a^dag sigma_-)
    JaynesCummings { omega_r: f64, omega_q: f64, g: f64, n_max: usize, frame: Frame },
    /// omega_r a^dag a - (omega_q - alpha/2)/2 sigma_z + chi (a^dag a + 1/2) sigma_z
    Dispersive { omega_r: f64, omega_q: f64, alpha: f64, chi: f64, n_max: usize },
    /// -omega_1/2 sigma_z1 - omega_2/2 sigma_z2 + g sigma_y1 sigma_y2
    TwoQubit { omega1: f64, omega2: f64, g: f64 },
    /// -omega_q/2 sigma_z + g S(t) cos(omega_d t) sigma_y
    DrivenQubit { omega_q: f64, g: f64, omega_d: f64, envelope: Envelope, frame: Frame },
}

impl HamiltonianSpec {
    /// Qubit slots come first, the cavity (if any) last.
    pub fn space(&self) -> SpaceDescriptor {
        let dims = match self {
            HamiltonianSpec::JaynesCummings { n_max, .. }
            | HamiltonianSpec::Dispersive { n_max, .. } => vec![2, n_max + 1],
            HamiltonianSpec::TwoQubit { .. } => vec![2, 2],
            HamiltonianSpec::DrivenQubit { .. } => vec![2],
        };
        SpaceDescriptor::new(dims).expect("dimensions are at least 2")
    }

    pub fn layout(&self) -> SlotLayout {
        match self {
            HamiltonianSpec::JaynesCummings { .. } | HamiltonianSpec::Dispersive { .. } => {
                SlotLayout { cavity: Some(1), qubits: vec![0] }
            }
            HamiltonianSpec::TwoQubit { .. } => SlotLayout { cavity: None, qubits: vec![0, 1] },
            HamiltonianSpec::DrivenQubit { .. } => SlotLayout { cavity: None, qubits: vec![0] },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive, got {v}")))
            }
        };
        let non_negative = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be non-negative, got {v}")))
            }
        };
        let fock = |n: usize| {
            if n >= 2 {
                Ok(())
            } else {
                Err(invalid(format!("n_max must be at least 2, got {n}")))
            }
        };
        match self {
            HamiltonianSpec::JaynesCummings { omega_r, omega_q, g, n_max, .. } => {
                positive("omega_r", *omega_r)?;
                positive("omega_q", *omega_q)?;
                non_negative("g", *g)?;
                fock(*n_max)
            }
            HamiltonianSpec::Dispersive { omega_r, omega_q, alpha, chi, n_max } => {
                positive("omega_r", *omega_r)?;
                positive("omega_q", *omega_q)?;
                if !alpha.is_finite() || !chi.is_finite() {
                    return Err(invalid("alpha and chi must be finite"));
                }
                fock(*n_max)
            }
            HamiltonianSpec::TwoQubit { omega1, omega2, g } => {
                positive("omega1", *omega1)?;
                positive("omega2", *omega2)?;
                non_negative("g", *g)
            }
            HamiltonianSpec::DrivenQubit { omega_q, g, omega_d, envelope, .. } => {
                positive("omega_q", *omega_q)?;
                positive("omega_d", *omega_d)?;
                non_negative("g", *g)?;
                envelope.validate()
            }
        }
    }
}

/// Real time-dependent coefficient f(t) of a drive term.
pub type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Operator multiplied by a scalar function of time.
#[derive(Clone)]
pub struct DriveTerm {
    pub operator: QuantumOperator,
    pub coefficient: Coefficient,
}

impl fmt::Debug for DriveTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DriveTerm").field("operator", &self.operator).finish_non_exhaustive()
    }
}

/// Hamiltonian in angular units (rad/ns, hbar = 1).
#[derive(Clone, Debug)]
pub enum Hamiltonian {
    Static(QuantumOperator),
    /// H(t) = constant + sum_k f_k(t) H_k.
    TimeDependent { constant: QuantumOperator, drives: Vec<DriveTerm> },
}

impl Hamiltonian {
    pub fn space(&self) -> &SpaceDescriptor {
        match self {
            Hamiltonian::Static(h) => h.space(),
            Hamiltonian::TimeDependent { constant, .. } => constant.space(),
        }
    }

    pub fn at(&self, t: f64) -> QuantumOperator {
        match self {
            Hamiltonian::Static(h) => h.clone(),
            Hamiltonian::TimeDependent { constant, drives } => {
                drives.iter().fold(constant.clone(), |acc, d| {
                    &acc + &(&d.operator * (d.coefficient)(t))
                })
            }
        }
    }

    /// The static operator, if the Hamiltonian has no drive terms.
    pub fn as_static(&self) -> Option<&QuantumOperator> {
        match self {
            Hamiltonian::Static(h) => Some(h),
            Hamiltonian::TimeDependent { .. } => None,
        }
    }
}

pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    let space = spec.space();
    let on = |op: &QuantumOperator, slot: usize| embed_operator(op, slot, &space);
    let sz = pauli_operator(PauliKind::Z);
    let sy = pauli_operator(PauliKind::Y);
    let w = ghz_to_angular;

    match spec {
        HamiltonianSpec::JaynesCummings { omega_r, omega_q, g, n_max, frame } => {
            let a = on(&ladder_operator(n_max + 1, LadderKind::Annihilate)?, 1)?;
            let n = on(&ladder_operator(n_max + 1, LadderKind::Number)?, 1)?;
            let splus = on(&pauli_operator(PauliKind::Plus), 0)?;
            let sz = on(&sz, 0)?;
            let exchange = &(&a * &splus) + &(&a.adjoint() * &splus.adjoint());
            let free = match frame {
                Frame::Lab => &(&n * w(*omega_r)) + &(&sz * (-0.5 * w(*omega_q))),
                Frame::Rotating => &sz * (-0.5 * w(omega_q - omega_r)),
            };
            Ok(Hamiltonian::Static(&free + &(&exchange * w(*g))))
        }
        HamiltonianSpec::Dispersive { omega_r, omega_q, alpha, chi, n_max } => {
            let n = on(&ladder_operator(n_max + 1, LadderKind::Number)?, 1)?;
            let sz = on(&sz, 0)?;
            let id = QuantumOperator::identity(space.clone());
            let pull = &(&n + &(&id * 0.5)) * &sz;
            let h = &(&(&n * w(*omega_r)) + &(&sz * (-0.5 * w(omega_q - alpha / 2.0))))
                + &(&pull * w(*chi));
            Ok(Hamiltonian::Static(h))
        }
        HamiltonianSpec::TwoQubit { omega1, omega2, g } => {
            let z1 = on(&sz, 0)?;
            let z2 = on(&sz, 1)?;
            let yy = &on(&sy, 0)? * &on(&sy, 1)?;
            let h = &(&(&z1 * (-0.5 * w(*omega1))) + &(&z2 * (-0.5 * w(*omega2)))) + &(&yy * w(*g));
            Ok(Hamiltonian::Static(h))
        }
        HamiltonianSpec::DrivenQubit { omega_q, g, omega_d, envelope, frame } => {
            let g = w(*g);
            match frame {
                Frame::Lab => {
                    let wd = w(*omega_d);
                    let env = envelope.clone();
                    Ok(Hamiltonian::TimeDependent {
                        constant: &sz * (-0.5 * w(*omega_q)),
                        drives: vec![DriveTerm {
                            operator: sy,
                            coefficient: Arc::new(move |t| g * env.value(t) * (wd * t).cos()),
                        }],
                    })
                }
                Frame::Rotating => {
                    let constant = &sz * (-0.5 * w(omega_q - omega_d));
                    if let Envelope::Constant { amplitude } = envelope {
                        return Ok(Hamiltonian::Static(&constant + &(&sy * (0.5 * g * amplitude))));
                    }
                    let env = envelope.clone();
                    Ok(Hamiltonian::TimeDependent {
                        constant,
                        drives: vec![DriveTerm {
                            operator: sy,
                            coefficient: Arc::new(move |t| 0.5 * g * env.value(t)),
                        }],
                    })
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn eig_ghz(h: &Hamiltonian) -> Vec<f64> {
        h.as_static().unwrap().eigenvalues().iter().map(|e| e / (2.0 * PI)).collect()
    }

    #[test]
    fn decoupled_jc_spectrum_is_sum_of_bare_energies() {
        let spec = HamiltonianSpec::JaynesCummings {
            omega_r: 7.0,
            omega_q: 6.3,
            g: 0.0,
            n_max: 4,
            frame: Frame::Lab,
        };
        let got = eig_ghz(&build_hamiltonian(&spec).unwrap());
        let mut want: Vec<f64> = (0..5)
            .flat_map(|n| [-0.5 * 6.3, 0.5 * 6.3].map(|q| 7.0 * n as f64 + q))
            .collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn resonant_jc_doublet_split_by_two_g() {
        let spec = HamiltonianSpec::JaynesCummings {
            omega_r: 7.0,
            omega_q: 7.0,
            g: 0.2,
            n_max: 6,
            frame: Frame::Lab,
        };
        let e = eig_ghz(&build_hamiltonian(&spec).unwrap());
        // ground |g,0> at -3.5; the one-excitation doublet sits at 3.5 +- g
        assert!((e[0] + 3.5).abs() < 1e-10);
        assert!((e[1] - 3.3).abs() < 1e-10 && (e[2] - 3.7).abs() < 1e-10);
        assert!((e[2] - e[1] - 0.4).abs() < 1e-10);
    }

    #[test]
    fn two_qubit_degenerate_limit() {
        let spec = HamiltonianSpec::TwoQubit { omega1: 5.0, omega2: 5.0, g: 0.0 };
        let e = eig_ghz(&build_hamiltonian(&spec).unwrap());
        let want = [-5.0, 0.0, 0.0, 5.0];
        for (a, b) in e.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dispersive_pull() {
        let spec = HamiltonianSpec::Dispersive {
            omega_r: 7.0,
            omega_q: 6.0,
            alpha: 0.2,
            chi: 0.006,
            n_max: 3,
        };
        let h = build_hamiltonian(&spec).unwrap();
        let h = h.as_static().unwrap();
        // cavity transition with qubit in |0> (sigma_z = +1): omega_r + chi
        let e = |q: usize, n: usize| h.get(q * 4 + n, q * 4 + n).re / (2.0 * PI);
        assert!((e(0, 1) - e(0, 0) - 7.006).abs() < 1e-12);
        assert!((e(1, 1) - e(1, 0) - 6.994).abs() < 1e-12);
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn driven_frames() {
        let env = Envelope::Constant { amplitude: 1.0 };
        let rot = HamiltonianSpec::DrivenQubit {
            omega_q: 5.0,
            g: 0.5,
            omega_d: 5.0,
            envelope: env.clone(),
            frame: Frame::Rotating,
        };
        let h = build_hamiltonian(&rot).unwrap();
        let e = eig_ghz(&h);
        assert!((e[1] - e[0] - 0.5).abs() < 1e-12);

        let lab = HamiltonianSpec::DrivenQubit {
            omega_q: 5.0,
            g: 0.5,
            omega_d: 5.0,
            envelope: env,
            frame: Frame::Lab,
        };
        let h = build_hamiltonian(&lab).unwrap();
        assert!(h.as_static().is_none());
        let h0 = h.at(0.0);
        assert!((h0.get(0, 1) - Complex64::new(0.0, -2.0 * PI * 0.5)).norm() < 1e-12);
        let quarter = h.at(0.05); // cos(2 pi 5 * 0.05) = 0
        assert!(quarter.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn invalid_specs_rejected() {
        let bad = HamiltonianSpec::JaynesCummings {
            omega_r: 7.0,
            omega_q: 7.0,
            g: -0.1,
            n_max: 5,
            frame: Frame::Lab,
        };
        assert!(build_hamiltonian(&bad).is_err());
        let bad = HamiltonianSpec::Dispersive {
            omega_r: 7.0,
            omega_q: 6.0,
            alpha: 0.2,
            chi: 0.006,
            n_max: 1,
        };
        assert!(build_hamiltonian(&bad).is_err());
        let bad = HamiltonianSpec::TwoQubit { omega1: 0.0, omega2: 5.0, g: 0.1 };
        assert!(build_hamiltonian(&bad).is_err());
    }
}
