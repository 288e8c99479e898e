//! Circuit quantization: LC oscillators, Josephson junctions, transmon
//! spectra and participation-ratio based Kerr parameters.
//!
//! All energies are ordinary frequencies E/h in GHz.

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::units::{joules_to_ghz, ELEMENTARY_CHARGE, FLUX_QUANTUM};

/// Quantized LC oscillator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LcParams {
    /// Capacitance (F).
    pub capacitance: f64,
    /// Inductance (H).
    pub inductance: f64,
    /// Charging energy e^2/(2C) (GHz).
    pub e_c: f64,
    /// Inductive energy Phi0^2/L (GHz).
    pub e_l: f64,
    /// Resonator frequency sqrt(8 E_C E_L) (GHz).
    pub omega_r: f64,
    /// Zero-point parameter sqrt(2 E_C / E_L).
    pub xi: f64,
}

impl LcParams {
    /// Harmonic level E_n = omega_r (n + 1/2) in GHz.
    pub fn level(&self, n: usize) -> f64 {
        self.omega_r * (n as f64 + 0.5)
    }
}

/// Charging energy e^2/(2C) in GHz for a capacitance in farads.
pub fn charging_energy(capacitance: f64) -> Result<f64> {
    if !(capacitance > 0.0) {
        return Err(invalid(format!("capacitance must be positive, got {capacitance}")));
    }
    Ok(joules_to_ghz(ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * capacitance)))
}

/// Inductive energy Phi0^2/L in GHz for an inductance in henries.
pub fn inductive_energy(inductance: f64) -> Result<f64> {
    if !(inductance > 0.0) {
        return Err(invalid(format!("inductance must be positive, got {inductance}")));
    }
    Ok(joules_to_ghz(FLUX_QUANTUM * FLUX_QUANTUM / inductance))
}

pub fn lc_quantize(capacitance: f64, inductance: f64) -> Result<LcParams> {
    let e_c = charging_energy(capacitance)?;
    let e_l = inductive_energy(inductance)?;
    Ok(LcParams {
        capacitance,
        inductance,
        e_c,
        e_l,
        omega_r: (8.0 * e_c * e_l).sqrt(),
        xi: (2.0 * e_c / e_l).sqrt(),
    })
}

/// Junction and shunt parameters of a transmon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransmonParams {
    /// Josephson energy (GHz).
    pub e_j: f64,
    /// Charging energy (GHz).
    pub e_c: f64,
    /// Junction inductance at zero phase (H).
    pub l_j: f64,
    /// Critical current (A).
    pub i_c: f64,
    /// Total capacitance (F).
    pub c_total: f64,
    /// Normal-state resistance (Ohm).
    pub r_n: f64,
}

impl TransmonParams {
    pub fn ej_over_ec(&self) -> f64 {
        self.e_j / self.e_c
    }

    /// Perturbative treatments need E_J/E_C well above one.
    pub fn in_transmon_regime(&self) -> bool {
        self.ej_over_ec() > 1.0
    }
}

/// Junction parameters from the critical current, shunt capacitance and
/// superconducting gap `delta0_ev` (eV), using the Ambegaokar-Baratoff
/// relation for the normal-state resistance.
pub fn junction_parameters(i_c: f64, c_total: f64, delta0_ev: f64) -> Result<TransmonParams> {
    if !(i_c > 0.0) || !(delta0_ev > 0.0) {
        return Err(invalid("critical current and gap must be positive"));
    }
    let e_c = charging_energy(c_total)?;
    let delta_joule = delta0_ev * ELEMENTARY_CHARGE;
    Ok(TransmonParams {
        e_j: joules_to_ghz(FLUX_QUANTUM * i_c),
        e_c,
        l_j: FLUX_QUANTUM / i_c,
        i_c,
        c_total,
        r_n: std::f64::consts::PI * delta_joule / (2.0 * ELEMENTARY_CHARGE * i_c),
    })
}

/// Josephson energy (GHz) of a junction with inductance `l_j` (H).
pub fn josephson_energy_from_inductance(l_j: f64) -> Result<f64> {
    inductive_energy(l_j)
}

/// How transmon levels are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransmonMethod {
    /// Perturbation theory in the cosine expansion around the harmonic
    /// oscillator. Order 0 is harmonic, order 1 adds the quartic term to first
    /// order, order 2 adds the quartic term to second order together with the
    /// sextic term to first order.
    Perturbative { order: u8 },
    /// Diagonalization of 4 E_C n^2 - E_J cos(phi) in the charge basis
    /// n in [-cutoff, cutoff].
    Exact { charge_cutoff: usize },
}

/// Transmon levels relative to the ground state.
#[derive(Clone, Debug, PartialEq)]
pub struct TransmonSpectrum {
    pub levels: Vec<f64>,
    pub warning: Option<String>,
}

impl TransmonSpectrum {
    pub fn qubit_frequency(&self) -> f64 {
        self.levels[1]
    }

    pub fn anharmonicity(&self) -> Result<f64> {
        anharmonicity(&self.levels)
    }
}

const FOCK_BASIS: usize = 30;
const CUTOFF_REL_TOL: f64 = 1e-9;

pub fn transmon_spectrum(
    e_j: f64,
    e_c: f64,
    method: TransmonMethod,
    n_levels: usize,
) -> Result<TransmonSpectrum> {
    if !(e_j > 0.0) || !(e_c > 0.0) {
        return Err(invalid("E_J and E_C must be positive"));
    }
    if n_levels < 2 {
        return Err(invalid("at least two levels are required"));
    }
    match method {
        TransmonMethod::Perturbative { order } => {
            if order > 2 {
                return Err(invalid(format!("perturbative order {order} not in 0..=2")));
            }
            let levels = perturbative_levels(e_j, e_c, order, n_levels);
            let warning = (e_j / e_c <= 1.0).then(|| {
                format!(
                    "E_J/E_C = {:.3} is outside the transmon regime; perturbative levels are unreliable",
                    e_j / e_c
                )
            });
            Ok(TransmonSpectrum { levels, warning })
        }
        TransmonMethod::Exact { charge_cutoff } => {
            if charge_cutoff < 10 {
                return Err(invalid(format!("charge cutoff {charge_cutoff} is below 10")));
            }
            if n_levels > 2 * charge_cutoff + 1 {
                return Err(invalid("more levels requested than charge states"));
            }
            let levels = charge_basis_levels(e_j, e_c, charge_cutoff, n_levels);
            let doubled = charge_basis_levels(e_j, e_c, 2 * charge_cutoff, n_levels);
            for (k, (a, b)) in levels.iter().zip(&doubled).enumerate().skip(1) {
                let rel = (a - b).abs() / b.abs();
                if rel > CUTOFF_REL_TOL {
                    return Err(Error::NotConverged(format!(
                        "level {k} moved by {rel:e} (relative) when the charge cutoff was doubled from {charge_cutoff}"
                    )));
                }
            }
            Ok(TransmonSpectrum { levels, warning: None })
        }
    }
}

/// Real matrix of (a + a^dagger) on `dim` Fock levels.
fn position_quadrature(dim: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        let s = (n as f64).sqrt();
        x[(n - 1, n)] = s;
        x[(n, n - 1)] = s;
    }
    x
}

fn perturbative_levels(e_j: f64, e_c: f64, order: u8, n_levels: usize) -> Vec<f64> {
    let dim = FOCK_BASIS.max(n_levels + 10);
    let omega = (8.0 * e_c * e_j).sqrt();
    let xi = (2.0 * e_c / e_j).sqrt();
    let x = position_quadrature(dim);
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let x6 = &x4 * &x2;
    // phi = sqrt(xi) (a + a^dagger); cos(phi) beyond the quadratic term
    let v4 = x4 * (-e_j * xi * xi / 24.0);
    let v6 = x6 * (e_j * xi * xi * xi / 720.0);
    // zero-point offset omitted: it cancels in every level difference
    let bare = |n: usize| omega * n as f64;

    let energies: Vec<f64> = (0..n_levels)
        .map(|n| {
            let mut e = bare(n);
            if order >= 1 {
                e += v4[(n, n)];
            }
            if order >= 2 {
                e += (0..dim)
                    .filter(|&k| k != n)
                    .map(|k| v4[(k, n)] * v4[(k, n)] / (bare(n) - bare(k)))
                    .sum::<f64>();
                e += v6[(n, n)];
            }
            e
        })
        .collect();
    energies.iter().map(|e| e - energies[0]).collect()
}

fn charge_basis_levels(e_j: f64, e_c: f64, cutoff: usize, n_levels: usize) -> Vec<f64> {
    let size = 2 * cutoff + 1;
    let mut h = DMatrix::zeros(size, size);
    for i in 0..size {
        let n = i as f64 - cutoff as f64;
        h[(i, i)] = 4.0 * e_c * n * n;
        if i + 1 < size {
            h[(i, i + 1)] = -e_j / 2.0;
            h[(i + 1, i)] = -e_j / 2.0;
        }
    }
    let vals = linalg::symmetric_eigenvalues(h);
    vals[..n_levels].iter().map(|e| e - vals[0]).collect()
}

/// (E1 - E0) - (E2 - E1).
pub fn anharmonicity(levels: &[f64]) -> Result<f64> {
    if levels.len() < 3 {
        return Err(invalid(format!("anharmonicity needs 3 levels, got {}", levels.len())));
    }
    Ok((levels[1] - levels[0]) - (levels[2] - levels[1]))
}

/// Zero-point phase variance of mode `m` across junction `J`:
/// p_mJ * omega_m / (2 E_J).
pub fn epr_zero_point(p_mj: f64, omega_m: f64, e_j: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_mj) {
        return Err(invalid(format!("participation ratio {p_mj} outside [0, 1]")));
    }
    if !(omega_m > 0.0) || !(e_j > 0.0) {
        return Err(invalid("mode frequency and E_J must be positive"));
    }
    Ok(p_mj * omega_m / (2.0 * e_j))
}

/// One electromagnetic mode seen by a junction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EprMode {
    /// Linear mode frequency (GHz).
    pub omega_m: f64,
    /// Participation ratio of the junction in this mode.
    pub p_mj: f64,
}

/// Modes plus the junction they share.
#[derive(Clone, Debug, PartialEq)]
pub struct EprInput {
    pub modes: Vec<EprMode>,
    pub e_j: f64,
}

impl EprInput {
    pub fn zero_point(&self) -> Result<Vec<f64>> {
        self.modes
            .iter()
            .map(|m| epr_zero_point(m.p_mj, m.omega_m, self.e_j))
            .collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.omega_m).collect()
    }
}

/// Dressed mode parameters from diagonalizing the quartic junction
/// Hamiltonian. Shifts follow the positive convention used for transmon
/// anharmonicity: `alpha_m = (E1 - E0) - (E2 - E1)` and
/// `chi_mn = E(1_m) + E(1_n) - E(1_m 1_n) - E(0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KerrResult {
    /// Dressed 0 -> 1 transition per mode (GHz).
    pub frequencies: Vec<f64>,
    /// Self-Kerr per mode (GHz).
    pub alpha: Vec<f64>,
    /// Cross-Kerr matrix (GHz), zero on the diagonal.
    pub chi: Vec<Vec<f64>>,
}

const KERR_CONVERGENCE: f64 = 0.01;

pub fn kerr_matrix(xi: &[f64], omega: &[f64], e_j: f64, fock_dim: usize) -> Result<KerrResult> {
    if xi.len() != omega.len() || xi.is_empty() {
        return Err(invalid("xi and omega must be non-empty lists of equal length"));
    }
    if fock_dim < 4 {
        return Err(invalid(format!("Fock dimension {fock_dim} is below 4")));
    }
    if xi.iter().any(|&x| !(x >= 0.0)) || omega.iter().any(|&w| !(w > 0.0)) || !(e_j > 0.0) {
        return Err(invalid("xi must be non-negative, frequencies and E_J positive"));
    }
    let base = kerr_at(xi, omega, e_j, fock_dim);
    let refined = kerr_at(xi, omega, e_j, fock_dim + 2);
    let moved = |a: f64, b: f64| (a - b).abs() > KERR_CONVERGENCE * b.abs().max(1e-9);
    let mut drift = base
        .alpha
        .iter()
        .zip(&refined.alpha)
        .chain(base.frequencies.iter().zip(&refined.frequencies));
    let chi_drift = base
        .chi
        .iter()
        .flatten()
        .zip(refined.chi.iter().flatten())
        .any(|(&a, &b)| moved(a, b));
    if chi_drift || drift.any(|(&a, &b)| moved(a, b)) {
        return Err(Error::NotConverged(format!(
            "Kerr parameters change by more than 1% between Fock dimensions {fock_dim} and {}",
            fock_dim + 2
        )));
    }
    Ok(base)
}

fn kerr_at(xi: &[f64], omega: &[f64], e_j: f64, fock_dim: usize) -> KerrResult {
    let modes = xi.len();
    let total = fock_dim.pow(modes as u32);
    let embed = |single: &DMatrix<f64>, slot: usize| {
        let left = fock_dim.pow(slot as u32);
        let right = fock_dim.pow((modes - slot - 1) as u32);
        DMatrix::<f64>::identity(left, left)
            .kronecker(single)
            .kronecker(&DMatrix::<f64>::identity(right, right))
    };
    let quad = position_quadrature(fock_dim);
    let number = DMatrix::from_fn(fock_dim, fock_dim, |i, j| if i == j { i as f64 } else { 0.0 });

    let mut h = DMatrix::<f64>::zeros(total, total);
    let mut phi = DMatrix::<f64>::zeros(total, total);
    for m in 0..modes {
        h += embed(&number, m) * omega[m];
        phi += embed(&quad, m) * xi[m].sqrt();
    }
    let phi2 = &phi * &phi;
    h -= (&phi2 * &phi2) * (e_j / 24.0);

    let (values, vectors) = linalg::symmetric_eigh(h);
    let flat = |levels: &[usize]| levels.iter().fold(0, |acc, &l| acc * fock_dim + l);
    let energy_of = |levels: &[usize]| {
        let bare = flat(levels);
        let mut best = 0;
        let mut best_overlap = -1.0;
        for k in 0..total {
            let ov = vectors[(bare, k)].abs();
            // ties resolved towards the lower eigenvalue (ascending scan)
            if ov > best_overlap + 1e-12 {
                best_overlap = ov;
                best = k;
            }
        }
        values[best]
    };

    let ground = energy_of(&vec![0; modes]);
    let excite = |counts: &[(usize, usize)]| {
        let mut lv = vec![0; modes];
        for &(m, n) in counts {
            lv[m] += n;
        }
        energy_of(&lv) - ground
    };
    let single: Vec<f64> = (0..modes).map(|m| excite(&[(m, 1)])).collect();
    let alpha = (0..modes)
        .map(|m| 2.0 * single[m] - excite(&[(m, 2)]))
        .collect();
    let mut chi = vec![vec![0.0; modes]; modes];
    for m in 0..modes {
        for n in (m + 1)..modes {
            let c = single[m] + single[n] - excite(&[(m, 1), (n, 1)]);
            chi[m][n] = c;
            chi[n][m] = c;
        }
    }
    KerrResult { frequencies: single, alpha, chi }
}

/// Qubit-cavity coupling sqrt(chi * delta) in the dispersive regime (GHz).
pub fn coupling_from_dispersive(chi: f64, delta: f64) -> Result<f64> {
    let product = chi * delta;
    if product < 0.0 || !product.is_finite() {
        return Err(invalid(format!("chi * delta = {product} must be non-negative")));
    }
    Ok(product.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn charging_energy_examples() {
        // 0.0866 pF is the pad capacitance quoted with E_C = 223 MHz
        let lc = lc_quantize(0.0866e-12, 10e-9).unwrap();
        assert!((lc.e_c * 1e3 - 223.0).abs() < 1.0, "{}", lc.e_c);
        let lc = lc_quantize(0.1e-12, 10e-9).unwrap();
        assert!((lc.e_c * 1e3 - 193.7).abs() < 0.05, "{}", lc.e_c);
        let half = lc_quantize(0.05e-12, 10e-9).unwrap();
        assert!(rel(half.e_c, 2.0 * lc.e_c) < 1e-12);
        assert!(rel(lc.omega_r, (8.0 * lc.e_c * lc.e_l).sqrt()) < 1e-12);
        assert!(rel(lc.level(2), 2.5 * lc.omega_r) < 1e-12);
        assert!(lc_quantize(0.0, 1e-9).is_err());
        assert!(lc_quantize(1e-12, -1e-9).is_err());
    }

    #[test]
    fn junction_examples() {
        let p = junction_parameters(55e-9, 0.0866e-12, 170e-6).unwrap();
        assert!((p.e_j - 27.3).abs() < 0.1, "{}", p.e_j);
        assert!((p.r_n - 4860.0).abs() < 50.0, "{}", p.r_n);
        assert!((p.l_j * 1e9 - 5.98).abs() < 0.01, "{}", p.l_j);
        assert!(rel(p.l_j, FLUX_QUANTUM / p.i_c) < 1e-12);
        assert!(p.in_transmon_regime());
        assert!(junction_parameters(-1e-9, 1e-13, 170e-6).is_err());
        assert!(junction_parameters(1e-9, 0.0, 170e-6).is_err());
    }

    #[test]
    fn ej_from_inductance_consistent_with_current() {
        let p = junction_parameters(55e-9, 0.1e-12, 170e-6).unwrap();
        let ej = josephson_energy_from_inductance(p.l_j).unwrap();
        assert!(rel(ej, p.e_j) < 1e-12);
    }

    #[test]
    fn anharmonicity_examples() {
        assert_eq!(anharmonicity(&[0.0, 5.0, 10.0]).unwrap(), 0.0);
        let a = anharmonicity(&[0.0, 6.752, 13.265]).unwrap();
        assert!((a * 1e3 - 239.0).abs() < 1e-6);
        assert!(anharmonicity(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn perturbative_warning_outside_regime() {
        let s = transmon_spectrum(1.0, 2.0, TransmonMethod::Perturbative { order: 1 }, 3).unwrap();
        assert!(s.warning.is_some());
        let s = transmon_spectrum(20.0, 0.2, TransmonMethod::Perturbative { order: 1 }, 3).unwrap();
        assert!(s.warning.is_none());
    }

    #[test]
    fn exact_rejects_small_cutoff() {
        let m = TransmonMethod::Exact { charge_cutoff: 5 };
        assert!(transmon_spectrum(20.0, 0.2, m, 3).is_err());
    }

    #[test]
    fn exact_cutoff_independence() {
        let ej = 27.31;
        let ec = ej / 122.47;
        let a = transmon_spectrum(ej, ec, TransmonMethod::Exact { charge_cutoff: 40 }, 4).unwrap();
        let b = transmon_spectrum(ej, ec, TransmonMethod::Exact { charge_cutoff: 80 }, 4).unwrap();
        for k in 1..4 {
            assert!(rel(a.levels[k], b.levels[k]) < 1e-10);
        }
    }

    #[test]
    fn epr_examples() {
        assert_eq!(epr_zero_point(0.0, 6.0, 27.31).unwrap(), 0.0);
        assert!((epr_zero_point(0.8, 6.794, 27.31).unwrap() - 0.0995).abs() < 5e-5);
        assert!((epr_zero_point(0.76, 6.229, 27.31).unwrap() - 0.0867).abs() < 5e-5);
        assert!(epr_zero_point(1.2, 6.0, 27.31).is_err());
        assert!(epr_zero_point(-0.1, 6.0, 27.31).is_err());
        let base = epr_zero_point(0.3, 5.0, 20.0).unwrap();
        assert!(rel(epr_zero_point(0.6, 5.0, 20.0).unwrap(), 2.0 * base) < 1e-14);
        assert!(rel(epr_zero_point(0.3, 10.0, 20.0).unwrap(), 2.0 * base) < 1e-14);
        assert!(rel(epr_zero_point(0.3, 5.0, 40.0).unwrap(), 0.5 * base) < 1e-14);
    }

    #[test]
    fn kerr_harmonic_limit() {
        let k = kerr_matrix(&[0.0, 0.0], &[6.8, 7.6], 27.31, 6).unwrap();
        assert!(k.alpha.iter().all(|a| a.abs() < 1e-12));
        assert!(k.chi[0][1].abs() < 1e-12);
        assert!((k.frequencies[0] - 6.8).abs() < 1e-12);
        assert!((k.frequencies[1] - 7.6).abs() < 1e-12);
    }

    #[test]
    fn kerr_rejects_bad_input() {
        assert!(kerr_matrix(&[0.1], &[6.0, 7.0], 27.0, 8).is_err());
        assert!(kerr_matrix(&[0.1], &[6.0], 27.0, 3).is_err());
        assert!(matches!(
            kerr_matrix(&[0.1], &[6.98], 27.31, 4),
            Err(Error::NotConverged(_))
        ));
    }

    #[test]
    fn kerr_two_mode_dispersive_shift() {
        let xi_q = epr_zero_point(0.8, 6.794, 27.31).unwrap();
        let xi_c = epr_zero_point(0.02, 7.577, 27.31).unwrap();
        let k = kerr_matrix(&[xi_q, xi_c], &[6.794, 7.577], 27.31, 10).unwrap();
        // cross-Kerr is of the order of 2 sqrt(alpha_q alpha_c)
        let est = 2.0 * (k.alpha[0] * k.alpha[1]).sqrt();
        assert!(rel(k.chi[0][1], est) < 0.2, "{} vs {est}", k.chi[0][1]);
        assert!(k.chi[0][1] > 0.001 && k.chi[0][1] < 0.1);
        assert!(k.frequencies[0] < 6.794 && k.frequencies[1] < 7.577);
    }

    #[test]
    fn coupling_examples() {
        assert_eq!(coupling_from_dispersive(0.0, 0.8).unwrap(), 0.0);
        let g = coupling_from_dispersive(0.0344, 7.577 - 6.794).unwrap();
        assert!((g * 1e3 - 164.0).abs() < 0.5, "{g}");
        let g = coupling_from_dispersive(0.0232, 1.252).unwrap();
        assert!((g * 1e3 - 170.0).abs() < 0.5, "{g}");
        assert!(coupling_from_dispersive(-0.01, 1.0).is_err());
    }
}
