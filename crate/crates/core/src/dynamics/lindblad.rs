use nalgebra::DMatrix;
use num_complex::Complex64;

use super::collapse::CollapseOperator;
use super::hamiltonian::Hamiltonian;
use super::integrator::{integrate, IntegratorStats, StepControl};
use super::superop::{SparseSuperOp, SuperOpBuilder};
use crate::error::{invalid, Error, Result};
use crate::hilbert::{DensityMatrix, QuantumOperator};
use crate::linalg::hermitian_eigenvalues;

const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Track the smallest eigenvalue of rho over the output times.
    pub check_positivity: bool,
    /// Keep a copy of rho at every output time.
    pub store_states: bool,
    pub max_steps: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            check_positivity: true,
            store_states: false,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub label: String,
    pub operator: QuantumOperator,
}

impl Observable {
    pub fn new(label: impl Into<String>, operator: QuantumOperator) -> Self {
        Self { label: label.into(), operator }
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    /// Real parts of Tr(O rho(t)) in the order the observables were given.
    pub traces: Vec<(String, Vec<f64>)>,
    pub final_state: DensityMatrix,
    pub states: Option<Vec<DensityMatrix>>,
    pub stats: IntegratorStats,
    pub max_trace_error: f64,
    /// Smallest eigenvalue of rho over the output times, when tracked.
    pub min_eigenvalue: Option<f64>,
}

impl EvolutionResult {
    pub fn trace(&self, label: &str) -> Option<&[f64]> {
        self.traces.iter().find(|(l, _)| l == label).map(|(_, v)| v.as_slice())
    }
}

fn to_vec(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let d = m.nrows();
    (0..d * d).map(|k| m[(k / d, k % d)]).collect()
}

fn to_matrix(v: &[Complex64], d: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |i, j| v[i * d + j])
}

fn vec_trace(v: &[Complex64], d: usize) -> Complex64 {
    (0..d).map(|i| v[i * d + i]).sum()
}

fn hermitize(v: &mut [Complex64], d: usize) {
    for i in 0..d {
        v[i * d + i].im = 0.0;
        for j in (i + 1)..d {
            let avg = (v[i * d + j] + v[j * d + i].conj()) * 0.5;
            v[i * d + j] = avg;
            v[j * d + i] = avg.conj();
        }
    }
}

/// Sparse observable entries (i, j, O_ij); Tr(O rho) = sum O_ij rho_ji.
fn observable_entries(op: &QuantumOperator) -> Vec<(usize, usize, Complex64)> {
    let m = op.matrix();
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)] != Complex64::new(0.0, 0.0) {
                out.push((i, j, m[(i, j)]));
            }
        }
    }
    out
}

/// Integrates d rho/dt = -i[H, rho] + sum_n (L rho L^dag - {L^dag L, rho}/2).
///
/// `times` must start at 0 and increase strictly. Observables are recorded at
/// each requested time. Fails if the trace drifts from 1 by more than 1e-6.
pub fn lindblad_evolve(
    hamiltonian: &Hamiltonian,
    rho0: &DensityMatrix,
    collapse: &[CollapseOperator],
    times: &[f64],
    observables: &[Observable],
    options: &EvolveOptions,
) -> Result<EvolutionResult> {
    if times.is_empty() {
        return Err(invalid("time grid is empty"));
    }
    if times[0] != 0.0 {
        return Err(invalid("time grid must start at 0"));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("time grid must be finite and strictly increasing"));
    }
    if !(options.rtol > 0.0 && options.atol > 0.0) {
        return Err(invalid("tolerances must be positive"));
    }
    let space = rho0.space().clone();
    let check_space = |what: &str, s: &crate::hilbert::SpaceDescriptor| {
        if *s != space {
            Err(Error::DimensionMismatch(format!(
                "{what} acts on {s} but the state lives on {space}"
            )))
        } else {
            Ok(())
        }
    };
    check_space("Hamiltonian", hamiltonian.space())?;
    for c in collapse {
        check_space(&format!("collapse operator {}", c.label), c.operator.space())?;
    }
    for o in observables {
        check_space(&format!("observable {}", o.label), o.operator.space())?;
    }
    let d = space.total_dim();

    let mut base = SuperOpBuilder::new(d);
    let drives: Vec<(SparseSuperOp, _)> = match hamiltonian {
        Hamiltonian::Static(h) => {
            base.add_hamiltonian(h.matrix());
            Vec::new()
        }
        Hamiltonian::TimeDependent { constant, drives } => {
            base.add_hamiltonian(constant.matrix());
            drives
                .iter()
                .map(|dt| {
                    check_space("drive operator", dt.operator.space())?;
                    let mut b = SuperOpBuilder::new(d);
                    b.add_hamiltonian(dt.operator.matrix());
                    Ok((b.build(), dt.coefficient.clone()))
                })
                .collect::<Result<_>>()?
        }
    };
    for c in collapse {
        base.add_dissipator(c.scaled().matrix());
    }
    let base = base.build();

    let obs: Vec<_> = observables.iter().map(|o| observable_entries(&o.operator)).collect();
    let mut traces: Vec<Vec<f64>> = vec![Vec::with_capacity(times.len()); observables.len()];
    let mut states = options.store_states.then(|| Vec::with_capacity(times.len()));
    let mut min_eig: Option<f64> = None;
    let mut max_trace_error = 0.0f64;

    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        base.apply(y, dy);
        for (op, f) in &drives {
            op.apply_add(f(t), y, dy);
        }
    };
    let after_step = |t: f64, y: &mut [Complex64]| {
        hermitize(y, d);
        let drift = (vec_trace(y, d) - 1.0).norm();
        max_trace_error = max_trace_error.max(drift);
        if drift > TRACE_DRIFT_LIMIT {
            return Err(Error::TraceDrift { time: t, drift });
        }
        Ok(())
    };
    let mut final_vec = Vec::new();
    let record = |idx: usize, _t: f64, y: &[Complex64]| {
        for (entries, trace) in obs.iter().zip(traces.iter_mut()) {
            let v: Complex64 = entries.iter().map(|&(i, j, o)| o * y[j * d + i]).sum();
            trace.push(v.re);
        }
        if options.check_positivity {
            let m = to_matrix(y, d);
            let lo = hermitian_eigenvalues(&m).first().copied().unwrap_or(0.0);
            min_eig = Some(min_eig.map_or(lo, |x| x.min(lo)));
        }
        if let Some(states) = states.as_mut() {
            states.push(DensityMatrix::new_unchecked(space.clone(), to_matrix(y, d)));
        }
        if idx + 1 == times.len() {
            final_vec = y.to_vec();
        }
        Ok(())
    };

    let ctl = StepControl { rtol: options.rtol, atol: options.atol, max_steps: options.max_steps };
    let stats = integrate(rhs, to_vec(rho0.matrix()), times, ctl, after_step, record)?;

    Ok(EvolutionResult {
        times: times.to_vec(),
        traces: observables.iter().map(|o| o.label.clone()).zip(traces).collect(),
        final_state: DensityMatrix::new_unchecked(space.clone(), to_matrix(&final_vec, d)),
        states,
        stats,
        max_trace_error,
        min_eigenvalue: min_eig,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_hamiltonian, Frame, HamiltonianSpec};
    use crate::hilbert::{embed_operator, ladder_operator, pauli_operator, LadderKind, PauliKind, SpaceDescriptor};

    fn grid(t_max: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
    }

    #[test]
    fn number_is_conserved_for_harmonic_oscillator() {
        let space = SpaceDescriptor::single(6).unwrap();
        let n = ladder_operator(6, LadderKind::Number).unwrap();
        let a = ladder_operator(6, LadderKind::Annihilate).unwrap();
        let h = Hamiltonian::Static(&n * (2.0 * std::f64::consts::PI * 5.0));
        let ket = {
            let mut k = nalgebra::DVector::from_element(6, Complex64::new(0.0, 0.0));
            k[1] = Complex64::new(0.6, 0.0);
            k[3] = Complex64::new(0.0, 0.8);
            k
        };
        let rho = DensityMatrix::from_ket(space, &ket).unwrap();
        let r = lindblad_evolve(
            &h,
            &rho,
            &[],
            &grid(2.0, 40),
            &[Observable::new("n", n.clone()), Observable::new("a_re", a)],
            &EvolveOptions::default(),
        )
        .unwrap();
        for v in r.trace("n").unwrap() {
            assert!((v - (0.36 + 3.0 * 0.64)).abs() < 1e-9);
        }
        assert!(r.max_trace_error < 1e-12);
        assert!(r.min_eigenvalue.unwrap() > -1e-8);
    }

    #[test]
    fn amplitude_damping_matches_closed_form() {
        let space = SpaceDescriptor::single(2).unwrap();
        let a = ladder_operator(2, LadderKind::Annihilate).unwrap();
        let n = ladder_operator(2, LadderKind::Number).unwrap();
        let h = Hamiltonian::Static(QuantumOperator::zeros(space.clone()));
        let rho = DensityMatrix::basis_state(space, &[1]).unwrap();
        let kappa = 0.5;
        let times = grid(5000.0, 100);
        let r = lindblad_evolve(
            &h,
            &rho,
            &[CollapseOperator::new("down", kappa, a)],
            &times,
            &[Observable::new("n", n)],
            &EvolveOptions::default(),
        )
        .unwrap();
        let k = crate::units::mhz_to_angular(kappa);
        for (t, v) in times.iter().zip(r.trace("n").unwrap()) {
            assert!((v - (-k * t).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn jc_excitation_number_is_conserved() {
        let spec = HamiltonianSpec::JaynesCummings {
            omega_r: 7.0,
            omega_q: 6.8,
            g: 0.2,
            n_max: 6,
            frame: Frame::Lab,
        };
        let h = build_hamiltonian(&spec).unwrap();
        let space = spec.space();
        let n = embed_operator(&ladder_operator(7, LadderKind::Number).unwrap(), 1, &space).unwrap();
        let sm = embed_operator(&pauli_operator(PauliKind::Minus), 0, &space).unwrap();
        let exc = &n + &(&sm.adjoint() * &sm);
        let rho = DensityMatrix::basis_state(space, &[1, 2]).unwrap();
        let r = lindblad_evolve(
            &h,
            &rho,
            &[],
            &grid(5.0, 50),
            &[Observable::new("exc", exc)],
            &EvolveOptions::default(),
        )
        .unwrap();
        for v in r.trace("exc").unwrap() {
            assert!((v - 3.0).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_grids_and_spaces() {
        let space = SpaceDescriptor::single(2).unwrap();
        let h = Hamiltonian::Static(QuantumOperator::zeros(space.clone()));
        let rho = DensityMatrix::basis_state(space, &[0]).unwrap();
        let o = EvolveOptions::default();
        assert!(lindblad_evolve(&h, &rho, &[], &[0.5, 1.0], &[], &o).is_err());
        assert!(lindblad_evolve(&h, &rho, &[], &[0.0, 1.0, 1.0], &[], &o).is_err());
        assert!(lindblad_evolve(&h, &rho, &[], &[], &[], &o).is_err());
        let other = Hamiltonian::Static(QuantumOperator::zeros(SpaceDescriptor::single(3).unwrap()));
        assert!(matches!(
            lindblad_evolve(&other, &rho, &[], &[0.0, 1.0], &[], &o),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn stored_states_follow_grid() {
        let space = SpaceDescriptor::single(2).unwrap();
        let h = Hamiltonian::Static(&pauli_operator(PauliKind::X) * 1.0);
        let rho = DensityMatrix::basis_state(space, &[0]).unwrap();
        let o = EvolveOptions { store_states: true, ..Default::default() };
        let r = lindblad_evolve(&h, &rho, &[], &grid(1.0, 10), &[], &o).unwrap();
        let states = r.states.unwrap();
        assert_eq!(states.len(), 11);
        // exp(-i t X) from |0>: P_1 = sin^2 t
        assert!((states[10].populations()[1] - 1.0f64.sin().powi(2)).abs() < 1e-8);
        assert_eq!(states[10].matrix(), r.final_state.matrix());
    }
}
