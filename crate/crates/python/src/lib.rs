//! Python bindings. Matrices cross the boundary as nested lists of complex
//! numbers, energies in GHz, rates in MHz, times in ns and temperatures in mK.

use cqed_core::analysis;
use cqed_core::cavity::{self, CavityGeometry, QualityModel};
use cqed_core::circuit::{self, TransmonMethod};
use cqed_core::dynamics::{
    build_collapse_operators, build_hamiltonian, lindblad_evolve, CollapseOptions, Envelope, EvolveOptions, Frame,
    HamiltonianSpec, Observable,
};
use cqed_core::hilbert::{
    embed_operator, ladder_operator, partial_trace, pauli_operator, DensityMatrix, LadderKind, PauliKind,
    SpaceDescriptor,
};
use cqed_core::scenario::{self, ScenarioConfig, ScenarioError, ScenarioKind, ScenarioOutput};
use cqed_core::thermal::{self, BathSpec, Subsystem};
use cqed_core::Error;
use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn core_err(e: Error) -> PyErr {
    match e {
        Error::InvalidDimension(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch(_)
        | Error::InvalidState(_)
        | Error::UnreachableAngle { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn scenario_err(e: ScenarioError) -> PyErr {
    match e {
        ScenarioError::Validation { .. } => PyValueError::new_err(e.to_string()),
        ScenarioError::Numerical { .. } => PyRuntimeError::new_err(e.to_string()),
        ScenarioError::Io { .. } => PyOSError::new_err(e.to_string()),
    }
}

fn to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<DMatrix<Complex64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn frame(name: &str) -> PyResult<Frame> {
    match name {
        "lab" => Ok(Frame::Lab),
        "rotating" => Ok(Frame::Rotating),
        _ => Err(PyValueError::new_err(format!("frame must be 'lab' or 'rotating', got {name:?}"))),
    }
}

/// Density matrix over a tensor-product space.
#[pyclass(name = "DensityMatrix", module = "cqed", frozen)]
struct PyDensityMatrix {
    inner: DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    /// Builds a state from slot dimensions and a Hermitian, unit-trace matrix.
    #[new]
    fn new(dims: Vec<usize>, matrix: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let space = SpaceDescriptor::new(dims).map_err(core_err)?;
        let inner = DensityMatrix::new(space, from_rows(matrix)?).map_err(core_err)?;
        Ok(Self { inner })
    }

    /// Product basis state |levels[0], levels[1], ...>.
    #[staticmethod]
    fn basis_state(dims: Vec<usize>, levels: Vec<usize>) -> PyResult<Self> {
        let space = SpaceDescriptor::new(dims).map_err(core_err)?;
        Ok(Self { inner: DensityMatrix::basis_state(space, &levels).map_err(core_err)? })
    }

    #[staticmethod]
    fn from_ket(dims: Vec<usize>, ket: Vec<Complex64>) -> PyResult<Self> {
        let space = SpaceDescriptor::new(dims).map_err(core_err)?;
        let v = nalgebra::DVector::from_vec(ket);
        Ok(Self { inner: DensityMatrix::from_ket(space, &v).map_err(core_err)? })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.space().dims().to_vec()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        to_rows(self.inner.matrix())
    }

    fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }

    fn populations(&self) -> Vec<f64> {
        self.inner.populations()
    }

    /// Reduced state on the slots in `keep`.
    fn partial_trace(&self, keep: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: partial_trace(&self.inner, &keep).map_err(core_err)? })
    }

    /// Von Neumann entropy in nats.
    fn entropy(&self) -> f64 {
        analysis::von_neumann_entropy(&self.inner)
    }

    fn entanglement_entropy(&self, keep: Vec<usize>) -> PyResult<f64> {
        analysis::entanglement_entropy(&self.inner, &keep).map_err(core_err)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dims={:?}, purity={:.6})", self.inner.space().dims(), self.inner.purity())
    }
}

/// Result of a config-driven scenario run.
#[pyclass(name = "ScenarioResult", module = "cqed", frozen)]
struct PyScenarioResult {
    inner: ScenarioOutput,
}

#[pymethods]
impl PyScenarioResult {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.config.kind().name()
    }

    #[getter]
    fn columns(&self) -> Vec<String> {
        self.inner.table.columns.clone()
    }

    #[getter]
    fn num_rows(&self) -> usize {
        self.inner.table.rows.len()
    }

    /// Numeric column by name; text cells become NaN.
    fn column(&self, name: &str) -> PyResult<Vec<f64>> {
        self.inner.table.column(name).ok_or_else(|| PyValueError::new_err(format!("no column named {name:?}")))
    }

    fn csv(&self) -> String {
        self.inner.csv()
    }

    #[pyo3(signature = (seed=None))]
    fn manifest(&self, seed: Option<u64>) -> String {
        self.inner.manifest(seed)
    }

    #[getter]
    fn max_trace_error(&self) -> f64 {
        self.inner.stats.max_trace_error
    }

    #[getter]
    fn min_eigenvalue(&self) -> Option<f64> {
        self.inner.stats.min_eigenvalue
    }

    #[getter]
    fn wall_clock_s(&self) -> f64 {
        self.inner.wall_clock_s
    }
}

/// Runs a scenario described by TOML text with `[scenario]` and `[output]`
/// tables. Nothing is written to disk unless `write` is true.
#[pyfunction]
#[pyo3(signature = (config, write=false))]
fn run_scenario(config: &str, write: bool) -> PyResult<PyScenarioResult> {
    let cfg = ScenarioConfig::from_toml_str(config).map_err(scenario_err)?;
    let out = scenario::run_scenario(&cfg).map_err(scenario_err)?;
    if write {
        scenario::write_outputs(&out, None).map_err(scenario_err)?;
    }
    Ok(PyScenarioResult { inner: out })
}

/// (name, description) of every scenario kind.
#[pyfunction]
fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    ScenarioKind::ALL.iter().map(|k| (k.name(), k.description())).collect()
}

/// Transmon levels relative to the ground state (GHz). `order=None` selects
/// exact charge-basis diagonalization.
#[pyfunction]
#[pyo3(signature = (e_j, e_c, order=None, charge_cutoff=30, n_levels=3))]
fn transmon_levels(e_j: f64, e_c: f64, order: Option<u8>, charge_cutoff: usize, n_levels: usize) -> PyResult<Vec<f64>> {
    let method = match order {
        Some(order) => TransmonMethod::Perturbative { order },
        None => TransmonMethod::Exact { charge_cutoff },
    };
    Ok(circuit::transmon_spectrum(e_j, e_c, method, n_levels).map_err(core_err)?.levels)
}

/// (E1 - E0) - (E2 - E1) in GHz.
#[pyfunction]
fn anharmonicity(levels: Vec<f64>) -> PyResult<f64> {
    circuit::anharmonicity(&levels).map_err(core_err)
}

/// Junction parameters from critical current (A), shunt capacitance (F) and
/// gap (eV).
#[pyfunction]
#[pyo3(signature = (i_c, c_total, delta0_ev=170e-6))]
fn junction_parameters<'py>(py: Python<'py>, i_c: f64, c_total: f64, delta0_ev: f64) -> PyResult<Bound<'py, PyDict>> {
    let p = circuit::junction_parameters(i_c, c_total, delta0_ev).map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item("E_J_GHz", p.e_j)?;
    d.set_item("E_C_GHz", p.e_c)?;
    d.set_item("L_J_H", p.l_j)?;
    d.set_item("R_n_ohm", p.r_n)?;
    Ok(d)
}

/// Quantized LC oscillator from capacitance and inductance (SI units).
#[pyfunction]
fn lc_quantize<'py>(py: Python<'py>, capacitance: f64, inductance: f64) -> PyResult<Bound<'py, PyDict>> {
    let p = circuit::lc_quantize(capacitance, inductance).map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item("E_C_GHz", p.e_c)?;
    d.set_item("E_L_GHz", p.e_l)?;
    d.set_item("omega_r_GHz", p.omega_r)?;
    d.set_item("xi", p.xi)?;
    Ok(d)
}

/// Dressed frequencies, self-Kerr and cross-Kerr (GHz) of modes sharing one
/// junction, from participation ratios and linear frequencies.
#[pyfunction]
#[pyo3(signature = (participations, frequencies, e_j, fock_dim=8))]
fn kerr_matrix<'py>(
    py: Python<'py>,
    participations: Vec<f64>,
    frequencies: Vec<f64>,
    e_j: f64,
    fock_dim: usize,
) -> PyResult<Bound<'py, PyDict>> {
    if participations.len() != frequencies.len() {
        return Err(PyValueError::new_err("one participation ratio per frequency"));
    }
    let xi = participations
        .iter()
        .zip(&frequencies)
        .map(|(&p, &w)| circuit::epr_zero_point(p, w, e_j))
        .collect::<cqed_core::Result<Vec<_>>>()
        .map_err(core_err)?;
    let k = circuit::kerr_matrix(&xi, &frequencies, e_j, fock_dim).map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item("frequencies", k.frequencies)?;
    d.set_item("alpha", k.alpha)?;
    d.set_item("chi", k.chi)?;
    Ok(d)
}

/// TE mode of a rectangular cavity with sides in metres (GHz).
#[pyfunction]
fn rectangular_mode_frequency(lx: f64, ly: f64, lz: f64, indices: (u32, u32, u32)) -> PyResult<f64> {
    let g = CavityGeometry::Rectangular { lx, ly, lz };
    cavity::rectangular_mode_frequency(&g, [indices.0, indices.1, indices.2]).map_err(core_err)
}

/// Quarter-wave stub resonance for a length in metres (GHz).
#[pyfunction]
fn quarter_wave_frequency(stub_length: f64) -> PyResult<f64> {
    cavity::quarter_wave_frequency(stub_length).map_err(core_err)
}

/// Thermal quality factor and the matching decay rate kappa/2pi (MHz).
#[pyfunction]
#[pyo3(signature = (f_ghz, t_mk, q_ref=1.0))]
fn cavity_kappa(f_ghz: f64, t_mk: f64, q_ref: f64) -> PyResult<(f64, f64)> {
    let q = cavity::quality_factor_thermal(t_mk, &QualityModel::with_reference(q_ref)).map_err(core_err)?;
    Ok((q, cavity::kappa_from_quality(f_ghz, q).map_err(core_err)?))
}

/// (Boltzmann factor, excited-state probability) of a two-level system.
#[pyfunction]
fn boltzmann_excitation(f_ghz: f64, t_mk: f64) -> PyResult<(f64, f64)> {
    let b = thermal::boltzmann_excitation(f_ghz, t_mk).map_err(core_err)?;
    Ok((b.factor, b.p_excited))
}

/// Bose-Einstein occupancy.
#[pyfunction]
fn thermal_occupancy(f_ghz: f64, t_mk: f64) -> PyResult<f64> {
    thermal::thermal_occupancy(f_ghz, t_mk).map_err(core_err)
}

/// (kappa_down, kappa_up) in MHz for a resonator with base rate `kappa_mhz`.
#[pyfunction]
fn thermal_rates(kappa_mhz: f64, f_ghz: f64, t_mk: f64) -> PyResult<(f64, f64)> {
    let bath = BathSpec { temperature_mk: t_mk, kappa1: kappa_mhz, kappa_phi: 0.0, gamma1: 0.0, gamma_phi: 0.0 };
    let r = thermal::thermal_rates(&bath, f_ghz, Subsystem::Resonator).map_err(core_err)?;
    Ok((r.kappa_down, r.kappa_up))
}

/// Closed-form Rabi probability for coupling g (MHz) at time t (ns).
#[pyfunction]
fn rabi_probability(g_mhz: f64, omega_q: f64, omega_d: f64, t: f64) -> PyResult<f64> {
    cqed_core::dynamics::rabi_probability_analytic(g_mhz, omega_q, omega_d, t).map_err(core_err)
}

/// Pulse duration (ns) reaching `angle` radians; `omega_e_mhz=None` selects
/// a constant unit envelope, otherwise a sine envelope.
#[pyfunction]
#[pyo3(signature = (g_mhz, angle, omega_e_mhz=None))]
fn pulse_duration(g_mhz: f64, angle: f64, omega_e_mhz: Option<f64>) -> PyResult<f64> {
    let env = match omega_e_mhz {
        Some(w) => Envelope::Sine { omega_e_mhz: w },
        None => Envelope::Constant { amplitude: 1.0 },
    };
    cqed_core::dynamics::duration_for_angle(&env, g_mhz, angle).map_err(core_err)
}

/// Lindblad evolution of a Jaynes-Cummings system from |qubit, n_photons>.
/// Returns the time grid, P_e, <n>, the final state and integrator health.
#[pyfunction]
#[pyo3(signature = (
    times, omega_r=7.0, omega_q=7.0, g_mhz=200.0, n_max=15, n_photons=5, qubit_excited=true,
    kappa_mhz=0.0, gamma_mhz=0.0, t_mk=20.0, frame="rotating", rtol=1e-8, atol=1e-10
))]
#[allow(clippy::too_many_arguments)]
fn jaynes_cummings<'py>(
    py: Python<'py>,
    times: Vec<f64>,
    omega_r: f64,
    omega_q: f64,
    g_mhz: f64,
    n_max: usize,
    n_photons: usize,
    qubit_excited: bool,
    kappa_mhz: f64,
    gamma_mhz: f64,
    t_mk: f64,
    frame: &str,
    rtol: f64,
    atol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = HamiltonianSpec::JaynesCummings { omega_r, omega_q, g: g_mhz * 1e-3, n_max, frame: self::frame(frame)? };
    let space = spec.space();
    let h = build_hamiltonian(&spec).map_err(core_err)?;
    let bath = BathSpec { temperature_mk: t_mk, kappa1: kappa_mhz, kappa_phi: 0.0, gamma1: gamma_mhz, gamma_phi: 0.0 };
    let collapse = build_collapse_operators(&bath, &space, &spec.layout(), omega_r, omega_q, CollapseOptions::default())
        .map_err(core_err)?;
    let sm = pauli_operator(PauliKind::Minus);
    let n = ladder_operator(n_max + 1, LadderKind::Number).map_err(core_err)?;
    let observables = vec![
        Observable::new("P_e", embed_operator(&(&sm.adjoint() * &sm), 0, &space).map_err(core_err)?),
        Observable::new("n", embed_operator(&n, 1, &space).map_err(core_err)?),
    ];
    let rho0 = DensityMatrix::basis_state(space, &[qubit_excited as usize, n_photons]).map_err(core_err)?;
    let opts = EvolveOptions { rtol, atol, ..EvolveOptions::default() };
    let r = py
        .detach(|| lindblad_evolve(&h, &rho0, &collapse, &times, &observables, &opts))
        .map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item("times", &r.times)?;
    d.set_item("P_e", r.trace("P_e").unwrap_or_default())?;
    d.set_item("n_cavity", r.trace("n").unwrap_or_default())?;
    d.set_item("max_trace_error", r.max_trace_error)?;
    d.set_item("min_eigenvalue", r.min_eigenvalue)?;
    d.set_item("final_state", Py::new(py, PyDensityMatrix { inner: r.final_state })?)?;
    Ok(d)
}

/// Dominant oscillation frequency (MHz) of a uniformly sampled trace, or
/// None for a flat trace.
#[pyfunction]
fn dominant_frequency(times: Vec<f64>, trace: Vec<f64>) -> PyResult<Option<f64>> {
    analysis::dominant_frequency(&times, &trace).map_err(core_err)
}

/// Normalized dispersive transmission on a grid of probe frequencies (GHz).
#[pyfunction]
fn transmission_spectrum(omega_r: f64, chi_mhz: f64, kappa2_mhz: f64, p_e: f64, grid: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(analysis::transmission_spectrum(omega_r, chi_mhz, kappa2_mhz, p_e, &grid).map_err(core_err)?.values)
}

#[pymodule]
fn cqed(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", cqed_core::VERSION)?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyScenarioResult>()?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(list_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(transmon_levels, m)?)?;
    m.add_function(wrap_pyfunction!(anharmonicity, m)?)?;
    m.add_function(wrap_pyfunction!(junction_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(lc_quantize, m)?)?;
    m.add_function(wrap_pyfunction!(kerr_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(rectangular_mode_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(quarter_wave_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(cavity_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(boltzmann_excitation, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_occupancy, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_rates, m)?)?;
    m.add_function(wrap_pyfunction!(rabi_probability, m)?)?;
    m.add_function(wrap_pyfunction!(pulse_duration, m)?)?;
    m.add_function(wrap_pyfunction!(jaynes_cummings, m)?)?;
    m.add_function(wrap_pyfunction!(dominant_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(transmission_spectrum, m)?)?;
    Ok(())
}
