//! Validation and computation for each scenario kind.

use std::f64::consts::PI;

use super::config::*;
use super::table::{Cell, PlotSpec, Table};
use super::{RunStats, ScenarioError};
use crate::analysis::{entanglement_entropy, time_average, transmission_spectrum, uniform_grid, von_neumann_entropy};
use crate::cavity::{
    kappa_from_quality, quality_factor_thermal, quarter_wave_frequency, rectangular_mode_frequency,
    CavityGeometry, QualityModel,
};
use crate::circuit::{
    coupling_from_dispersive, josephson_energy_from_inductance, kerr_matrix, lc_quantize, transmon_spectrum,
    EprInput, EprMode, TransmonMethod,
};
use crate::dynamics::{
    build_collapse_operators, build_hamiltonian, duration_for_angle, lindblad_evolve, pulse_angle,
    rabi_probability_analytic, CollapseOptions, Envelope, EvolutionResult, EvolveOptions,
    HamiltonianSpec, Observable, SlotLayout,
};
use crate::error::Error;
use crate::hilbert::{
    embed_operator, ladder_operator, pauli_operator, DensityMatrix, LadderKind, PauliKind, QuantumOperator,
};
use crate::thermal::{boltzmann_excitation, thermal_occupancy, BathSpec};

/// Largest population allowed in either of the two highest Fock levels.
pub const TRUNCATION_LIMIT: f64 = 1e-6;

fn bad(path: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation { path: format!("scenario.{path}"), message: message.into() }
}

fn positive(path: &str, v: f64) -> Result<(), ScenarioError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be positive and finite, got {v}")))
    }
}

fn non_negative(path: &str, v: f64) -> Result<(), ScenarioError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be non-negative and finite, got {v}")))
    }
}

fn core(path: &str, r: crate::Result<()>) -> Result<(), ScenarioError> {
    r.map_err(|e| bad(path, e.to_string()))
}

fn numerical(context: &str) -> impl FnOnce(Error) -> ScenarioError + '_ {
    move |source| ScenarioError::Numerical { context: context.to_string(), source }
}

fn tolerances(rtol: f64, atol: f64) -> Result<(), ScenarioError> {
    positive("rtol", rtol)?;
    positive("atol", atol)?;
    if rtol >= 1.0 {
        return Err(bad("rtol", "must be below 1"));
    }
    Ok(())
}

fn time_grid(output: &OutputSpec) -> Result<Vec<f64>, ScenarioError> {
    let (t_max, dt) = (output.t_max_ns.unwrap_or(0.0), output.dt_ns.unwrap_or(0.0));
    let out_err = |k: &str, m: String| ScenarioError::Validation { path: format!("output.{k}"), message: m };
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(out_err("t_max_ns", format!("must be positive, got {t_max}")));
    }
    if !(dt > 0.0 && dt <= t_max) {
        return Err(out_err("dt_ns", format!("must lie in (0, t_max_ns], got {dt}")));
    }
    let n = (t_max / dt).round();
    if ((n * dt) - t_max).abs() > 1e-9 * t_max {
        return Err(out_err("dt_ns", format!("t_max_ns = {t_max} is not a multiple of dt_ns = {dt}")));
    }
    if n > 1e6 {
        return Err(out_err("dt_ns", "more than 1e6 output samples".into()));
    }
    Ok((0..=n as usize).map(|i| i as f64 * dt).collect())
}

fn envelope(fields: &EnvelopeFields<'_>) -> Result<Envelope, ScenarioError> {
    let env = fields.build();
    core("envelope", env.validate())?;
    Ok(env)
}

/// Checks every parameter against the preconditions of the operations the
/// kind will call. No computation happens before this returns.
pub(super) fn validate(config: &ScenarioConfig) -> Result<(), ScenarioError> {
    match &config.params {
        ScenarioParams::TransmonTable(p) => {
            positive("E_J_GHz", p.e_j_ghz)?;
            positive("EJ_over_EC", p.ej_over_ec)?;
            if p.orders.is_empty() && !p.include_exact {
                return Err(bad("orders", "nothing to compute"));
            }
            if let Some(o) = p.orders.iter().find(|&&o| o > 2) {
                return Err(bad("orders", format!("order {o} is not supported (0, 1 or 2)")));
            }
            if p.include_exact && p.charge_cutoff < 2 {
                return Err(bad("charge_cutoff", "must be at least 2"));
            }
        }
        ScenarioParams::BoltzmannCurve(p) => {
            if p.f_ghz.is_empty() {
                return Err(bad("f_GHz", "needs at least one frequency"));
            }
            for f in &p.f_ghz {
                positive("f_GHz", *f)?;
            }
            positive("T_min_mK", p.t_min_mk)?;
            positive("T_step_mK", p.t_step_mk)?;
            if !(p.t_max_mk >= p.t_min_mk && p.t_max_mk.is_finite()) {
                return Err(bad("T_max_mK", "must be at least T_min_mK"));
            }
            if (p.t_max_mk - p.t_min_mk) / p.t_step_mk > 1e6 {
                return Err(bad("T_step_mK", "more than 1e6 temperatures"));
            }
        }
        ScenarioParams::CavityModes(p) => {
            let geom = CavityGeometry::Rectangular { lx: p.lx_mm * 1e-3, ly: p.ly_mm * 1e-3, lz: p.lz_mm * 1e-3 };
            core("Lx_mm", geom.validate())?;
            if p.modes.is_empty() {
                return Err(bad("modes", "needs at least one mode"));
            }
            if let Some(m) = p.modes.iter().find(|m| m.iter().filter(|&&n| n > 0).count() < 2) {
                return Err(bad("modes", format!("mode {m:?} needs at least two nonzero indices")));
            }
            positive("T_mK", p.t_mk)?;
            positive("Q_ref", p.q_ref)?;
            if let Some(l) = p.stub_length_mm {
                positive("stub_length_mm", l)?;
            }
        }
        ScenarioParams::RabiJc(p) => {
            core("", jc_spec(p).validate())?;
            core("", bath_jc(p).validate())?;
            if p.n_max < 2 {
                return Err(bad("n_max", "must be at least 2"));
            }
            if p.n_photons + 2 > p.n_max {
                return Err(bad("n_max", format!("must exceed n_photons + 1 = {}", p.n_photons + 1)));
            }
            tolerances(p.rtol, p.atol)?;
            time_grid(&config.output)?;
        }
        ScenarioParams::DrivenRabi(p) => {
            let env = envelope(&p.envelope_fields())?;
            core("", driven_spec(p, env.clone()).validate())?;
            if !matches!(env, Envelope::Constant { .. }) && p.omega_q_ghz != p.omega_d_ghz {
                return Err(bad(
                    "omega_d_GHz",
                    "the closed-form comparison needs a constant envelope or a resonant drive",
                ));
            }
            tolerances(p.rtol, p.atol)?;
            time_grid(&config.output)?;
        }
        ScenarioParams::PulseCalibration(p) => {
            envelope(&p.envelope_fields())?;
            positive("g_MHz", p.g_mhz)?;
            if p.angles_over_pi.is_empty() {
                return Err(bad("angles_over_pi", "needs at least one angle"));
            }
            for a in &p.angles_over_pi {
                positive("angles_over_pi", *a)?;
            }
        }
        ScenarioParams::DispersiveSpectrum(p) => {
            positive("omega_r_GHz", p.omega_r_ghz)?;
            positive("omega_q_GHz", p.omega_q_ghz)?;
            if !p.chi_mhz.is_finite() {
                return Err(bad("chi_MHz", "must be finite"));
            }
            positive("kappa2_MHz", p.kappa2_mhz)?;
            positive("T_mK", p.t_mk)?;
            if let Some(pe) = p.p_e {
                if !(0.0..=1.0).contains(&pe) {
                    return Err(bad("P_e", format!("must lie in [0, 1], got {pe}")));
                }
            }
            let span = config.output.f_span_mhz.unwrap_or(0.0);
            let step = config.output.f_step_mhz.unwrap_or(0.0);
            let out_err = |k: &str, m: String| ScenarioError::Validation { path: format!("output.{k}"), message: m };
            if !(span > 0.0 && span.is_finite()) {
                return Err(out_err("f_span_MHz", format!("must be positive, got {span}")));
            }
            if !(step > 0.0 && step <= span) || span / step > 1e6 {
                return Err(out_err("f_step_MHz", format!("must lie in (0, f_span_MHz] with at most 1e6 points, got {step}")));
            }
            if span * 1e-3 / 2.0 >= p.omega_r_ghz {
                return Err(out_err("f_span_MHz", "grid would reach zero frequency".into()));
            }
        }
        ScenarioParams::EntropySweep(p) => {
            positive("omega1_GHz", p.omega1_ghz)?;
            positive("omega2_GHz", p.omega2_ghz)?;
            if p.g_mhz.is_empty() {
                return Err(bad("g_MHz", "needs at least one coupling"));
            }
            for g in &p.g_mhz {
                non_negative("g_MHz", *g)?;
            }
            core("", bath_two_qubit(p).validate())?;
            tolerances(p.rtol, p.atol)?;
            time_grid(&config.output)?;
        }
        ScenarioParams::EprParams(p) => {
            positive("L_J_nH", p.l_j_nh)?;
            positive("C_qubit_fF", p.c_qubit_ff)?;
            positive("f_cavity_GHz", p.f_cavity_ghz)?;
            for (k, v) in [("p_qubit", p.p_qubit), ("p_cavity", p.p_cavity)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(bad(k, format!("participation must lie in [0, 1], got {v}")));
                }
            }
            if p.fock_dim < 4 {
                return Err(bad("fock_dim", "must be at least 4"));
            }
            if p.fock_dim > 16 {
                return Err(bad("fock_dim", "at most 16 levels per mode are supported"));
            }
        }
    }
    Ok(())
}

pub(super) fn compute(config: &ScenarioConfig) -> Result<(Table, RunStats), ScenarioError> {
    validate(config)?;
    match &config.params {
        ScenarioParams::TransmonTable(p) => transmon_table(p),
        ScenarioParams::BoltzmannCurve(p) => boltzmann_curve(p),
        ScenarioParams::CavityModes(p) => cavity_modes(p),
        ScenarioParams::RabiJc(p) => rabi_jc(p, &config.output),
        ScenarioParams::DrivenRabi(p) => driven_rabi(p, &config.output),
        ScenarioParams::PulseCalibration(p) => pulse_calibration(p),
        ScenarioParams::DispersiveSpectrum(p) => dispersive_spectrum(p, &config.output),
        ScenarioParams::EntropySweep(p) => entropy_sweep(p, &config.output),
        ScenarioParams::EprParams(p) => epr_params(p),
    }
}

fn transmon_table(p: &TransmonTableParams) -> Result<(Table, RunStats), ScenarioError> {
    let mut t = Table::new(&["order", "omega_q_GHz", "alpha_MHz"], PlotSpec { x: 0, ys: vec![1], group: None });
    let e_c = p.e_j_ghz / p.ej_over_ec;
    let mut methods: Vec<(String, TransmonMethod)> =
        p.orders.iter().map(|&o| (o.to_string(), TransmonMethod::Perturbative { order: o })).collect();
    if p.include_exact {
        methods.push(("exact".into(), TransmonMethod::Exact { charge_cutoff: p.charge_cutoff }));
    }
    for (label, method) in methods {
        let spec = transmon_spectrum(p.e_j_ghz, e_c, method, 3).map_err(numerical("transmon spectrum"))?;
        let alpha = spec.anharmonicity().map_err(numerical("transmon spectrum"))?;
        let cell = match label.parse::<i64>() {
            Ok(v) => Cell::Int(v),
            Err(_) => Cell::Text(label),
        };
        t.push(vec![cell, spec.qubit_frequency().into(), (alpha * 1e3).into()]);
    }
    Ok((t, RunStats::default()))
}

fn boltzmann_curve(p: &BoltzmannCurveParams) -> Result<(Table, RunStats), ScenarioError> {
    let mut t = Table::new(&["f_GHz", "T_mK", "F", "P_ex", "n_th"], PlotSpec { x: 1, ys: vec![3, 4], group: Some(0) });
    let temps = uniform_grid(p.t_min_mk, p.t_max_mk, p.t_step_mk).map_err(numerical("temperature grid"))?;
    for &f in &p.f_ghz {
        for &temp in &temps {
            let b = boltzmann_excitation(f, temp).map_err(numerical("Boltzmann factor"))?;
            let n = thermal_occupancy(f, temp).map_err(numerical("thermal occupancy"))?;
            t.push(vec![f.into(), temp.into(), b.factor.into(), b.p_excited.into(), n.into()]);
        }
    }
    Ok((t, RunStats::default()))
}

fn cavity_modes(p: &CavityModesParams) -> Result<(Table, RunStats), ScenarioError> {
    let mut t = Table::new(
        &["label", "n_x", "n_y", "n_z", "f_GHz", "Q", "kappa1_MHz"],
        PlotSpec { x: 4, ys: vec![6], group: None },
    );
    let geom = CavityGeometry::Rectangular { lx: p.lx_mm * 1e-3, ly: p.ly_mm * 1e-3, lz: p.lz_mm * 1e-3 };
    let q = quality_factor_thermal(p.t_mk, &QualityModel::with_reference(p.q_ref)).map_err(numerical("quality factor"))?;
    for m in &p.modes {
        let f = rectangular_mode_frequency(&geom, *m).map_err(numerical("cavity mode"))?;
        let kappa = kappa_from_quality(f, q).map_err(numerical("cavity decay"))?;
        let label = format!("TE{}{}{}", m[0], m[1], m[2]);
        t.push(vec![
            Cell::Text(label),
            Cell::Int(m[0] as i64),
            Cell::Int(m[1] as i64),
            Cell::Int(m[2] as i64),
            f.into(),
            q.into(),
            kappa.into(),
        ]);
    }
    if let Some(l) = p.stub_length_mm {
        let f = quarter_wave_frequency(l * 1e-3).map_err(numerical("quarter-wave mode"))?;
        let kappa = kappa_from_quality(f, q).map_err(numerical("cavity decay"))?;
        t.push(vec!["quarter_wave".into(), Cell::Empty, Cell::Empty, Cell::Empty, f.into(), q.into(), kappa.into()]);
    }
    Ok((t, RunStats::default()))
}

fn jc_spec(p: &RabiJcParams) -> HamiltonianSpec {
    HamiltonianSpec::JaynesCummings {
        omega_r: p.omega_r_ghz,
        omega_q: p.omega_q_ghz,
        g: p.g_mhz * 1e-3,
        n_max: p.n_max,
        frame: p.frame,
    }
}

fn bath_jc(p: &RabiJcParams) -> BathSpec {
    BathSpec {
        temperature_mk: p.t_mk,
        kappa1: p.kappa_mhz,
        kappa_phi: p.kappa_phi_mhz,
        gamma1: p.gamma_mhz,
        gamma_phi: p.gamma_phi_mhz,
    }
}

fn options(rtol: f64, atol: f64) -> EvolveOptions {
    EvolveOptions { rtol, atol, ..EvolveOptions::default() }
}

#[allow(clippy::too_many_arguments)]
fn evolve(
    context: &str,
    h: &crate::dynamics::Hamiltonian,
    rho0: &DensityMatrix,
    collapse: &[crate::dynamics::CollapseOperator],
    times: &[f64],
    observables: &[Observable],
    opts: &EvolveOptions,
    stats: &mut RunStats,
) -> Result<EvolutionResult, ScenarioError> {
    let r = lindblad_evolve(h, rho0, collapse, times, observables, opts).map_err(numerical(context))?;
    stats.absorb(&r);
    Ok(r)
}

fn rabi_jc(p: &RabiJcParams, output: &OutputSpec) -> Result<(Table, RunStats), ScenarioError> {
    let times = time_grid(output)?;
    let spec = jc_spec(p);
    let space = spec.space();
    let h = build_hamiltonian(&spec).map_err(numerical("Jaynes-Cummings Hamiltonian"))?;
    let collapse = build_collapse_operators(
        &bath_jc(p),
        &space,
        &spec.layout(),
        p.omega_r_ghz,
        p.omega_q_ghz,
        CollapseOptions { qubit_thermal: p.qubit_thermal },
    )
    .map_err(numerical("collapse operators"))?;
    let dim = p.n_max + 1;
    let emb = |op: QuantumOperator, slot| embed_operator(&op, slot, &space).map_err(numerical("observables"));
    let sm = pauli_operator(PauliKind::Minus);
    let projector = |k: usize| {
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        m[(k, k)] = num_complex::Complex64::new(1.0, 0.0);
        QuantumOperator::new(crate::hilbert::SpaceDescriptor::single(dim).expect("dim >= 2"), m)
            .expect("square projector")
    };
    let observables = vec![
        Observable::new("P_e", emb(&sm.adjoint() * &sm, 0)?),
        Observable::new("n_cavity", emb(ladder_operator(dim, LadderKind::Number).map_err(numerical("observables"))?, 1)?),
        Observable::new("top", emb(projector(p.n_max), 1)?),
        Observable::new("top2", emb(projector(p.n_max - 1), 1)?),
    ];
    let qubit = if p.qubit_excited { 1 } else { 0 };
    let rho0 = DensityMatrix::basis_state(space.clone(), &[qubit, p.n_photons]).map_err(numerical("initial state"))?;
    let mut stats = RunStats::default();
    let r = evolve("Rabi evolution", &h, &rho0, &collapse, &times, &observables, &options(p.rtol, p.atol), &mut stats)?;

    let top = r.trace("top").expect("recorded").iter().chain(r.trace("top2").expect("recorded"));
    let worst = top.cloned().fold(0.0, f64::max);
    if worst >= TRUNCATION_LIMIT {
        return Err(ScenarioError::Numerical {
            context: "Rabi evolution".into(),
            source: Error::Truncation(format!(
                "population {worst:.3e} in the top two Fock levels exceeds {TRUNCATION_LIMIT:e}; raise n_max above {}",
                p.n_max
            )),
        });
    }
    let mut t = Table::new(&["t_ns", "P_e", "n_cavity"], PlotSpec { x: 0, ys: vec![1, 2], group: None });
    let (pe, n) = (r.trace("P_e").expect("recorded"), r.trace("n_cavity").expect("recorded"));
    for i in 0..times.len() {
        t.push(vec![times[i].into(), pe[i].into(), n[i].into()]);
    }
    Ok((t, stats))
}

fn driven_spec(p: &DrivenRabiParams, envelope: Envelope) -> HamiltonianSpec {
    HamiltonianSpec::DrivenQubit {
        omega_q: p.omega_q_ghz,
        g: p.g_mhz * 1e-3,
        omega_d: p.omega_d_ghz,
        envelope,
        frame: p.frame,
    }
}

fn driven_rabi(p: &DrivenRabiParams, output: &OutputSpec) -> Result<(Table, RunStats), ScenarioError> {
    let times = time_grid(output)?;
    let env = envelope(&p.envelope_fields())?;
    let spec = driven_spec(p, env.clone());
    let space = spec.space();
    let h = build_hamiltonian(&spec).map_err(numerical("driven-qubit Hamiltonian"))?;
    let sm = pauli_operator(PauliKind::Minus);
    let observables = vec![Observable::new("P_e", &sm.adjoint() * &sm)];
    let rho0 = DensityMatrix::basis_state(space, &[0]).map_err(numerical("initial state"))?;
    let mut stats = RunStats::default();
    let r = evolve("driven evolution", &h, &rho0, &[], &times, &observables, &options(p.rtol, p.atol), &mut stats)?;
    let mut t = Table::new(&["t_ns", "P_e", "P_e_analytic"], PlotSpec { x: 0, ys: vec![1, 2], group: None });
    let pe = r.trace("P_e").expect("recorded");
    for (i, &time) in times.iter().enumerate() {
        let analytic = match env {
            Envelope::Constant { amplitude } => {
                rabi_probability_analytic((p.g_mhz * amplitude).abs(), p.omega_q_ghz, p.omega_d_ghz, time)
            }
            _ => pulse_angle(&env, p.g_mhz, time).map(|theta| (theta / 2.0).sin().powi(2)),
        }
        .map_err(numerical("closed-form Rabi probability"))?;
        t.push(vec![time.into(), pe[i].into(), analytic.into()]);
    }
    Ok((t, stats))
}

fn pulse_calibration(p: &PulseCalibrationParams) -> Result<(Table, RunStats), ScenarioError> {
    let env = envelope(&p.envelope_fields())?;
    let mut t = Table::new(&["angle_over_pi", "angle_rad", "duration_ns"], PlotSpec { x: 0, ys: vec![2], group: None });
    for &a in &p.angles_over_pi {
        let target = a * PI;
        let d = duration_for_angle(&env, p.g_mhz, target).map_err(numerical("pulse calibration"))?;
        t.push(vec![a.into(), target.into(), d.into()]);
    }
    Ok((t, RunStats::default()))
}

fn dispersive_spectrum(p: &DispersiveSpectrumParams, output: &OutputSpec) -> Result<(Table, RunStats), ScenarioError> {
    let span = output.f_span_mhz.expect("resolved") * 1e-3;
    let step = output.f_step_mhz.expect("resolved") * 1e-3;
    let n = (span / step + 1e-9).floor() as usize;
    let start = p.omega_r_ghz - span / 2.0;
    let grid: Vec<f64> = (0..=n).map(|i| start + step * i as f64).collect();
    let pe = match p.p_e {
        Some(v) => v,
        None => boltzmann_excitation(p.omega_q_ghz, p.t_mk).map_err(numerical("qubit population"))?.p_excited,
    };
    let s = transmission_spectrum(p.omega_r_ghz, p.chi_mhz, p.kappa2_mhz, pe, &grid)
        .map_err(numerical("transmission spectrum"))?;
    let mut t = Table::new(&["f_GHz", "transmission"], PlotSpec { x: 0, ys: vec![1], group: None });
    for (f, v) in s.freqs.iter().zip(&s.values) {
        t.push(vec![(*f).into(), (*v).into()]);
    }
    Ok((t, RunStats::default()))
}

fn bath_two_qubit(p: &EntropySweepParams) -> BathSpec {
    BathSpec {
        temperature_mk: p.t_mk,
        kappa1: 0.0,
        kappa_phi: 0.0,
        gamma1: p.gamma_mhz,
        gamma_phi: p.gamma_phi_mhz,
    }
}

fn entropy_sweep(p: &EntropySweepParams, output: &OutputSpec) -> Result<(Table, RunStats), ScenarioError> {
    let times = time_grid(output)?;
    let bath = bath_two_qubit(p);
    let mut stats = RunStats::default();
    let mut t = Table::new(&["g_MHz", "S_total_nats", "S_qubit1_nats"], PlotSpec { x: 0, ys: vec![1, 2], group: None });
    let opts = EvolveOptions { store_states: true, ..options(p.rtol, p.atol) };
    for &g in &p.g_mhz {
        let spec = HamiltonianSpec::TwoQubit { omega1: p.omega1_ghz, omega2: p.omega2_ghz, g: g * 1e-3 };
        let space = spec.space();
        let h = build_hamiltonian(&spec).map_err(numerical("two-qubit Hamiltonian"))?;
        let mut collapse = Vec::new();
        for (k, (slot, freq)) in [(0usize, p.omega1_ghz), (1, p.omega2_ghz)].into_iter().enumerate() {
            let layout = SlotLayout { cavity: None, qubits: vec![slot] };
            let ops = build_collapse_operators(&bath, &space, &layout, freq, freq, CollapseOptions { qubit_thermal: p.qubit_thermal })
                .map_err(numerical("collapse operators"))?;
            collapse.extend(ops.into_iter().map(|mut c| {
                c.label = c.label.replacen("qubit", &format!("qubit{}", k + 1), 1);
                c
            }));
        }
        let rho0 = DensityMatrix::basis_state(space, &[1, 0]).map_err(numerical("initial state"))?;
        let r = evolve("entropy evolution", &h, &rho0, &collapse, &times, &[], &opts, &mut stats)?;
        let states = r.states.as_ref().expect("states stored");
        let total: Vec<f64> = states.iter().map(von_neumann_entropy).collect();
        let reduced: Vec<f64> = states
            .iter()
            .map(|s| entanglement_entropy(s, &[0]))
            .collect::<crate::Result<_>>()
            .map_err(numerical("reduced state"))?;
        let avg = |v: &[f64]| time_average(&times, v).unwrap_or(v[0]);
        t.push(vec![g.into(), avg(&total).into(), avg(&reduced).into()]);
    }
    Ok((t, stats))
}

fn epr_params(p: &EprParamsParams) -> Result<(Table, RunStats), ScenarioError> {
    let l_j = p.l_j_nh * 1e-9;
    let e_j = josephson_energy_from_inductance(l_j).map_err(numerical("Josephson energy"))?;
    let lc = lc_quantize(p.c_qubit_ff * 1e-15, l_j).map_err(numerical("LC quantization"))?;
    let input = EprInput {
        modes: vec![
            EprMode { omega_m: lc.omega_r, p_mj: p.p_qubit },
            EprMode { omega_m: p.f_cavity_ghz, p_mj: p.p_cavity },
        ],
        e_j,
    };
    let xi = input.zero_point().map_err(numerical("zero-point fluctuations"))?;
    let k = kerr_matrix(&xi, &input.frequencies(), e_j, p.fock_dim).map_err(numerical("Kerr matrix"))?;
    let chi = k.chi[0][1];
    let delta = (k.frequencies[0] - k.frequencies[1]).abs();
    let g = coupling_from_dispersive(chi, delta).map_err(numerical("dispersive coupling"))?;
    let mut t = Table::new(
        &["L_J_nH", "E_J_GHz", "f_qubit_GHz", "f_cavity_GHz", "alpha_qubit_MHz", "alpha_cavity_MHz", "chi_MHz", "g_MHz"],
        PlotSpec { x: 0, ys: vec![4, 6], group: None },
    );
    t.push(vec![
        p.l_j_nh.into(),
        e_j.into(),
        k.frequencies[0].into(),
        k.frequencies[1].into(),
        (k.alpha[0] * 1e3).into(),
        (k.alpha[1] * 1e3).into(),
        (chi * 1e3).into(),
        (g * 1e3).into(),
    ]);
    Ok((t, RunStats::default()))
}

