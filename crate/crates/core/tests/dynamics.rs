use cqed_core::analysis::dominant_frequency;
use cqed_core::dynamics::{
    build_collapse_operators, build_hamiltonian, lindblad_evolve, rabi_probability_analytic, CollapseOperator,
    CollapseOptions, Envelope, EvolveOptions, Frame, Hamiltonian, HamiltonianSpec, Observable, SlotLayout,
};
use cqed_core::hilbert::{
    embed_operator, ladder_operator, pauli_operator, DensityMatrix, LadderKind, PauliKind, QuantumOperator,
    SpaceDescriptor,
};
use cqed_core::thermal::{thermal_occupancy, BathSpec};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(t_max: f64, dt: f64) -> Vec<f64> {
    let n = (t_max / dt).round() as usize;
    (0..=n).map(|i| i as f64 * dt).collect()
}

fn excited_projector() -> QuantumOperator {
    let sm = pauli_operator(PauliKind::Minus);
    &sm.adjoint() * &sm
}

fn jc(frame: Frame, n_max: usize) -> (HamiltonianSpec, Hamiltonian) {
    let spec = HamiltonianSpec::JaynesCummings { omega_r: 7.0, omega_q: 7.0, g: 0.2, n_max, frame };
    let h = build_hamiltonian(&spec).unwrap();
    (spec, h)
}

fn jc_observables(space: &SpaceDescriptor, n_max: usize) -> Vec<Observable> {
    let n = ladder_operator(n_max + 1, LadderKind::Number).unwrap();
    vec![
        Observable::new("P_e", embed_operator(&excited_projector(), 0, space).unwrap()),
        Observable::new("n", embed_operator(&n, 1, space).unwrap()),
    ]
}

fn lossy_bath(t_mk: f64) -> BathSpec {
    BathSpec { temperature_mk: t_mk, kappa1: 0.5, kappa_phi: 0.0, gamma1: 0.01, gamma_phi: 0.0 }
}

#[test]
fn cavity_relaxes_to_thermal_occupancy() {
    let space = SpaceDescriptor::single(10).unwrap();
    let h = Hamiltonian::Static(QuantumOperator::zeros(space.clone()));
    let bath = BathSpec { temperature_mk: 200.0, kappa1: 0.5, kappa_phi: 0.0, gamma1: 0.0, gamma_phi: 0.0 };
    let layout = SlotLayout { cavity: Some(0), qubits: vec![] };
    let c = build_collapse_operators(&bath, &space, &layout, 7.0, 7.0, CollapseOptions::default()).unwrap();
    let rho0 = DensityMatrix::basis_state(space.clone(), &[0]).unwrap();
    let n = Observable::new("n", ladder_operator(10, LadderKind::Number).unwrap());
    let r = lindblad_evolve(&h, &rho0, &c, &[0.0, 8000.0], &[n], &EvolveOptions::default()).unwrap();
    let n_th = thermal_occupancy(7.0, 200.0).unwrap();
    assert!((n_th - 0.229).abs() < 1e-3);
    assert!((r.trace("n").unwrap()[1] - n_th).abs() < 1e-4);
}

#[test]
fn jc_without_loss_conserves_excitations() {
    for frame in [Frame::Lab, Frame::Rotating] {
        let (spec, h) = jc(frame, 8);
        let space = spec.space();
        let obs = jc_observables(&space, 8);
        let rho0 = DensityMatrix::basis_state(space, &[1, 3]).unwrap();
        let r = lindblad_evolve(&h, &rho0, &[], &grid(5.0, 0.05), &obs, &EvolveOptions::default()).unwrap();
        let (pe, n) = (r.trace("P_e").unwrap(), r.trace("n").unwrap());
        for i in 0..pe.len() {
            assert!((pe[i] + n[i] - 4.0).abs() < 1e-8, "{frame:?} {i}: {}", pe[i] + n[i]);
        }
    }
}

#[test]
fn lab_and_rotating_jc_agree_on_populations() {
    let times = grid(5.0, 0.05);
    let run = |frame| {
        let (spec, h) = jc(frame, 8);
        let space = spec.space();
        let obs = jc_observables(&space, 8);
        let rho0 = DensityMatrix::basis_state(space, &[1, 2]).unwrap();
        lindblad_evolve(&h, &rho0, &[], &times, &obs, &EvolveOptions::default()).unwrap()
    };
    let (lab, rot) = (run(Frame::Lab), run(Frame::Rotating));
    for (a, b) in lab.trace("P_e").unwrap().iter().zip(rot.trace("P_e").unwrap()) {
        assert!((a - b).abs() < 1e-6);
    }
}

fn driven(frame: Frame, g_ghz: f64, t_max: f64, dt: f64) -> (Vec<f64>, Vec<f64>) {
    let spec = HamiltonianSpec::DrivenQubit {
        omega_q: 5.0,
        g: g_ghz,
        omega_d: 5.0,
        envelope: Envelope::Constant { amplitude: 1.0 },
        frame,
    };
    let h = build_hamiltonian(&spec).unwrap();
    let rho0 = DensityMatrix::basis_state(spec.space(), &[0]).unwrap();
    let times = grid(t_max, dt);
    let r = lindblad_evolve(&h, &rho0, &[], &times, &[Observable::new("P_e", excited_projector())], &EvolveOptions::default())
        .unwrap();
    let pe = r.trace("P_e").unwrap().to_vec();
    (times, pe)
}

#[test]
fn rotating_drive_matches_closed_form() {
    let (times, pe) = driven(Frame::Rotating, 0.5, 10.0, 0.01);
    for (t, p) in times.iter().zip(&pe) {
        let want = rabi_probability_analytic(500.0, 5.0, 5.0, *t).unwrap();
        assert!((p - want).abs() < 1e-6, "t = {t}: {p} vs {want}");
    }
}

#[test]
fn weak_lab_drive_follows_closed_form() {
    // g / omega_d = 0.008
    let (times, pe) = driven(Frame::Lab, 0.04, 30.0, 0.1);
    let worst = times
        .iter()
        .zip(&pe)
        .map(|(t, p)| (p - rabi_probability_analytic(40.0, 5.0, 5.0, *t).unwrap()).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.02, "{worst}");
}

#[test]
fn vacuum_rabi_frequency_scales_with_photon_number() {
    for n in [0usize, 5] {
        let (spec, h) = jc(Frame::Rotating, 10);
        let space = spec.space();
        let obs = jc_observables(&space, 10);
        let rho0 = DensityMatrix::basis_state(space, &[1, n]).unwrap();
        let times = grid(50.0, 0.05);
        let r = lindblad_evolve(&h, &rho0, &[], &times, &obs, &EvolveOptions::default()).unwrap();
        let f = dominant_frequency(&times, r.trace("P_e").unwrap()).unwrap().unwrap();
        let want = 2.0 * 200.0 * ((n + 1) as f64).sqrt();
        assert!((f - want).abs() / want < 0.01, "n = {n}: {f} vs {want}");
    }
}

#[test]
fn halving_tolerance_converges() {
    let (spec, h) = jc(Frame::Rotating, 12);
    let space = spec.space();
    let c = build_collapse_operators(&lossy_bath(200.0), &space, &spec.layout(), 7.0, 7.0, CollapseOptions::default())
        .unwrap();
    let obs = jc_observables(&space, 12);
    let rho0 = DensityMatrix::basis_state(space, &[1, 3]).unwrap();
    let times = grid(10.0, 0.1);
    let tol = 1e-6;
    let run = |rtol: f64| {
        let opts = EvolveOptions { rtol, atol: rtol * 1e-2, ..EvolveOptions::default() };
        lindblad_evolve(&h, &rho0, &c, &times, &obs, &opts).unwrap()
    };
    let (coarse, fine) = (run(tol), run(tol / 2.0));
    for label in ["P_e", "n"] {
        for (a, b) in coarse.trace(label).unwrap().iter().zip(fine.trace(label).unwrap()) {
            assert!((a - b).abs() < 10.0 * tol, "{label}: {a} vs {b}");
        }
    }
}

#[test]
fn lossy_jc_stays_physical() {
    let (spec, h) = jc(Frame::Rotating, 14);
    let space = spec.space();
    let c = build_collapse_operators(&lossy_bath(200.0), &space, &spec.layout(), 7.0, 7.0, CollapseOptions::default())
        .unwrap();
    let rho0 = DensityMatrix::basis_state(space.clone(), &[1, 5]).unwrap();
    let opts = EvolveOptions { store_states: true, ..EvolveOptions::default() };
    let r = lindblad_evolve(&h, &rho0, &c, &grid(20.0, 0.5), &jc_observables(&space, 14), &opts).unwrap();
    assert!(r.max_trace_error < 1e-6);
    assert!(r.min_eigenvalue.unwrap() > -1e-6);
    for s in r.states.unwrap() {
        assert!(s.eigenvalues().iter().all(|&e| e > -1e-6));
    }
}

fn random_mixed_state(space: &SpaceDescriptor, seed: u64) -> DensityMatrix {
    let d = space.total_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(space.clone(), m / tr).unwrap()
}

#[test]
fn purity_never_increases_under_unital_dissipation() {
    let space = SpaceDescriptor::new(vec![2, 4]).unwrap();
    let h = Hamiltonian::Static(QuantumOperator::zeros(space.clone()));
    let n = embed_operator(&ladder_operator(4, LadderKind::Number).unwrap(), 1, &space).unwrap();
    let sz = embed_operator(&pauli_operator(PauliKind::Z), 0, &space).unwrap();
    let sx = embed_operator(&pauli_operator(PauliKind::X), 0, &space).unwrap();
    let sm = embed_operator(&pauli_operator(PauliKind::Minus), 0, &space).unwrap();
    let channels = vec![
        CollapseOperator::new("cavity_dephasing", 0.8, n),
        CollapseOperator::new("qubit_dephasing", 0.3, sz),
        CollapseOperator::new("qubit_flip", 0.2, sx),
        // sigma_- and sigma_+ at equal rates form a unital pair
        CollapseOperator::new("qubit_down", 0.1, sm.clone()),
        CollapseOperator::new("qubit_up", 0.1, sm.adjoint()),
    ];
    for seed in 0..5 {
        let rho0 = random_mixed_state(&space, seed);
        let opts = EvolveOptions { store_states: true, ..EvolveOptions::default() };
        let r = lindblad_evolve(&h, &rho0, &channels, &grid(2000.0, 20.0), &[], &opts).unwrap();
        let purity: Vec<f64> = r.states.unwrap().iter().map(DensityMatrix::purity).collect();
        for w in purity.windows(2) {
            assert!(w[1] <= w[0] + 1e-8, "{} -> {}", w[0], w[1]);
        }
        assert!(purity.last().unwrap() < &purity[0]);
    }
}

#[test]
fn amplitude_damping_can_purify() {
    // non-unital channels are excluded from the purity property: decay of a
    // maximally mixed qubit drives it toward the pure ground state
    let space = SpaceDescriptor::single(2).unwrap();
    let h = Hamiltonian::Static(QuantumOperator::zeros(space.clone()));
    let c = vec![CollapseOperator::new("down", 1.0, pauli_operator(PauliKind::Minus))];
    let opts = EvolveOptions { store_states: true, ..EvolveOptions::default() };
    let r = lindblad_evolve(&h, &DensityMatrix::maximally_mixed(space), &c, &[0.0, 500.0], &[], &opts).unwrap();
    let states = r.states.unwrap();
    assert!(states[1].purity() > states[0].purity() + 0.1);
}
