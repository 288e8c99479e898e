use crate::error::{Error, Result};
use crate::hilbert::{
    embed_operator, ladder_operator, pauli_operator, LadderKind, PauliKind, QuantumOperator,
    SpaceDescriptor,
};
use crate::thermal::{thermal_rates, BathSpec, Subsystem};
use crate::units::mhz_to_angular;

/// Jump operator sqrt(rate) * A with the rate kept as an ordinary frequency
/// (MHz). The integrator converts to angular units.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapseOperator {
    pub label: String,
    pub rate_mhz: f64,
    pub operator: QuantumOperator,
}

impl CollapseOperator {
    pub fn new(label: impl Into<String>, rate_mhz: f64, operator: QuantumOperator) -> Self {
        Self { label: label.into(), rate_mhz, operator }
    }

    /// sqrt(rate) in MHz^(1/2).
    pub fn prefactor(&self) -> f64 {
        self.rate_mhz.sqrt()
    }

    /// The jump operator in integrator units, sqrt(2 pi rate) * A with the
    /// rate in 1/ns.
    pub fn scaled(&self) -> QuantumOperator {
        &self.operator * mhz_to_angular(self.rate_mhz).sqrt()
    }
}

/// Where the cavity and qubits live in a composite space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotLayout {
    pub cavity: Option<usize>,
    pub qubits: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CollapseOptions {
    /// Add thermal absorption n_th(omega_q) Gamma_1 sigma_+ on the qubits.
    pub qubit_thermal: bool,
}

/// Thermal collapse operators for a cavity and its qubits.
///
/// Pure-dephasing channels carry rate 2 kappa_phi (2 Gamma_phi) so that
/// coherences decay at kappa_1/2 + kappa_phi. Zero-rate channels are omitted.
pub fn build_collapse_operators(
    bath: &BathSpec,
    space: &SpaceDescriptor,
    layout: &SlotLayout,
    cavity_freq: f64,
    qubit_freq: f64,
    options: CollapseOptions,
) -> Result<Vec<CollapseOperator>> {
    bath.validate()?;
    let mut out = Vec::new();
    let mut push = |label: String, rate: f64, op: QuantumOperator| {
        if rate > 0.0 {
            out.push(CollapseOperator::new(label, rate, op));
        }
    };

    if let Some(slot) = layout.cavity {
        let dim = *space.dims().get(slot).ok_or_else(|| {
            Error::DimensionMismatch(format!("cavity slot {slot} missing from space {space}"))
        })?;
        let rates = thermal_rates(bath, cavity_freq, Subsystem::Resonator)?;
        let a = embed_operator(&ladder_operator(dim, LadderKind::Annihilate)?, slot, space)?;
        let n = embed_operator(&ladder_operator(dim, LadderKind::Number)?, slot, space)?;
        push("cavity_down".into(), rates.kappa_down, a.clone());
        push("cavity_up".into(), rates.kappa_up, a.adjoint());
        push("cavity_dephasing".into(), 2.0 * bath.kappa_phi, n);
    }

    let many = layout.qubits.len() > 1;
    for (k, &slot) in layout.qubits.iter().enumerate() {
        if space.dims().get(slot) != Some(&2) {
            return Err(Error::DimensionMismatch(format!(
                "qubit slot {slot} is not two-dimensional in space {space}"
            )));
        }
        let name = if many { format!("qubit{}", k + 1) } else { "qubit".to_string() };
        let sm = embed_operator(&pauli_operator(PauliKind::Minus), slot, space)?;
        let proj = &sm.adjoint() * &sm;
        if options.qubit_thermal {
            let rates = thermal_rates(bath, qubit_freq, Subsystem::Qubit)?;
            push(format!("{name}_down"), rates.kappa_down, sm.clone());
            push(format!("{name}_up"), rates.kappa_up, sm.adjoint());
        } else {
            push(format!("{name}_down"), bath.gamma1, sm);
        }
        push(format!("{name}_dephasing"), 2.0 * bath.gamma_phi, proj);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jc_space() -> (SpaceDescriptor, SlotLayout) {
        (
            SpaceDescriptor::new(vec![2, 8]).unwrap(),
            SlotLayout { cavity: Some(1), qubits: vec![0] },
        )
    }

    fn bath(t: f64, k1: f64, kphi: f64, g1: f64, gphi: f64) -> BathSpec {
        BathSpec { temperature_mk: t, kappa1: k1, kappa_phi: kphi, gamma1: g1, gamma_phi: gphi }
    }

    #[test]
    fn zero_temperature_limit() {
        let (space, layout) = jc_space();
        let ops = build_collapse_operators(
            &bath(1e-3, 0.5, 0.0, 0.01, 0.0),
            &space,
            &layout,
            7.0,
            7.0,
            CollapseOptions::default(),
        )
        .unwrap();
        assert_eq!(ops.len(), 2);
        assert_eq!(ops[0].label, "cavity_down");
        assert!((ops[0].rate_mhz - 0.5).abs() < 1e-15);
        assert_eq!(ops[1].label, "qubit_down");
        assert!((ops[1].rate_mhz - 0.01).abs() < 1e-15);
    }

    #[test]
    fn thermal_prefactors() {
        let (space, layout) = jc_space();
        let ops = build_collapse_operators(
            &bath(200.0, 0.5, 0.0, 0.0, 0.0),
            &space,
            &layout,
            7.0,
            7.0,
            CollapseOptions::default(),
        )
        .unwrap();
        assert_eq!(ops.len(), 2);
        assert!((ops[0].prefactor() - 0.6146f64.sqrt()).abs() < 1e-4);
        assert!((ops[1].prefactor() - 0.1146f64.sqrt()).abs() < 1e-4);
        assert_eq!(ops[1].label, "cavity_up");
    }

    #[test]
    fn all_zero_rates_give_no_channels() {
        let (space, layout) = jc_space();
        let ops = build_collapse_operators(
            &bath(200.0, 0.0, 0.0, 0.0, 0.0),
            &space,
            &layout,
            7.0,
            7.0,
            CollapseOptions { qubit_thermal: true },
        )
        .unwrap();
        assert!(ops.is_empty());
    }

    #[test]
    fn dephasing_carries_factor_two() {
        let (space, layout) = jc_space();
        let ops = build_collapse_operators(
            &bath(200.0, 0.0, 0.25, 0.0, 0.1),
            &space,
            &layout,
            7.0,
            7.0,
            CollapseOptions::default(),
        )
        .unwrap();
        assert_eq!(ops.len(), 2);
        assert!((ops[0].rate_mhz - 0.5).abs() < 1e-15);
        assert!((ops[1].rate_mhz - 0.2).abs() < 1e-15);
    }

    #[test]
    fn optional_qubit_absorption() {
        let (space, layout) = jc_space();
        let ops = build_collapse_operators(
            &bath(200.0, 0.0, 0.0, 0.01, 0.0),
            &space,
            &layout,
            7.0,
            7.0,
            CollapseOptions { qubit_thermal: true },
        )
        .unwrap();
        let labels: Vec<_> = ops.iter().map(|o| o.label.as_str()).collect();
        assert_eq!(labels, ["qubit_down", "qubit_up"]);
    }

    #[test]
    fn slot_mismatch() {
        let space = SpaceDescriptor::new(vec![3, 8]).unwrap();
        let layout = SlotLayout { cavity: Some(1), qubits: vec![0] };
        let r = build_collapse_operators(
            &bath(200.0, 0.5, 0.0, 0.01, 0.0),
            &space,
            &layout,
            7.0,
            7.0,
            CollapseOptions::default(),
        );
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
        let layout = SlotLayout { cavity: Some(4), qubits: vec![] };
        assert!(build_collapse_operators(
            &bath(200.0, 0.5, 0.0, 0.01, 0.0),
            &space,
            &layout,
            7.0,
            7.0,
            CollapseOptions::default()
        )
        .is_err());
    }
}
