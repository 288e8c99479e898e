//! Scenario configuration files: a `[scenario]` table naming the kind and its
//! unit-suffixed parameters, and an `[output]` table naming files and grids.

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::dynamics::{Envelope, Frame};

/// The scenario kinds understood by the runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    TransmonTable,
    BoltzmannCurve,
    CavityModes,
    RabiJc,
    DrivenRabi,
    PulseCalibration,
    DispersiveSpectrum,
    EntropySweep,
    EprParams,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 9] = [
        ScenarioKind::TransmonTable,
        ScenarioKind::BoltzmannCurve,
        ScenarioKind::CavityModes,
        ScenarioKind::RabiJc,
        ScenarioKind::DrivenRabi,
        ScenarioKind::PulseCalibration,
        ScenarioKind::DispersiveSpectrum,
        ScenarioKind::EntropySweep,
        ScenarioKind::EprParams,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::TransmonTable => "transmon_table",
            ScenarioKind::BoltzmannCurve => "boltzmann_curve",
            ScenarioKind::CavityModes => "cavity_modes",
            ScenarioKind::RabiJc => "rabi_jc",
            ScenarioKind::DrivenRabi => "driven_rabi",
            ScenarioKind::PulseCalibration => "pulse_calibration",
            ScenarioKind::DispersiveSpectrum => "dispersive_spectrum",
            ScenarioKind::EntropySweep => "entropy_sweep",
            ScenarioKind::EprParams => "epr_params",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioKind::TransmonTable => "transmon qubit frequency and anharmonicity by method",
            ScenarioKind::BoltzmannCurve => "Boltzmann factor, excited population and n_th vs temperature",
            ScenarioKind::CavityModes => "rectangular cavity modes with thermal Q and kappa",
            ScenarioKind::RabiJc => "Jaynes-Cummings Rabi oscillations under a thermal bath",
            ScenarioKind::DrivenRabi => "driven qubit excitation vs the closed-form Rabi formula",
            ScenarioKind::PulseCalibration => "pulse durations for target rotation angles",
            ScenarioKind::DispersiveSpectrum => "dispersive cavity transmission with thermal qubit",
            ScenarioKind::EntropySweep => "time-averaged two-qubit entropy vs coupling",
            ScenarioKind::EprParams => "junction-mode self- and cross-Kerr from participation ratios",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    fn grid(self) -> GridKind {
        match self {
            ScenarioKind::RabiJc => GridKind::Time { t_max: 100.0, dt: 0.05 },
            ScenarioKind::DrivenRabi => GridKind::Time { t_max: 10.0, dt: 0.01 },
            ScenarioKind::EntropySweep => GridKind::Time { t_max: 50.0, dt: 0.25 },
            ScenarioKind::DispersiveSpectrum => GridKind::Frequency { span: 40.0, step: 0.01 },
            _ => GridKind::None,
        }
    }
}

enum GridKind {
    None,
    Time { t_max: f64, dt: f64 },
    Frequency { span: f64, step: f64 },
}

fn default_rtol() -> f64 {
    1e-8
}

fn default_atol() -> f64 {
    1e-10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransmonTableParams {
    #[serde(rename = "E_J_GHz")]
    pub e_j_ghz: f64,
    #[serde(rename = "EJ_over_EC")]
    pub ej_over_ec: f64,
    pub orders: Vec<u8>,
    pub include_exact: bool,
    pub charge_cutoff: usize,
}

impl Default for TransmonTableParams {
    fn default() -> Self {
        Self { e_j_ghz: 27.31, ej_over_ec: 122.47, orders: vec![0, 1, 2], include_exact: false, charge_cutoff: 30 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoltzmannCurveParams {
    #[serde(rename = "f_GHz")]
    pub f_ghz: Vec<f64>,
    #[serde(rename = "T_min_mK")]
    pub t_min_mk: f64,
    #[serde(rename = "T_max_mK")]
    pub t_max_mk: f64,
    #[serde(rename = "T_step_mK")]
    pub t_step_mk: f64,
}

impl Default for BoltzmannCurveParams {
    fn default() -> Self {
        Self { f_ghz: vec![7.0], t_min_mk: 10.0, t_max_mk: 1000.0, t_step_mk: 10.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavityModesParams {
    #[serde(rename = "Lx_mm")]
    pub lx_mm: f64,
    #[serde(rename = "Ly_mm")]
    pub ly_mm: f64,
    #[serde(rename = "Lz_mm")]
    pub lz_mm: f64,
    pub modes: Vec<[u32; 3]>,
    #[serde(rename = "T_mK")]
    pub t_mk: f64,
    #[serde(rename = "Q_ref")]
    pub q_ref: f64,
    #[serde(rename = "stub_length_mm", skip_serializing_if = "Option::is_none")]
    pub stub_length_mm: Option<f64>,
}

impl Default for CavityModesParams {
    fn default() -> Self {
        Self {
            lx_mm: 36.0,
            ly_mm: 6.0,
            lz_mm: 22.0,
            modes: vec![[1, 0, 1], [2, 0, 1], [1, 0, 2], [2, 0, 2], [1, 1, 0]],
            t_mk: 200.0,
            q_ref: 7e7,
            stub_length_mm: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RabiJcParams {
    #[serde(rename = "omega_r_GHz")]
    pub omega_r_ghz: f64,
    #[serde(rename = "omega_q_GHz")]
    pub omega_q_ghz: f64,
    #[serde(rename = "g_MHz")]
    pub g_mhz: f64,
    #[serde(rename = "kappa_MHz")]
    pub kappa_mhz: f64,
    #[serde(rename = "kappa_phi_MHz")]
    pub kappa_phi_mhz: f64,
    #[serde(rename = "Gamma_MHz")]
    pub gamma_mhz: f64,
    #[serde(rename = "Gamma_phi_MHz")]
    pub gamma_phi_mhz: f64,
    #[serde(rename = "T_mK")]
    pub t_mk: f64,
    pub n_photons: usize,
    pub qubit_excited: bool,
    pub n_max: usize,
    pub qubit_thermal: bool,
    pub frame: Frame,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for RabiJcParams {
    fn default() -> Self {
        Self {
            omega_r_ghz: 7.0,
            omega_q_ghz: 7.0,
            g_mhz: 200.0,
            kappa_mhz: 1e-5,
            kappa_phi_mhz: 0.0,
            gamma_mhz: 0.01,
            gamma_phi_mhz: 0.0,
            t_mk: 200.0,
            n_photons: 5,
            qubit_excited: true,
            n_max: 15,
            qubit_thermal: false,
            frame: Frame::Rotating,
            rtol: default_rtol(),
            atol: default_atol(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Constant,
    Sine,
    Table,
}

/// Envelope fields shared by the drive scenarios.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeFields<'a> {
    pub kind: EnvelopeKind,
    pub amplitude: f64,
    pub omega_e_mhz: f64,
    pub samples: &'a [[f64; 2]],
}

impl EnvelopeFields<'_> {
    pub fn build(&self) -> Envelope {
        match self.kind {
            EnvelopeKind::Constant => Envelope::Constant { amplitude: self.amplitude },
            EnvelopeKind::Sine => Envelope::Sine { omega_e_mhz: self.omega_e_mhz },
            EnvelopeKind::Table => {
                Envelope::Table { samples: self.samples.iter().map(|s| (s[0], s[1])).collect() }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DrivenRabiParams {
    #[serde(rename = "omega_q_GHz")]
    pub omega_q_ghz: f64,
    #[serde(rename = "omega_d_GHz")]
    pub omega_d_ghz: f64,
    #[serde(rename = "g_MHz")]
    pub g_mhz: f64,
    pub envelope: EnvelopeKind,
    pub amplitude: f64,
    #[serde(rename = "omega_e_MHz")]
    pub omega_e_mhz: f64,
    pub samples: Vec<[f64; 2]>,
    pub frame: Frame,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for DrivenRabiParams {
    fn default() -> Self {
        Self {
            omega_q_ghz: 5.0,
            omega_d_ghz: 5.0,
            g_mhz: 500.0,
            envelope: EnvelopeKind::Constant,
            amplitude: 1.0,
            omega_e_mhz: 10.0,
            samples: Vec::new(),
            frame: Frame::Rotating,
            rtol: default_rtol(),
            atol: default_atol(),
        }
    }
}

impl DrivenRabiParams {
    pub fn envelope_fields(&self) -> EnvelopeFields<'_> {
        EnvelopeFields {
            kind: self.envelope,
            amplitude: self.amplitude,
            omega_e_mhz: self.omega_e_mhz,
            samples: &self.samples,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseCalibrationParams {
    #[serde(rename = "g_MHz")]
    pub g_mhz: f64,
    pub envelope: EnvelopeKind,
    pub amplitude: f64,
    #[serde(rename = "omega_e_MHz")]
    pub omega_e_mhz: f64,
    pub samples: Vec<[f64; 2]>,
    pub angles_over_pi: Vec<f64>,
}

impl Default for PulseCalibrationParams {
    fn default() -> Self {
        Self {
            g_mhz: 20.0,
            envelope: EnvelopeKind::Sine,
            amplitude: 1.0,
            omega_e_mhz: 10.0,
            samples: Vec::new(),
            angles_over_pi: vec![0.5, 1.0],
        }
    }
}

impl PulseCalibrationParams {
    pub fn envelope_fields(&self) -> EnvelopeFields<'_> {
        EnvelopeFields {
            kind: self.envelope,
            amplitude: self.amplitude,
            omega_e_mhz: self.omega_e_mhz,
            samples: &self.samples,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersiveSpectrumParams {
    #[serde(rename = "omega_r_GHz")]
    pub omega_r_ghz: f64,
    #[serde(rename = "omega_q_GHz")]
    pub omega_q_ghz: f64,
    #[serde(rename = "chi_MHz")]
    pub chi_mhz: f64,
    #[serde(rename = "kappa2_MHz")]
    pub kappa2_mhz: f64,
    #[serde(rename = "T_mK")]
    pub t_mk: f64,
    /// Overrides the thermal excited population of the qubit.
    #[serde(rename = "P_e", skip_serializing_if = "Option::is_none")]
    pub p_e: Option<f64>,
}

impl Default for DispersiveSpectrumParams {
    fn default() -> Self {
        Self { omega_r_ghz: 6.0, omega_q_ghz: 7.0, chi_mhz: 6.0, kappa2_mhz: 0.1, t_mk: 200.0, p_e: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntropySweepParams {
    #[serde(rename = "omega1_GHz")]
    pub omega1_ghz: f64,
    #[serde(rename = "omega2_GHz")]
    pub omega2_ghz: f64,
    #[serde(rename = "g_MHz")]
    pub g_mhz: Vec<f64>,
    #[serde(rename = "Gamma_MHz")]
    pub gamma_mhz: f64,
    #[serde(rename = "Gamma_phi_MHz")]
    pub gamma_phi_mhz: f64,
    #[serde(rename = "T_mK")]
    pub t_mk: f64,
    pub qubit_thermal: bool,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for EntropySweepParams {
    fn default() -> Self {
        Self {
            omega1_ghz: 7.0,
            omega2_ghz: 7.0,
            g_mhz: (0..=10).map(|i| 50.0 * i as f64).collect(),
            gamma_mhz: 0.01,
            gamma_phi_mhz: 0.0,
            t_mk: 200.0,
            qubit_thermal: false,
            rtol: default_rtol(),
            atol: default_atol(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EprParamsParams {
    #[serde(rename = "L_J_nH")]
    pub l_j_nh: f64,
    #[serde(rename = "C_qubit_fF")]
    pub c_qubit_ff: f64,
    #[serde(rename = "f_cavity_GHz")]
    pub f_cavity_ghz: f64,
    pub p_qubit: f64,
    pub p_cavity: f64,
    pub fock_dim: usize,
}

impl Default for EprParamsParams {
    fn default() -> Self {
        Self { l_j_nh: 6.0, c_qubit_ff: 86.6, f_cavity_ghz: 8.0, p_qubit: 0.8, p_cavity: 0.02, fock_dim: 8 }
    }
}

/// Kind-specific parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioParams {
    TransmonTable(TransmonTableParams),
    BoltzmannCurve(BoltzmannCurveParams),
    CavityModes(CavityModesParams),
    RabiJc(RabiJcParams),
    DrivenRabi(DrivenRabiParams),
    PulseCalibration(PulseCalibrationParams),
    DispersiveSpectrum(DispersiveSpectrumParams),
    EntropySweep(EntropySweepParams),
    EprParams(EprParamsParams),
}

impl ScenarioParams {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            ScenarioParams::TransmonTable(_) => ScenarioKind::TransmonTable,
            ScenarioParams::BoltzmannCurve(_) => ScenarioKind::BoltzmannCurve,
            ScenarioParams::CavityModes(_) => ScenarioKind::CavityModes,
            ScenarioParams::RabiJc(_) => ScenarioKind::RabiJc,
            ScenarioParams::DrivenRabi(_) => ScenarioKind::DrivenRabi,
            ScenarioParams::PulseCalibration(_) => ScenarioKind::PulseCalibration,
            ScenarioParams::DispersiveSpectrum(_) => ScenarioKind::DispersiveSpectrum,
            ScenarioParams::EntropySweep(_) => ScenarioKind::EntropySweep,
            ScenarioParams::EprParams(_) => ScenarioKind::EprParams,
        }
    }

    /// Defaults for a kind.
    pub fn defaults(kind: ScenarioKind) -> Self {
        match kind {
            ScenarioKind::TransmonTable => ScenarioParams::TransmonTable(Default::default()),
            ScenarioKind::BoltzmannCurve => ScenarioParams::BoltzmannCurve(Default::default()),
            ScenarioKind::CavityModes => ScenarioParams::CavityModes(Default::default()),
            ScenarioKind::RabiJc => ScenarioParams::RabiJc(Default::default()),
            ScenarioKind::DrivenRabi => ScenarioParams::DrivenRabi(Default::default()),
            ScenarioKind::PulseCalibration => ScenarioParams::PulseCalibration(Default::default()),
            ScenarioKind::DispersiveSpectrum => ScenarioParams::DispersiveSpectrum(Default::default()),
            ScenarioKind::EntropySweep => ScenarioParams::EntropySweep(Default::default()),
            ScenarioKind::EprParams => ScenarioParams::EprParams(Default::default()),
        }
    }

    fn to_table(&self) -> toml::Table {
        let table = match self {
            ScenarioParams::TransmonTable(p) => toml::Table::try_from(p),
            ScenarioParams::BoltzmannCurve(p) => toml::Table::try_from(p),
            ScenarioParams::CavityModes(p) => toml::Table::try_from(p),
            ScenarioParams::RabiJc(p) => toml::Table::try_from(p),
            ScenarioParams::DrivenRabi(p) => toml::Table::try_from(p),
            ScenarioParams::PulseCalibration(p) => toml::Table::try_from(p),
            ScenarioParams::DispersiveSpectrum(p) => toml::Table::try_from(p),
            ScenarioParams::EntropySweep(p) => toml::Table::try_from(p),
            ScenarioParams::EprParams(p) => toml::Table::try_from(p),
        };
        let mut out = toml::Table::new();
        out.insert("kind".into(), toml::Value::String(self.kind().name().into()));
        out.extend(table.expect("parameter structs serialize to tables"));
        out
    }

    /// Overrides the integrator tolerances of kinds that integrate.
    pub fn set_tolerance(&mut self, rtol: f64, atol: f64) -> bool {
        let slot = match self {
            ScenarioParams::RabiJc(p) => (&mut p.rtol, &mut p.atol),
            ScenarioParams::DrivenRabi(p) => (&mut p.rtol, &mut p.atol),
            ScenarioParams::EntropySweep(p) => (&mut p.rtol, &mut p.atol),
            _ => return false,
        };
        *slot.0 = rtol;
        *slot.1 = atol;
        true
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_ns: Option<f64>,
    #[serde(default, rename = "f_span_MHz", skip_serializing_if = "Option::is_none")]
    pub f_span_mhz: Option<f64>,
    #[serde(default, rename = "f_step_MHz", skip_serializing_if = "Option::is_none")]
    pub f_step_mhz: Option<f64>,
}

impl OutputSpec {
    pub fn new(csv_path: impl Into<PathBuf>) -> Self {
        Self {
            csv_path: csv_path.into(),
            svg_path: None,
            t_max_ns: None,
            dt_ns: None,
            f_span_mhz: None,
            f_step_mhz: None,
        }
    }
}

/// A parsed scenario with every default resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub params: ScenarioParams,
    pub output: OutputSpec,
}

fn validation(path: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation { path: path.into(), message: message.into() }
}

fn typed<T: DeserializeOwned>(table: toml::Table, prefix: &str) -> Result<T, ScenarioError> {
    serde_path_to_error::deserialize(table).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." || inner.is_empty() { prefix.to_string() } else { format!("{prefix}.{inner}") };
        validation(path, e.into_inner().to_string())
    })
}

impl ScenarioConfig {
    pub fn new(params: ScenarioParams, output: OutputSpec) -> Result<Self, ScenarioError> {
        let mut config = Self { params, output };
        config.resolve_grid()?;
        Ok(config)
    }

    pub fn kind(&self) -> ScenarioKind {
        self.params.kind()
    }

    /// Parses TOML text. A `[manifest]` table, as written next to every
    /// result, is accepted and ignored.
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let mut root: toml::Table =
            text.parse().map_err(|e: toml::de::Error| validation("", e.message().to_string()))?;
        root.remove("manifest");
        if let Some(key) = root.keys().find(|k| *k != "scenario" && *k != "output") {
            return Err(validation(key.clone(), "unknown top-level table"));
        }
        let mut scenario = match root.remove("scenario") {
            Some(toml::Value::Table(t)) => t,
            Some(_) => return Err(validation("scenario", "must be a table")),
            None => return Err(validation("scenario", "missing [scenario] table")),
        };
        let kind_name = match scenario.remove("kind") {
            Some(toml::Value::String(s)) => s,
            Some(_) => return Err(validation("scenario.kind", "must be a string")),
            None => return Err(validation("scenario.kind", "missing scenario kind")),
        };
        let kind = ScenarioKind::from_name(&kind_name).ok_or_else(|| {
            let names: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
            validation("scenario.kind", format!("unknown kind `{kind_name}`; expected one of {}", names.join(", ")))
        })?;
        let p = "scenario";
        let params = match kind {
            ScenarioKind::TransmonTable => ScenarioParams::TransmonTable(typed(scenario, p)?),
            ScenarioKind::BoltzmannCurve => ScenarioParams::BoltzmannCurve(typed(scenario, p)?),
            ScenarioKind::CavityModes => ScenarioParams::CavityModes(typed(scenario, p)?),
            ScenarioKind::RabiJc => ScenarioParams::RabiJc(typed(scenario, p)?),
            ScenarioKind::DrivenRabi => ScenarioParams::DrivenRabi(typed(scenario, p)?),
            ScenarioKind::PulseCalibration => ScenarioParams::PulseCalibration(typed(scenario, p)?),
            ScenarioKind::DispersiveSpectrum => ScenarioParams::DispersiveSpectrum(typed(scenario, p)?),
            ScenarioKind::EntropySweep => ScenarioParams::EntropySweep(typed(scenario, p)?),
            ScenarioKind::EprParams => ScenarioParams::EprParams(typed(scenario, p)?),
        };
        let output = match root.remove("output") {
            Some(toml::Value::Table(t)) => typed(t, "output")?,
            Some(_) => return Err(validation("output", "must be a table")),
            None => return Err(validation("output", "missing [output] table")),
        };
        Self::new(params, output)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    /// Fills in the grid defaults for this kind and rejects grid keys the
    /// kind does not use.
    fn resolve_grid(&mut self) -> Result<(), ScenarioError> {
        let o = &mut self.output;
        match self.params.kind().grid() {
            GridKind::None => {
                for (key, set) in [
                    ("t_max_ns", o.t_max_ns.is_some()),
                    ("dt_ns", o.dt_ns.is_some()),
                    ("f_span_MHz", o.f_span_mhz.is_some()),
                    ("f_step_MHz", o.f_step_mhz.is_some()),
                ] {
                    if set {
                        return Err(validation(format!("output.{key}"), "not used by this scenario kind"));
                    }
                }
            }
            GridKind::Time { t_max, dt } => {
                for (key, set) in [("f_span_MHz", o.f_span_mhz.is_some()), ("f_step_MHz", o.f_step_mhz.is_some())] {
                    if set {
                        return Err(validation(format!("output.{key}"), "not used by this scenario kind"));
                    }
                }
                o.t_max_ns.get_or_insert(t_max);
                o.dt_ns.get_or_insert(dt);
            }
            GridKind::Frequency { span, step } => {
                for (key, set) in [("t_max_ns", o.t_max_ns.is_some()), ("dt_ns", o.dt_ns.is_some())] {
                    if set {
                        return Err(validation(format!("output.{key}"), "not used by this scenario kind"));
                    }
                }
                o.f_span_mhz.get_or_insert(span);
                o.f_step_mhz.get_or_insert(step);
            }
        }
        Ok(())
    }

    /// Resolved configuration as a TOML table with `scenario` and `output`.
    pub fn to_toml_table(&self) -> toml::Table {
        let mut root = toml::Table::new();
        root.insert("scenario".into(), toml::Value::Table(self.params.to_table()));
        root.insert(
            "output".into(),
            toml::Value::Table(toml::Table::try_from(&self.output).expect("output spec serializes")),
        );
        root
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_toml_table()).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ScenarioConfig, ScenarioError> {
        ScenarioConfig::from_toml_str(s)
    }

    #[test]
    fn defaults_and_integer_floats() {
        let c = parse("[scenario]\nkind = \"rabi_jc\"\ng_MHz = 150\n[output]\ncsv_path = \"a.csv\"\n").unwrap();
        let ScenarioParams::RabiJc(p) = &c.params else { panic!() };
        assert_eq!(p.g_mhz, 150.0);
        assert_eq!(p.n_max, 15);
        assert_eq!(c.output.t_max_ns, Some(100.0));
        assert_eq!(c.output.f_span_mhz, None);
    }

    #[test]
    fn error_paths_name_the_key() {
        let e = parse("[scenario]\nkind = \"rabi_jc\"\ng_mhz = 1.0\n[output]\ncsv_path = \"a.csv\"\n").unwrap_err();
        assert!(e.to_string().contains("g_mhz"), "{e}");
        let e = parse("[scenario]\nkind = \"rabi_jc\"\nn_max = \"x\"\n[output]\ncsv_path = \"a.csv\"\n").unwrap_err();
        match e {
            ScenarioError::Validation { path, .. } => assert_eq!(path, "scenario.n_max"),
            other => panic!("{other:?}"),
        }
        let e = parse("[scenario]\nkind = \"nope\"\n[output]\ncsv_path = \"a.csv\"\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Validation { ref path, .. } if path == "scenario.kind"));
        let e = parse("[scenario]\nkind = \"transmon_table\"\n[output]\ncsv_path = \"a.csv\"\ndt_ns = 0.1\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Validation { ref path, .. } if path == "output.dt_ns"));
        assert!(parse("[scenario]\nkind = \"transmon_table\"\n").is_err());
    }

    #[test]
    fn resolved_round_trip() {
        for kind in ScenarioKind::ALL {
            let c = ScenarioConfig::new(ScenarioParams::defaults(kind), OutputSpec::new("x.csv")).unwrap();
            let text = c.to_toml_string();
            let back = parse(&text).unwrap();
            assert_eq!(back, c, "{text}");
        }
    }

    #[test]
    fn manifest_table_is_ignored() {
        let c = parse("[manifest]\nversion = \"0\"\n[scenario]\nkind = \"epr_params\"\n[output]\ncsv_path = \"a.csv\"\n").unwrap();
        assert_eq!(c.kind(), ScenarioKind::EprParams);
    }
}
