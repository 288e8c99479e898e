//! Config-driven scenario runner: parses a scenario, validates it, computes a
//! result table and writes CSV, optional SVG and a reproducible manifest.

mod config;
mod kinds;
mod svg;
mod sweep;
mod table;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{
    BoltzmannCurveParams, CavityModesParams, DispersiveSpectrumParams, DrivenRabiParams, EntropySweepParams,
    EnvelopeKind, EprParamsParams, OutputSpec, PulseCalibrationParams, RabiJcParams, ScenarioConfig, ScenarioKind,
    ScenarioParams, TransmonTableParams,
};
pub use kinds::TRUNCATION_LIMIT;
pub use svg::render_svg;
pub use sweep::{parse_values, sweep, write_sweep, SweepResult};
pub use table::{format_number, Cell, PlotSpec, Table};

use crate::dynamics::{EvolutionResult, IntegratorStats};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid configuration at `{path}`: {message}")]
    Validation { path: String, message: String },
    #[error("{context} failed: {source}")]
    Numerical { context: String, source: Error },
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

impl ScenarioError {
    /// Process exit code: 2 validation, 3 numerical failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Validation { .. } => 2,
            ScenarioError::Numerical { .. } => 3,
            ScenarioError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        ScenarioError::Io { path: path.display().to_string(), message: e.to_string() }
    }
}

/// Integrator statistics and state-validity figures accumulated over every
/// evolution in a run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunStats {
    pub evolutions: usize,
    pub integrator: IntegratorStats,
    pub max_trace_error: f64,
    pub min_eigenvalue: Option<f64>,
}

impl RunStats {
    pub(crate) fn absorb(&mut self, r: &EvolutionResult) {
        self.evolutions += 1;
        self.integrator.accepted_steps += r.stats.accepted_steps;
        self.integrator.rejected_steps += r.stats.rejected_steps;
        self.integrator.rhs_evaluations += r.stats.rhs_evaluations;
        self.max_trace_error = self.max_trace_error.max(r.max_trace_error);
        if let Some(m) = r.min_eigenvalue {
            self.min_eigenvalue = Some(self.min_eigenvalue.map_or(m, |x| x.min(m)));
        }
    }

    pub(crate) fn merge(&mut self, other: &RunStats) {
        self.evolutions += other.evolutions;
        self.integrator.accepted_steps += other.integrator.accepted_steps;
        self.integrator.rejected_steps += other.integrator.rejected_steps;
        self.integrator.rhs_evaluations += other.integrator.rhs_evaluations;
        self.max_trace_error = self.max_trace_error.max(other.max_trace_error);
        if let Some(m) = other.min_eigenvalue {
            self.min_eigenvalue = Some(self.min_eigenvalue.map_or(m, |x| x.min(m)));
        }
    }
}

/// Result of a scenario run, before anything is written.
#[derive(Clone, Debug)]
pub struct ScenarioOutput {
    pub config: ScenarioConfig,
    pub table: Table,
    pub stats: RunStats,
    pub wall_clock_s: f64,
}

impl ScenarioOutput {
    pub fn csv(&self) -> String {
        self.table.to_csv()
    }

    /// Manifest: run metadata under `[manifest]` plus the fully resolved
    /// `[scenario]` and `[output]` tables, so the file itself is a runnable
    /// config.
    pub fn manifest(&self, seed: Option<u64>) -> String {
        let mut root = self.config.to_toml_table();
        root.insert("manifest".into(), toml::Value::Table(manifest_table(self.config.kind(), &self.stats, self.wall_clock_s, seed)));
        toml::to_string(&root).expect("manifest serializes")
    }
}

pub(crate) fn manifest_table(kind: ScenarioKind, stats: &RunStats, wall_clock_s: f64, seed: Option<u64>) -> toml::Table {
    let mut m = toml::Table::new();
    m.insert("kind".into(), kind.name().into());
    m.insert("version".into(), crate::VERSION.into());
    m.insert("wall_clock_s".into(), wall_clock_s.into());
    m.insert("evolutions".into(), (stats.evolutions as i64).into());
    m.insert("accepted_steps".into(), (stats.integrator.accepted_steps as i64).into());
    m.insert("rejected_steps".into(), (stats.integrator.rejected_steps as i64).into());
    m.insert("rhs_evaluations".into(), (stats.integrator.rhs_evaluations as i64).into());
    m.insert("max_trace_error".into(), stats.max_trace_error.into());
    if let Some(e) = stats.min_eigenvalue {
        m.insert("min_eigenvalue".into(), e.into());
    }
    if let Some(s) = seed {
        m.insert("seed".into(), (s as i64).into());
    }
    m
}

/// Validates and computes a scenario without touching the filesystem.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput, ScenarioError> {
    let start = Instant::now();
    let (table, stats) = kinds::compute(config)?;
    Ok(ScenarioOutput { config: config.clone(), table, stats, wall_clock_s: start.elapsed().as_secs_f64() })
}

/// Checks a configuration without computing anything.
pub fn validate_scenario(config: &ScenarioConfig) -> Result<(), ScenarioError> {
    kinds::validate(config)
}

/// Paths written by [`write_outputs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrittenFiles {
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
    pub manifest: PathBuf,
}

/// `<csv_path>.manifest.toml`
pub fn manifest_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".manifest.toml");
    PathBuf::from(s)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), ScenarioError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| ScenarioError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| ScenarioError::io(path, e))
}

pub fn write_outputs(output: &ScenarioOutput, seed: Option<u64>) -> Result<WrittenFiles, ScenarioError> {
    let spec = &output.config.output;
    write_file(&spec.csv_path, &output.csv())?;
    if let Some(svg) = &spec.svg_path {
        write_file(svg, &render_svg(&output.table, output.config.kind().name()))?;
    }
    let manifest = manifest_path(&spec.csv_path);
    write_file(&manifest, &output.manifest(seed))?;
    Ok(WrittenFiles { csv: spec.csv_path.clone(), svg: spec.svg_path.clone(), manifest })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(kind: ScenarioKind) -> ScenarioOutput {
        let c = ScenarioConfig::new(ScenarioParams::defaults(kind), OutputSpec::new("unused.csv")).unwrap();
        run_scenario(&c).unwrap()
    }

    #[test]
    fn cheap_kinds_run_with_defaults() {
        for kind in [
            ScenarioKind::TransmonTable,
            ScenarioKind::BoltzmannCurve,
            ScenarioKind::CavityModes,
            ScenarioKind::PulseCalibration,
            ScenarioKind::DispersiveSpectrum,
            ScenarioKind::EprParams,
        ] {
            let out = run(kind);
            assert!(!out.table.rows.is_empty(), "{kind:?}");
            let csv = out.csv();
            assert!(csv.ends_with('\n') && !csv.contains('\r'));
        }
    }

    #[test]
    fn transmon_table_has_three_rows() {
        let out = run(ScenarioKind::TransmonTable);
        assert_eq!(out.table.columns, ["order", "omega_q_GHz", "alpha_MHz"]);
        assert_eq!(out.table.rows.len(), 3);
    }

    #[test]
    fn exit_codes() {
        let v = ScenarioError::Validation { path: "x".into(), message: "y".into() };
        assert_eq!(v.exit_code(), 2);
        let n = ScenarioError::Numerical { context: "c".into(), source: Error::NotConverged("z".into()) };
        assert_eq!(n.exit_code(), 3);
        assert_eq!(ScenarioError::Io { path: "p".into(), message: "m".into() }.exit_code(), 4);
    }

    #[test]
    fn validation_precedes_computation() {
        let p = RabiJcParams { n_max: 5, ..RabiJcParams::default() };
        let c = ScenarioConfig::new(ScenarioParams::RabiJc(p), OutputSpec::new("x.csv")).unwrap();
        let e = run_scenario(&c).unwrap_err();
        assert!(matches!(e, ScenarioError::Validation { ref path, .. } if path == "scenario.n_max"), "{e}");
    }

    #[test]
    fn manifest_is_a_runnable_config() {
        let out = run(ScenarioKind::EprParams);
        let text = out.manifest(Some(7));
        let back = ScenarioConfig::from_toml_str(&text).unwrap();
        assert_eq!(back, out.config);
        assert!(text.contains("[manifest]") && text.contains("seed = 7"));
        assert_eq!(manifest_path(Path::new("a/b.csv")), PathBuf::from("a/b.csv.manifest.toml"));
    }
}
