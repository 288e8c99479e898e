//! Parameter sweeps: one independent run per value, collected in input order.

use rayon::prelude::*;

use super::table::{Cell, PlotSpec, Table};
use super::{manifest_table, run_scenario, write_file, RunStats, ScenarioConfig, ScenarioError};

/// Aggregated sweep table: the axis column, the scenario's columns and an
/// `error` column that is empty for successful points.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub axis: String,
    pub values: Vec<toml::Value>,
    pub table: Table,
    pub stats: RunStats,
    pub failures: usize,
    pub wall_clock_s: f64,
}

/// Parses a comma-separated list of TOML scalars (`5,6,7` or `"a","b"`).
pub fn parse_values(text: &str) -> Result<Vec<toml::Value>, ScenarioError> {
    let wrapped = format!("v = [{text}]");
    let table: toml::Table = wrapped.parse().map_err(|e: toml::de::Error| ScenarioError::Validation {
        path: "--values".into(),
        message: e.message().to_string(),
    })?;
    match table.get("v") {
        Some(toml::Value::Array(a)) => Ok(a.clone()),
        _ => unreachable!("wrapped list parses to an array"),
    }
}

fn axis_error(axis: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation { path: axis.to_string(), message: message.into() }
}

fn split_axis(axis: &str) -> Result<(&str, &str), ScenarioError> {
    let (section, key) = axis.split_once('.').unwrap_or(("scenario", axis));
    if section != "scenario" && section != "output" {
        return Err(axis_error(axis, "axis must name a key in [scenario] or [output]"));
    }
    if key.is_empty() || key.contains('.') || key == "kind" {
        return Err(axis_error(axis, "axis must name a scalar parameter"));
    }
    Ok((section, key))
}

fn cell_for(v: &toml::Value) -> Cell {
    match v {
        toml::Value::Float(f) => Cell::Num(*f),
        toml::Value::Integer(i) => Cell::Int(*i),
        toml::Value::String(s) => Cell::Text(s.clone()),
        other => Cell::Text(other.to_string()),
    }
}

/// Runs `config` once per value of `axis` on up to `jobs` threads.
///
/// The axis is `scenario.<key>` or `output.<key>` (a bare key means
/// `scenario`) and must name a scalar parameter of the resolved config.
/// Failing points are recorded in the `error` column.
pub fn sweep(config: &ScenarioConfig, axis: &str, values: &[toml::Value], jobs: usize) -> Result<SweepResult, ScenarioError> {
    let start = std::time::Instant::now();
    if values.is_empty() {
        return Err(axis_error("--values", "at least one value is required"));
    }
    let (section, key) = split_axis(axis)?;
    let base = config.to_toml_table();
    let current = base.get(section).and_then(|s| s.as_table()).and_then(|t| t.get(key));
    match current {
        Some(toml::Value::Float(_) | toml::Value::Integer(_) | toml::Value::Boolean(_) | toml::Value::String(_)) => {}
        Some(_) => return Err(axis_error(axis, "axis is not a scalar parameter")),
        None => return Err(axis_error(axis, format!("no such parameter for kind {}", config.kind().name()))),
    }
    if let Some(v) = values.iter().find(|v| matches!(v, toml::Value::Array(_) | toml::Value::Table(_))) {
        return Err(axis_error("--values", format!("sweep values must be scalars, got {v}")));
    }

    let point = |v: &toml::Value| -> Result<(Table, RunStats), ScenarioError> {
        let mut root = base.clone();
        let table = root.get_mut(section).and_then(|s| s.as_table_mut()).expect("section exists");
        table.insert(key.to_string(), v.clone());
        let text = toml::to_string(&root).expect("table serializes");
        let cfg = ScenarioConfig::from_toml_str(&text)?;
        let out = run_scenario(&cfg)?;
        Ok((out.table, out.stats))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| axis_error("--jobs", e.to_string()))?;
    let results: Vec<_> = pool.install(|| values.par_iter().map(point).collect());

    let template = results.iter().find_map(|r| r.as_ref().ok()).map(|(t, _)| t);
    let inner_cols: Vec<String> = template.map(|t| t.columns.clone()).unwrap_or_default();
    let mut columns = vec![axis.to_string()];
    columns.extend(inner_cols.iter().cloned());
    columns.push("error".into());
    let plot = match template {
        Some(t) => PlotSpec { x: 0, ys: t.plot.ys.iter().map(|y| y + 1).collect(), group: None },
        None => PlotSpec::default(),
    };
    let mut table = Table { columns, rows: Vec::new(), plot };
    let mut stats = RunStats::default();
    let mut failures = 0;
    for (v, r) in values.iter().zip(&results) {
        match r {
            Ok((t, s)) => {
                stats.merge(s);
                for row in &t.rows {
                    let mut full = vec![cell_for(v)];
                    full.extend(row.iter().cloned());
                    full.push(Cell::Empty);
                    table.rows.push(full);
                }
            }
            Err(e) => {
                failures += 1;
                let mut full = vec![cell_for(v)];
                full.extend(std::iter::repeat_n(Cell::Empty, inner_cols.len()));
                full.push(Cell::Text(e.to_string()));
                table.rows.push(full);
            }
        }
    }
    Ok(SweepResult {
        axis: axis.to_string(),
        values: values.to_vec(),
        table,
        stats,
        failures,
        wall_clock_s: start.elapsed().as_secs_f64(),
    })
}

/// Writes the aggregated CSV to the config's csv_path and a manifest that
/// records the axis and values next to the resolved base config.
pub fn write_sweep(config: &ScenarioConfig, result: &SweepResult) -> Result<std::path::PathBuf, ScenarioError> {
    let csv = &config.output.csv_path;
    write_file(csv, &result.table.to_csv())?;
    let mut root = config.to_toml_table();
    let mut m = manifest_table(config.kind(), &result.stats, result.wall_clock_s, None);
    m.insert("sweep_axis".into(), result.axis.clone().into());
    m.insert("sweep_values".into(), toml::Value::Array(result.values.clone()));
    m.insert("sweep_failures".into(), (result.failures as i64).into());
    root.insert("manifest".into(), toml::Value::Table(m));
    let path = super::manifest_path(csv);
    write_file(&path, &toml::to_string(&root).expect("manifest serializes"))?;
    Ok(path)
}
