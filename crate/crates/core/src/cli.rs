//! Command-line boundary: subcommands, output tables and exit codes.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure. Errors
//! are reported as one JSON object on stderr.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::json;

use crate::casimir::{
    anisotropy_diagnostic, energy, force, optimize_thickness, torque, torque_1d, Quantity, TorqueModel,
};
use crate::config::{figure_template, ConfigError, ObservableKind, Point, RunConfig, SweepVariable, FIGURES};
use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir energy, force and torque between anisotropic plates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Observables of the configured cavity, sweeps ignored.
    Compute(Common),
    /// One row per point of the configured sweeps.
    Sweep(Common),
    /// Film thickness that maximizes the torque.
    Optimize(Common),
    /// Normal-incidence reflection anisotropy of the plate-2 film.
    Diagnose(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long, conflicts_with = "figure", required_unless_present = "figure")]
    pub config: Option<PathBuf>,
    /// Bundled configuration of a figure.
    #[arg(long, value_parser = figure_names())]
    pub figure: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn figure_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(FIGURES.iter().map(|(n, _)| *n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Failure at the boundary, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Io(String),
    Engine(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_CONFIG,
            CliError::Engine(
                Error::InvalidConfig(_) | Error::UnsupportedIdealLimit(_) | Error::InvalidFrequency(_),
            ) => EXIT_CONFIG,
            CliError::Engine(_) => EXIT_NUMERICAL,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Config(e) => json!({"error": "InvalidConfig", "path": e.path, "message": e.message}),
            CliError::Io(m) => json!({"error": "Io", "message": m}),
            CliError::Engine(e) => json!({"error": e.kind(), "message": e.to_string()}),
        }
    }
}

/// One output record with ordered named columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Row {
    pub columns: Vec<(String, Cell)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Flag(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:e}"),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) if x.is_finite() => s.serialize_f64(*x),
            Cell::Num(x) => s.serialize_str(&x.to_string()),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Flag(b) => s.serialize_bool(*b),
        }
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.columns.len()))?;
        for (k, v) in &self.columns {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl Row {
    fn num(&mut self, name: impl Into<String>, x: f64) {
        self.columns.push((name.into(), Cell::Num(x)));
    }

    fn quantity(&mut self, name: &str, unit: &str, si_unit: &str, q: &Quantity) {
        self.num(format!("{name}[{unit}]"), q.value);
        self.num(format!("{name}_err[{unit}]"), q.err_est);
        self.num(format!("{name}_si[{si_unit}]"), q.si);
        self.num(format!("{name}_si_err[{si_unit}]"), q.si_err_est);
    }
}

pub fn write_csv<W: Write>(rows: &[Row], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if let Some(first) = rows.first() {
        out.write_record(first.columns.iter().map(|(k, _)| k.as_str()))?;
    }
    for r in rows {
        out.write_record(r.columns.iter().map(|(_, v)| v.render()))?;
    }
    out.flush()
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let text = match (&common.config, &common.figure) {
        (_, Some(name)) => {
            figure_template(name).ok_or_else(|| CliError::Io(format!("unknown figure {name}")))?.to_string()
        }
        (Some(path), None) => fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        (None, None) => return Err(CliError::Io("--config or --figure is required".into())),
    };
    RunConfig::from_json(&text).map_err(CliError::Config)
}

fn point_columns(cfg: &RunConfig, point: &Point, row: &mut Row) {
    for &(var, v) in point {
        row.num(format!("{}[{}]", var.name(), var.unit(cfg.units)), v);
    }
}

/// Observables of one grid point.
pub fn compute_row(cfg: &RunConfig, point: &Point) -> Result<Row, CliError> {
    let cavity = cfg.cavity_at(point)?;
    let solver = cfg.solver();
    let mut row = Row::default();
    point_columns(cfg, point, &mut row);
    for kind in &cfg.observables {
        match kind {
            ObservableKind::Energy => row.quantity("energy", "hbar c/L^3", "J/m^2", &energy(&cavity, &solver)?),
            ObservableKind::Force => row.quantity("force", "hbar c/L^4", "N/m^2", &force(&cavity, &solver)?),
            ObservableKind::Torque => row.quantity("torque", "hbar c/L^3", "N/m", &torque(&cavity, &solver)?),
            ObservableKind::Torque1d => row.quantity("torque_1d", "hbar c/L", "J", &torque_1d(&cavity, &solver)?),
        }
    }
    Ok(row)
}

pub fn compute_rows(cfg: &RunConfig) -> Result<Vec<Row>, CliError> {
    cfg.points()?.iter().map(|p| compute_row(cfg, p)).collect()
}

pub fn diagnose_rows(cfg: &RunConfig) -> Result<Vec<Row>, CliError> {
    let block = cfg.diagnose.as_ref().ok_or_else(|| Error::InvalidConfig("a diagnose block is required".into()))?;
    let material = cfg.cavity_at(&[])?.plate2.material;
    let len = cfg.length_unit(cfg.separation);
    let omega = block.omega * cfg.frequency_unit(cfg.separation);
    let grid = block.thickness.points()?;
    let d_si: Vec<f64> = grid.iter().map(|d| d * len).collect();
    let table = anisotropy_diagnostic(&material, omega, &d_si)?;
    let unit = SweepVariable::Thickness.unit(cfg.units);
    Ok(grid
        .iter()
        .zip(table)
        .map(|(&d, t)| {
            let mut row = Row::default();
            row.num(format!("d[{unit}]"), d);
            row.num("r_par_abs", t.r_par);
            row.num("r_perp_abs", t.r_perp);
            row.num("delta_r_abs", t.delta_r);
            row
        })
        .collect())
}

/// One optimization per point of the non-thickness sweeps.
pub fn optimize_rows(cfg: &RunConfig) -> Result<Vec<Row>, CliError> {
    let mut outer = cfg.clone();
    outer.sweeps.retain(|b| b.variable != SweepVariable::Thickness);
    let solver = cfg.solver();
    let mut rows = Vec::new();
    for point in outer.points()? {
        let cavity = outer.cavity_at(&point)?;
        let mut at_point = outer.clone();
        for &(var, v) in &point {
            if var == SweepVariable::Separation {
                at_point.separation = v;
            }
        }
        let search = at_point.thickness_search()?;
        let opt = optimize_thickness(&cavity, &solver, &search)?;
        let len = at_point.length_unit(cavity.separation);
        let unit = SweepVariable::Thickness.unit(cfg.units);
        let torque_unit = match opt.model {
            TorqueModel::OneDimensional => "hbar c/L",
            TorqueModel::ThreeDimensional => "hbar c/L^3",
        };
        let mut row = Row::default();
        point_columns(cfg, &point, &mut row);
        row.columns
            .push(("status".into(), Cell::Text(serde_json::to_value(opt.status).unwrap().as_str().unwrap().into())));
        row.columns
            .push(("model".into(), Cell::Text(serde_json::to_value(opt.model).unwrap().as_str().unwrap().into())));
        row.num(format!("d_opt[{unit}]"), opt.d_opt / len);
        row.num("d_opt[m]", opt.d_opt);
        row.num(format!("torque_at_opt[{torque_unit}]"), opt.torque_at_opt);
        row.num(format!("torque_asymptotic[{torque_unit}]"), opt.torque_asymptotic);
        row.num("ratio", opt.ratio);
        row.num(format!("seed_estimate[{unit}]"), opt.seed_estimate.map_or(f64::NAN, |s| s / len));
        row.num(format!("d_min[{unit}]"), opt.d_min / len);
        row.num(format!("d_max[{unit}]"), opt.d_max / len);
        row.num("evaluations", opt.evaluations as f64);
        rows.push(row);
    }
    Ok(rows)
}

fn emit(rows: &[Row], format: Format, single: bool, out: &Option<PathBuf>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(rows, &mut buf).map_err(|e| CliError::Io(e.to_string()))?,
        Format::Json => {
            let v = if single && rows.len() == 1 {
                serde_json::to_vec_pretty(&rows[0])
            } else {
                serde_json::to_vec_pretty(rows)
            };
            buf = v.map_err(|e| CliError::Io(e.to_string()))?;
            buf.push(b'\n');
        }
    }
    match out {
        Some(path) => fs::write(path, &buf).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(&buf).map_err(|e| CliError::Io(e.to_string())),
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Compute(c) => {
            let cfg = load(c)?;
            let row = compute_row(&cfg, &Vec::new())?;
            emit(&[row], c.format.unwrap_or(Format::Json), true, &c.out)
        }
        Command::Sweep(c) => {
            let cfg = load(c)?;
            let rows = if cfg.sweeps.is_empty() && cfg.diagnose.is_some() {
                diagnose_rows(&cfg)?
            } else {
                compute_rows(&cfg)?
            };
            emit(&rows, c.format.unwrap_or(Format::Csv), false, &c.out)
        }
        Command::Optimize(c) => {
            let cfg = load(c)?;
            emit(&optimize_rows(&cfg)?, c.format.unwrap_or(Format::Json), true, &c.out)
        }
        Command::Diagnose(c) => {
            let cfg = load(c)?;
            emit(&diagnose_rows(&cfg)?, c.format.unwrap_or(Format::Csv), false, &c.out)
        }
    }
}

/// Runs the command and reports failures on stderr; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

/// Size of the worker pool from `CASIMIR_THREADS`; `None` keeps the default.
pub fn thread_count(var: Option<&str>) -> Result<Option<usize>, String> {
    match var {
        None | Some("") => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("CASIMIR_THREADS must be a positive integer, got {s:?}")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wires_cfg(extra: &str) -> RunConfig {
        let text = format!(
            r#"{{"separation": 1e-7, "plate1": {{"geometry": "ideal_wires"}}, "plate2": {{"geometry": "ideal_wires"}}{extra}}}"#
        );
        RunConfig::from_json(&text).unwrap()
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config(ConfigError { path: "a".into(), message: "b".into() }).exit_code(), 2);
        assert_eq!(CliError::Engine(Error::InvalidConfig("x".into())).exit_code(), 2);
        let nc = Error::NoConvergence { what: "x".into(), err_est: 1.0, tol: 0.1 };
        assert_eq!(CliError::Engine(nc.clone()).exit_code(), 3);
        assert_eq!(CliError::Engine(nc).to_json()["error"], "NoConvergence");
    }

    #[test]
    fn rows_keep_column_order() {
        let cfg = wires_cfg(r#", "observables": ["torque", "energy"], "gamma": 0.5"#);
        let row = compute_row(&cfg, &Vec::new()).unwrap();
        let names: Vec<&str> = row.columns.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(names[0], "torque[hbar c/L^3]");
        assert_eq!(names[4], "energy[hbar c/L^3]");
        let json = serde_json::to_string(&row).unwrap();
        assert!(json.find("torque").unwrap() < json.find("energy").unwrap());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let cfg = wires_cfg(
            r#", "observables": ["torque_1d"], "sweeps": [{"variable": "gamma", "grid": {"values": [0, 0.5]}}]"#,
        );
        let rows = compute_rows(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("gamma[rad],torque_1d[hbar c/L]"));
        assert!(lines[1].starts_with("0e0,0e0"));
    }

    #[test]
    fn threads_env() {
        assert_eq!(thread_count(None), Ok(None));
        assert_eq!(thread_count(Some("4")), Ok(Some(4)));
        assert!(thread_count(Some("0")).is_err());
        assert!(thread_count(Some("many")).is_err());
    }
}
