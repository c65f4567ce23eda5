//! JSON run configuration: cavity, accuracy, sweeps and bundled figure
//! templates.
//!
//! With `"units": "natural"` frequencies are given in `ω0 = πc/L`, times in
//! `1/ω0`, thicknesses in `L` and temperatures in `ħc/(L k_B)`. The separation
//! itself is always in metres.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::casimir::{Solver, ThicknessSearch, TorqueModel};
use crate::error::{Error, Result};
use crate::linalg::Complex;
use crate::materials::{DispersionModel, UniaxialMaterial};
use crate::optics::PlateSpec;
use crate::quadrature::{MatsubaraSpec, QuadratureSpec};
use crate::spectral::CavityConfig;
use crate::units::NaturalUnits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    #[default]
    Si,
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Vacuum,
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Drude {
        omega_p: f64,
        /// Absent means dissipationless.
        #[serde(default)]
        tau: Option<f64>,
    },
    TwoOscillator {
        c_ir: f64,
        omega_ir: f64,
        c_uv: f64,
        omega_uv: f64,
    },
    IdealConductor,
}

impl ModelConfig {
    /// `w` is the frequency unit in rad/s.
    fn resolve(&self, w: f64) -> DispersionModel {
        match *self {
            ModelConfig::Vacuum => DispersionModel::Vacuum,
            ModelConfig::Constant { re, im } => DispersionModel::Constant(Complex::new(re, im)),
            ModelConfig::Drude { omega_p, tau } => DispersionModel::drude(omega_p * w, tau.map(|t| t / w)),
            ModelConfig::TwoOscillator { c_ir, omega_ir, c_uv, omega_uv } => {
                DispersionModel::TwoOscillator { c_ir, omega_ir: omega_ir * w, c_uv, omega_uv: omega_uv * w }
            }
            ModelConfig::IdealConductor => DispersionModel::IdealConductor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub eps_par: ModelConfig,
    pub eps_perp: ModelConfig,
}

impl MaterialConfig {
    fn resolve(&self, w: f64) -> UniaxialMaterial {
        UniaxialMaterial::new(self.eps_par.resolve(w), self.eps_perp.resolve(w))
    }

    /// Sets `ω_p⊥` (or `ω_p∥` when only that one is Drude), keeping the
    /// ratio of the two plasma frequencies. `None` is the ideal limit.
    fn set_omega_p(&mut self, value: Option<f64>) -> Result<()> {
        use ModelConfig::Drude;
        let Some(v) = value else {
            for m in [&mut self.eps_par, &mut self.eps_perp] {
                if matches!(m, Drude { .. }) {
                    *m = ModelConfig::IdealConductor;
                }
            }
            return Ok(());
        };
        match (&mut self.eps_par, &mut self.eps_perp) {
            (Drude { omega_p: par, .. }, Drude { omega_p: perp, .. }) => {
                if *perp <= 0.0 {
                    return Err(Error::InvalidConfig("omega_p sweep needs a nonzero reference omega_p".into()));
                }
                *par *= v / *perp;
                *perp = v;
            }
            (_, Drude { omega_p, .. }) | (Drude { omega_p, .. }, _) => *omega_p = v,
            _ => return Err(Error::InvalidConfig("omega_p sweep needs a Drude response".into())),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    SemiInfinite,
    Film,
    IdealWires,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateConfig {
    pub geometry: GeometryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<MaterialConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "d")]
    Thickness,
    #[serde(rename = "L")]
    Separation,
    #[serde(rename = "T")]
    Temperature,
    #[serde(rename = "omega_p")]
    PlasmaFrequency,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Gamma => "gamma",
            SweepVariable::Thickness => "d",
            SweepVariable::Separation => "L",
            SweepVariable::Temperature => "T",
            SweepVariable::PlasmaFrequency => "omega_p",
        }
    }

    pub fn unit(self, units: Units) -> &'static str {
        match (self, units) {
            (SweepVariable::Gamma, _) => "rad",
            (SweepVariable::Separation, _) => "m",
            (SweepVariable::Thickness, Units::Si) => "m",
            (SweepVariable::Thickness, Units::Natural) => "L",
            (SweepVariable::Temperature, Units::Si) => "K",
            (SweepVariable::Temperature, Units::Natural) => "hbar c/(L k_B)",
            (SweepVariable::PlasmaFrequency, Units::Si) => "rad/s",
            (SweepVariable::PlasmaFrequency, Units::Natural) => "omega0",
        }
    }
}

/// A grid value; `"inf"` is accepted for the ideal plasma limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridValue(pub f64);

impl Serialize for GridValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for GridValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = GridValue;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<GridValue, E> {
                Ok(GridValue(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<GridValue, E> {
                Ok(GridValue(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<GridValue, E> {
                Ok(GridValue(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<GridValue, E> {
                match v {
                    "inf" => Ok(GridValue(f64::INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Lin,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Range {
        min: f64,
        max: f64,
        count: usize,
        #[serde(default)]
        scale: Scale,
    },
    Values {
        values: Vec<GridValue>,
    },
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        match *self {
            Grid::Values { ref values } => {
                if values.is_empty() {
                    return Err(Error::InvalidConfig("grid values must not be empty".into()));
                }
                Ok(values.iter().map(|v| v.0).collect())
            }
            Grid::Range { min, max, count, scale } => {
                if count == 0 || !min.is_finite() || !max.is_finite() || max < min {
                    return Err(Error::InvalidConfig(format!("bad grid: min {min}, max {max}, count {count}")));
                }
                if count == 1 {
                    return Ok(vec![min]);
                }
                let n = (count - 1) as f64;
                match scale {
                    Scale::Lin => Ok((0..count).map(|i| min + (max - min) * i as f64 / n).collect()),
                    Scale::Log => {
                        if min <= 0.0 {
                            return Err(Error::InvalidConfig("log grid needs min > 0".into()));
                        }
                        let (a, b) = (min.ln(), max.ln());
                        Ok((0..count).map(|i| (a + (b - a) * i as f64 / n).exp()).collect())
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub variable: SweepVariable,
    pub grid: Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    Energy,
    Force,
    Torque,
    #[serde(rename = "torque_1d")]
    Torque1d,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeBlock {
    #[serde(default)]
    pub d_min: Option<f64>,
    #[serde(default)]
    pub d_max: Option<f64>,
    pub model: TorqueModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseBlock {
    /// Real frequency.
    pub omega: f64,
    /// Film thicknesses.
    pub thickness: Grid,
}

fn default_observables() -> Vec<ObservableKind> {
    vec![ObservableKind::Energy, ObservableKind::Force, ObservableKind::Torque]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub units: Units,
    /// m.
    pub separation: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub temperature: f64,
    pub plate1: PlateConfig,
    pub plate2: PlateConfig,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub matsubara: MatsubaraSpec,
    #[serde(default = "default_observables")]
    pub observables: Vec<ObservableKind>,
    /// Nested sweeps, outermost first.
    #[serde(default)]
    pub sweeps: Vec<SweepBlock>,
    #[serde(default)]
    pub optimize: Option<OptimizeBlock>,
    #[serde(default)]
    pub diagnose: Option<DiagnoseBlock>,
}

/// Parse failure with the JSON path of the offending value.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// One grid point: the swept variables and their values.
pub type Point = Vec<(SweepVariable, f64)>;

impl RunConfig {
    pub fn from_json(text: &str) -> std::result::Result<RunConfig, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError { path, message: e.into_inner().to_string() }
        })?;
        cfg.validate().map_err(|e| ConfigError { path: ".".into(), message: e.to_string() })?;
        Ok(cfg)
    }

    /// Structural checks and a dry resolution of every grid point.
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        self.matsubara.validate()?;
        if self.observables.is_empty() {
            return Err(Error::InvalidConfig("observables must not be empty".into()));
        }
        for p in self.points()? {
            self.cavity_at(&p)?.validate()?;
        }
        Ok(())
    }

    pub fn solver(&self) -> Solver {
        Solver { quadrature: self.quadrature, matsubara: self.matsubara }
    }

    /// Cartesian product of the sweep grids, outermost block varying slowest.
    pub fn points(&self) -> Result<Vec<Point>> {
        let mut out: Vec<Point> = vec![Vec::new()];
        for block in &self.sweeps {
            let values = block.grid.points()?;
            out = out
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push((block.variable, v));
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Cavity at one grid point, in SI.
    pub fn cavity_at(&self, point: &[(SweepVariable, f64)]) -> Result<CavityConfig> {
        let mut cfg = self.clone();
        for &(var, v) in point {
            let finite = || -> Result<f64> {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::InvalidConfig(format!("{} must be finite", var.name())))
                }
            };
            match var {
                SweepVariable::Gamma => cfg.gamma = finite()?,
                SweepVariable::Separation => cfg.separation = finite()?,
                SweepVariable::Temperature => cfg.temperature = finite()?,
                SweepVariable::Thickness => {
                    if cfg.plate2.geometry != GeometryKind::Film {
                        return Err(Error::InvalidConfig("a d sweep needs plate2 to be a film".into()));
                    }
                    cfg.plate2.thickness = Some(finite()?);
                }
                SweepVariable::PlasmaFrequency => {
                    let value = if v == f64::INFINITY { None } else { Some(finite()?) };
                    for plate in [&mut cfg.plate1, &mut cfg.plate2] {
                        if let Some(m) = plate.material.as_mut() {
                            m.set_omega_p(value)?;
                        }
                    }
                }
            }
        }
        cfg.base_cavity()
    }

    fn base_cavity(&self) -> Result<CavityConfig> {
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(Error::InvalidConfig(format!("separation must be > 0 m, got {}", self.separation)));
        }
        let units = NaturalUnits::new(self.separation);
        let (w, len, temp) = match self.units {
            Units::Si => (1.0, 1.0, self.temperature),
            Units::Natural => (units.omega0(), self.separation, units.kelvin(self.temperature)),
        };
        let plate = |p: &PlateConfig, name: &str| -> Result<PlateSpec> {
            if p.geometry == GeometryKind::IdealWires {
                return Ok(PlateSpec::ideal_wires());
            }
            let m = p.material.ok_or_else(|| Error::InvalidConfig(format!("{name}.material is required")))?.resolve(w);
            match p.geometry {
                GeometryKind::SemiInfinite => Ok(PlateSpec::semi_infinite(m)),
                GeometryKind::Film => {
                    let d = p.thickness.ok_or_else(|| Error::InvalidConfig(format!("{name}.thickness is required")))?;
                    Ok(PlateSpec::film(m, d * len))
                }
                GeometryKind::IdealWires => unreachable!(),
            }
        };
        let cfg = CavityConfig::new(
            self.separation,
            self.gamma,
            plate(&self.plate1, "plate1")?,
            plate(&self.plate2, "plate2")?,
        )
        .with_temperature(temp);
        Ok(cfg)
    }

    /// Length unit of thicknesses in this config, m.
    pub fn length_unit(&self, separation: f64) -> f64 {
        match self.units {
            Units::Si => 1.0,
            Units::Natural => separation,
        }
    }

    /// Frequency unit of this config, rad/s.
    pub fn frequency_unit(&self, separation: f64) -> f64 {
        match self.units {
            Units::Si => 1.0,
            Units::Natural => NaturalUnits::new(separation).omega0(),
        }
    }

    pub fn thickness_search(&self) -> Result<ThicknessSearch> {
        let b = self.optimize.ok_or_else(|| Error::InvalidConfig("an optimize block is required".into()))?;
        let len = self.length_unit(self.separation);
        Ok(ThicknessSearch { d_min: b.d_min.map(|d| d * len), d_max: b.d_max.map(|d| d * len), model: b.model })
    }
}

/// Bundled configurations reproducing the figures of the study.
pub const FIGURES: [(&str, &str); 7] = [
    ("energyvsa", include_str!("../figures/energyvsa.json")),
    ("tvsaideal", include_str!("../figures/tvsaideal.json")),
    ("tvsanoideal", include_str!("../figures/tvsanoideal.json")),
    ("tvsdwpe_wpo2", include_str!("../figures/tvsdwpe_wpo2.json")),
    ("t1Dvsdwpe_wpo2", include_str!("../figures/t1Dvsdwpe_wpo2.json")),
    ("skineff", include_str!("../figures/skineff.json")),
    ("iantfvsdvsL", include_str!("../figures/iantfvsdvsL.json")),
];

pub fn figure_template(name: &str) -> Option<&'static str> {
    FIGURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
