//! JSON run configuration: schema, validation and defaults.
//!
//! All physical quantities are SI base units (meters, seconds, Kelvin,
//! Watts); micron-valued inputs are written in meters. Unknown keys are
//! rejected so typos cannot silently fall back to defaults.

use csflux_core::benchmarks::{BenchmarkId, Overrides, ReferencePolicy, RunSpec, SweepSpec};
use csflux_core::{CaseKind, FluxEval, MaterialSet};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

pub const SCHEMA_VERSION: u32 = 1;

/// Validation failure naming the offending key and constraint.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

/// Partial material overrides merged over the built-in defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MaterialOverrides {
    pub conductivity_liquid: Option<f64>,
    pub conductivity_gas: Option<f64>,
    pub density_liquid: Option<f64>,
    pub density_gas: Option<f64>,
    pub specific_heat_liquid: Option<f64>,
    pub specific_heat_gas: Option<f64>,
    pub viscosity_liquid: Option<f64>,
    pub viscosity_gas: Option<f64>,
    pub surface_tension: Option<f64>,
    pub absorptivity: Option<f64>,
    pub boiling_temperature: Option<f64>,
    pub latent_heat: Option<f64>,
    pub enthalpy_reference_temperature: Option<f64>,
    pub molar_mass: Option<f64>,
    pub sticking_constant: Option<f64>,
    pub ambient_pressure: Option<f64>,
    pub laser_power: Option<f64>,
    pub laser_radius: Option<f64>,
}

impl MaterialOverrides {
    pub fn is_empty(&self) -> bool {
        *self == MaterialOverrides::default()
    }

    pub fn apply(&self, base: MaterialSet) -> MaterialSet {
        let mut m = base;
        macro_rules! merge {
            ($($field:ident),* $(,)?) => {
                $(if let Some(v) = self.$field { m.$field = v; })*
            };
        }
        merge!(
            conductivity_liquid,
            conductivity_gas,
            density_liquid,
            density_gas,
            specific_heat_liquid,
            specific_heat_gas,
            viscosity_liquid,
            viscosity_gas,
            surface_tension,
            absorptivity,
            boiling_temperature,
            latent_heat,
            enthalpy_reference_temperature,
            molar_mass,
            sticking_constant,
            ambient_pressure,
            laser_power,
            laser_radius,
        );
        m
    }
}

/// On-disk JSON document. Scalar fields describe a single run; the plural
/// variants span a sweep grid. Omitted fields take the benchmark defaults.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub benchmark: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_i_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_policy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub materials: Option<MaterialOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh_cells_2d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump_fields: Option<bool>,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Fully validated configuration ready to drive runs and sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub benchmark: BenchmarkId,
    pub cases: Vec<CaseKind>,
    pub methods: Vec<FluxEval>,
    pub eps_list: Vec<f64>,
    pub n_i_list: Vec<usize>,
    pub overrides: Overrides,
    pub out_dir: Option<PathBuf>,
    pub workers: usize,
    pub dump_fields: bool,
    /// The parsed document, echoed into meta.json.
    pub document: ConfigDocument,
}

fn parse_keyed<T: std::str::FromStr<Err = csflux_core::CsfError>>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|e: csflux_core::CsfError| ConfigError(format!("{key}: {e}")))
}

fn positive(key: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ConfigError(format!("{key}: must be positive and finite, got {value}")))
    }
}

/// Parse and validate a JSON configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let doc: ConfigDocument = serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
    validate_document(doc)
}

pub fn validate_document(doc: ConfigDocument) -> Result<RunConfig> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(ConfigError(format!(
            "schema_version: expected {SCHEMA_VERSION}, got {}",
            doc.schema_version
        )));
    }
    let benchmark: BenchmarkId = parse_keyed("benchmark", &doc.benchmark)?;

    let cases: Vec<CaseKind> = match (&doc.case, &doc.cases) {
        (Some(_), Some(_)) => {
            return Err(ConfigError("case/cases: give one of the two, not both".into()))
        }
        (Some(one), None) => vec![parse_keyed("case", one)?],
        (None, Some(many)) => many
            .iter()
            .map(|s| parse_keyed("cases", s))
            .collect::<Result<_>>()?,
        (None, None) => vec![CaseKind::V1],
    };
    let methods: Vec<FluxEval> = match (&doc.method, &doc.methods) {
        (Some(_), Some(_)) => {
            return Err(ConfigError("method/methods: give one of the two, not both".into()))
        }
        (Some(one), None) => vec![parse_keyed("method", one)?],
        (None, Some(many)) => many
            .iter()
            .map(|s| parse_keyed("methods", s))
            .collect::<Result<_>>()?,
        (None, None) => vec![FluxEval::Continuous],
    };
    let eps_list: Vec<f64> = match (&doc.eps, &doc.eps_list) {
        (Some(_), Some(_)) => {
            return Err(ConfigError("eps/eps_list: give one of the two, not both".into()))
        }
        (Some(e), None) => vec![positive("eps", *e)?],
        (None, Some(list)) => list
            .iter()
            .map(|&e| positive("eps_list", e))
            .collect::<Result<_>>()?,
        (None, None) => return Err(ConfigError("eps: required (meters)".into())),
    };
    let n_i_list: Vec<usize> = match (&doc.n_i, &doc.n_i_list) {
        (Some(_), Some(_)) => {
            return Err(ConfigError("n_i/n_i_list: give one of the two, not both".into()))
        }
        (Some(n), None) => vec![*n],
        (None, Some(list)) => list.clone(),
        (None, None) => return Err(ConfigError("n_i: required".into())),
    };
    for &n in &n_i_list {
        if n < 4 {
            return Err(ConfigError(format!(
                "n_i: need at least 4 elements across the interface, got {n}"
            )));
        }
    }
    if let Some(dt) = doc.dt {
        positive("dt", dt)?;
    }
    if let Some(t_end) = doc.t_end {
        positive("t_end", t_end)?;
    }
    let reference_policy = match doc.reference_policy.as_deref() {
        None | Some("budgeted") => ReferencePolicy::Budgeted,
        Some("paper-exact") => ReferencePolicy::PaperExact,
        Some(other) => {
            return Err(ConfigError(format!(
                "reference_policy: expected \"paper-exact\" or \"budgeted\", got {other:?}"
            )))
        }
    };
    let materials = match &doc.materials {
        Some(ov) if !ov.is_empty() => {
            let merged = ov.apply(MaterialSet::ti64());
            merged
                .validate()
                .map_err(|e| ConfigError(format!("materials: {e}")))?;
            Some(merged)
        }
        _ => None,
    };
    let overrides = Overrides {
        dt: doc.dt,
        t_end: doc.t_end,
        steady: doc.steady.unwrap_or(false),
        materials,
        reference_policy,
        mesh_cells_2d: doc.mesh_cells_2d,
    };
    let workers = doc.workers.unwrap_or(1).max(1);

    let config = RunConfig {
        benchmark,
        cases,
        methods,
        eps_list,
        n_i_list,
        overrides,
        out_dir: doc.out_dir.as_ref().map(PathBuf::from),
        workers,
        dump_fields: doc.dump_fields.unwrap_or(false),
        document: doc,
    };
    // Every grid point must be a valid run spec.
    for spec in config.sweep_spec().runs() {
        spec.validate()
            .map_err(|e| ConfigError(format!("run parameters: {e}")))?;
    }
    Ok(config)
}

impl RunConfig {
    /// The single run described by this config; errors if any axis has more
    /// than one value.
    pub fn single_run_spec(&self) -> Result<RunSpec> {
        if self.cases.len() != 1
            || self.methods.len() != 1
            || self.eps_list.len() != 1
            || self.n_i_list.len() != 1
        {
            return Err(ConfigError(
                "run mode needs exactly one case, method, eps and n_i; use `sweep` for grids"
                    .into(),
            ));
        }
        Ok(RunSpec {
            benchmark: self.benchmark,
            case: self.cases[0],
            method: self.methods[0],
            eps: self.eps_list[0],
            n_i: self.n_i_list[0],
            overrides: self.overrides.clone(),
        })
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            benchmark: self.benchmark,
            cases: self.cases.clone(),
            methods: self.methods.clone(),
            eps_list: self.eps_list.clone(),
            n_i_list: self.n_i_list.clone(),
            overrides: self.overrides.clone(),
        }
    }
}
