//! Run configuration: a flat key = value file plus command-line overrides.
//!
//! The format is one `key = value` pair per line, `#` starts a comment.
//! Parse errors carry the offending line or field so the binary can exit
//! with a usable diagnostic.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_complex::Complex64 as C64;

use crate::dynamics::{Method, PhysicalParams, PropagatorConfig};
use crate::spinalg::{CoherentSpec, SpinSystem};

/// Configuration / usage error; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " in field `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        Self {
            line: None,
            field: Some(field.to_string()),
            message: message.into(),
        }
    }
}

/// Parsed key/value pairs with the line each key came from.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, (String, Option<usize>)>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    line: Some(line_no),
                    field: None,
                    message: format!("expected `key = value`, got `{}`", raw.trim()),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError {
                    line: Some(line_no),
                    field: Some(key),
                    message: "empty key or value".to_string(),
                });
            }
            entries.insert(key, (value, Some(line_no)));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            field: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Apply `key=value` overrides from the command line.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), ConfigError> {
        for item in overrides {
            let Some((key, value)) = item.split_once('=') else {
                return Err(ConfigError {
                    line: None,
                    field: None,
                    message: format!("--set expects key=value, got `{item}`"),
                });
            };
            self.entries
                .insert(key.trim().to_string(), (value.trim().to_string(), None));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn parse_value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                let line = self.entries.get(key).and_then(|(_, l)| *l);
                ConfigError {
                    line,
                    field: Some(key.to_string()),
                    message: format!("cannot parse `{raw}`"),
                }
            }),
        }
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.parse_value::<f64>(key)?.unwrap_or(default))
    }

    fn f64_required(&self, key: &str) -> Result<f64, ConfigError> {
        self.parse_value::<f64>(key)?
            .ok_or_else(|| ConfigError::field(key, "required key missing"))
    }

    /// Unknown keys are configuration errors: they are silent typos otherwise.
    fn check_known(&self, known: &[&str]) -> Result<(), ConfigError> {
        for (key, (_, line)) in &self.entries {
            if !known.contains(&key.as_str()) {
                return Err(ConfigError {
                    line: *line,
                    field: Some(key.clone()),
                    message: "unknown key".to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Initial operator of an evolve run.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Coherent-state density |θ,φ⟩⟨θ,φ|.
    Coherent(CoherentSpec),
    /// Normalized two-component superposition, as a density.
    Cat(crate::cats::CatSpec),
    /// The off-diagonal polar dyad |j,j⟩⟨j,−j| whose norms decay exactly
    /// as (e^{−2τ}, e^{−τ}).
    PolarCat,
    /// Output of the three-step preparation, as a density.
    Prepared { theta: f64, phi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SpinSystem,
    pub state: InitialState,
    pub params: Option<PhysicalParams>,
    pub tau_max: f64,
    pub samples: usize,
    pub log_grid: bool,
    pub propagator: PropagatorConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub j_values: Vec<SpinSystem>,
    pub pairs: Vec<(f64, f64)>,
    pub fit_samples: usize,
    /// Fit window override in τ; per-pair defaults otherwise.
    pub fit_window: Option<f64>,
    pub propagator: PropagatorConfig,
}

const RUN_KEYS: &[&str] = &[
    "j", "n_atoms", "state", "theta", "phi", "theta1", "phi1", "theta2", "phi2", "c1_re", "c1_im",
    "c2_re", "c2_im", "g", "kappa", "delta", "tau_max", "samples", "log_grid", "method", "rel_tol",
    "abs_tol", "max_step",
];

const SWEEP_KEYS: &[&str] = &[
    "sweep_j",
    "sweep_pairs",
    "fit_samples",
    "fit_window",
    "method",
    "rel_tol",
    "abs_tol",
    "max_step",
];

fn system_from(map: &ConfigMap) -> Result<SpinSystem, ConfigError> {
    match (map.has("j"), map.has("n_atoms")) {
        (true, true) => Err(ConfigError::field(
            "j",
            "give either j or n_atoms, not both",
        )),
        (false, false) => Err(ConfigError::field("j", "missing j or n_atoms")),
        (true, false) => {
            let j = map.f64_required("j")?;
            two_j_from(j)
                .map(SpinSystem::new)
                .map_err(|m| ConfigError::field("j", m))
        }
        (false, true) => {
            let n = map.parse_value::<u32>("n_atoms")?.expect("checked present");
            if n == 0 {
                return Err(ConfigError::field("n_atoms", "must be positive"));
            }
            Ok(SpinSystem::from_atom_count(n))
        }
    }
}

fn two_j_from(j: f64) -> Result<u32, String> {
    let two_j = 2.0 * j;
    let rounded = two_j.round();
    if !(j > 0.0) || (two_j - rounded).abs() > 1e-9 || rounded > u32::MAX as f64 {
        return Err(format!("j = {j} is not a positive integer or half-integer"));
    }
    Ok(rounded as u32)
}

fn propagator_from(map: &ConfigMap) -> Result<PropagatorConfig, ConfigError> {
    let method = match map.get("method") {
        None => Method::AdaptiveRk,
        Some("adaptive_rk") => Method::AdaptiveRk,
        Some("fixed_rk4") => Method::FixedRk4,
        Some("dense_expm_oracle") => Method::DenseExpmOracle,
        Some(other) => {
            return Err(ConfigError::field(
                "method",
                format!("`{other}` is not adaptive_rk | fixed_rk4 | dense_expm_oracle"),
            ))
        }
    };
    let defaults = PropagatorConfig::default();
    let rel_tol = map.f64_or("rel_tol", defaults.rel_tol)?;
    let abs_tol = map.f64_or("abs_tol", defaults.abs_tol)?;
    let max_step = map.parse_value::<f64>("max_step")?;
    if rel_tol <= 0.0 || abs_tol <= 0.0 {
        return Err(ConfigError::field("rel_tol", "tolerances must be positive"));
    }
    if let Some(h) = max_step {
        if !(h > 0.0) {
            return Err(ConfigError::field("max_step", "must be positive"));
        }
    }
    Ok(PropagatorConfig {
        method,
        rel_tol,
        abs_tol,
        max_step,
    })
}

fn params_from(map: &ConfigMap, system: SpinSystem) -> Result<Option<PhysicalParams>, ConfigError> {
    if !map.has("g") && !map.has("kappa") && !map.has("delta") {
        return Ok(None);
    }
    let g = map.f64_required("g")?;
    let kappa = map.f64_required("kappa")?;
    let delta = map.f64_required("delta")?;
    if g <= 0.0 || kappa <= 0.0 {
        return Err(ConfigError::field("g", "g and kappa must be positive"));
    }
    Ok(Some(PhysicalParams {
        g,
        kappa,
        delta,
        n_atoms: system.two_j(),
    }))
}

fn angle(map: &ConfigMap, key: &str) -> Result<f64, ConfigError> {
    let v = map.f64_required(key)?;
    if !(0.0..=PI).contains(&v) {
        return Err(ConfigError::field(key, format!("{v} outside [0, pi]")));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self, ConfigError> {
        map.check_known(RUN_KEYS)?;
        let system = system_from(map)?;
        let propagator = propagator_from(map)?;
        let params = params_from(map, system)?;

        let state = match map.get("state") {
            None => return Err(ConfigError::field("state", "required key missing")),
            Some("coherent") => {
                let spec = CoherentSpec::new(angle(map, "theta")?, map.f64_or("phi", 0.0)?)
                    .map_err(|e| ConfigError::field("theta", e.to_string()))?;
                InitialState::Coherent(spec)
            }
            Some("cat") => {
                let a = CoherentSpec::new(angle(map, "theta1")?, map.f64_or("phi1", 0.0)?)
                    .map_err(|e| ConfigError::field("theta1", e.to_string()))?;
                let b = CoherentSpec::new(angle(map, "theta2")?, map.f64_or("phi2", 0.0)?)
                    .map_err(|e| ConfigError::field("theta2", e.to_string()))?;
                let c1 = C64::new(map.f64_or("c1_re", 1.0)?, map.f64_or("c1_im", 0.0)?);
                let c2 = C64::new(map.f64_or("c2_re", 1.0)?, map.f64_or("c2_im", 0.0)?);
                InitialState::Cat(crate::cats::CatSpec::new(a, b, c1, c2))
            }
            Some("polar_cat") => InitialState::PolarCat,
            Some("prepared") => {
                if params.is_none() {
                    return Err(ConfigError::field(
                        "g",
                        "prepared state requires g, kappa, delta",
                    ));
                }
                InitialState::Prepared {
                    theta: angle(map, "theta")?,
                    phi: map.f64_or("phi", 0.0)?,
                }
            }
            Some(other) => {
                return Err(ConfigError::field(
                    "state",
                    format!("`{other}` is not coherent | cat | polar_cat | prepared"),
                ))
            }
        };

        let tau_max = map.f64_required("tau_max")?;
        if !(tau_max > 0.0) {
            return Err(ConfigError::field("tau_max", "must be > 0"));
        }
        let samples = map.parse_value::<usize>("samples")?.unwrap_or(21);
        if samples < 2 {
            return Err(ConfigError::field("samples", "need at least 2 samples"));
        }
        let log_grid = match map.get("log_grid") {
            None => false,
            Some("true") => true,
            Some("false") => false,
            Some(other) => {
                return Err(ConfigError::field(
                    "log_grid",
                    format!("`{other}` is not a bool"),
                ))
            }
        };

        Ok(Self {
            system,
            state,
            params,
            tau_max,
            samples,
            log_grid,
            propagator,
        })
    }
}

impl SweepConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self, ConfigError> {
        map.check_known(SWEEP_KEYS)?;
        let j_list = map
            .get("sweep_j")
            .ok_or_else(|| ConfigError::field("sweep_j", "required key missing"))?;
        let mut j_values = Vec::new();
        for item in j_list.split(',') {
            let j: f64 = item.trim().parse().map_err(|_| {
                ConfigError::field("sweep_j", format!("cannot parse `{}`", item.trim()))
            })?;
            let two_j = two_j_from(j).map_err(|m| ConfigError::field("sweep_j", m))?;
            j_values.push(SpinSystem::new(two_j));
        }
        let pair_list = map
            .get("sweep_pairs")
            .ok_or_else(|| ConfigError::field("sweep_pairs", "required key missing"))?;
        let mut pairs = Vec::new();
        for item in pair_list.split(',') {
            let item = item.trim();
            let Some((g1, g2)) = item.split_once(':') else {
                return Err(ConfigError::field(
                    "sweep_pairs",
                    format!("expected gamma1:gamma2, got `{item}`"),
                ));
            };
            let g1: f64 = g1
                .trim()
                .parse()
                .map_err(|_| ConfigError::field("sweep_pairs", format!("cannot parse `{g1}`")))?;
            let g2: f64 = g2
                .trim()
                .parse()
                .map_err(|_| ConfigError::field("sweep_pairs", format!("cannot parse `{g2}`")))?;
            if g1 < 0.0 || g2 < 0.0 {
                return Err(ConfigError::field("sweep_pairs", "gamma must be >= 0"));
            }
            pairs.push((g1, g2));
        }
        if j_values.is_empty() || pairs.is_empty() {
            return Err(ConfigError::field("sweep_j", "empty sweep grid"));
        }
        let fit_samples = map.parse_value::<usize>("fit_samples")?.unwrap_or(20);
        if fit_samples < 3 {
            return Err(ConfigError::field("fit_samples", "need at least 3 samples"));
        }
        let fit_window = map.parse_value::<f64>("fit_window")?;
        if let Some(w) = fit_window {
            if !(w > 0.0) {
                return Err(ConfigError::field("fit_window", "must be > 0"));
            }
        }
        Ok(Self {
            j_values,
            pairs,
            fit_samples,
            fit_window,
            propagator: propagator_from(map)?,
        })
    }
}
