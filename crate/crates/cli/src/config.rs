//! Flat key=value experiment configuration with a closed key set.
//!
//! Files hold one `key = value` pair per line; `#` starts a comment. The same
//! keys can be overridden on the command line with `--set key=value`, applied
//! after the file in the order given.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use backflow_core::bounds::{standard_quantifiers, Quantifier};
use backflow_core::divergences::TelescopicParameter;
use backflow_core::models::{
    default_scenario, ModelKind, ModelSpec, PauliConvention, ScenarioOptions, ScenarioSpec,
};

/// Which experiment a run executes; also settable via the `experiment` key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Trajectory,
    BoundSlice,
    BoundSurface,
    Verify,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Trajectory => "trajectory",
            Experiment::BoundSlice => "bound-slice",
            Experiment::BoundSurface => "bound-surface",
            Experiment::Verify => "verify",
        }
    }

    fn parse(value: &str) -> Result<Self> {
        match value {
            "trajectory" => Ok(Experiment::Trajectory),
            "bound-slice" => Ok(Experiment::BoundSlice),
            "bound-surface" => Ok(Experiment::BoundSurface),
            "verify" => Ok(Experiment::Verify),
            other => bail!(
                "unknown experiment '{other}' (expected trajectory, bound-slice, bound-surface or verify)"
            ),
        }
    }
}

/// Every key the configuration accepts; anything else is rejected.
pub const CONFIG_KEYS: &[&str] = &[
    "experiment",
    "model.kind",
    "model.omega_s",
    "model.omega_e",
    "model.g",
    "model.n_trunc",
    "model.pauli_convention",
    "scenario.theta",
    "scenario.phi",
    "scenario.beta_omega",
    "scenario.T",
    "grid",
    "mu_list",
    "t_ref",
];

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub model: ModelSpec,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub beta_omega: Option<f64>,
    pub horizon: Option<f64>,
    pub grid: usize,
    pub mu_list: Vec<TelescopicParameter>,
    pub t_ref: Option<f64>,
}

impl ExperimentConfig {
    /// Assemble from an optional file plus `--set` overrides.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut pairs: BTreeMap<String, String> = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = split_pair(line).ok_or_else(|| {
                    anyhow!("{}:{}: expected key=value", path.display(), lineno + 1)
                })?;
                validate_key(&key)?;
                pairs.insert(key, value);
            }
        }
        for item in overrides {
            let (key, value) =
                split_pair(item).ok_or_else(|| anyhow!("--set needs key=value, got '{item}'"))?;
            validate_key(&key)?;
            pairs.insert(key, value);
        }
        Self::from_pairs(&pairs)
    }

    fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        let kind = match pairs.get("model.kind").map(String::as_str) {
            None | Some("jaynes-cummings") => ModelKind::JaynesCummings,
            Some("two-qubit-exchange") => ModelKind::TwoQubitExchange,
            Some(other) => bail!(
                "unknown model.kind '{other}' (expected jaynes-cummings or two-qubit-exchange)"
            ),
        };
        let mut model = match kind {
            ModelKind::JaynesCummings => ModelSpec::jaynes_cummings(),
            ModelKind::TwoQubitExchange => ModelSpec::two_qubit_exchange(),
        };
        if let Some(v) = pairs.get("model.omega_s") {
            model.omega_s = parse_f64("model.omega_s", v)?;
        }
        if let Some(v) = pairs.get("model.omega_e") {
            model.omega_e = parse_f64("model.omega_e", v)?;
        }
        if let Some(v) = pairs.get("model.g") {
            model.g = parse_f64("model.g", v)?;
        }
        if let Some(v) = pairs.get("model.n_trunc") {
            model.n_trunc = v
                .parse::<usize>()
                .map_err(|_| anyhow!("model.n_trunc must be a positive integer, got '{v}'"))?;
        }
        if let Some(v) = pairs.get("model.pauli_convention") {
            model.pauli_convention = match v.as_str() {
                "unnormalized" => PauliConvention::Unnormalized,
                "halved" => PauliConvention::Halved,
                other => bail!(
                    "unknown model.pauli_convention '{other}' (expected unnormalized or halved)"
                ),
            };
        }

        let experiment = pairs
            .get("experiment")
            .map(|v| Experiment::parse(v))
            .transpose()?;
        let grid = match pairs.get("grid") {
            Some(v) => {
                let g = v
                    .parse::<usize>()
                    .map_err(|_| anyhow!("grid must be an integer, got '{v}'"))?;
                if g < 2 {
                    bail!("grid needs at least two points, got {g}");
                }
                g
            }
            None => 200,
        };
        let mu_list = match pairs.get("mu_list") {
            Some(v) => v
                .split(',')
                .map(|item| {
                    let mu = parse_f64("mu_list", item.trim())?;
                    TelescopicParameter::new(mu).map_err(|e| anyhow!("mu_list: {e}"))
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![TelescopicParameter::optimal()],
        };

        Ok(Self {
            experiment,
            model,
            theta: pairs
                .get("scenario.theta")
                .map(|v| parse_f64("scenario.theta", v))
                .transpose()?,
            phi: pairs
                .get("scenario.phi")
                .map(|v| parse_f64("scenario.phi", v))
                .transpose()?,
            beta_omega: pairs
                .get("scenario.beta_omega")
                .map(|v| parse_f64("scenario.beta_omega", v))
                .transpose()?,
            horizon: pairs
                .get("scenario.T")
                .map(|v| parse_f64("scenario.T", v))
                .transpose()?,
            grid,
            mu_list,
            t_ref: pairs
                .get("t_ref")
                .map(|v| parse_f64("t_ref", v))
                .transpose()?,
        })
    }

    /// Reject configs whose `experiment` key contradicts the subcommand.
    pub fn ensure_experiment(&self, invoked: Experiment) -> Result<()> {
        if let Some(declared) = self.experiment {
            if declared != invoked {
                bail!(
                    "config declares experiment '{}' but the '{}' subcommand was invoked",
                    declared.name(),
                    invoked.name()
                );
            }
        }
        Ok(())
    }

    pub fn scenario(&self) -> Result<ScenarioSpec> {
        let options = ScenarioOptions {
            theta: self.theta,
            phi: self.phi,
            beta_omega: self.beta_omega,
            horizon: self.horizon,
            grid_points: Some(self.grid),
        };
        default_scenario(self.model, &options).map_err(|e| anyhow!("building scenario: {e}"))
    }

    /// Quantifier set for bound experiments: TD, TRE and the alternate TRE
    /// bound at every configured parameter, and the QJSD square root.
    pub fn quantifiers(&self) -> Vec<Quantifier> {
        standard_quantifiers(&self.mu_list)
    }

    /// Nearest grid index of `t_ref` (default: the horizon itself).
    pub fn t_ref_index(&self, horizon: f64, grid: usize) -> Result<usize> {
        let t = self.t_ref.unwrap_or(horizon);
        if !(0.0..=horizon * (1.0 + 1e-12)).contains(&t) {
            bail!("t_ref {t} outside the evolution window [0, {horizon}]");
        }
        Ok(((t / horizon) * (grid - 1) as f64).round() as usize)
    }
}

fn split_pair(item: &str) -> Option<(String, String)> {
    let (key, value) = item.split_once('=')?;
    let key = key.trim().to_string();
    let value = value.trim().to_string();
    if key.is_empty() || value.is_empty() {
        return None;
    }
    Some((key, value))
}

fn validate_key(key: &str) -> Result<()> {
    if CONFIG_KEYS.contains(&key) {
        Ok(())
    } else {
        bail!(
            "unknown config key '{key}'; valid keys: {}",
            CONFIG_KEYS.join(", ")
        )
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let parsed = value
        .parse::<f64>()
        .map_err(|_| anyhow!("{key} must be a number, got '{value}'"))?;
    if !parsed.is_finite() {
        bail!("{key} must be finite, got '{value}'");
    }
    Ok(parsed)
}
