//! Run configuration: JSON with a versioned schema, naming the measures to
//! build and the suites to execute.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use appell_core::measure::{
    density_measure_1d, gaussian_measure, poisson_measure_1d, MeasureModel, MixtureDensity,
    NormalDensity, QuadratureSpec,
};
use appell_core::WeightModel;
use serde::Deserialize;

pub const CONFIG_SCHEMA: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema: u32,
    /// Seed for every randomized suite; mandatory so reports are reproducible.
    pub seed: u64,
    /// Maximal retained tensor degree for systems built by the suites.
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    /// Diagonal weight family; defaults to a single weight 2.
    #[serde(default)]
    pub weight: Option<WeightConfig>,
    /// Named measures, iterated in sorted-name order everywhere.
    pub measures: BTreeMap<String, MeasureConfig>,
    /// Suites to run when the command line names none.
    #[serde(default)]
    pub suites: Vec<String>,
    /// Randomized-trial count used by the identity and norm suites.
    #[serde(default = "default_draws")]
    pub draws: usize,
}

fn default_truncation() -> usize {
    8
}

fn default_draws() -> usize {
    100
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub lambda: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasureConfig {
    /// Standard Gaussian on ℝ^dim.
    Gaussian {
        #[serde(default = "default_dim")]
        dim: usize,
    },
    /// Poisson on ℤ≥0 with the given intensity.
    Poisson { intensity: f64 },
    /// One-dimensional normal density with trapezoid quadrature.
    Normal {
        mean: f64,
        std: f64,
        support: (f64, f64),
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
    /// Finite normal mixture with trapezoid quadrature.
    Mixture {
        components: Vec<MixtureComponent>,
        support: (f64, f64),
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
}

fn default_dim() -> usize {
    1
}

fn default_nodes() -> usize {
    2501
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub std: f64,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: Config = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if config.schema != CONFIG_SCHEMA {
            bail!(
                "unsupported config schema {} (expected {})",
                config.schema,
                CONFIG_SCHEMA
            );
        }
        if config.measures.is_empty() {
            bail!("config declares no measures");
        }
        Ok(config)
    }

    pub fn weight_model(&self) -> Result<WeightModel> {
        let lambda = self
            .weight
            .as_ref()
            .map(|w| w.lambda.clone())
            .unwrap_or_else(|| vec![2.0]);
        Ok(WeightModel::new(lambda)?)
    }

    /// Instantiate every configured measure with moments through `n_max`.
    pub fn build_measures(&self, n_max: usize) -> Result<Vec<(String, MeasureModel)>> {
        self.measures
            .iter()
            .map(|(name, spec)| {
                let model = spec
                    .build(n_max)
                    .with_context(|| format!("building measure {name:?}"))?;
                Ok((name.clone(), model))
            })
            .collect()
    }
}

impl MeasureConfig {
    pub fn build(&self, n_max: usize) -> Result<MeasureModel> {
        let model = match self {
            MeasureConfig::Gaussian { dim } => gaussian_measure(*dim, n_max)?,
            MeasureConfig::Poisson { intensity } => poisson_measure_1d(*intensity, n_max)?,
            MeasureConfig::Normal {
                mean,
                std,
                support,
                nodes,
            } => density_measure_1d(
                Arc::new(NormalDensity::new(*mean, *std)?),
                *support,
                QuadratureSpec::trapezoid(*nodes),
                n_max,
            )?,
            MeasureConfig::Mixture {
                components,
                support,
                nodes,
            } => {
                let parts = components
                    .iter()
                    .map(|c| Ok((c.weight, NormalDensity::new(c.mean, c.std)?)))
                    .collect::<Result<Vec<_>>>()?;
                density_measure_1d(
                    Arc::new(MixtureDensity::new(parts)?),
                    *support,
                    QuadratureSpec::trapezoid(*nodes),
                    n_max,
                )?
            }
        };
        Ok(model)
    }

    pub fn is_poisson(&self) -> bool {
        matches!(self, MeasureConfig::Poisson { .. })
    }

    pub fn intensity(&self) -> Option<f64> {
        match self {
            MeasureConfig::Poisson { intensity } => Some(*intensity),
            _ => None,
        }
    }
}
