//! Run configuration and hyperparameter resolution.

use std::path::PathBuf;
use std::str::FromStr;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};
use stclust::graph::Adjacency;
use stclust::models::{default_hyperparams, ModelSpec, Variant};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    GaussianDiag,
    Poisson,
    Multinomial,
}

impl ModelChoice {
    pub fn variant(self) -> Variant {
        match self {
            ModelChoice::GaussianDiag => Variant::GaussianDiag,
            ModelChoice::Poisson => Variant::PoissonGamma,
            ModelChoice::Multinomial => Variant::MultinomialDirichlet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AdjacencyChoice {
    Rook,
    Queen,
}

impl From<AdjacencyChoice> for Adjacency {
    fn from(a: AdjacencyChoice) -> Self {
        match a {
            AdjacencyChoice::Rook => Adjacency::Rook,
            AdjacencyChoice::Queen => Adjacency::Queen,
        }
    }
}

/// A number, or `auto` for the data-driven default.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HyperValue {
    #[default]
    Auto,
    Value(f64),
}

impl FromStr for HyperValue {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(HyperValue::Auto);
        }
        s.parse::<f64>()
            .map(HyperValue::Value)
            .map_err(|_| format!("expected a number or \"auto\", got {s:?}"))
    }
}

/// `RxC` grid dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (r, c) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected RxC, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad grid dimension {t:?}"));
        Ok(GridSpec {
            rows: parse(r)?,
            cols: parse(c)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphSource {
    EdgeList { path: PathBuf, one_based: bool },
    Grid { rows: usize, cols: usize, adjacency: AdjacencyChoice },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub tau: HyperValue,
    pub kappa: HyperValue,
    pub beta: HyperValue,
    pub mu: HyperValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlrConfig {
    pub reference: String,
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub features: PathBuf,
    pub graph: GraphSource,
    pub model: ModelChoice,
    pub hyperparameters: Hyperparameters,
    pub alpha: f64,
    pub alr: Option<AlrConfig>,
    pub cut_at: Vec<usize>,
    pub out: PathBuf,
    /// Echoed into the document; the clustering itself draws no random numbers.
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(CliError::Validation(format!("alpha must lie in (0, 1] (got {})", self.alpha)));
        }
        if self.cut_at.contains(&0) {
            return Err(CliError::Validation("--cut-at values must be at least 1".into()));
        }
        let h = &self.hyperparameters;
        if self.model != ModelChoice::GaussianDiag {
            if h.tau != HyperValue::Auto || h.mu != HyperValue::Auto {
                return Err(CliError::Validation("--tau and --mu apply to the gaussian-diag model only".into()));
            }
            if self.model == ModelChoice::Multinomial && h.beta != HyperValue::Auto {
                return Err(CliError::Validation("--beta does not apply to the multinomial model".into()));
            }
        }
        Ok(())
    }
}

/// Data-driven defaults with the configured overrides applied.
///
/// For the Poisson model `kappa` and `beta` are the Gamma shape and rate; for
/// the multinomial model `kappa` is the Dirichlet concentration.
pub fn resolve_spec(x: ArrayView2<'_, f64>, model: ModelChoice, h: &Hyperparameters) -> Result<ModelSpec> {
    let base = default_hyperparams(x, model.variant())?;
    let dims = x.ncols();
    let or = |v: HyperValue, default: f64| match v {
        HyperValue::Auto => default,
        HyperValue::Value(v) => v,
    };
    let or_vec = |v: HyperValue, default: Vec<f64>| match v {
        HyperValue::Auto => default,
        HyperValue::Value(v) => vec![v; dims],
    };
    let spec = match base {
        ModelSpec::GaussianDiag {
            mu0,
            tau,
            kappa,
            beta,
        } => ModelSpec::gaussian_diag(or_vec(h.mu, mu0), or(h.tau, tau), or(h.kappa, kappa), or_vec(h.beta, beta))?,
        ModelSpec::PoissonGamma { shape, rate } => ModelSpec::poisson_gamma(or_vec(h.kappa, shape), or_vec(h.beta, rate))?,
        ModelSpec::MultinomialDirichlet { concentration } => {
            ModelSpec::multinomial_dirichlet(or_vec(h.kappa, concentration))?
        }
    };
    Ok(spec)
}
