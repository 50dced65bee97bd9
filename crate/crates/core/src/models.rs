//! Conjugate exponential-family observation models.
//!
//! Each cluster is summarised by additive sufficient statistics; the
//! integrated likelihood of a cluster is a closed-form function of them.
//! The base-measure term `Σ log B(xᵢ)` is left out of [`log_marginal`]: it is
//! the same for every partition of a fixed data set. [`log_base_measure`]
//! returns it for callers that need absolute evidence values.

use ndarray::{ArrayView1, ArrayView2, Axis};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Observation model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Independent Gaussian per dimension with a Normal-Gamma prior.
    GaussianDiag,
    /// Independent Poisson counts per dimension with a Gamma prior.
    PoissonGamma,
    /// Multinomial category counts with a Dirichlet prior.
    MultinomialDirichlet,
}

/// Model family together with its prior hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    /// `μ_d | V_d ~ N(mu0_d, 1/(tau V_d))`, `V_d ~ Gamma(kappa, rate beta_d)`.
    GaussianDiag {
        mu0: Vec<f64>,
        tau: f64,
        kappa: f64,
        beta: Vec<f64>,
    },
    /// `λ_d ~ Gamma(shape_d, rate_d)`.
    PoissonGamma { shape: Vec<f64>, rate: Vec<f64> },
    /// `θ ~ Dirichlet(concentration)`.
    MultinomialDirichlet { concentration: Vec<f64> },
}

impl ModelSpec {
    pub fn gaussian_diag(mu0: Vec<f64>, tau: f64, kappa: f64, beta: Vec<f64>) -> Result<Self> {
        let spec = ModelSpec::GaussianDiag {
            mu0,
            tau,
            kappa,
            beta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn poisson_gamma(shape: Vec<f64>, rate: Vec<f64>) -> Result<Self> {
        let spec = ModelSpec::PoissonGamma { shape, rate };
        spec.validate()?;
        Ok(spec)
    }

    pub fn multinomial_dirichlet(concentration: Vec<f64>) -> Result<Self> {
        let spec = ModelSpec::MultinomialDirichlet { concentration };
        spec.validate()?;
        Ok(spec)
    }

    pub fn variant(&self) -> Variant {
        match self {
            ModelSpec::GaussianDiag { .. } => Variant::GaussianDiag,
            ModelSpec::PoissonGamma { .. } => Variant::PoissonGamma,
            ModelSpec::MultinomialDirichlet { .. } => Variant::MultinomialDirichlet,
        }
    }

    /// Feature dimensionality.
    pub fn dims(&self) -> usize {
        match self {
            ModelSpec::GaussianDiag { mu0, .. } => mu0.len(),
            ModelSpec::PoissonGamma { shape, .. } => shape.len(),
            ModelSpec::MultinomialDirichlet { concentration } => concentration.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidHyperparameter(format!("{name} must be positive and finite (got {v})")))
            }
        };
        match self {
            ModelSpec::GaussianDiag {
                mu0,
                tau,
                kappa,
                beta,
            } => {
                if mu0.is_empty() {
                    return Err(Error::InvalidHyperparameter("no feature dimensions".into()));
                }
                if beta.len() != mu0.len() {
                    return Err(Error::DimensionMismatch {
                        expected: mu0.len(),
                        found: beta.len(),
                    });
                }
                if let Some(m) = mu0.iter().find(|m| !m.is_finite()) {
                    return Err(Error::InvalidHyperparameter(format!("mu0 must be finite (got {m})")));
                }
                positive("tau", *tau)?;
                positive("kappa", *kappa)?;
                beta.iter().try_for_each(|&b| positive("beta", b))
            }
            ModelSpec::PoissonGamma { shape, rate } => {
                if shape.is_empty() {
                    return Err(Error::InvalidHyperparameter("no feature dimensions".into()));
                }
                if rate.len() != shape.len() {
                    return Err(Error::DimensionMismatch {
                        expected: shape.len(),
                        found: rate.len(),
                    });
                }
                shape.iter().try_for_each(|&a| positive("shape", a))?;
                rate.iter().try_for_each(|&b| positive("rate", b))
            }
            ModelSpec::MultinomialDirichlet { concentration } => {
                if concentration.len() < 2 {
                    return Err(Error::InvalidHyperparameter(
                        "multinomial model needs at least two categories".into(),
                    ));
                }
                concentration.iter().try_for_each(|&a| positive("concentration", a))
            }
        }
    }
}

/// Additive sufficient statistics of a set of observations.
///
/// `sum` holds `Σx` per dimension (category totals for the multinomial
/// model); `sum_sq` holds `Σx²` and is only populated for the Gaussian model.
#[derive(Debug, Clone, PartialEq)]
pub struct SuffStats {
    variant: Variant,
    n: usize,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl SuffStats {
    /// Statistics of no observations, the identity of [`combine`].
    pub fn empty(spec: &ModelSpec) -> Self {
        let d = spec.dims();
        let variant = spec.variant();
        Self {
            variant,
            n: 0,
            sum: vec![0.0; d],
            sum_sq: if variant == Variant::GaussianDiag {
                vec![0.0; d]
            } else {
                Vec::new()
            },
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sum(&self) -> &[f64] {
        &self.sum
    }

    pub fn sum_sq(&self) -> &[f64] {
        &self.sum_sq
    }

    /// In-place `self ⊕ other`.
    pub fn absorb(&mut self, other: &SuffStats) -> Result<()> {
        if self.variant != other.variant {
            return Err(Error::ModelMismatch);
        }
        if self.sum.len() != other.sum.len() {
            return Err(Error::DimensionMismatch {
                expected: self.sum.len(),
                found: other.sum.len(),
            });
        }
        self.n += other.n;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        Ok(())
    }
}

/// Statistics of a single observation.
pub fn suff_stats(x: ArrayView1<'_, f64>, spec: &ModelSpec) -> Result<SuffStats> {
    if x.len() != spec.dims() {
        return Err(Error::DimensionMismatch {
            expected: spec.dims(),
            found: x.len(),
        });
    }
    let variant = spec.variant();
    match variant {
        Variant::GaussianDiag => {
            if let Some(&v) = x.iter().find(|v| !v.is_finite()) {
                return Err(Error::Numeric(format!("non-finite feature value {v}")));
            }
        }
        Variant::PoissonGamma | Variant::MultinomialDirichlet => {
            if let Some(&v) = x.iter().find(|&&v| !(v >= 0.0 && v.fract() == 0.0 && v.is_finite())) {
                return Err(Error::InvalidCount { value: v });
            }
        }
    }
    Ok(SuffStats {
        variant,
        n: 1,
        sum: x.to_vec(),
        sum_sq: if variant == Variant::GaussianDiag {
            x.iter().map(|v| v * v).collect()
        } else {
            Vec::new()
        },
    })
}

/// Statistics of every row of `x` listed in `rows`.
pub fn suff_stats_of_rows(x: ArrayView2<'_, f64>, rows: &[usize], spec: &ModelSpec) -> Result<SuffStats> {
    let mut acc = SuffStats::empty(spec);
    for &r in rows {
        acc.absorb(&suff_stats(x.row(r), spec)?)?;
    }
    Ok(acc)
}

/// Componentwise sum of two statistics.
pub fn combine(a: &SuffStats, b: &SuffStats) -> Result<SuffStats> {
    let mut out = a.clone();
    out.absorb(b)?;
    Ok(out)
}

/// Integrated log-likelihood of a cluster, `log H(prior) − log H(posterior)`,
/// without the base-measure term.
pub fn log_marginal(t: &SuffStats, spec: &ModelSpec) -> Result<f64> {
    if t.variant != spec.variant() {
        return Err(Error::ModelMismatch);
    }
    if t.sum.len() != spec.dims() {
        return Err(Error::DimensionMismatch {
            expected: spec.dims(),
            found: t.sum.len(),
        });
    }
    if t.n == 0 {
        return Ok(0.0);
    }
    let n = t.n as f64;
    let value = match spec {
        ModelSpec::GaussianDiag {
            mu0,
            tau,
            kappa,
            beta,
        } => {
            let kappa_n = kappa + 0.5 * n;
            let tau_n = tau + n;
            let mut acc = 0.0;
            for d in 0..mu0.len() {
                let mean = t.sum[d] / n;
                let scatter = (t.sum_sq[d] - t.sum[d] * mean).max(0.0);
                let shift = mean - mu0[d];
                let beta_n = beta[d] + 0.5 * scatter + 0.5 * tau * n * shift * shift / tau_n;
                acc += 0.5 * (tau / tau_n).ln() + ln_gamma(kappa_n) - ln_gamma(*kappa) + kappa * beta[d].ln()
                    - kappa_n * beta_n.ln();
            }
            acc
        }
        ModelSpec::PoissonGamma { shape, rate } => {
            let mut acc = 0.0;
            for d in 0..shape.len() {
                let (a, b, s) = (shape[d], rate[d], t.sum[d]);
                acc += a * b.ln() - ln_gamma(a) + ln_gamma(a + s) - (a + s) * (b + n).ln();
            }
            acc
        }
        ModelSpec::MultinomialDirichlet { concentration } => {
            let total_prior: f64 = concentration.iter().sum();
            let total_counts: f64 = t.sum.iter().sum();
            let mut acc = ln_gamma(total_prior) - ln_gamma(total_prior + total_counts);
            for (a, c) in concentration.iter().zip(&t.sum) {
                acc += ln_gamma(a + c) - ln_gamma(*a);
            }
            acc
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!("log marginal evaluated to {value}")))
    }
}

/// `log B(x)` for one observation: the part of the density that
/// [`log_marginal`] leaves out.
pub fn log_base_measure(x: ArrayView1<'_, f64>, spec: &ModelSpec) -> f64 {
    match spec {
        ModelSpec::GaussianDiag { mu0, .. } => -0.5 * mu0.len() as f64 * (2.0 * std::f64::consts::PI).ln(),
        ModelSpec::PoissonGamma { .. } => -x.iter().map(|&v| ln_gamma(v + 1.0)).sum::<f64>(),
        ModelSpec::MultinomialDirichlet { .. } => {
            let total: f64 = x.iter().sum();
            ln_gamma(total + 1.0) - x.iter().map(|&v| ln_gamma(v + 1.0)).sum::<f64>()
        }
    }
}

/// Change in integrated log-likelihood when two clusters are merged.
pub fn delta_lobs(tg: &SuffStats, th: &SuffStats, spec: &ModelSpec) -> Result<f64> {
    let merged = combine(tg, th)?;
    Ok(log_marginal(&merged, spec)? - log_marginal(tg, spec)? - log_marginal(th, spec)?)
}

/// Smallest `beta` used when a feature column has (near) zero variance.
pub const BETA_FLOOR: f64 = 1e-8;

/// Data-driven default hyperparameters.
///
/// Gaussian: `tau = 0.01`, `kappa = 1`, `beta_d = 0.1 s_d²` (unbiased sample
/// variance, floored at [`BETA_FLOOR`]) and `mu0` the column means.
/// Poisson: `shape = 1`, `rate = 1 / column mean` (prior mean equal to the
/// data mean). Multinomial: unit concentrations.
pub fn default_hyperparams(x: ArrayView2<'_, f64>, variant: Variant) -> Result<ModelSpec> {
    let (rows, dims) = x.dim();
    if dims == 0 {
        return Err(Error::EmptyInput("data has no feature columns"));
    }
    match variant {
        Variant::GaussianDiag => {
            if rows < 2 {
                return Err(Error::EmptyInput("variance-based defaults need at least two rows"));
            }
            let mu0: Vec<f64> = x.mean_axis(Axis(0)).expect("rows > 0").to_vec();
            let beta = x
                .axis_iter(Axis(1))
                .enumerate()
                .map(|(d, col)| {
                    let var = col.var(1.0);
                    let b = 0.1 * var;
                    if b < BETA_FLOOR || !b.is_finite() {
                        log::warn!("feature column {d} has zero variance; beta floored at {BETA_FLOOR:e}");
                        BETA_FLOOR
                    } else {
                        b
                    }
                })
                .collect();
            ModelSpec::gaussian_diag(mu0, 0.01, 1.0, beta)
        }
        Variant::PoissonGamma => {
            if rows == 0 {
                return Err(Error::EmptyInput("data has no rows"));
            }
            let rate = x
                .mean_axis(Axis(0))
                .expect("rows > 0")
                .iter()
                .map(|&m| 1.0 / m.max(BETA_FLOOR))
                .collect();
            ModelSpec::poisson_gamma(vec![1.0; dims], rate)
        }
        Variant::MultinomialDirichlet => ModelSpec::multinomial_dirichlet(vec![1.0; dims]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::{array, Array2};

    fn unit_gauss() -> ModelSpec {
        ModelSpec::gaussian_diag(vec![0.0], 1.0, 1.0, vec![1.0]).unwrap()
    }

    #[test]
    fn single_observation_stats() {
        let s = suff_stats(array![2.0].view(), &unit_gauss()).unwrap();
        assert_eq!((s.n(), s.sum(), s.sum_sq()), (1, &[2.0][..], &[4.0][..]));

        let multi = ModelSpec::multinomial_dirichlet(vec![1.0; 3]).unwrap();
        let s = suff_stats(array![1.0, 0.0, 2.0].view(), &multi).unwrap();
        assert_eq!((s.n(), s.sum()), (1, &[1.0, 0.0, 2.0][..]));

        let pois = ModelSpec::poisson_gamma(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(
            suff_stats(array![-1.0].view(), &pois),
            Err(Error::InvalidCount { value: -1.0 })
        );
        assert!(suff_stats(array![1.5].view(), &pois).is_err());
        assert!(matches!(
            suff_stats(array![1.0, 2.0].view(), &unit_gauss()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn combining_stats() {
        let spec = unit_gauss();
        let a = suff_stats(array![2.0].view(), &spec).unwrap();
        let b = suff_stats(array![0.0].view(), &spec).unwrap();
        assert_eq!(combine(&a, &SuffStats::empty(&spec)).unwrap(), a);
        let ab = combine(&a, &b).unwrap();
        assert_eq!((ab.n(), ab.sum(), ab.sum_sq()), (2, &[2.0][..], &[4.0][..]));
        let pois = ModelSpec::poisson_gamma(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(combine(&a, &SuffStats::empty(&pois)), Err(Error::ModelMismatch));
    }

    #[test]
    fn empty_cluster_has_zero_evidence() {
        for spec in [
            unit_gauss(),
            ModelSpec::poisson_gamma(vec![2.0], vec![0.5]).unwrap(),
            ModelSpec::multinomial_dirichlet(vec![1.0, 2.0]).unwrap(),
        ] {
            assert_eq!(log_marginal(&SuffStats::empty(&spec), &spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn gaussian_single_point_closed_form() {
        // tau = kappa = beta = 1: the predictive of one point is a Student-t
        // with 2 dof and squared scale 2, evaluated here at its centre.
        let spec = unit_gauss();
        let s = suff_stats(array![0.0].view(), &spec).unwrap();
        let full = log_marginal(&s, &spec).unwrap() + log_base_measure(array![0.0].view(), &spec);
        // t_{2κ}(0 | μ0, β(τ+1)/(κτ)) with 2κ = 2, scale² = 2
        let nu = 2.0f64;
        let scale2 = 2.0f64;
        let t0 = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0) - 0.5 * (nu * std::f64::consts::PI * scale2).ln();
        assert_abs_diff_eq!(full, t0, epsilon = 1e-12);
    }

    #[test]
    fn merge_signs() {
        let spec = unit_gauss();
        let a = suff_stats(array![0.5].view(), &spec).unwrap();
        assert!(delta_lobs(&a, &a, &spec).unwrap() > 0.0);
        let far = suff_stats(array![40.0].view(), &spec).unwrap();
        assert!(delta_lobs(&a, &far, &spec).unwrap() < 0.0);
        assert_eq!(delta_lobs(&a, &SuffStats::empty(&spec), &spec).unwrap(), 0.0);
    }

    #[test]
    fn defaults() {
        let x: Array2<f64> = array![[1.0, 5.0], [2.0, 5.0], [3.0, 5.0], [4.0, 5.0]];
        let spec = default_hyperparams(x.view(), Variant::GaussianDiag).unwrap();
        match spec {
            ModelSpec::GaussianDiag {
                mu0,
                tau,
                kappa,
                beta,
            } => {
                assert_eq!(tau, 0.01);
                assert_eq!(kappa, 1.0);
                assert_abs_diff_eq!(mu0[0], 2.5, epsilon = 1e-12);
                assert_abs_diff_eq!(beta[0], 0.1 * 5.0 / 3.0, epsilon = 1e-12);
                assert_eq!(beta[1], BETA_FLOOR);
            }
            _ => unreachable!(),
        }
        assert!(default_hyperparams(array![[1.0]].view(), Variant::GaussianDiag).is_err());
    }

    #[test]
    fn invalid_hyperparameters() {
        assert!(ModelSpec::gaussian_diag(vec![0.0], 0.0, 1.0, vec![1.0]).is_err());
        assert!(ModelSpec::gaussian_diag(vec![0.0], 1.0, 1.0, vec![-1.0]).is_err());
        assert!(ModelSpec::gaussian_diag(vec![0.0], 1.0, 1.0, vec![1.0, 1.0]).is_err());
        assert!(ModelSpec::poisson_gamma(vec![1.0], vec![0.0]).is_err());
        assert!(ModelSpec::multinomial_dirichlet(vec![1.0]).is_err());
    }
}
