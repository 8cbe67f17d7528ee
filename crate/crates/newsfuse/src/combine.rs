//! Minimum-variance and minimum-MSE fusion of the empirical estimate with
//! uncertain external information.
//!
//! Both estimators live in the linear class θ̂ + λ·(η̂ − η̃): the empirical
//! estimate θ̂ is shifted along the discrepancy δ̂ = η̂ − η̃ between what the
//! data says about the auxiliary statistics and what the external sources
//! report. The optimal λ comes from jointly bootstrapped covariances:
//!
//! * [`mvar`] assumes every source is unbiased and minimizes variance;
//! * [`mmse`] additionally charges sources flagged as possibly biased with
//!   their squared estimated discrepancy, which automatically suppresses
//!   information that disagrees grossly with the data.
//!
//! Covariance convention: the jointly bootstrapped blocks (including the
//! squared-discrepancy charge for biased sources) are scaled by `1/n_rows`
//! before the externally reported variances are added, and `theta_hat_var`
//! is the bootstrap variance scaled the same way. The weighting matrix is
//! inverted with the spectral pseudo-inverse, so weakly definite covariance
//! estimates degrade gracefully instead of blowing up.

use serde::{Deserialize, Serialize};

use crate::bootstrap::{bootstrap_joint, BootstrapSettings};
use crate::dataset::Dataset;
use crate::linalg::{sym_eigen, SymMatrix};
use crate::num::{cn, Real};
use crate::stats::{eval_statistic, StatisticDescriptor};
use crate::{Error, Result};

/// Which combination estimator produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mvar,
    Mmse,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Mvar => "mvar",
            Method::Mmse => "mmse",
        })
    }
}

/// One piece of external information: a statistic, the value a source
/// reports for it, the variance of that report, and whether the source is
/// suspected of bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct AdditionalSource<R: Real = f64> {
    pub statistic: StatisticDescriptor<R>,
    pub reported_value: R,
    pub reported_variance: R,
    #[serde(default)]
    pub biased: bool,
}

/// Target statistic plus at least one additional source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct Problem<R: Real = f64> {
    pub target: StatisticDescriptor<R>,
    pub sources: Vec<AdditionalSource<R>>,
}

impl<R: Real> Problem<R> {
    pub fn validate(&self, d: &Dataset<R>) -> Result<()> {
        if self.sources.is_empty() {
            return Err(Error::InvalidInput(
                "at least one additional source required".into(),
            ));
        }
        self.target.validate(d)?;
        for (i, source) in self.sources.iter().enumerate() {
            source.statistic.validate(d)?;
            if !(source.reported_variance >= R::zero()) {
                return Err(Error::InvalidInput(format!(
                    "source {i}: reported_variance must be >= 0, got {}",
                    source.reported_variance
                )));
            }
            if !source.reported_value.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "source {i}: reported_value must be finite"
                )));
            }
        }
        for i in 0..self.sources.len() {
            for j in (i + 1)..self.sources.len() {
                let a = &self.sources[i];
                let b = &self.sources[j];
                if a.statistic == b.statistic && a.reported_value == b.reported_value {
                    return Err(Error::InvalidInput(format!(
                        "sources {i} and {j} duplicate the same (statistic, reported value) pair"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Result of a combination run, with enough diagnostics to see what the
/// additional information did.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "R: Serialize"))]
pub struct CombinedEstimate<R: Real = f64> {
    /// Combined estimate θ̂⁰.
    pub theta_est: R,
    /// Estimated variance of θ̂⁰ (clamped at zero).
    pub theta_est_var: R,
    /// Empirical estimate θ̂.
    pub theta_hat: R,
    /// Estimated variance of θ̂.
    pub theta_hat_var: R,
    /// δ̂ = η̂ − η̃ per source.
    pub delta_hat: Vec<R>,
    /// θ̂ − θ̂⁰.
    pub correction: R,
    /// Eigenvalues kept when inverting the weighting matrix.
    pub retained_eigs: usize,
    pub method: Method,
    /// True when Monte Carlo noise pushed the variance estimate below zero
    /// before clamping.
    pub variance_clamped: bool,
}

/// θ̂ + λ·δ̂, the generic member of the linear combination class. Exposed so
/// simulations can compare the optimal λ against arbitrary ones.
pub fn combine_with_lambda<R: Real>(theta_hat: R, lambda: &[R], delta_hat: &[R]) -> Result<R> {
    if lambda.len() != delta_hat.len() {
        return Err(Error::InvalidInput(format!(
            "lambda has length {}, delta_hat has length {}",
            lambda.len(),
            delta_hat.len()
        )));
    }
    let mut shift = R::zero();
    for (&l, &d) in lambda.iter().zip(delta_hat) {
        shift += l * d;
    }
    Ok(theta_hat + shift)
}

/// The relevance form c · V⁻ · cᵀ ≥ 0: how much variance the additional
/// information can remove from the target estimate.
pub fn relevance_form<R: Real>(c: &[R], v_inv: &SymMatrix<R>) -> Result<R> {
    v_inv.bilinear(c, c)
}

/// Minimum-variance combination: every source is taken as unbiased.
pub fn mvar<R: Real>(
    d: &Dataset<R>,
    p: &Problem<R>,
    settings: &BootstrapSettings,
    eig_cutoff: R,
) -> Result<CombinedEstimate<R>> {
    combine_impl(d, p, settings, eig_cutoff, BiasTerm::None, Method::Mvar)
}

/// Minimum-MSE combination: sources flagged `biased` are charged with their
/// estimated squared discrepancy, suppressing disinformation.
pub fn mmse<R: Real>(
    d: &Dataset<R>,
    p: &Problem<R>,
    settings: &BootstrapSettings,
    eig_cutoff: R,
) -> Result<CombinedEstimate<R>> {
    combine_impl(
        d,
        p,
        settings,
        eig_cutoff,
        BiasTerm::FromFlags,
        Method::Mmse,
    )
}

/// Combination with a caller-supplied fixed bias vector in place of the
/// estimated one. Used by the simulation harness to study bias impact.
pub(crate) fn combine_with_fixed_bias<R: Real>(
    d: &Dataset<R>,
    p: &Problem<R>,
    settings: &BootstrapSettings,
    eig_cutoff: R,
    delta: &[R],
) -> Result<CombinedEstimate<R>> {
    if delta.len() != p.sources.len() {
        return Err(Error::InvalidInput(format!(
            "fixed bias vector has length {}, problem has {} sources",
            delta.len(),
            p.sources.len()
        )));
    }
    combine_impl(
        d,
        p,
        settings,
        eig_cutoff,
        BiasTerm::Fixed(delta),
        Method::Mmse,
    )
}

enum BiasTerm<'a, R> {
    None,
    FromFlags,
    Fixed(&'a [R]),
}

fn combine_impl<R: Real>(
    d: &Dataset<R>,
    p: &Problem<R>,
    settings: &BootstrapSettings,
    eig_cutoff: R,
    bias: BiasTerm<'_, R>,
    method: Method,
) -> Result<CombinedEstimate<R>> {
    p.validate(d)?;
    let m = p.sources.len();

    let theta_hat = eval_statistic(&p.target, d)?;
    let eta_hat: Vec<R> = p
        .sources
        .iter()
        .map(|s| eval_statistic(&s.statistic, d))
        .collect::<Result<_>>()?;
    let delta_hat: Vec<R> = eta_hat
        .iter()
        .zip(&p.sources)
        .map(|(&hat, s)| hat - s.reported_value)
        .collect();

    let descriptors: Vec<StatisticDescriptor<R>> =
        p.sources.iter().map(|s| s.statistic.clone()).collect();
    let boot = bootstrap_joint(d, &p.target, &descriptors, settings)?;
    let cov_eta = boot.cov_eta.as_ref().expect("m >= 1 sources");

    let delta_b: Vec<R> = match bias {
        BiasTerm::None => vec![R::zero(); m],
        BiasTerm::FromFlags => delta_hat
            .iter()
            .zip(&p.sources)
            .map(|(&dh, s)| if s.biased { dh } else { R::zero() })
            .collect(),
        BiasTerm::Fixed(delta) => delta.to_vec(),
    };

    let inv_n = cn::<R>(d.n_rows()).recip();
    let weighting = SymMatrix::from_fn(m, |i, j| {
        let base = (cov_eta.get(i, j) + delta_b[i] * delta_b[j]) * inv_n;
        if i == j {
            base + p.sources[i].reported_variance
        } else {
            base
        }
    })?;

    let decomposition = sym_eigen(&weighting)?.retain(eig_cutoff)?;
    let v_inv = decomposition.pseudo_inverse();
    let c_vec: Vec<R> = boot.cov_theta_eta.iter().map(|&v| v * inv_n).collect();

    let correction = v_inv.bilinear(&c_vec, &delta_hat)?;
    let removed = relevance_form(&c_vec, &v_inv)?;
    let theta_hat_var = boot.var_theta * inv_n;
    let raw_var = theta_hat_var - removed;
    let variance_clamped = raw_var < R::zero();

    Ok(CombinedEstimate {
        theta_est: theta_hat - correction,
        theta_est_var: raw_var.max(R::zero()),
        theta_hat,
        theta_hat_var,
        delta_hat,
        correction,
        retained_eigs: decomposition.retained(),
        method,
        variance_clamped,
    })
}
