//! Monte Carlo validation harness: generates correlated synthetic demand,
//! reruns the estimators over many replications, and reports their
//! empirical bias, variance, and MSE.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::BootstrapSettings;
use crate::combine::{mmse, mvar, Problem};
use crate::dataset::Dataset;
use crate::normal::normal_inverse_cdf;
use crate::num::{cn, Real};
use crate::rng::{derive_seed, standard_normal, stream_rng, DOMAIN_SIM_DATA, DOMAIN_SIM_SEED};
use crate::stats::StatisticDescriptor;
use crate::{AdditionalSource, Error, Result};

/// One synthetic external source: which statistic it reports, how far its
/// report is offset from the true value (the planted bias), the variance it
/// claims, and whether the estimator should treat it as possibly biased.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct SourceSpec<R: Real = f64> {
    pub statistic: StatisticDescriptor<R>,
    pub bias: R,
    pub reported_variance: R,
    #[serde(default)]
    pub biased: bool,
}

/// A complete simulation setup: the bivariate-normal demand model for
/// columns `A` and `B`, the target fractile, the synthetic sources, and the
/// replication budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct Scenario<R: Real = f64> {
    pub n: usize,
    pub mu_a: R,
    pub mu_b: R,
    pub sigma_a: R,
    pub sigma_b: R,
    pub rho: R,
    pub fractile_level: R,
    pub sources: Vec<SourceSpec<R>>,
    pub replications: usize,
    pub base_seed: u64,
    #[serde(default = "default_sim_nboots")]
    pub nboots: usize,
    #[serde(default = "default_eig_cutoff")]
    pub eig_cutoff: R,
}

fn default_sim_nboots() -> usize {
    500
}

fn default_eig_cutoff<R: Real>() -> R {
    R::one()
}

impl<R: Real> Scenario<R> {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInput(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if self.replications < 100 {
            return Err(Error::InvalidInput(format!(
                "replications must be at least 100, got {}",
                self.replications
            )));
        }
        if !(self.sigma_a > R::zero() && self.sigma_b > R::zero()) {
            return Err(Error::InvalidInput("demand sds must be positive".into()));
        }
        if !(self.rho.abs() < R::one()) {
            return Err(Error::InvalidInput(format!(
                "correlation must lie strictly in (-1, 1), got {}",
                self.rho
            )));
        }
        if !(self.fractile_level > R::zero() && self.fractile_level < R::one()) {
            return Err(Error::InvalidInput(format!(
                "fractile_level must lie in (0, 1), got {}",
                self.fractile_level
            )));
        }
        if self.sources.is_empty() {
            return Err(Error::InvalidInput(
                "at least one source spec required".into(),
            ));
        }
        if self.nboots < 2 {
            return Err(Error::InvalidInput(format!(
                "nboots must be at least 2, got {}",
                self.nboots
            )));
        }
        if !(self.eig_cutoff > R::zero() && self.eig_cutoff <= R::one()) {
            return Err(Error::InvalidInput(format!(
                "eig_cutoff must lie in (0, 1], got {}",
                self.eig_cutoff
            )));
        }
        for spec in &self.sources {
            if !(spec.reported_variance >= R::zero()) {
                return Err(Error::InvalidInput("reported_variance must be >= 0".into()));
            }
            self.true_statistic_value(&spec.statistic)?;
        }
        Ok(())
    }

    /// The analytic value of θ under the scenario's demand model.
    pub fn true_theta(&self) -> Result<R> {
        Ok(self.mu_a + self.sigma_a * normal_inverse_cdf(self.fractile_level)?)
    }

    /// Analytic value of a statistic under the demand model, used to plant
    /// the sources' reported values.
    fn true_statistic_value(&self, s: &StatisticDescriptor<R>) -> Result<R> {
        let (mu, sigma) = match s.column() {
            "A" => (self.mu_a, self.sigma_a),
            "B" => (self.mu_b, self.sigma_b),
            other => {
                return Err(Error::InvalidInput(format!(
                    "scenario sources must target column `A` or `B`, got `{other}`"
                )))
            }
        };
        Ok(match s {
            StatisticDescriptor::Mean { .. } | StatisticDescriptor::Median { .. } => mu,
            StatisticDescriptor::EmpiricalQuantile { level, .. }
            | StatisticDescriptor::NormalQuantile { level, .. } => {
                mu + sigma * normal_inverse_cdf(*level)?
            }
        })
    }

    fn problem(&self) -> Result<Problem<R>> {
        let sources = self
            .sources
            .iter()
            .map(|spec| {
                Ok(AdditionalSource {
                    statistic: spec.statistic.clone(),
                    reported_value: self.true_statistic_value(&spec.statistic)? + spec.bias,
                    reported_variance: spec.reported_variance,
                    biased: spec.biased,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Problem {
            target: StatisticDescriptor::NormalQuantile {
                column: "A".into(),
                level: self.fractile_level,
            },
            sources,
        })
    }

    fn with_n(&self, n: usize) -> Self {
        let mut s = self.clone();
        s.n = n;
        s
    }
}

/// Empirical moments of one estimator over the replications. Variance and
/// MSE use the population divisor, so mse = variance + bias² holds as an
/// identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "R: Serialize"))]
pub struct EstimatorMetrics<R: Real = f64> {
    pub mean: R,
    pub bias: R,
    pub variance: R,
    pub mse: R,
    /// Average of the variance the estimator itself reported.
    pub mean_reported_var: R,
}

/// Metrics for the empirical estimator and both combination estimators.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "R: Serialize"))]
pub struct ScenarioMetrics<R: Real = f64> {
    pub true_theta: R,
    pub theta_hat: EstimatorMetrics<R>,
    pub mvar: EstimatorMetrics<R>,
    pub mmse: EstimatorMetrics<R>,
}

/// One row of a [`convergence_sweep`]: √n- and n-scaled behaviour at a
/// given sample size.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "R: Serialize"))]
pub struct SweepRow<R: Real = f64> {
    pub n: usize,
    /// median |θ̂⁰(δ̂) − θ̂| · √n over the replications.
    pub scaled_discrepancy: R,
    /// n · var(θ̂).
    pub scaled_var_theta_hat: R,
    /// n · var(θ̂⁰(0)).
    pub scaled_var_mvar: R,
    /// n · var(θ̂⁰(δ̂)).
    pub scaled_var_mmse: R,
}

/// Combination estimate with a caller-supplied fixed bias vector replacing
/// the estimated discrepancy in the weighting. Useful for studying how a
/// known planted bias would affect the procedure.
pub fn fixed_bias_estimate<R: Real>(
    d: &Dataset<R>,
    p: &Problem<R>,
    settings: &BootstrapSettings,
    eig_cutoff: R,
    delta: &[R],
) -> Result<crate::combine::CombinedEstimate<R>> {
    crate::combine::combine_with_fixed_bias(d, p, settings, eig_cutoff, delta)
}

/// Bivariate-normal demand sample for one replication, columns `A` and `B`.
pub fn generate_demand<R: Real>(s: &Scenario<R>, replication: u64) -> Result<Dataset<R>> {
    let mut rng = stream_rng(s.base_seed, replication, 0, DOMAIN_SIM_DATA);
    let cross = (R::one() - s.rho * s.rho).sqrt();
    let mut a = Vec::with_capacity(s.n);
    let mut b = Vec::with_capacity(s.n);
    for _ in 0..s.n {
        let z1: R = standard_normal(&mut rng);
        let z2: R = standard_normal(&mut rng);
        a.push(s.mu_a + s.sigma_a * z1);
        b.push(s.mu_b + s.sigma_b * (s.rho * z1 + cross * z2));
    }
    Dataset::from_columns(vec![("A".into(), a), ("B".into(), b)])
}

struct ReplicateEstimates<R> {
    theta_hat: R,
    theta_hat_var: R,
    mvar_est: R,
    mvar_var: R,
    mmse_est: R,
    mmse_var: R,
}

fn replicate_estimates<R: Real>(
    s: &Scenario<R>,
    problem: &Problem<R>,
    replication: u64,
) -> Result<ReplicateEstimates<R>> {
    let data = generate_demand(s, replication)?;
    let settings = BootstrapSettings {
        nboots: s.nboots,
        seed: derive_seed(s.base_seed, replication, DOMAIN_SIM_SEED),
    };
    let mv = mvar(&data, problem, &settings, s.eig_cutoff)?;
    let mm = mmse(&data, problem, &settings, s.eig_cutoff)?;
    Ok(ReplicateEstimates {
        theta_hat: mv.theta_hat,
        theta_hat_var: mv.theta_hat_var,
        mvar_est: mv.theta_est,
        mvar_var: mv.theta_est_var,
        mmse_est: mm.theta_est,
        mmse_var: mm.theta_est_var,
    })
}

fn collect_replicates<R: Real>(s: &Scenario<R>) -> Result<Vec<ReplicateEstimates<R>>> {
    s.validate()?;
    let problem = s.problem()?;
    (0..s.replications)
        .into_par_iter()
        .map(|r| replicate_estimates(s, &problem, r as u64))
        .collect()
}

fn metrics_over<R: Real>(
    values: impl Iterator<Item = R> + Clone,
    reported: impl Iterator<Item = R>,
    count: usize,
    true_theta: R,
) -> EstimatorMetrics<R> {
    let nr = cn::<R>(count);
    let mut mean = R::zero();
    for v in values.clone() {
        mean += v;
    }
    mean /= nr;
    let mut variance = R::zero();
    let mut mse = R::zero();
    for v in values {
        let d = v - mean;
        variance += d * d;
        let e = v - true_theta;
        mse += e * e;
    }
    variance /= nr;
    mse /= nr;
    let mut mean_reported_var = R::zero();
    for v in reported {
        mean_reported_var += v;
    }
    mean_reported_var /= nr;
    EstimatorMetrics {
        mean,
        bias: mean - true_theta,
        variance,
        mse,
        mean_reported_var,
    }
}

/// Runs the scenario and aggregates per-estimator metrics.
pub fn run_scenario<R: Real>(s: &Scenario<R>) -> Result<ScenarioMetrics<R>> {
    let reps = collect_replicates(s)?;
    let true_theta = s.true_theta()?;
    let count = reps.len();
    Ok(ScenarioMetrics {
        true_theta,
        theta_hat: metrics_over(
            reps.iter().map(|r| r.theta_hat),
            reps.iter().map(|r| r.theta_hat_var),
            count,
            true_theta,
        ),
        mvar: metrics_over(
            reps.iter().map(|r| r.mvar_est),
            reps.iter().map(|r| r.mvar_var),
            count,
            true_theta,
        ),
        mmse: metrics_over(
            reps.iter().map(|r| r.mmse_est),
            reps.iter().map(|r| r.mmse_var),
            count,
            true_theta,
        ),
    })
}

/// Reruns the scenario over a grid of sample sizes and reports the scaled
/// discrepancy and variance behaviour at each size.
pub fn convergence_sweep<R: Real>(s: &Scenario<R>, n_grid: &[usize]) -> Result<Vec<SweepRow<R>>> {
    if n_grid.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "n_grid needs at least 3 entries, got {}",
            n_grid.len()
        )));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "n_grid must be strictly increasing".into(),
        ));
    }
    n_grid
        .iter()
        .map(|&n| {
            let scenario = s.with_n(n);
            let reps = collect_replicates(&scenario)?;
            let nr = cn::<R>(n);
            let sqrt_n = nr.sqrt();
            let deviations: Vec<R> = reps
                .iter()
                .map(|r| (r.mmse_est - r.theta_hat).abs() * sqrt_n)
                .collect();
            let scaled_discrepancy = crate::stats::median(&deviations)?;
            let var_of = |extract: fn(&ReplicateEstimates<R>) -> R| {
                let count = cn::<R>(reps.len());
                let mut mean = R::zero();
                for r in &reps {
                    mean += extract(r);
                }
                mean /= count;
                let mut var = R::zero();
                for r in &reps {
                    let d = extract(r) - mean;
                    var += d * d;
                }
                var / count
            };
            Ok(SweepRow {
                n,
                scaled_discrepancy,
                scaled_var_theta_hat: nr * var_of(|r| r.theta_hat),
                scaled_var_mvar: nr * var_of(|r| r.mvar_est),
                scaled_var_mmse: nr * var_of(|r| r.mmse_est),
            })
        })
        .collect()
}
