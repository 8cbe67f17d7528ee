//! Newsvendor inventory estimation with uncertain additional information.
//!
//! The library estimates optimal order quantities (critical-fractile
//! quantiles) from historical sales data and sharpens those estimates by
//! fusing them with externally reported statistics of related quantities:
//!
//! * [`dataset`] loads and resamples the historical sales table;
//! * [`stats`] evaluates the target and auxiliary statistics;
//! * [`bootstrap`] estimates their joint covariance with a deterministic
//!   seeded bootstrap;
//! * [`combine`] computes the minimum-variance ([`mvar`]) and minimum-MSE
//!   ([`mmse`]) combination estimators;
//! * [`newsvendor`] ties quantiles back to prices and expected profit;
//! * [`sim`] validates the estimators' MSE behaviour on synthetic data.
//!
//! All numeric types are generic over a [`Real`] scalar and default to
//! `f64`.
//!
//! ```
//! use newsfuse::{mvar, AdditionalSource, BootstrapSettings, Dataset, Problem,
//!                StatisticDescriptor};
//!
//! let data: Dataset = Dataset::load_csv(
//!     concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/sales_ab.csv"),
//! )?;
//!
//! // target: the normal-model demand quantile of product A at its
//! // critical fractile; source: another store reports its mean weekly
//! // sales of product B, with a variance for that report
//! let problem = Problem {
//!     target: StatisticDescriptor::NormalQuantile { column: "A".into(), level: 0.2326 },
//!     sources: vec![AdditionalSource {
//!         statistic: StatisticDescriptor::Mean { column: "B".into() },
//!         reported_value: 115.3846,
//!         reported_variance: 1912.8 / 260.0,
//!         biased: false,
//!     }],
//! };
//!
//! let settings = BootstrapSettings { nboots: 2000, seed: 1 };
//! let result = mvar(&data, &problem, &settings, 1.0)?;
//! assert!(result.theta_est < result.theta_hat);
//! assert!(result.theta_est_var <= result.theta_hat_var);
//! # Ok::<(), newsfuse::Error>(())
//! ```

// Validation uses negated comparisons (`!(x > 0.0)`) on purpose: unlike the
// inverted operator, they also trip on NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bootstrap;
pub mod combine;
pub mod dataset;
pub mod linalg;
pub mod newsvendor;
pub mod normal;
pub mod sim;
pub mod stats;

mod error;
mod num;
mod rng;

pub use bootstrap::{bootstrap_joint, replicate_indices, BootstrapCov, BootstrapSettings};
pub use combine::{
    combine_with_lambda, mmse, mvar, relevance_form, AdditionalSource, CombinedEstimate, Method,
    Problem,
};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use linalg::{spectral_pseudo_inverse, sym_eigen, SpectralDecomposition, SymMatrix};
pub use newsvendor::{
    critical_fractile, expected_profit, order_quantity, DemandModel, NewsvendorInstance,
};
pub use normal::{normal_cdf, normal_inverse_cdf, normal_pdf};
pub use num::Real;
pub use sim::{
    convergence_sweep, fixed_bias_estimate, generate_demand, run_scenario, EstimatorMetrics,
    Scenario, ScenarioMetrics, SourceSpec, SweepRow,
};
pub use stats::{
    empirical_quantile, eval_statistic, mean, median, sample_variance, StatisticDescriptor,
};
