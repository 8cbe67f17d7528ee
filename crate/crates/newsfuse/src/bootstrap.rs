//! Seeded non-parametric bootstrap that jointly estimates the covariance of
//! the target statistic and the auxiliary statistics.
//!
//! All statistics of one replicate are evaluated on the same resample, so
//! the cross-covariances come from a genuinely joint distribution.
//! Replicates run in parallel; covariances are reduced in replicate order,
//! which keeps results bit-identical regardless of thread count.

use rand::Rng;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::linalg::SymMatrix;
use crate::num::{cn, Real};
use crate::rng::{stream_rng, DOMAIN_BOOTSTRAP};
use crate::stats::{eval_statistic, StatisticDescriptor};
use crate::{Error, Result};

const MAX_ATTEMPTS: u64 = 100;

/// Resample count and seed for a bootstrap run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BootstrapSettings {
    pub nboots: usize,
    pub seed: u64,
}

impl Default for BootstrapSettings {
    fn default() -> Self {
        Self {
            nboots: 5000,
            seed: 0,
        }
    }
}

/// Jointly bootstrapped covariance pieces: var(θ̂), cov(θ̂, η̂), cov(η̂).
/// `cov_eta` is `None` exactly when the run had no auxiliary statistics.
#[derive(Debug, Clone)]
pub struct BootstrapCov<R: Real = f64> {
    pub var_theta: R,
    pub cov_theta_eta: Vec<R>,
    pub cov_eta: Option<SymMatrix<R>>,
}

/// The row indices replicate `replicate` draws on attempt `attempt`:
/// `n_rows` i.i.d. uniform draws with replacement.
pub fn replicate_indices(seed: u64, replicate: u64, attempt: u64, n_rows: usize) -> Vec<usize> {
    let mut rng = stream_rng(seed, replicate, attempt, DOMAIN_BOOTSTRAP);
    (0..n_rows).map(|_| rng.gen_range(0..n_rows)).collect()
}

/// Estimates the joint covariance of `target` and `sources` by resampling
/// dataset rows `settings.nboots` times. Sample covariances use divisor
/// nboots−1. A replicate whose resample leaves some statistic undefined is
/// retried on its next sub-stream; after 100 consecutive failures the whole
/// run aborts with a diagnostic.
pub fn bootstrap_joint<R: Real>(
    d: &Dataset<R>,
    target: &StatisticDescriptor<R>,
    sources: &[StatisticDescriptor<R>],
    settings: &BootstrapSettings,
) -> Result<BootstrapCov<R>> {
    if settings.nboots < 2 {
        return Err(Error::InvalidInput(format!(
            "nboots must be at least 2, got {}",
            settings.nboots
        )));
    }
    target.validate(d)?;
    for s in sources {
        s.validate(d)?;
    }

    let k = 1 + sources.len();
    let rows: Vec<Vec<R>> = (0..settings.nboots)
        .into_par_iter()
        .map(|b| replicate_values(d, target, sources, settings.seed, b))
        .collect::<Result<_>>()?;

    // Sequential two-pass reduction in replicate order.
    let nb = cn::<R>(settings.nboots);
    let denom = cn::<R>(settings.nboots - 1);
    let mut means = vec![R::zero(); k];
    for row in &rows {
        for (m, &v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= nb;
    }
    let mut cov = vec![R::zero(); k * k];
    for row in &rows {
        for i in 0..k {
            let di = row[i] - means[i];
            for j in i..k {
                cov[i * k + j] += di * (row[j] - means[j]);
            }
        }
    }
    for v in &mut cov {
        *v /= denom;
    }

    let m = sources.len();
    let cov_eta = if m > 0 {
        Some(SymMatrix::from_fn(m, |i, j| {
            let (a, b) = if i <= j {
                (i + 1, j + 1)
            } else {
                (j + 1, i + 1)
            };
            cov[a * k + b]
        })?)
    } else {
        None
    };
    Ok(BootstrapCov {
        var_theta: cov[0],
        cov_theta_eta: (0..m).map(|j| cov[j + 1]).collect(),
        cov_eta,
    })
}

fn replicate_values<R: Real>(
    d: &Dataset<R>,
    target: &StatisticDescriptor<R>,
    sources: &[StatisticDescriptor<R>],
    seed: u64,
    replicate: usize,
) -> Result<Vec<R>> {
    let mut last_error = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let indices = replicate_indices(seed, replicate as u64, attempt, d.n_rows());
        let resample = d.resample_rows(&indices)?;
        let mut values = Vec::with_capacity(1 + sources.len());
        let mut failed = false;
        for s in std::iter::once(target).chain(sources) {
            match eval_statistic(s, &resample) {
                Ok(v) => values.push(v),
                // only degenerate resamples are retried; anything else is a
                // real error
                Err(Error::Degenerate(msg)) => {
                    last_error = msg;
                    failed = true;
                    break;
                }
                Err(other) => return Err(other),
            }
        }
        if !failed {
            return Ok(values);
        }
    }
    Err(Error::BootstrapDegenerate {
        replicate,
        attempts: MAX_ATTEMPTS as usize,
        message: last_error,
    })
}
