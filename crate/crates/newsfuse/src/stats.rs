//! Scalar statistics evaluated on dataset columns.
//!
//! A [`StatisticDescriptor`] is a declarative recipe for a scalar statistic;
//! [`eval_statistic`] evaluates it on any [`Dataset`]. The same descriptors
//! describe both the estimation target and the auxiliary statistics that
//! external sources report on.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::normal::normal_inverse_cdf;
use crate::num::{c, cn, Real};
use crate::{Error, Result};

/// Recipe for a scalar statistic of one column.
///
/// Serializes as `{"kind": "...", "column": "...", "level": ...}` with the
/// `level` field present exactly for the two quantile kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "snake_case",
    bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>")
)]
pub enum StatisticDescriptor<R: Real = f64> {
    Mean {
        column: String,
    },
    Median {
        column: String,
    },
    EmpiricalQuantile {
        column: String,
        level: R,
    },
    /// Normal-model quantile: mean + sd · Φ⁻¹(level), sd with divisor n−1.
    NormalQuantile {
        column: String,
        level: R,
    },
}

impl<R: Real> StatisticDescriptor<R> {
    pub fn column(&self) -> &str {
        match self {
            Self::Mean { column }
            | Self::Median { column }
            | Self::EmpiricalQuantile { column, .. }
            | Self::NormalQuantile { column, .. } => column,
        }
    }

    pub fn level(&self) -> Option<R> {
        match self {
            Self::EmpiricalQuantile { level, .. } | Self::NormalQuantile { level, .. } => {
                Some(*level)
            }
            _ => None,
        }
    }

    /// Checks the descriptor against a dataset: the column must exist and a
    /// quantile level must lie strictly in (0, 1).
    pub fn validate(&self, d: &Dataset<R>) -> Result<()> {
        d.column(self.column())?;
        if let Some(level) = self.level() {
            if !(level > R::zero() && level < R::one()) {
                return Err(Error::InvalidDescriptor(format!(
                    "quantile level must lie strictly in (0, 1), got {level}"
                )));
            }
        }
        Ok(())
    }
}

/// Evaluates a statistic descriptor on a dataset.
pub fn eval_statistic<R: Real>(s: &StatisticDescriptor<R>, d: &Dataset<R>) -> Result<R> {
    s.validate(d)?;
    let values = d.column(s.column())?;
    match s {
        StatisticDescriptor::Mean { .. } => Ok(mean(values)),
        StatisticDescriptor::Median { .. } => median(values),
        StatisticDescriptor::EmpiricalQuantile { level, .. } => empirical_quantile(values, *level),
        StatisticDescriptor::NormalQuantile { level, .. } => {
            let sd = sample_variance(values)?.sqrt();
            if !(sd > R::zero()) {
                return Err(Error::Degenerate(format!(
                    "column `{}` has zero variance; normal quantile undefined",
                    s.column()
                )));
            }
            Ok(mean(values) + sd * normal_inverse_cdf(*level)?)
        }
    }
}

/// Arithmetic mean of a non-empty slice.
pub fn mean<R: Real>(values: &[R]) -> R {
    let mut sum = R::zero();
    for &v in values {
        sum += v;
    }
    sum / cn(values.len())
}

/// Unbiased sample variance (divisor n−1). Needs at least two values.
pub fn sample_variance<R: Real>(values: &[R]) -> Result<R> {
    if values.len() < 2 {
        return Err(Error::Degenerate(format!(
            "sample variance needs at least 2 values, got {}",
            values.len()
        )));
    }
    let m = mean(values);
    let mut sum = R::zero();
    for &v in values {
        let d = v - m;
        sum += d * d;
    }
    Ok(sum / cn(values.len() - 1))
}

/// Sample median: middle order statistic, or the midpoint of the two middle
/// order statistics for even n.
pub fn median<R: Real>(values: &[R]) -> Result<R> {
    if values.is_empty() {
        return Err(Error::Degenerate("median of an empty sample".into()));
    }
    let sorted = sorted_copy(values);
    let n = sorted.len();
    if n % 2 == 1 {
        Ok(sorted[n / 2])
    } else {
        let lo = sorted[n / 2 - 1];
        let hi = sorted[n / 2];
        // Same interpolation form as `empirical_quantile` at level 0.5, so
        // the two agree bit for bit on even samples.
        Ok(lo + c::<R>(0.5) * (hi - lo))
    }
}

/// Order-statistic quantile with linear interpolation at rank
/// h = (n−1)·level + 1: value = x₍⌊h⌋₎ + (h−⌊h⌋)(x₍⌊h⌋₊₁₎ − x₍⌊h⌋₎).
pub fn empirical_quantile<R: Real>(values: &[R], level: R) -> Result<R> {
    if values.is_empty() {
        return Err(Error::Degenerate("quantile of an empty sample".into()));
    }
    if !(level > R::zero() && level < R::one()) {
        return Err(Error::InvalidDescriptor(format!(
            "quantile level must lie strictly in (0, 1), got {level}"
        )));
    }
    let sorted = sorted_copy(values);
    let n = sorted.len();
    if n == 1 {
        return Ok(sorted[0]);
    }
    let h = cn::<R>(n - 1) * level + R::one();
    let j = h.floor().to_usize().unwrap_or(1).clamp(1, n - 1);
    let g = h - cn(j);
    Ok(sorted[j - 1] + g * (sorted[j] - sorted[j - 1]))
}

fn sorted_copy<R: Real>(values: &[R]) -> Vec<R> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    sorted
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn sales() -> Dataset {
        Dataset::load_csv(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/sales_ab.csv"))
            .unwrap()
    }

    fn col(name: &str) -> StatisticDescriptor {
        StatisticDescriptor::Mean {
            column: name.into(),
        }
    }

    #[test]
    fn mean_and_variance_of_column_a() {
        let d = sales();
        let m = eval_statistic(&col("A"), &d).unwrap();
        assert!((m - 4095.694).abs() < 0.001, "mean(A) = {m}");
        let v = sample_variance(d.column("A").unwrap()).unwrap();
        assert!((v - 1791703.0).abs() < 1.0, "var(A) = {v}");
    }

    #[test]
    fn normal_quantile_of_column_a() {
        let d = sales();
        let s = StatisticDescriptor::NormalQuantile {
            column: "A".into(),
            level: 0.2326,
        };
        let q = eval_statistic(&s, &d).unwrap();
        assert!((q - 3118.14).abs() < 0.01, "Q = {q}");
    }

    #[test]
    fn empirical_quantile_of_column_a() {
        let d = sales();
        let s = StatisticDescriptor::EmpiricalQuantile {
            column: "A".into(),
            level: 0.2326,
        };
        let q = eval_statistic(&s, &d).unwrap();
        assert!((q - 2859.34).abs() < 0.01, "Q = {q}");
    }

    #[test]
    fn column_b_mean_and_median() {
        let d = sales();
        let m = eval_statistic(&col("B"), &d).unwrap();
        assert_eq!(m, 128.0);
        let s = StatisticDescriptor::Median { column: "B".into() };
        assert_eq!(eval_statistic(&s, &d).unwrap(), 103.5);
    }

    #[test]
    fn unknown_column_rejected() {
        let err = eval_statistic(&col("Z"), &sales()).unwrap_err();
        assert!(matches!(err, Error::UnknownColumn(name) if name == "Z"));
    }

    #[test]
    fn zero_variance_normal_quantile_rejected() {
        let d: Dataset = Dataset::from_columns(vec![("x".into(), vec![5.0, 5.0, 5.0])]).unwrap();
        let s = StatisticDescriptor::NormalQuantile {
            column: "x".into(),
            level: 0.3,
        };
        assert!(matches!(eval_statistic(&s, &d), Err(Error::Degenerate(_))));
    }

    #[test]
    fn bad_level_rejected() {
        let d = sales();
        for level in [0.0, 1.0, -0.5, 2.0] {
            let s = StatisticDescriptor::EmpiricalQuantile {
                column: "A".into(),
                level,
            };
            assert!(eval_statistic(&s, &d).is_err(), "level {level}");
        }
    }

    #[test]
    fn descriptor_json_round_trip() {
        let s = StatisticDescriptor::NormalQuantile {
            column: "A".into(),
            level: 0.2326,
        };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"normal_quantile","column":"A","level":0.2326}"#
        );
        let back: StatisticDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let m: StatisticDescriptor =
            serde_json::from_str(r#"{"kind":"mean","column":"B"}"#).unwrap();
        assert_eq!(m, col("B"));
    }

    #[test]
    fn normal_quantile_is_mean_plus_sd_times_z() {
        let d = sales();
        let s = StatisticDescriptor::NormalQuantile {
            column: "A".into(),
            level: 0.2326,
        };
        let q = eval_statistic(&s, &d).unwrap();
        let values = d.column("A").unwrap();
        let expect = mean(values)
            + sample_variance(values).unwrap().sqrt() * normal_inverse_cdf(0.2326).unwrap();
        assert_eq!(q, expect);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn data_strategy() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(1.0f64..1e6, 2..200)
        }

        proptest! {
            #[test]
            fn mean_is_translation_equivariant(xs in data_strategy(), shift in -1e5f64..1e5) {
                let shifted: Vec<f64> = xs.iter().map(|v| v + shift).collect();
                let lhs = mean(&shifted);
                let rhs = mean(&xs) + shift;
                prop_assert!((lhs - rhs).abs() <= 1e-6 * (1.0 + rhs.abs()));
            }

            #[test]
            fn quantiles_are_monotone_in_level(
                xs in data_strategy(),
                l1 in 0.01f64..0.99,
                l2 in 0.01f64..0.99,
            ) {
                let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
                let q_lo = empirical_quantile(&xs, lo).unwrap();
                let q_hi = empirical_quantile(&xs, hi).unwrap();
                prop_assert!(q_lo <= q_hi);
            }

            #[test]
            fn median_equals_quantile_at_half_for_even_n(
                xs in proptest::collection::vec(1.0f64..1e6, 2..100)
            ) {
                prop_assume!(xs.len() % 2 == 0);
                let m = median(&xs).unwrap();
                let q = empirical_quantile(&xs, 0.5).unwrap();
                prop_assert_eq!(m, q);
            }

            #[test]
            fn quantile_handles_ties(v in 1.0f64..100.0, level in 0.01f64..0.99) {
                let xs = vec![v; 12];
                prop_assert_eq!(empirical_quantile(&xs, level).unwrap(), v);
            }
        }
    }
}
