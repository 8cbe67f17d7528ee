//! Newsvendor economics: critical fractile, optimal order quantity, and
//! expected profit under normally distributed demand.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::normal::{normal_cdf, normal_pdf};
use crate::num::Real;
use crate::stats::{eval_statistic, StatisticDescriptor};
use crate::{Error, Result};

/// Prices and demand column for a single-period inventory decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct NewsvendorInstance<R: Real = f64> {
    pub unit_price: R,
    pub unit_cost: R,
    pub demand_column: String,
}

impl<R: Real> NewsvendorInstance<R> {
    /// Requires 0 < cost < price; equal prices make the fractile degenerate.
    pub fn validate(&self) -> Result<()> {
        if !(self.unit_cost > R::zero() && self.unit_cost < self.unit_price) {
            return Err(Error::InvalidInput(format!(
                "need 0 < unit_cost < unit_price, got cost {} and price {}",
                self.unit_cost, self.unit_price
            )));
        }
        Ok(())
    }
}

/// Demand model used to turn the critical fractile into an order quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemandModel {
    /// Normal-model quantile from the column's mean and sd.
    Normal,
    /// Order-statistic quantile of the observed demand.
    Empirical,
}

/// (price − cost)/price, the profit-maximizing probability level.
pub fn critical_fractile<R: Real>(price: R, cost: R) -> Result<R> {
    if !(price > R::zero()) {
        return Err(Error::InvalidInput(format!(
            "price must be positive, got {price}"
        )));
    }
    if !(cost >= R::zero() && cost <= price) {
        return Err(Error::InvalidInput(format!(
            "cost must lie in [0, price], got cost {cost} with price {price}"
        )));
    }
    Ok((price - cost) / price)
}

/// Optimal order quantity: the demand quantile at the critical fractile,
/// under the chosen demand model.
pub fn order_quantity<R: Real>(
    d: &Dataset<R>,
    inst: &NewsvendorInstance<R>,
    model: DemandModel,
) -> Result<R> {
    inst.validate()?;
    let level = critical_fractile(inst.unit_price, inst.unit_cost)?;
    let descriptor = match model {
        DemandModel::Normal => StatisticDescriptor::NormalQuantile {
            column: inst.demand_column.clone(),
            level,
        },
        DemandModel::Empirical => StatisticDescriptor::EmpiricalQuantile {
            column: inst.demand_column.clone(),
            level,
        },
    };
    eval_statistic(&descriptor, d)
}

/// Expected profit p·E[min(D, q)] − c·q for D ~ Normal(mu, sigma²), using
/// E[min(D, q)] = q − (q − mu)·Φ(z) − sigma·φ(z) with z = (q − mu)/sigma.
pub fn expected_profit<R: Real>(inst: &NewsvendorInstance<R>, q: R, mu: R, sigma: R) -> Result<R> {
    if !(sigma > R::zero()) {
        return Err(Error::InvalidInput(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if !q.is_finite() {
        return Err(Error::InvalidInput(format!(
            "order quantity must be finite, got {q}"
        )));
    }
    let z = (q - mu) / sigma;
    let expected_sales = q - (q - mu) * normal_cdf(z) - sigma * normal_pdf(z);
    Ok(inst.unit_price * expected_sales - inst.unit_cost * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn sales() -> Dataset {
        Dataset::load_csv(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/sales_ab.csv"))
            .unwrap()
    }

    fn instance(price: f64, cost: f64) -> NewsvendorInstance {
        NewsvendorInstance {
            unit_price: price,
            unit_cost: cost,
            demand_column: "A".into(),
        }
    }

    #[test]
    fn fractile_for_product_a_prices() {
        let f: f64 = critical_fractile(860.0, 660.0).unwrap();
        assert!((f - 0.23256).abs() < 1e-5, "{f}");
    }

    #[test]
    fn fractile_for_product_b_prices() {
        let f: f64 = critical_fractile(490.0, 370.0).unwrap();
        assert!((f - 0.24489795918367346).abs() < 1e-12, "{f}");
    }

    #[test]
    fn zero_margin_gives_zero_fractile() {
        assert_eq!(critical_fractile(500.0, 500.0).unwrap(), 0.0);
    }

    #[test]
    fn invalid_prices_rejected() {
        assert!(critical_fractile(0.0, 0.0).is_err());
        assert!(critical_fractile(-10.0, 1.0).is_err());
        assert!(critical_fractile(100.0, 150.0).is_err());
    }

    #[test]
    fn order_quantities_near_reported_values() {
        // the exact fractile 0.232558... sits a hair below the rounded
        // 0.2326 level, so allow a couple of units around the round-level
        // quantiles 3118.14 / 2859.34
        let d = sales();
        let q_n = order_quantity(&d, &instance(860.0, 660.0), DemandModel::Normal).unwrap();
        assert!((q_n - 3118.14).abs() < 2.0, "normal Q = {q_n}");
        let q_e = order_quantity(&d, &instance(860.0, 660.0), DemandModel::Empirical).unwrap();
        assert!((q_e - 2859.34).abs() < 2.0, "empirical Q = {q_e}");
    }

    #[test]
    fn degenerate_demand_column_rejected_for_normal_model() {
        let d: Dataset = Dataset::from_columns(vec![("D".into(), vec![40.0; 8])]).unwrap();
        let inst = NewsvendorInstance {
            unit_price: 10.0,
            unit_cost: 6.0,
            demand_column: "D".into(),
        };
        assert!(matches!(
            order_quantity(&d, &inst, DemandModel::Normal),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn profit_bounded_by_perfect_information() {
        let inst = instance(860.0, 660.0);
        let (mu, sigma) = (4095.694, 1338.545);
        let bound = (inst.unit_price - inst.unit_cost) * mu;
        for i in 0..81 {
            let q = mu + sigma * (-10.0 + 0.25 * i as f64);
            let profit = expected_profit(&inst, q, mu, sigma).unwrap();
            assert!(
                profit <= bound,
                "q={q}: profit {profit} exceeds bound {bound}"
            );
        }
    }

    #[test]
    fn profit_peaks_at_the_critical_fractile_quantity() {
        let inst = instance(860.0, 660.0);
        let (mu, sigma) = (4095.694, 1338.545);
        let level = critical_fractile(inst.unit_price, inst.unit_cost).unwrap();
        let q_star = mu + sigma * crate::normal::normal_inverse_cdf(level).unwrap();
        let at = |q: f64| expected_profit(&inst, q, mu, sigma).unwrap();
        assert!(at(q_star) >= at(q_star + 0.05 * sigma));
        assert!(at(q_star) >= at(q_star - 0.05 * sigma));
    }

    #[test]
    fn profit_grid_maximum_sits_at_the_fractile() {
        let inst = instance(860.0, 660.0);
        let (mu, sigma) = (4095.694, 1338.545);
        let level = critical_fractile(inst.unit_price, inst.unit_cost).unwrap();
        let q_star = mu + sigma * crate::normal::normal_inverse_cdf(level).unwrap();
        let step = 8.0 * sigma / 100.0;
        let mut best = (f64::NEG_INFINITY, 0.0);
        let mut previous = f64::NEG_INFINITY;
        let mut slope_changes = 0;
        let mut rising = true;
        for i in 0..=100 {
            let q = mu - 4.0 * sigma + step * i as f64;
            let profit = expected_profit(&inst, q, mu, sigma).unwrap();
            if profit > best.0 {
                best = (profit, q);
            }
            // concavity: the sequence rises then falls, changing direction once
            if i > 0 {
                let now_rising = profit >= previous;
                if rising && !now_rising {
                    slope_changes += 1;
                }
                rising = now_rising;
            }
            previous = profit;
        }
        assert!(slope_changes <= 1, "profit grid is not unimodal");
        assert!(
            (best.1 - q_star).abs() <= step + 1e-9,
            "grid max {} vs q* {q_star}",
            best.1
        );
    }

    #[test]
    fn negative_sigma_rejected() {
        assert!(expected_profit(&instance(10.0, 5.0), 3.0, 10.0, 0.0).is_err());
        assert!(expected_profit(&instance(10.0, 5.0), 3.0, 10.0, -1.0).is_err());
    }

    #[test]
    fn order_quantity_monotone_in_prices() {
        let d = sales();
        for model in [DemandModel::Normal, DemandModel::Empirical] {
            // rising price raises the fractile and with it the quantile
            let mut previous = f64::NEG_INFINITY;
            for price in [700.0, 860.0, 1100.0, 2000.0] {
                let q = order_quantity(&d, &instance(price, 660.0), model).unwrap();
                assert!(q >= previous, "price {price}: Q {q} < {previous}");
                previous = q;
            }
            // rising cost does the opposite
            let mut previous = f64::INFINITY;
            for cost in [200.0, 400.0, 660.0, 800.0] {
                let q = order_quantity(&d, &instance(860.0, cost), model).unwrap();
                assert!(q <= previous, "cost {cost}: Q {q} > {previous}");
                previous = q;
            }
        }
    }
}
