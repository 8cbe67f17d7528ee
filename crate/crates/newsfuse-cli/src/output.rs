//! Report structures and rendering. Reports serialize every number rounded
//! to at most 10 significant digits, so identical runs produce byte-
//! identical JSON.

use serde::Serialize;

use newsfuse::{CombinedEstimate, EstimatorMetrics, ScenarioMetrics};

/// Rounds to at most 10 significant digits.
pub fn sig10(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}")
        .parse()
        .expect("round-trip of formatted float")
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub theta_est: f64,
    pub theta_est_var: f64,
    pub theta_hat: f64,
    pub theta_hat_var: f64,
    pub delta_hat: Vec<f64>,
    pub correction: f64,
    pub retained_eigs: usize,
    pub method: String,
    pub seed: u64,
}

impl EstimateReport {
    pub fn new(res: &CombinedEstimate, seed: u64) -> Self {
        Self {
            theta_est: sig10(res.theta_est),
            theta_est_var: sig10(res.theta_est_var),
            theta_hat: sig10(res.theta_hat),
            theta_hat_var: sig10(res.theta_hat_var),
            delta_hat: res.delta_hat.iter().copied().map(sig10).collect(),
            correction: sig10(res.correction),
            retained_eigs: res.retained_eigs,
            method: res.method.to_string(),
            seed,
        }
    }

    pub fn text(&self) -> String {
        let delta = self
            .delta_hat
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "method         {}\n\
             seed           {}\n\
             theta_est      {}\n\
             theta_est_var  {}\n\
             theta_hat      {}\n\
             theta_hat_var  {}\n\
             delta_hat      [{delta}]\n\
             correction     {}\n\
             retained_eigs  {}\n",
            self.method,
            self.seed,
            self.theta_est,
            self.theta_est_var,
            self.theta_hat,
            self.theta_hat_var,
            self.correction,
            self.retained_eigs,
        )
    }
}

#[derive(Debug, Serialize)]
pub struct NewsvendorReport {
    pub column: String,
    pub price: f64,
    pub cost: f64,
    pub model: String,
    pub critical_fractile: f64,
    pub order_quantity: f64,
}

impl NewsvendorReport {
    pub fn text(&self) -> String {
        format!(
            "column             {}\n\
             price              {}\n\
             cost               {}\n\
             model              {}\n\
             critical_fractile  {}\n\
             order_quantity     {}\n",
            self.column,
            self.price,
            self.cost,
            self.model,
            self.critical_fractile,
            self.order_quantity,
        )
    }
}

#[derive(Debug, Serialize)]
pub struct ColumnSummary {
    pub name: String,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Serialize)]
pub struct DescribeReport {
    pub columns: Vec<ColumnSummary>,
    pub correlation: Vec<Vec<f64>>,
}

impl DescribeReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<12} {:>6} {:>14} {:>16} {:>12} {:>12} {:>12}\n",
            "column", "n", "mean", "variance", "median", "min", "max"
        ));
        for c in &self.columns {
            out.push_str(&format!(
                "{:<12} {:>6} {:>14} {:>16} {:>12} {:>12} {:>12}\n",
                c.name, c.n, c.mean, c.variance, c.median, c.min, c.max
            ));
        }
        out.push_str("\ncorrelation\n");
        out.push_str(&format!("{:<12}", ""));
        for c in &self.columns {
            out.push_str(&format!(" {:>10}", c.name));
        }
        out.push('\n');
        for (i, c) in self.columns.iter().enumerate() {
            out.push_str(&format!("{:<12}", c.name));
            for v in &self.correlation[i] {
                out.push_str(&format!(" {v:>10}"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub true_theta: f64,
    pub estimators: Vec<EstimatorRow>,
}

#[derive(Debug, Serialize)]
pub struct EstimatorRow {
    pub estimator: String,
    pub mean: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub mean_reported_var: f64,
}

impl SimulateReport {
    pub fn new(metrics: &ScenarioMetrics) -> Self {
        let row = |name: &str, m: &EstimatorMetrics| EstimatorRow {
            estimator: name.to_string(),
            mean: sig10(m.mean),
            bias: sig10(m.bias),
            variance: sig10(m.variance),
            mse: sig10(m.mse),
            mean_reported_var: sig10(m.mean_reported_var),
        };
        Self {
            true_theta: sig10(metrics.true_theta),
            estimators: vec![
                row("theta_hat", &metrics.theta_hat),
                row("mvar", &metrics.mvar),
                row("mmse", &metrics.mmse),
            ],
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!("true_theta {}\n\n", self.true_theta);
        out.push_str(&format!(
            "{:<10} {:>14} {:>12} {:>14} {:>14} {:>18}\n",
            "estimator", "mean", "bias", "variance", "mse", "mean_reported_var"
        ));
        for r in &self.estimators {
            out.push_str(&format!(
                "{:<10} {:>14} {:>12} {:>14} {:>14} {:>18}\n",
                r.estimator, r.mean, r.bias, r.variance, r.mse, r.mean_reported_var
            ));
        }
        out
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}
