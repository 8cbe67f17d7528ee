//! Estimate configuration file schema and flag merging.

use std::path::Path;

use serde::Deserialize;

use newsfuse::{AdditionalSource, BootstrapSettings, Method, Problem, StatisticDescriptor};

use crate::CliError;

/// JSON configuration for `newsfuse estimate`. Command-line flags override
/// any value given here.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub target: StatisticDescriptor,
    #[serde(default)]
    pub sources: Vec<AdditionalSource>,
    #[serde(default)]
    pub method: Option<Method>,
    #[serde(default)]
    pub nboots: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub eig_cutoff: Option<f64>,
}

/// Fully resolved estimate run.
pub struct EstimateRun {
    pub problem: Problem,
    pub method: Method,
    pub settings: BootstrapSettings,
    pub eig_cutoff: f64,
}

impl EstimateConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn resolve(
        self,
        method: Option<Method>,
        nboots: Option<usize>,
        seed: Option<u64>,
        eig_cutoff: Option<f64>,
    ) -> EstimateRun {
        let defaults = BootstrapSettings::default();
        EstimateRun {
            problem: Problem {
                target: self.target,
                sources: self.sources,
            },
            method: method.or(self.method).unwrap_or(Method::Mvar),
            settings: BootstrapSettings {
                nboots: nboots.or(self.nboots).unwrap_or(defaults.nboots),
                seed: seed.or(self.seed).unwrap_or(defaults.seed),
            },
            eig_cutoff: eig_cutoff.or(self.eig_cutoff).unwrap_or(1.0),
        }
    }
}
