use serde::Serialize;
use wavesym_core::equations::{CatalogOptions, Params};
use wavesym_core::opcalc::{sample_momenta, ExclusionRules, MomentumPoint};
use wavesym_core::symmetry::SolveConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Md,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub holdout: usize,
    pub tol: f64,
    pub format: Format,
    pub mass: f64,
    pub kappa: f64,
    pub corrupt_chi: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 12,
            holdout: 4,
            tol: 1e-9,
            format: Format::Md,
            mass: 1.0,
            kappa: 1.0,
            corrupt_chi: false,
        }
    }
}

/// Minimum fit samples for a classification run.
pub const MIN_CLASSIFY_SAMPLES: usize = 8;

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0 && self.tol <= 1e-6) {
            return Err(format!("--tol must lie in (0, 1e-6], got {:e}", self.tol));
        }
        if self.samples == 0 {
            return Err("--samples must be positive".into());
        }
        self.params().validate().map_err(|e| e.to_string())
    }

    pub fn params(&self) -> Params {
        Params {
            mass: self.mass,
            kappa: self.kappa,
        }
    }

    pub fn options(&self) -> CatalogOptions {
        CatalogOptions {
            corrupt_chi: self.corrupt_chi,
        }
    }

    pub fn solve(&self) -> SolveConfig {
        SolveConfig {
            n_fit: self.samples,
            n_holdout: self.holdout,
            seed: self.seed,
        }
    }

    pub fn momenta(&self, d: usize) -> Vec<MomentumPoint> {
        sample_momenta(d, self.samples, self.seed, &ExclusionRules::default())
    }
}
