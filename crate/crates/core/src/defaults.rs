//! Every numeric default in one place. The CLI starts from
//! [`NumericDefaults::default`] and overrides individual fields from flags;
//! `tentropy defaults` prints the table. The CGF sampling window used by
//! numeric conjugation is fixed; see [`crate::cramer::CGF_GRID_POINTS`].

use serde::{Deserialize, Serialize};

use crate::{tentropy, tilting};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericDefaults {
    /// Truncation `N` for the sequence problems.
    pub truncation: usize,
    /// Absolute tail tolerance for operator power series.
    pub series_tol: f64,
    /// Values of `λ*` above the cap are reported as `+∞`.
    pub lambda_star_cap: f64,
    /// Mass grid `[0, a_max]` for duality reconstruction.
    pub duality_a_max: f64,
    pub duality_a_points: usize,
    /// Seed for randomised sweeps.
    pub seed: u64,
}

impl Default for NumericDefaults {
    fn default() -> Self {
        Self {
            truncation: tilting::DEFAULT_TRUNCATION,
            series_tol: 1e-12,
            lambda_star_cap: tentropy::DEFAULT_CAP,
            duality_a_max: 20.0,
            duality_a_points: 2001,
            seed: 7,
        }
    }
}

impl NumericDefaults {
    pub fn duality_grid(&self) -> Vec<f64> {
        crate::conjugate::linspace(0.0, self.duality_a_max, self.duality_a_points.max(2))
    }
}
