use serde::Serialize;

use super::DistributionSpec;
use crate::numeric::{ln_factorials, log_sum_exp};

/// Raw moments `E X^n`, `n = 0..=n_max`, stored as logarithms so that
/// e.g. `E X^300 = 300!` for Exponential(1) does not overflow.
///
/// A zero moment is stored as `-inf`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSequence {
    ln_moments: Vec<f64>,
}

impl MomentSequence {
    pub fn len(&self) -> usize {
        self.ln_moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_moments.is_empty()
    }

    /// `E X^n`; may be `+inf` when it overflows `f64`.
    pub fn get(&self, n: usize) -> f64 {
        self.ln_moments[n].exp()
    }

    /// `ln E X^n`.
    pub fn ln(&self, n: usize) -> f64 {
        self.ln_moments[n]
    }

    pub fn ln_moments(&self) -> &[f64] {
        &self.ln_moments
    }

    /// `ln(E X^n / n!)`, the log-coefficients of the MGF power series.
    pub fn ln_mgf_coefficients(&self) -> Vec<f64> {
        let lf = ln_factorials(self.len().saturating_sub(1));
        self.ln_moments.iter().zip(&lf).map(|(m, f)| m - f).collect()
    }
}

pub(super) fn moments(d: &DistributionSpec, n_max: usize) -> MomentSequence {
    let ln_moments = match d {
        DistributionSpec::Exponential { mu } => {
            // E X^n = n! / μ^n
            let lf = ln_factorials(n_max);
            (0..=n_max).map(|n| lf[n] - n as f64 * mu.ln()).collect()
        }
        DistributionSpec::Poisson { mu } => touchard_ln(*mu, n_max),
        DistributionSpec::Finite { p } => (0..=n_max)
            .map(|n| {
                log_sum_exp(p.iter().enumerate().filter(|(_, &pj)| pj > 0.0).map(|(j, &pj)| {
                    if n == 0 {
                        pj.ln()
                    } else if j == 0 {
                        f64::NEG_INFINITY
                    } else {
                        pj.ln() + n as f64 * (j as f64).ln()
                    }
                }))
            })
            .collect(),
    };
    MomentSequence { ln_moments }
}

/// Poisson moments through `E X^{n+1} = μ Σ_k C(n,k) E X^k`, in log space.
fn touchard_ln(mu: f64, n_max: usize) -> Vec<f64> {
    let lf = ln_factorials(n_max);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(0.0);
    for n in 0..n_max {
        let s = log_sum_exp((0..=n).map(|k| lf[n] - lf[k] - lf[n - k] + out[k]));
        out.push(mu.ln() + s);
    }
    out
}
