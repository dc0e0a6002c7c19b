//! Entropy minimisation over truncated sequences with a prescribed mean,
//!
//! ```text
//! S_a^N = { t_0..t_N ≥ 0 : Σ t_k = 1, Σ k t_k = a },
//! ```
//!
//! for objectives of the form `Σ t_k (ln t_k - w_k)`. The minimiser is the
//! exponential tilt `t_k ∝ exp(w_k + θ k)`, with `θ` fixed by the mean.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::cramer::DistributionSpec;
use crate::error::{Error, Result};
use crate::numeric::{bisect_increasing, ln_factorials, log_sum_exp};

pub const DEFAULT_TRUNCATION: usize = 300;
pub const THETA_BRACKET: f64 = 50.0;
pub const BISECTION_ITERATIONS: usize = 200;
/// Entries below this are exact zeros in entropy sums.
pub const ZERO_ENTRY: f64 = 1e-300;
/// Entries above this enter the optimality certificate.
pub const KKT_ENTRY: f64 = 1e-14;
/// Entries serialised in reports.
const REPORTED_ENTRIES: usize = 50;

/// A probability vector `t_0..t_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequencePoint {
    t: Vec<f64>,
}

impl SequencePoint {
    pub fn new(t: Vec<f64>) -> Self {
        Self { t }
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    /// `N`, the largest index.
    pub fn truncation(&self) -> usize {
        self.t.len() - 1
    }

    pub fn mass(&self) -> f64 {
        self.t.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.t.iter().enumerate().map(|(k, x)| k as f64 * x).sum()
    }

    /// Total variation distance `½ Σ |t_k - s_k|`, padding the shorter with zeros.
    pub fn total_variation(&self, other: &[f64]) -> f64 {
        let n = self.t.len().max(other.len());
        0.5 * (0..n)
            .map(|k| (self.t.get(k).copied().unwrap_or(0.0) - other.get(k).copied().unwrap_or(0.0)).abs())
            .sum::<f64>()
    }
}

/// Minimiser of a tilted entropy problem.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltingSolution {
    /// Tilt parameter; `±inf` when the mean sits on the edge of the attainable range.
    pub theta: f64,
    pub optimum: SequencePoint,
    pub value: f64,
    /// The requested mean is an endpoint of the attainable range; the
    /// optimum is then the point mass at that endpoint.
    pub boundary: bool,
    /// `max_k |ln t_k - w_k - θk - c|` over entries above [`KKT_ENTRY`],
    /// with `c` the common multiplier.
    pub kkt_residual: f64,
}

impl TiltingSolution {
    pub fn mean_achieved(&self) -> f64 {
        self.optimum.mean()
    }

    /// Weight of the last retained entry; small values mean the truncation
    /// is not binding.
    pub fn tail_weight(&self) -> f64 {
        *self.optimum.t.last().expect("non-empty")
    }
}

fn theta_repr(theta: f64) -> serde_json::Value {
    if theta.is_finite() {
        serde_json::json!(theta)
    } else if theta > 0.0 {
        serde_json::json!("inf")
    } else {
        serde_json::json!("-inf")
    }
}

impl Serialize for TiltingSolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let t = self.optimum.t();
        let mut s = serializer.serialize_struct("TiltingSolution", 6)?;
        s.serialize_field("theta", &theta_repr(self.theta))?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field("mean_achieved", &self.mean_achieved())?;
        s.serialize_field("N", &self.optimum.truncation())?;
        s.serialize_field("t", &t[..t.len().min(REPORTED_ENTRIES)])?;
        s.serialize_field("boundary", &self.boundary)?;
        s.end()
    }
}

/// `Σ t_k (ln t_k - w_k)` with `0 ln 0 = 0`; `+inf` if some `t_k > 0` has `w_k = -inf`.
pub fn objective(t: &[f64], log_weights: &[f64]) -> f64 {
    t.iter().zip(log_weights).filter(|(&x, _)| x >= ZERO_ENTRY).map(|(&x, &w)| x * (x.ln() - w)).sum()
}

/// Minimises `Σ t_k (ln t_k - w_k)` over `S_a^N`, `N = log_weights.len() - 1`.
/// Entries with `w_k = -inf` are forced to zero.
pub fn tilt(log_weights: &[f64], a: f64) -> Result<TiltingSolution> {
    if log_weights.is_empty() {
        return Err(Error::InvalidDistribution("empty weight sequence".into()));
    }
    if !(a >= 0.0) {
        return Err(Error::MeanOutsideCone(a));
    }
    let n = log_weights.len() - 1;
    let support: Vec<usize> = (0..=n).filter(|&k| log_weights[k] > f64::NEG_INFINITY).collect();
    let (Some(&k_lo), Some(&k_hi)) = (support.first(), support.last()) else {
        return Err(Error::InvalidDistribution("all weights vanish".into()));
    };
    let too_large = || Error::IncreaseTruncation { mean: a, truncation: n };
    if a > k_hi as f64 {
        return Err(too_large());
    }
    if a < k_lo as f64 {
        return Err(Error::MeanOutsideCone(a));
    }
    if a == k_lo as f64 || a == k_hi as f64 {
        let k = a as usize;
        let mut t = vec![0.0; n + 1];
        t[k] = 1.0;
        let theta = if k_lo == k_hi {
            0.0
        } else if k == k_lo {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        return Ok(TiltingSolution {
            theta,
            value: objective(&t, log_weights),
            optimum: SequencePoint::new(t),
            boundary: k_lo != k_hi,
            kkt_residual: 0.0,
        });
    }

    let tilted = |theta: f64| -> (Vec<f64>, f64) {
        let logits: Vec<f64> = log_weights.iter().enumerate().map(|(k, w)| w + theta * k as f64).collect();
        let log_z = log_sum_exp(logits.iter().copied());
        (logits.iter().map(|l| (l - log_z).exp()).collect(), log_z)
    };
    let mean_at = |theta: f64| tilted(theta).0.iter().enumerate().map(|(k, x)| k as f64 * x).sum::<f64>();
    if mean_at(-THETA_BRACKET) > a {
        return Err(Error::MeanOutsideCone(a));
    }
    if mean_at(THETA_BRACKET) < a {
        return Err(too_large());
    }
    let theta = bisect_increasing(|th| mean_at(th) - a, -THETA_BRACKET, THETA_BRACKET, BISECTION_ITERATIONS);
    let (t, log_z) = tilted(theta);

    let kkt_residual = t
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > KKT_ENTRY)
        .map(|(k, &x)| (x.ln() - log_weights[k] - theta * k as f64 + log_z).abs())
        .fold(0.0, f64::max);
    Ok(TiltingSolution {
        theta,
        value: objective(&t, log_weights),
        optimum: SequencePoint::new(t),
        boundary: false,
        kkt_residual,
    })
}

/// `min Σ t_n ln t_n` over `S_a^N`; tends to `a ln a - (a+1) ln(a+1)`.
pub fn min_entropy_given_mean(a: f64, truncation: usize) -> Result<TiltingSolution> {
    tilt(&vec![0.0; truncation + 1], a)
}

/// `min Σ t_k ln(t_k k! / EX^k)` over `S_a^N`; tends to `(ln M_X ∘ exp)*(a)`.
pub fn min_form3(d: &DistributionSpec, a: f64, truncation: usize) -> Result<TiltingSolution> {
    let w = d.moments(truncation).ln_mgf_coefficients();
    tilt(&w, a)
}

/// `min D(t ‖ p)` over `S_a^N` for a discrete law; tends to `(ln M_X)*(a)`.
///
/// Finite laws are truncated at `min(N, len - 1)`.
pub fn contraction_discrete(d: &DistributionSpec, a: f64, truncation: usize) -> Result<TiltingSolution> {
    let w: Vec<f64> = match d {
        DistributionSpec::Exponential { .. } => return Err(Error::NotDiscrete("contraction principle")),
        DistributionSpec::Poisson { mu } => {
            let lf = ln_factorials(truncation);
            (0..=truncation).map(|k| -mu + k as f64 * mu.ln() - lf[k]).collect()
        }
        DistributionSpec::Finite { p } => p[..p.len().min(truncation + 1)].iter().map(|x| x.ln()).collect(),
    };
    if let Some(k) = w.iter().position(|&x| x == f64::NEG_INFINITY) {
        return Err(Error::SupportGap(k));
    }
    tilt(&w, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_identity() {
        let s = min_entropy_given_mean(1.0, 200).unwrap();
        assert!((s.value + 2.0 * 2f64.ln()).abs() < 1e-4);
        assert!((s.mean_achieved() - 1.0).abs() < 1e-8);
        assert!(s.kkt_residual < 1e-6);
        let s = min_entropy_given_mean(2.0, 400).unwrap();
        assert!((s.value - (2.0 * 2f64.ln() - 3.0 * 3f64.ln())).abs() < 1e-4);
    }

    #[test]
    fn zero_mean_is_a_point_mass() {
        let s = min_entropy_given_mean(0.0, 10).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.optimum.t()[0], 1.0);
        assert!(s.boundary);
        assert!(matches!(min_entropy_given_mean(-1.0, 10), Err(Error::MeanOutsideCone(_))));
    }

    #[test]
    fn mean_beyond_truncation() {
        assert!(matches!(min_entropy_given_mean(11.0, 10), Err(Error::IncreaseTruncation { .. })));
    }

    #[test]
    fn form3_exponential() {
        let e2 = DistributionSpec::exponential(2.0).unwrap();
        let s = min_form3(&e2, 1.0, 300).unwrap();
        assert!((s.value + 2f64.ln()).abs() < 1e-3);
        let e1 = DistributionSpec::exponential(1.0).unwrap();
        for n in [5, 20, 300] {
            let s = min_form3(&e1, 1.0, n).unwrap();
            assert!(s.value >= e1.cgf_exp_conjugate(1.0).value() - 1e-12);
        }
    }

    #[test]
    fn contraction_matches_poisson_rate() {
        let p1 = DistributionSpec::poisson(1.0).unwrap();
        let s = contraction_discrete(&p1, 2.0, 100).unwrap();
        assert!((s.value - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn contraction_at_the_mean_returns_the_law() {
        let p = vec![0.1, 0.2, 0.3, 0.4];
        let d = DistributionSpec::finite(p.clone()).unwrap();
        let s = contraction_discrete(&d, d.mean(), DEFAULT_TRUNCATION).unwrap();
        assert!(s.value.abs() < 1e-12);
        assert!(s.optimum.total_variation(&p) < 1e-10);
    }

    #[test]
    fn support_gap() {
        let d = DistributionSpec::finite(vec![0.5, 0.0, 0.5]).unwrap();
        assert!(matches!(contraction_discrete(&d, 1.0, 10), Err(Error::SupportGap(1))));
        assert!(contraction_discrete(&DistributionSpec::exponential(1.0).unwrap(), 1.0, 10).is_err());
    }

    #[test]
    fn serialisation_truncates_the_sequence() {
        let s = min_entropy_given_mean(1.0, 200).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["N"], 200);
        assert_eq!(v["t"].as_array().unwrap().len(), 50);
        assert_eq!(v["boundary"], false);
        let b = serde_json::to_value(min_entropy_given_mean(0.0, 3).unwrap()).unwrap();
        assert_eq!(b["theta"], "-inf");
    }

    #[test]
    fn objective_matches_stored_value() {
        let d = DistributionSpec::poisson(2.0).unwrap();
        let s = contraction_discrete(&d, 3.0, 120).unwrap();
        let lf = ln_factorials(120);
        let w: Vec<f64> = (0..=120).map(|k| -2.0 + k as f64 * 2f64.ln() - lf[k]).collect();
        assert!((objective(s.optimum.t(), &w) - s.value).abs() < 1e-10);
    }
}
