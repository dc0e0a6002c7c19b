use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::FiniteDynamicalSystem;

/// Mass tolerance for probability measures and invariance tests.
pub const MASS_TOL: f64 = 1e-12;

/// A nonnegative measure on the points of a finite system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FiniteMeasure {
    weights: Vec<f64>,
}

impl TryFrom<Vec<f64>> for FiniteMeasure {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<FiniteMeasure> for Vec<f64> {
    fn from(m: FiniteMeasure) -> Self {
        m.weights
    }
}

impl FiniteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("weight {i} = {} is negative or not finite", weights[i])));
        }
        Ok(Self { weights })
    }

    pub fn zero(n: usize) -> Self {
        Self { weights: vec![0.0; n] }
    }

    pub fn uniform(n: usize) -> Self {
        Self { weights: vec![1.0 / n as f64; n] }
    }

    /// Uniform probability on `points`.
    pub fn uniform_on(n: usize, points: &[usize]) -> Self {
        let mut weights = vec![0.0; n];
        for &i in points {
            weights[i] = 1.0 / points.len() as f64;
        }
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_probability(&self) -> bool {
        (self.mass() - 1.0).abs() <= MASS_TOL
    }

    /// `ν̃ / ν̃(X)`; requires positive mass.
    pub fn normalized(&self) -> Result<Self> {
        let m = self.mass();
        if m <= 0.0 {
            return Err(Error::InvalidMeasure("cannot normalise a zero measure".into()));
        }
        Ok(Self { weights: self.weights.iter().map(|w| w / m).collect() })
    }

    pub fn scaled(&self, a: f64) -> Result<Self> {
        Self::new(self.weights.iter().map(|w| w * a).collect())
    }

    /// `Σ_i f(i) ν(i)`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, x)| w * x).sum()
    }

    /// `Σ_i |ν(i) - μ(i)| / 2`.
    pub fn total_variation(&self, other: &Self) -> f64 {
        0.5 * self.weights.iter().zip(&other.weights).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }

    /// `(1 - s) self + s other`.
    pub fn mix(&self, other: &Self, s: f64) -> Self {
        Self { weights: self.weights.iter().zip(&other.weights).map(|(a, b)| (1.0 - s) * a + s * b).collect() }
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: n, got: self.len() })
        }
    }

    pub(crate) fn require_probability(&self) -> Result<()> {
        if self.is_probability() {
            Ok(())
        } else {
            Err(Error::ProbabilityRequired(self.mass()))
        }
    }
}

/// `ν ∘ α^{-1} = ν`: for every `j`, `Σ_{α(i) = j} ν(i) = ν(j)` within [`MASS_TOL`].
pub fn invariant_check(s: &FiniteDynamicalSystem, nu: &FiniteMeasure) -> Result<bool> {
    s.require_bijective()?;
    nu.check_len(s.n)?;
    let mut push = vec![0.0; s.n];
    for (i, &w) in nu.weights().iter().enumerate() {
        push[s.alpha[i]] += w;
    }
    Ok(push.iter().zip(nu.weights()).all(|(a, b)| (a - b).abs() <= MASS_TOL))
}

/// Projection onto the invariant measures of a permutation: average over
/// each cycle.
pub fn invariant_projection(s: &FiniteDynamicalSystem, nu: &FiniteMeasure) -> Result<FiniteMeasure> {
    s.require_bijective()?;
    nu.check_len(s.n)?;
    let mut w = vec![0.0; s.n];
    for c in s.cycles() {
        let avg = c.iter().map(|&i| nu.weights()[i]).sum::<f64>() / c.len() as f64;
        for &i in &c {
            w[i] = avg;
        }
    }
    FiniteMeasure::new(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariance_examples() {
        let swap = FiniteDynamicalSystem::swap([0.0, 0.0]);
        assert!(invariant_check(&swap, &FiniteMeasure::new(vec![0.5, 0.5]).unwrap()).unwrap());
        assert!(!invariant_check(&swap, &FiniteMeasure::new(vec![1.0, 0.0]).unwrap()).unwrap());
        let id = FiniteDynamicalSystem::identity(vec![0.0; 3]).unwrap();
        assert!(invariant_check(&id, &FiniteMeasure::new(vec![0.2, 0.0, 0.8]).unwrap()).unwrap());
        let not_bij = FiniteDynamicalSystem::new(2, vec![0, 0], vec![0.0, 0.0], 1.0).unwrap();
        assert!(invariant_check(&not_bij, &FiniteMeasure::uniform(2)).is_err());
    }

    #[test]
    fn measure_basics() {
        assert!(FiniteMeasure::new(vec![-0.1, 1.1]).is_err());
        let m = FiniteMeasure::new(vec![2.0, 0.0]).unwrap();
        assert_eq!(m.mass(), 2.0);
        assert_eq!(m.normalized().unwrap().weights(), &[1.0, 0.0]);
        assert!(FiniteMeasure::zero(2).normalized().is_err());
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[2.0,0.0]");
        assert!(serde_json::from_str::<FiniteMeasure>("[1.0,-1.0]").is_err());
    }

    #[test]
    fn projection_is_invariant() {
        let s = FiniteDynamicalSystem::new(3, vec![1, 0, 2], vec![0.0; 3], 1.0).unwrap();
        let nu = FiniteMeasure::new(vec![0.7, 0.1, 0.2]).unwrap();
        let p = invariant_projection(&s, &nu).unwrap();
        assert!(invariant_check(&s, &p).unwrap());
        assert!((p.weights()[0] - 0.4).abs() < 1e-15);
    }
}
