use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::PositiveMatrix;
use super::spectral::spectral_radius;
use crate::error::{Error, Result};

fn default_p() -> f64 {
    1.0
}

/// A finite point set `{0..n-1}` with a self-map `alpha`, weights `phi`
/// and an `L^p` exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct FiniteDynamicalSystem {
    pub n: usize,
    pub alpha: Vec<usize>,
    pub phi: Vec<f64>,
    #[serde(default = "default_p")]
    pub p: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    n: usize,
    alpha: Vec<usize>,
    phi: Vec<f64>,
    #[serde(default = "default_p")]
    p: f64,
}

impl TryFrom<RawSystem> for FiniteDynamicalSystem {
    type Error = Error;

    fn try_from(r: RawSystem) -> Result<Self> {
        Self::new(r.n, r.alpha, r.phi, r.p)
    }
}

impl FiniteDynamicalSystem {
    pub fn new(n: usize, alpha: Vec<usize>, phi: Vec<f64>, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSystem("system needs at least one point".into()));
        }
        if alpha.len() != n {
            return Err(Error::InvalidSystem(format!("alpha has {} entries, expected {n}", alpha.len())));
        }
        if let Some(i) = alpha.iter().position(|&j| j >= n) {
            return Err(Error::InvalidSystem(format!("alpha({i}) = {} is outside 0..{n}", alpha[i])));
        }
        if phi.len() != n {
            return Err(Error::InvalidSystem(format!("phi has {} entries, expected {n}", phi.len())));
        }
        if let Some(i) = phi.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidSystem(format!("phi({i}) is not finite")));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidSystem(format!("exponent p = {p} must satisfy 1 <= p < inf")));
        }
        Ok(Self { n, alpha, phi, p })
    }

    /// Two points exchanged by `alpha`.
    pub fn swap(phi: [f64; 2]) -> Self {
        Self::new(2, vec![1, 0], phi.to_vec(), 1.0).expect("valid")
    }

    pub fn identity(phi: Vec<f64>) -> Result<Self> {
        let n = phi.len();
        Self::new(n, (0..n).collect(), phi, 1.0)
    }

    /// Uniformly random permutation with `phi` uniform on `[-phi_max, phi_max]`.
    pub fn random_permutation<R: Rng>(rng: &mut R, n: usize, phi_max: f64) -> Self {
        let mut alpha: Vec<usize> = (0..n).collect();
        alpha.shuffle(rng);
        let phi = (0..n).map(|_| rng.random_range(-phi_max..=phi_max)).collect();
        Self::new(n, alpha, phi, 1.0).expect("valid")
    }

    pub fn with_phi(&self, phi: Vec<f64>) -> Result<Self> {
        Self::new(self.n, self.alpha.clone(), phi, self.p)
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.n, self.alpha.clone(), self.phi.clone(), p)
    }

    pub fn is_bijective(&self) -> bool {
        let mut hit = vec![false; self.n];
        for &j in &self.alpha {
            if hit[j] {
                return false;
            }
            hit[j] = true;
        }
        true
    }

    pub fn require_bijective(&self) -> Result<()> {
        let mut hit = vec![false; self.n];
        for &j in &self.alpha {
            if hit[j] {
                return Err(Error::NotBijective(j));
            }
            hit[j] = true;
        }
        Ok(())
    }

    /// The periodic orbits of `alpha`, each listed from its smallest point.
    /// Every point lies on one of them when `alpha` is a bijection.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        // A point is periodic iff iterating alpha n times from it returns to it.
        let mut on_cycle = vec![false; self.n];
        for (start, flag) in on_cycle.iter_mut().enumerate() {
            let mut x = self.alpha[start];
            for _ in 0..self.n {
                if x == start {
                    *flag = true;
                    break;
                }
                x = self.alpha[x];
            }
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if !on_cycle[start] || seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.alpha[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.alpha[x];
            }
            out.push(cycle);
        }
        out
    }
}

/// `A[i, alpha(i)] = e^{phi(i)}`, zero elsewhere.
pub fn wco_matrix(s: &FiniteDynamicalSystem) -> PositiveMatrix {
    wco_matrix_shifted(s, 0.0)
}

fn wco_matrix_shifted(s: &FiniteDynamicalSystem, shift: f64) -> PositiveMatrix {
    let mut a = PositiveMatrix::zeros(s.n);
    for i in 0..s.n {
        a.set(i, s.alpha[i], (s.phi[i] - shift).exp());
    }
    a
}

/// `max_c |c|^{-1} Σ_{i∈c} phi(i)` over the periodic orbits of `alpha`.
pub fn cycle_mean_exponent(s: &FiniteDynamicalSystem) -> f64 {
    s.cycles()
        .iter()
        .map(|c| c.iter().map(|&i| s.phi[i]).sum::<f64>() / c.len() as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `λ(φ) = ln r(e^φ C_α)`, from the numeric spectral radius. The weights are
/// shifted by `max φ` first, which changes `λ` by exactly that constant.
pub fn lambda_functional(s: &FiniteDynamicalSystem) -> f64 {
    let shift = s.phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    shift + spectral_radius(&wco_matrix_shifted(s, shift)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wco_examples() {
        let s = FiniteDynamicalSystem::swap([2f64.ln(), 8f64.ln()]);
        let a = wco_matrix(&s);
        assert!((a.get(0, 1) - 2.0).abs() < 1e-15 && (a.get(1, 0) - 8.0).abs() < 1e-14);
        assert_eq!(a.get(0, 0), 0.0);
        let one = FiniteDynamicalSystem::identity(vec![0.0]).unwrap();
        assert_eq!(wco_matrix(&one), PositiveMatrix::identity(1));
    }

    #[test]
    fn lambda_examples() {
        let s = FiniteDynamicalSystem::swap([2f64.ln(), 8f64.ln()]);
        assert!((lambda_functional(&s) - 4f64.ln()).abs() < 1e-12);
        assert!((cycle_mean_exponent(&s) - 4f64.ln()).abs() < 1e-15);
        let id = FiniteDynamicalSystem::identity(vec![0.3, 0.7]).unwrap();
        assert!((lambda_functional(&id) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn non_bijective_uses_the_eventual_cycle() {
        // 0 -> 1 -> 2 -> 1: only {1, 2} is periodic.
        let s = FiniteDynamicalSystem::new(3, vec![1, 2, 1], vec![5.0, 1.0, 2.0], 1.0).unwrap();
        assert!(!s.is_bijective());
        assert_eq!(s.cycles(), vec![vec![1, 2]]);
        assert!((lambda_functional(&s) - 1.5).abs() < 1e-12);
        assert!(matches!(s.require_bijective(), Err(Error::NotBijective(1))));
    }

    #[test]
    fn json_schema() {
        let s: FiniteDynamicalSystem = serde_json::from_str(r#"{"n": 2, "alpha": [1, 0], "phi": [0.5, -1]}"#).unwrap();
        assert_eq!(s.p, 1.0);
        assert!(serde_json::from_str::<FiniteDynamicalSystem>(r#"{"n": 2, "alpha": [2, 0], "phi": [0, 0]}"#).is_err());
        assert!(
            serde_json::from_str::<FiniteDynamicalSystem>(r#"{"n": 1, "alpha": [0], "phi": [0], "p": 0.5}"#).is_err()
        );
    }
}
