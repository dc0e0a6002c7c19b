use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::measure::FiniteMeasure;
use crate::conjugate::ExtendedReal;
use crate::error::Result;
use crate::numeric::{golden_section_min, xlogx};
use crate::operators::FiniteDynamicalSystem;

/// Values of `λ*` above this are reported as `+∞` unless the caller says otherwise.
pub const DEFAULT_CAP: f64 = 1e3;
/// Box bounds tried in turn for `φ ∈ [-B, B]^n`.
pub const BOX_SCHEDULE: [f64; 11] = [10.0, 30.0, 100.0, 300.0, 1e3, 3e3, 1e4, 3e4, 1e5, 3e5, 1e6];
const MAX_SWEEPS: usize = 200;
const LINE_SEARCH_REL_WIDTH: f64 = 1e-12;
/// Seed of the random restart; fixed so results are reproducible.
const RESTART_SEED: u64 = 0x7e57_ab1e;

/// Source of t-entropy values `τ_α(ν)`.
#[derive(Clone)]
pub enum TEntropyOracle {
    /// `τ = p · λ*`, with `λ*` maximised numerically; values above `cap` are `+∞`.
    Numeric { cap: f64 },
    /// A caller-supplied convex, nonnegative function on probability vectors.
    Synthetic { name: String, tau: Arc<dyn Fn(&FiniteMeasure) -> ExtendedReal + Send + Sync> },
}

impl fmt::Debug for TEntropyOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Numeric { cap } => f.debug_struct("Numeric").field("cap", cap).finish(),
            Self::Synthetic { name, .. } => f.debug_struct("Synthetic").field("name", name).finish(),
        }
    }
}

impl TEntropyOracle {
    pub fn numeric() -> Self {
        Self::Numeric { cap: DEFAULT_CAP }
    }

    pub fn synthetic<F>(name: impl Into<String>, tau: F) -> Self
    where
        F: Fn(&FiniteMeasure) -> ExtendedReal + Send + Sync + 'static,
    {
        Self::Synthetic { name: name.into(), tau: Arc::new(tau) }
    }

    /// `τ(ν) = KL(ν ‖ uniform) = ln n + Σ ν_i ln ν_i`.
    pub fn kl_to_uniform() -> Self {
        Self::synthetic("kl-to-uniform", |nu| {
            let n = nu.len() as f64;
            ExtendedReal::Finite((n.ln() + nu.weights().iter().map(|&w| xlogx(w)).sum::<f64>()).max(0.0))
        })
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Numeric { .. } => "numeric",
            Self::Synthetic { name, .. } => name,
        }
    }
}

/// Maximiser found for `λ*(ν)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaStar {
    pub value: ExtendedReal,
    /// Best weight vector, centred to mean zero.
    pub phi: Vec<f64>,
    /// Box bound at which the search stopped.
    pub box_bound: f64,
}

/// `λ(φ)` for a functional graph: the largest cycle mean. This equals
/// `ln r(e^φ C_α)` and does not overflow for large `|φ|`.
struct CycleMeans {
    cycles: Vec<Vec<usize>>,
}

impl CycleMeans {
    fn new(s: &FiniteDynamicalSystem) -> Self {
        Self { cycles: s.cycles() }
    }

    fn lambda(&self, phi: &[f64]) -> f64 {
        self.cycles
            .iter()
            .map(|c| c.iter().map(|&i| phi[i]).sum::<f64>() / c.len() as f64)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `λ*(ν) = sup_φ {Σ φ ν - λ(φ)}` for a probability `ν`.
pub fn lambda_conjugate_numeric(s: &FiniteDynamicalSystem, nu: &FiniteMeasure, cap: f64) -> Result<ExtendedReal> {
    lambda_conjugate_detailed(s, nu, cap).map(|r| r.value)
}

/// Ascent over `φ` along the coordinate directions `e_i` and the transfer
/// directions `e_i - e_j`, each with a golden line search inside the box.
/// The objective is concave and invariant under `φ ↦ φ + c`, so a
/// maximiser strictly inside the box is global; otherwise the box grows.
pub fn lambda_conjugate_detailed(s: &FiniteDynamicalSystem, nu: &FiniteMeasure, cap: f64) -> Result<LambdaStar> {
    nu.check_len(s.n)?;
    nu.require_probability()?;
    let lam = CycleMeans::new(s);
    let objective = |phi: &[f64]| nu.integrate(phi) - lam.lambda(phi);

    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED ^ s.n as u64);
    let random_start: Vec<f64> = (0..s.n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let starts = vec![vec![0.0; s.n], random_start];

    let runs: Vec<(f64, Vec<f64>, f64)> = starts
        .into_par_iter()
        .map(|mut phi| {
            let mut value = objective(&phi);
            let mut bound = BOX_SCHEDULE[0];
            for &b in &BOX_SCHEDULE {
                bound = b;
                clamp(&mut phi, b);
                value = ascend(&objective, &mut phi, b, cap);
                if value > cap {
                    break;
                }
                let interior = phi.iter().all(|x| x.abs() < b * (1.0 - 1e-9));
                if interior {
                    break;
                }
            }
            (value, phi, bound)
        })
        .collect();
    let (value, phi, box_bound) = runs
        .into_iter()
        .fold(None::<(f64, Vec<f64>, f64)>, |best, r| match best {
            Some(b) if b.0 >= r.0 => Some(b),
            _ => Some(r),
        })
        .expect("two starts");
    let value = if value > cap { ExtendedReal::PosInf } else { ExtendedReal::Finite(value) };
    Ok(LambdaStar { value, phi, box_bound })
}

fn clamp(phi: &mut [f64], b: f64) {
    phi.iter_mut().for_each(|x| *x = x.clamp(-b, b));
}

fn centre(phi: &mut [f64]) {
    let m = phi.iter().sum::<f64>() / phi.len() as f64;
    phi.iter_mut().for_each(|x| *x -= m);
}

/// Feasible `t` with `φ + t d ∈ [-b, b]^n` for `d = e_i` or `d = e_i - e_j`.
fn step_range(phi: &[f64], i: usize, j: Option<usize>, b: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (-b - phi[i], b - phi[i]);
    if let Some(j) = j {
        // φ_j - t ∈ [-b, b]
        lo = lo.max(phi[j] - b);
        hi = hi.min(phi[j] + b);
    }
    (lo, hi)
}

fn ascend<F>(objective: &F, phi: &mut [f64], b: f64, cap: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let n = phi.len();
    let mut value = objective(phi);
    let mut trial = phi.to_vec();
    for _ in 0..MAX_SWEEPS {
        let start = value;
        for i in 0..n {
            for j in std::iter::once(None).chain((0..n).filter(|&j| j != i).map(Some)) {
                let (lo, hi) = step_range(phi, i, j, b);
                if hi - lo <= 0.0 {
                    continue;
                }
                let mut at = |t: f64| {
                    trial.copy_from_slice(phi);
                    trial[i] += t;
                    if let Some(j) = j {
                        trial[j] -= t;
                    }
                    objective(&trial)
                };
                let (tg, neg) = golden_section_min(|t| -at(t), lo, hi, LINE_SEARCH_REL_WIDTH);
                let mut best = (tg, -neg);
                for t in [lo, hi] {
                    let v = at(t);
                    if v > best.1 {
                        best = (t, v);
                    }
                }
                if best.1 > value + 1e-15 * value.abs().max(1.0) {
                    phi[i] += best.0;
                    if let Some(j) = j {
                        phi[j] -= best.0;
                    }
                    value = objective(phi);
                    if value > cap {
                        return value;
                    }
                }
            }
        }
        let before = phi.to_vec();
        centre(phi);
        clamp(phi, b);
        let centred = objective(phi);
        if centred < value {
            phi.copy_from_slice(&before);
        } else {
            value = centred;
        }
        if value - start <= 1e-13 * value.abs().max(1.0) {
            break;
        }
    }
    value
}

/// `τ_α(ν)` for a probability `ν`.
pub fn t_entropy(oracle: &TEntropyOracle, s: &FiniteDynamicalSystem, nu: &FiniteMeasure) -> Result<ExtendedReal> {
    nu.check_len(s.n)?;
    nu.require_probability()?;
    match oracle {
        TEntropyOracle::Numeric { cap } => Ok(lambda_conjugate_numeric(s, nu, *cap)?.scale(s.p)),
        TEntropyOracle::Synthetic { tau, .. } => Ok(tau(nu)),
    }
}

/// Perspective `ν̃ ↦ a τ(ν̃ / a)`, `a = ν̃(X)`, with value `0` at `ν̃ = 0`.
pub fn scaled_t_entropy(
    oracle: &TEntropyOracle,
    s: &FiniteDynamicalSystem,
    nu_tilde: &FiniteMeasure,
) -> Result<ExtendedReal> {
    nu_tilde.check_len(s.n)?;
    let a = nu_tilde.mass();
    if a == 0.0 {
        return Ok(ExtendedReal::ZERO);
    }
    Ok(t_entropy(oracle, s, &nu_tilde.normalized()?)?.scale(a))
}
