use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functionals::{lambda_hat, lambda_tilde};
use super::measure::FiniteMeasure;
use super::oracle::{t_entropy, TEntropyOracle};
use crate::conjugate::ExtendedReal;
use crate::cramer::DistributionSpec;
use crate::error::{Error, Result};
use crate::numeric::golden_section_min;
use crate::operators::FiniteDynamicalSystem;

/// Which functional is reconstructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualPair {
    /// `λ̃_X = ln M_X ∘ exp ∘ λ`.
    Tilde,
    /// `λ̂_X = ln M_X ∘ λ`.
    Hat,
}

impl fmt::Display for DualPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tilde => "tilde",
            Self::Hat => "hat",
        })
    }
}

impl FromStr for DualPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tilde" => Ok(Self::Tilde),
            "hat" => Ok(Self::Hat),
            other => Err(Error::Parse(format!("expected tilde or hat, got {other:?}"))),
        }
    }
}

/// Outcome of rebuilding `λ̃_X(φ)` or `λ̂_X(φ)` from its conjugate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub which: DualPair,
    pub phi: Vec<f64>,
    pub direct: ExtendedReal,
    /// Best `Σ φ dν̃ - conj(ν̃)` over the sampled masses and measures;
    /// `None` when `direct` is infinite.
    pub reconstructed: Option<f64>,
    /// `direct - reconstructed`.
    pub gap: Option<f64>,
    pub a_star: Option<f64>,
    /// Normalised maximising measure; `None` when the optimum is `ν̃ = 0`.
    pub nu_star: Option<Vec<f64>>,
    /// Improvement available from refining `a` off the grid.
    pub grid_resolution: Option<f64>,
}

/// Candidate invariant probability measures: the uniform measure on each
/// cycle, the midpoints of every pair of those, and any invariant extras.
fn candidates(s: &FiniteDynamicalSystem, extra: &[FiniteMeasure]) -> Result<Vec<FiniteMeasure>> {
    let vertices: Vec<FiniteMeasure> = s.cycles().iter().map(|c| FiniteMeasure::uniform_on(s.n, c)).collect();
    let mut out = vertices.clone();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            out.push(vertices[i].mix(&vertices[j], 0.5));
        }
    }
    for m in extra {
        m.check_len(s.n)?;
        if m.mass() > 0.0 {
            let nu = m.normalized()?;
            if super::measure::invariant_check(s, &nu)? {
                out.push(nu);
            }
        }
    }
    Ok(out)
}

/// `Σ φ ν - τ(ν)/p`.
fn inner_value(oracle: &TEntropyOracle, s: &FiniteDynamicalSystem, nu: &FiniteMeasure) -> Result<f64> {
    let tau = t_entropy(oracle, s, nu)?;
    Ok(nu.integrate(&s.phi) - tau.value() / s.p)
}

/// `sup_ν {Σ φ ν - τ(ν)/p}` over invariant probabilities, written as
/// convex combinations `Σ_c w_c u_c` of cycle-uniform measures. Candidates
/// are evaluated first; for a synthetic oracle the best one is then
/// improved by transfer moves `w_i += t, w_j -= t` with golden line search.
fn inner_sup(
    oracle: &TEntropyOracle,
    s: &FiniteDynamicalSystem,
    extra: &[FiniteMeasure],
) -> Result<(f64, FiniteMeasure)> {
    let cands = candidates(s, extra)?;
    let values = cands.par_iter().map(|nu| inner_value(oracle, s, nu)).collect::<Result<Vec<f64>>>()?;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut nu = cands[best_i].clone();
    if matches!(oracle, TEntropyOracle::Numeric { .. }) {
        return Ok((best, nu));
    }

    let cycles = s.cycles();
    let k = cycles.len();
    let mut w: Vec<f64> = cycles.iter().map(|c| nu.weights()[c[0]] * c.len() as f64).collect();
    let build = |w: &[f64]| {
        let mut weights = vec![0.0; s.n];
        for (c, &wc) in cycles.iter().zip(w) {
            for &i in c {
                weights[i] = wc.max(0.0) / c.len() as f64;
            }
        }
        FiniteMeasure::new(weights).expect("nonnegative")
    };
    for _ in 0..100 {
        let start = best;
        for i in 0..k {
            for j in 0..k {
                if i == j || w[j] <= 0.0 {
                    continue;
                }
                let eval = |t: f64| {
                    let mut trial = w.clone();
                    trial[i] += t;
                    trial[j] -= t;
                    inner_value(oracle, s, &build(&trial)).unwrap_or(f64::NEG_INFINITY)
                };
                let (t, neg) = golden_section_min(|t| -eval(t), 0.0, w[j], 1e-12);
                if -neg > best {
                    best = -neg;
                    w[i] += t;
                    w[j] -= t;
                }
            }
        }
        if best - start <= 1e-14 * best.abs().max(1.0) {
            break;
        }
    }
    nu = build(&w);
    Ok((best, nu))
}

/// Rebuilds `λ̃_X(φ)` (or `λ̂_X(φ)`) as `sup_{ν̃} {Σ φ ν̃ - conj(ν̃)}` with
/// `ν̃ = a ν`, `a` on `a_grid` and `ν` invariant, and compares with the
/// direct value.
pub fn duality_reconstruct(
    oracle: &TEntropyOracle,
    s: &FiniteDynamicalSystem,
    d: &DistributionSpec,
    which: DualPair,
    a_grid: &[f64],
    nu_samples: &[FiniteMeasure],
) -> Result<DualityReport> {
    s.require_bijective()?;
    if a_grid.is_empty() || a_grid.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
        return Err(Error::InvalidGrid("mass grid must be nonempty, finite and nonnegative".into()));
    }
    let direct = match which {
        DualPair::Tilde => lambda_tilde(s, d),
        DualPair::Hat => lambda_hat(s, d)?,
    };
    let mut report = DualityReport {
        which,
        phi: s.phi.clone(),
        direct,
        reconstructed: None,
        gap: None,
        a_star: None,
        nu_star: None,
        grid_resolution: None,
    };
    if !direct.is_finite() {
        return Ok(report);
    }

    let (sup_inner, nu) = inner_sup(oracle, s, nu_samples)?;
    // conj(aν) = a τ(ν)/p + F(a), so the objective is a·sup_inner - F(a).
    let zero_clause = match which {
        DualPair::Tilde => 0.0,
        DualPair::Hat => d.p0()?.ln(),
    };
    let table = d.cramer_table();
    let mass_term = |a: f64| match which {
        DualPair::Tilde => d.cgf_exp_conjugate(a),
        DualPair::Hat => table.eval(a),
    };
    let objective = |a: f64| {
        if a == 0.0 {
            zero_clause
        } else {
            match mass_term(a) {
                ExtendedReal::Finite(f) => a * sup_inner - f,
                ExtendedReal::PosInf => f64::NEG_INFINITY,
            }
        }
    };
    let values: Vec<f64> = a_grid.par_iter().map(|&a| objective(a)).collect();
    let (mut i_star, mut best) = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            i_star = i;
        }
    }
    if best == f64::NEG_INFINITY {
        return Ok(report);
    }
    let a_star = a_grid[i_star];

    let mut sorted: Vec<f64> = a_grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.partition_point(|&x| x < a_star);
    let lo = sorted[k.saturating_sub(1)];
    let hi = sorted[(k + 1).min(sorted.len() - 1)];
    let refined = if hi > lo {
        let (_, neg) = golden_section_min(|a| -objective(a), lo, hi, 1e-12);
        (-neg).max(best)
    } else {
        best
    };

    report.reconstructed = Some(best);
    report.gap = Some(direct.value() - best);
    report.a_star = Some(a_star);
    report.nu_star = (a_star > 0.0).then(|| nu.weights().to_vec());
    report.grid_resolution = Some(refined - best);
    Ok(report)
}
