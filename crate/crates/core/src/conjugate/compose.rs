//! Conjugates involving the exponential: `exp*` and the composition rule
//!
//! ```text
//! (f ∘ exp)*(a) = min_{α > 0} { f*(α) - a ln α } + exp*(a)     a > 0
//! (f ∘ exp)*(0) = min_{α ≥ 0} f*(α)
//! ```
//!
//! valid for convex, increasing, lower semicontinuous `f` whose effective
//! domain is a neighbourhood of zero.

use serde::{Deserialize, Serialize};

use super::extended::ExtendedReal;
use crate::numeric::scan_then_golden;

/// Search window for `α`, on a log scale.
const LN_ALPHA_MIN: f64 = -18.420_680_743_952_367; // ln 1e-8
const LN_ALPHA_MAX: f64 = 18.420_680_743_952_367; // ln 1e8
const SCAN_POINTS: usize = 401;
const REL_WIDTH: f64 = 1e-10;

/// `exp*(c)`: `c ln c - c` for `c > 0`, `0` at `c = 0`, `+∞` for `c < 0`.
pub fn exp_conjugate(c: f64) -> ExtendedReal {
    if c > 0.0 {
        ExtendedReal::Finite(c * c.ln() - c)
    } else if c == 0.0 {
        ExtendedReal::ZERO
    } else {
        ExtendedReal::PosInf
    }
}

/// Where the inner minimisation over `α` may look.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimizerDomain {
    /// `α > 0`; valid when `f*` is known to attain its minimum at a positive point.
    Positive,
    /// `α ≥ 0`; additionally evaluates `f*(0)`.
    NonNegative,
}

/// Value of the composition rule together with the minimising `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComposeSolution {
    pub value: ExtendedReal,
    /// `None` when the value is `+∞`.
    pub alpha: Option<f64>,
}

/// `(f ∘ exp)*(a)` from `f*` alone. Returns `+∞` for `a < 0`.
pub fn compose_with_exp_conjugate<F>(f_star: F, a: f64, domain: MinimizerDomain) -> ExtendedReal
where
    F: Fn(f64) -> ExtendedReal,
{
    compose_with_exp_solution(f_star, a, domain).value
}

/// As [`compose_with_exp_conjugate`], also reporting the minimiser.
pub fn compose_with_exp_solution<F>(f_star: F, a: f64, domain: MinimizerDomain) -> ComposeSolution
where
    F: Fn(f64) -> ExtendedReal,
{
    let infinite = ComposeSolution { value: ExtendedReal::PosInf, alpha: None };
    if a < 0.0 || a.is_nan() {
        return infinite;
    }
    // Golden-section on u = ln α: the a ln α singularity at 0 becomes linear.
    let objective = |u: f64| f_star(u.exp()).value() - a * u;
    let interior = scan_then_golden(objective, LN_ALPHA_MIN, LN_ALPHA_MAX, SCAN_POINTS, REL_WIDTH);

    let mut best = interior.map(|(u, v)| (u.exp(), v));
    if a == 0.0 && domain == MinimizerDomain::NonNegative {
        if let Some(v0) = f_star(0.0).finite() {
            if best.map_or(true, |(_, v)| v0 < v) {
                best = Some((0.0, v0));
            }
        }
    }
    match best {
        Some((alpha, v)) => {
            ComposeSolution { value: ExtendedReal::from_f64_or_inf(v) + exp_conjugate(a), alpha: Some(alpha) }
        }
        None => infinite,
    }
}
