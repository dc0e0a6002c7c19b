//! One-dimensional extended-real convex calculus: sampled functions with
//! explicit `+∞`, discrete Legendre–Fenchel transforms and the
//! composition-with-`exp` rule.

mod compose;
mod extended;
mod grid;
mod legendre;

use std::fmt;
use std::sync::Arc;

use rand::Rng;

pub use compose::{
    compose_with_exp_conjugate, compose_with_exp_solution, exp_conjugate, ComposeSolution, MinimizerDomain,
};
pub use extended::{ExtendedReal, PosInf};
pub use grid::{arange_inclusive, linspace, ExtendedRealGridFunction};
pub use legendre::{
    biconjugate, conjugate_at, lf_transform, lf_transform_reference, Biconjugate, LegendreTransform, NONCONVEX_WARNING,
};

use crate::cramer::DistributionSpec;
use crate::error::Result;
use crate::numeric::golden_section_min;

/// A convex function given by a formula rather than samples.
#[derive(Clone)]
pub enum ClosedFormConvexFunction {
    Exp,
    /// Cumulant generating function `t ↦ ln M_X(t)`.
    Cgf(DistributionSpec),
    Custom(Arc<dyn Fn(f64) -> ExtendedReal + Send + Sync>),
}

impl fmt::Debug for ClosedFormConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exp => f.write_str("Exp"),
            Self::Cgf(d) => f.debug_tuple("Cgf").field(d).finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl ClosedFormConvexFunction {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> ExtendedReal + Send + Sync + 'static,
    {
        Self::Custom(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> ExtendedReal {
        match self {
            Self::Exp => ExtendedReal::from_f64(t.exp()),
            Self::Cgf(d) => d.cgf(t),
            Self::Custom(f) => f(t),
        }
    }

    pub fn sample(&self, grid: Vec<f64>) -> Result<ExtendedRealGridFunction> {
        ExtendedRealGridFunction::sample(grid, |t| self.eval(t))
    }

    /// Spot-checks midpoint convexity on `trials` random pairs drawn from
    /// `[lo, hi]`. Returns the largest violation
    /// `f((x+y)/2) - (f(x)+f(y))/2` seen (`<= 0` means no violation).
    /// Pairs with an infinite endpoint are skipped.
    pub fn midpoint_convexity_defect<R: Rng>(&self, rng: &mut R, lo: f64, hi: f64, trials: usize) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..trials {
            let x = rng.random_range(lo..hi);
            let y = rng.random_range(lo..hi);
            let (Some(fx), Some(fy)) = (self.eval(x).finite(), self.eval(y).finite()) else {
                continue;
            };
            let mid = self.eval(0.5 * (x + y)).value();
            worst = worst.max(mid - 0.5 * (fx + fy));
        }
        worst
    }
}

/// Conjugate of `f` at `a`, computed on the sampled `grid` and then polished
/// by golden-section search between the neighbours of the grid maximiser.
///
/// Returns `(value, maximiser, unreliable_edge)`.
pub fn refined_conjugate_at<F>(f: F, sampled: &ExtendedRealGridFunction, a: f64) -> Result<(ExtendedReal, f64, bool)>
where
    F: Fn(f64) -> ExtendedReal,
{
    let (value, x, edge) = conjugate_at(sampled, a)?;
    let grid = sampled.grid();
    let i = grid.partition_point(|&g| g < x);
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (xr, neg) = golden_section_min(|t| -(a * t - f(t).value()), lo, hi, 1e-13);
    if -neg > value.value() {
        Ok((ExtendedReal::from_f64_or_inf(-neg), xr, edge))
    } else {
        Ok((value, x, edge))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_forms_are_midpoint_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(ClosedFormConvexFunction::Exp.midpoint_convexity_defect(&mut rng, -5.0, 5.0, 500) <= 1e-12);
        let cgf = ClosedFormConvexFunction::Cgf(DistributionSpec::exponential(1.0).unwrap());
        assert!(cgf.midpoint_convexity_defect(&mut rng, -5.0, 2.0, 500) <= 1e-12);
        let concave = ClosedFormConvexFunction::custom(|t| ExtendedReal::Finite(-t * t));
        assert!(concave.midpoint_convexity_defect(&mut rng, -1.0, 1.0, 50) > 0.0);
    }

    #[test]
    fn refinement_recovers_off_grid_maximiser() {
        let f = |t: f64| ExtendedReal::Finite(t * t);
        let sampled = ExtendedRealGridFunction::sample(linspace(-3.0, 3.0, 61), f).unwrap();
        let (v, x, _) = refined_conjugate_at(f, &sampled, 0.73).unwrap();
        assert!((v.value() - 0.73 * 0.73 / 4.0).abs() < 1e-14);
        assert!((x - 0.365).abs() < 1e-6);
    }
}
