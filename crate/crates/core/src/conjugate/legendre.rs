//! Discrete Legendre–Fenchel transforms.
//!
//! The conjugate of a sampled function `f` is
//!
//! ```text
//! f*(a) = max_i { a x_i - f(x_i) }   over finite samples
//! ```
//!
//! [`lf_transform_reference`] evaluates this directly in `O(n m)`.
//! [`lf_transform`] first builds the lower convex hull of the finite samples
//! and then sweeps the sorted dual abscissae along it, which is `O(n + m)`:
//! the maximiser for slope `a` is the hull vertex whose left edge slope is
//! `<= a` and right edge slope is `>= a`.

use serde::Serialize;

use super::extended::ExtendedReal;
use super::grid::{check_strictly_increasing, ExtendedRealGridFunction};
use crate::error::{Error, Result};

/// Tolerance for the discrete convexity test in [`biconjugate`].
const CONVEXITY_TOL: f64 = 1e-9;

pub const NONCONVEX_WARNING: &str = "biconjugate of non-convex input is the convex envelope";

/// Conjugate values on a dual grid, with the maximising abscissa of each
/// value and an `unreliable_edge` flag when that maximiser is the first or
/// last finite sample (the true supremum may lie outside the window).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegendreTransform {
    abscissae: Vec<f64>,
    values: Vec<ExtendedReal>,
    argmax: Vec<f64>,
    unreliable_edge: Vec<bool>,
}

impl LegendreTransform {
    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn values(&self) -> &[ExtendedReal] {
        &self.values
    }

    pub fn argmax(&self) -> &[f64] {
        &self.argmax
    }

    pub fn unreliable_edge(&self) -> &[bool] {
        &self.unreliable_edge
    }

    pub fn any_unreliable(&self) -> bool {
        self.unreliable_edge.iter().any(|&e| e)
    }

    /// Drops the metadata. Fails if the dual grid has fewer than two points.
    pub fn into_grid_function(self) -> Result<ExtendedRealGridFunction> {
        ExtendedRealGridFunction::new(self.abscissae, self.values)
    }
}

/// Indices (into the finite samples) of the lower convex hull vertices,
/// collinear points removed.
fn lower_hull(points: &[(f64, f64)]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(points.len());
    for (k, &(x2, y2)) in points.iter().enumerate() {
        while hull.len() >= 2 {
            let (x0, y0) = points[hull[hull.len() - 2]];
            let (x1, y1) = points[hull[hull.len() - 1]];
            // Middle point is kept only if strictly below the chord.
            let cross = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

fn finite_samples(f: &ExtendedRealGridFunction) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(f64, f64)> = f.finite_points().map(|(_, x, y)| (x, y)).collect();
    if pts.is_empty() {
        return Err(Error::EmptyEffectiveDomain);
    }
    Ok(pts)
}

/// Linear-time conjugate of `f` on the strictly increasing `dual_grid`.
pub fn lf_transform(f: &ExtendedRealGridFunction, dual_grid: &[f64]) -> Result<LegendreTransform> {
    check_strictly_increasing(dual_grid, 1)?;
    let pts = finite_samples(f)?;
    let hull = lower_hull(&pts);
    let last = pts.len() - 1;

    let mut out = LegendreTransform {
        abscissae: dual_grid.to_vec(),
        values: Vec::with_capacity(dual_grid.len()),
        argmax: Vec::with_capacity(dual_grid.len()),
        unreliable_edge: Vec::with_capacity(dual_grid.len()),
    };
    let mut j = 0;
    for &a in dual_grid {
        while j + 1 < hull.len() {
            let (x0, y0) = pts[hull[j]];
            let (x1, y1) = pts[hull[j + 1]];
            if y1 - y0 <= a * (x1 - x0) {
                j += 1;
            } else {
                break;
            }
        }
        let (x, y) = pts[hull[j]];
        out.values.push(ExtendedReal::from_f64_or_inf(a * x - y));
        out.argmax.push(x);
        out.unreliable_edge.push(hull[j] == 0 || hull[j] == last);
    }
    Ok(out)
}

/// Direct `O(n m)` conjugate; the correctness reference for [`lf_transform`].
pub fn lf_transform_reference(f: &ExtendedRealGridFunction, dual_grid: &[f64]) -> Result<LegendreTransform> {
    check_strictly_increasing(dual_grid, 1)?;
    let pts = finite_samples(f)?;
    let last = pts.len() - 1;
    let mut out = LegendreTransform {
        abscissae: dual_grid.to_vec(),
        values: Vec::with_capacity(dual_grid.len()),
        argmax: Vec::with_capacity(dual_grid.len()),
        unreliable_edge: Vec::with_capacity(dual_grid.len()),
    };
    for &a in dual_grid {
        let (k, best) = pts
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| (k, a * x - y))
            .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        out.values.push(ExtendedReal::from_f64_or_inf(best));
        out.argmax.push(pts[k].0);
        out.unreliable_edge.push(k == 0 || k == last);
    }
    Ok(out)
}

/// Conjugate at a single dual point: `(value, maximiser, unreliable_edge)`.
pub fn conjugate_at(f: &ExtendedRealGridFunction, a: f64) -> Result<(ExtendedReal, f64, bool)> {
    let t = lf_transform_reference(f, &[a])?;
    Ok((t.values[0], t.argmax[0], t.unreliable_edge[0]))
}

/// Result of [`biconjugate`]. `warning` is set when the input failed the
/// discrete convexity test, in which case `function` is its convex envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct Biconjugate {
    pub function: ExtendedRealGridFunction,
    pub warning: Option<&'static str>,
}

/// `(f*)*` on `f`'s own grid.
///
/// The intermediate dual grid is the set of edge slopes of the lower hull of
/// `f`, which are exactly the breakpoints of the piecewise-linear `f*`; the
/// second transform is therefore exact on the grid. Outside the sampled
/// effective domain the result is `+∞`.
pub fn biconjugate(f: &ExtendedRealGridFunction) -> Result<Biconjugate> {
    let pts = finite_samples(f)?;
    let warning = (!f.is_discretely_convex(CONVEXITY_TOL)).then_some(NONCONVEX_WARNING);
    let hull = lower_hull(&pts);
    let (x_lo, x_hi) = (pts[0].0, pts[pts.len() - 1].0);

    let slopes: Vec<f64> = hull
        .windows(2)
        .map(|w| {
            let (x0, y0) = pts[w[0]];
            let (x1, y1) = pts[w[1]];
            (y1 - y0) / (x1 - x0)
        })
        .collect();

    let in_domain: Vec<f64> = f.grid().iter().copied().filter(|&x| x >= x_lo && x <= x_hi).collect();
    let inner: Vec<f64> = if slopes.len() < 2 {
        // Zero or one hull edge: evaluate the few affine pieces directly.
        let (hx, hy) = pts[hull[0]];
        in_domain
            .iter()
            .map(|&x| match slopes.first() {
                Some(&s) => s * x - (s * hx - hy),
                None => hy,
            })
            .collect()
    } else {
        let fstar = lf_transform(f, &slopes)?;
        let fstar = ExtendedRealGridFunction::new(slopes, fstar.values)?;
        lf_transform(&fstar, &in_domain)?.values.iter().map(|v| v.value()).collect()
    };

    let mut it = inner.into_iter();
    let values = f
        .grid()
        .iter()
        .map(|&x| {
            if x >= x_lo && x <= x_hi {
                ExtendedReal::from_f64_or_inf(it.next().expect("one value per in-domain abscissa"))
            } else {
                ExtendedReal::PosInf
            }
        })
        .collect();
    Ok(Biconjugate { function: ExtendedRealGridFunction::new(f.grid().to_vec(), values)?, warning })
}
