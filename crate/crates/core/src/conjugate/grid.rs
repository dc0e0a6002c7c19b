use std::fmt::Write as _;

use super::extended::ExtendedReal;
use crate::error::{Error, Result};

/// A convex function sampled on a strictly increasing 1-D grid, with
/// explicit `+∞` samples outside its effective domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedRealGridFunction {
    grid: Vec<f64>,
    values: Vec<ExtendedReal>,
}

/// `points` equally spaced abscissae from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (points - 1) as f64;
    let mut v: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
    v[points - 1] = hi;
    v
}

/// Abscissae `lo, lo + step, ...` up to and including `hi` (within half a step).
pub fn arange_inclusive(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(Error::InvalidGrid(format!("bad range {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 0.5).floor() as usize + 1;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

pub(crate) fn check_strictly_increasing(xs: &[f64], min_len: usize) -> Result<()> {
    if xs.len() < min_len {
        return Err(Error::InvalidGrid(format!("need at least {min_len} points, got {}", xs.len())));
    }
    if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite abscissa at index {i}")));
    }
    if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "abscissae not strictly increasing at index {}: {} then {}",
            i + 1,
            xs[i],
            xs[i + 1]
        )));
    }
    Ok(())
}

impl ExtendedRealGridFunction {
    pub fn new(grid: Vec<f64>, values: Vec<ExtendedReal>) -> Result<Self> {
        check_strictly_increasing(&grid, 2)?;
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        let f = Self { grid, values };
        f.check_contiguous_domain()?;
        Ok(f)
    }

    /// Samples `f` on `grid`.
    pub fn sample<F>(grid: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> ExtendedReal,
    {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    fn check_contiguous_domain(&self) -> Result<()> {
        if let Some((first, last)) = self.effective_range() {
            if let Some(offset) = self.values[first..=last].iter().position(|v| !v.is_finite()) {
                return Err(Error::DisconnectedDomain { first, last, gap: first + offset });
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[ExtendedReal] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Largest spacing between consecutive abscissae.
    pub fn max_step(&self) -> f64 {
        self.grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// First and last index with a finite value.
    pub fn effective_range(&self) -> Option<(usize, usize)> {
        let first = self.values.iter().position(|v| v.is_finite())?;
        let last = self.values.iter().rposition(|v| v.is_finite())?;
        Some((first, last))
    }

    /// `(index, x, f(x))` for every finite sample.
    pub fn finite_points(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.grid.iter().zip(&self.values).enumerate().filter_map(|(i, (&x, v))| v.finite().map(|y| (i, x, y)))
    }

    /// Discrete convexity on the effective domain: every finite sample lies on
    /// or below the chord of its finite neighbours, up to `tol`.
    pub fn is_discretely_convex(&self, tol: f64) -> bool {
        let pts: Vec<(f64, f64)> = self.finite_points().map(|(_, x, y)| (x, y)).collect();
        pts.windows(3).all(|w| {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            let (x2, y2) = w[2];
            let chord = y0 + (y2 - y0) * (x1 - x0) / (x2 - x0);
            y1 <= chord + tol * (1.0 + chord.abs())
        })
    }

    /// Two-column CSV `abscissa,value` with `inf` for `+∞`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 24);
        for (x, v) in self.grid.iter().zip(&self.values) {
            let _ = writeln!(out, "{x},{v}");
        }
        out
    }

    /// Parses the CSV written by [`to_csv`](Self::to_csv). Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',');
            let (Some(x), Some(v), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::Parse(format!("line {}: expected two columns", lineno + 1)));
            };
            let x: f64 =
                x.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad abscissa {x:?}", lineno + 1)))?;
            let v: ExtendedReal = v.parse().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            grid.push(x);
            values.push(v);
        }
        Self::new(grid, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate::PosInf;

    #[test]
    fn rejects_bad_grids() {
        assert!(ExtendedRealGridFunction::new(vec![0.0], vec![ExtendedReal::ZERO]).is_err());
        assert!(ExtendedRealGridFunction::new(vec![0.0, 0.0], vec![ExtendedReal::ZERO; 2]).is_err());
        assert!(ExtendedRealGridFunction::new(vec![0.0, 1.0], vec![ExtendedReal::ZERO]).is_err());
    }

    #[test]
    fn rejects_holes_in_the_effective_domain() {
        let v = vec![ExtendedReal::ZERO, PosInf, ExtendedReal::ZERO];
        let err = ExtendedRealGridFunction::new(vec![0.0, 1.0, 2.0], v).unwrap_err();
        assert!(matches!(err, Error::DisconnectedDomain { gap: 1, .. }));
    }

    #[test]
    fn csv_uses_inf_token() {
        let f = ExtendedRealGridFunction::new(vec![0.0, 0.5, 1.0], vec![PosInf, 1.0.into(), 2.0.into()]).unwrap();
        let text = f.to_csv();
        assert_eq!(text, "0,inf\n0.5,1\n1,2\n");
        assert_eq!(ExtendedRealGridFunction::from_csv(&text).unwrap(), f);
        assert!(ExtendedRealGridFunction::from_csv("0,1,2\n").is_err());
    }

    #[test]
    fn grid_helpers() {
        let g = arange_inclusive(0.0, 4.0, 0.01).unwrap();
        assert_eq!(g.len(), 401);
        assert!((g[400] - 4.0).abs() < 1e-12);
        let l = linspace(-1.0, 1.0, 5);
        assert_eq!(l, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn convexity_check() {
        let sq = ExtendedRealGridFunction::sample(linspace(-1.0, 1.0, 21), |x| (x * x).into()).unwrap();
        assert!(sq.is_discretely_convex(1e-12));
        let bump = ExtendedRealGridFunction::sample(linspace(-1.0, 1.0, 21), |x| (-(x * x)).into()).unwrap();
        assert!(!bump.is_discretely_convex(1e-12));
    }
}
