use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::matrix::PositiveMatrix;
use super::spectral::spectral_radius;
use crate::conjugate::ExtendedReal;
use crate::cramer::DistributionSpec;
use crate::error::{Error, Result};
use crate::numeric::ln_factorials;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 10_000;

type LnCoefficients = Arc<dyn Fn(usize) -> Vec<f64> + Send + Sync>;
type Scalar = Arc<dyn Fn(f64) -> ExtendedReal + Send + Sync>;

/// `f(t) = Σ c_n t^n` with `c_n ≥ 0` and radius of convergence `R`.
///
/// Coefficients are produced as `ln c_n` (`-inf` for zero) so that
/// factorially small or large terms stay representable.
#[derive(Clone)]
pub struct OperatorSeriesSpec {
    name: String,
    radius: ExtendedReal,
    ln_coefficients: LnCoefficients,
    scalar: Scalar,
}

impl fmt::Debug for OperatorSeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorSeriesSpec").field("name", &self.name).field("radius", &self.radius).finish()
    }
}

impl OperatorSeriesSpec {
    /// `ln_coefficients(n_max)` must return `ln c_0..=ln c_{n_max}`.
    pub fn custom<C, S>(name: impl Into<String>, radius: ExtendedReal, ln_coefficients: C, scalar: S) -> Self
    where
        C: Fn(usize) -> Vec<f64> + Send + Sync + 'static,
        S: Fn(f64) -> ExtendedReal + Send + Sync + 'static,
    {
        Self { name: name.into(), radius, ln_coefficients: Arc::new(ln_coefficients), scalar: Arc::new(scalar) }
    }

    pub fn exp() -> Self {
        Self::custom(
            "exp",
            ExtendedReal::PosInf,
            |n| ln_factorials(n).iter().map(|x| -x).collect(),
            |t| ExtendedReal::from_f64_or_inf(t.exp()),
        )
    }

    /// `μ / (μ - t) = Σ (t/μ)^n`, the MGF of Exponential(μ).
    pub fn geometric(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidDistribution(format!("geometric series needs mu > 0, got {mu}")));
        }
        Ok(Self::custom(
            format!("geometric({mu})"),
            ExtendedReal::Finite(mu),
            move |n| (0..=n).map(|k| -(k as f64) * mu.ln()).collect(),
            move |t| if t < mu { ExtendedReal::Finite(mu / (mu - t)) } else { ExtendedReal::PosInf },
        ))
    }

    /// `cosh t = Σ t^{2k} / (2k)!`.
    pub fn cosh() -> Self {
        Self::custom(
            "cosh",
            ExtendedReal::PosInf,
            |n| {
                ln_factorials(n)
                    .iter()
                    .enumerate()
                    .map(|(k, x)| if k % 2 == 0 { -x } else { f64::NEG_INFINITY })
                    .collect()
            },
            |t| ExtendedReal::from_f64_or_inf(t.cosh()),
        )
    }

    /// `M_X(t) = Σ EX^n t^n / n!`.
    pub fn mgf(d: &DistributionSpec) -> Self {
        let law = d.clone();
        let scalar_law = d.clone();
        Self::custom(
            format!("mgf({d})"),
            d.convergence_radius(),
            move |n| law.moments(n).ln_mgf_coefficients(),
            move |t| scalar_law.mgf(t),
        )
    }

    /// `g_X(s) = Σ p_n s^n` for a discrete law.
    pub fn pgf(d: &DistributionSpec) -> Result<Self> {
        let radius = d.pgf_radius()?;
        let law = d.clone();
        let scalar_law = d.clone();
        Ok(Self::custom(
            format!("pgf({d})"),
            radius,
            move |n| (0..=n).map(|k| law.ln_pmf(k).expect("discrete")).collect(),
            move |s| scalar_law.pgf(s).expect("discrete"),
        ))
    }

    /// A polynomial with the given nonnegative coefficients.
    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self> {
        if let Some(i) = coefficients.iter().position(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::NegativeCoefficient { index: i, value: coefficients[i] });
        }
        let ln_c: Vec<f64> = coefficients.iter().map(|c| c.ln()).collect();
        let c = coefficients.clone();
        Ok(Self::custom(
            "polynomial",
            ExtendedReal::PosInf,
            move |n| (0..=n).map(|k| ln_c.get(k).copied().unwrap_or(f64::NEG_INFINITY)).collect(),
            move |t| ExtendedReal::from_f64_or_inf(c.iter().rev().fold(0.0, |acc, ck| acc * t + ck)),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> ExtendedReal {
        self.radius
    }

    pub fn ln_coefficients(&self, n_max: usize) -> Vec<f64> {
        (self.ln_coefficients)(n_max)
    }

    pub fn coefficients(&self, n_max: usize) -> Vec<f64> {
        self.ln_coefficients(n_max).into_iter().map(f64::exp).collect()
    }

    pub fn scalar_eval(&self, t: f64) -> ExtendedReal {
        (self.scalar)(t)
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if ExtendedReal::Finite(r) >= self.radius {
            Err(Error::SeriesDiverges { spectral_radius: r, radius: self.radius.value() })
        } else {
            Ok(())
        }
    }
}

/// `f(A)` together with truncation diagnostics.
#[derive(Debug, Clone)]
pub struct SeriesEvaluation {
    pub matrix: PositiveMatrix,
    /// Number of terms summed (`N + 1`).
    pub terms: usize,
    /// Certified bound on `‖Σ_{n>N} c_n A^n‖_∞`, up to rounding.
    pub tail_bound: f64,
    pub spectral_radius: f64,
}

/// `Σ_{n≤N} c_n A^n`, with `N` the first index at which the tail bound
///
/// ```text
/// ‖Σ_{n>N} c_n A^n‖ ≤ K (f(ρ) - Σ_{n≤N} c_n ρ^n),   ρ = ‖A^N‖^{1/N},
///                                                   K = max_{s<N} ‖A^s‖ / ρ^s
/// ```
///
/// drops below `tol` (or below the rounding noise of its own evaluation).
/// It uses `‖A^{qN+s}‖ ≤ ‖A^N‖^q ‖A^s‖` and needs `ρ < R`.
pub fn operator_series(f: &OperatorSeriesSpec, a: &PositiveMatrix, tol: f64) -> Result<PositiveMatrix> {
    operator_series_detailed(f, a, tol).map(|s| s.matrix)
}

pub fn operator_series_detailed(f: &OperatorSeriesSpec, a: &PositiveMatrix, tol: f64) -> Result<SeriesEvaluation> {
    let r = spectral_radius(a);
    f.check_radius(r)?;
    let n = a.dim();
    let mut ln_c = f.ln_coefficients(63.min(MAX_TERMS));
    if let Some(i) = ln_c.iter().position(|x| x.is_nan()) {
        return Err(Error::NegativeCoefficient { index: i, value: f64::NAN });
    }
    let mut result = PositiveMatrix::zeros(n);
    // power = A^k / ‖A^k‖, ln_norms[k] = ln ‖A^k‖
    let mut power = PositiveMatrix::identity(n);
    let mut ln_norm = 0.0;
    let mut ln_norms = Vec::new();
    let mut best_tail = f64::INFINITY;

    for k in 0..=MAX_TERMS {
        if k >= ln_c.len() {
            ln_c = f.ln_coefficients((2 * ln_c.len()).min(MAX_TERMS + 1) - 1);
        }
        if k > 0 {
            let next = power.matmul(a);
            let s = next.norm_inf();
            if s == 0.0 {
                // A^k = 0: the series is a polynomial.
                return Ok(SeriesEvaluation { matrix: result, terms: k, tail_bound: 0.0, spectral_radius: r });
            }
            power = next.scaled(1.0 / s);
            ln_norm += s.ln();
        }
        ln_norms.push(ln_norm);
        if ln_c[k] > f64::NEG_INFINITY {
            result.add_scaled((ln_c[k] + ln_norm).exp(), &power);
        }
        if k == 0 || !(k < 64 || k % 16 == 0) {
            continue;
        }
        let ln_rho = ln_norm / k as f64;
        let rho = ln_rho.exp();
        let Some(f_rho) = f.scalar_eval(rho).finite().filter(|_| ExtendedReal::Finite(rho) < f.radius()) else {
            continue;
        };
        let ln_k =
            ln_norms[..k].iter().enumerate().map(|(s, l)| l - s as f64 * ln_rho).fold(f64::NEG_INFINITY, f64::max);
        let big_k = ln_k.exp();
        let partial: f64 = ln_c[..=k].iter().enumerate().map(|(j, c)| (c + j as f64 * ln_rho).exp()).sum();
        let tail = big_k * (f_rho - partial).max(0.0);
        let noise = 64.0 * f64::EPSILON * (k as f64 + 1.0) * big_k * f_rho;
        best_tail = best_tail.min(tail);
        if tail <= tol || tail <= noise {
            return Ok(SeriesEvaluation { matrix: result, terms: k + 1, tail_bound: tail, spectral_radius: r });
        }
    }
    Err(Error::TruncationCap { cap: MAX_TERMS, tail_bound: best_tail, tol })
}

/// Both sides of `r(f(A)) = f(r(A))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RfaReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(1, rhs)`.
    pub residual: f64,
    pub spectral_radius: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// Relative truncation tolerance used when a report needs `f(A)`.
pub const REPORT_SERIES_TOL: f64 = 1e-13;

#[allow(non_snake_case)]
pub fn check_rfA(f: &OperatorSeriesSpec, a: &PositiveMatrix) -> Result<RfaReport> {
    let r = spectral_radius(a);
    f.check_radius(r)?;
    let rhs = f.scalar_eval(r).value();
    let series = operator_series_detailed(f, a, REPORT_SERIES_TOL * rhs.max(1.0))?;
    let lhs = spectral_radius(&series.matrix);
    Ok(RfaReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / rhs.max(1.0),
        spectral_radius: r,
        terms: series.terms,
        tail_bound: series.tail_bound,
    })
}

/// `r(g_X(A))` against `ln r(g_X(A)) = ln M_X(ln r(A))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PgfReport {
    pub r_gx: f64,
    pub ln_r_gx: f64,
    /// `ln M_X(ln r(A))`.
    pub expected: f64,
    pub identity_check: f64,
    pub spectral_radius: f64,
}

pub fn pgf_of_operator(d: &DistributionSpec, a: &PositiveMatrix) -> Result<PgfReport> {
    let g = OperatorSeriesSpec::pgf(d)?;
    let r = spectral_radius(a);
    g.check_radius(r)?;
    if r == 0.0 {
        return Err(Error::LnRUndefined);
    }
    let scale = g.scalar_eval(r).value().max(1.0);
    let series = operator_series_detailed(&g, a, REPORT_SERIES_TOL * scale)?;
    let r_gx = spectral_radius(&series.matrix);
    let expected = d.cgf(r.ln()).value();
    Ok(PgfReport {
        r_gx,
        ln_r_gx: r_gx.ln(),
        expected,
        identity_check: (r_gx.ln() - expected).abs(),
        spectral_radius: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn antidiag() -> PositiveMatrix {
        PositiveMatrix::from_rows(&[vec![0.0, 2.0], vec![8.0, 0.0]]).unwrap()
    }

    #[test]
    fn exp_of_antidiagonal() {
        // A² = 16 I, so e^A = cosh 4 · I + (sinh 4 / 4) · A.
        let e = operator_series(&OperatorSeriesSpec::exp(), &antidiag(), 1e-12).unwrap();
        let (c, s) = (4f64.cosh(), 4f64.sinh() / 4.0);
        let exact = PositiveMatrix::from_rows(&[vec![c, 2.0 * s], vec![8.0 * s, c]]).unwrap();
        assert!(e.max_abs_diff(&exact) < 1e-10);
        assert!((spectral_radius(&e) - 4f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn constant_series_gives_identity() {
        let one = OperatorSeriesSpec::polynomial(vec![1.0]).unwrap();
        assert_eq!(operator_series(&one, &antidiag(), 1e-12).unwrap(), PositiveMatrix::identity(2));
        assert!(OperatorSeriesSpec::polynomial(vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn divergence_is_reported() {
        let g = OperatorSeriesSpec::geometric(3.0).unwrap();
        assert!(matches!(operator_series(&g, &antidiag(), 1e-12), Err(Error::SeriesDiverges { .. })));
        assert!(matches!(check_rfA(&g, &antidiag()), Err(Error::SeriesDiverges { .. })));
    }

    #[test]
    fn rfa_examples() {
        let rep = check_rfA(&OperatorSeriesSpec::exp(), &antidiag()).unwrap();
        assert!(rep.residual < 1e-8);
        let rep = check_rfA(&OperatorSeriesSpec::geometric(5.0).unwrap(), &antidiag()).unwrap();
        assert!((rep.rhs - 5.0).abs() < 1e-12 && rep.residual < 1e-8);
        let rep = check_rfA(&OperatorSeriesSpec::cosh(), &PositiveMatrix::zeros(3)).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (1.0, 1.0));
    }

    #[test]
    fn pgf_examples() {
        let p2 = DistributionSpec::poisson(2.0).unwrap();
        let rep = pgf_of_operator(&p2, &antidiag()).unwrap();
        assert!((rep.ln_r_gx - 6.0).abs() < 1e-8);
        let point = DistributionSpec::finite(vec![1.0]).unwrap();
        let rep = pgf_of_operator(&point, &antidiag()).unwrap();
        assert_eq!(rep.r_gx, 1.0);
        assert!(matches!(pgf_of_operator(&p2, &PositiveMatrix::zeros(2)), Err(Error::LnRUndefined)));
        assert!(pgf_of_operator(&DistributionSpec::exponential(1.0).unwrap(), &antidiag()).is_err());
    }
}
