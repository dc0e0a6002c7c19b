//! Nonnegative laws: generating functions, Cramér transforms and moments.

mod moments;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use moments::MomentSequence;

use crate::conjugate::{
    compose_with_exp_conjugate, lf_transform, linspace, ExtendedReal, ExtendedRealGridFunction, MinimizerDomain,
};
use crate::error::{Error, Result};
use crate::numeric::{golden_section_min, log_sum_exp, xlogx};

/// Sampling window for numeric conjugation of a CGF.
pub const CGF_GRID_LO: f64 = -20.0;
pub const CGF_GRID_HI: f64 = 20.0;
pub const CGF_GRID_POINTS: usize = 20_001;
/// Distance kept from a finite convergence radius when sampling.
pub const CGF_GRID_RADIUS_MARGIN: f64 = 1e-6;

const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// A law on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawSpec")]
pub enum DistributionSpec {
    /// Exponential with rate `mu`.
    Exponential { mu: f64 },
    /// Poisson with mean `mu`.
    Poisson { mu: f64 },
    /// `P(X = n) = p[n]`, `n = 0..p.len()`.
    Finite { p: Vec<f64> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawSpec {
    Exponential { mu: f64 },
    Poisson { mu: f64 },
    Finite { p: Vec<f64> },
}

impl TryFrom<RawSpec> for DistributionSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        match raw {
            RawSpec::Exponential { mu } => Self::exponential(mu),
            RawSpec::Poisson { mu } => Self::poisson(mu),
            RawSpec::Finite { p } => Self::finite(p),
        }
    }
}

fn check_rate(name: &str, mu: f64) -> Result<f64> {
    if mu.is_finite() && mu > 0.0 {
        Ok(mu)
    } else {
        Err(Error::InvalidDistribution(format!("{name} parameter must be positive and finite, got {mu}")))
    }
}

impl DistributionSpec {
    pub fn exponential(mu: f64) -> Result<Self> {
        Ok(Self::Exponential { mu: check_rate("exponential", mu)? })
    }

    pub fn poisson(mu: f64) -> Result<Self> {
        Ok(Self::Poisson { mu: check_rate("poisson", mu)? })
    }

    pub fn finite(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("finite law needs at least one probability".into()));
        }
        if let Some(i) = p.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("p[{i}] = {} is not a probability", p[i])));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self::Finite { p })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exponential",
            Self::Poisson { .. } => "poisson",
            Self::Finite { .. } => "finite",
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self, Self::Exponential { .. })
    }

    /// Radius of convergence of the MGF power series.
    pub fn convergence_radius(&self) -> ExtendedReal {
        match self {
            Self::Exponential { mu } => ExtendedReal::Finite(*mu),
            _ => ExtendedReal::PosInf,
        }
    }

    /// Radius of convergence of the PGF; `+∞` for both discrete kinds here.
    pub fn pgf_radius(&self) -> Result<ExtendedReal> {
        self.require_discrete("pgf")?;
        Ok(ExtendedReal::PosInf)
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Exponential { mu } => 1.0 / mu,
            Self::Poisson { mu } => *mu,
            Self::Finite { p } => p.iter().enumerate().map(|(k, pk)| k as f64 * pk).sum(),
        }
    }

    /// `P(X = 0)` for discrete laws.
    pub fn p0(&self) -> Result<f64> {
        match self {
            Self::Exponential { .. } => Err(Error::NotDiscrete("p0")),
            Self::Poisson { mu } => Ok((-mu).exp()),
            Self::Finite { p } => Ok(p[0]),
        }
    }

    /// `ln P(X = k)` for discrete laws (`-inf` off the support).
    pub fn ln_pmf(&self, k: usize) -> Result<f64> {
        match self {
            Self::Exponential { .. } => Err(Error::NotDiscrete("pmf")),
            Self::Poisson { mu } => {
                let lnk: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
                Ok(-mu + k as f64 * mu.ln() - lnk)
            }
            Self::Finite { p } => Ok(p.get(k).map_or(f64::NEG_INFINITY, |x| x.ln())),
        }
    }

    /// Smallest and largest atoms of a finite law.
    pub fn finite_support(&self) -> Option<(usize, usize)> {
        match self {
            Self::Finite { p } => {
                let lo = p.iter().position(|&x| x > 0.0)?;
                let hi = p.iter().rposition(|&x| x > 0.0)?;
                Some((lo, hi))
            }
            _ => None,
        }
    }

    fn require_discrete(&self, what: &'static str) -> Result<()> {
        if self.is_discrete() {
            Ok(())
        } else {
            Err(Error::NotDiscrete(what))
        }
    }

    /// `M_X(t) = E e^{tX}`.
    pub fn mgf(&self, t: f64) -> ExtendedReal {
        match self.cgf(t) {
            ExtendedReal::Finite(c) => ExtendedReal::from_f64(c.exp()),
            ExtendedReal::PosInf => ExtendedReal::PosInf,
        }
    }

    /// `ln M_X(t)`.
    pub fn cgf(&self, t: f64) -> ExtendedReal {
        match self {
            Self::Exponential { mu } => {
                if t < *mu {
                    ExtendedReal::Finite((mu / (mu - t)).ln())
                } else {
                    ExtendedReal::PosInf
                }
            }
            Self::Poisson { mu } => ExtendedReal::from_f64(mu * t.exp_m1()),
            Self::Finite { p } => ExtendedReal::from_f64(finite_cgf(p, t)),
        }
    }

    /// `g_X(s) = Σ p_n s^n` for discrete laws.
    pub fn pgf(&self, s: f64) -> Result<ExtendedReal> {
        match self {
            Self::Exponential { .. } => Err(Error::NotDiscrete("pgf")),
            Self::Poisson { mu } => Ok(ExtendedReal::from_f64((mu * (s - 1.0)).exp())),
            Self::Finite { p } => Ok(ExtendedReal::from_f64(p.iter().rev().fold(0.0, |acc, &pk| acc * s + pk))),
        }
    }

    /// The grid on which the CGF is sampled for numeric conjugation.
    pub fn cgf_grid(&self) -> Vec<f64> {
        let hi = match self.convergence_radius() {
            ExtendedReal::Finite(r) => (r - CGF_GRID_RADIUS_MARGIN).min(CGF_GRID_HI),
            ExtendedReal::PosInf => CGF_GRID_HI,
        };
        linspace(CGF_GRID_LO, hi, CGF_GRID_POINTS)
    }

    /// The CGF sampled on [`cgf_grid`](Self::cgf_grid).
    pub fn sampled_cgf(&self) -> ExtendedRealGridFunction {
        ExtendedRealGridFunction::sample(self.cgf_grid(), |t| self.cgf(t)).expect("CGF is finite at 0")
    }

    /// `t ↦ ln M_X(e^t)` sampled on `[-20, min(ln R - 1e-6, 20)]`.
    pub fn sampled_cgf_of_exp(&self) -> ExtendedRealGridFunction {
        let hi = match self.convergence_radius() {
            ExtendedReal::Finite(r) => (r.ln() - CGF_GRID_RADIUS_MARGIN).min(CGF_GRID_HI),
            ExtendedReal::PosInf => CGF_GRID_HI,
        };
        let grid = linspace(CGF_GRID_LO, hi, CGF_GRID_POINTS);
        ExtendedRealGridFunction::sample(grid, |t| self.cgf(t.exp())).expect("finite near -inf")
    }

    /// Evaluator for the Cramér transform; for finite laws the CGF is
    /// sampled once and reused across calls.
    pub fn cramer_table(&self) -> CramerTable<'_> {
        let sampled = match self {
            Self::Finite { .. } => Some(SampledCgf::new(&self.sampled_cgf())),
            _ => None,
        };
        CramerTable { law: self, sampled }
    }

    /// `(ln M_X)*(a) = sup_t {a t - ln M_X(t)}`.
    pub fn cramer_transform(&self, a: f64) -> ExtendedReal {
        self.cramer_table().eval(a)
    }

    /// `(ln M_X ∘ exp)*(a)`.
    pub fn cgf_exp_conjugate(&self, a: f64) -> ExtendedReal {
        if a.is_nan() || a < 0.0 {
            return ExtendedReal::PosInf;
        }
        if a == 0.0 {
            return ExtendedReal::ZERO;
        }
        match self {
            Self::Exponential { mu } => ExtendedReal::Finite(a * (mu * a).ln() - (a + 1.0) * (a + 1.0).ln()),
            _ if self.finite_support() == Some((0, 0)) => ExtendedReal::PosInf,
            _ => {
                let table = self.cramer_table();
                compose_with_exp_conjugate(|alpha| table.eval(alpha), a, MinimizerDomain::Positive)
            }
        }
    }

    /// `((ln M_X)* ∘ exp)*(a)`. Closed form for the exponential law, valid
    /// for `a ≥ -1`; other laws use [`cramer_star_exp_conjugate_numeric`](Self::cramer_star_exp_conjugate_numeric).
    pub fn cramer_star_exp_conjugate(&self, a: f64) -> ExtendedReal {
        match self {
            Self::Exponential { mu } => {
                if a >= -1.0 {
                    ExtendedReal::Finite(xlogx(a + 1.0) - a * mu.ln() - a)
                } else {
                    ExtendedReal::PosInf
                }
            }
            _ => self.cramer_star_exp_conjugate_numeric(a),
        }
    }

    /// Conjugate of the grid-sampled `u ↦ (ln M_X)*(e^u)`, with golden
    /// polishing around the grid maximiser.
    pub fn cramer_star_exp_conjugate_numeric(&self, a: f64) -> ExtendedReal {
        let table = self.cramer_table();
        let mut grid = linspace(CGF_GRID_LO, CGF_GRID_HI, CGF_GRID_POINTS);
        if let Some((lo, hi)) = self.finite_support() {
            // Put the support endpoints on the grid exactly.
            for k in [lo, hi] {
                if k > 0 {
                    let u = (k as f64).ln();
                    let i = grid.partition_point(|&g| g < u);
                    if grid.get(i) != Some(&u) {
                        grid.insert(i, u);
                    }
                }
            }
        }
        let h = |u: f64| table.eval(u.exp());
        let Ok(sampled) = ExtendedRealGridFunction::sample(grid, h) else {
            return ExtendedReal::PosInf;
        };
        let Ok(t) = lf_transform(&sampled, &[a]) else {
            return ExtendedReal::PosInf;
        };
        let (value, u_star) = (t.values()[0], t.argmax()[0]);
        let first = sampled.effective_range().map(|(f, _)| sampled.grid()[f]);
        if a < 0.0 && Some(u_star) == first {
            // The objective a·u - h(u) keeps growing towards u = -∞.
            return ExtendedReal::PosInf;
        }
        let g = sampled.grid();
        let i = g.partition_point(|&x| x < u_star);
        let (lo, hi) = (g[i.saturating_sub(1)], g[(i + 1).min(g.len() - 1)]);
        let (_, neg) = golden_section_min(|u| -(a * u - h(u).value()), lo, hi, 1e-13);
        if -neg > value.value() {
            ExtendedReal::from_f64_or_inf(-neg)
        } else {
            value
        }
    }

    pub fn moments(&self, n_max: usize) -> MomentSequence {
        moments::moments(self, n_max)
    }
}

fn finite_cgf(p: &[f64], t: f64) -> f64 {
    log_sum_exp(p.iter().enumerate().filter(|(_, &pk)| pk > 0.0).map(|(k, &pk)| pk.ln() + k as f64 * t))
}

/// Evaluates `(ln M_X)*`; see [`DistributionSpec::cramer_table`].
#[derive(Debug, Clone)]
pub struct CramerTable<'a> {
    law: &'a DistributionSpec,
    sampled: Option<SampledCgf>,
}

/// A sampled finite-law CGF with its chord slopes. The CGF is convex and
/// finite everywhere, so every sample is a hull vertex and the grid
/// maximiser of `a t - Λ(t)` is found by bisecting the slopes.
#[derive(Debug, Clone)]
struct SampledCgf {
    grid: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl SampledCgf {
    fn new(f: &ExtendedRealGridFunction) -> Self {
        let grid = f.grid().to_vec();
        let values: Vec<f64> = f.values().iter().map(|v| v.value()).collect();
        let slopes = grid.windows(2).zip(values.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect();
        Self { grid, values, slopes }
    }

    /// Grid maximiser index of `a t - Λ(t)`.
    fn argmax(&self, a: f64) -> usize {
        self.slopes.partition_point(|&s| s < a)
    }
}

impl CramerTable<'_> {
    pub fn eval(&self, a: f64) -> ExtendedReal {
        if a.is_nan() {
            return ExtendedReal::PosInf;
        }
        match self.law {
            DistributionSpec::Exponential { mu } => {
                if a > 0.0 {
                    ExtendedReal::Finite(mu * a - (mu * a).ln() - 1.0)
                } else {
                    ExtendedReal::PosInf
                }
            }
            DistributionSpec::Poisson { mu } => {
                if a > 0.0 {
                    ExtendedReal::Finite(mu - a + a * (a / mu).ln())
                } else if a == 0.0 {
                    ExtendedReal::Finite(*mu)
                } else {
                    ExtendedReal::PosInf
                }
            }
            DistributionSpec::Finite { p } => {
                let sampled = self.sampled.as_ref().expect("finite law is sampled");
                finite_cramer(p, sampled, a)
            }
        }
    }
}

fn finite_cramer(p: &[f64], sampled: &SampledCgf, a: f64) -> ExtendedReal {
    let lo = p.iter().position(|&x| x > 0.0).expect("validated law");
    let hi = p.iter().rposition(|&x| x > 0.0).expect("validated law");
    let (lo_f, hi_f) = (lo as f64, hi as f64);
    if a < lo_f || a > hi_f {
        return ExtendedReal::PosInf;
    }
    // Limits of the supremum at the support endpoints.
    if a == lo_f {
        return ExtendedReal::Finite(-p[lo].ln());
    }
    if a == hi_f {
        return ExtendedReal::Finite(-p[hi].ln());
    }
    let g = &sampled.grid;
    let i = sampled.argmax(a);
    let value = a * g[i] - sampled.values[i];
    let mut lo_t = g[i.saturating_sub(1)];
    let mut hi_t = g[(i + 1).min(g.len() - 1)];
    // Near the support endpoints the maximiser leaves the window; the
    // objective is concave so a wide golden search is still safe.
    if i == 0 {
        lo_t -= 1e3;
    } else if i == g.len() - 1 {
        hi_t += 1e3;
    }
    let (_, neg) = golden_section_min(|s| -(a * s - finite_cgf(p, s)), lo_t, hi_t, 1e-14);
    ExtendedReal::Finite(value.max(-neg))
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { mu } => write!(f, "exponential:{mu}"),
            Self::Poisson { mu } => write!(f, "poisson:{mu}"),
            Self::Finite { p } => {
                f.write_str("finite:")?;
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `exponential:MU`, `poisson:MU`, `finite:P0,P1,...` or the JSON form.
impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()));
        }
        let (kind, args) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected KIND:PARAMS, got {s:?}")))?;
        let nums = args
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let single = || match nums.as_slice() {
            [mu] => Ok(*mu),
            _ => Err(Error::Parse(format!("{kind} takes one parameter"))),
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "exponential" | "exp" => Self::exponential(single()?),
            "poisson" => Self::poisson(single()?),
            "finite" => Self::finite(nums),
            other => Err(Error::Parse(format!("unknown distribution kind {other:?}"))),
        }
    }
}
