//! Parsers for command-line values and input files.

use std::fs;
use std::path::Path;

use tentropy_core::conjugate::{arange_inclusive, ExtendedReal, ExtendedRealGridFunction};
use tentropy_core::cramer::DistributionSpec;
use tentropy_core::defaults::NumericDefaults;
use tentropy_core::operators::{FiniteDynamicalSystem, OperatorSeriesSpec, PositiveMatrix};
use tentropy_core::tentropy::{FiniteMeasure, TEntropyOracle};
use tentropy_core::{Error, Result};

/// Failure before any computation: bad flags, unreadable or malformed input.
#[derive(Debug)]
pub enum InputError {
    Io { path: String, message: String },
    Core(Error),
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        Self::Core(e)
    }
}

pub type InputResult<T> = std::result::Result<T, InputError>;

pub fn read_text(path: &Path) -> InputResult<String> {
    fs::read_to_string(path).map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// `lo:hi:step`, inclusive of `hi`.
pub fn grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(Error::Parse(format!("grid must be lo:hi:step, got {spec:?}")));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?} in grid")));
    arange_inclusive(num(lo)?, num(hi)?, num(step)?)
}

/// Shorthand (`poisson:2`), inline JSON, or `@file.json`.
pub fn distribution(spec: &str) -> InputResult<DistributionSpec> {
    match spec.strip_prefix('@') {
        Some(path) => Ok(read_text(Path::new(path))?.parse()?),
        None => Ok(spec.parse()?),
    }
}

pub fn system(path: &Path, phi: Option<Vec<f64>>) -> InputResult<FiniteDynamicalSystem> {
    let text = read_text(path)?;
    let s: FiniteDynamicalSystem =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(match phi {
        Some(phi) => s.with_phi(phi)?,
        None => s,
    })
}

/// CSV rows, or a JSON array of rows when the file ends in `.json`.
pub fn matrix(path: &Path) -> InputResult<PositiveMatrix> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let rows: Vec<Vec<f64>> =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Ok(PositiveMatrix::from_rows(&rows)?)
    } else {
        Ok(PositiveMatrix::from_csv(&text)?)
    }
}

pub fn sampled_function(path: &Path) -> InputResult<ExtendedRealGridFunction> {
    Ok(ExtendedRealGridFunction::from_csv(&read_text(path)?)?)
}

/// `exp`, `cosh`, `geometric:MU`, `mgf:DIST`, `pgf:DIST` or `poly:c0,c1,...`.
pub fn series(spec: &str) -> InputResult<OperatorSeriesSpec> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let bad = || Error::Parse(format!("unknown series {spec:?}"));
    Ok(match kind {
        "exp" if arg.is_empty() => OperatorSeriesSpec::exp(),
        "cosh" if arg.is_empty() => OperatorSeriesSpec::cosh(),
        "geometric" => {
            OperatorSeriesSpec::geometric(arg.parse().map_err(|_| Error::Parse(format!("bad rate {arg:?}")))?)?
        }
        "mgf" => OperatorSeriesSpec::mgf(&distribution(arg)?),
        "pgf" => OperatorSeriesSpec::pgf(&distribution(arg)?)?,
        "poly" => OperatorSeriesSpec::polynomial(numbers(arg)?)?,
        _ => return Err(bad().into()),
    })
}

pub fn numbers(list: &str) -> Result<Vec<f64>> {
    list.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {x:?}")))).collect()
}

pub fn measure(weights: &[f64]) -> Result<FiniteMeasure> {
    FiniteMeasure::new(weights.to_vec())
}

pub fn oracle(name: &str, cap: f64) -> Result<TEntropyOracle> {
    match name {
        "numeric" => Ok(TEntropyOracle::Numeric { cap }),
        "kl" => Ok(TEntropyOracle::kl_to_uniform()),
        other => Err(Error::Parse(format!("unknown oracle {other:?}; expected numeric or kl"))),
    }
}

pub fn defaults(path: Option<&Path>) -> InputResult<NumericDefaults> {
    match path {
        None => Ok(NumericDefaults::default()),
        Some(p) => Ok(serde_json::from_str(&read_text(p)?).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?),
    }
}

/// `+∞` prints as `inf`, matching the CSV reader.
pub fn csv_value(v: ExtendedReal) -> String {
    v.to_string()
}
