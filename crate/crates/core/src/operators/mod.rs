//! Positive matrices as finite weighted composition operators: spectral
//! radius, the spectral exponent `λ(φ) = ln r(e^φ C_α)`, power series of
//! operators and the identity `r(f(A)) = f(r(A))`.

mod matrix;
mod series;
mod spectral;
mod system;

pub use matrix::PositiveMatrix;
pub use series::check_rfA;
pub use series::{
    operator_series, operator_series_detailed, pgf_of_operator, OperatorSeriesSpec, PgfReport, RfaReport,
    SeriesEvaluation, MAX_TERMS, REPORT_SERIES_TOL,
};
pub use spectral::{spectral_radius, spectral_radius_detailed, SpectralEstimate, SpectralMethod};
pub use system::{cycle_mean_exponent, lambda_functional, wco_matrix, FiniteDynamicalSystem};
