//! The variational side on finite systems: the conjugate `λ*` over
//! measures, t-entropy, the functionals `λ̃_X`, `λ̂_X` and their
//! conjugates, and reconstruction of the functionals from the conjugates.

mod duality;
mod functionals;
mod measure;
mod oracle;

pub use duality::{duality_reconstruct, DualPair, DualityReport};
pub use functionals::{lambda_hat, lambda_hat_conjugate, lambda_tilde, lambda_tilde_conjugate};
pub use measure::{invariant_check, invariant_projection, FiniteMeasure, MASS_TOL};
pub use oracle::{
    lambda_conjugate_detailed, lambda_conjugate_numeric, scaled_t_entropy, t_entropy, LambdaStar, TEntropyOracle,
    BOX_SCHEDULE, DEFAULT_CAP,
};
