use super::measure::FiniteMeasure;
use super::oracle::{t_entropy, TEntropyOracle};
use crate::conjugate::ExtendedReal;
use crate::cramer::DistributionSpec;
use crate::error::{Error, Result};
use crate::operators::{lambda_functional, FiniteDynamicalSystem};

/// `λ̃_X(φ) = ln M_X(e^{λ(φ)})`, `+∞` outside the domain of `ln M_X`.
pub fn lambda_tilde(s: &FiniteDynamicalSystem, d: &DistributionSpec) -> ExtendedReal {
    d.cgf(lambda_functional(s).exp())
}

/// `λ̂_X(φ) = ln M_X(λ(φ))` for a discrete law.
pub fn lambda_hat(s: &FiniteDynamicalSystem, d: &DistributionSpec) -> Result<ExtendedReal> {
    if !d.is_discrete() {
        return Err(Error::NotDiscrete("lambda_hat"));
    }
    Ok(d.cgf(lambda_functional(s)))
}

/// Shared shape of both conjugates: `(1/p) a τ(ν̃/a) + F(a)` for `a > 0`.
fn scaled_conjugate<F>(
    oracle: &TEntropyOracle,
    s: &FiniteDynamicalSystem,
    nu_tilde: &FiniteMeasure,
    mass_term: F,
) -> Result<ExtendedReal>
where
    F: FnOnce(f64) -> ExtendedReal,
{
    let a = nu_tilde.mass();
    let rest = mass_term(a);
    if !rest.is_finite() {
        return Ok(ExtendedReal::PosInf);
    }
    let tau = t_entropy(oracle, s, &nu_tilde.normalized()?)?;
    Ok(tau.scale(a / s.p) + rest)
}

/// `λ̃_X*(ν̃) = (1/p) a τ(ν̃/a) + (ln M_X ∘ exp)*(a)`, and `0` at `ν̃ = 0`.
pub fn lambda_tilde_conjugate(
    oracle: &TEntropyOracle,
    s: &FiniteDynamicalSystem,
    d: &DistributionSpec,
    nu_tilde: &FiniteMeasure,
) -> Result<ExtendedReal> {
    nu_tilde.check_len(s.n)?;
    if nu_tilde.mass() == 0.0 {
        return Ok(ExtendedReal::ZERO);
    }
    scaled_conjugate(oracle, s, nu_tilde, |a| d.cgf_exp_conjugate(a))
}

/// `λ̂_X*(ν̂) = (1/p) a τ(ν̂/a) + (ln M_X)*(a)`, and `-ln p_0` at `ν̂ = 0`.
pub fn lambda_hat_conjugate(
    oracle: &TEntropyOracle,
    s: &FiniteDynamicalSystem,
    d: &DistributionSpec,
    nu_hat: &FiniteMeasure,
) -> Result<ExtendedReal> {
    nu_hat.check_len(s.n)?;
    let p0 = d.p0()?;
    if nu_hat.mass() == 0.0 {
        return Ok(ExtendedReal::from_f64_or_inf(-p0.ln()));
    }
    scaled_conjugate(oracle, s, nu_hat, |a| d.cramer_transform(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap4() -> FiniteDynamicalSystem {
        // λ = ln 4
        FiniteDynamicalSystem::swap([2f64.ln(), 8f64.ln()])
    }

    #[test]
    fn lambda_tilde_examples() {
        let v = lambda_tilde(&swap4(), &DistributionSpec::exponential(5.0).unwrap());
        assert!((v.value() - 5f64.ln()).abs() < 1e-10);
        assert_eq!(lambda_tilde(&swap4(), &DistributionSpec::exponential(3.0).unwrap()), ExtendedReal::PosInf);
        let zero = FiniteDynamicalSystem::swap([0.0, 0.0]);
        let v = lambda_tilde(&zero, &DistributionSpec::poisson(1.0).unwrap());
        assert!((v.value() - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn lambda_hat_examples() {
        let v = lambda_hat(&swap4(), &DistributionSpec::poisson(1.0).unwrap()).unwrap();
        assert!((v.value() - 3.0).abs() < 1e-10);
        let zero = FiniteDynamicalSystem::swap([0.0, 0.0]);
        assert_eq!(lambda_hat(&zero, &DistributionSpec::poisson(2.0).unwrap()).unwrap().value(), 0.0);
        let half = FiniteDynamicalSystem::identity(vec![2f64.ln()]).unwrap();
        let v = lambda_hat(&half, &DistributionSpec::finite(vec![0.5, 0.5]).unwrap()).unwrap();
        assert!((v.value() - 1.5f64.ln()).abs() < 1e-12);
        assert!(lambda_hat(&zero, &DistributionSpec::exponential(1.0).unwrap()).is_err());
    }

    #[test]
    fn tilde_conjugate_examples() {
        let s = FiniteDynamicalSystem::swap([0.0, 0.0]);
        let e1 = DistributionSpec::exponential(1.0).unwrap();
        let numeric = TEntropyOracle::numeric();
        let v = lambda_tilde_conjugate(&numeric, &s, &e1, &FiniteMeasure::uniform(2)).unwrap();
        assert!((v.value() + 2.0 * 2f64.ln()).abs() < 1e-5);
        assert_eq!(lambda_tilde_conjugate(&numeric, &s, &e1, &FiniteMeasure::zero(2)).unwrap(), ExtendedReal::ZERO);

        let kl = TEntropyOracle::kl_to_uniform();
        let nu = FiniteMeasure::new(vec![2.0, 0.0]).unwrap();
        let v = lambda_tilde_conjugate(&kl, &s, &e1, &nu).unwrap();
        let expected = 2.0 * 2f64.ln() + (2.0 * 2f64.ln() - 3.0 * 3f64.ln());
        assert!((v.value() - expected).abs() < 1e-12);
        // Non-invariant measure under the numeric oracle.
        assert_eq!(lambda_tilde_conjugate(&numeric, &s, &e1, &nu).unwrap(), ExtendedReal::PosInf);
    }

    #[test]
    fn hat_conjugate_examples() {
        let s = FiniteDynamicalSystem::swap([0.0, 0.0]);
        let p2 = DistributionSpec::poisson(2.0).unwrap();
        let numeric = TEntropyOracle::numeric();
        assert!(
            (lambda_hat_conjugate(&numeric, &s, &p2, &FiniteMeasure::zero(2)).unwrap().value() - 2.0).abs() < 1e-15
        );
        let v = lambda_hat_conjugate(&numeric, &s, &p2, &FiniteMeasure::new(vec![1.0, 1.0]).unwrap()).unwrap();
        assert!(v.value().abs() < 1e-5);
        let v = lambda_hat_conjugate(&numeric, &s, &p2, &FiniteMeasure::uniform(2)).unwrap();
        assert!((v.value() - (1.0 - 2f64.ln())).abs() < 1e-5);
        let no_zero = DistributionSpec::finite(vec![0.0, 1.0]).unwrap();
        assert_eq!(
            lambda_hat_conjugate(&numeric, &s, &no_zero, &FiniteMeasure::zero(2)).unwrap(),
            ExtendedReal::PosInf
        );
    }
}
