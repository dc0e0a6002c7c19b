use tentropy_core::conjugate::ExtendedReal;
use tentropy_core::cramer::DistributionSpec;

fn bernoulli_rate(a: f64, q: f64) -> f64 {
    let part = |x: f64, y: f64| if x == 0.0 { 0.0 } else { x * (x / y).ln() };
    part(a, q) + part(1.0 - a, 1.0 - q)
}

#[test]
fn binomial_rate_is_twice_bernoulli_rate() {
    let d = DistributionSpec::finite(vec![0.25, 0.5, 0.25]).unwrap();
    let table = d.cramer_table();
    for i in 1..40 {
        let a = 2.0 * i as f64 / 40.0;
        let expected = 2.0 * bernoulli_rate(a / 2.0, 0.5);
        assert!((table.eval(a).value() - expected).abs() < 1e-9, "a={a}");
    }
    assert!((table.eval(0.0).value() - 4f64.ln()).abs() < 1e-12);
    assert!((table.eval(2.0).value() - 4f64.ln()).abs() < 1e-12);
    assert_eq!(table.eval(2.01), ExtendedReal::PosInf);
    assert_eq!(table.eval(-0.01), ExtendedReal::PosInf);
}

#[test]
fn rate_function_vanishes_only_at_the_mean() {
    for d in [
        DistributionSpec::exponential(0.7).unwrap(),
        DistributionSpec::poisson(3.0).unwrap(),
        DistributionSpec::finite(vec![0.1, 0.2, 0.3, 0.4]).unwrap(),
    ] {
        let table = d.cramer_table();
        let m = d.mean();
        assert!(table.eval(m).value().abs() < 1e-8, "{d}");
        for da in [0.1, 0.5, 1.0] {
            assert!(table.eval(m + da).value() > 0.0, "{d}");
            if m - da > 0.0 {
                assert!(table.eval(m - da).value() > 0.0, "{d}");
            }
        }
    }
}

#[test]
fn poisson_moments_at_unit_rate_are_bell_numbers() {
    let bell = [1.0, 1.0, 2.0, 5.0, 15.0, 52.0, 203.0, 877.0, 4140.0, 21147.0];
    let m = DistributionSpec::poisson(1.0).unwrap().moments(9);
    for (n, b) in bell.iter().enumerate() {
        assert!((m.get(n) - b).abs() < 1e-9 * b, "n={n}");
    }
}

#[test]
fn exponential_moments_are_factorials_over_powers() {
    let m = DistributionSpec::exponential(0.5).unwrap().moments(10);
    let mut f = 1.0;
    for n in 0..=10 {
        if n > 0 {
            f *= n as f64;
        }
        assert!((m.get(n) - f * 2f64.powi(n as i32)).abs() < 1e-9 * m.get(n));
    }
}

#[test]
fn json_and_shorthand_agree() {
    let a: DistributionSpec = serde_json::from_str(r#"{"kind":"poisson","mu":2.5}"#).unwrap();
    let b: DistributionSpec = "poisson:2.5".parse().unwrap();
    assert_eq!(a, b);
    let c: DistributionSpec = b.to_string().parse().unwrap();
    assert_eq!(b, c);
    assert!(serde_json::from_str::<DistributionSpec>(r#"{"kind":"poisson","mu":-1}"#).is_err());
    assert!(serde_json::from_str::<DistributionSpec>(r#"{"kind":"finite","p":[0.5,0.4]}"#).is_err());
    assert!("gamma:1".parse::<DistributionSpec>().is_err());
}

#[test]
fn cgf_exp_conjugate_of_poisson_matches_direct_maximisation() {
    // (ln M ∘ exp)(t) = μ(e^{e^t} - 1); maximise a t - that by dense scan.
    let mu = 1.5;
    let d = DistributionSpec::poisson(mu).unwrap();
    for a in [0.5, 1.0, 3.0] {
        let mut best = f64::NEG_INFINITY;
        let mut t: f64 = -20.0;
        while t < 3.0 {
            best = best.max(a * t - mu * (t.exp().exp() - 1.0));
            t += 1e-5;
        }
        assert!((d.cgf_exp_conjugate(a).value() - best).abs() < 1e-7, "a={a}");
    }
}
