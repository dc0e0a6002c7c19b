use tentropy_core::cramer::DistributionSpec;
use tentropy_core::tilting::{contraction_discrete, min_entropy_given_mean, min_form3, objective, tilt};
use tentropy_core::Error;

#[test]
fn value_does_not_increase_with_truncation() {
    for a in [0.5, 1.0, 3.0] {
        let mut prev = f64::INFINITY;
        for n in [10, 20, 50, 100, 200, 400] {
            let v = min_entropy_given_mean(a, n).unwrap().value;
            assert!(v <= prev + 1e-12, "a={a} N={n}");
            prev = v;
        }
    }
}

#[test]
fn optimum_satisfies_constraints_and_kkt() {
    let d = DistributionSpec::exponential(2.0).unwrap();
    for a in [0.3, 1.0, 2.5] {
        let s = min_form3(&d, a, 300).unwrap();
        assert!((s.optimum.mass() - 1.0).abs() < 1e-12);
        assert!((s.mean_achieved() - a).abs() < 1e-9);
        assert!(s.kkt_residual < 1e-8, "{}", s.kkt_residual);
        assert!(s.optimum.t().iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn poisson_tilt_is_poisson_at_the_target_mean() {
    let mu = 2.0;
    let d = DistributionSpec::poisson(mu).unwrap();
    for a in [0.5, 1.0, 4.0] {
        let s = contraction_discrete(&d, a, 300).unwrap();
        let mut pk = (-a).exp();
        let mut tv = 0.0;
        for (k, &t) in s.optimum.t().iter().enumerate() {
            if k > 0 {
                pk *= a / k as f64;
            }
            tv += (t - pk).abs();
        }
        assert!(0.5 * tv < 1e-10, "a={a}");
        assert!((s.theta - (a / mu).ln()).abs() < 1e-8);
    }
}

#[test]
fn value_is_convex_in_the_mean() {
    let d = DistributionSpec::poisson(1.0).unwrap();
    let v = |a: f64| contraction_discrete(&d, a, 200).unwrap().value;
    let mut a = 0.2;
    while a < 6.0 {
        assert!(v(a) <= 0.5 * (v(a - 0.1) + v(a + 0.1)) + 1e-10, "a={a}");
        a += 0.3;
    }
}

#[test]
fn three_point_law_matches_dense_segment_search() {
    // Feasible set at mean 1.5: t = (1/4 - s/2, s, 3/4 - s/2), s in [0, 1/2].
    let d = DistributionSpec::finite(vec![0.25, 0.5, 0.25]).unwrap();
    let s = contraction_discrete(&d, 1.5, 300).unwrap();
    let w = [0.25f64.ln(), 0.5f64.ln(), 0.25f64.ln()];
    let mut best = f64::INFINITY;
    for i in 0..=500_000 {
        let x = i as f64 * 1e-6;
        best = best.min(objective(&[0.25 - x / 2.0, x, 0.75 - x / 2.0], &w));
    }
    assert!((s.value - best).abs() < 1e-6);
    let exact = [1.0 / 16.0, 6.0 / 16.0, 9.0 / 16.0];
    for (t, e) in s.optimum.t().iter().zip(exact) {
        assert!((t - e).abs() < 1e-10);
    }
}

#[test]
fn infeasible_means_are_reported() {
    assert!(matches!(min_entropy_given_mean(-1.0, 10), Err(Error::MeanOutsideCone(_))));
    assert!(matches!(min_entropy_given_mean(11.0, 10), Err(Error::IncreaseTruncation { .. })));
    let gap = DistributionSpec::finite(vec![0.5, 0.0, 0.5]).unwrap();
    assert!(matches!(contraction_discrete(&gap, 1.0, 10), Err(Error::SupportGap(1))));
    let s = tilt(&[0.0, 0.0, 0.0], 2.0).unwrap();
    assert!(s.boundary);
    assert_eq!(s.optimum.t(), &[0.0, 0.0, 1.0]);
}
