use proptest::prelude::*;
use tentropy_core::conjugate::{lf_transform, lf_transform_reference, ExtendedReal, ExtendedRealGridFunction};
use tentropy_core::cramer::DistributionSpec;
use tentropy_core::operators::{spectral_radius, PositiveMatrix};

fn finite_law() -> impl Strategy<Value = DistributionSpec> {
    prop::collection::vec(0.01f64..1.0, 2..8).prop_map(|w| {
        let total: f64 = w.iter().sum();
        let mut p: Vec<f64> = w.iter().map(|x| x / total).collect();
        let head: f64 = p[..p.len() - 1].iter().sum();
        *p.last_mut().unwrap() = 1.0 - head;
        DistributionSpec::finite(p).unwrap()
    })
}

fn matrix() -> impl Strategy<Value = PositiveMatrix> {
    (1usize..7).prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..2.0], n * n)
            .prop_map(move |d| PositiveMatrix::new(n, d).unwrap())
    })
}

proptest! {
    #[test]
    fn rate_function_is_nonnegative(d in finite_law(), a in 0.0f64..7.0) {
        let v = d.cramer_transform(a);
        prop_assert!(v.value() >= -1e-12);
    }

    #[test]
    fn distribution_json_round_trip(d in finite_law()) {
        let text = serde_json::to_string(&d).unwrap();
        prop_assert_eq!(serde_json::from_str::<DistributionSpec>(&text).unwrap(), d);
    }

    #[test]
    fn transforms_agree(ys in prop::collection::vec(-5.0f64..5.0, 2..30), a in -10.0f64..10.0) {
        let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64 * 0.37).collect();
        let f = ExtendedRealGridFunction::new(xs, ys.into_iter().map(ExtendedReal::Finite).collect()).unwrap();
        let fast = lf_transform(&f, &[a]).unwrap().values()[0].value();
        let slow = lf_transform_reference(&f, &[a]).unwrap().values()[0].value();
        prop_assert!((fast - slow).abs() < 1e-9);
    }

    #[test]
    fn radius_is_bounded_by_norms(a in matrix()) {
        let r = spectral_radius(&a);
        prop_assert!(r >= 0.0);
        prop_assert!(r <= a.norm_inf() * (1.0 + 1e-12));
        let max_diag = (0..a.dim()).map(|i| a.get(i, i)).fold(0.0, f64::max);
        prop_assert!(r >= max_diag * (1.0 - 1e-12));
    }

    #[test]
    fn matrix_csv_round_trip(a in matrix()) {
        prop_assert_eq!(PositiveMatrix::from_csv(&a.to_csv()).unwrap(), a);
    }
}
