use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tentropy_core::cramer::DistributionSpec;
use tentropy_core::operators::{
    lambda_functional, operator_series, spectral_radius, wco_matrix, FiniteDynamicalSystem, OperatorSeriesSpec,
    PositiveMatrix,
};
use tentropy_core::Error;

fn random_matrix<R: Rng>(rng: &mut R, n: usize, density: f64) -> PositiveMatrix {
    let data = (0..n * n).map(|_| if rng.random::<f64>() < density { rng.random::<f64>() } else { 0.0 }).collect();
    PositiveMatrix::new(n, data).unwrap()
}

fn to_nalgebra(a: &PositiveMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.dim(), a.dim(), a.data())
}

fn nalgebra_radius(a: &PositiveMatrix) -> f64 {
    to_nalgebra(a).complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_diff(a: &PositiveMatrix, b: &DMatrix<f64>) -> f64 {
    let n = a.dim();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (a.get(i, j) - b[(i, j)]).abs()).fold(0.0, f64::max)
}

#[test]
fn spectral_radius_matches_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let density = rng.random_range(0.2..1.0);
        let a = random_matrix(&mut rng, n, density);
        let r = spectral_radius(&a);
        // Eigenvalue solvers smear a defective zero eigenvalue to ~ε^{1/n}; check nilpotency directly.
        let power = (1..n).fold(a.clone(), |p, _| p.matmul(&a));
        if power.norm_inf() == 0.0 {
            assert_eq!(r, 0.0);
            continue;
        }
        let e = nalgebra_radius(&a);
        assert!((r - e).abs() < 1e-8 * e.max(1.0), "{r} vs {e}\n{}", a.to_csv());
    }
}

#[test]
fn geometric_series_is_the_resolvent() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f = OperatorSeriesSpec::geometric(5.0).unwrap();
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let a = random_matrix(&mut rng, n, 0.7);
        let r = spectral_radius(&a);
        if r == 0.0 {
            continue;
        }
        let a = a.scaled(rng.random_range(0.1..4.0) / r);
        let series = operator_series(&f, &a, 1e-12).unwrap();
        let resolvent = (DMatrix::identity(n, n) * 5.0 - to_nalgebra(&a)).try_inverse().unwrap() * 5.0;
        let scale = resolvent.amax();
        assert!(max_diff(&series, &resolvent) < 1e-8 * scale.max(1.0));
    }
}

#[test]
fn exponential_series_matches_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let a = random_matrix(&mut rng, n, 0.6).scaled(2.0);
        let series = operator_series(&OperatorSeriesSpec::exp(), &a, 1e-12).unwrap();
        let expected = to_nalgebra(&a).exp();
        assert!(max_diff(&series, &expected) < 1e-9 * expected.amax().max(1.0));
    }
}

#[test]
fn spectral_radius_is_monotone_and_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let n = rng.random_range(1..=8);
        let a = random_matrix(&mut rng, n, 0.5);
        let mut b = a.clone();
        b.add_scaled(1.0, &random_matrix(&mut rng, n, 0.3));
        assert!(a.le(&b));
        let (ra, rb) = (spectral_radius(&a), spectral_radius(&b));
        assert!(ra <= rb * (1.0 + 1e-12) + 1e-300);
        let c = rng.random_range(0.1..10.0);
        assert!((spectral_radius(&a.scaled(c)) - c * ra).abs() < 1e-10 * (c * ra).max(1.0));
    }
}

#[test]
fn lambda_is_convex_in_phi() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let n = rng.random_range(1..=8);
        let alpha: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let p1: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let p2: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let s = FiniteDynamicalSystem::new(n, alpha, p1.clone(), 1.0).unwrap();
        let t = rng.random_range(0.0..1.0);
        let mid: Vec<f64> = p1.iter().zip(&p2).map(|(x, y)| (1.0 - t) * x + t * y).collect();
        let l = |phi: Vec<f64>| lambda_functional(&s.with_phi(phi).unwrap());
        assert!(l(mid) <= (1.0 - t) * l(p1) + t * l(p2) + 1e-10);
    }
}

#[test]
fn weighted_composition_matrix_radius_agrees_with_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..100 {
        let n = rng.random_range(1..=8);
        let alpha: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let phi: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = FiniteDynamicalSystem::new(n, alpha, phi, 1.0).unwrap();
        let w = wco_matrix(&s);
        assert!((lambda_functional(&s).exp() - nalgebra_radius(&w)).abs() < 1e-8);
    }
}

#[test]
fn series_outside_radius_is_rejected() {
    let a = PositiveMatrix::from_rows(&[vec![0.0, 3.0], vec![3.0, 0.0]]).unwrap();
    let f = OperatorSeriesSpec::geometric(2.0).unwrap();
    assert!(matches!(operator_series(&f, &a, 1e-12), Err(Error::SeriesDiverges { .. })));
    let pgf = OperatorSeriesSpec::pgf(&DistributionSpec::finite(vec![0.5, 0.5]).unwrap()).unwrap();
    let v = operator_series(&pgf, &a, 1e-12).unwrap();
    for (x, y) in v.data().iter().zip([0.5, 1.5, 1.5, 0.5]) {
        assert!((x - y).abs() < 1e-15);
    }
}
