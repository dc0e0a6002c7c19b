//! Spectral radius of a nonnegative matrix.
//!
//! The positive-entry graph is split into strongly connected components;
//! `r(A)` is the largest radius over the irreducible diagonal blocks, and
//! `0` when there are none (then `A` is nilpotent). Each irreducible block
//! is handled by shifted power iteration
//!
//! ```text
//! x ← (B + c I) x / ‖(B + c I) x‖_∞,    c = current estimate of r(B),
//! ```
//!
//! which keeps `x > 0` and turns a cyclic peripheral spectrum into a single
//! dominant eigenvalue `r + c`. The estimate is accepted once the
//! Collatz–Wielandt bracket `min (Bx)_i/x_i ≤ r(B) ≤ max (Bx)_i/x_i` is
//! tight. Blocks that do not certify fall back to Gelfand's formula,
//! `ln r = lim 2^{-j} ln ‖B^{2^j}‖`, evaluated by normalised squaring.

use serde::Serialize;

use super::matrix::PositiveMatrix;

pub const MAX_POWER_ITERATIONS: usize = 20_000;
/// Relative width of the Collatz–Wielandt bracket accepted as converged.
pub const BRACKET_TOL: f64 = 1e-13;
/// Iterations without a tighter bracket before giving up on power iteration.
const STALL_WINDOW: usize = 2_000;
/// Number of squarings in the Gelfand fallback.
pub const GELFAND_SQUARINGS: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMethod {
    /// No cycle in the positive-entry graph.
    Nilpotent,
    /// Every dominant block is a single diagonal entry.
    Diagonal,
    PowerIteration,
    Gelfand,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub radius: f64,
    /// Certified lower and upper bounds; equal to `radius` for exact methods
    /// and for the Gelfand fallback.
    pub lower: f64,
    pub upper: f64,
    pub method: SpectralMethod,
    pub iterations: usize,
}

pub fn spectral_radius(a: &PositiveMatrix) -> f64 {
    spectral_radius_detailed(a).radius
}

pub fn spectral_radius_detailed(a: &PositiveMatrix) -> SpectralEstimate {
    let exact = |r: f64, method| SpectralEstimate { radius: r, lower: r, upper: r, method, iterations: 0 };
    let mut best = exact(0.0, SpectralMethod::Nilpotent);
    for block in irreducible_blocks(a) {
        let est = if block.len() == 1 {
            exact(a.get(block[0], block[0]), SpectralMethod::Diagonal)
        } else {
            let sub = a.submatrix(&block);
            power_iteration(&sub).unwrap_or_else(|| exact(gelfand(&sub), SpectralMethod::Gelfand))
        };
        if est.radius > best.radius || best.method == SpectralMethod::Nilpotent {
            best = est;
        }
    }
    best
}

/// Index sets of the strongly connected components that carry a cycle.
fn irreducible_blocks(a: &PositiveMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let reach = a.reachability();
    let mut assigned = vec![false; n];
    let mut blocks = Vec::new();
    for i in 0..n {
        if assigned[i] || !reach[i][i] {
            continue;
        }
        let block: Vec<usize> = (i..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &block {
            assigned[j] = true;
        }
        blocks.push(block);
    }
    blocks
}

fn power_iteration(b: &PositiveMatrix) -> Option<SpectralEstimate> {
    let m = b.dim();
    let mut x = vec![1.0; m];
    let mut best_spread = f64::INFINITY;
    let mut last_improvement = 0;
    for it in 1..=MAX_POWER_ITERATIONS {
        let y = b.matvec(&x);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (yi, xi) in y.iter().zip(&x) {
            let q = yi / xi;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        if !(lo.is_finite() && hi.is_finite()) {
            return None;
        }
        let spread = hi - lo;
        if spread <= BRACKET_TOL * hi {
            return Some(SpectralEstimate {
                radius: 0.5 * (lo + hi),
                lower: lo,
                upper: hi,
                method: SpectralMethod::PowerIteration,
                iterations: it,
            });
        }
        if spread < best_spread * (1.0 - 1e-3) {
            best_spread = spread;
            last_improvement = it;
        } else if it - last_improvement > STALL_WINDOW {
            return None;
        }
        let c = 0.5 * (lo + hi);
        let mut z: Vec<f64> = y.iter().zip(&x).map(|(yi, xi)| yi + c * xi).collect();
        let scale = z.iter().copied().fold(0.0, f64::max);
        z.iter_mut().for_each(|v| *v /= scale);
        if z.iter().any(|&v| v < 1e-280) {
            return None;
        }
        x = z;
    }
    None
}

/// `r(B)` from `‖B^{2^J}‖^{2^{-J}}`, keeping the powers normalised.
fn gelfand(b: &PositiveMatrix) -> f64 {
    let s0 = b.norm_inf();
    if s0 == 0.0 {
        return 0.0;
    }
    let mut m = b.scaled(1.0 / s0);
    // ln r ≈ ln s0 + Σ_j 2^{-j} ln s_j
    let mut log_r = s0.ln();
    for j in 1..=GELFAND_SQUARINGS {
        let sq = m.matmul(&m);
        let s = sq.norm_inf();
        if s == 0.0 {
            return 0.0;
        }
        log_r += s.ln() / 2f64.powi(j as i32);
        m = sq.scaled(1.0 / s);
    }
    log_r.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> PositiveMatrix {
        PositiveMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn antidiagonal_has_radius_four() {
        let a = m(&[&[0.0, 2.0], &[8.0, 0.0]]);
        let e = spectral_radius_detailed(&a);
        assert!((e.radius - 4.0).abs() < 1e-12, "{e:?}");
        assert_eq!(e.method, SpectralMethod::PowerIteration);
    }

    #[test]
    fn identity_and_nilpotent() {
        assert_eq!(spectral_radius(&PositiveMatrix::identity(3)), 1.0);
        let n = m(&[&[0.0, 1.0, 5.0], &[0.0, 0.0, 2.0], &[0.0, 0.0, 0.0]]);
        let e = spectral_radius_detailed(&n);
        assert_eq!(e.radius, 0.0);
        assert_eq!(e.method, SpectralMethod::Nilpotent);
        assert_eq!(spectral_radius(&PositiveMatrix::zeros(2)), 0.0);
    }

    #[test]
    fn reducible_takes_the_largest_block() {
        let a = m(&[&[1.0, 3.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 4.0, 0.0]]);
        assert!((spectral_radius(&a) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn long_cycle() {
        let n = 12;
        let mut a = PositiveMatrix::zeros(n);
        let mut log_sum = 0.0;
        for i in 0..n {
            let w = 0.5 + 0.1 * i as f64;
            log_sum += f64::ln(w);
            a.set(i, (i + 1) % n, w);
        }
        let exact = (log_sum / n as f64).exp();
        assert!((spectral_radius(&a) / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gelfand_agrees_with_power_iteration() {
        let a = m(&[&[0.5, 2.0, 0.1], &[1.0, 0.0, 3.0], &[0.2, 0.7, 0.0]]);
        let p = power_iteration(&a).unwrap().radius;
        assert!((gelfand(&a) / p - 1.0).abs() < 1e-12);
        let c = m(&[&[0.0, 2.0], &[8.0, 0.0]]);
        assert!((gelfand(&c) - 4.0).abs() < 1e-12);
    }
}
