use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Dense square matrix with nonnegative entries, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMatrix {
    n: usize,
    data: Vec<f64>,
}

impl PositiveMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: data.len() });
        }
        if let Some(k) = data.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) = {} is not a finite nonnegative number",
                k / n,
                k % n,
                data[k]
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("row {i} has {} entries, expected {n}", rows[i].len())));
        }
        Self::new(n, rows.concat())
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(v >= 0.0);
        self.data[i * self.n + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Self { n, data: out }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `self * c`, `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c >= 0.0, "negative scale");
        Self { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `self += c * other`, `c ≥ 0`.
    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        assert!(c >= 0.0, "negative scale");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// Supremum norm: largest row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).iter().sum::<f64>()).fold(0.0, f64::max)
    }

    /// `A ≤ B` entrywise.
    pub fn le(&self, other: &Self) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Row-major CSV, one matrix row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{x}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .enumerate()
            .map(|(i, line)| {
                line.split(',')
                    .map(|x| {
                        x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("row {}: bad number {x:?}", i + 1)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }

    /// Reachability closure of the positive-entry graph (`i → j` iff `A[i,j] > 0`).
    pub(crate) fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.n;
        let mut r: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j) > 0.0).collect()).collect();
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    let via = r[k].clone();
                    r[i].iter_mut().zip(via).for_each(|(dst, src)| *dst |= src);
                }
            }
        }
        r
    }

    /// Principal submatrix on `idx`.
    pub(crate) fn submatrix(&self, idx: &[usize]) -> Self {
        let data = idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        Self { n: idx.len(), data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_and_csv() {
        assert!(PositiveMatrix::new(2, vec![1.0, -1.0, 0.0, 0.0]).is_err());
        assert!(PositiveMatrix::new(2, vec![1.0]).is_err());
        let m = PositiveMatrix::from_rows(&[vec![0.0, 2.0], vec![8.0, 0.5]]).unwrap();
        let text = m.to_csv();
        assert_eq!(text, "0,2\n8,0.5\n");
        assert_eq!(PositiveMatrix::from_csv(&text).unwrap(), m);
        assert!(PositiveMatrix::from_csv("1,2\n3\n").is_err());
    }

    #[test]
    fn products_and_norms() {
        let m = PositiveMatrix::from_rows(&[vec![0.0, 2.0], vec![8.0, 0.0]]).unwrap();
        let sq = m.matmul(&m);
        assert_eq!(sq, PositiveMatrix::from_rows(&[vec![16.0, 0.0], vec![0.0, 16.0]]).unwrap());
        assert_eq!(m.norm_inf(), 8.0);
        assert_eq!(m.matvec(&[1.0, 1.0]), vec![2.0, 8.0]);
        assert!(PositiveMatrix::identity(2).le(&PositiveMatrix::identity(2).scaled(2.0)));
    }

    #[test]
    fn reachability_closure() {
        let m = PositiveMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]]).unwrap();
        let r = m.reachability();
        assert!(r[0][2]);
        assert!(!r[2][0]);
        assert!(!r[0][0]);
    }
}
