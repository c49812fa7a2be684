use std::fmt;

use crate::error::{Error, Result};

use super::prime::{Coeff, Prime};

/// A square matrix over `F_p`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: Prime,
    n: usize,
    entries: Vec<Coeff>,
}

impl Matrix {
    /// Builds a matrix from its rows; entries are reduced mod `p`.
    pub fn from_rows(p: Prime, rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("matrix must be square and non-empty".into()));
        }
        let entries = rows.iter().flatten().map(|&a| p.reduce(a)).collect();
        Ok(Matrix { p, n, entries })
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for k in 0..n {
            entries[k * n + k] = 1;
        }
        Matrix { p, n, entries }
    }

    /// Identity plus a single 1 in position `(row, col)`, `row != col`.
    pub fn transvection(p: Prime, n: usize, row: usize, col: usize) -> Self {
        assert_ne!(row, col, "transvection needs an off-diagonal position");
        let mut m = Self::identity(p, n);
        m.entries[row * n + col] = 1;
        m
    }

    /// Identity with the `(0, 0)` entry replaced by `g`.
    pub fn scaling(p: Prime, n: usize, g: Coeff) -> Self {
        let mut m = Self::identity(p, n);
        m.entries[0] = p.reduce(g);
        m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Coeff {
        self.entries[row * self.n + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.n)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::Shape("matrix product of mismatched shapes".into()));
        }
        let (n, p) = (self.n, self.p);
        let mut entries = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = (0..n).fold(0, |acc, k| {
                    p.add(acc, p.mul(self.get(r, k), other.get(k, c)))
                });
            }
        }
        Ok(Matrix { p, n, entries })
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Coeff {
        let (n, p) = (self.n, self.p);
        let mut a = self.entries.clone();
        let mut det = 1;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = p.neg(det);
            }
            let lead = a[col * n + col];
            det = p.mul(det, lead);
            let inv = p.inv(lead);
            for r in col + 1..n {
                let factor = p.mul(a[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for k in col..n {
                    a[r * n + k] = p.sub(a[r * n + k], p.mul(factor, a[col * n + k]));
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.n {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.n {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Rank of a set of vectors over `F_p`, by row reduction.
pub fn rank(p: Prime, rows: &[Vec<Coeff>]) -> usize {
    let mut rows: Vec<Vec<Coeff>> = rows.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = p.inv(rows[rank][col]);
        for v in &mut rows[rank][col..] {
            *v = p.mul(*v, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col];
                for (v, &w) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v = p.sub(*v, p.mul(factor, w));
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        let p = Prime::new(5).unwrap();
        let m = Matrix::from_rows(p, &[vec![1, 2], vec![3, 4]]).unwrap();
        // 4 - 6 = -2 = 3 mod 5
        assert_eq!(m.det(), 3);
        let swap = Matrix::from_rows(p, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swap.det(), 4);
        let singular = Matrix::from_rows(p, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(!singular.is_invertible());
        assert_eq!(Matrix::identity(p, 3).det(), 1);
    }

    #[test]
    fn rejects_ragged_rows() {
        let p = Prime::new(3).unwrap();
        assert!(Matrix::from_rows(p, &[vec![1, 2], vec![3]]).is_err());
        assert!(Matrix::from_rows(p, &[]).is_err());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let p = Prime::new(3).unwrap();
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]];
        assert_eq!(rank(p, &rows), 2);
    }
}
