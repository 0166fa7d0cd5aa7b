//! Exact linear algebra over the rationals.
//!
//! This is the brute-force oracle backing the floating-point rank and
//! null-space decisions: for integer inputs the two backends must agree on
//! every rank. Gaussian elimination with exact pivoting, no tolerances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = QMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = BigRational::from_integer(BigInt::from(v));
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// Row-reduce in place; returns the pivot column of each pivot row.
    fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // largest-magnitude pivot keeps intermediate entries small enough
            let mut best: Option<usize> = None;
            for r in row..self.rows {
                if !self[(r, col)].is_zero() {
                    match best {
                        None => best = Some(r),
                        Some(b) => {
                            if self[(r, col)].abs() > self[(b, col)].abs() {
                                best = Some(r);
                            }
                        }
                    }
                }
            }
            let Some(p) = best else { continue };
            self.swap_rows(row, p);
            let inv = self[(row, col)].recip();
            for j in col..self.cols {
                let v = &self[(row, j)] * &inv;
                self[(row, j)] = v;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let sub = &factor * &self[(row, j)];
                        self[(r, j)] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the null space {x : A x = 0}, one column per free variable.
    pub fn null_space(&self) -> QMatrix {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = QMatrix::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis[(fc, k)] = BigRational::one();
            for (prow, &pc) in pivots.iter().enumerate() {
                basis[(pc, k)] = -m[(prow, fc)].clone();
            }
        }
        basis
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact rank of an integer matrix given as rows.
pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    QMatrix::from_i64_rows(rows).rank()
}

/// Exact symplectic commutant over Q.
///
/// `form` is the antisymmetric Gram matrix of the ambient space and `basis`
/// holds the constraint vectors as columns. Returns a basis (columns) of
/// {x : v^T form x = 0 for every column v of basis}.
pub fn commutant_i64(form: &QMatrix, basis: &QMatrix) -> QMatrix {
    // conditions: (basis^T * form) x = 0
    let cond = basis.transpose().mul(form);
    cond.null_space()
}
