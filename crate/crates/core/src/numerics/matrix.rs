//! Dense exact matrices: rank, linear solving and nullspaces.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::rational::Rational;

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Result of solving `M x = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// The system has exactly one solution.
    Unique(Vec<Rational>),
    /// The system is consistent with free variables; `particular` is one
    /// solution and `nullspace` spans all homogeneous solutions.
    Underdetermined {
        particular: Vec<Rational>,
        nullspace: Vec<Vec<Rational>>,
    },
    /// The system has no solution.
    Inconsistent,
}

impl Solution {
    /// Any solution, if one exists.
    pub fn particular(&self) -> Option<&[Rational]> {
        match self {
            Solution::Unique(x) => Some(x),
            Solution::Underdetermined { particular, .. } => Some(particular),
            Solution::Inconsistent => None,
        }
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::from_integer(1.into());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch(
                "matrix rows have differing lengths".into(),
            ));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            for r in rank + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &m[(rank, col)];
                for c in col..m.cols {
                    let delta = &factor * &m[(rank, c)];
                    m[(r, c)] = &m[(r, c)] - &delta;
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Solves `self · x = rhs` exactly by Gauss-Jordan elimination.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Solution> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs length {} does not match row count {}",
                rhs.len(),
                self.rows
            )));
        }
        // Augmented reduced row echelon form.
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = rhs[r].clone();
        }
        let pivots = aug.reduce(self.cols);

        // Inconsistent when a zero row has nonzero rhs.
        for r in pivots.len()..self.rows {
            if !aug[(r, self.cols)].is_zero() {
                return Ok(Solution::Inconsistent);
            }
        }

        let pivot_cols: Vec<usize> = pivots.clone();
        let mut particular = vec![Rational::zero(); self.cols];
        for (r, &c) in pivot_cols.iter().enumerate() {
            particular[c] = aug[(r, self.cols)].clone();
        }

        let free_cols: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        if free_cols.is_empty() {
            return Ok(Solution::Unique(particular));
        }
        let mut nullspace = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut v = vec![Rational::zero(); self.cols];
            v[fc] = Rational::from_integer(1.into());
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -aug[(r, fc)].clone();
            }
            nullspace.push(v);
        }
        Ok(Solution::Underdetermined {
            particular,
            nullspace,
        })
    }

    /// Basis of `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        match self.solve(&vec![Rational::zero(); self.rows]) {
            Ok(Solution::Underdetermined { nullspace, .. }) => nullspace,
            _ => Vec::new(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place RREF over the first `ncols` columns; returns pivot columns.
    fn reduce(&mut self, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].clone();
            for c in 0..self.cols {
                self[(row, c)] = &self[(row, c)] / &inv;
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let factor = self[(r, col)].clone();
                for c in 0..self.cols {
                    let delta = &factor * &self[(row, c)];
                    self[(r, c)] = &self[(r, c)] - &delta;
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}
