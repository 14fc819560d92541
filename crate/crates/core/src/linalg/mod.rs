//! Dense complex matrices and the structure maps used by the semantics.
//!
//! Conventions: in a tensor product the left factor is most significant,
//! in a direct sum the left block comes first, and operators are vectorized
//! by stacking rows, so `vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ)`.

mod oracle;
mod structure;

pub use oracle::{choi_matrix, oracle_choi_positive, oracle_partial_trace, Keep};
pub use structure::{
    bee, copair, curry, direct_sum, distrib, eval_map, inj, kron, pairing, permutation, proj, swap,
    tau_iso,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

pub type C64 = Complex64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    DimMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
}

/// Row-major dense complex matrix. Zero rows or columns are allowed.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Matrix::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// A column vector.
    pub fn column(entries: &[C64]) -> Self {
        Matrix::from_vec(entries.len(), 1, entries.to_vec())
    }

    pub fn scalar(c: C64) -> Self {
        Matrix::from_vec(1, 1, vec![c])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn compose(&self, f: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != f.rows {
            return Err(LinalgError::DimMismatch {
                op: "compose",
                lhs: self.shape(),
                rhs: f.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, f.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let frow = &f.data[k * f.cols..(k + 1) * f.cols];
                let orow = &mut out.data[i * f.cols..(i + 1) * f.cols];
                for (o, b) in orow.iter_mut().zip(frow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, g: &Matrix) -> Result<Matrix, LinalgError> {
        if self.shape() != g.shape() {
            return Err(LinalgError::DimMismatch {
                op: "add",
                lhs: self.shape(),
                rhs: g.shape(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&g.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, g: &Matrix) -> Result<Matrix, LinalgError> {
        self.add(&g.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn dagger(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Row-stacking vectorization into a column.
    pub fn vec(&self) -> Matrix {
        Matrix::from_vec(self.rows * self.cols, 1, self.data.clone())
    }

    /// Inverse of [`Matrix::vec`] for a column of length `rows*cols`.
    pub fn unvec(&self, rows: usize, cols: usize) -> Matrix {
        assert_eq!(self.cols, 1);
        assert_eq!(self.rows, rows * cols);
        Matrix::from_vec(rows, cols, self.data.clone())
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let mut col_seen = vec![false; self.cols];
        for i in 0..self.rows {
            let mut ones = 0;
            for j in 0..self.cols {
                let v = self[(i, j)];
                if v == one {
                    ones += 1;
                    if col_seen[j] {
                        return false;
                    }
                    col_seen[j] = true;
                } else if v != zero {
                    return false;
                }
            }
            if ones != 1 {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_json(j: &MatrixJson) -> Result<Matrix, String> {
        if j.entries.len() != j.rows * j.cols {
            return Err(format!(
                "expected {} entries, found {}",
                j.rows * j.cols,
                j.entries.len()
            ));
        }
        Ok(Matrix::from_vec(
            j.rows,
            j.cols,
            j.entries.iter().map(|e| C64::new(e[0], e[1])).collect(),
        ))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let c = self[(i, j)];
                    format!("{:.4}{:+.4}i", c.re, c.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Wire format: `{"rows":r,"cols":c,"entries":[[re,im],...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}
