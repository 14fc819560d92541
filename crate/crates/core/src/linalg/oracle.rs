//! Independent checks used by the test suites.

use super::{LinalgError, Matrix, C64};
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of a vectorized operator on `H_A ⊗ H_B`.
pub fn oracle_partial_trace(
    vec_rho: &Matrix,
    da: usize,
    db: usize,
    keep: Keep,
) -> Result<Matrix, LinalgError> {
    let n = da * db;
    if vec_rho.shape() != (n * n, 1) {
        return Err(LinalgError::DimMismatch {
            op: "partial_trace",
            lhs: vec_rho.shape(),
            rhs: (n * n, 1),
        });
    }
    let rho = vec_rho.unvec(n, n);
    Ok(match keep {
        Keep::A => Matrix::from_fn(da, da, |i, i2| {
            (0..db).map(|j| rho[(i * db + j, i2 * db + j)]).sum()
        }),
        Keep::B => Matrix::from_fn(db, db, |j, j2| {
            (0..da).map(|i| rho[(i * db + j, i * db + j2)]).sum()
        }),
    })
}

/// Choi matrix `Σ_{ij} E_ij ⊗ S(E_ij)` of a superoperator `S : M_h → M_k`.
pub fn choi_matrix(superop: &Matrix, h: usize, k: usize) -> Result<Matrix, LinalgError> {
    if superop.shape() != (k * k, h * h) {
        return Err(LinalgError::DimMismatch {
            op: "choi",
            lhs: superop.shape(),
            rhs: (k * k, h * h),
        });
    }
    let mut j = Matrix::zeros(h * k, h * k);
    for a in 0..h {
        for b in 0..h {
            let col = a * h + b;
            for c in 0..k {
                for d in 0..k {
                    j[(a * k + c, b * k + d)] = superop[(c * k + d, col)];
                }
            }
        }
    }
    Ok(j)
}

/// Complete positivity via the Choi matrix spectrum.
pub fn oracle_choi_positive(
    superop: &Matrix,
    h: usize,
    k: usize,
    tol: f64,
) -> Result<bool, LinalgError> {
    let j = choi_matrix(superop, h, k)?;
    let n = j.rows();
    if n == 0 {
        return Ok(true);
    }
    let herm_gap = j.max_abs_diff(&j.dagger());
    if herm_gap > tol {
        return Ok(false);
    }
    let m = DMatrix::<C64>::from_fn(n, n, |r, c| j[(r, c)]);
    let eig = m.symmetric_eigen();
    Ok(eig.eigenvalues.iter().all(|&l| l >= -tol))
}
