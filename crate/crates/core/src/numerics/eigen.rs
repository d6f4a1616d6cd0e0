use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending. Column `i`
/// of `vectors` belongs to `values[i]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl SymmetricEigen {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        (0..self.vectors.nrows()).map(|r| self.vectors.read(r, i)).collect()
    }
}

/// Dense symmetric eigendecomposition. Inputs whose largest asymmetry exceeds
/// `1e-12` times the largest entry are rejected.
pub fn symmetric_eigen(matrix: MatRef<'_, f64>) -> Result<SymmetricEigen> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: matrix.ncols(),
        });
    }
    let mut scale = 0.0f64;
    let mut asymmetry = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let a = matrix.read(i, j);
            if !a.is_finite() {
                return Err(Error::InvalidParams(format!("matrix entry ({i}, {j}) is not finite")));
            }
            scale = scale.max(a.abs());
            if i > j {
                asymmetry = asymmetry.max((a - matrix.read(j, i)).abs());
            }
        }
    }
    if asymmetry > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonSymmetric { asymmetry });
    }
    if n == 0 {
        return Ok(SymmetricEigen {
            values: Vec::new(),
            vectors: Mat::zeros(0, 0),
        });
    }

    let evd = matrix.selfadjoint_eigendecomposition(Side::Lower);
    let s = evd.s().column_vector();
    let u = evd.u();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s.read(a).total_cmp(&s.read(b)));
    let values = order.iter().map(|&i| s.read(i)).collect();
    let vectors = Mat::from_fn(n, n, |r, c| u.read(r, order[c]));
    Ok(SymmetricEigen { values, vectors })
}
