use faer::complex_native::c64;
use faer::prelude::*;
use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Solves the dense complex system `a x = b` by LU with partial pivoting.
/// Fails when the solution is not finite or its relative residual exceeds
/// `1e-8`.
pub fn solve_complex(a: &Mat<c64>, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if a.ncols() != n { a.ncols() } else { b.len() },
        });
    }
    let rhs = Mat::<c64>::from_fn(n, 1, |i, _| b[i].into());
    let x = a.partial_piv_lu().solve(&rhs);
    let x: Vec<Complex64> = (0..n).map(|i| x.read(i, 0).into()).collect();
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::IllConditioned("non-finite solution".into()));
    }

    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for (i, bi) in b.iter().enumerate() {
        let mut ax = Complex64::new(0.0, 0.0);
        for (j, xj) in x.iter().enumerate() {
            let aij: Complex64 = a.read(i, j).into();
            ax += aij * xj;
            scale = scale.max((aij * xj).norm());
        }
        residual = residual.max((ax - bi).norm());
        scale = scale.max(bi.norm());
    }
    if residual > 1e-8 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::IllConditioned(format!("relative residual {:e}", residual / scale)));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = Mat::<c64>::from_fn(3, 3, |i, j| {
            if i == j {
                c64::new(2.0, 1.0)
            } else {
                c64::new(0.5, -0.25 * j as f64)
            }
        });
        let want = [Complex64::new(1.0, -1.0), Complex64::new(0.5, 2.0), Complex64::new(-3.0, 0.0)];
        let b: Vec<Complex64> = (0..3)
            .map(|i| (0..3).map(|j| Complex64::from(a.read(i, j)) * want[j]).sum())
            .collect();
        let x = solve_complex(&a, &b).unwrap();
        for (x, w) in x.iter().zip(want) {
            assert!((x - w).norm() < 1e-13);
        }
    }

    #[test]
    fn singular_system_is_rejected() {
        let a = Mat::<c64>::from_fn(2, 2, |_, _| c64::new(1.0, 0.0));
        let b = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        assert!(matches!(solve_complex(&a, &b), Err(Error::IllConditioned(_))));
    }
}
