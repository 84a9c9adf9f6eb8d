//! Least squares through a Householder QR of the design matrix.

use nalgebra::{DMatrix, DVector};

/// Columns whose QR pivot falls below this fraction of their own norm are
/// treated as linearly dependent on earlier columns.
const DEPENDENCE_TOL: f64 = 1e-10;

pub(crate) struct LeastSquares {
    /// k x m, one column per right-hand side.
    pub coefficients: DMatrix<f64>,
    /// n x m.
    pub residuals: DMatrix<f64>,
    /// Diagonal of (X'X)^{-1}.
    pub xtx_inv_diag: DVector<f64>,
}

/// Solves `min ||X B - Y||` for every column of `y` at once.
///
/// Returns the index of the first dependent column of `x` when the design is
/// rank deficient.
pub(crate) fn least_squares(x: DMatrix<f64>, y: &DMatrix<f64>) -> Result<LeastSquares, usize> {
    let (n, k) = x.shape();
    assert!(n >= k, "underdetermined design {n}x{k}");
    let col_norms: Vec<f64> = x.column_iter().map(|c| c.norm()).collect();
    let design = x.clone();
    let qr = x.qr();
    let r = qr.r();
    for j in 0..k {
        let pivot = r[(j, j)].abs();
        if col_norms[j] == 0.0 || !pivot.is_finite() || pivot <= DEPENDENCE_TOL * col_norms[j] {
            return Err(j);
        }
    }
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let top = qty.rows(0, k).into_owned();
    let coefficients = r.solve_upper_triangular(&top).ok_or(0usize)?;
    let residuals = y - &design * &coefficients;
    let r_inv = r.solve_upper_triangular(&DMatrix::identity(k, k)).ok_or(0usize)?;
    let xtx_inv_diag = DVector::from_iterator(k, r_inv.row_iter().map(|row| row.norm_squared()));
    Ok(LeastSquares {
        coefficients,
        residuals,
        xtx_inv_diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let x = DMatrix::from_fn(6, 2, |i, j| if j == 0 { 1.0 } else { i as f64 });
        let y = DMatrix::from_fn(6, 1, |i, _| 2.0 - 0.5 * i as f64);
        let fit = least_squares(x, &y).unwrap();
        assert!((fit.coefficients[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((fit.coefficients[(1, 0)] + 0.5).abs() < 1e-12);
        assert!(fit.residuals.amax() < 1e-12);
    }

    #[test]
    fn inverse_gram_diagonal_matches_direct_inverse() {
        let x = DMatrix::from_fn(8, 3, |i, j| ((i * 7 + j * 3) % 5) as f64 + 0.1 * j as f64);
        let y = DMatrix::from_fn(8, 1, |i, _| i as f64);
        let fit = least_squares(x.clone(), &y).unwrap();
        let inv = (x.transpose() * &x).try_inverse().unwrap();
        for j in 0..3 {
            assert!((fit.xtx_inv_diag[j] - inv[(j, j)]).abs() < 1e-10);
        }
    }

    #[test]
    fn dependent_column_is_reported() {
        let x = DMatrix::from_fn(5, 3, |i, j| match j {
            0 => 1.0,
            1 => i as f64,
            _ => 3.0 - 2.0 * i as f64,
        });
        let y = DMatrix::from_element(5, 1, 1.0);
        assert_eq!(least_squares(x, &y).err(), Some(2));
        let zero = DMatrix::zeros(5, 2);
        assert_eq!(least_squares(zero, &y).err(), Some(0));
    }
}
