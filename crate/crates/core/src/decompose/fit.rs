use crate::error::{Result, WaringError};
use crate::numerics::{Matrix, Scalar, Tolerance};
use crate::poly::{linear_power, Form, LinearForm};

/// Coefficients `c_i` with `f = sum c_i l_i^d`, as `(index, c_i)` pairs
/// with the zero ones left out.
pub fn fit_coefficients<K: Scalar>(
    f: &Form<K>,
    points: &[LinearForm<K>],
    tol: Tolerance,
) -> Result<Vec<(usize, K)>> {
    let d = f.degree();
    if points.is_empty() {
        return if f.is_zero() {
            Ok(Vec::new())
        } else {
            Err(WaringError::NoFit {
                residual_log2: f.max_coeff_log2(),
            })
        };
    }
    let columns: Vec<Vec<K>> = points.iter().map(|l| linear_power(l, d).dense()).collect();
    let rows = columns[0].len();
    let mut a = Matrix::zeros(rows, points.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            a[(i, j)] = x.clone();
        }
    }
    let coeffs = a
        .solve(&f.dense(), tol)
        .map_err(|residual_log2| WaringError::NoFit { residual_log2 })?;
    let scale = f.max_coeff_log2();
    Ok(coeffs
        .into_iter()
        .enumerate()
        .filter(|(j, c)| {
            if K::EXACT {
                return !c.is_zero();
            }
            // a summand far below the roundoff of f carries no information
            let size = c.log2_abs() + d as f64 * points[*j].max_log2();
            !c.is_zero() && size > scale - 2.0 * tol.bits
        })
        .collect())
}
