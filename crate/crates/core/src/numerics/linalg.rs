//! Small dense matrices over a [`Scalar`], with exact fraction-free
//! elimination for rationals and completely pivoted elimination otherwise.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{max_log2, Rational, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Empty matrix with a fixed column count, for building row by row.
    pub fn with_cols(cols: usize) -> Self {
        Matrix {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<K>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<K>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(K::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = K::zero();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * other[(k, j)].clone();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Columns `[start, end)`.
    pub fn columns(&self, start: usize, end: usize) -> Matrix<K> {
        let rows = (0..self.rows)
            .map(|i| self.row(i)[start..end].to_vec())
            .collect();
        let mut m = Matrix::from_rows(rows);
        m.cols = end - start;
        m
    }

    pub fn hstack(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(other.row(i));
                r
            })
            .collect();
        let mut m = Matrix::from_rows(rows);
        m.cols = self.cols + other.cols;
        m
    }

    pub fn max_log2(&self) -> f64 {
        max_log2(self.data.iter())
    }

    pub fn rank(&self, tol: Tolerance) -> usize {
        K::row_reduce(self, self.cols, tol).pivots.len()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn kernel(&self, tol: Tolerance) -> Vec<Vec<K>> {
        K::row_reduce(self, self.cols, tol).kernel(self.cols)
    }

    /// Basis of `{w : w^T * self = 0}`.
    pub fn left_kernel(&self, tol: Tolerance) -> Vec<Vec<K>> {
        self.transpose().kernel(tol)
    }

    /// Solve `self * x = b` for a consistent system. Free variables are set
    /// to zero. Returns the residual `log2 max |Ax - b|` on inconsistency.
    pub fn solve(&self, b: &[K], tol: Tolerance) -> Result<Vec<K>, f64> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_rows(b.iter().map(|x| vec![x.clone()]).collect()));
        let rref = K::row_reduce(&aug, self.cols, tol);
        let mut x = vec![K::zero(); self.cols];
        for (i, &p) in rref.pivots.iter().enumerate() {
            x[p] = rref.reduced[(i, self.cols)].clone();
        }
        let ax = self.mul_vec(&x);
        let residual: Vec<K> = ax.into_iter().zip(b).map(|(l, r)| l - r.clone()).collect();
        let res_log2 = max_log2(residual.iter());
        if K::EXACT {
            if residual.iter().all(|r| r.is_zero()) {
                return Ok(x);
            }
            return Err(res_log2);
        }
        let scale = max_log2(b.iter()).max(self.max_log2() + max_log2(x.iter()));
        if res_log2 == f64::NEG_INFINITY || res_log2 <= scale - tol.bits {
            Ok(x)
        } else {
            Err(res_log2)
        }
    }

    pub fn inverse(&self, tol: Tolerance) -> Option<Matrix<K>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let rref = K::row_reduce(&aug, n, tol);
        if rref.pivots.len() < n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for (i, &p) in rref.pivots.iter().enumerate() {
            for j in 0..n {
                inv[(p, j)] = rref.reduced[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self, tol: Tolerance) -> bool {
        self.rows == self.cols && self.rank(tol) == self.rows
    }

    /// Determinant by elimination.
    pub fn determinant(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = K::one();
        for c in 0..n {
            let pivot = (c..n)
                .filter(|&r| !m[(r, c)].is_zero())
                .max_by(|&a, &b| m[(a, c)].log2_abs().total_cmp(&m[(b, c)].log2_abs()));
            let Some(p) = pivot else {
                return K::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pv = m[(c, c)].clone();
            det = det * pv.clone();
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let factor = m[(r, c)].clone() / pv.clone();
                for j in c..n {
                    let v = m[(r, j)].clone() - factor.clone() * m[(c, j)].clone();
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<K> Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.data[i * self.cols + j]
    }
}

impl<K> IndexMut<(usize, usize)> for Matrix<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form: row `i < rank` has a unit in column
/// `pivots[i]` and zeros in every other pivot column. Rows from `rank` on
/// are zero (or negligible) in the pivot-eligible columns.
#[derive(Clone, Debug)]
pub struct Rref<K> {
    pub reduced: Matrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Scalar> Rref<K> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis of the first `cols` columns, one vector per free column.
    pub fn kernel(&self, cols: usize) -> Vec<Vec<K>> {
        let mut out = Vec::new();
        for free in 0..cols {
            if self.pivots.contains(&free) {
                continue;
            }
            let mut v = vec![K::zero(); cols];
            v[free] = K::one();
            for (i, &p) in self.pivots.iter().enumerate() {
                v[p] = -self.reduced[(i, free)].clone();
            }
            out.push(v);
        }
        out
    }
}

/// Gauss-Jordan with complete pivoting among the first `pivot_cols`
/// columns. Pivots below `tol` relative to the largest entry of those
/// columns end the elimination.
pub fn pivoted_rref<K: Scalar>(m: &Matrix<K>, pivot_cols: usize, tol: Tolerance) -> Rref<K> {
    let mut a = m.clone();
    let scale = a.columns(0, pivot_cols).max_log2();
    let mut pivots = Vec::new();
    let mut r = 0;
    while r < a.rows {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in r..a.rows {
            for j in 0..pivot_cols {
                if pivots.contains(&j) {
                    continue;
                }
                let mag = a[(i, j)].log2_abs();
                if best.is_none_or(|(_, _, b)| mag > b) {
                    best = Some((i, j, mag));
                }
            }
        }
        let Some((pi, pj, mag)) = best else { break };
        if mag == f64::NEG_INFINITY || (!K::EXACT && mag <= scale - tol.bits) {
            break;
        }
        a.swap_rows(pi, r);
        let inv = K::one() / a[(r, pj)].clone();
        for j in 0..a.cols {
            let v = a[(r, j)].clone() * inv.clone();
            a[(r, j)] = v;
        }
        a[(r, pj)] = K::one();
        for i in 0..a.rows {
            if i == r || a[(i, pj)].is_zero() {
                continue;
            }
            let factor = a[(i, pj)].clone();
            for j in 0..a.cols {
                let v = a[(i, j)].clone() - factor.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
            a[(i, pj)] = K::zero();
        }
        pivots.push(pj);
        r += 1;
    }
    Rref { reduced: a, pivots }
}

/// Exact reduced echelon form. The forward phase runs Bareiss' fraction-free
/// elimination on an integer matrix with the same row space; only the final
/// back-substitution touches fractions.
pub fn fraction_free_rref(m: &Matrix<Rational>, pivot_cols: usize) -> Rref<Rational> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (v, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        // rows above the pivot row keep their pre-division scale
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }

    // back-substitution into reduced form
    let mut red: Vec<Vec<Rational>> = a
        .into_iter()
        .map(|row| row.into_iter().map(Rational::from_integer).collect())
        .collect();
    for (i, &p) in pivots.iter().enumerate().rev() {
        let inv = red[i][p].recip();
        for v in red[i].iter_mut() {
            *v = &*v * &inv;
        }
        for k in 0..i {
            if Zero::is_zero(&red[k][p]) {
                continue;
            }
            let factor = red[k][p].clone();
            for j in 0..cols {
                let v = &red[k][j] - &factor * &red[i][j];
                red[k][j] = v;
            }
        }
    }
    Rref {
        reduced: Matrix::from_rows(if rows == 0 { vec![] } else { red }).with_shape(rows, cols),
        pivots,
    }
}

impl<K: Scalar> Matrix<K> {
    fn with_shape(mut self, rows: usize, cols: usize) -> Self {
        self.rows = rows;
        self.cols = cols;
        self
    }
}

/// Scale a rational vector to coprime integers with positive leading entry.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map_or(BigInt::one(), |x| x.signum());
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g * &sign))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::AppComplex;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn exact_rank_and_kernel() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let tol = Tolerance::default();
        assert_eq!(m.rank(tol), 2);
        let ker = m.kernel(tol);
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).iter().all(|x| Zero::is_zero(x)));
    }

    #[test]
    fn exact_solve_and_inconsistency() {
        let m = qm(&[&[1, 1], &[1, -1], &[2, 0]]);
        let tol = Tolerance::default();
        let x = m.solve(&[q(3), q(1), q(4)], tol).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(m.solve(&[q(3), q(1), q(5)], tol).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let m = qm(&[&[2, 1], &[7, 4]]);
        let tol = Tolerance::default();
        let inv = m.inverse(tol).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(m.determinant(), q(1));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse(tol).is_none());
    }

    #[test]
    fn numeric_rank_ignores_roundoff() {
        let c = |x: f64| AppComplex::from_f64(x, 0.0, 256);
        let third = AppComplex::from_rational(&Rational::new(1.into(), 3.into()), 256);
        let m = Matrix::from_rows(vec![
            vec![third.clone(), c(1.0)],
            vec![&third * &c(3.0), c(3.0)],
        ]);
        assert_eq!(m.rank(Tolerance::for_precision(256)), 1);
        let k = m.kernel(Tolerance::for_precision(256));
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![Rational::new((-1).into(), 2.into()), Rational::new(1.into(), 3.into())];
        assert_eq!(primitive(&v), vec![q(3), q(-2)]);
    }
}
