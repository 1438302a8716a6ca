//! Graded pieces of the annihilator of a form, essential variables, and
//! common zeros of apolar linear systems in two and three variables.

mod plane;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, WaringError};
use crate::numerics::linalg::primitive;
use crate::numerics::unipoly::rational_root_near;
use crate::numerics::{
    univariate_roots, AppComplex, BigFloat, Matrix, Rational, Scalar, Tolerance, UniPoly,
};
use crate::poly::{monomials, DualOp, Form, LinearForm, Monomial};

pub use plane::{base_points_with, conic_intersection, conic_intersection_with};
pub(crate) use plane::GUARD_BITS;

const SYSTEM_SEED: u64 = 0x6261_7365_7074;

/// Matrix of the pairing between dual monomials of degree `e` and monomials
/// of degree `d - e` induced by contraction against `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct CatMatrix<K> {
    pub e: u32,
    pub d: u32,
    pub row_labels: Vec<Monomial>,
    pub col_labels: Vec<Monomial>,
    pub matrix: Matrix<K>,
}

impl<K: Scalar> CatMatrix<K> {
    pub fn rank(&self, tol: Tolerance) -> usize {
        self.matrix.rank(tol)
    }
}

/// Entry `(r, c)` is the coefficient of `x^c` in `d^r ⌟ f`.
pub fn catalecticant<K: Scalar>(f: &Form<K>, e: u32) -> Result<CatMatrix<K>> {
    let d = f.degree();
    if e > d {
        return Err(WaringError::InvalidInput(format!(
            "catalecticant index {e} exceeds the degree {d}"
        )));
    }
    let n = f.num_vars();
    let rows = monomials(n, e);
    let cols = monomials(n, d - e);
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            let full = r.mul(c);
            let coeff = f.coeff(&full);
            if coeff.is_zero() {
                continue;
            }
            let k = Rational::new(full.factorial_product(), c.factorial_product());
            m[(i, j)] = coeff * K::from_rational(&k, crate::numerics::DEFAULT_PRECISION);
        }
    }
    Ok(CatMatrix {
        e,
        d,
        row_labels: rows,
        col_labels: cols,
        matrix: m,
    })
}

/// Basis of the degree-`e` part of the annihilator of `f`. Exact inputs
/// give primitive integer operators.
pub fn apolar_component<K: Scalar>(f: &Form<K>, e: u32, tol: Tolerance) -> Vec<DualOp<K>> {
    let n = f.num_vars();
    if e > f.degree() {
        return monomials(n, e).into_iter().map(DualOp::monomial).collect();
    }
    let cat = catalecticant(f, e).expect("e within range");
    cat.matrix
        .left_kernel(tol)
        .into_iter()
        .map(|v| {
            let v = match crate::numerics::exact_vec(&v) {
                Some(exact) => crate::numerics::lift_vec(&primitive(&exact), 0),
                None => v,
            };
            let terms = cat.row_labels.iter().cloned().zip(v);
            DualOp::new(Form::from_terms(n, e, terms).expect("labels have degree e"))
        })
        .collect()
}

/// Rank of the first catalecticant: the number of variables `f` really
/// depends on.
pub fn essential_variables<K: Scalar>(f: &Form<K>, tol: Tolerance) -> Result<usize> {
    if f.is_zero() {
        return Err(WaringError::InvalidInput(
            "the zero form has no essential variables".into(),
        ));
    }
    if f.degree() == 0 {
        return Ok(0);
    }
    Ok(catalecticant(f, 1)?.rank(tol))
}

/// `f(x) = reduced(U x)` with `U` of size `m x n` and `m` the number of
/// essential variables.
#[derive(Clone, Debug, PartialEq)]
pub struct EssentialSplit<K> {
    /// Invertible `n x n`: `f(M y)` involves only `y_0 .. y_{m-1}`.
    pub change: Matrix<K>,
    /// Rows span the linear forms `f` is built from.
    pub embed: Matrix<K>,
    pub reduced: Form<K>,
}

impl<K: Scalar> EssentialSplit<K> {
    pub fn num_essential(&self) -> usize {
        self.embed.rows()
    }

    /// Linear form in the original variables for coordinates `l` in the
    /// reduced ones.
    pub fn lift(&self, l: &LinearForm<K>) -> LinearForm<K> {
        LinearForm::new(self.embed.transpose().mul_vec(l.coords()))
    }

    /// `h(l U)` as a polynomial in the reduced coordinates.
    pub fn restrict(&self, h: &Form<K>) -> Form<K> {
        h.substitute(&self.embed.transpose())
    }
}

pub fn essential_split<K: Scalar>(f: &Form<K>, tol: Tolerance) -> Result<EssentialSplit<K>> {
    let n = f.num_vars();
    let m = essential_variables(f, tol)?;
    if m == n {
        return Ok(EssentialSplit {
            change: Matrix::identity(n),
            embed: Matrix::identity(n),
            reduced: f.clone(),
        });
    }
    let killers = apolar_component(f, 1, tol);
    let mut killer_rows = Matrix::with_cols(n);
    for k in &killers {
        killer_rows.push_row(k.linear_coords());
    }
    let span = killer_rows.kernel(tol);
    let span: Vec<Vec<K>> = match span.iter().map(|v| crate::numerics::exact_vec(v)).collect::<Option<Vec<Vec<Rational>>>>() {
        Some(exact) => exact
            .into_iter()
            .map(|v| crate::numerics::lift_vec(&primitive(&v), 0))
            .collect(),
        None => span,
    };
    debug_assert_eq!(span.len(), m, "span dimension");
    let mut basis = Matrix::with_cols(n);
    for v in &span {
        basis.push_row(v.clone());
    }
    for i in 0..n {
        if basis.rows() == n {
            break;
        }
        let mut trial = basis.clone();
        trial.push_row(LinearForm::<K>::var(n, i).coords().to_vec());
        if trial.rank(tol) == trial.rows() {
            basis = trial;
        }
    }
    let change = basis.inverse(tol).ok_or(WaringError::Singular)?;
    let moved = f.substitute(&change).pruned(tol);
    let embed = Matrix::from_rows(span);
    Ok(EssentialSplit {
        change,
        embed,
        reduced: moved.truncate_vars(m),
    })
}

/// An operator of degree `d - e` taking `f` to `l^e`, if one exists.
pub fn power_witness<K: Scalar>(
    f: &Form<K>,
    l: &LinearForm<K>,
    e: u32,
    tol: Tolerance,
) -> Result<Option<DualOp<K>>> {
    let d = f.degree();
    if e > d || l.num_vars() != f.num_vars() {
        return Err(WaringError::InvalidInput(format!(
            "power witness of degree {e} for a form of degree {d}"
        )));
    }
    let cat = catalecticant(f, d - e)?;
    let target = crate::poly::linear_power(l, e).dense();
    let Ok(v) = cat.matrix.transpose().solve(&target, tol) else {
        return Ok(None);
    };
    let op = DualOp::new(Form::from_terms(
        f.num_vars(),
        d - e,
        cat.row_labels.iter().cloned().zip(v),
    )?);
    debug_assert!(K::EXACT || !op.is_zero() || target.iter().all(|c| c.is_zero()));
    Ok(Some(op))
}

/// Point of projective space, scaled so its largest coordinate is one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint {
    coords: Vec<AppComplex>,
}

impl ProjPoint {
    pub fn new(coords: Vec<AppComplex>) -> Result<Self> {
        let (pivot, _) = coords
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.log2_abs().total_cmp(&b.1.log2_abs()))
            .ok_or_else(|| WaringError::InvalidInput("empty point".into()))?;
        if coords[pivot].is_zero() {
            return Err(WaringError::InvalidInput("the zero vector is not a point".into()));
        }
        let p = coords[pivot].clone();
        let prec = p.precision_bits();
        let mut coords: Vec<AppComplex> = coords.iter().map(|c| c / &p).collect();
        coords[pivot] = AppComplex::from_i64(1, prec);
        Ok(ProjPoint { coords })
    }

    pub fn from_rational(coords: &[Rational], prec: u32) -> Result<Self> {
        Self::new(coords.iter().map(|c| AppComplex::from_rational(c, prec)).collect())
    }

    pub fn coords(&self) -> &[AppComplex] {
        &self.coords
    }

    pub fn to_linear_form(&self) -> LinearForm<AppComplex> {
        LinearForm::new(self.coords.clone())
    }

    /// Coordinatewise agreement to `bits` bits.
    pub fn close_to(&self, other: &ProjPoint, bits: f64) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| (a - b).log2_abs() <= -bits)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(6);
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                let c = chop(c, 40.0);
                format!("{c:.digits$}")
            })
            .collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// Zero out real or imaginary parts below `2^-bits`, for display.
fn chop(c: &AppComplex, bits: f64) -> AppComplex {
    let prec = c.precision_bits();
    let keep = |x: &BigFloat| {
        if x.log2_abs() < -bits {
            BigFloat::zero(prec)
        } else {
            x.clone()
        }
    };
    AppComplex::new(keep(&c.re), keep(&c.im))
}

/// Common zeros of a list of operators, each vanishing to tolerance on the
/// normalized point.
pub(crate) fn vanishes_on_all<K: Scalar>(ops: &[DualOp<K>], p: &ProjPoint, tol: Tolerance) -> bool {
    let prec = p.coords()[0].precision_bits();
    ops.iter().all(|op| {
        let g = op.as_form().to_complex(prec);
        let v = g.evaluate(p.coords());
        tol.negligible(&v, g.norm1_log2())
    })
}

/// Common zeros in the projective line or plane of `(F^⊥)_e`.
pub fn base_points<K: Scalar>(f: &Form<K>, e: u32, precision_bits: u32) -> Result<Vec<ProjPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SYSTEM_SEED);
    base_points_with(f, e, precision_bits, &mut rng)
}

/// Root of a binary form as a point `[p0 : p1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryRoot {
    pub point: ProjPoint,
    pub exact: Option<[Rational; 2]>,
    pub multiplicity: u32,
}

/// Zeros in the projective line of a nonzero binary form `g(y0, y1)`.
/// Exact forms report true multiplicities and recover rational roots
/// exactly; approximate ones report each root once.
pub fn binary_roots<K: Scalar>(g: &Form<K>, prec: u32, tol: Tolerance) -> Result<Vec<BinaryRoot>> {
    if g.num_vars() != 2 || g.is_zero() {
        return Err(WaringError::InvalidInput(
            "binary roots need a nonzero form in two variables".into(),
        ));
    }
    let deg = g.degree();
    // g(1, t) has coefficient of t^k equal to that of y0^(deg-k) y1^k
    let coeffs: Vec<K> = (0..=deg)
        .map(|k| g.coeff(&Monomial::new(vec![deg - k, k])))
        .collect();
    let mut p = UniPoly::new(coeffs);
    if !K::EXACT {
        p = p.trimmed(tol, g.max_coeff_log2());
    }
    let finite = p.degree().unwrap_or(0) as u32;
    let mut out = Vec::new();
    if finite < deg {
        out.push(BinaryRoot {
            point: ProjPoint::from_rational(&[Rational::from_integer(0.into()), Rational::from_integer(1.into())], prec)?,
            exact: Some([Rational::from_integer(0.into()), Rational::from_integer(1.into())]),
            multiplicity: if K::EXACT { deg - finite } else { 1 },
        });
    }
    if finite == 0 {
        return Ok(out);
    }
    let exact_poly: Option<UniPoly<Rational>> = p
        .coeffs()
        .iter()
        .map(|c| c.as_rational())
        .collect::<Option<Vec<_>>>()
        .map(UniPoly::new);
    for (z, mult) in univariate_roots(&p, prec)? {
        let exact = exact_poly
            .as_ref()
            .and_then(|q| rational_root_near(q, &z, tol))
            .map(|r| [Rational::from_integer(1.into()), r]);
        let point = match &exact {
            Some(c) => ProjPoint::from_rational(c, prec)?,
            None => ProjPoint::new(vec![AppComplex::from_i64(1, prec), z])?,
        };
        out.push(BinaryRoot {
            point,
            exact,
            multiplicity: mult,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::binomial;
    use crate::poly::{change_coordinates, contract, lf, parse_form, parse_polynomial, q};

    fn pf(s: &str, n: usize) -> Form<Rational> {
        parse_form(s, n).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn span_rank(ops: &[DualOp<Rational>]) -> usize {
        let mut m = Matrix::with_cols(ops[0].as_form().dense().len());
        for op in ops {
            m.push_row(op.as_form().dense());
        }
        m.rank(tol())
    }

    #[test]
    fn catalecticant_examples() {
        assert_eq!(catalecticant(&pf("x1^3", 2), 1).unwrap().rank(tol()), 1);
        assert_eq!(catalecticant(&pf("x0^2 + x1^2", 2), 1).unwrap().rank(tol()), 2);
        let fermat = pf("x0^3 + x1^3 + x2^3", 3);
        let cat = catalecticant(&fermat, 2).unwrap();
        assert_eq!((cat.matrix.rows(), cat.matrix.cols()), (6, 3));
        assert_eq!(cat.rank(tol()), 3);
        assert!(catalecticant(&fermat, 4).is_err());
    }

    #[test]
    fn catalecticant_entries_match_contraction() {
        let f = pf("3*x0^2*x1 - x1*x2^2 + 5*x0*x1*x2 + x2^3", 3);
        for e in 0..=3 {
            let cat = catalecticant(&f, e).unwrap();
            for (i, r) in cat.row_labels.iter().enumerate() {
                let applied = contract(&DualOp::monomial(r.clone()), &f).unwrap();
                for (j, c) in cat.col_labels.iter().enumerate() {
                    assert_eq!(cat.matrix[(i, j)], applied.coeff(c));
                }
            }
        }
    }

    #[test]
    fn apolar_component_examples() {
        let ops = apolar_component(&pf("x0^3 + x1^3", 2), 2, tol());
        assert_eq!(ops.len(), 1);
        assert_eq!(ops[0].as_form(), &parse_polynomial("d0*d1", 2, "d").unwrap());

        let ops = apolar_component(&pf("x0*x1", 2), 2, tol());
        assert_eq!(ops.len(), 2);
        let expected: Vec<_> = ["d0^2", "d1^2"]
            .iter()
            .map(|s| DualOp::new(parse_polynomial(s, 2, "d").unwrap()))
            .collect();
        let mut all = ops.clone();
        all.extend(expected);
        assert_eq!(span_rank(&all), 2);
    }

    #[test]
    fn apolar_component_of_binary_cubic_sum() {
        let f = pf("x0*x1^2 + x1*x2^2", 3);
        let ops = apolar_component(&f, 2, tol());
        assert_eq!(ops.len(), 3);
        for op in &ops {
            assert!(contract(op, &f).unwrap().is_zero());
        }
        let mut all = ops.clone();
        for s in ["d0^2", "d0*d2", "d0*d1 - d2^2"] {
            all.push(DualOp::new(parse_polynomial(s, 3, "d").unwrap()));
        }
        assert_eq!(span_rank(&all), 3);
    }

    #[test]
    fn essential_variable_examples() {
        assert_eq!(essential_variables(&pf("x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3", 3), tol()).unwrap(), 1);
        assert_eq!(essential_variables(&pf("x1^2 + x2^2", 3), tol()).unwrap(), 2);
        assert_eq!(essential_variables(&pf("x0*x1^2 + x1*x2^2", 3), tol()).unwrap(), 3);
        assert!(essential_variables(&Form::<Rational>::zero(3, 3), tol()).is_err());
    }

    #[test]
    fn essential_split_round_trips() {
        let cases = [
            ("x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3", 3, 1),
            ("x1*x2", 4, 2),
            ("x0*x1^2 + x1*x2^2", 3, 3),
            ("x0^2*x3 - 2*x0*x3^2 + x3^3 + 7*x0^3", 4, 2),
        ];
        for (s, n, m) in cases {
            let f = pf(s, n);
            let split = essential_split(&f, tol()).unwrap();
            assert_eq!(split.num_essential(), m, "{s}");
            assert_eq!(split.reduced.num_vars(), m);
            let moved = change_coordinates(&f, &split.change, tol()).unwrap();
            assert_eq!(moved.truncate_vars(m), split.reduced);
            assert_eq!(moved.num_terms(), split.reduced.num_terms());
            // f(x) = reduced(U x)
            assert_eq!(split.reduced.substitute(&split.embed), f, "{s}");
        }
        let one = essential_split(&pf("x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3", 3), tol()).unwrap();
        assert_eq!(one.reduced.num_terms(), 1);
    }

    #[test]
    fn power_witness_examples() {
        let f = pf("x0^3 + x1^3 - x1*x2^2 + 2*x2^3", 3);
        let w = power_witness(&f, &lf(&[1, 0, 0]), 2, tol()).unwrap().unwrap();
        let image = contract(&w, &f).unwrap();
        assert_eq!(image, pf("x0^2", 3));

        let kleppe = pf("x0*x1^2 + x1*x2^2", 3);
        let w = power_witness(&kleppe, &lf(&[0, 1, 0]), 2, tol()).unwrap().unwrap();
        assert_eq!(contract(&w, &kleppe).unwrap(), pf("x1^2", 3));
        assert_eq!(w.as_form(), &parse_polynomial("d0", 3, "d").unwrap());

        let generic = pf("x0^3 + 2*x0^2*x1 - x0*x2^2 + 3*x1^3 + x1*x2^2 - 5*x2^3 + x0*x1*x2", 3);
        assert!(power_witness(&generic, &lf(&[1, 2, -1]), 2, tol()).unwrap().is_none());
    }

    #[test]
    fn base_points_of_fermat_and_kleppe() {
        let fermat = pf("x0^3 + x1^3 + x2^3", 3);
        let pts = base_points(&fermat, 2, 256).unwrap();
        assert_eq!(pts.len(), 3);
        for unit in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            let target = ProjPoint::from_rational(&unit.map(q), 256).unwrap();
            assert!(pts.iter().any(|p| p.close_to(&target, 100.0)), "{unit:?}");
        }
        let kleppe = pf("x0*x1^2 + x1*x2^2", 3);
        let pts = base_points(&kleppe, 2, 256).unwrap();
        assert_eq!(pts.len(), 1);
        let target = ProjPoint::from_rational(&[q(0), q(1), q(0)], 256).unwrap();
        assert!(pts[0].close_to(&target, 60.0), "{}", pts[0]);
    }

    #[test]
    fn base_points_of_dense_cubic_are_empty() {
        let f = pf("x0^3 + 2*x0^2*x1 - x0*x2^2 + 3*x1^3 + x1*x2^2 - 5*x2^3 + x0*x1*x2", 3);
        assert!(base_points(&f, 2, 256).unwrap().is_empty());
    }

    #[test]
    fn binary_base_points() {
        // (F^⊥)_2 of x0^2*x1 is spanned by d1^2, which vanishes at [1:0]
        let pts = base_points(&pf("x0^2*x1", 2), 2, 256).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].close_to(&ProjPoint::from_rational(&[q(1), q(0)], 256).unwrap(), 100.0));
        // d0*d1 alone: both coordinate points, matching d0 ⌟ f = 3*x0^2
        assert_eq!(base_points(&pf("x0^3 + x1^3", 2), 2, 256).unwrap().len(), 2);
        assert!(base_points(&pf("x0^3 + x1^3", 2), 1, 256).unwrap_err().to_string().contains("empty"));
    }

    #[test]
    fn binary_roots_with_infinity_and_multiplicity() {
        let g = parse_polynomial("d0^2*d1 - d1^3", 2, "d").unwrap();
        let roots = binary_roots(&g, 256, tol()).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.exact.is_some()));
        let g = parse_polynomial("d0*d1^2", 2, "d").unwrap();
        let roots = binary_roots(&g, 256, tol()).unwrap();
        let mults: Vec<u32> = roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mults.iter().sum::<u32>(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn dense(n: usize, d: u32) -> impl Strategy<Value = Form<Rational>> {
            let ms = monomials(n, d);
            proptest::collection::vec(-6i64..=6, ms.len()).prop_map(move |cs| {
                Form::from_terms(n, d, ms.clone().into_iter().zip(cs.into_iter().map(q))).unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn rank_symmetry(f in dense(3, 4)) {
                for e in 0..=4 {
                    let a = catalecticant(&f, e).unwrap().rank(tol());
                    let b = catalecticant(&f, 4 - e).unwrap().rank(tol());
                    prop_assert_eq!(a, b);
                }
            }

            #[test]
            fn kernel_dimension_and_annihilation(f in dense(3, 3), e in 0u32..=3) {
                let ops = apolar_component(&f, e, tol());
                let rank = catalecticant(&f, e).unwrap().rank(tol());
                prop_assert_eq!(ops.len() + rank, binomial(3 + e as u64 - 1, e as u64) as usize);
                for op in &ops {
                    prop_assert!(contract(op, &f).unwrap().is_zero());
                }
            }

            #[test]
            fn essential_count_invariant(f in dense(3, 3), m in proptest::collection::vec(-3i64..=3, 9)) {
                prop_assume!(!f.is_zero());
                let mat = Matrix::from_rows(m.chunks(3).map(|r| r.iter().map(|&x| q(x)).collect()).collect());
                prop_assume!(mat.is_invertible(tol()));
                let g = change_coordinates(&f, &mat, tol()).unwrap();
                prop_assert_eq!(essential_variables(&f, tol()).unwrap(), essential_variables(&g, tol()).unwrap());
            }
        }
    }
}
