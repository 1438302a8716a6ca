//! Self-describing JSON records. Every number is a string so that rationals
//! and long decimals survive the round trip.

use serde::{Deserialize, Serialize};

use crate::decompose::{Decomposition, Term, Terms};
use crate::error::{Result, WaringError};
use crate::numerics::{AppComplex, BigFloat, Rational};
use crate::poly::LinearForm;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub degree: u32,
    pub num_vars: usize,
    pub form: String,
    pub avoid: Vec<String>,
    pub seed: String,
    pub precision_bits: u32,
    pub term_count: usize,
    pub terms: Vec<TermRecord>,
    pub exact: bool,
    pub residual_log2: String,
    pub algorithm_trace: Vec<String>,
    pub bound: String,
    pub lower_bound: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_num: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_den: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<String>,
    pub coords: Vec<CoordRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordRecord {
    Exact(String),
    Approx { re: String, im: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub pass: bool,
    pub exact: bool,
    pub term_count: usize,
    pub bound: String,
    pub residual_log2: String,
    pub forbidden_violations: Vec<usize>,
}

/// Significant decimal digits that carry `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as f64 * 0.30103).ceil() as usize + 2
}

pub fn render_log2(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.3}")
    }
}

fn float_text(x: &BigFloat, digits: usize) -> String {
    x.to_sci_string(digits)
}

fn parse_float(text: &str, prec: u32) -> Result<BigFloat> {
    BigFloat::parse(text, prec).ok_or_else(|| WaringError::InvalidInput(format!("bad number {text:?}")))
}

fn parse_rational(text: &str) -> Result<Rational> {
    crate::numerics::bigfloat::parse_decimal(text)
        .ok_or_else(|| WaringError::InvalidInput(format!("bad rational {text:?}")))
}

pub fn terms_to_records(terms: &Terms) -> Vec<TermRecord> {
    match terms {
        Terms::Exact(ts) => ts
            .iter()
            .map(|t| TermRecord {
                coeff_num: Some(t.coeff.numer().to_string()),
                coeff_den: Some(t.coeff.denom().to_string()),
                re: None,
                im: None,
                coords: t.form.coords().iter().map(|c| CoordRecord::Exact(c.to_string())).collect(),
            })
            .collect(),
        Terms::Approx(ts) => ts
            .iter()
            .map(|t| {
                let digits = decimal_digits(t.coeff.precision_bits());
                TermRecord {
                    coeff_num: None,
                    coeff_den: None,
                    re: Some(float_text(&t.coeff.re, digits)),
                    im: Some(float_text(&t.coeff.im, digits)),
                    coords: t
                        .form
                        .coords()
                        .iter()
                        .map(|c| CoordRecord::Approx {
                            re: float_text(&c.re, digits),
                            im: float_text(&c.im, digits),
                        })
                        .collect(),
                }
            })
            .collect(),
    }
}

/// Inverse of [`terms_to_records`]; approximate values are read at `prec`
/// bits.
pub fn records_to_terms(records: &[TermRecord], num_vars: usize, exact: bool, prec: u32) -> Result<Terms> {
    let check_len = |r: &TermRecord| {
        if r.coords.len() == num_vars {
            Ok(())
        } else {
            Err(WaringError::InvalidInput(format!(
                "term has {} coordinates, expected {num_vars}",
                r.coords.len()
            )))
        }
    };
    if exact {
        let mut out = Vec::with_capacity(records.len());
        for r in records {
            check_len(r)?;
            let (Some(num), Some(den)) = (&r.coeff_num, &r.coeff_den) else {
                return Err(WaringError::InvalidInput("exact term without coeff_num/coeff_den".into()));
            };
            let coeff = parse_rational(&format!("{num}/{den}"))?;
            let coords = r
                .coords
                .iter()
                .map(|c| match c {
                    CoordRecord::Exact(s) => parse_rational(s),
                    CoordRecord::Approx { .. } => {
                        Err(WaringError::InvalidInput("approximate coordinate in an exact record".into()))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Term::new(coeff, LinearForm::new(coords)));
        }
        Ok(Terms::Exact(out))
    } else {
        let mut out = Vec::with_capacity(records.len());
        for r in records {
            check_len(r)?;
            let coeff = match (&r.re, &r.im, &r.coeff_num, &r.coeff_den) {
                (Some(re), Some(im), _, _) => AppComplex::new(parse_float(re, prec)?, parse_float(im, prec)?),
                (_, _, Some(num), Some(den)) => AppComplex::from_rational(&parse_rational(&format!("{num}/{den}"))?, prec),
                _ => return Err(WaringError::InvalidInput("term without a coefficient".into())),
            };
            let coords = r
                .coords
                .iter()
                .map(|c| match c {
                    CoordRecord::Exact(s) => Ok(AppComplex::from_rational(&parse_rational(s)?, prec)),
                    CoordRecord::Approx { re, im } => Ok(AppComplex::new(parse_float(re, prec)?, parse_float(im, prec)?)),
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Term::new(coeff, LinearForm::new(coords)));
        }
        Ok(Terms::Approx(out))
    }
}

pub fn decomposition_from_record(rec: &DecompositionRecord, prec: u32) -> Result<Decomposition> {
    Ok(Decomposition {
        num_vars: rec.num_vars,
        degree: rec.degree,
        terms: records_to_terms(&rec.terms, rec.num_vars, rec.exact, prec)?,
        trace: rec.algorithm_trace.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{lf, q};

    #[test]
    fn exact_terms_round_trip() {
        let terms = Terms::Exact(vec![
            Term::new(q(-3) / q(7), lf(&[1, -2, 0])),
            Term::new(q(5), lf(&[0, 1, 1])),
        ]);
        let recs = terms_to_records(&terms);
        assert_eq!(recs[0].coeff_num.as_deref(), Some("-3"));
        assert_eq!(recs[0].coeff_den.as_deref(), Some("7"));
        assert_eq!(records_to_terms(&recs, 3, true, 256).unwrap(), terms);
    }

    #[test]
    fn approximate_terms_round_trip_to_precision() {
        let prec = 320;
        let c = AppComplex::new(BigFloat::from_i64(2, prec).sqrt(), -BigFloat::from_i64(3, prec).sqrt());
        let l = LinearForm::new(vec![c.clone(), AppComplex::from_i64(3, prec)]);
        let terms = Terms::Approx(vec![Term::new(c.clone(), l)]);
        let recs = terms_to_records(&terms);
        let back = records_to_terms(&recs, 2, false, prec).unwrap();
        let Terms::Approx(ts) = back else { panic!("approximate") };
        assert!(ts[0].coeff.close_to(&c, prec as f64 - 8.0));
        assert!(ts[0].form.coords()[1].close_to(&AppComplex::from_i64(3, prec), prec as f64 - 8.0));
    }

    #[test]
    fn json_is_stable() {
        let rec = VerifyRecord {
            pass: true,
            exact: true,
            term_count: 2,
            bound: "2".into(),
            residual_log2: render_log2(f64::NEG_INFINITY),
            forbidden_violations: vec![],
        };
        let text = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            text,
            r#"{"pass":true,"exact":true,"term_count":2,"bound":"2","residual_log2":"-inf","forbidden_violations":[]}"#
        );
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let recs = terms_to_records(&Terms::Exact(vec![Term::new(q(1), lf(&[1, 1]))]));
        assert!(records_to_terms(&recs, 3, true, 256).is_err());
    }
}
