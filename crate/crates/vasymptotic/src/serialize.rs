//! Lossless JSON document form of expansion series.
//!
//! Rationals are carried as "p/q" strings so the round trip is exact;
//! monomial records follow the canonical ordering, making serialized
//! output deterministic.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{ExponentValue, Frequency};
use crate::expr::{Expr, MonKey};
use crate::scalar::{PiPoly, Rat, Scalar};
use crate::series::VAsymptoticSeries;

fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_from_string(s: &str) -> Result<Rat> {
    Rat::from_str(s).map_err(|_| Error::InvalidSeries(format!("bad rational {s:?}")))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExponentDoc {
    pub a: String,
    pub b: String,
    pub c: String,
}

impl ExponentDoc {
    fn from_value(v: &ExponentValue) -> Self {
        ExponentDoc {
            a: rat_to_string(&v.a),
            b: rat_to_string(&v.b),
            c: rat_to_string(&v.c),
        }
    }

    fn to_value(&self) -> Result<ExponentValue> {
        Ok(ExponentValue::new(
            rat_from_string(&self.a)?,
            rat_from_string(&self.b)?,
            rat_from_string(&self.c)?,
        ))
    }
}

/// PiPoly as (power of pi, rational) pairs in ascending power order.
type PiDoc = Vec<(i64, String)>;

fn pi_to_doc(p: &PiPoly) -> PiDoc {
    p.terms().map(|(k, r)| (k, rat_to_string(r))).collect()
}

fn pi_from_doc(d: &PiDoc) -> Result<PiPoly> {
    let mut acc = PiPoly::zero();
    for (k, s) in d {
        acc = acc.add(&PiPoly::pi_pow(rat_from_string(s)?, *k));
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonomialDoc {
    pub rho: ExponentDoc,
    pub logs: Vec<i64>,
    pub freq_a: String,
    pub freq_b: String,
    pub re: PiDoc,
    pub im: PiDoc,
}

/// JSON document form of a `VAsymptoticSeries`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesDocument {
    pub exponents: Vec<ExponentDoc>,
    pub coefficients: Vec<Vec<MonomialDoc>>,
    pub support: Vec<usize>,
    pub diverges_to_infinity: bool,
}

impl SeriesDocument {
    pub fn from_series(s: &VAsymptoticSeries) -> Result<Self> {
        let mut exponents = Vec::with_capacity(s.terms.len());
        let mut coefficients = Vec::with_capacity(s.terms.len());
        for (r, phi) in &s.terms {
            if phi.null_atoms().next().is_some() {
                return Err(Error::InvalidSeries(
                    "series coefficients must not carry null atoms".into(),
                ));
            }
            exponents.push(ExponentDoc::from_value(r));
            coefficients.push(
                phi.monomials()
                    .map(|(key, coeff)| MonomialDoc {
                        rho: ExponentDoc::from_value(&key.rho),
                        logs: key.logs.clone(),
                        freq_a: rat_to_string(&key.freq.a),
                        freq_b: rat_to_string(&key.freq.b),
                        re: pi_to_doc(&coeff.re),
                        im: pi_to_doc(&coeff.im),
                    })
                    .collect(),
            );
        }
        Ok(SeriesDocument {
            exponents,
            coefficients,
            support: s.support.clone(),
            diverges_to_infinity: s.diverges_to_infinity,
        })
    }

    pub fn to_series(&self) -> Result<VAsymptoticSeries> {
        if self.exponents.len() != self.coefficients.len() {
            return Err(Error::InvalidSeries(
                "exponent and coefficient counts differ".into(),
            ));
        }
        let mut terms = Vec::with_capacity(self.exponents.len());
        for (r, monos) in self.exponents.iter().zip(&self.coefficients) {
            let mut phi = Expr::zero();
            for m in monos {
                let key = MonKey::new(
                    m.rho.to_value()?,
                    m.logs.clone(),
                    Frequency::new(rat_from_string(&m.freq_a)?, rat_from_string(&m.freq_b)?),
                );
                let coeff = Scalar::from_parts(pi_from_doc(&m.re)?, pi_from_doc(&m.im)?);
                phi = phi.add(&Expr::from_monomial(key, coeff));
            }
            terms.push((r.to_value()?, phi));
        }
        let s = VAsymptoticSeries::new(terms, self.diverges_to_infinity)?;
        if s.support != self.support {
            return Err(Error::InvalidSeries("support does not match coefficients".into()));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use crate::rmt::{rmt_series, BoundaryData};
    use crate::series::expand;

    #[test]
    fn round_trips_expansion() {
        let f = parse_expr("sin(x)/x + ln(x)/x^2 + 1/x^3").unwrap();
        let s = expand(&f, 4);
        let doc = SeriesDocument::from_series(&s).unwrap();
        let text = doc.to_json().unwrap();
        let back = SeriesDocument::from_json(&text).unwrap().to_series().unwrap();
        assert_eq!(back.terms, s.terms);
        assert_eq!(back.support, s.support);
        assert_eq!(back.diverges_to_infinity, s.diverges_to_infinity);
    }

    #[test]
    fn round_trips_pi_exponents() {
        let s = rmt_series(&BoundaryData::one(), 3).unwrap();
        let doc = SeriesDocument::from_series(&s).unwrap();
        let back = SeriesDocument::from_json(&doc.to_json().unwrap())
            .unwrap()
            .to_series()
            .unwrap();
        assert_eq!(back.terms, s.terms);
        assert!(back.diverges_to_infinity);
    }

    #[test]
    fn deterministic_output() {
        let f = parse_expr("ln(x)/x^2 + sin(x)/x").unwrap();
        let g = parse_expr("sin(x)/x + ln(x)/x^2").unwrap();
        let a = SeriesDocument::from_series(&expand(&f, 3)).unwrap().to_json().unwrap();
        let b = SeriesDocument::from_series(&expand(&g, 3)).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }
}
