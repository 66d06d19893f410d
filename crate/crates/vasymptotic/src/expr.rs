//! Canonical representation of computable moderate-growth germs at infinity.
//!
//! A germ is a finite sum of monomials `c * x^(-rho) * l_1^p1 ... l_K^pK * e^(i w x)`
//! (with `l_j` the j-times-iterated logarithm) plus a finite null part of
//! atoms `c * e^(-alpha x)`, `alpha > 0`. Monomials are keyed by
//! `(rho, logPowers, freq)`; coefficients are exact complex values over
//! `Q[pi, 1/pi]`. The representation is canonical: no zero coefficients are
//! stored and keys are unique, so structural equality is germ equality.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::exponent::{ExponentValue, Frequency};
use crate::scalar::{Rat, Scalar};

/// Monomial key `(rho, logPowers, freq)`: the factor
/// `x^(-rho) * prod l_j^p_j * e^(i freq x)`.
///
/// `logs[j]` is the (possibly negative) exponent of the (j+1)-times-iterated
/// logarithm; trailing zeros are trimmed so equal germs have equal keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MonKey {
    pub rho: ExponentValue,
    pub logs: Vec<i64>,
    pub freq: Frequency,
}

impl MonKey {
    pub fn new(rho: ExponentValue, mut logs: Vec<i64>, freq: Frequency) -> Self {
        while logs.last() == Some(&0) {
            logs.pop();
        }
        MonKey { rho, logs, freq }
    }

    pub fn constant() -> Self {
        MonKey::new(ExponentValue::zero(), vec![], Frequency::zero())
    }

    pub fn is_constant(&self) -> bool {
        self.rho.is_zero() && self.logs.is_empty() && self.freq.is_zero()
    }

    /// Key of the product of two monomials: exponents and powers add.
    pub fn mul(&self, o: &Self) -> Self {
        let mut logs = self.logs.clone();
        if logs.len() < o.logs.len() {
            logs.resize(o.logs.len(), 0);
        }
        for (j, p) in o.logs.iter().enumerate() {
            logs[j] += p;
        }
        MonKey::new(self.rho.add(&o.rho), logs, self.freq.add(&o.freq))
    }

    pub fn inv_key(&self) -> Self {
        MonKey::new(self.rho.neg(), self.logs.iter().map(|p| -p).collect(), self.freq.neg())
    }

    /// Key of the complex conjugate monomial.
    pub fn conj(&self) -> Self {
        MonKey::new(self.rho.clone(), self.logs.clone(), self.freq.neg())
    }

    /// Depth of the deepest iterated logarithm present.
    pub fn log_depth(&self) -> usize {
        self.logs.len()
    }
}

/// Canonical computable germ: monomial part plus null part.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Expr {
    monomials: BTreeMap<MonKey, Scalar>,
    null_part: BTreeMap<Rat, Scalar>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Expr::from_monomial(MonKey::constant(), c)
    }

    pub fn from_monomial(key: MonKey, coeff: Scalar) -> Self {
        let mut e = Expr::zero();
        if !coeff.is_zero() {
            e.monomials.insert(key, coeff);
        }
        e
    }

    /// `x^(-rho)`.
    pub fn x_pow_neg(rho: ExponentValue) -> Self {
        Expr::from_monomial(MonKey::new(rho, vec![], Frequency::zero()), Scalar::one())
    }

    /// `x`.
    pub fn x() -> Self {
        Expr::x_pow_neg(ExponentValue::from_int(-1))
    }

    /// The `depth`-times-iterated logarithm, `depth >= 1`.
    pub fn iterated_log(depth: usize) -> Self {
        let mut logs = vec![0i64; depth];
        logs[depth - 1] = 1;
        Expr::from_monomial(
            MonKey::new(ExponentValue::zero(), logs, Frequency::zero()),
            Scalar::one(),
        )
    }

    /// `e^(i w x)`.
    pub fn oscillator(freq: Frequency) -> Self {
        Expr::from_monomial(MonKey::new(ExponentValue::zero(), vec![], freq), Scalar::one())
    }

    /// `sin(w x)` stored as `(e^(iwx) - e^(-iwx)) / 2i`.
    pub fn sin(freq: Frequency) -> Self {
        let half_neg_i = Scalar::from_parts(
            crate::scalar::PiPoly::zero(),
            crate::scalar::PiPoly::from_rat(crate::scalar::rat(-1, 2)),
        );
        let pos = Expr::from_monomial(
            MonKey::new(ExponentValue::zero(), vec![], freq.clone()),
            half_neg_i.clone(),
        );
        let neg = Expr::from_monomial(
            MonKey::new(ExponentValue::zero(), vec![], freq.neg()),
            half_neg_i.neg(),
        );
        pos.add(&neg)
    }

    /// `cos(w x)` stored as `(e^(iwx) + e^(-iwx)) / 2`.
    pub fn cos(freq: Frequency) -> Self {
        let half = Scalar::from_rat(crate::scalar::rat(1, 2));
        let pos = Expr::from_monomial(
            MonKey::new(ExponentValue::zero(), vec![], freq.clone()),
            half.clone(),
        );
        let neg =
            Expr::from_monomial(MonKey::new(ExponentValue::zero(), vec![], freq.neg()), half);
        pos.add(&neg)
    }

    /// `coeff * e^(-alpha x)`; requires `alpha > 0`.
    pub fn null_atom(alpha: Rat, coeff: Scalar) -> Self {
        assert!(alpha.is_positive(), "null atom decay rate must be positive");
        let mut e = Expr::zero();
        if !coeff.is_zero() {
            e.null_part.insert(alpha, coeff);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty() && self.null_part.is_empty()
    }

    /// True when the germ is a null function (possibly zero).
    pub fn is_null(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&MonKey, &Scalar)> {
        self.monomials.iter()
    }

    pub fn monomial_count(&self) -> usize {
        self.monomials.len()
    }

    pub fn null_atoms(&self) -> impl Iterator<Item = (&Rat, &Scalar)> {
        self.null_part.iter()
    }

    pub fn coeff_of(&self, key: &MonKey) -> Scalar {
        self.monomials.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The germ with the null part removed.
    pub fn strip_null(&self) -> Expr {
        Expr { monomials: self.monomials.clone(), null_part: BTreeMap::new() }
    }

    /// The null part alone.
    pub fn null_only(&self) -> Expr {
        Expr { monomials: BTreeMap::new(), null_part: self.null_part.clone() }
    }

    /// Minimum decay exponent among monomials by real value, if any.
    pub fn min_rho(&self) -> Option<ExponentValue> {
        let mut best: Option<&ExponentValue> = None;
        for k in self.monomials.keys() {
            best = Some(match best {
                None => &k.rho,
                Some(b) => {
                    if k.rho.cmp_real(b) == std::cmp::Ordering::Less {
                        &k.rho
                    } else {
                        b
                    }
                }
            });
        }
        best.cloned()
    }

    /// The sub-sum of monomials whose rho equals `r` (by real value),
    /// with their rho reset to zero. Used by the expansion recursion.
    pub fn slice_at_rho(&self, r: &ExponentValue) -> Expr {
        let mut out = Expr::zero();
        for (k, c) in &self.monomials {
            if k.rho.cmp_real(r) == std::cmp::Ordering::Equal {
                out.monomials.insert(
                    MonKey::new(ExponentValue::zero(), k.logs.clone(), k.freq.clone()),
                    c.clone(),
                );
            }
        }
        out
    }

    pub fn add(&self, o: &Expr) -> Expr {
        let mut out = self.clone();
        for (k, c) in &o.monomials {
            let e = out.monomials.entry(k.clone()).or_insert_with(Scalar::zero);
            *e = e.add(c);
            if e.is_zero() {
                out.monomials.remove(k);
            }
        }
        for (a, c) in &o.null_part {
            let e = out.null_part.entry(a.clone()).or_insert_with(Scalar::zero);
            *e = e.add(c);
            if e.is_zero() {
                out.null_part.remove(a);
            }
        }
        out
    }

    pub fn neg(&self) -> Expr {
        Expr {
            monomials: self.monomials.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
            null_part: self.null_part.iter().map(|(a, c)| (a.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Expr {
        if s.is_zero() {
            return Expr::zero();
        }
        Expr {
            monomials: self.monomials.iter().map(|(k, c)| (k.clone(), c.mul(s))).collect(),
            null_part: self.null_part.iter().map(|(a, c)| (a.clone(), c.mul(s))).collect(),
        }
    }

    /// Multiplication. Monomial x monomial and null x null products are
    /// exact. A null atom times a non-constant monomial is dropped: the
    /// product is itself a null function, so the result differs from the
    /// pointwise product by an element of the null ideal and all germ-level
    /// semantics (valuation, distance, expansion, quotient) are unaffected.
    pub fn mul(&self, o: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ka, ca) in &self.monomials {
            for (kb, cb) in &o.monomials {
                let key = ka.mul(kb);
                let c = ca.mul(cb);
                let e = out.monomials.entry(key.clone()).or_insert_with(Scalar::zero);
                *e = e.add(&c);
                if e.is_zero() {
                    out.monomials.remove(&key);
                }
            }
        }
        let mut add_null = |alpha: Rat, c: Scalar| {
            let e = out.null_part.entry(alpha.clone()).or_insert_with(Scalar::zero);
            *e = e.add(&c);
            if e.is_zero() {
                out.null_part.remove(&alpha);
            }
        };
        for (aa, ca) in &self.null_part {
            for (ab, cb) in &o.null_part {
                add_null(aa + ab, ca.mul(cb));
            }
        }
        for (null, moderate) in [(&self.null_part, o), (&o.null_part, self)] {
            for (alpha, cn) in null.iter() {
                for (k, cm) in &moderate.monomials {
                    if k.is_constant() {
                        add_null(alpha.clone(), cn.mul(cm));
                    }
                }
            }
        }
        out
    }

    /// Multiply by `x^(-r)`: every monomial's rho increases by `r`.
    pub fn scale_by_power(&self, r: &ExponentValue) -> Expr {
        Expr {
            monomials: self
                .monomials
                .iter()
                .map(|(k, c)| {
                    (MonKey::new(k.rho.add(r), k.logs.clone(), k.freq.clone()), c.clone())
                })
                .collect(),
            null_part: self.null_part.clone(),
        }
    }

    /// Complex conjugate germ.
    pub fn conj(&self) -> Expr {
        Expr {
            monomials: self.monomials.iter().map(|(k, c)| (k.conj(), c.conj())).collect(),
            null_part: self.null_part.iter().map(|(a, c)| (a.clone(), c.conj())).collect(),
        }
    }

    /// Multiplicative inverse, defined when the germ is a single monomial
    /// with a unit coefficient.
    pub fn inv(&self) -> Option<Expr> {
        if !self.null_part.is_empty() || self.monomials.len() != 1 {
            return None;
        }
        let (k, c) = self.monomials.iter().next().unwrap();
        Some(Expr::from_monomial(k.inv_key(), c.inv()?))
    }

    /// Deepest iterated-log depth appearing anywhere in the germ.
    pub fn log_depth(&self) -> usize {
        self.monomials.keys().map(|k| k.log_depth()).max().unwrap_or(0)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.monomials {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})*x^-({:?})*l{:?}*e^(i({:?})x)", c, k.rho, k.logs, k.freq)?;
        }
        for (a, c) in &self.null_part {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})*e^(-{}x)", c, a)?;
        }
        Ok(())
    }
}
