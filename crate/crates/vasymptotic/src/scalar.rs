//! Exact coefficient arithmetic.
//!
//! Monomial coefficients live in the ring `Q[pi, 1/pi][i]`: complex numbers
//! whose real and imaginary parts are Laurent polynomials in pi with rational
//! coefficients. This is the smallest coefficient ring closed under the
//! operations the expansion machinery needs (the integral coefficients carry
//! powers of pi, the Sine-series carries pi/2) while keeping equality and
//! zero-testing decidable: pi is transcendental, so two Laurent polynomials
//! agree iff they agree coefficient-wise.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Exact dyadic rational for a finite `f64`.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Scale down through a float division to survive huge numerators.
    let n = r.numer();
    let d = r.denom();
    let nf = bigint_to_f64(n);
    let df = bigint_to_f64(d);
    nf / df
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(if n.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Laurent polynomial in pi over the rationals, stored sparsely with no zero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PiPoly {
    terms: BTreeMap<i64, Rat>,
}

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly { terms: BTreeMap::new() }
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut p = PiPoly::zero();
        if !r.is_zero() {
            p.terms.insert(0, r);
        }
        p
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    /// `r * pi^k`.
    pub fn pi_pow(r: Rat, k: i64) -> Self {
        let mut p = PiPoly::zero();
        if !r.is_zero() {
            p.terms.insert(k, r);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// If `self` is a single term `r * pi^k`, returns `(k, r)`.
    pub fn as_monomial(&self) -> Option<(i64, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, v)| (*k, v))
        } else {
            None
        }
    }

    /// If `self` is a plain rational (no pi), returns it.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_zero() {
            return None;
        }
        match self.as_monomial() {
            Some((0, r)) => Some(r),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (k, v) in &other.terms {
            let e = out.entry(*k).or_insert_with(Rat::zero);
            *e += v;
            if e.is_zero() {
                out.remove(k);
            }
        }
        PiPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        PiPoly { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<i64, Rat> = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let e = out.entry(ka + kb).or_insert_with(Rat::zero);
                *e += va * vb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        PiPoly { terms: out }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return PiPoly::zero();
        }
        PiPoly { terms: self.terms.iter().map(|(k, v)| (*k, v * r)).collect() }
    }

    /// Multiplicative inverse, defined only for single-term polynomials.
    pub fn inv(&self) -> Option<Self> {
        let (k, r) = self.as_monomial()?;
        Some(PiPoly::pi_pow(Rat::one() / r, -k))
    }

    pub fn eval_f64(&self) -> f64 {
        let pi = std::f64::consts::PI;
        self.terms.iter().map(|(k, v)| rat_to_f64(v) * pi.powi(*k as i32)).sum()
    }
}

impl fmt::Debug for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", v)?,
                1 => write!(f, "{}*pi", v)?,
                _ => write!(f, "{}*pi^{}", v, k)?,
            }
        }
        Ok(())
    }
}

/// Complex coefficient with exact `Q[pi, 1/pi]` real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    pub re: PiPoly,
    pub im: PiPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: PiPoly::zero(), im: PiPoly::zero() }
    }

    pub fn one() -> Self {
        Scalar { re: PiPoly::one(), im: PiPoly::zero() }
    }

    pub fn i() -> Self {
        Scalar { re: PiPoly::zero(), im: PiPoly::one() }
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar { re: PiPoly::from_rat(r), im: PiPoly::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn from_parts(re: PiPoly, im: PiPoly) -> Self {
        Scalar { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Scalar { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Scalar { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        Scalar { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Scalar {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Inverse when `|self|^2` is a single pi-power; this covers every
    /// coefficient of an invertible atom (rationals, `i`, pi powers and
    /// rational complex units).
    pub fn inv(&self) -> Option<Self> {
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let ninv = norm.inv()?;
        Some(Scalar { re: self.re.mul(&ninv), im: self.im.neg().mul(&ninv) })
    }

    pub fn eval_f64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.eval_f64(), self.im.eval_f64())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            write!(f, "{:?}", self.re)
        } else if self.re.is_zero() {
            write!(f, "({:?})*i", self.im)
        } else {
            write!(f, "({:?}) + ({:?})*i", self.re, self.im)
        }
    }
}
