//! Exponents of the form `a + b*pi + c*pi^2` and frequencies `a + b*pi`,
//! with exact rational components.
//!
//! Two orders coexist on exponents. The derived structural order compares the
//! component triples lexicographically and exists only so exponents can key
//! ordered maps. The mathematically meaningful order is [`ExponentValue::cmp_real`],
//! which compares real values. Because pi is transcendental, a nonzero triple
//! never evaluates to zero, so the real comparison is decidable: evaluate the
//! difference over a rational enclosure of pi and tighten the enclosure until
//! the interval excludes zero.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::scalar::{rat_to_f64, Rat};

/// Exact rational enclosure `lo <= pi <= hi` with `hi - lo = 2^-(bits-3)` or so.
fn pi_enclosure(bits: usize) -> (Rat, Rat) {
    use astro_float::{Consts, RoundingMode};
    let mut cc = Consts::new().expect("pi constant cache");
    let lo = cc.pi(bits, RoundingMode::Down);
    let hi = cc.pi(bits, RoundingMode::Up);
    (bigfloat_to_rat(&lo), bigfloat_to_rat(&hi))
}

/// Exact rational value of a finite `BigFloat` (they are all dyadic).
pub(crate) fn bigfloat_to_rat(x: &astro_float::BigFloat) -> Rat {
    let (words, n_bits, sign, exp, _inexact) =
        x.as_raw_parts().expect("finite big-float");
    let mut mantissa = BigInt::zero();
    for (i, w) in words.iter().enumerate() {
        mantissa += BigInt::from(*w) << (astro_float::WORD_BIT_SIZE * i);
    }
    if sign.is_negative() {
        mantissa = -mantissa;
    }
    // Value is 0.mantissa * 2^exp with the mantissa holding n_bits bits.
    let shift = exp as i64 - n_bits as i64;
    let num = mantissa;
    if shift >= 0 {
        Rat::from(num << shift as usize)
    } else {
        Rat::new(num, BigInt::one() << (-shift) as usize)
    }
}

static PI_LEVELS: Lazy<Vec<(Rat, Rat)>> =
    Lazy::new(|| [128usize, 512, 2048].iter().map(|&b| pi_enclosure(b)).collect());

/// Sign of `a + b*pi + c*pi^2` for rational `a, b, c`, exact.
fn sign_of_pi_quadratic(a: &Rat, b: &Rat, c: &Rat) -> Ordering {
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ordering::Equal;
    }
    for (lo, hi) in PI_LEVELS.iter() {
        let (plo, phi) = (lo, hi);
        // Interval square of [plo, phi]; both endpoints are positive.
        let sq_lo = plo * plo;
        let sq_hi = phi * phi;
        let lin_lo = if b.is_negative() { b * phi } else { b * plo };
        let lin_hi = if b.is_negative() { b * plo } else { b * phi };
        let quad_lo = if c.is_negative() { c * &sq_hi } else { c * &sq_lo };
        let quad_hi = if c.is_negative() { c * &sq_lo } else { c * &sq_hi };
        let total_lo = a + &lin_lo + &quad_lo;
        let total_hi = a + &lin_hi + &quad_hi;
        if total_lo.is_positive() {
            return Ordering::Greater;
        }
        if total_hi.is_negative() {
            return Ordering::Less;
        }
    }
    // 2048 bits decides any sign question arising from exponents with
    // components of plausible size; reaching this point means the
    // enclosure table needs another level.
    unreachable!("pi enclosure table exhausted; add a higher precision level")
}

/// Exponent `a + b*pi + c*pi^2` with exact rational components.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExponentValue {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl ExponentValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rat(a: Rat) -> Self {
        ExponentValue { a, b: Rat::zero(), c: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(crate::scalar::rat_int(n))
    }

    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        ExponentValue { a, b, c }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ExponentValue { a: &self.a + &o.a, b: &self.b + &o.b, c: &self.c + &o.c }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ExponentValue { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c }
    }

    pub fn neg(&self) -> Self {
        ExponentValue { a: -&self.a, b: -&self.b, c: -&self.c }
    }

    /// Comparison by real value, not by components.
    pub fn cmp_real(&self, o: &Self) -> Ordering {
        let d = self.sub(o);
        sign_of_pi_quadratic(&d.a, &d.b, &d.c)
    }

    /// Sign of the real value.
    pub fn sign_real(&self) -> Ordering {
        sign_of_pi_quadratic(&self.a, &self.b, &self.c)
    }

    pub fn min_real(a: Self, b: Self) -> Self {
        if a.cmp_real(&b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    pub fn to_f64(&self) -> f64 {
        let pi = std::f64::consts::PI;
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * pi + rat_to_f64(&self.c) * pi * pi
    }
}

impl fmt::Debug for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.a.is_zero() {
            parts.push(format!("{}", self.a));
        }
        if !self.b.is_zero() {
            parts.push(if self.b.is_one() { "pi".into() } else { format!("{}*pi", self.b) });
        }
        if !self.c.is_zero() {
            parts.push(if self.c.is_one() { "pi^2".into() } else { format!("{}*pi^2", self.c) });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Oscillation frequency `a + b*pi`: the germ carries a factor `e^(i w x)`.
///
/// Since pi is irrational, distinct component pairs denote distinct
/// frequencies, so the structural equality and order are faithful.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Frequency {
    pub a: Rat,
    pub b: Rat,
}

impl Frequency {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rat(a: Rat) -> Self {
        Frequency { a, b: Rat::zero() }
    }

    /// `b * pi`.
    pub fn pi_multiple(b: Rat) -> Self {
        Frequency { a: Rat::zero(), b }
    }

    pub fn new(a: Rat, b: Rat) -> Self {
        Frequency { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Frequency { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn neg(&self) -> Self {
        Frequency { a: -&self.a, b: -&self.b }
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * std::f64::consts::PI
    }
}

impl fmt::Debug for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            if self.b.is_one() {
                write!(f, "pi")
            } else {
                write!(f, "{}*pi", self.b)
            }
        } else {
            write!(f, "{} + {}*pi", self.a, self.b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn pi_enclosure_brackets_pi() {
        let (lo, hi) = pi_enclosure(128);
        assert!(rat_to_f64(&lo) <= std::f64::consts::PI);
        assert!(rat_to_f64(&hi) >= std::f64::consts::PI);
        let width = &hi - &lo;
        assert!(rat_to_f64(&width) < 1e-30);
    }

    #[test]
    fn real_order_disagrees_with_structural_order() {
        // 22/7 > pi in value but (22/7, 0, 0) > (0, 1, 0) structurally too;
        // use 3 < pi where the structural order says the opposite.
        let three = ExponentValue::from_int(3);
        let pi = ExponentValue::new(rat_int(0), rat_int(1), rat_int(0));
        assert_eq!(three.cmp_real(&pi), Ordering::Less);
        assert_eq!(three.cmp(&pi), Ordering::Greater);

        let approx = ExponentValue::from_rat(rat(22, 7));
        assert_eq!(approx.cmp_real(&pi), Ordering::Greater);
    }

    #[test]
    fn tight_comparisons_resolve() {
        // 355/113 agrees with pi to 3e-7; still decidable.
        let close = ExponentValue::from_rat(rat(355, 113));
        let pi = ExponentValue::new(rat_int(0), rat_int(1), rat_int(0));
        assert_eq!(close.cmp_real(&pi), Ordering::Greater);

        // pi^2 vs a convergent of pi^2.
        let pisq = ExponentValue::new(rat_int(0), rat_int(0), rat_int(1));
        let c = ExponentValue::from_rat(rat(227, 23));
        assert_eq!(c.cmp_real(&pisq), Ordering::Less);

        let same = ExponentValue::new(rat(1, 2), rat_int(-3), rat(7, 5));
        assert_eq!(same.cmp_real(&same.clone()), Ordering::Equal);
    }

    #[test]
    fn arithmetic() {
        let e1 = ExponentValue::new(rat_int(1), rat_int(2), rat_int(0));
        let e2 = ExponentValue::new(rat_int(4), rat_int(-2), rat(1, 3));
        let s = e1.add(&e2);
        assert_eq!(s, ExponentValue::new(rat_int(5), rat_int(0), rat(1, 3)));
        assert!(e1.sub(&e1).is_zero());
        assert!((s.to_f64() - (5.0 + std::f64::consts::PI.powi(2) / 3.0)).abs() < 1e-12);
    }
}
