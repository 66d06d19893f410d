//! Pseudovaluation and the induced ultrametric on canonical germs.

use std::cmp::Ordering;
use std::fmt;

use crate::exponent::ExponentValue;
use crate::expr::Expr;

/// Value of the pseudovaluation: a real exponent or infinity.
///
/// Infinity exactly when the germ is a null function. On canonical germs the
/// valuation is the minimum decay exponent among monomials; log factors and
/// oscillators contribute zero because every nonzero combination of them at
/// a common decay exponent stays bounded away from faster decay.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(ExponentValue),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(&self) -> Option<&ExponentValue> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinity => None,
        }
    }

    /// Order by real value, with Infinity greatest.
    pub fn cmp_real(&self, o: &Valuation) -> Ordering {
        match (self, o) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp_real(b),
        }
    }

    /// Sign of the value (Infinity counts as positive).
    pub fn sign(&self) -> Ordering {
        match self {
            Valuation::Infinity => Ordering::Greater,
            Valuation::Finite(e) => e.sign_real(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Valuation::Infinity => f64::INFINITY,
            Valuation::Finite(e) => e.to_f64(),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinity => write!(f, "Infinity"),
            Valuation::Finite(e) => write!(f, "{}", e),
        }
    }
}

/// Pseudovaluation of a canonical germ.
pub fn val(a: &Expr) -> Valuation {
    match a.min_rho() {
        Some(r) => Valuation::Finite(r),
        None => Valuation::Infinity,
    }
}

/// Ultrametric distance `e^(-v(a-b))`, with `e^(-inf) = 0`.
pub fn dist(a: &Expr, b: &Expr) -> f64 {
    match val(&a.sub(b)) {
        Valuation::Infinity => 0.0,
        Valuation::Finite(e) => (-e.to_f64()).exp(),
    }
}

/// Position of a germ relative to the valuation filtration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GermClass {
    /// Valuation infinity: the germ is a null function.
    Null,
    /// Valuation strictly positive.
    VInfinitesimal,
    /// Valuation exactly zero.
    VConstant,
    /// Valuation non-negative but neither zero nor positive; unreachable on
    /// this algebra, kept for forward compatibility.
    VFiniteOther,
    /// Valuation strictly negative.
    VInfinitelyLarge,
}

impl fmt::Display for GermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GermClass::Null => "Null",
            GermClass::VInfinitesimal => "VInfinitesimal",
            GermClass::VConstant => "VConstant",
            GermClass::VFiniteOther => "VFinite-other",
            GermClass::VInfinitelyLarge => "VInfinitelyLarge",
        };
        write!(f, "{}", s)
    }
}

pub fn classify(a: &Expr) -> GermClass {
    match val(a) {
        Valuation::Infinity => GermClass::Null,
        Valuation::Finite(e) => match e.sign_real() {
            Ordering::Greater => GermClass::VInfinitesimal,
            Ordering::Equal => GermClass::VConstant,
            Ordering::Less => GermClass::VInfinitelyLarge,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Frequency;
    use crate::scalar::{rat, rat_int, Scalar};

    #[test]
    fn value_table() {
        for r in [rat(1, 2), rat_int(1), rat_int(3)] {
            let e = Expr::x_pow_neg(ExponentValue::from_rat(r.clone()));
            assert_eq!(val(&e), Valuation::Finite(ExponentValue::from_rat(r)));
        }
        let pisq = ExponentValue::new(rat_int(0), rat_int(0), rat_int(1));
        assert_eq!(val(&Expr::x_pow_neg(pisq.clone())), Valuation::Finite(pisq));

        // x^3 + x has valuation -3.
        let p = Expr::x_pow_neg(ExponentValue::from_int(-3)).add(&Expr::x());
        assert_eq!(val(&p), Valuation::Finite(ExponentValue::from_int(-3)));

        for e in [
            Expr::iterated_log(1),
            Expr::iterated_log(2),
            Expr::sin(Frequency::from_rat(rat_int(1))),
            Expr::oscillator(Frequency::pi_multiple(rat_int(1))),
        ] {
            assert_eq!(val(&e), Valuation::Finite(ExponentValue::zero()));
        }

        assert_eq!(val(&Expr::zero()), Valuation::Infinity);
        assert_eq!(val(&Expr::null_atom(rat_int(1), Scalar::one())), Valuation::Infinity);
    }

    #[test]
    fn distances() {
        let f = Expr::sin(Frequency::from_rat(rat_int(1)));
        assert_eq!(dist(&f, &f), 0.0);
        let a = Expr::x_pow_neg(ExponentValue::from_int(1));
        let b = a.scale(&Scalar::from_int(2));
        assert!((dist(&a, &b) - (-1.0f64).exp()).abs() < 1e-15);
        let c = Expr::cos(Frequency::from_rat(rat_int(1)));
        assert_eq!(dist(&f, &c), 1.0);
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&Expr::iterated_log(1)), GermClass::VConstant);
        assert_eq!(classify(&Expr::x()), GermClass::VInfinitelyLarge);
        assert_eq!(classify(&Expr::null_atom(rat_int(1), Scalar::one())), GermClass::Null);
        assert_eq!(
            classify(&Expr::x_pow_neg(ExponentValue::from_rat(rat(1, 2)))),
            GermClass::VInfinitesimal
        );
        assert_eq!(classify(&Expr::zero()), GermClass::Null);
    }
}
