//! Recursive-descent parser from the expression grammar to canonical germs.
//!
//! Grammar sketch:
//!   expr     := ["-"] term { ("+" | "-") term }
//!   term     := factor { ("*" | "/") factor }
//!   factor   := atom ["^" exponent]
//!   atom     := integer | "i" | "pi" | "x" | logchain | "sin(x)" | "cos(x)"
//!             | "exp(" rate ")" | "(" expr ")"
//!   logchain := "ln(" ("x" | logchain) ")"
//!   exponent := signed rational
//!             | "(" signed rational { ("+"|"-") rational "*pi" ["^2"] } ")"
//!   rate     := [coef "*"] "i*x"            (oscillator, coef rational or
//!                                            rational*pi or "(a+b*pi)")
//!             | signed rational "*x" | "x"  (real exponential)
//!
//! sin and cos are sugar for complex exponentials. Division is admitted
//! only by invertible atoms. A real exponential with negative rate is a
//! null atom; with positive rate the germ has immoderate growth and is
//! rejected.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exponent::{ExponentValue, Frequency};
use crate::expr::{Expr, MonKey};
use crate::scalar::{PiPoly, Rat, Scalar};

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, src };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

/// What an atom was syntactically, for exponent semantics.
enum Kind {
    X,
    Log(usize),
    Scalar,
    Other,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    /// Consume `word` if present and not followed by an identifier char.
    fn keyword(&mut self, word: &str) -> bool {
        let end = self.pos + word.len();
        if self.src.get(self.pos..end) == Some(word) {
            let next = self.s.get(end).copied();
            if !matches!(next, Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("invalid integer literal"))
    }

    /// `int [ "/" int ]`, the slash consumed only when digits follow.
    fn rational(&mut self) -> Result<Rat> {
        let num = self.integer()?;
        if self.peek() == Some(b'/') && self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(Rat::new(num, den))
        } else {
            Ok(Rat::from(num))
        }
    }

    fn signed_rational(&mut self) -> Result<Rat> {
        self.ws();
        let neg = self.eat(b'-');
        self.ws();
        let r = self.rational()?;
        Ok(if neg { -r } else { r })
    }

    fn expr(&mut self) -> Result<Expr> {
        self.ws();
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            self.ws();
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc.add(&t);
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc.sub(&t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            self.ws();
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else if self.peek() == Some(b'/')
                && self.s.get(self.pos + 1) != Some(&b'/')
            {
                let op_pos = self.pos;
                self.pos += 1;
                let start = {
                    self.ws();
                    self.pos
                };
                let f = self.factor()?;
                let inv = f.inv().ok_or_else(|| Error::NonInvertibleDivisor {
                    what: self.src[start..self.pos].trim().to_string(),
                    offset: op_pos,
                })?;
                acc = acc.mul(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        self.ws();
        let (base, kind) = self.atom()?;
        self.ws();
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.exponent()?;
        match kind {
            Kind::X => Ok(Expr::x_pow_neg(e.neg())),
            _ => {
                if !e.b.is_zero() || !e.c.is_zero() || !e.a.is_integer() {
                    return Err(Error::Syntax {
                        offset: at,
                        message: "non-integer exponents are only allowed on x".into(),
                    });
                }
                let k: i64 = e
                    .a
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Syntax { offset: at, message: "exponent too large".into() })?;
                if let Kind::Log(depth) = kind {
                    let mut logs = vec![0i64; depth];
                    logs[depth - 1] = k;
                    return Ok(Expr::from_monomial(
                        MonKey::new(ExponentValue::zero(), logs, Frequency::zero()),
                        Scalar::one(),
                    ));
                }
                self.pow_int(&base, k, at)
            }
        }
    }

    fn pow_int(&self, base: &Expr, k: i64, at: usize) -> Result<Expr> {
        if k.unsigned_abs() > 64 {
            return Err(Error::Syntax { offset: at, message: "exponent too large".into() });
        }
        let b = if k < 0 {
            base.inv().ok_or_else(|| Error::NonInvertibleDivisor {
                what: "negative power of a non-invertible expression".into(),
                offset: at,
            })?
        } else {
            base.clone()
        };
        let mut acc = Expr::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&b);
        }
        Ok(acc)
    }

    /// `signed rational | "(" signed rational { ("+"|"-") rational "*pi"
    /// ["^2"] } ")"`.
    fn exponent(&mut self) -> Result<ExponentValue> {
        self.ws();
        if !self.eat(b'(') {
            return Ok(ExponentValue::from_rat(self.signed_rational()?));
        }
        let a = self.signed_rational()?;
        let mut out = ExponentValue::from_rat(a);
        loop {
            self.ws();
            let sign = if self.eat(b'+') {
                1
            } else if self.eat(b'-') {
                -1
            } else {
                break;
            };
            self.ws();
            let mut r = self.rational()?;
            if sign < 0 {
                r = -r;
            }
            self.ws();
            self.expect(b'*')?;
            self.ws();
            if !self.keyword("pi") {
                return Err(self.err("expected pi"));
            }
            if self.eat(b'^') {
                if !self.eat(b'2') {
                    return Err(self.err("only pi^2 is allowed in exponents"));
                }
                out.c += r;
            } else {
                out.b += r;
            }
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<(Expr, Kind)> {
        self.ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok((Expr::constant(Scalar::from_rat(r)), Kind::Scalar))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.ws();
                self.expect(b')')?;
                Ok((e, Kind::Other))
            }
            _ if self.keyword("pi") => {
                Ok((
                    Expr::constant(Scalar::from_parts(
                        PiPoly::pi_pow(Rat::one(), 1),
                        PiPoly::zero(),
                    )),
                    Kind::Scalar,
                ))
            }
            _ if self.keyword("i") => Ok((Expr::constant(Scalar::i()), Kind::Scalar)),
            _ if self.keyword("x") => Ok((Expr::x(), Kind::X)),
            _ if self.keyword("ln") => {
                let depth = self.logchain()?;
                Ok((Expr::iterated_log(depth), Kind::Log(depth)))
            }
            _ if self.keyword("sin") => {
                self.sincos_arg()?;
                Ok((Expr::sin(Frequency::from_rat(Rat::one())), Kind::Other))
            }
            _ if self.keyword("cos") => {
                self.sincos_arg()?;
                Ok((Expr::cos(Frequency::from_rat(Rat::one())), Kind::Other))
            }
            _ if self.keyword("exp") => self.exp_atom().map(|e| (e, Kind::Other)),
            _ => Err(self.err("expected an atom")),
        }
    }

    /// After "ln": `("(" ("x" | logchain) ")")`, returning the depth.
    fn logchain(&mut self) -> Result<usize> {
        self.expect(b'(')?;
        self.ws();
        let depth = if self.keyword("x") {
            1
        } else if self.keyword("ln") {
            self.logchain()? + 1
        } else {
            return Err(self.err("expected x or ln(...)"));
        };
        self.ws();
        self.expect(b')')?;
        Ok(depth)
    }

    fn sincos_arg(&mut self) -> Result<()> {
        self.expect(b'(')?;
        self.ws();
        if !self.keyword("x") {
            return Err(self.err("sin/cos take the bare argument x"));
        }
        self.ws();
        self.expect(b')')
    }

    /// After "exp": oscillator `exp(w*i*x)`, null atom `exp(-a*x)`, or the
    /// rejected immoderate `exp(a*x)` with positive rate.
    fn exp_atom(&mut self) -> Result<Expr> {
        let call_at = self.pos.saturating_sub(3);
        self.expect(b'(')?;
        self.ws();
        // Parenthesized frequency (a + b*pi).
        if self.eat(b'(') {
            let a = self.signed_rational()?;
            let mut freq = Frequency::from_rat(a);
            loop {
                self.ws();
                let sign = if self.eat(b'+') {
                    1
                } else if self.eat(b'-') {
                    -1
                } else {
                    break;
                };
                self.ws();
                let mut r = self.rational()?;
                if sign < 0 {
                    r = -r;
                }
                self.ws();
                self.expect(b'*')?;
                self.ws();
                if !self.keyword("pi") {
                    return Err(self.err("expected pi"));
                }
                freq.b += r;
            }
            self.expect(b')')?;
            self.ws();
            self.expect(b'*')?;
            self.ws();
            if !self.keyword("i") {
                return Err(self.err("expected i"));
            }
            self.ws();
            self.expect(b'*')?;
            self.ws();
            if !self.keyword("x") {
                return Err(self.err("expected x"));
            }
            self.ws();
            self.expect(b')')?;
            return Ok(Expr::oscillator(freq));
        }
        let neg = self.eat(b'-');
        self.ws();
        // exp(x), exp(-x): rate +-1.
        if self.keyword("x") {
            self.ws();
            self.expect(b')')?;
            return if neg {
                Ok(Expr::null_atom(Rat::one(), Scalar::one()))
            } else {
                Err(Error::NotModerate { what: "exp(x)".into(), offset: call_at })
            };
        }
        // exp(i*x), exp(-i*x): unit frequency.
        if self.keyword("i") {
            self.ws();
            self.expect(b'*')?;
            self.ws();
            if !self.keyword("x") {
                return Err(self.err("expected x"));
            }
            self.ws();
            self.expect(b')')?;
            let one = Rat::one();
            return Ok(Expr::oscillator(Frequency::from_rat(if neg { -one } else { one })));
        }
        let mut q = self.rational()?;
        if neg {
            q = -q;
        }
        self.ws();
        self.expect(b'*')?;
        self.ws();
        let pi_part = self.keyword("pi");
        if pi_part {
            self.ws();
            self.expect(b'*')?;
            self.ws();
        }
        if self.keyword("i") {
            self.ws();
            self.expect(b'*')?;
            self.ws();
            if !self.keyword("x") {
                return Err(self.err("expected x"));
            }
            self.ws();
            self.expect(b')')?;
            let freq = if pi_part { Frequency::pi_multiple(q) } else { Frequency::from_rat(q) };
            return Ok(Expr::oscillator(freq));
        }
        if self.keyword("x") {
            self.ws();
            self.expect(b')')?;
            if pi_part {
                return Err(self.err("real exponential rates must be rational"));
            }
            return if q.is_negative() {
                Ok(Expr::null_atom(-q, Scalar::one()))
            } else {
                Err(Error::NotModerate { what: "exp with positive rate".into(), offset: call_at })
            };
        }
        Err(self.err("expected i*x or x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn basic_atoms() {
        assert_eq!(parse_expr("0").unwrap(), Expr::zero());
        assert_eq!(parse_expr("x").unwrap(), Expr::x());
        assert_eq!(parse_expr("ln(ln(x))").unwrap(), Expr::iterated_log(2));
        assert_eq!(
            parse_expr("sin(x)").unwrap(),
            Expr::sin(Frequency::from_rat(rat_int(1)))
        );
        assert_eq!(
            parse_expr("x^(3/2)").unwrap(),
            Expr::x_pow_neg(ExponentValue::from_rat(rat(-3, 2)))
        );
        assert_eq!(
            parse_expr("exp(-2*x)").unwrap(),
            Expr::null_atom(rat_int(2), Scalar::one())
        );
        assert_eq!(
            parse_expr("exp(1*pi*i*x)").unwrap(),
            Expr::oscillator(Frequency::pi_multiple(rat_int(1)))
        );
    }

    #[test]
    fn two_term_canonical() {
        let e = parse_expr("sin(x)/x + ln(x)/x^2").unwrap();
        let want = Expr::sin(Frequency::from_rat(rat_int(1)))
            .scale_by_power(&ExponentValue::from_int(1))
            .add(&Expr::iterated_log(1).scale_by_power(&ExponentValue::from_int(2)));
        assert_eq!(e, want);
    }

    #[test]
    fn pi_quadratic_exponent() {
        let e = parse_expr("x^(-1-1*pi^2)").unwrap();
        assert_eq!(
            e,
            Expr::x_pow_neg(ExponentValue::new(rat_int(1), rat_int(0), rat_int(1)))
        );
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(parse_expr("exp(x)"), Err(Error::NotModerate { .. })));
        assert!(matches!(parse_expr("exp(2*x)"), Err(Error::NotModerate { .. })));
        assert!(matches!(
            parse_expr("1/sin(x)"),
            Err(Error::NonInvertibleDivisor { .. })
        ));
        assert!(matches!(parse_expr("1/(1 + x^-1)"), Err(Error::NonInvertibleDivisor { .. })));
    }

    #[test]
    fn syntax_error_offsets() {
        let Err(Error::Syntax { offset, .. }) = parse_expr("x + @") else {
            panic!("expected syntax error");
        };
        assert_eq!(offset, 4);
        assert!(parse_expr("x +").is_err());
        assert!(parse_expr("x x").is_err());
    }

    #[test]
    fn division_by_invertibles() {
        assert_eq!(
            parse_expr("1/x").unwrap(),
            Expr::x_pow_neg(ExponentValue::from_int(1))
        );
        let e = parse_expr("1/ln(x)").unwrap();
        assert_eq!(
            e,
            Expr::from_monomial(
                MonKey::new(ExponentValue::zero(), vec![-1], Frequency::zero()),
                Scalar::one()
            )
        );
        // Division by a scalar.
        let h = parse_expr("x/2").unwrap();
        assert_eq!(h, Expr::x().scale(&Scalar::from_rat(rat(1, 2))));
        // Division by an oscillator is multiplication by its conjugate.
        let o = parse_expr("1/exp(i*x)").unwrap();
        assert_eq!(o, Expr::oscillator(Frequency::from_rat(rat_int(-1))));
    }

    #[test]
    fn trig_identity_cancellation() {
        // sin^2 + cos^2 = 1 exactly in the canonical algebra.
        let e = parse_expr("sin(x)^2 + cos(x)^2").unwrap();
        assert_eq!(e, Expr::one());
    }
}
