//! Thin high-precision layer: a context bundling precision and the constant
//! cache, plus a complex pair type used by evaluation and quadrature.

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::scalar::{PiPoly, Rat, Scalar};

const RM: RoundingMode = RoundingMode::ToEven;

/// Precision context. All operations round to `p` bits.
pub struct Ctx {
    pub p: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(bits: usize) -> Self {
        Ctx { p: bits.max(64), cc: Consts::new().expect("constant cache") }
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i64(0, self.p)
    }

    pub fn from_i64(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.p)
    }

    pub fn from_rat(&mut self, r: &Rat) -> BigFloat {
        let num = parse_bigint(r.numer(), self.p, &mut self.cc);
        let den = parse_bigint(r.denom(), self.p, &mut self.cc);
        num.div(&den, self.p, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.p, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.p, RM, &mut self.cc)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }

    /// `a^n` for any integer n.
    pub fn powi(&self, a: &BigFloat, n: i64) -> BigFloat {
        if n == 0 {
            return self.from_i64(1);
        }
        let base = a.powi(n.unsigned_abs() as usize, self.p, RM);
        if n < 0 {
            base.reciprocal(self.p, RM)
        } else {
            base
        }
    }

    /// `a^r` for positive `a` and arbitrary real `r`, via `exp(r ln a)`.
    pub fn pow_real(&mut self, a: &BigFloat, r: &BigFloat) -> BigFloat {
        let l = self.ln(a);
        let e = self.mul(r, &l);
        self.exp(&e)
    }

    pub fn eval_pipoly(&mut self, p: &PiPoly) -> BigFloat {
        let pi = self.pi();
        let mut acc = self.zero();
        for (k, r) in p.terms() {
            let c = self.from_rat(r);
            let t = self.mul(&c, &self.powi(&pi, k));
            acc = self.add(&acc, &t);
        }
        acc
    }

    pub fn eval_scalar(&mut self, s: &Scalar) -> Cplx {
        Cplx { re: self.eval_pipoly(&s.re), im: self.eval_pipoly(&s.im) }
    }
}

fn parse_bigint(n: &num_bigint::BigInt, p: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&n.to_string(), astro_float::Radix::Dec, p, RM, cc)
}

/// Round-to-nearest f64 view of a finite BigFloat.
pub fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _n_bits, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *words.last().expect("nonzero mantissa") as f64;
    let mut v = top;
    if words.len() >= 2 {
        v += words[words.len() - 2] as f64 / 2f64.powi(astro_float::WORD_BIT_SIZE as i32);
    }
    // Value is 0.mantissa * 2^exp with the top word carrying the leading bits.
    let mut r = v * 2f64.powi(exp - astro_float::WORD_BIT_SIZE as i32);
    if sign.is_negative() {
        r = -r;
    }
    r
}

/// Complex number as a pair of BigFloats.
#[derive(Clone, Debug)]
pub struct Cplx {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Cplx {
    pub fn zero(ctx: &Ctx) -> Self {
        Cplx { re: ctx.zero(), im: ctx.zero() }
    }

    pub fn real(re: BigFloat, ctx: &Ctx) -> Self {
        Cplx { re, im: ctx.zero() }
    }

    pub fn add(&self, o: &Cplx, ctx: &Ctx) -> Cplx {
        Cplx { re: ctx.add(&self.re, &o.re), im: ctx.add(&self.im, &o.im) }
    }

    pub fn sub(&self, o: &Cplx, ctx: &Ctx) -> Cplx {
        Cplx { re: ctx.sub(&self.re, &o.re), im: ctx.sub(&self.im, &o.im) }
    }

    pub fn mul(&self, o: &Cplx, ctx: &Ctx) -> Cplx {
        Cplx {
            re: ctx.sub(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im)),
            im: ctx.add(&ctx.mul(&self.re, &o.im), &ctx.mul(&self.im, &o.re)),
        }
    }

    pub fn scale(&self, s: &BigFloat, ctx: &Ctx) -> Cplx {
        Cplx { re: ctx.mul(&self.re, s), im: ctx.mul(&self.im, s) }
    }

    pub fn abs(&self, ctx: &Ctx) -> BigFloat {
        let n = ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im));
        ctx.sqrt(&n)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(bf_to_f64(&self.re), bf_to_f64(&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn rational_conversion_round_trips() {
        let mut ctx = Ctx::new(128);
        let r = rat(-355, 113);
        let x = ctx.from_rat(&r);
        assert!((bf_to_f64(&x) + 355.0 / 113.0).abs() < 1e-15);
    }

    #[test]
    fn f64_extraction() {
        let ctx = Ctx::new(192);
        let x = ctx.from_f64(1.25e-9);
        assert_eq!(bf_to_f64(&x), 1.25e-9);
        let y = ctx.from_f64(-3.0e12);
        assert_eq!(bf_to_f64(&y), -3.0e12);
    }

    #[test]
    fn pow_real_matches_f64() {
        let mut ctx = Ctx::new(128);
        let a = ctx.from_i64(100);
        let r = ctx.from_f64(-1.5);
        let v = ctx.pow_real(&a, &r);
        assert!((bf_to_f64(&v) - 100f64.powf(-1.5)).abs() < 1e-15);
    }
}
