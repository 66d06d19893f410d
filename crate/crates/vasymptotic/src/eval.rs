//! Numeric evaluation of canonical germs at a point.

use astro_float::BigFloat;

use crate::bigfloat::{bf_to_f64, Cplx, Ctx};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Evaluate `a` at `x > 0` in the given precision context.
///
/// Fails with `XTooSmall` if `x` is not large enough for every iterated
/// logarithm appearing in `a` to be positive.
pub fn eval_at(a: &Expr, x: &BigFloat, ctx: &mut Ctx) -> Result<Cplx> {
    let depth = a.log_depth();
    // logs[j] = (j+1)-times-iterated logarithm of x.
    let mut logs: Vec<BigFloat> = Vec::with_capacity(depth);
    let mut cur = x.clone();
    if !cur.is_positive() {
        return Err(Error::XTooSmall { x: bf_to_f64(x), depth: 0 });
    }
    for j in 0..depth {
        cur = ctx.ln(&cur);
        if !cur.is_positive() {
            return Err(Error::XTooSmall { x: bf_to_f64(x), depth: j + 1 });
        }
        logs.push(cur.clone());
    }
    let lnx = if depth >= 1 { logs[0].clone() } else { ctx.ln(x) };

    let mut acc = Cplx::zero(ctx);
    for (key, coeff) in a.monomials() {
        let mut term = ctx.eval_scalar(coeff);
        // x^(-rho) = exp(-rho * ln x)
        if !key.rho.is_zero() {
            let pi = ctx.pi();
            let ra = ctx.from_rat(&key.rho.a);
            let rb = ctx.from_rat(&key.rho.b);
            let rc = ctx.from_rat(&key.rho.c);
            let pisq = ctx.mul(&pi, &pi);
            let rho = ctx.add(&ra, &ctx.add(&ctx.mul(&rb, &pi), &ctx.mul(&rc, &pisq)));
            let p = ctx.mul(&rho.neg(), &lnx);
            let factor = ctx.exp(&p);
            term = term.scale(&factor, ctx);
        }
        for (j, pow) in key.logs.iter().enumerate() {
            if *pow != 0 {
                term = term.scale(&ctx.powi(&logs[j], *pow), ctx);
            }
        }
        if !key.freq.is_zero() {
            let pi = ctx.pi();
            let fa = ctx.from_rat(&key.freq.a);
            let fb = ctx.from_rat(&key.freq.b);
            let w = ctx.add(&fa, &ctx.mul(&fb, &pi));
            let phase = ctx.mul(&w, x);
            let osc = Cplx { re: ctx.cos(&phase), im: ctx.sin(&phase) };
            term = term.mul(&osc, ctx);
        }
        acc = acc.add(&term, ctx);
    }
    for (alpha, coeff) in a.null_atoms() {
        let al = ctx.from_rat(alpha);
        let arg = ctx.mul(&al.neg(), x);
        let e = ctx.exp(&arg);
        let term = ctx.eval_scalar(coeff).scale(&e, ctx);
        acc = acc.add(&term, ctx);
    }
    Ok(acc)
}

/// Convenience double-precision evaluation (128-bit internal arithmetic).
pub fn eval_at_f64(a: &Expr, x: f64) -> Result<num_complex::Complex64> {
    let mut ctx = Ctx::new(128);
    let xb = ctx.from_f64(x);
    Ok(eval_at(a, &xb, &mut ctx)?.to_c64())
}
