//! Arbitrary-precision composite quadrature with adaptive node doubling.
//!
//! Two independent rules share the same panel layout: composite
//! Gauss-Legendre (the workhorse) and composite Clenshaw-Curtis (a cross
//! check). Node tables are computed once per (count, precision) pair and
//! cached.

use std::collections::HashMap;
use std::sync::Mutex;

use astro_float::BigFloat;
use once_cell::sync::Lazy;

use crate::bigfloat::{Cplx, Ctx};
use crate::error::{Error, Result};

/// Quadrature rule used on each panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    GaussLegendre,
    ClenshawCurtis,
}

/// Converged composite integral together with the node count per panel at
/// which two successive refinements agreed.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Cplx,
    pub nodes_per_panel: usize,
}

type NodeTable = Vec<(BigFloat, BigFloat)>;

static NODE_CACHE: Lazy<Mutex<HashMap<(Scheme, usize, usize), NodeTable>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Legendre polynomial value and derivative at `x` by the three-term
/// recurrence; the derivative uses (x^2 - 1) P_n' = n (x P_n - P_{n-1}),
/// valid away from the endpoints where all nodes lie.
fn legendre(n: usize, x: &BigFloat, ctx: &Ctx) -> (BigFloat, BigFloat) {
    let mut p0 = ctx.from_i64(1);
    let mut p1 = x.clone();
    for k in 1..n {
        let a = ctx.mul(&ctx.from_i64(2 * k as i64 + 1), &ctx.mul(x, &p1));
        let b = ctx.mul(&ctx.from_i64(k as i64), &p0);
        let next = ctx.div(&ctx.sub(&a, &b), &ctx.from_i64(k as i64 + 1));
        p0 = p1;
        p1 = next;
    }
    let num = ctx.mul(&ctx.from_i64(n as i64), &ctx.sub(&ctx.mul(x, &p1), &p0));
    let den = ctx.sub(&ctx.mul(x, x), &ctx.from_i64(1));
    (p1, ctx.div(&num, &den))
}

/// Gauss-Legendre nodes and weights on [-1, 1]: Newton refinement of the
/// classical cosine seeds, weights 2 / ((1 - x^2) P_n'(x)^2).
fn gauss_legendre_table(n: usize, ctx: &mut Ctx) -> NodeTable {
    let mut out = Vec::with_capacity(n);
    let one = ctx.from_i64(1);
    // Doubling the significand per Newton step from an f64 seed.
    let steps = 4 + (ctx.p as f64 / 50.0).log2().max(0.0).ceil() as usize;
    for k in 0..n {
        let seed =
            (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = ctx.from_f64(seed);
        for _ in 0..steps {
            let (p, dp) = legendre(n, &x, ctx);
            x = ctx.sub(&x, &ctx.div(&p, &dp));
        }
        let (_, dp) = legendre(n, &x, ctx);
        let den = ctx.mul(&ctx.sub(&one, &ctx.mul(&x, &x)), &ctx.mul(&dp, &dp));
        let w = ctx.div(&ctx.from_i64(2), &den);
        out.push((x, w));
    }
    out
}

/// Clenshaw-Curtis nodes cos(j pi / n) and the closed-form cosine-sum
/// weights, for even `n` (n + 1 nodes including the endpoints).
fn clenshaw_curtis_table(n: usize, ctx: &mut Ctx) -> NodeTable {
    assert!(n >= 2 && n % 2 == 0);
    let pi = ctx.pi();
    let nf = ctx.from_i64(n as i64);
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let theta = ctx.div(&ctx.mul(&pi, &ctx.from_i64(j as i64)), &nf);
        let x = ctx.cos(&theta);
        let mut s = ctx.from_i64(1);
        for k in 1..=n / 2 {
            let b = ctx.from_i64(if k == n / 2 { 1 } else { 2 });
            let ang = ctx.mul(&ctx.from_i64(2 * k as i64), &theta);
            let c = ctx.cos(&ang);
            let t = ctx.div(&ctx.mul(&b, &c), &ctx.from_i64(4 * (k as i64) * (k as i64) - 1));
            s = ctx.sub(&s, &t);
        }
        let cj = if j == 0 || j == n { 1 } else { 2 };
        let w = ctx.div(&ctx.mul(&ctx.from_i64(cj), &s), &nf);
        out.push((x, w));
    }
    out
}

fn node_table(scheme: Scheme, n: usize, ctx: &mut Ctx) -> NodeTable {
    let key = (scheme, n, ctx.p);
    if let Some(t) = NODE_CACHE.lock().unwrap().get(&key) {
        return t.clone();
    }
    let t = match scheme {
        Scheme::GaussLegendre => gauss_legendre_table(n, ctx),
        Scheme::ClenshawCurtis => clenshaw_curtis_table(n, ctx),
    };
    NODE_CACHE.lock().unwrap().insert(key, t.clone());
    t
}

/// One pass of the composite rule with `nodes` points per panel.
fn composite_pass<F>(
    f: &mut F,
    a: &BigFloat,
    b: &BigFloat,
    panels: usize,
    nodes: usize,
    scheme: Scheme,
    ctx: &mut Ctx,
) -> Result<Cplx>
where
    F: FnMut(&BigFloat, &mut Ctx) -> Result<Cplx>,
{
    let table = node_table(scheme, nodes, ctx);
    let width = ctx.div(&ctx.sub(b, a), &ctx.from_i64(panels as i64));
    let half = ctx.div(&width, &ctx.from_i64(2));
    let mut total = Cplx::zero(ctx);
    for p in 0..panels {
        let left = ctx.add(a, &ctx.mul(&width, &ctx.from_i64(p as i64)));
        let mid = ctx.add(&left, &half);
        let mut panel_sum = Cplx::zero(ctx);
        for (t, w) in &table {
            let x = ctx.add(&mid, &ctx.mul(&half, t));
            let v = f(&x, ctx)?;
            panel_sum = panel_sum.add(&v.scale(w, ctx), ctx);
        }
        total = total.add(&panel_sum.scale(&half, ctx), ctx);
    }
    Ok(total)
}

fn abs_le(x: &BigFloat, bound: &BigFloat, ctx: &Ctx) -> bool {
    let a = x.abs();
    !ctx.sub(&a, bound).is_positive()
}

/// Composite quadrature of `f` over [a, b] with a fixed panel count,
/// doubling the per-panel node count (4, 8, ..., 128) until two successive
/// refinements agree to the absolute tolerance `tol`.
pub fn integrate<F>(
    mut f: F,
    a: &BigFloat,
    b: &BigFloat,
    panels: usize,
    tol: &BigFloat,
    scheme: Scheme,
    ctx: &mut Ctx,
) -> Result<QuadResult>
where
    F: FnMut(&BigFloat, &mut Ctx) -> Result<Cplx>,
{
    let mut prev = composite_pass(&mut f, a, b, panels, 4, scheme, ctx)?;
    let mut nodes = 8;
    loop {
        let cur = composite_pass(&mut f, a, b, panels, nodes, scheme, ctx)?;
        let diff = cur.sub(&prev, ctx).abs(ctx);
        if abs_le(&diff, tol, ctx) {
            return Ok(QuadResult { value: cur, nodes_per_panel: nodes });
        }
        if nodes >= 128 {
            return Err(Error::NonConvergent { nodes });
        }
        prev = cur;
        nodes *= 2;
    }
}
