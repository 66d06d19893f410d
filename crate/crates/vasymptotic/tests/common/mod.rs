//! Shared deterministic random-germ generators for the integration suites.

use rand::rngs::StdRng;
use rand::Rng;
use vasymptotic::{
    rat, rat_int, Expr, ExponentValue, Frequency, MonKey, PiPoly, Rat, Scalar,
};

pub fn random_rat(rng: &mut StdRng) -> Rat {
    rat(rng.gen_range(-3..=3), [1, 2, 4][rng.gen_range(0..3)])
}

pub fn random_pipoly(rng: &mut StdRng) -> PiPoly {
    let mut p = PiPoly::zero();
    for k in -1..=1 {
        if rng.gen_bool(0.4) {
            p = p.add(&PiPoly::pi_pow(random_rat(rng), k));
        }
    }
    p
}

pub fn random_nonzero_scalar(rng: &mut StdRng) -> Scalar {
    loop {
        let s = Scalar::from_parts(random_pipoly(rng), random_pipoly(rng));
        if !s.is_zero() {
            return s;
        }
    }
}

/// Random decay exponent `a + b pi + c pi^2`; non-negative real value when
/// `nonneg` is set (coefficients all >= 0 suffice on this generator).
pub fn random_exponent(rng: &mut StdRng, nonneg: bool) -> ExponentValue {
    let pick = |rng: &mut StdRng, lo: i64| rat(rng.gen_range(lo..=2), 2);
    let lo = if nonneg { 0 } else { -2 };
    let mut b = rat_int(0);
    let mut c = rat_int(0);
    if rng.gen_bool(0.2) {
        b = pick(rng, lo);
    }
    if rng.gen_bool(0.2) {
        c = pick(rng, lo);
    }
    ExponentValue::new(pick(rng, lo), b, c)
}

pub fn random_key(rng: &mut StdRng, nonneg: bool) -> MonKey {
    let rho = random_exponent(rng, nonneg);
    let depth = rng.gen_range(0..=2);
    let logs: Vec<i64> = (0..depth).map(|_| rng.gen_range(-2..=2)).collect();
    let freq = match rng.gen_range(0..4) {
        0 => Frequency::zero(),
        1 => Frequency::from_rat(rat_int(rng.gen_range(-2..=2))),
        2 => Frequency::pi_multiple(rat_int(rng.gen_range(-2..=2))),
        _ => Frequency::new(rat_int(rng.gen_range(-1..=1)), rat_int(rng.gen_range(-1..=1))),
    };
    MonKey::new(rho, logs, freq)
}

/// Random canonical germ: up to four monomials, occasionally a null atom.
pub fn random_expr(rng: &mut StdRng, nonneg: bool) -> Expr {
    let mut e = Expr::zero();
    for _ in 0..rng.gen_range(1..=4) {
        e = e.add(&Expr::from_monomial(
            random_key(rng, nonneg),
            random_nonzero_scalar(rng),
        ));
    }
    if rng.gen_bool(0.3) {
        let alpha = rat(rng.gen_range(1..=4), 2);
        e = e.add(&Expr::null_atom(alpha, random_nonzero_scalar(rng)));
    }
    e
}
