//! Randomized structural properties: ring laws, integral domain,
//! parser/printer round trip, and quotient-ring invariants.

mod common;

use rand::rngs::StdRng;
use rand::SeedableRng;
use vasymptotic::{gn_dist, parse_expr, print_expr, quotient, val, Valuation};

#[test]
fn ring_laws() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..300 {
        let a = common::random_expr(&mut rng, false);
        let b = common::random_expr(&mut rng, false);
        let c = common::random_expr(&mut rng, false);
        assert_eq!(a.add(&b), b.add(&a));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.sub(&a), vasymptotic::Expr::zero());
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }
}

#[test]
fn integral_domain_on_monomial_parts() {
    let mut rng = StdRng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 500 {
        let f = common::random_expr(&mut rng, false).strip_null();
        let g = common::random_expr(&mut rng, false).strip_null();
        if f.is_zero() || g.is_zero() {
            continue;
        }
        checked += 1;
        let p = f.mul(&g);
        assert!(!p.strip_null().is_zero(), "zero divisor found");
        // And the valuation is additive on the factors.
        let (Valuation::Finite(vf), Valuation::Finite(vg), Valuation::Finite(vp)) =
            (val(&f), val(&g), val(&p))
        else {
            panic!("non-null factor with infinite valuation");
        };
        assert_eq!(vp, vf.add(&vg));
    }
}

#[test]
fn parse_print_round_trip() {
    let mut rng = StdRng::seed_from_u64(13);
    for i in 0..1000 {
        let e = common::random_expr(&mut rng, false);
        let text = print_expr(&e);
        let back = parse_expr(&text)
            .unwrap_or_else(|err| panic!("iter {i}: reparse of {text:?} failed: {err}"));
        assert_eq!(back, e, "iter {i}: round trip through {text:?}");
    }
}

#[test]
fn quotient_ring_invariants() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..300 {
        let f = common::random_expr(&mut rng, false);
        let g = common::random_expr(&mut rng, false);
        let h = common::random_expr(&mut rng, false);
        // The quotient map is a ring homomorphism.
        assert_eq!(quotient(&f.add(&g)), quotient(&f).add(&quotient(&g)));
        assert_eq!(quotient(&f.mul(&g)), quotient(&f).mul(&quotient(&g)));
        // Ultrametric on classes.
        let (a, b, c) = (quotient(&f), quotient(&g), quotient(&h));
        assert!(gn_dist(&a, &b) <= gn_dist(&a, &c).max(gn_dist(&c, &b)) + 1e-15);
        // Distance is class-level: independent of the representative's null part.
        let noisy = quotient(
            &f.add(&vasymptotic::Expr::null_atom(
                vasymptotic::rat_int(1),
                vasymptotic::Scalar::one(),
            )),
        );
        assert_eq!(gn_dist(&noisy, &b), gn_dist(&a, &b));
    }
}
