//! Linear v-independence, pseudostandard part and monad membership.
//!
//! The decision procedures reduce to exact linear algebra. Monomial
//! coefficients are Laurent polynomials in pi over the complex rationals, so
//! the natural scalar field for elimination is the field of complex rational
//! functions in pi: fractions of dense polynomials with complex-rational
//! coefficients, reduced with the Euclidean algorithm. Solvability over the
//! complex numbers of a system whose entries lie in this subfield is
//! equivalent to solvability within the subfield, so verdicts are sound.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{Expr, MonKey};
use crate::scalar::{PiPoly, Rat, Scalar};
use crate::valuation::{val, Valuation};

/// Complex rational: `re + i im` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Debug)]
struct C {
    re: Rat,
    im: Rat,
}

impl C {
    fn zero() -> Self {
        C { re: Rat::zero(), im: Rat::zero() }
    }
    fn one() -> Self {
        C { re: Rat::one(), im: Rat::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &C) -> C {
        C { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &C) -> C {
        C { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn neg(&self) -> C {
        C { re: -&self.re, im: -&self.im }
    }
    fn mul(&self, o: &C) -> C {
        C {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn inv(&self) -> C {
        let n = &self.re * &self.re + &self.im * &self.im;
        C { re: &self.re / &n, im: -&self.im / &n }
    }
}

/// Dense polynomial in pi with complex-rational coefficients, trailing zeros
/// trimmed; the empty vector is the zero polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
struct CPoly(Vec<C>);

impl CPoly {
    fn zero() -> Self {
        CPoly(vec![])
    }
    fn one() -> Self {
        CPoly(vec![C::one()])
    }
    fn from_coeffs(mut v: Vec<C>) -> Self {
        while v.last().map_or(false, C::is_zero) {
            v.pop();
        }
        CPoly(v)
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
    fn add(&self, o: &CPoly) -> CPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_else(C::zero);
            let b = o.0.get(k).cloned().unwrap_or_else(C::zero);
            v.push(a.add(&b));
        }
        CPoly::from_coeffs(v)
    }
    fn neg(&self) -> CPoly {
        CPoly(self.0.iter().map(C::neg).collect())
    }
    fn sub(&self, o: &CPoly) -> CPoly {
        self.add(&o.neg())
    }
    fn mul(&self, o: &CPoly) -> CPoly {
        if self.is_zero() || o.is_zero() {
            return CPoly::zero();
        }
        let mut v = vec![C::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        CPoly::from_coeffs(v)
    }
    fn scale(&self, c: &C) -> CPoly {
        CPoly::from_coeffs(self.0.iter().map(|a| a.mul(c)).collect())
    }
    /// Division with remainder; divisor must be nonzero.
    fn divrem(&self, d: &CPoly) -> (CPoly, CPoly) {
        assert!(!d.is_zero());
        let mut rem = self.clone();
        let mut quo = vec![C::zero(); self.0.len().saturating_sub(d.0.len()) + 1];
        let lead_inv = d.0.last().unwrap().inv();
        while !rem.is_zero() && rem.degree() >= d.degree() && rem.0.len() >= d.0.len() {
            let shift = rem.0.len() - d.0.len();
            let factor = rem.0.last().unwrap().mul(&lead_inv);
            quo[shift] = quo[shift].add(&factor);
            let mut v = rem.0.clone();
            for (j, b) in d.0.iter().enumerate() {
                v[shift + j] = v[shift + j].sub(&factor.mul(b));
            }
            // The leading term cancels exactly.
            v.pop();
            rem = CPoly::from_coeffs(v);
        }
        (CPoly::from_coeffs(quo), rem)
    }
    fn monic(&self) -> CPoly {
        if self.is_zero() {
            return CPoly::zero();
        }
        self.scale(&self.0.last().unwrap().inv())
    }
    fn gcd(a: &CPoly, b: &CPoly) -> CPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.divrem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }
}

/// Rational function in pi over the complex rationals; denominator monic and
/// coprime to the numerator.
#[derive(Clone, PartialEq, Eq, Debug)]
struct RatFn {
    num: CPoly,
    den: CPoly,
}

impl RatFn {
    fn zero() -> Self {
        RatFn { num: CPoly::zero(), den: CPoly::one() }
    }
    fn from_poly(p: CPoly) -> Self {
        RatFn { num: p, den: CPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn reduce(num: CPoly, den: CPoly) -> RatFn {
        assert!(!den.is_zero());
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = CPoly::gcd(&num, &den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let lead_inv = d.0.last().unwrap().inv();
        RatFn { num: n.scale(&lead_inv), den: d.monic() }
    }
    fn add(&self, o: &RatFn) -> RatFn {
        RatFn::reduce(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn sub(&self, o: &RatFn) -> RatFn {
        RatFn::reduce(
            self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn inv(&self) -> RatFn {
        assert!(!self.is_zero());
        RatFn::reduce(self.den.clone(), self.num.clone())
    }
}

/// Embed a coefficient (Laurent in pi) into the rational-function field.
fn scalar_to_ratfn(s: &Scalar) -> RatFn {
    let min_pow = s
        .re
        .terms()
        .map(|(k, _)| k)
        .chain(s.im.terms().map(|(k, _)| k))
        .min()
        .unwrap_or(0)
        .min(0);
    let max_pow = s
        .re
        .terms()
        .map(|(k, _)| k)
        .chain(s.im.terms().map(|(k, _)| k))
        .max()
        .unwrap_or(0);
    let mut v = vec![C::zero(); (max_pow - min_pow + 1) as usize];
    for (k, r) in s.re.terms() {
        v[(k - min_pow) as usize].re = r.clone();
    }
    for (k, r) in s.im.terms() {
        v[(k - min_pow) as usize].im = r.clone();
    }
    let num = CPoly::from_coeffs(v);
    if min_pow < 0 {
        let mut den = vec![C::zero(); (-min_pow + 1) as usize];
        *den.last_mut().unwrap() = C::one();
        RatFn::reduce(num, CPoly::from_coeffs(den))
    } else {
        RatFn::from_poly(num)
    }
}

/// Convert a polynomial in pi back to an exact coefficient.
fn cpoly_to_scalar(p: &CPoly) -> Scalar {
    let mut re = PiPoly::zero();
    let mut im = PiPoly::zero();
    for (k, c) in p.0.iter().enumerate() {
        re = re.add(&PiPoly::pi_pow(c.re.clone(), k as i64));
        im = im.add(&PiPoly::pi_pow(c.im.clone(), k as i64));
    }
    Scalar::from_parts(re, im)
}

/// Reduced row echelon form in place; returns pivot column per pivot row.
fn rref(mat: &mut Vec<Vec<RatFn>>) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = mat[r][c].inv();
        for j in c..cols {
            mat[r][j] = mat[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in c..cols {
                    let t = mat[r][j].mul(&f);
                    mat[i][j] = mat[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the null space of the matrix (columns = unknowns).
fn kernel_basis(mut mat: Vec<Vec<RatFn>>, cols: usize) -> Vec<Vec<RatFn>> {
    if mat.is_empty() {
        // No constraints: the whole space.
        return (0..cols)
            .map(|i| {
                let mut v = vec![RatFn::zero(); cols];
                v[i] = RatFn::from_poly(CPoly::one());
                v
            })
            .collect();
    }
    let pivots = rref(&mut mat);
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![RatFn::zero(); cols];
        v[free] = RatFn::from_poly(CPoly::one());
        for (row, &pc) in pivots.iter().enumerate() {
            if !mat[row][free].is_zero() {
                v[pc] = RatFn::zero().sub(&mat[row][free]);
            }
        }
        basis.push(v);
    }
    basis
}

/// Row identifier for the coefficient matrices: a monomial key or a
/// null-atom decay rate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum RowKey {
    Monomial(MonKey),
    NullAtom(Rat),
}

/// Outcome of the v-independence decision.
#[derive(Clone, Debug)]
pub enum Independence {
    Independent,
    /// A nonzero combination `sum alpha_i f_i` whose valuation is not zero.
    Dependent { witness: Vec<Scalar>, combination_val: Valuation },
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent)
    }
}

/// Decide linear v-independence: every nonzero complex combination of the
/// family must have valuation exactly zero. Zero members are ignored.
pub fn is_v_independent(fs: &[Expr]) -> Independence {
    // A member with negative valuation already violates the definition.
    for (i, f) in fs.iter().enumerate() {
        if !f.is_zero() {
            if let Valuation::Finite(v) = val(f) {
                if v.sign_real() == std::cmp::Ordering::Less {
                    let mut witness = vec![Scalar::zero(); fs.len()];
                    witness[i] = Scalar::one();
                    return Independence::Dependent {
                        witness,
                        combination_val: val(f),
                    };
                }
            }
        }
    }

    let mut rows: BTreeSet<RowKey> = BTreeSet::new();
    for f in fs {
        for (k, _) in f.monomials() {
            rows.insert(RowKey::Monomial(k.clone()));
        }
        for (a, _) in f.null_atoms() {
            rows.insert(RowKey::NullAtom(a.clone()));
        }
    }
    let rows: Vec<RowKey> = rows.into_iter().collect();

    let entry = |rk: &RowKey, f: &Expr| -> RatFn {
        match rk {
            RowKey::Monomial(k) => scalar_to_ratfn(&f.coeff_of(k)),
            RowKey::NullAtom(a) => f
                .null_atoms()
                .find(|&(alpha, _)| alpha == a)
                .map(|(_, c)| scalar_to_ratfn(c))
                .unwrap_or_else(RatFn::zero),
        }
    };

    // Rows of the bounded-part matrix: monomial keys at decay exponent zero.
    let m0: Vec<Vec<RatFn>> = rows
        .iter()
        .filter(|rk| matches!(rk, RowKey::Monomial(k) if k.rho.is_zero()))
        .map(|rk| fs.iter().map(|f| entry(rk, f)).collect())
        .collect();

    // Kernel vectors of M0 are combinations that cancel the entire
    // valuation-zero layer; independence demands they cancel everything.
    for kv in kernel_basis(m0, fs.len()) {
        let in_full_kernel = rows.iter().all(|rk| {
            let mut acc = RatFn::zero();
            for (f, a) in fs.iter().zip(&kv) {
                if !a.is_zero() {
                    acc = acc.add(&entry(rk, f).mul(a));
                }
            }
            acc.is_zero()
        });
        if !in_full_kernel {
            // Clear denominators so the witness lives in the coefficient ring.
            let mut common = CPoly::one();
            for a in &kv {
                common = common.mul(&a.den);
            }
            let witness: Vec<Scalar> = kv
                .iter()
                .map(|a| {
                    let (q, _) = common.divrem(&a.den);
                    cpoly_to_scalar(&a.num.mul(&q))
                })
                .collect();
            let mut combo = Expr::zero();
            for (f, w) in fs.iter().zip(&witness) {
                combo = combo.add(&f.scale(w));
            }
            return Independence::Dependent { witness, combination_val: val(&combo) };
        }
    }
    Independence::Independent
}

/// An explicit finite family of valuation-zero germs standing in for a
/// maximal coefficient space; always contains the constant 1.
#[derive(Clone, Debug)]
pub struct BasisSpan {
    basis: Vec<Expr>,
}

impl BasisSpan {
    pub fn new(mut basis: Vec<Expr>) -> Result<Self> {
        for b in &basis {
            match val(b) {
                Valuation::Finite(v) if v.is_zero() => {}
                v => {
                    return Err(Error::InvalidBasis(format!(
                        "basis element has valuation {} (must be 0)",
                        v
                    )))
                }
            }
        }
        if !basis.iter().any(|b| *b == Expr::one()) {
            basis.insert(0, Expr::one());
        }
        if !is_v_independent(&basis).is_independent() {
            return Err(Error::InvalidBasis("basis is not linearly v-independent".into()));
        }
        Ok(BasisSpan { basis })
    }

    pub fn elements(&self) -> &[Expr] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Splitting of a v-finite germ into its valuation-zero layer and an
/// infinitesimal (plus null) remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub phi: Expr,
    pub dphi: Expr,
}

/// Pseudostandard part: project a v-finite germ onto its decay-exponent-zero
/// monomials. Errors with `NotVFinite` on negative valuation.
pub fn pseudo_st(f: &Expr) -> Result<Decomposition> {
    if let Valuation::Finite(v) = val(f) {
        if v.sign_real() == std::cmp::Ordering::Less {
            return Err(Error::NotVFinite { valuation: v.to_string() });
        }
    }
    let mut phi = Expr::zero();
    for (k, c) in f.monomials() {
        if k.rho.is_zero() {
            phi = phi.add(&Expr::from_monomial(k.clone(), c.clone()));
        }
    }
    let dphi = f.sub(&phi);
    Ok(Decomposition { phi, dphi })
}

/// Membership in the v-monad of a span: `f = s + d` with `s` in the span and
/// `d` v-infinitesimal or null.
pub fn in_monad_span(f: &Expr, span: &BasisSpan) -> bool {
    let Ok(dec) = pseudo_st(f) else {
        return false;
    };
    // Solve phi = sum c_i * st(b_i) over the rho=0 monomial layer. Any
    // infinitesimal tail of a basis element is absorbed into d.
    let sts: Vec<Expr> = span
        .basis
        .iter()
        .map(|b| pseudo_st(b).expect("basis elements are v-finite").phi)
        .collect();
    let mut keys: BTreeSet<MonKey> = BTreeSet::new();
    for e in sts.iter().chain(std::iter::once(&dec.phi)) {
        for (k, _) in e.monomials() {
            keys.insert(k.clone());
        }
    }
    // Augmented system [B | phi]; consistent iff no pivot lands in the last
    // column after elimination.
    let mut mat: Vec<Vec<RatFn>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<RatFn> =
                sts.iter().map(|b| scalar_to_ratfn(&b.coeff_of(k))).collect();
            row.push(scalar_to_ratfn(&dec.phi.coeff_of(k)));
            row
        })
        .collect();
    let pivots = rref(&mut mat);
    pivots.last().map_or(true, |&c| c < span.len())
}

/// Membership in the v-monad of a single germ: `val(f - g)` strictly
/// positive or infinite.
pub fn in_monad(f: &Expr, g: &Expr) -> bool {
    val(&f.sub(g)).sign() == std::cmp::Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{ExponentValue, Frequency};
    use crate::scalar::{rat, rat_int};

    fn sin1() -> Expr {
        Expr::sin(Frequency::from_rat(rat_int(1)))
    }
    fn cos1() -> Expr {
        Expr::cos(Frequency::from_rat(rat_int(1)))
    }
    fn inv_x() -> Expr {
        Expr::x_pow_neg(ExponentValue::from_int(1))
    }

    #[test]
    fn oscillators_independent() {
        assert!(is_v_independent(&[sin1(), cos1()]).is_independent());
        assert!(is_v_independent(&[Expr::zero(), sin1(), cos1()]).is_independent());
    }

    #[test]
    fn shifted_constant_dependent_with_witness() {
        let fs = [Expr::one(), Expr::one().neg().add(&inv_x())];
        match is_v_independent(&fs) {
            Independence::Dependent { witness, combination_val } => {
                assert_eq!(
                    combination_val,
                    Valuation::Finite(ExponentValue::from_int(1))
                );
                // The witness must reproduce a combination equal (up to
                // scale) to 1/x.
                let mut combo = Expr::zero();
                for (f, w) in fs.iter().zip(&witness) {
                    combo = combo.add(&f.scale(w));
                }
                assert!(!combo.is_zero());
                assert_eq!(val(&combo), Valuation::Finite(ExponentValue::from_int(1)));
            }
            Independence::Independent => panic!("should be dependent"),
        }
    }

    #[test]
    fn proportional_logs_independent() {
        let l = Expr::iterated_log(1);
        let fs = [l.clone(), l.scale(&Scalar::from_int(2))];
        assert!(is_v_independent(&fs).is_independent());
    }

    #[test]
    fn iterated_log_family_independent() {
        let fs = [
            Expr::one(),
            Expr::iterated_log(1),
            Expr::iterated_log(2),
            Expr::iterated_log(3),
        ];
        assert!(is_v_independent(&fs).is_independent());
    }

    #[test]
    fn log_powers_independent() {
        let l = Expr::iterated_log(1);
        let mut fs = vec![Expr::one()];
        let mut cur = l.clone();
        for _ in 0..5 {
            fs.push(cur.clone());
            cur = cur.mul(&l);
        }
        assert!(is_v_independent(&fs).is_independent());
    }

    #[test]
    fn oscillating_log_family_independent() {
        // e^{+-i pi x} ln^n x for n <= 3, together with the other families.
        let l = Expr::iterated_log(1);
        let mut fs = vec![];
        for sign in [1i64, -1] {
            let osc = Expr::oscillator(Frequency::pi_multiple(rat_int(sign)));
            let mut cur = osc.clone();
            for _ in 0..=3 {
                fs.push(cur.clone());
                cur = cur.mul(&l);
            }
        }
        assert!(is_v_independent(&fs).is_independent());

        // Union with trig pair, iterated logs and log powers.
        fs.extend([sin1(), cos1(), Expr::iterated_log(2), Expr::iterated_log(3)]);
        fs.push(l.mul(&l));
        assert!(is_v_independent(&fs).is_independent());
    }

    #[test]
    fn negative_valuation_rejected() {
        match is_v_independent(&[Expr::x()]) {
            Independence::Dependent { combination_val, .. } => {
                assert_eq!(combination_val, Valuation::Finite(ExponentValue::from_int(-1)));
            }
            _ => panic!("x must be rejected"),
        }
    }

    #[test]
    fn pseudo_st_examples() {
        let three = Expr::constant(Scalar::from_int(3));
        let d = pseudo_st(&three.add(&inv_x())).unwrap();
        assert_eq!(d.phi, three);
        assert_eq!(d.dphi, inv_x());

        let f = sin1().add(&Expr::x_pow_neg(ExponentValue::from_int(2)));
        assert_eq!(pseudo_st(&f).unwrap().phi, sin1());

        let l = Expr::iterated_log(1);
        let g = l.add(&Expr::null_atom(rat_int(1), Scalar::one()));
        let dg = pseudo_st(&g).unwrap();
        assert_eq!(dg.phi, l);
        assert_eq!(dg.dphi, Expr::null_atom(rat_int(1), Scalar::one()));

        assert!(matches!(
            pseudo_st(&Expr::x().add(&Expr::one())),
            Err(Error::NotVFinite { .. })
        ));
    }

    #[test]
    fn monad_membership() {
        assert!(in_monad(&sin1().add(&inv_x()), &sin1()));
        assert!(!in_monad(&sin1(), &cos1()));

        let span = BasisSpan::new(vec![sin1(), cos1()]).unwrap();
        assert!(in_monad_span(&sin1().add(&inv_x()), &span));
        assert!(!in_monad_span(&Expr::iterated_log(1), &span));
        assert!(!in_monad_span(&Expr::x(), &span));
        // Constants are always in the span.
        assert!(in_monad_span(&Expr::constant(Scalar::from_rat(rat(7, 2))), &span));
    }

    #[test]
    fn basis_span_validation() {
        assert!(BasisSpan::new(vec![Expr::x()]).is_err());
        assert!(BasisSpan::new(vec![Expr::one(), Expr::one().neg().add(&inv_x())]).is_err());
        let s = BasisSpan::new(vec![sin1()]).unwrap();
        assert_eq!(s.len(), 2); // constant 1 inserted
    }
}
