//! Asymptotic series with strictly increasing exponents and
//! valuation-zero, v-independent coefficients; exact expansion of canonical
//! germs; residual verification and convergence distances.

use crate::error::{Error, Result};
use crate::exponent::ExponentValue;
use crate::expr::Expr;
use crate::valuation::{dist, val, Valuation};
use crate::vspace::{is_v_independent, pseudo_st};

/// Series `sum_n phi_n(x) / x^(r_n)`.
///
/// `terms` may include zero coefficients (placeholders keeping generator
/// indexing); `support` lists the indices with nonzero `phi_n`. The canonical
/// invariants (strict exponent increase, valuation-zero and v-independent
/// coefficients) are required on the support only.
///
/// `diverges_to_infinity` is declared by the generator, not inferred: it
/// asserts that the exponent sequence of the full (possibly truncated)
/// series tends to infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VAsymptoticSeries {
    pub terms: Vec<(ExponentValue, Expr)>,
    pub support: Vec<usize>,
    pub diverges_to_infinity: bool,
}

impl VAsymptoticSeries {
    /// Build a series, computing the support; invariants are validated.
    pub fn new(terms: Vec<(ExponentValue, Expr)>, diverges_to_infinity: bool) -> Result<Self> {
        let support = terms
            .iter()
            .enumerate()
            .filter(|(_, (_, p))| !p.is_zero())
            .map(|(i, _)| i)
            .collect();
        let s = VAsymptoticSeries { terms, support, diverges_to_infinity };
        s.validate()?;
        Ok(s)
    }

    pub fn empty() -> Self {
        VAsymptoticSeries { terms: vec![], support: vec![], diverges_to_infinity: true }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> Vec<&ExponentValue> {
        self.support.iter().map(|&i| &self.terms[i].0).collect()
    }

    pub fn coefficients(&self) -> Vec<&Expr> {
        self.support.iter().map(|&i| &self.terms[i].1).collect()
    }

    /// Check the canonical-form invariants on the support.
    pub fn validate(&self) -> Result<()> {
        for w in self.support.windows(2) {
            let (a, b) = (&self.terms[w[0]].0, &self.terms[w[1]].0);
            if a.cmp_real(b) != std::cmp::Ordering::Less {
                return Err(Error::InvalidSeries(format!(
                    "exponents not strictly increasing: {} then {}",
                    a, b
                )));
            }
        }
        for &i in &self.support {
            let phi = &self.terms[i].1;
            match val(phi) {
                Valuation::Finite(v) if v.is_zero() => {}
                v => {
                    return Err(Error::InvalidSeries(format!(
                        "coefficient {} has valuation {} (must be 0)",
                        i, v
                    )))
                }
            }
        }
        let coeffs: Vec<Expr> = self.support.iter().map(|&i| self.terms[i].1.clone()).collect();
        if !is_v_independent(&coeffs).is_independent() {
            return Err(Error::InvalidSeries(
                "coefficients are not linearly v-independent".into(),
            ));
        }
        Ok(())
    }
}

/// Expand a canonical germ by the valuation recursion: `r_n` is the
/// valuation of the residual, `phi_n` the pseudostandard part of the rescaled
/// residual; on this algebra that equals grouping monomials by ascending
/// decay exponent. A null residual terminates the series.
pub fn expand(f: &Expr, max_terms: usize) -> VAsymptoticSeries {
    let mut residual = f.clone();
    let mut terms = Vec::new();
    while terms.len() < max_terms {
        let Valuation::Finite(r) = val(&residual) else {
            break;
        };
        let rescaled = residual.scale_by_power(&r.neg());
        let phi = pseudo_st(&rescaled)
            .expect("rescaled residual has valuation 0")
            .phi;
        residual = residual.sub(&phi.scale_by_power(&r));
        terms.push((r, phi));
    }
    let exhausted = residual.is_null();
    let support = (0..terms.len()).collect();
    VAsymptoticSeries { terms, support, diverges_to_infinity: exhausted }
}

/// `sum_{k <= n} phi_k / x^(r_k)`, exact.
pub fn partial_sum(s: &VAsymptoticSeries, n: usize) -> Result<Expr> {
    if n >= s.terms.len() {
        return Err(Error::IndexOutOfRange { index: n, len: s.terms.len() });
    }
    let mut acc = Expr::zero();
    for (r, phi) in &s.terms[..=n] {
        acc = acc.add(&phi.scale_by_power(r));
    }
    Ok(acc)
}

/// Residual checks for one term of a claimed expansion.
#[derive(Clone, Debug)]
pub struct VerificationRow {
    pub n: usize,
    pub r: ExponentValue,
    /// `x^(r_n) (f - S_{n-1})` is a v-constant (valuation exactly 0).
    pub constant_ok: bool,
    /// `x^(r_n) (f - S_n)` is v-infinitesimal (valuation > 0 or null).
    pub infinitesimal_ok: bool,
}

/// Report of the three expansion conditions: canonical form of the series
/// itself, plus the two residual-valuation conditions per term.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub series_valid: bool,
    pub series_error: Option<String>,
    pub rows: Vec<VerificationRow>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.series_valid && self.rows.iter().all(|r| r.constant_ok && r.infinitesimal_ok)
    }
}

/// Check that `s` is the asymptotic expansion of `f` term by term.
pub fn verify_expansion(f: &Expr, s: &VAsymptoticSeries) -> VerificationReport {
    let series_error = s.validate().err().map(|e| e.to_string());
    let mut rows = Vec::new();
    let mut prev_sum = Expr::zero();
    for (n, (r, phi)) in s.terms.iter().enumerate() {
        if phi.is_zero() {
            continue;
        }
        let sum = prev_sum.add(&phi.scale_by_power(r));
        let scale = r.neg();
        let constant_ok = matches!(
            val(&f.sub(&prev_sum).scale_by_power(&scale)),
            Valuation::Finite(v) if v.is_zero()
        );
        let infinitesimal_ok =
            val(&f.sub(&sum).scale_by_power(&scale)).sign() == std::cmp::Ordering::Greater;
        rows.push(VerificationRow { n, r: r.clone(), constant_ok, infinitesimal_ok });
        prev_sum = sum;
    }
    VerificationReport { series_valid: series_error.is_none(), series_error, rows }
}

/// Distances `d_v(f, S_n)` for each partial sum.
pub fn dv_convergence(f: &Expr, s: &VAsymptoticSeries) -> Vec<f64> {
    let mut acc = Expr::zero();
    let mut out = Vec::with_capacity(s.terms.len());
    for (r, phi) in &s.terms {
        acc = acc.add(&phi.scale_by_power(r));
        out.push(dist(f, &acc));
    }
    out
}
