//! Generalized numbers: the quotient of the canonical algebra by its null
//! ideal, with the inherited valuation, ultrametric, scale, and expansions.
//!
//! Because canonical representatives carry their null part separately,
//! stripping it yields a canonical class representative and makes equality
//! in the quotient decidable. Black-box sampled inputs only admit a
//! tri-state equality: a difference decaying faster than a cutoff exponent
//! cannot be told apart from a null function numerically.

use crate::error::{Error, Result};
use crate::estimate::{estimate_val, EstimatorConfig, SampledFunction};
use crate::exponent::ExponentValue;
use crate::expr::Expr;
use crate::series::{expand, VAsymptoticSeries};
use crate::valuation::{dist, val, Valuation};

/// An element of the quotient ring: a canonical representative with the
/// null part stripped, so structural equality is class equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedNumber {
    rep: Expr,
}

impl GeneralizedNumber {
    pub fn rep(&self) -> &Expr {
        &self.rep
    }

    pub fn zero() -> Self {
        GeneralizedNumber { rep: Expr::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        quotient(&self.rep.add(&o.rep))
    }

    pub fn sub(&self, o: &Self) -> Self {
        quotient(&self.rep.sub(&o.rep))
    }

    pub fn neg(&self) -> Self {
        quotient(&self.rep.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        quotient(&self.rep.mul(&o.rep))
    }
}

/// The quotient map: strip the null part of the representative. Well
/// defined on classes because the null atoms form an ideal.
pub fn quotient(f: &Expr) -> GeneralizedNumber {
    GeneralizedNumber { rep: f.strip_null() }
}

/// The scale: the class of the identity germ x.
pub fn gn_scale() -> GeneralizedNumber {
    quotient(&Expr::x())
}

/// Valuation inherited from representatives.
pub fn gn_val(a: &GeneralizedNumber) -> Valuation {
    val(&a.rep)
}

/// Ultrametric inherited from representatives; zero exactly on equal
/// classes, because a stripped nonzero representative is never null.
pub fn gn_dist(a: &GeneralizedNumber, b: &GeneralizedNumber) -> f64 {
    dist(&a.rep, &b.rep)
}

/// Real generalized numbers: the representative is conjugation invariant,
/// i.e. every monomial has its partner with negated frequency and
/// conjugated coefficient.
pub fn gn_is_real(a: &GeneralizedNumber) -> bool {
    a.rep.conj() == a.rep
}

/// Expansion of a class along the scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnSeries {
    pub terms: Vec<(ExponentValue, GeneralizedNumber)>,
    pub support: Vec<usize>,
    pub diverges_to_infinity: bool,
}

impl GnSeries {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum_{k <= n} a_k lambda^{-r_k}` back in the quotient.
    pub fn partial_sum(&self, n: usize) -> Result<GeneralizedNumber> {
        if n >= self.terms.len() {
            return Err(Error::IndexOutOfRange { index: n, len: self.terms.len() });
        }
        let mut acc = Expr::zero();
        for (r, a) in &self.terms[..=n] {
            acc = acc.add(&a.rep.scale_by_power(r));
        }
        Ok(quotient(&acc))
    }
}

fn gn_series_from(s: &VAsymptoticSeries) -> GnSeries {
    GnSeries {
        terms: s.terms.iter().map(|(r, phi)| (r.clone(), quotient(phi))).collect(),
        support: s.support.clone(),
        diverges_to_infinity: s.diverges_to_infinity,
    }
}

/// Expansion of the representative, mapped through the quotient term-wise.
pub fn gn_expand(a: &GeneralizedNumber, max_terms: usize) -> GnSeries {
    gn_series_from(&expand(&a.rep, max_terms))
}

/// Tri-state verdict for questions that finite data cannot always settle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Undecidable,
}

/// Declared closed-form tail behaviour of v(c_n - limit) for all n beyond
/// the supplied prefix.
#[derive(Clone, Copy, Debug)]
pub enum TailRule {
    /// v(c_n - limit) = offset + slope * n.
    Affine { offset: f64, slope: f64 },
    /// c_n = limit from some index on.
    EventuallyEqual,
}

/// Convergence of a sequence to a limit in the quotient ultrametric:
/// true exactly when the valuations of the differences diverge to
/// infinity. A finite prefix alone never certifies the tail, so a
/// declared rule is required unless every given difference is already
/// exactly the limit.
pub fn gn_converges(
    prefix: &[GeneralizedNumber],
    limit: &GeneralizedNumber,
    tail: Option<&TailRule>,
) -> Verdict {
    let diffs_null = prefix.iter().all(|c| c == limit);
    let Some(rule) = tail else {
        return if diffs_null { Verdict::True } else { Verdict::Undecidable };
    };
    let converges = match rule {
        TailRule::EventuallyEqual => true,
        TailRule::Affine { slope, .. } => *slope > 0.0,
    };
    if !converges {
        return Verdict::False;
    }
    // When the limit is nonzero, convergence forces the valuations of the
    // terms themselves to lock onto v(limit) eventually; reject prefixes
    // whose final entries contradict that.
    if !limit.is_zero() {
        if let Some(last) = prefix.last() {
            if last != limit && gn_val(last).cmp_real(&gn_val(limit)) != std::cmp::Ordering::Equal
            {
                return Verdict::False;
            }
        }
    }
    Verdict::True
}

/// Tri-state equality verdict for sampled inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GnEq {
    Equal,
    NotEqual,
    Unknown,
}

/// Tri-state class equality for sampled black-box inputs. `Equal` only
/// when the sampled difference vanishes identically; `Unknown` when the
/// difference decays faster than `x^-cutoff` (indistinguishable from a
/// null function at the sampled resolution); `NotEqual` otherwise.
pub fn gn_eq_sampled(
    f: &SampledFunction,
    g: &SampledFunction,
    cutoff: f64,
    cfg: &EstimatorConfig,
) -> Result<GnEq> {
    if f.samples.len() != g.samples.len()
        || f.samples
            .iter()
            .zip(&g.samples)
            .any(|((xa, _), (xb, _))| xa != xb)
    {
        return Err(Error::BadSamples("grids must coincide".into()));
    }
    let diff: Vec<_> = f
        .samples
        .iter()
        .zip(&g.samples)
        .map(|(&(x, a), &(_, b))| (x, a - b))
        .collect();
    let diff = SampledFunction::new(diff, "difference")?;
    match estimate_val(&diff, cfg) {
        Ok(est) => Ok(if est.vhat > cutoff { GnEq::Unknown } else { GnEq::NotEqual }),
        Err(Error::AllSamplesZero) => Ok(GnEq::Equal),
        Err(e) => Err(e),
    }
}

/// Default cutoff exponent for sampled equality.
pub const GN_EQ_CUTOFF: f64 = 12.0;
