//! Exact and numeric asymptotic analysis of moderate-growth germs at
//! infinity.
//!
//! The library models germs built from power, iterated-logarithm and
//! oscillatory atoms, equips them with a pseudovaluation and the induced
//! ultrametric, decides linear independence of bounded coefficient families,
//! computes asymptotic expansions with exact coefficients, and verifies the
//! expansion of an oscillatory model integral with high-precision quadrature.
//! A quotient layer exposes the same operations on generalized numbers.

pub mod bigfloat;
pub mod colombeau;
pub mod error;
pub mod estimate;
pub mod eval;
pub mod exponent;
pub mod expr;
pub mod numeric_expand;
pub mod parse;
pub mod printer;
pub mod quad;
pub mod rmt;
pub mod scalar;
pub mod serialize;
pub mod series;
pub mod valuation;
pub mod vspace;

pub use bigfloat::{bf_to_f64, Cplx, Ctx};
pub use colombeau::{
    gn_converges, gn_dist, gn_eq_sampled, gn_expand, gn_is_real, gn_scale, gn_val, quotient,
    GeneralizedNumber, GnSeries, GnEq, TailRule, Verdict, GN_EQ_CUTOFF,
};
pub use error::{Error, Result};
pub use estimate::{
    estimate_val, EnvelopeMode, EstimatorConfig, LogFit, SampledFunction, ValEstimate,
};
pub use eval::{eval_at, eval_at_f64};
pub use exponent::{ExponentValue, Frequency};
pub use expr::{Expr, MonKey};
pub use scalar::{rat, rat_int, PiPoly, Rat, Scalar};
pub use numeric_expand::{numeric_expand, ExpandConfig, ExpandDiagnostics, Lattice};
pub use parse::parse_expr;
pub use printer::print_expr;
pub use quad::{integrate, QuadResult, Scheme};
pub use rmt::{
    rmt_coefficient, rmt_coefficient_formula, rmt_integral_eval, rmt_integral_eval_scheme,
    rmt_integral_table, rmt_series, rmt_verify, rmt_verify_table, BoundaryData, IntegralTable,
    RmtReport, RmtRow,
};
pub use serialize::{ExponentDoc, MonomialDoc, SeriesDocument};
pub use series::{
    dv_convergence, expand, partial_sum, verify_expansion, VAsymptoticSeries, VerificationReport,
    VerificationRow,
};
pub use valuation::{classify, dist, val, GermClass, Valuation};
pub use vspace::{
    in_monad, in_monad_span, is_v_independent, pseudo_st, BasisSpan, Decomposition, Independence,
};
