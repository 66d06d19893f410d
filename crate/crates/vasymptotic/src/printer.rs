//! Deterministic text form of canonical germs; `parse_expr` inverts it.
//!
//! Terms are ordered by exponent (real order), then log powers, then
//! frequency; null atoms follow, ordered by decay rate.

use num_traits::{One, Signed, Zero};

use crate::expr::Expr;
use crate::exponent::{ExponentValue, Frequency};
use crate::scalar::{PiPoly, Rat, Scalar};

fn rat_str(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `c * pi^k` with positive `c`, as a factor string.
fn pi_term_str(k: i64, c: &Rat) -> String {
    match k {
        0 => rat_str(c),
        1 => format!("{}*pi", rat_str(c)),
        _ => format!("{}*pi^{}", rat_str(c), k),
    }
}

/// Sum string for a polynomial in pi, with the sign of the first term kept.
fn pipoly_str(p: &PiPoly) -> String {
    let mut out = String::new();
    for (k, c) in p.terms() {
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&pi_term_str(k, &c.abs()));
    }
    out
}

/// A scalar as (sign, factor-string); `None` body means the factor is 1.
fn scalar_str(s: &Scalar) -> (bool, Option<String>) {
    let re_terms = s.re.terms().count();
    let im_terms = s.im.terms().count();
    if im_terms == 0 {
        if let Some((k, c)) = s.re.as_monomial() {
            if k == 0 && c.abs().is_one() {
                return (c.is_negative(), None);
            }
            return (c.is_negative(), Some(pi_term_str(k, &c.abs())));
        }
    }
    if re_terms == 0 {
        if let Some((k, c)) = s.im.as_monomial() {
            return (c.is_negative(), Some(format!("{}*i", pi_term_str(k, &c.abs()))));
        }
    }
    // General case: parenthesized re + im*i sum.
    let mut out = String::from("(");
    let re = pipoly_str(&s.re);
    out.push_str(&re);
    if im_terms > 0 {
        let im_str = if let Some((k, c)) = s.im.as_monomial() {
            let body = format!("{}*i", pi_term_str(k, &c.abs()));
            if c.is_negative() {
                format!("-{body}")
            } else {
                body
            }
        } else {
            format!("({})*i", pipoly_str(&s.im))
        };
        if re.is_empty() {
            out.push_str(&im_str);
        } else if let Some(rest) = im_str.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&im_str);
        }
    }
    out.push(')');
    (false, Some(out))
}

/// `x^(...)` exponent body for `r = -rho`, always parenthesized.
fn exponent_str(r: &ExponentValue) -> String {
    let mut out = format!("({}", rat_str(&r.a));
    for (c, suffix) in [(&r.b, "*pi"), (&r.c, "*pi^2")] {
        if !c.is_zero() {
            out.push_str(if c.is_negative() { "-" } else { "+" });
            out.push_str(&rat_str(&c.abs()));
            out.push_str(suffix);
        }
    }
    out.push(')');
    out
}

fn log_str(depth: usize, pow: i64) -> String {
    let mut s = String::new();
    for _ in 0..depth {
        s.push_str("ln(");
    }
    s.push('x');
    for _ in 0..depth {
        s.push(')');
    }
    if pow != 1 {
        s.push('^');
        s.push_str(&pow.to_string());
    }
    s
}

fn freq_str(w: &Frequency) -> String {
    let coef = if w.b.is_zero() {
        rat_str(&w.a)
    } else if w.a.is_zero() {
        format!("{}*pi", rat_str(&w.b))
    } else {
        let sign = if w.b.is_negative() { "-" } else { "+" };
        format!("({}{}{}*pi)", rat_str(&w.a), sign, rat_str(&w.b.abs()))
    };
    format!("exp({coef}*i*x)")
}

/// Deterministic canonical text form.
pub fn print_expr(e: &Expr) -> String {
    let mut keys: Vec<_> = e.monomials().collect();
    keys.sort_by(|(ka, _), (kb, _)| {
        ka.rho
            .cmp_real(&kb.rho)
            .then_with(|| ka.logs.cmp(&kb.logs))
            .then_with(|| ka.freq.cmp(&kb.freq))
    });
    let mut terms: Vec<(bool, String)> = Vec::new();
    for (key, coeff) in keys {
        let (neg, cs) = scalar_str(coeff);
        let mut parts: Vec<String> = Vec::new();
        if let Some(c) = cs {
            parts.push(c);
        }
        if !key.rho.is_zero() {
            parts.push(format!("x^{}", exponent_str(&key.rho.neg())));
        }
        for (j, p) in key.logs.iter().enumerate() {
            if *p != 0 {
                parts.push(log_str(j + 1, *p));
            }
        }
        if !key.freq.is_zero() {
            parts.push(freq_str(&key.freq));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        terms.push((neg, parts.join("*")));
    }
    for (alpha, coeff) in e.null_atoms() {
        let (neg, cs) = scalar_str(coeff);
        let mut parts: Vec<String> = Vec::new();
        if let Some(c) = cs {
            parts.push(c);
        }
        parts.push(format!("exp(-{}*x)", rat_str(alpha)));
        terms.push((neg, parts.join("*")));
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push('-');
            }
        } else if *neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn golden_forms() {
        assert_eq!(print_expr(&Expr::zero()), "0");
        assert_eq!(print_expr(&parse_expr("1/x + 1").unwrap()), "1 + x^(-1)");
        assert_eq!(
            print_expr(&parse_expr("sin(x)/x + ln(x)/x^2").unwrap()),
            "1/2*i*x^(-1)*exp(-1*i*x) - 1/2*i*x^(-1)*exp(1*i*x) + x^(-2)*ln(x)"
        );
    }

    #[test]
    fn round_trip_samples() {
        let samples = [
            "0",
            "1 + x^(-1)",
            "x^(3/2)",
            "x^(-1-1*pi^2)*ln(x)^2",
            "sin(x) + cos(x)*ln(ln(x))",
            "exp(-2*x) + exp(3/2*pi*i*x)",
            "pi^2*x^(-1) - 2*i*ln(x)",
            "(1 - 2*pi)*x^(-1) + (1/3 + 1/5*i)*exp(-1*i*x)",
        ];
        for s in samples {
            let e = parse_expr(s).unwrap();
            let printed = print_expr(&e);
            let reparsed = parse_expr(&printed)
                .unwrap_or_else(|err| panic!("reparse of {printed:?}: {err:?}"));
            assert_eq!(reparsed, e, "round trip through {printed:?}");
        }
    }

    #[test]
    fn deterministic_ordering() {
        // Construction order does not influence output.
        let a = parse_expr("ln(x)/x^2 + sin(x)/x").unwrap();
        let b = parse_expr("sin(x)/x + ln(x)/x^2").unwrap();
        assert_eq!(print_expr(&a), print_expr(&b));
        // rho ascending puts the constant first.
        let c = Expr::one().add(&Expr::x_pow_neg(ExponentValue::from_rat(rat(1, 2))));
        assert_eq!(print_expr(&c), "1 + x^(-1/2)");
        let _ = rat_int(0);
    }
}
