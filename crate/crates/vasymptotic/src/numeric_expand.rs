//! Numeric asymptotic expansion of a sampled function against an explicit
//! coefficient basis.
//!
//! Greedy loop: estimate the decay exponent of the residual, enumerate
//! nearby points of a configurable exponent lattice, score every candidate by
//! a joint least-squares fit of all accepted terms plus the candidate over
//! the whole grid, accept the best one, and check that the residual's
//! estimated exponent moved past it by a configurable gap. Joint scoring
//! matters: fitting candidates against the residual alone lets the fit error
//! of earlier terms drown the small later terms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::estimate::{estimate_val, EstimatorConfig, SampledFunction};
use crate::eval::eval_at_f64;
use crate::exponent::ExponentValue;
use crate::expr::Expr;
use crate::scalar::{rat, rat_from_f64, rat_int, Rat, Scalar};
use crate::series::VAsymptoticSeries;
use crate::vspace::BasisSpan;

/// Exponent lattice: candidates are `m * step + offset`.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub step: Rat,
    pub offsets: Vec<ExponentValue>,
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice {
            step: rat(1, 4),
            offsets: vec![
                ExponentValue::zero(),
                ExponentValue::new(rat_int(0), rat_int(1), rat_int(0)),
                ExponentValue::new(rat_int(0), rat_int(0), rat_int(1)),
            ],
        }
    }
}

impl Lattice {
    /// Nearest lattice point to the estimate.
    pub fn snap(&self, vhat: f64) -> ExponentValue {
        let mut c = self.candidates(vhat, 0);
        c.pop().unwrap()
    }

    /// Lattice points within `spread` steps of the estimate, closest last.
    pub fn candidates(&self, vhat: f64, spread: i64) -> Vec<ExponentValue> {
        let step = crate::scalar::rat_to_f64(&self.step);
        let mut out: Vec<ExponentValue> = Vec::new();
        for off in &self.offsets {
            let rem = vhat - off.to_f64();
            let m0 = (rem / step).round() as i64;
            for m in m0 - spread..=m0 + spread {
                let cand = ExponentValue::from_rat(&self.step * rat_int(m)).add(off);
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        out.sort_by(|a, b| {
            (b.to_f64() - vhat)
                .abs()
                .partial_cmp(&(a.to_f64() - vhat).abs())
                .unwrap()
        });
        out
    }
}

#[derive(Clone, Debug)]
pub struct ExpandConfig {
    pub max_terms: usize,
    /// Required increase of the residual exponent past an accepted term.
    pub gap: f64,
    /// Maximum admissible Gram-matrix condition number.
    pub cond_max: f64,
    /// Lattice for exponent snapping; `None` keeps raw estimates.
    pub lattice: Option<Lattice>,
    pub estimator: EstimatorConfig,
    /// Residual rms (relative to the initial rms) treated as exhaustion.
    pub residual_floor: f64,
    /// Numeric coefficients below this magnitude are dropped.
    pub coeff_floor: f64,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        ExpandConfig {
            max_terms: 4,
            gap: 0.25,
            cond_max: 1e8,
            lattice: Some(Lattice::default()),
            estimator: EstimatorConfig::default(),
            residual_floor: 1e-9,
            coeff_floor: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExpandDiagnostics {
    pub condition_numbers: Vec<f64>,
    pub residual_rms: Vec<f64>,
    pub estimated_exponents: Vec<f64>,
    /// Input indistinguishable from the zero function.
    pub null_candidate: bool,
}

/// Solve the least-squares problem `A c = y` over the complex numbers via
/// the normal equations; returns the coefficients and the Gram condition
/// number.
fn complex_lsq(a: &[Vec<Complex64>], y: &[Complex64]) -> Option<(Vec<Complex64>, f64)> {
    let n = a.len();
    if n == 0 {
        return None;
    }
    let k = a[0].len();
    // Column equilibration: power columns span a huge dynamic range on a
    // geometric grid; normalizing them keeps the Gram system well scaled.
    let scale: Vec<f64> = (0..k)
        .map(|j| {
            let s = a.iter().map(|row| row[j].norm_sqr()).sum::<f64>().sqrt();
            if s == 0.0 {
                1.0
            } else {
                s
            }
        })
        .collect();
    let col = |row: &[Complex64], j: usize| row[j] / scale[j];
    let mut g = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = a.iter().map(|row| col(row, i).conj() * col(row, j)).sum();
        }
    }
    let cond = gram_condition(&g, k);
    let m: Vec<Vec<Complex64>> = a
        .iter()
        .map(|row| (0..k).map(|j| col(row, j)).collect())
        .collect();
    let mut x = qr_solve(&m, y)?;
    // One refinement pass knocks out the residual rounding error of the
    // factorization on strongly correlated columns.
    let res: Vec<Complex64> = m
        .iter()
        .zip(y)
        .map(|(row, &v)| v - row.iter().zip(&x).map(|(a, b)| a * b).sum::<Complex64>())
        .collect();
    if let Some(d) = qr_solve(&m, &res) {
        for j in 0..k {
            x[j] += d[j];
        }
    }
    Some(((0..k).map(|j| x[j] / scale[j]).collect(), cond))
}

/// Least-squares solve of the (tall) system `M x = y` by complex Householder
/// QR; much better behaved than the normal equations when `M` has strongly
/// correlated columns.
fn qr_solve(m0: &[Vec<Complex64>], y: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = m0.len();
    let k = m0[0].len();
    if n < k {
        return None;
    }
    let mut m: Vec<Vec<Complex64>> = m0.to_vec();
    let mut b: Vec<Complex64> = y.to_vec();
    for c in 0..k {
        let nrm = (c..n).map(|i| m[i][c].norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 {
            return None;
        }
        let head = m[c][c];
        let alpha = if head.norm() == 0.0 {
            Complex64::new(-nrm, 0.0)
        } else {
            -head / head.norm() * nrm
        };
        let mut v: Vec<Complex64> = (c..n).map(|i| m[i][c]).collect();
        v[0] -= alpha;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 > 0.0 {
            let f = 2.0 / vn2;
            for j in c + 1..k {
                let s: Complex64 = (0..n - c).map(|t| v[t].conj() * m[c + t][j]).sum();
                let sf = s * f;
                for t in 0..n - c {
                    let d = v[t] * sf;
                    m[c + t][j] -= d;
                }
            }
            let s: Complex64 = (0..n - c).map(|t| v[t].conj() * b[c + t]).sum();
            let sf = s * f;
            for t in 0..n - c {
                let d = v[t] * sf;
                b[c + t] -= d;
            }
        }
        m[c][c] = alpha;
        for row in m.iter_mut().take(n).skip(c + 1) {
            row[c] = Complex64::new(0.0, 0.0);
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); k];
    for i in (0..k).rev() {
        let mut s = b[i];
        for j in i + 1..k {
            s -= m[i][j] * x[j];
        }
        if m[i][i].norm() == 0.0 {
            return None;
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}

/// Condition number of the Hermitian Gram block via power iteration.
fn gram_condition(g: &[Vec<Complex64>], k: usize) -> f64 {
    if k == 1 {
        return 1.0;
    }
    let matvec = |m: &dyn Fn(usize, usize) -> Complex64, v: &[Complex64]| -> Vec<Complex64> {
        (0..k)
            .map(|i| (0..k).map(|j| m(i, j) * v[j]).sum())
            .collect()
    };
    let norm = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let power = |m: &dyn Fn(usize, usize) -> Complex64| -> f64 {
        let mut v: Vec<Complex64> =
            (0..k).map(|i| Complex64::new(1.0 + (i as f64) * 0.3, 0.2)).collect();
        let mut lam = 0.0;
        for _ in 0..200 {
            let w = matvec(m, &v);
            let nw = norm(&w);
            if nw == 0.0 {
                return 0.0;
            }
            lam = nw / norm(&v).max(1e-300);
            v = w.iter().map(|c| c / nw).collect();
        }
        lam
    };
    let lam_max = power(&|i, j| g[i][j]);
    if lam_max == 0.0 {
        return f64::INFINITY;
    }
    // Largest eigenvalue of (lam_max I - G) gives lam_max - lam_min.
    let shifted = power(&|i, j| {
        let d = if i == j { Complex64::new(lam_max, 0.0) } else { Complex64::new(0.0, 0.0) };
        d - g[i][j]
    });
    let lam_min = (lam_max - shifted).max(0.0);
    if lam_min == 0.0 {
        f64::INFINITY
    } else {
        lam_max / lam_min
    }
}

fn scalar_from_c64(c: Complex64, floor: f64) -> Scalar {
    let clip = |v: f64| if v.abs() < floor { 0.0 } else { v };
    Scalar::from_parts(
        crate::scalar::PiPoly::from_rat(rat_from_f64(clip(c.re)).unwrap_or_else(Rat::default)),
        crate::scalar::PiPoly::from_rat(rat_from_f64(clip(c.im)).unwrap_or_else(Rat::default)),
    )
}

/// Relative joint misfit below which a candidate is accepted without the
/// valuation-gap check: the model explains the data down to sampling noise.
const GOOD_FIT: f64 = 1e-6;

fn rms(v: &[Complex64]) -> f64 {
    (v.iter().map(|c| c.norm_sqr()).sum::<f64>() / v.len() as f64).sqrt()
}

/// Joint least-squares fit of the columns `x^{-r_j} * b(x)` for every
/// exponent and basis element against the data. Returns per-exponent
/// coefficient vectors, the Gram condition number, and the residual rms
/// relative to the data rms.
fn joint_fit(
    xs: &[f64],
    basis_vals: &[Vec<Complex64>],
    exponents: &[ExponentValue],
    ys: &[Complex64],
) -> Option<(Vec<Vec<Complex64>>, f64, f64)> {
    let rfs: Vec<f64> = exponents.iter().map(|r| r.to_f64()).collect();
    let rows: Vec<Vec<Complex64>> = (0..xs.len())
        .map(|k| {
            let mut row = Vec::with_capacity(rfs.len() * basis_vals.len());
            for rf in &rfs {
                let w = xs[k].powf(-rf);
                for bv in basis_vals {
                    row.push(bv[k] * w);
                }
            }
            row
        })
        .collect();
    let target: Vec<Complex64> = ys.to_vec();
    let (flat, cond) = complex_lsq(&rows, &target)?;
    let misfit = rows
        .iter()
        .zip(&target)
        .map(|(row, t)| {
            let pred: Complex64 = row.iter().zip(&flat).map(|(a, b)| a * b).sum();
            (t - pred).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
        / (rms(&target) * (target.len() as f64).sqrt()).max(1e-300);
    let cvs = flat.chunks(basis_vals.len()).map(|c| c.to_vec()).collect();
    Some((cvs, cond, misfit))
}

/// Numeric expansion of sampled data against a coefficient basis.
pub fn numeric_expand(
    f: &SampledFunction,
    basis: &BasisSpan,
    cfg: &ExpandConfig,
) -> Result<(VAsymptoticSeries, ExpandDiagnostics)> {
    let xs: Vec<f64> = f.samples.iter().map(|(x, _)| *x).collect();
    let ys: Vec<Complex64> = f.samples.iter().map(|(_, v)| *v).collect();
    let mut diag = ExpandDiagnostics::default();

    let initial_rms = rms(&ys);
    if initial_rms == 0.0 {
        diag.null_candidate = true;
        return Ok((VAsymptoticSeries::empty(), diag));
    }

    // Basis values on the grid.
    let mut basis_vals: Vec<Vec<Complex64>> = Vec::with_capacity(basis.len());
    for b in basis.elements() {
        let vals: Result<Vec<Complex64>> = xs.iter().map(|&x| eval_at_f64(b, x)).collect();
        basis_vals.push(vals?);
    }

    let mut exponents: Vec<ExponentValue> = Vec::new();
    // Relative misfit of the accepted model so far (1 = no model).
    let mut prev_score = 1.0f64;
    let mut coeff_vectors: Vec<Vec<Complex64>> = Vec::new();
    let mut residual = ys.clone();
    let mut exhausted = false;

    while exponents.len() < cfg.max_terms {
        let res_rms = rms(&residual);
        diag.residual_rms.push(res_rms);
        if res_rms <= cfg.residual_floor * initial_rms {
            exhausted = true;
            break;
        }
        let res_samples = SampledFunction::new(
            xs.iter().copied().zip(residual.iter().copied()).collect(),
            "residual",
        )?;
        let vhat = match estimate_val(&res_samples, &cfg.estimator) {
            Ok(e) => e.vhat,
            Err(Error::AllSamplesZero) => {
                exhausted = true;
                break;
            }
            // The envelope can leave too few points on short grids; fall
            // back to the rms slope across the two grid halves.
            Err(Error::BadSamples(_)) if !exponents.is_empty() => {
                let half = xs.len() / 2;
                let lo = rms(&residual[..half]);
                let hi = rms(&residual[half..]);
                let xc_lo: f64 = xs[..half].iter().map(|x| x.ln()).sum::<f64>() / half as f64;
                let xc_hi: f64 =
                    xs[half..].iter().map(|x| x.ln()).sum::<f64>() / (xs.len() - half) as f64;
                if lo == 0.0 || hi == 0.0 {
                    exhausted = true;
                    break;
                }
                -(hi / lo).ln() / (xc_hi - xc_lo)
            }
            Err(e) => return Err(e),
        };
        diag.estimated_exponents.push(vhat);
        let candidates: Vec<ExponentValue> = match &cfg.lattice {
            Some(l) => l
                .candidates(vhat, 5)
                .into_iter()
                .filter(|c| (c.to_f64() - vhat).abs() <= 1.25)
                .filter(|c| {
                    exponents
                        .last()
                        .map_or(true, |p| c.cmp_real(p) == std::cmp::Ordering::Greater)
                })
                .collect(),
            None => vec![ExponentValue::from_rat(
                rat_from_f64(vhat).ok_or(Error::BadSamples("non-finite estimate".into()))?,
            )],
        };
        if candidates.is_empty() {
            return Err(Error::NoValuationGap {
                exponent: exponents.last().map_or(f64::NAN, |p| p.to_f64()),
                best: vhat,
            });
        }

        // Score each candidate by a joint fit of all accepted terms plus the
        // candidate over the whole grid: the correct exponent drives the
        // joint residual toward machine level, while earlier terms are
        // absorbed by their own columns instead of polluting the score.
        let mut scored: Vec<(f64, ExponentValue, Vec<Vec<Complex64>>, f64)> = Vec::new();
        for cand in candidates {
            let mut trial = exponents.clone();
            trial.push(cand.clone());
            let Some((cvs, cond, score)) = joint_fit(&xs, &basis_vals, &trial, &ys) else {
                continue;
            };
            scored.push((score, cand, cvs, cond));
        }
        let best_score = scored
            .iter()
            .map(|(s, _, _, _)| *s)
            .fold(f64::INFINITY, f64::min);
        // Misfits within a small factor of the best are indistinguishable
        // when later terms are still unmodeled; among those, the exponent
        // nearest the measured decay rate is the right pick, not a lattice
        // alias that happens to split the difference.
        let (score, r, cvs, cond) = scored
            .into_iter()
            .filter(|(s, _, _, _)| *s <= 3.0 * best_score)
            .min_by(|(_, a, _, _), (_, b, _, _)| {
                (a.to_f64() - vhat)
                    .abs()
                    .partial_cmp(&(b.to_f64() - vhat).abs())
                    .unwrap()
            })
            .ok_or(Error::BadSamples("degenerate least-squares system".into()))?;
        diag.condition_numbers.push(cond);
        if cond > cfg.cond_max {
            return Err(Error::IllConditioned { cond, max: cfg.cond_max });
        }

        // A candidate is certified either by a joint fit at the noise floor
        // or by a substantial drop of the misfit: coefficient leakage from
        // the still-incomplete model can pin the raw residual estimate near
        // the last exponent even when the pick is right. Only when the fit
        // neither reaches the floor nor improves, and the estimate has not
        // moved past the last exponent by the configured gap, is the basis
        // unable to express the next coefficient.
        if score > GOOD_FIT && score > 0.5 * prev_score {
            if let Some(prev) = exponents.last() {
                let rf = prev.to_f64();
                if vhat < rf + cfg.gap {
                    return Err(Error::NoValuationGap { exponent: rf, best: vhat });
                }
            }
        }
        prev_score = score;

        exponents.push(r);
        coeff_vectors = cvs;

        // Updated residual.
        residual = (0..xs.len())
            .map(|k| {
                let mut model = Complex64::new(0.0, 0.0);
                for (rr, cv) in exponents.iter().zip(&coeff_vectors) {
                    let w = xs[k].powf(-rr.to_f64());
                    for (c, bv) in cv.iter().zip(&basis_vals) {
                        model += c * bv[k] * w;
                    }
                }
                ys[k] - model
            })
            .collect();
    }

    let terms: Vec<(ExponentValue, Expr)> = exponents
        .iter()
        .zip(&coeff_vectors)
        .map(|(r, cv)| {
            let mut phi = Expr::zero();
            for (c, b) in cv.iter().zip(basis.elements()) {
                phi = phi.add(&b.scale(&scalar_from_c64(*c, cfg.coeff_floor)));
            }
            (r.clone(), phi)
        })
        // A term whose whole coefficient vector fell below the floor was a
        // lattice alias the fit rejected; keeping it would fabricate a term.
        .filter(|(_, phi)| !phi.is_zero())
        .collect();
    let series = VAsymptoticSeries::new(terms, exhausted)?;
    Ok((series, diag))
}
