//! Statistical estimation of the decay exponent of a sampled function.
//!
//! The decay exponent is recovered as minus the slope of `ln|f|` against
//! `ln x`. Two practical corrections matter. Oscillatory functions vanish
//! pointwise, so an envelope (sliding-window maximum of `|f|`) is fitted
//! instead of the raw samples. Logarithmic factors tilt the slope, so the
//! default fit adds a `ln ln x` regressor and reports only the `ln x`
//! coefficient.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Increasing positive abscissae with complex sample values.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    pub samples: Vec<(f64, Complex64)>,
    pub label: String,
}

impl SampledFunction {
    pub fn new(samples: Vec<(f64, Complex64)>, label: impl Into<String>) -> Result<Self> {
        if samples.iter().any(|(x, _)| !x.is_finite() || *x <= 0.0) {
            return Err(Error::BadSamples("abscissae must be positive and finite".into()));
        }
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::BadSamples("abscissae must be strictly increasing".into()));
        }
        if samples.len() < 8 {
            return Err(Error::BadSamples(format!(
                "need at least 8 samples, got {}",
                samples.len()
            )));
        }
        Ok(SampledFunction { samples, label: label.into() })
    }

    /// Sample a black-box evaluator on a geometric grid.
    pub fn from_evaluator(
        mut f: impl FnMut(f64) -> Complex64,
        x0: f64,
        growth: f64,
        points: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        let samples = (0..points)
            .map(|k| {
                let x = x0 * growth.powi(k as i32);
                (x, f(x))
            })
            .collect();
        SampledFunction::new(samples, label)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EnvelopeMode {
    /// Envelope is applied when sign changes are detected.
    #[default]
    Auto,
    On,
    Off,
}

/// How logarithmic factors are handled in the fit.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum LogFit {
    /// Fit `ln|f| = c - v ln x + p ln ln x` with `p` free.
    #[default]
    Free,
    /// Fit with the `ln ln x` coefficient pinned to the given value.
    Fixed(f64),
    /// Pure power fit `ln|f| = c - v ln x`.
    None,
}

#[derive(Clone, Copy, Debug)]
pub struct EstimatorConfig {
    pub envelope: EnvelopeMode,
    pub log_fit: LogFit,
    /// Required span of the abscissae in decades.
    pub min_decades: f64,
    /// Minimum samples per envelope window.
    pub envelope_window: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            envelope: EnvelopeMode::Auto,
            log_fit: LogFit::Free,
            min_decades: 2.0,
            envelope_window: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValEstimate {
    pub vhat: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub envelope_used: bool,
}

/// Sliding-window maxima of `|f|`; each point keeps the abscissa at which
/// the maximum is attained, consecutive duplicates collapsed.
fn envelope(points: &[(f64, f64)], window: usize) -> Vec<(f64, f64)> {
    let w = window.min(points.len());
    let stride = (w / 2).max(1);
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut start = 0;
    loop {
        let end = (start + w).min(points.len());
        if let Some(&best) = points[start..end]
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        {
            if out.last() != Some(&best) {
                out.push(best);
            }
        }
        if end == points.len() {
            break;
        }
        start += stride;
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

/// Weighted-free least squares of y against the given regressor columns
/// (including the intercept column). Returns (coefficients, per-coefficient
/// standard errors).
fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let k = cols.len();
    let n = y.len();
    if n < k + 1 {
        return None;
    }
    // Normal equations with Gaussian elimination.
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = cols[i].iter().zip(&cols[j]).map(|(p, q)| p * q).sum();
        }
        a[i][k] = cols[i].iter().zip(y).map(|(p, q)| p * q).sum();
    }
    let mut ainv = invert_with_rhs(&a, k)?;
    let beta: Vec<f64> = (0..k).map(|i| ainv[i].pop().unwrap()).collect();
    // Residual variance.
    let mut rss = 0.0;
    for t in 0..n {
        let pred: f64 = (0..k).map(|i| beta[i] * cols[i][t]).sum();
        rss += (y[t] - pred).powi(2);
    }
    let dof = (n - k).max(1) as f64;
    let sigma2 = rss / dof;
    let se = (0..k).map(|i| (sigma2 * ainv[i][i]).max(0.0).sqrt()).collect();
    Some((beta, se))
}

/// Invert the k x k leading block of `a` (augmented with one rhs column);
/// returns rows of [inverse | solution].
fn invert_with_rhs(a: &[Vec<f64>], k: usize) -> Option<Vec<Vec<f64>>> {
    // Augment with identity.
    let mut m: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row = a[i].clone();
            for j in 0..k {
                row.insert(k + j, if i == j { 1.0 } else { 0.0 });
            }
            row
        })
        .collect();
    let cols = 2 * k + 1;
    for c in 0..k {
        let piv = (c..k).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())?;
        if m[piv][c].abs() < 1e-12 {
            return None;
        }
        m.swap(c, piv);
        let d = m[c][c];
        for j in 0..cols {
            m[c][j] /= d;
        }
        for i in 0..k {
            if i != c && m[i][c] != 0.0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] -= f * m[c][j];
                }
            }
        }
    }
    // Reorder: [inverse columns..., rhs] per row.
    Some(
        m.into_iter()
            .map(|row| {
                let mut out: Vec<f64> = row[k..2 * k].to_vec();
                out.push(row[2 * k]);
                out
            })
            .collect(),
    )
}

/// Estimate the decay exponent of a sampled function.
pub fn estimate_val(f: &SampledFunction, cfg: &EstimatorConfig) -> Result<ValEstimate> {
    let mags: Vec<(f64, f64)> =
        f.samples.iter().map(|(x, v)| (*x, v.norm())).collect();
    if mags.iter().all(|(_, m)| *m == 0.0) {
        return Err(Error::AllSamplesZero);
    }
    let span = mags.last().unwrap().0 / mags[0].0;
    if span < 10f64.powf(cfg.min_decades) * (1.0 - 1e-9) {
        return Err(Error::BadSamples(format!(
            "samples span {:.2} decades, need {:.2}",
            span.log10(),
            cfg.min_decades
        )));
    }

    let sign_changes = f
        .samples
        .windows(2)
        .any(|w| w[0].1.re * w[1].1.re < 0.0 || w[0].1.im * w[1].1.im < 0.0);
    let use_envelope = match cfg.envelope {
        EnvelopeMode::On => true,
        EnvelopeMode::Off => false,
        EnvelopeMode::Auto => sign_changes,
    };

    let points: Vec<(f64, f64)> = if use_envelope {
        envelope(&mags, cfg.envelope_window)
    } else {
        mags
    };
    let usable: Vec<(f64, f64)> = points.into_iter().filter(|(_, m)| *m > 0.0).collect();
    if usable.len() < 4 {
        return Err(Error::BadSamples(format!(
            "only {} usable (nonzero) points after envelope",
            usable.len()
        )));
    }

    let lx: Vec<f64> = usable.iter().map(|(x, _)| x.ln()).collect();
    let mut y: Vec<f64> = usable.iter().map(|(_, m)| m.ln()).collect();
    let ones = vec![1.0; usable.len()];

    let loglog_ok = usable.iter().all(|(x, _)| *x > std::f64::consts::E);
    let log_fit = match cfg.log_fit {
        LogFit::Free if !loglog_ok => LogFit::None,
        other => other,
    };

    let (beta_slope, se_slope) = match log_fit {
        LogFit::Free => {
            let llx: Vec<f64> = lx.iter().map(|l| l.ln()).collect();
            let (beta, se) = least_squares(&[ones, lx.clone(), llx], &y)
                .ok_or_else(|| Error::BadSamples("degenerate regression design".into()))?;
            (beta[1], se[1])
        }
        LogFit::Fixed(p) => {
            for (yi, l) in y.iter_mut().zip(&lx) {
                *yi -= p * l.ln();
            }
            let (beta, se) = least_squares(&[ones, lx.clone()], &y)
                .ok_or_else(|| Error::BadSamples("degenerate regression design".into()))?;
            (beta[1], se[1])
        }
        LogFit::None => {
            let (beta, se) = least_squares(&[ones, lx.clone()], &y)
                .ok_or_else(|| Error::BadSamples("degenerate regression design".into()))?;
            (beta[1], se[1])
        }
    };

    Ok(ValEstimate {
        vhat: -beta_slope,
        stderr: se_slope,
        window: (usable[0].0, usable.last().unwrap().0),
        envelope_used: use_envelope,
    })
}
