//! `vasym`: command-line front end for the vasymptotic library.
//!
//! Exit codes: 0 success, 1 domain error (bad input expression or data),
//! 2 usage or I/O error, 3 numeric failure (ill-conditioned fit,
//! non-convergent quadrature). Floating output uses 17 significant
//! decimal digits so identical invocations are byte-identical.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use vasymptotic::{
    classify, dist, estimate_val, gn_dist, gn_expand, gn_is_real, gn_val,
    is_v_independent, numeric_expand, parse_expr, print_expr, pseudo_st, quotient,
    rmt_coefficient, rmt_integral_eval, rmt_series, rmt_verify, val, BasisSpan, BoundaryData,
    EnvelopeMode, Error, EstimatorConfig, ExpandConfig, Expr, Independence, Lattice, Rat,
    SampledFunction, SeriesDocument, VAsymptoticSeries, Valuation,
};

#[derive(Parser)]
#[command(name = "vasym", version, about = "Asymptotic analysis of moderate-growth germs")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Working precision in bits for quadrature-backed commands.
    #[arg(long, global = true, default_value_t = 256)]
    precision: usize,
    /// TOML config file (keys: log_depth, envelope, min_decades, envelope_window).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pseudovaluation of an expression.
    Val {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Position of an expression in the valuation filtration.
    Classify { expr: String },
    /// Ultrametric distance between two expressions.
    Dist { a: String, b: String },
    /// Pseudostandard part of a v-finite expression.
    St { expr: String },
    /// Decide linear v-independence of a family.
    Indep {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Asymptotic expansion with exact coefficients.
    Expand {
        expr: String,
        #[arg(long, default_value_t = 4)]
        terms: usize,
    },
    /// Check a claimed expansion (series JSON file) against an expression.
    Verify {
        expr: String,
        #[arg(long)]
        series: PathBuf,
    },
    /// Estimate the valuation of sampled data (CSV rows `x,re[,im]`).
    EstimateVal {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, value_parser = ["auto", "on", "off"])]
        envelope: Option<String>,
    },
    /// Recover an expansion from sampled data against a coefficient basis.
    NumericExpand {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, required = true, num_args = 1.., allow_hyphen_values = true)]
        basis: Vec<String>,
        /// Exponent lattice step as a rational, e.g. `1/4`.
        #[arg(long)]
        lattice: Option<String>,
    },
    /// Oscillatory model integral: evaluation, coefficients, verification.
    Rmt {
        #[command(subcommand)]
        cmd: RmtCmd,
    },
    /// Quotient-level mirrors on generalized numbers.
    Gn {
        #[command(subcommand)]
        cmd: GnCmd,
    },
}

#[derive(Subcommand)]
enum RmtCmd {
    /// Evaluate the integral on a geometric grid; CSV output `x,re,im`.
    Eval {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 50.0)]
        xmin: f64,
        #[arg(long, default_value_t = 400.0)]
        xmax: f64,
        #[arg(long, default_value_t = 12)]
        points: usize,
        #[arg(long)]
        bits: Option<usize>,
    },
    /// Exact expansion coefficients phi_0..phi_{N-1}.
    Coeffs {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 3)]
        orders: usize,
    },
    /// Verify the expansion against high-precision quadrature.
    Verify {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 3)]
        orders: usize,
        #[arg(long, default_value_t = 50.0)]
        xmin: f64,
        #[arg(long, default_value_t = 400.0)]
        xmax: f64,
        #[arg(long, default_value_t = 12)]
        points: usize,
        #[arg(long)]
        bits: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GnCmd {
    /// Valuation of the class of an expression.
    Val { expr: String },
    /// Ultrametric distance between two classes.
    Dist { a: String, b: String },
    /// Expansion of a class; coefficients are canonical representatives.
    Expand {
        expr: String,
        #[arg(long, default_value_t = 4)]
        terms: usize,
    },
    /// Whether the class is real (conjugation-invariant).
    IsReal { expr: String },
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    log_depth: Option<usize>,
    envelope: Option<String>,
    min_decades: Option<f64>,
    envelope_window: Option<usize>,
}

/// 17 significant decimal digits, deterministic.
fn fnum(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{v:.16e}")
}

fn usage_err(msg: String) -> Error {
    Error::Syntax { offset: 0, message: msg }
}

fn load_config(path: Option<&Path>) -> Result<Config, Error> {
    let Some(p) = path else { return Ok(Config::default()) };
    let text = std::fs::read_to_string(p)?;
    toml::from_str(&text).map_err(|e| usage_err(format!("config: {e}")))
}

fn envelope_mode(name: &str) -> Result<EnvelopeMode, Error> {
    match name {
        "auto" => Ok(EnvelopeMode::Auto),
        "on" => Ok(EnvelopeMode::On),
        "off" => Ok(EnvelopeMode::Off),
        other => Err(usage_err(format!("unknown envelope mode {other:?}"))),
    }
}

fn estimator_config(cfg: &Config, envelope: Option<&str>) -> Result<EstimatorConfig, Error> {
    let mut est = EstimatorConfig::default();
    if let Some(name) = envelope.or(cfg.envelope.as_deref()) {
        est.envelope = envelope_mode(name)?;
    }
    if let Some(d) = cfg.min_decades {
        est.min_decades = d;
    }
    if let Some(w) = cfg.envelope_window {
        est.envelope_window = w;
    }
    Ok(est)
}

/// Parse an expression, enforcing the configured iterated-log depth cap.
fn parse_checked(src: &str, cfg: &Config) -> Result<Expr, Error> {
    let e = parse_expr(src)?;
    if let Some(cap) = cfg.log_depth {
        let depth = e.monomials().map(|(k, _)| k.logs.len()).max().unwrap_or(0);
        if depth > cap {
            return Err(usage_err(format!(
                "log depth {depth} exceeds configured cap {cap}"
            )));
        }
    }
    Ok(e)
}

fn read_csv_samples(path: &Path) -> Result<SampledFunction, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::BadSamples(format!(
                "line {}: expected `x,re[,im]`",
                lineno + 1
            )));
        }
        let parse_f = |s: &str| {
            s.parse::<f64>().map_err(|_| {
                Error::BadSamples(format!("line {}: bad number {s:?}", lineno + 1))
            })
        };
        let x = parse_f(fields[0])?;
        let re = parse_f(fields[1])?;
        let im = if fields.len() == 3 { parse_f(fields[2])? } else { 0.0 };
        samples.push((x, num_complex::Complex64::new(re, im)));
    }
    SampledFunction::new(samples, path.display().to_string())
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.parse::<Rat>()
        .map_err(|_| usage_err(format!("bad rational {s:?}")))
}

fn parse_poly(spec: &str) -> Result<BoundaryData, Error> {
    let coeffs = spec
        .split(',')
        .map(|s| parse_rat(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BoundaryData::new(coeffs))
}

fn geometric_grid(xmin: f64, xmax: f64, points: usize) -> Result<Vec<f64>, Error> {
    if !(xmin.is_finite() && xmax.is_finite()) || xmin <= 0.0 || xmax <= xmin || points < 2 {
        return Err(usage_err("need 0 < xmin < xmax and points >= 2".into()));
    }
    let ratio = xmax / xmin;
    Ok((0..points)
        .map(|k| xmin * ratio.powf(k as f64 / (points - 1) as f64))
        .collect())
}

fn valuation_json(v: &Valuation) -> String {
    let real = match v {
        Valuation::Infinity => "null".to_string(),
        Valuation::Finite(e) => fnum(e.to_f64()),
    };
    format!("{{\"valuation\":{:?},\"real\":{}}}", v.to_string(), real)
}

fn series_text(s: &VAsymptoticSeries) -> String {
    if s.terms.is_empty() {
        return "(empty series)\n".into();
    }
    let mut out = String::new();
    for (n, (r, phi)) in s.terms.iter().enumerate() {
        out.push_str(&format!("n={n}  r={r}  phi={}\n", print_expr(phi)));
    }
    if s.diverges_to_infinity {
        out.push_str("exponents diverge to infinity\n");
    }
    out
}

fn print_series(s: &VAsymptoticSeries, json: bool) -> Result<(), Error> {
    if json {
        println!("{}", SeriesDocument::from_series(s)?.to_json()?);
    } else {
        print!("{}", series_text(s));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    let config = load_config(cli.config.as_deref())?;
    match &cli.cmd {
        Cmd::Val { expr } => {
            let v = val(&parse_checked(expr, &config)?);
            if cli.json {
                println!("{}", valuation_json(&v));
            } else {
                println!("{v}");
            }
        }
        Cmd::Classify { expr } => {
            let c = classify(&parse_checked(expr, &config)?);
            if cli.json {
                println!("{{\"class\":{:?}}}", c.to_string());
            } else {
                println!("{c}");
            }
        }
        Cmd::Dist { a, b } => {
            let d = dist(&parse_checked(a, &config)?, &parse_checked(b, &config)?);
            if cli.json {
                println!("{{\"dist\":{}}}", fnum(d));
            } else {
                println!("{}", fnum(d));
            }
        }
        Cmd::St { expr } => {
            let dec = pseudo_st(&parse_checked(expr, &config)?)?;
            let (st, inf) = (print_expr(&dec.phi), print_expr(&dec.dphi));
            if cli.json {
                println!("{{\"st\":{st:?},\"infinitesimal\":{inf:?}}}");
            } else {
                println!("st = {st}");
                println!("infinitesimal = {inf}");
            }
        }
        Cmd::Indep { exprs } => {
            let fs = exprs
                .iter()
                .map(|s| parse_checked(s, &config))
                .collect::<Result<Vec<_>, _>>()?;
            match is_v_independent(&fs) {
                Independence::Independent => {
                    if cli.json {
                        println!("{{\"independent\":true}}");
                    } else {
                        println!("independent");
                    }
                }
                Independence::Dependent { witness, combination_val } => {
                    let w: Vec<String> = witness.iter().map(|s| format!("{s:?}")).collect();
                    if cli.json {
                        let ws: Vec<String> = w.iter().map(|s| format!("{s:?}")).collect();
                        println!(
                            "{{\"independent\":false,\"witness\":[{}],\"combination_valuation\":{:?}}}",
                            ws.join(","),
                            combination_val.to_string()
                        );
                    } else {
                        println!("dependent");
                        println!("witness = [{}]", w.join(", "));
                        println!("combination valuation = {combination_val}");
                    }
                }
            }
        }
        Cmd::Expand { expr, terms } => {
            let s = vasymptotic::expand(&parse_checked(expr, &config)?, *terms);
            print_series(&s, cli.json)?;
        }
        Cmd::Verify { expr, series } => {
            let f = parse_checked(expr, &config)?;
            let text = std::fs::read_to_string(series)?;
            let s = SeriesDocument::from_json(&text)?.to_series()?;
            let report = vasymptotic::verify_expansion(&f, &s);
            if cli.json {
                let rows: Vec<String> = report
                    .rows
                    .iter()
                    .map(|r| {
                        format!(
                            "{{\"n\":{},\"r\":{:?},\"constant_ok\":{},\"infinitesimal_ok\":{}}}",
                            r.n,
                            r.r.to_string(),
                            r.constant_ok,
                            r.infinitesimal_ok
                        )
                    })
                    .collect();
                println!(
                    "{{\"series_valid\":{},\"rows\":[{}],\"all_pass\":{}}}",
                    report.series_valid,
                    rows.join(","),
                    report.all_pass()
                );
            } else {
                if !report.series_valid {
                    println!(
                        "series invalid: {}",
                        report.series_error.as_deref().unwrap_or("unknown")
                    );
                }
                for r in &report.rows {
                    println!(
                        "n={}  r={}  constant {}  infinitesimal {}",
                        r.n,
                        r.r,
                        if r.constant_ok { "OK" } else { "FAIL" },
                        if r.infinitesimal_ok { "OK" } else { "FAIL" }
                    );
                }
                println!("{}", if report.all_pass() { "PASS" } else { "FAIL" });
            }
        }
        Cmd::EstimateVal { csv, envelope } => {
            let samples = read_csv_samples(csv)?;
            let est_cfg = estimator_config(&config, envelope.as_deref())?;
            let est = estimate_val(&samples, &est_cfg)?;
            if cli.json {
                println!(
                    "{{\"vhat\":{},\"stderr\":{},\"window\":[{},{}],\"envelope_used\":{}}}",
                    fnum(est.vhat),
                    fnum(est.stderr),
                    fnum(est.window.0),
                    fnum(est.window.1),
                    est.envelope_used
                );
            } else {
                println!("vhat = {}", fnum(est.vhat));
                println!("stderr = {}", fnum(est.stderr));
                println!("window = [{}, {}]", fnum(est.window.0), fnum(est.window.1));
                println!("envelope_used = {}", est.envelope_used);
            }
        }
        Cmd::NumericExpand { csv, basis, lattice } => {
            let samples = read_csv_samples(csv)?;
            let fs = basis
                .iter()
                .map(|s| parse_checked(s, &config))
                .collect::<Result<Vec<_>, _>>()?;
            let span = BasisSpan::new(fs)?;
            let mut cfg = ExpandConfig {
                estimator: estimator_config(&config, None)?,
                ..ExpandConfig::default()
            };
            if let Some(spec) = lattice {
                cfg.lattice = Some(Lattice { step: parse_rat(spec)?, ..Lattice::default() });
            }
            let (series, diag) = numeric_expand(&samples, &span, &cfg)?;
            if cli.json {
                let doc = SeriesDocument::from_series(&series)?.to_json()?;
                let ex: Vec<String> = diag.estimated_exponents.iter().map(|v| fnum(*v)).collect();
                println!(
                    "{{\"series\":{},\"estimated_exponents\":[{}],\"null_candidate\":{}}}",
                    doc,
                    ex.join(","),
                    diag.null_candidate
                );
            } else {
                print!("{}", series_text(&series));
                let ex: Vec<String> = diag.estimated_exponents.iter().map(|v| fnum(*v)).collect();
                println!("estimated exponents = [{}]", ex.join(", "));
            }
        }
        Cmd::Rmt { cmd } => run_rmt(cli, &config, cmd)?,
        Cmd::Gn { cmd } => run_gn(cli, &config, cmd)?,
    }
    Ok(())
}

fn run_rmt(cli: &Cli, _config: &Config, cmd: &RmtCmd) -> Result<(), Error> {
    match cmd {
        RmtCmd::Eval { poly, xmin, xmax, points, bits } => {
            let f = parse_poly(poly)?;
            let bits = bits.unwrap_or(cli.precision);
            let xs = geometric_grid(*xmin, *xmax, *points)?;
            let mut rows = Vec::with_capacity(xs.len());
            for &x in &xs {
                let v = rmt_integral_eval(x, &f, bits)?.to_c64();
                rows.push((x, v));
            }
            if cli.json {
                let items: Vec<String> = rows
                    .iter()
                    .map(|(x, v)| {
                        format!("{{\"x\":{},\"re\":{},\"im\":{}}}", fnum(*x), fnum(v.re), fnum(v.im))
                    })
                    .collect();
                println!("{{\"bits\":{bits},\"values\":[{}]}}", items.join(","));
            } else {
                println!("x,re,im");
                for (x, v) in rows {
                    println!("{},{},{}", fnum(x), fnum(v.re), fnum(v.im));
                }
            }
        }
        RmtCmd::Coeffs { poly, orders } => {
            let f = parse_poly(poly)?;
            if *orders == 0 {
                return Err(usage_err("--orders must be at least 1".into()));
            }
            let series = rmt_series(&f, *orders)?;
            if cli.json {
                let coeffs: Vec<String> = (0..*orders)
                    .map(|n| format!("{:?}", print_expr(&rmt_coefficient(&f, n))))
                    .collect();
                println!("{{\"coefficients\":[{}]}}", coeffs.join(","));
            } else {
                print!("{}", series_text(&series));
            }
        }
        RmtCmd::Verify { poly, orders, xmin, xmax, points, bits } => {
            let f = parse_poly(poly)?;
            let bits = bits.unwrap_or(cli.precision);
            let xs = geometric_grid(*xmin, *xmax, *points)?;
            let report = rmt_verify(&f, *orders, &xs, bits)?;
            if cli.json {
                let rows: Vec<String> = report
                    .rows
                    .iter()
                    .map(|r| {
                        format!(
                            "{{\"x\":{},\"n\":{},\"scaled_residual\":{},\"vhat\":{},\"pass\":{}}}",
                            fnum(r.x),
                            r.n,
                            fnum(r.scaled_residual),
                            fnum(r.vhat),
                            r.pass
                        )
                    })
                    .collect();
                println!(
                    "{{\"bits\":{},\"rows\":[{}],\"all_pass\":{}}}",
                    report.bits,
                    rows.join(","),
                    report.all_pass()
                );
            } else {
                print!("{}", report.to_text_table());
                println!("{}", if report.all_pass() { "ALL PASS" } else { "FAIL" });
            }
        }
    }
    Ok(())
}

fn run_gn(cli: &Cli, config: &Config, cmd: &GnCmd) -> Result<(), Error> {
    match cmd {
        GnCmd::Val { expr } => {
            let v = gn_val(&quotient(&parse_checked(expr, config)?));
            if cli.json {
                println!("{}", valuation_json(&v));
            } else {
                println!("{v}");
            }
        }
        GnCmd::Dist { a, b } => {
            let d = gn_dist(
                &quotient(&parse_checked(a, config)?),
                &quotient(&parse_checked(b, config)?),
            );
            if cli.json {
                println!("{{\"dist\":{}}}", fnum(d));
            } else {
                println!("{}", fnum(d));
            }
        }
        GnCmd::Expand { expr, terms } => {
            let s = gn_expand(&quotient(&parse_checked(expr, config)?), *terms);
            if s.terms.is_empty() && !cli.json {
                println!("(empty series)");
            }
            if cli.json {
                let items: Vec<String> = s
                    .terms
                    .iter()
                    .map(|(r, a)| {
                        format!("{{\"r\":{:?},\"phi\":{:?}}}", r.to_string(), print_expr(a.rep()))
                    })
                    .collect();
                println!("{{\"terms\":[{}]}}", items.join(","));
            } else {
                for (n, (r, a)) in s.terms.iter().enumerate() {
                    println!("n={n}  r={r}  phi={}", print_expr(a.rep()));
                }
            }
        }
        GnCmd::IsReal { expr } => {
            let real = gn_is_real(&quotient(&parse_checked(expr, config)?));
            if cli.json {
                println!("{{\"real\":{real}}}");
            } else {
                println!("{real}");
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::IllConditioned { .. }
        | Error::NonConvergent { .. }
        | Error::PrecisionTooLow(_)
        | Error::NoValuationGap { .. } => 3,
        Error::Io(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
