//! Entire functions as coefficient oracles.
//!
//! A [`CoefficientSeries`] answers `a_k` exactly (log-magnitude and phase)
//! and knows how far the series must be summed on a circle `|z| = r` so
//! that the discarded tail is below a requested fraction of the maximum
//! term. All summation happens relative to the maximum term, so nothing
//! overflows below the exact-evaluation ceiling.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lognum::{logsumexp, wrap_phase, LogComplex};

/// Largest `log r` at which series evaluation is attempted.
pub const DEFAULT_LOG_R_CEILING: f64 = 700.0;
/// Largest coefficient index ever summed.
pub const DEFAULT_MAX_TERMS: u64 = 5_000_000;

/// Above this loss of significance (in nats) a closed form is used when the
/// family has one.
const CANCELLATION_LIMIT: f64 = 13.8;
/// Sums this far below the sum of absolute terms are rounding noise and
/// are reported as exact zeros.
const NOISE_FLOOR: f64 = 32.2;

#[inline]
pub fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    libm::lgamma(k as f64 + 1.0)
}

/// Builtin analytic families with closed-form coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `e^z`
    Exp,
    /// `cos(z^{1/2})`
    CosSqrt,
    /// `sum_{j>=1} z^{j^2} / (j^2)!`
    GapSquares,
    /// `sin(z^{1/2}) / z^{1/2} + z + a`
    Baker { a: f64 },
    /// `c z^n`
    Monomial { c: Complex64, n: u64 },
    /// `c`
    Constant { c: Complex64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesKind {
    Builtin(Family),
    /// Finite coefficient list indexed by `k`; `None` entries are zero.
    Explicit(Vec<Option<LogComplex>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    pub kind: SeriesKind,
    pub log_r_ceiling: f64,
    pub max_terms: u64,
}

impl CoefficientSeries {
    pub fn builtin(family: Family) -> Self {
        CoefficientSeries {
            kind: SeriesKind::Builtin(family),
            log_r_ceiling: DEFAULT_LOG_R_CEILING,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    pub fn exp() -> Self {
        Self::builtin(Family::Exp)
    }

    pub fn cos_sqrt() -> Self {
        Self::builtin(Family::CosSqrt)
    }

    pub fn gap_squares() -> Self {
        Self::builtin(Family::GapSquares)
    }

    pub fn baker(a: f64) -> Self {
        Self::builtin(Family::Baker { a })
    }

    pub fn monomial(c: Complex64, n: u64) -> Self {
        Self::builtin(Family::Monomial { c, n })
    }

    pub fn constant(c: Complex64) -> Self {
        Self::builtin(Family::Constant { c })
    }

    /// Polynomial from plain coefficients `a_0, a_1, ...`.
    pub fn polynomial(coeffs: &[Complex64]) -> Self {
        let list = coeffs
            .iter()
            .map(|&c| {
                if c.re == 0.0 && c.im == 0.0 {
                    None
                } else {
                    Some(LogComplex::from_complex(c))
                }
            })
            .collect();
        Self::explicit(list)
    }

    pub fn explicit(mut list: Vec<Option<LogComplex>>) -> Self {
        while matches!(list.last(), Some(None)) {
            list.pop();
        }
        CoefficientSeries {
            kind: SeriesKind::Explicit(list),
            log_r_ceiling: DEFAULT_LOG_R_CEILING,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    pub fn with_ceiling(mut self, log_r_ceiling: f64) -> Self {
        self.log_r_ceiling = log_r_ceiling;
        self
    }

    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms;
        self
    }

    /// Parse a function identifier such as `exp`, `baker(a=10)` or
    /// `monomial(c=1+2i,n=3)`. `csv:<path>` loads an explicit list.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("csv:") {
            return load_csv(path);
        }
        let (name, args) = match spec.find('(') {
            Some(i) => {
                let inner = spec[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("missing ')' in {spec:?}")))?;
                (&spec[..i], parse_args(inner)?)
            }
            None => (spec, Vec::new()),
        };
        let get = |key: &str| -> Result<&str> {
            args.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Parse(format!("{name}: missing argument {key:?}")))
        };
        let family = match name.trim() {
            "exp" => Family::Exp,
            "cos_sqrt" => Family::CosSqrt,
            "gap_squares" => Family::GapSquares,
            "baker" => {
                let a = match args.iter().find(|(k, _)| k == "a") {
                    Some((_, v)) => parse_real(v)?,
                    None => 10.0,
                };
                Family::Baker { a }
            }
            "monomial" => {
                let c = parse_complex(get("c")?)?;
                let n = get("n")?
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("monomial n: {e}")))?;
                Family::Monomial { c, n }
            }
            "constant" => Family::Constant {
                c: parse_complex(get("c")?)?,
            },
            other => return Err(Error::Parse(format!("unknown function {other:?}"))),
        };
        Ok(Self::builtin(family))
    }

    /// Canonical identifier; parses back to an equal series for builtins.
    pub fn name(&self) -> String {
        match &self.kind {
            SeriesKind::Builtin(f) => match f {
                Family::Exp => "exp".into(),
                Family::CosSqrt => "cos_sqrt".into(),
                Family::GapSquares => "gap_squares".into(),
                Family::Baker { a } => format!("baker(a={a})"),
                Family::Monomial { c, n } => format!("monomial(c={},n={n})", fmt_complex(*c)),
                Family::Constant { c } => format!("constant(c={})", fmt_complex(*c)),
            },
            SeriesKind::Explicit(list) => {
                format!("explicit(degree={})", list.len().saturating_sub(1))
            }
        }
    }

    pub fn is_transcendental(&self) -> bool {
        matches!(
            self.kind,
            SeriesKind::Builtin(
                Family::Exp | Family::CosSqrt | Family::GapSquares | Family::Baker { .. }
            )
        )
    }

    /// Index of the last nonzero coefficient for polynomials.
    pub fn degree(&self) -> Option<u64> {
        match &self.kind {
            SeriesKind::Builtin(Family::Monomial { c, n }) => {
                Some(if is_zero(*c) { 0 } else { *n })
            }
            SeriesKind::Builtin(Family::Constant { .. }) => Some(0),
            SeriesKind::Builtin(_) => None,
            SeriesKind::Explicit(list) => Some(list.len().saturating_sub(1) as u64),
        }
    }

    /// `a_k` in log form, `None` when `a_k = 0`.
    pub fn coeff_log(&self, k: u64) -> Option<LogComplex> {
        match &self.kind {
            SeriesKind::Explicit(list) => list.get(k as usize).copied().flatten(),
            SeriesKind::Builtin(f) => match f {
                Family::Exp => Some(LogComplex::new(-ln_factorial(k), 0.0)),
                Family::CosSqrt => Some(LogComplex::new(-ln_factorial(2 * k), sign_phase(k))),
                Family::GapSquares => {
                    let j = isqrt(k);
                    (k >= 1 && j * j == k).then(|| LogComplex::new(-ln_factorial(k), 0.0))
                }
                Family::Baker { a } => match k {
                    0 => nonzero(Complex64::new(1.0 + a, 0.0)),
                    1 => Some(LogComplex::new((5.0f64 / 6.0).ln(), 0.0)),
                    _ => Some(LogComplex::new(-ln_factorial(2 * k + 1), sign_phase(k))),
                },
                Family::Monomial { c, n } => (k == *n).then(|| nonzero(*c)).flatten(),
                Family::Constant { c } => (k == 0).then(|| nonzero(*c)).flatten(),
            },
        }
    }

    /// Smallest `j >= k` with `a_j != 0`.
    pub fn next_nonzero(&self, k: u64) -> Option<u64> {
        match &self.kind {
            SeriesKind::Builtin(Family::GapSquares) => {
                let mut j = isqrt(k).max(1);
                if j * j < k {
                    j += 1;
                }
                Some(j * j)
            }
            SeriesKind::Builtin(Family::Exp | Family::CosSqrt) => Some(k),
            SeriesKind::Builtin(Family::Baker { .. }) => {
                (k..).find(|&i| i >= 2 || self.coeff_log(i).is_some())
            }
            _ => {
                let deg = self.degree()?;
                (k..=deg).find(|&i| self.coeff_log(i).is_some())
            }
        }
    }

    /// Largest `j < k` with `a_j != 0`.
    pub fn prev_nonzero(&self, k: u64) -> Option<u64> {
        if k == 0 {
            return None;
        }
        match &self.kind {
            SeriesKind::Builtin(Family::GapSquares) => {
                let mut j = isqrt(k - 1);
                while j >= 1 {
                    if j * j < k {
                        return Some(j * j);
                    }
                    j -= 1;
                }
                None
            }
            SeriesKind::Builtin(Family::Exp | Family::CosSqrt) => Some(k - 1),
            _ => (0..k).rev().find(|&i| self.coeff_log(i).is_some()),
        }
    }

    fn term(&self, k: u64, log_r: f64) -> Option<f64> {
        let c = self.coeff_log(k)?;
        Some(if k == 0 {
            c.log_mag()
        } else {
            c.log_mag() + k as f64 * log_r
        })
    }

    /// Upper bound on `log sum_{k>n} |a_k| r^k`, or `None` when the ratio
    /// test cannot certify convergence from `n` at this radius.
    pub fn tail_log_bound(&self, log_r: f64, n: u64) -> Option<f64> {
        let family = match &self.kind {
            SeriesKind::Builtin(
                f @ (Family::Exp | Family::CosSqrt | Family::GapSquares | Family::Baker { .. }),
            ) => f,
            _ => {
                // polynomial: exact remaining sum
                let deg = self.degree().unwrap_or(0);
                let mut acc = f64::NEG_INFINITY;
                let mut k = n + 1;
                while k <= deg {
                    if let Some(t) = self.term(k, log_r) {
                        acc = logsumexp(acc, t);
                    }
                    k += 1;
                }
                return Some(acc);
            }
        };
        let (first_term, log_q) = match family {
            Family::Exp => {
                let k = n + 1;
                (self.term(k, log_r)?, log_r - ((n + 2) as f64).ln())
            }
            Family::CosSqrt => {
                let k = n + 1;
                let d = ((2 * n + 3) as f64).ln() + ((2 * n + 4) as f64).ln();
                (self.term(k, log_r)?, log_r - d)
            }
            Family::Baker { .. } => {
                if n == 0 {
                    let rest = self.tail_log_bound(log_r, 1)?;
                    return Some(logsumexp(
                        self.term(1, log_r).unwrap_or(f64::NEG_INFINITY),
                        rest,
                    ));
                }
                let d = ((2 * n + 4) as f64).ln() + ((2 * n + 5) as f64).ln();
                (self.term(n + 1, log_r)?, log_r - d)
            }
            Family::GapSquares => {
                let j0 = {
                    let mut j = isqrt(n) + 1;
                    while j * j <= n {
                        j += 1;
                    }
                    j
                };
                let k = j0 * j0;
                let lq = (2 * j0 + 1) as f64 * (log_r - ((k + 1) as f64).ln());
                (self.term(k, log_r)?, lq)
            }
            _ => unreachable!(),
        };
        if log_q >= 0.0 {
            return None;
        }
        Some(first_term - (-log_q.exp()).ln_1p())
    }

    pub fn check_radius(&self, log_r: f64) -> Result<()> {
        if !log_r.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "log r must be finite, got {log_r}"
            )));
        }
        if log_r > self.log_r_ceiling {
            return Err(Error::TruncationUnavailable {
                log_r,
                reason: format!("beyond exact-evaluation ceiling {}", self.log_r_ceiling),
            });
        }
        Ok(())
    }

    /// `(log mu(r), nu(r))`: maximum term and the largest index attaining it.
    pub fn max_term(&self, log_r: f64) -> Result<(f64, u64)> {
        self.check_radius(log_r)?;
        let mut k = match self.next_nonzero(0) {
            Some(k) => k,
            None => {
                return Err(Error::InvalidArgument(
                    "zero function has no maximum term".into(),
                ))
            }
        };
        let mut best = f64::NEG_INFINITY;
        let mut nu = 0;
        loop {
            if k > self.max_terms {
                return Err(Error::TruncationUnavailable {
                    log_r,
                    reason: format!("central index exceeds {} terms", self.max_terms),
                });
            }
            if let Some(t) = self.term(k, log_r) {
                let slack = 1e-13 * (1.0 + t.abs());
                if t > best + slack {
                    best = t;
                    nu = k;
                } else if t >= best - slack {
                    best = best.max(t);
                    nu = k;
                }
            }
            match self.tail_log_bound(log_r, k) {
                Some(tail) if tail < best - 1e-12 * (1.0 + best.abs()) => break,
                _ => {}
            }
            k = match self.next_nonzero(k + 1) {
                Some(next) => next,
                None => break,
            };
        }
        Ok((best, nu))
    }

    /// Smallest admissible truncation index `N >= nu(r)` whose certified tail
    /// is below `tol * mu(r)`.
    pub fn truncation_index(&self, log_r: f64, tol: f64) -> Result<u64> {
        let (log_mu, nu) = self.max_term(log_r)?;
        self.truncation_from(log_r, tol, log_mu, nu)
    }

    fn truncation_from(&self, log_r: f64, tol: f64, log_mu: f64, nu: u64) -> Result<u64> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "tol must lie in (0,1), got {tol}"
            )));
        }
        let target = log_mu + tol.ln();
        let mut n = nu;
        loop {
            if let Some(tail) = self.tail_log_bound(log_r, n) {
                if tail < target {
                    return Ok(n);
                }
            }
            n = match self.next_nonzero(n + 1) {
                Some(next) => next,
                None => return Ok(n),
            };
            if n > self.max_terms {
                return Err(Error::TruncationUnavailable {
                    log_r,
                    reason: format!("truncation index exceeds {} terms", self.max_terms),
                });
            }
        }
    }

    /// Closed-form value for builtin families, used when series summation
    /// loses too many digits to cancellation and by the dynamics module.
    pub fn closed_form(&self, z: Complex64) -> Option<LogComplex> {
        let SeriesKind::Builtin(f) = &self.kind else {
            return None;
        };
        match f {
            Family::Exp => Some(LogComplex::exp_of(z)),
            Family::CosSqrt => Some(cos_log(z.sqrt())),
            Family::Baker { a } => {
                let w = z.sqrt();
                let sinc = sinc_log(w);
                Some(sinc + LogComplex::from_complex(z + Complex64::new(*a, 0.0)))
            }
            Family::Monomial { c, n } => {
                if is_zero(*c) {
                    return Some(LogComplex::ZERO);
                }
                if *n == 0 {
                    return Some(LogComplex::from_complex(*c));
                }
                if z.re == 0.0 && z.im == 0.0 {
                    return Some(LogComplex::ZERO);
                }
                let (r, th) = z.to_polar();
                Some(
                    LogComplex::from_complex(*c)
                        * LogComplex::new(*n as f64 * r.ln(), *n as f64 * th),
                )
            }
            Family::Constant { c } => Some(LogComplex::from_complex(*c)),
            Family::GapSquares => None,
        }
    }

    /// Value at an arbitrary point: closed form when available, otherwise
    /// the truncated series.
    pub fn eval_point(&self, z: Complex64, tol: f64) -> Result<LogComplex> {
        if let Some(v) = self.closed_form(z) {
            return Ok(v);
        }
        if z.re == 0.0 && z.im == 0.0 {
            return Ok(self.coeff_log(0).unwrap_or(LogComplex::ZERO));
        }
        let (r, th) = z.to_polar();
        eval_log(self, r.ln(), th, tol)
    }
}

impl fmt::Display for CoefficientSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Truncated series on one circle, precomputed relative to the maximum term
/// so each angle costs one pass over the significant terms.
#[derive(Debug, Clone)]
pub struct CircleEvaluator<'a> {
    series: &'a CoefficientSeries,
    pub log_r: f64,
    pub log_mu: f64,
    pub nu: u64,
    pub truncation: u64,
    // (k, log term - log mu, phase of a_k)
    terms: Vec<(f64, f64, f64)>,
    log_abs_sum: f64,
}

impl<'a> CircleEvaluator<'a> {
    pub fn new(series: &'a CoefficientSeries, log_r: f64, tol: f64) -> Result<Self> {
        let (log_mu, nu) = series.max_term(log_r)?;
        let truncation = series.truncation_from(log_r, tol, log_mu, nu)?;
        // dropped terms together stay below tol * 1e-3 * mu
        let cutoff = log_mu + (tol * 1e-3).ln() - ((truncation + 1) as f64).ln();
        let mut terms = Vec::new();
        let push = |k: u64, terms: &mut Vec<(f64, f64, f64)>| -> Option<f64> {
            let c = series.coeff_log(k)?;
            let t = if k == 0 {
                c.log_mag()
            } else {
                c.log_mag() + k as f64 * log_r
            };
            if t >= cutoff {
                terms.push((k as f64, t - log_mu, c.phase));
            }
            Some(t)
        };
        let unimodal = matches!(
            series.kind,
            SeriesKind::Builtin(
                Family::Exp | Family::CosSqrt | Family::GapSquares | Family::Baker { .. }
            )
        );
        if unimodal {
            let mut k = Some(nu);
            while let Some(i) = k {
                match push(i, &mut terms) {
                    Some(t) if t < cutoff => break,
                    _ => {}
                }
                k = series.prev_nonzero(i);
            }
            let mut k = series.next_nonzero(nu + 1);
            while let Some(i) = k {
                if i > truncation {
                    break;
                }
                match push(i, &mut terms) {
                    Some(t) if t < cutoff => break,
                    _ => {}
                }
                k = series.next_nonzero(i + 1);
            }
            if matches!(series.kind, SeriesKind::Builtin(Family::Baker { .. })) {
                for i in 0..2u64 {
                    if !terms.iter().any(|&(k, _, _)| k == i as f64) {
                        push(i, &mut terms);
                    }
                }
            }
            terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        } else {
            let mut k = series.next_nonzero(0);
            while let Some(i) = k {
                if i > truncation {
                    break;
                }
                push(i, &mut terms);
                k = series.next_nonzero(i + 1);
            }
        }
        let log_abs_sum = terms
            .iter()
            .fold(f64::NEG_INFINITY, |acc, &(_, rel, _)| logsumexp(acc, rel))
            + log_mu;
        Ok(CircleEvaluator {
            series,
            log_r,
            log_mu,
            nu,
            truncation,
            terms,
            log_abs_sum,
        })
    }

    pub fn series_value(&self, theta: f64) -> LogComplex {
        if let [(k, rel, phase)] = self.terms[..] {
            return LogComplex::new(self.log_mu + rel, phase + k * theta);
        }
        let mut s = Complex64::new(0.0, 0.0);
        for &(k, rel, phase) in &self.terms {
            let ang = phase + k * theta;
            let m = rel.exp();
            let (sn, cs) = ang.sin_cos();
            s.re += m * cs;
            s.im += m * sn;
        }
        if s.re == 0.0 && s.im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mu + s.norm().ln(), s.arg())
    }

    /// `f(r e^{i theta})`; falls back to the closed form under heavy
    /// cancellation.
    pub fn eval(&self, theta: f64) -> LogComplex {
        let v = self.series_value(theta);
        let lost = self.log_abs_sum - v.log_mag();
        if lost > CANCELLATION_LIMIT {
            let z = Complex64::from_polar(self.log_r.exp(), wrap_phase(theta));
            if let Some(exact) = self.series.closed_form(z) {
                return exact;
            }
            if lost > NOISE_FLOOR {
                return LogComplex::ZERO;
            }
        }
        v
    }

    pub fn eval_log_mag(&self, theta: f64) -> f64 {
        self.eval(theta).log_mag()
    }

    pub fn significant_terms(&self) -> usize {
        self.terms.len()
    }
}

/// `f(r e^{i theta})` in log form, summed to the certified truncation index.
pub fn eval_log(f: &CoefficientSeries, log_r: f64, theta: f64, tol: f64) -> Result<LogComplex> {
    Ok(CircleEvaluator::new(f, log_r, tol)?.eval(theta))
}

pub fn coeff_log(f: &CoefficientSeries, k: u64) -> Option<LogComplex> {
    f.coeff_log(k)
}

pub fn truncation_index(f: &CoefficientSeries, log_r: f64, tol: f64) -> Result<u64> {
    f.truncation_index(log_r, tol)
}

/// Load an explicit coefficient list. Accepted headers:
/// `k,re_ak,im_ak` or `k,log_mag,phase`.
pub fn load_csv(path: impl AsRef<Path>) -> Result<CoefficientSeries> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<CoefficientSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect::<Vec<_>>();
    let polar = match headers
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .as_slice()
    {
        ["k", "re_ak", "im_ak"] => false,
        ["k", "log_mag", "phase"] => true,
        other => {
            return Err(Error::Parse(format!(
                "unexpected coefficient header {other:?}"
            )))
        }
    };
    let mut list: Vec<Option<LogComplex>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::Parse("short row".into()))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(e.to_string()))
        };
        let k: usize = rec
            .get(0)
            .unwrap_or("")
            .parse()
            .map_err(|e| Error::Parse(format!("coefficient index: {e}")))?;
        let value = if polar {
            let lm = field(1)?;
            if lm == f64::NEG_INFINITY {
                None
            } else {
                Some(LogComplex::new(lm, field(2)?))
            }
        } else {
            nonzero(Complex64::new(field(1)?, field(2)?))
        };
        if list.len() <= k {
            list.resize(k + 1, None);
        }
        list[k] = value;
    }
    if list.iter().all(Option::is_none) {
        return Err(Error::Parse("coefficient list is identically zero".into()));
    }
    Ok(CoefficientSeries::explicit(list))
}

fn parse_args(inner: &str) -> Result<Vec<(String, String)>> {
    inner
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}")))?;
            Ok((k.trim().to_owned(), v.trim().to_owned()))
        })
        .collect()
}

fn parse_real(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Complex literals: `3`, `-1.5`, `2i`, `1+2i`, `1-0.5i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad complex literal {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(&s)?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let (re, im) = match split {
        Some(i) => (parse_real(&body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => parse_real(v).map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

pub fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}{}i", c.re, c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

fn is_zero(c: Complex64) -> bool {
    c.re == 0.0 && c.im == 0.0
}

fn nonzero(c: Complex64) -> Option<LogComplex> {
    (!is_zero(c)).then(|| LogComplex::from_complex(c))
}

fn sign_phase(k: u64) -> f64 {
    if k.is_multiple_of(2) {
        0.0
    } else {
        PI
    }
}

fn isqrt(k: u64) -> u64 {
    let mut j = (k as f64).sqrt() as u64;
    while j * j > k {
        j -= 1;
    }
    while (j + 1) * (j + 1) <= k {
        j += 1;
    }
    j
}

/// `cos w` without overflow.
fn cos_log(w: Complex64) -> LogComplex {
    if w.im.abs() < 300.0 {
        return LogComplex::from_complex(w.cos());
    }
    let i = Complex64::new(0.0, 1.0);
    let half = LogComplex::new(-std::f64::consts::LN_2, 0.0);
    (LogComplex::exp_of(i * w) + LogComplex::exp_of(-i * w)) * half
}

/// `sin(w) / w` without overflow; 1 at the origin.
fn sinc_log(w: Complex64) -> LogComplex {
    if w.norm() < 1e-6 {
        let w2 = w * w;
        return LogComplex::from_complex(Complex64::new(1.0, 0.0) - w2 / 6.0 + w2 * w2 / 120.0);
    }
    if w.im.abs() < 300.0 {
        return LogComplex::from_complex(w.sin() / w);
    }
    let i = Complex64::new(0.0, 1.0);
    let sin = (LogComplex::exp_of(i * w) + LogComplex::exp_of(-i * w).neg())
        * LogComplex::new(-std::f64::consts::LN_2, -PI / 2.0);
    sin * LogComplex::from_complex(w).inv()
}
