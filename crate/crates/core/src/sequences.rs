//! The `R_n`, `S_n` sequences and numerical checks of the inequalities used
//! to control them: the Wiman-Valiron bounds, the `k_n <= a_n` construction,
//! the `M(log ...) >= (log ...)^m` lemma, the `L(sigma) = M(r)` radius, the
//! `M(r^{2 alpha}) >= M(r)^{2 alpha}` step and the three nested circles.
//!
//! `R_n` leaves `f64` range after a step or two, so sequence terms are
//! [`LevelLog`] values and the growth curve may be a fitted model.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{
    estimate_order, le_slack, max_modulus, max_term, min_modulus, GridSpec, GrowthExponents,
    GrowthProfile, ModulusOptions, DEFAULT_TAIL_WINDOW,
};
use crate::lognum::LevelLog;
use crate::par;
use crate::report::{extended_f64, fmt17};
use crate::series::CoefficientSeries;

/// Largest `|log log M - model|` accepted on the fit window.
pub const DEFAULT_OVERLAP_TOL: f64 = 0.05;
pub const MAX_SEQUENCE_LEN: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMode {
    ExactSeries,
    FittedModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveSource {
    Series,
    ClosedForm,
    LeastSquares,
}

/// `r -> log M(r)` either from the series or from `log log M = log sigma + rho log r`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthCurve {
    pub function: String,
    pub mode: CurveMode,
    pub source: CurveSource,
    pub log_sigma_hat: Option<f64>,
    pub rho_hat: Option<f64>,
    #[serde(with = "extended_f64")]
    pub valid_from: f64,
    #[serde(with = "extended_f64")]
    pub valid_to: f64,
    pub overlap_disagreement: Option<f64>,
    #[serde(skip)]
    series: Option<CoefficientSeries>,
    #[serde(skip)]
    modulus: ModulusOptions,
}

impl GrowthCurve {
    pub fn power_model(log_sigma: f64, rho: f64) -> Self {
        GrowthCurve {
            function: format!("model(log_sigma={log_sigma},rho={rho})"),
            mode: CurveMode::FittedModel,
            source: CurveSource::ClosedForm,
            log_sigma_hat: Some(log_sigma),
            rho_hat: Some(rho),
            valid_from: f64::NEG_INFINITY,
            valid_to: f64::INFINITY,
            overlap_disagreement: None,
            series: None,
            modulus: ModulusOptions::default(),
        }
    }

    /// `log M(r) = r`.
    pub fn exp_closed_form() -> Self {
        GrowthCurve {
            function: "exp".into(),
            series: Some(CoefficientSeries::exp()),
            ..Self::power_model(0.0, 1.0)
        }
    }

    pub fn exact(f: &CoefficientSeries, modulus: &ModulusOptions) -> Self {
        GrowthCurve {
            function: f.name(),
            mode: CurveMode::ExactSeries,
            source: CurveSource::Series,
            log_sigma_hat: None,
            rho_hat: None,
            valid_from: f64::NEG_INFINITY,
            valid_to: f.log_r_ceiling,
            overlap_disagreement: None,
            series: Some(f.clone()),
            modulus: *modulus,
        }
    }

    pub fn series(&self) -> Option<&CoefficientSeries> {
        self.series.as_ref()
    }

    pub fn modulus_options(&self) -> &ModulusOptions {
        &self.modulus
    }

    /// `log M(r)` from `log r`.
    pub fn log_max_modulus(&self, log_r: LevelLog) -> Result<LevelLog> {
        match self.mode {
            CurveMode::ExactSeries => {
                let f = self
                    .series
                    .as_ref()
                    .expect("exact curve carries its series");
                if !log_r.is_finite_f64() || log_r.value > self.valid_to {
                    return Err(Error::TruncationUnavailable {
                        log_r: log_r.to_f64(),
                        reason: format!("exact curve valid up to log r = {}", self.valid_to),
                    });
                }
                max_modulus(f, log_r.value, &self.modulus).map(LevelLog::from_f64)
            }
            CurveMode::FittedModel => {
                let (ls, rho) = (
                    self.log_sigma_hat.unwrap_or(0.0),
                    self.rho_hat.unwrap_or(1.0),
                );
                Ok(log_r.mul_f64(rho).add_f64(ls).exp())
            }
        }
    }
}

/// Least-squares `log log M = log sigma + rho log r` on the tail window of
/// `profile`, rejected for order 0 or when the model strays from the data.
pub fn fit_growth_curve(
    f: &CoefficientSeries,
    profile: &GrowthProfile,
    overlap_tol: f64,
) -> Result<GrowthCurve> {
    let order = estimate_order(profile, DEFAULT_TAIL_WINDOW)?;
    if order.polynomial_growth || order.rho <= 0.0 {
        return Err(Error::FitRejected(format!(
            "order {} admits no power model",
            order.rho
        )));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = profile
        .valid_samples()
        .filter(|s| s.log_r >= order.window.0 && s.log_r <= order.window.1 && s.log_m > 0.0)
        .map(|s| (s.log_r, s.log_m.ln()))
        .unzip();
    let fit = crate::growth::fit_line(&x, &y)
        .ok_or_else(|| Error::FitRejected("degenerate fit window".into()))?;
    if fit.slope <= 0.0 {
        return Err(Error::FitRejected(format!(
            "fitted order {} is not positive",
            fit.slope
        )));
    }
    if fit.max_residual > overlap_tol {
        return Err(Error::FitRejected(format!(
            "model disagrees with series by {} in log log M (tolerance {overlap_tol})",
            fit.max_residual
        )));
    }
    Ok(GrowthCurve {
        function: f.name(),
        mode: CurveMode::FittedModel,
        source: CurveSource::LeastSquares,
        log_sigma_hat: Some(fit.intercept),
        rho_hat: Some(fit.slope),
        valid_from: order.window.0,
        valid_to: f64::INFINITY,
        overlap_disagreement: Some(fit.max_residual),
        series: Some(f.clone()),
        modulus: ModulusOptions::default(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `R_{n+1} = M(R_n^{1/(2 alpha)})`.
    HalfAlpha,
    /// `R_{n+1} = M(R_n^{1/(4 alpha)})`.
    QuarterAlpha,
}

impl Variant {
    pub fn divisor(self, alpha: f64) -> f64 {
        match self {
            Variant::HalfAlpha => 2.0 * alpha,
            Variant::QuarterAlpha => 4.0 * alpha,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "half-alpha" | "half" => Ok(Variant::HalfAlpha),
            "quarter-alpha" | "quarter" => Ok(Variant::QuarterAlpha),
            _ => Err(Error::Parse(format!("unknown variant '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequencePair {
    pub function: String,
    pub curve_mode: CurveMode,
    pub alpha: f64,
    pub variant: Variant,
    /// `log R_n` for `n = 1, 2, ...`.
    pub log_r: Vec<LevelLog>,
    pub log_s: Vec<LevelLog>,
    /// `log S_n <= log R_n / (2 alpha)`.
    pub property2_holds: Vec<bool>,
    /// `log 2 + log S_n <= log R_n / (4 alpha)`.
    pub general_holds: Vec<bool>,
    /// First `n` from which the variant's property holds to the end.
    pub n1: Option<usize>,
    pub verified: bool,
    pub notices: Vec<String>,
}

impl SequencePair {
    pub fn len(&self) -> usize {
        self.log_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_r.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "sequences for {} ({:?}, alpha = {}, {:?})",
            self.function, self.curve_mode, self.alpha, self.variant
        );
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "  n={:<2} log R = {}  log S = {}  S<=R^(1/2a): {}  2S<=R^(1/4a): {}",
                i + 1,
                self.log_r[i],
                self.log_s[i],
                pass(self.property2_holds[i]),
                pass(self.general_holds[i])
            );
        }
        let _ = writeln!(out, "  n1 = {:?}, verified = {}", self.n1, self.verified);
        for n in &self.notices {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn le(a: LevelLog, b: LevelLog) -> bool {
    matches!(
        a.partial_cmp(&b),
        Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
    )
}

/// Index where the final run of `true` starts, if the last entry is `true`.
fn tail_start(flags: &[bool]) -> Option<usize> {
    if !*flags.last()? {
        return None;
    }
    let mut i = flags.len();
    while i > 0 && flags[i - 1] {
        i -= 1;
    }
    Some(i)
}

pub fn build_sequences(
    curve: &GrowthCurve,
    alpha: f64,
    log_r1: f64,
    log_s1: f64,
    n_max: usize,
    variant: Variant,
) -> Result<SequencePair> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha must exceed 1, got {alpha}"
        )));
    }
    if !(log_r1 > 0.0 && log_s1 > 0.0) {
        return Err(Error::InvalidArgument(
            "seeds need log R1 > 0 and log S1 > 0".into(),
        ));
    }
    if !(1..=MAX_SEQUENCE_LEN).contains(&n_max) {
        return Err(Error::InvalidArgument(format!(
            "n_max must lie in 1..={MAX_SEQUENCE_LEN}"
        )));
    }
    let d = variant.divisor(alpha);
    let mut log_r = vec![LevelLog::from_f64(log_r1)];
    let mut log_s = vec![LevelLog::from_f64(log_s1)];
    let mut notices = Vec::new();
    while log_r.len() < n_max {
        let n = log_r.len();
        let step = curve
            .log_max_modulus(log_r[n - 1].mul_f64(1.0 / d))
            .and_then(|r| Ok((r, curve.log_max_modulus(log_s[n - 1])?)));
        let (next_r, next_s) = match step {
            Ok(v) => v,
            Err(Error::TruncationUnavailable { log_r: at, .. })
                if curve.mode == CurveMode::ExactSeries =>
            {
                notices.push(format!(
                    "exact curve leaves its range at n = {} (log r = {}); sequence stops",
                    n + 1,
                    fmt17(at)
                ));
                break;
            }
            Err(e) => return Err(e),
        };
        if n == 1 && !le(log_r[0], next_r) {
            return Err(Error::SeedTooSmall {
                log_r1,
                log_r2: next_r.to_f64(),
            });
        }
        log_r.push(next_r);
        log_s.push(next_s);
    }
    let property2_holds: Vec<bool> = log_r
        .iter()
        .zip(&log_s)
        .map(|(r, s)| le(*s, r.mul_f64(1.0 / (2.0 * alpha))))
        .collect();
    let general_holds: Vec<bool> = log_r
        .iter()
        .zip(&log_s)
        .map(|(r, s)| le(s.add_f64(LN_2), r.mul_f64(1.0 / (4.0 * alpha))))
        .collect();
    let flags = match variant {
        Variant::HalfAlpha => &property2_holds,
        Variant::QuarterAlpha => &general_holds,
    };
    let n1 = tail_start(flags).map(|i| i + 1);
    if curve.mode == CurveMode::FittedModel && curve.source == CurveSource::LeastSquares {
        notices.push("terms beyond the fit window are model extrapolations".into());
    }
    Ok(SequencePair {
        function: curve.function.clone(),
        curve_mode: curve.mode,
        alpha,
        variant,
        log_r,
        log_s,
        property2_holds,
        general_holds,
        verified: n1.is_some(),
        n1,
        notices,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WvRow {
    pub log_r: f64,
    pub log_m: f64,
    pub log_mu: f64,
    pub nu: u64,
    pub nu_2r: u64,
    /// `log 2 + log M(r)` against `log K'' + nu(2r) log 2r`.
    pub eq1_lhs: f64,
    pub eq1_rhs: f64,
    pub eq1_holds: bool,
    /// `log mu(r) + nu(r) log r` against `log M(r^2)`.
    pub eq2_lhs: f64,
    pub eq2_rhs: f64,
    pub eq2_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WvConstants {
    pub k: f64,
    /// `log s` with `K = log mu(s)`; absent when no grid radius reaches 2.
    pub k_witness_log_s: Option<f64>,
    /// `log K'' = 2 log 2 + K`.
    pub log_k2: f64,
    pub s0: Option<f64>,
    pub s1: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WvReport {
    pub function: String,
    pub grid: GridSpec,
    pub constants: WvConstants,
    pub rows: Vec<WvRow>,
}

fn largest_violation<'a>(rows: impl Iterator<Item = (f64, bool)> + 'a) -> f64 {
    rows.filter(|r| !r.1)
        .map(|r| r.0)
        .fold(f64::NEG_INFINITY, f64::max)
}

impl WvReport {
    /// `NotSatisfiedOnGrid` unless both thresholds were found.
    pub fn require(&self) -> Result<&Self> {
        if self.constants.s0.is_some() && self.constants.s1.is_some() {
            return Ok(self);
        }
        Err(Error::NotSatisfiedOnGrid {
            largest_violation: largest_violation(
                self.rows
                    .iter()
                    .map(|r| (r.log_r, r.eq1_holds && r.eq2_holds)),
            ),
        })
    }

    pub fn to_text(&self) -> String {
        let c = &self.constants;
        let mut out = format!(
            "Wiman-Valiron bounds for {} on {}\n  K = {} (log s = {:?}), log K'' = {}, s0 = {:?}, s1 = {:?}\n",
            self.function, self.grid, c.k, c.k_witness_log_s, c.log_k2, c.s0, c.s1
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "  log r = {:.6}  2M(r) <= K''(2r)^nu(2r): {}  mu(r) r^nu(r) <= M(r^2): {}",
                r.log_r,
                pass(r.eq1_holds),
                pass(r.eq2_holds)
            );
        }
        out
    }
}

pub fn verify_wiman_valiron(
    f: &CoefficientSeries,
    grid: &GridSpec,
    opts: &ModulusOptions,
) -> Result<WvReport> {
    grid.validate()?;
    if 2.0 * grid.log_r_max > f.log_r_ceiling || grid.log_r_max + LN_2 > f.log_r_ceiling {
        return Err(Error::InvalidArgument(format!(
            "r^2 at log r = {} leaves the exact-evaluation ceiling",
            grid.log_r_max
        )));
    }
    let radii = grid.log_radii();
    let raw = par::map(&radii, |&lr| -> Result<(f64, f64, u64, u64, f64)> {
        let log_m = max_modulus(f, lr, opts)?;
        let (log_mu, nu) = max_term(f, lr)?;
        let (_, nu_2r) = max_term(f, lr + LN_2)?;
        let log_m_sq = max_modulus(f, 2.0 * lr, opts)?;
        Ok((log_m, log_mu, nu, nu_2r, log_m_sq))
    });
    let raw: Vec<_> = raw.into_iter().collect::<Result<_>>()?;

    let eq1 = |k: f64, lr: f64, log_m: f64, nu_2r: u64| {
        let lhs = LN_2 + log_m;
        let rhs = 2.0 * LN_2 + k + nu_2r as f64 * (lr + LN_2);
        (lhs, rhs, le_slack(lhs, rhs))
    };
    let mut candidates: Vec<(f64, f64)> = radii
        .iter()
        .zip(&raw)
        .filter(|(_, r)| r.1 >= 2.0)
        .map(|(lr, r)| (r.1, *lr))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.dedup_by(|a, b| a.0 == b.0);
    let s0_for = |k: f64| {
        let flags: Vec<bool> = radii
            .iter()
            .zip(&raw)
            .map(|(lr, r)| eq1(k, *lr, r.0, r.3).2)
            .collect();
        tail_start(&flags).map(|i| radii[i])
    };
    let (k, witness) = candidates
        .iter()
        .find(|(k, _)| s0_for(*k).is_some())
        .or(candidates.last())
        .map_or((2.0, None), |(k, s)| (*k, Some(*s)));

    let rows: Vec<WvRow> = radii
        .iter()
        .zip(&raw)
        .map(|(&lr, &(log_m, log_mu, nu, nu_2r, log_m_sq))| {
            let (eq1_lhs, eq1_rhs, eq1_holds) = eq1(k, lr, log_m, nu_2r);
            let eq2_lhs = log_mu + nu as f64 * lr;
            WvRow {
                log_r: lr,
                log_m,
                log_mu,
                nu,
                nu_2r,
                eq1_lhs,
                eq1_rhs,
                eq1_holds,
                eq2_lhs,
                eq2_rhs: log_m_sq,
                eq2_holds: le_slack(eq2_lhs, log_m_sq),
            }
        })
        .collect();
    let eq1_flags: Vec<bool> = rows.iter().map(|r| r.eq1_holds).collect();
    let eq2_flags: Vec<bool> = rows.iter().map(|r| r.eq2_holds).collect();
    Ok(WvReport {
        function: f.name(),
        grid: *grid,
        constants: WvConstants {
            k,
            k_witness_log_s: witness,
            log_k2: 2.0 * LN_2 + k,
            s0: tail_start(&eq1_flags).map(|i| radii[i]),
            s1: tail_start(&eq2_flags).map(|i| radii[i]),
        },
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedCheck {
    pub log_mu: f64,
    pub log_k2: f64,
    pub holds: bool,
}

/// `mu(R_1^{1/(4 alpha)}) >= K''`.
pub fn check_seed_condition(
    f: &CoefficientSeries,
    constants: &WvConstants,
    log_r1: f64,
    alpha: f64,
) -> Result<SeedCheck> {
    let (log_mu, _) = max_term(f, log_r1 / (4.0 * alpha))?;
    Ok(SeedCheck {
        log_mu,
        log_k2: constants.log_k2,
        holds: log_mu >= constants.log_k2,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Record {
    pub n: usize,
    pub log_s: f64,
    pub l_n: f64,
    pub k_n: f64,
    #[serde(with = "extended_f64")]
    pub a_n: f64,
    pub b_n: f64,
    /// `log (8 S_n)^{2 k_n}`.
    pub log_radius_k: f64,
    pub nu_at_radius_k: u64,
    pub nu_at_b: u64,
    /// `nu` changes within `1e-9` of `log b` in `log r`.
    pub near_jump: bool,
    pub k_le_a: bool,
    pub below_target: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub function: String,
    pub alpha: f64,
    pub b_target: f64,
    pub records: Vec<Lemma1Record>,
    pub notices: Vec<String>,
}

impl Lemma1Report {
    pub fn all_k_le_a(&self) -> bool {
        self.records.iter().all(|r| r.k_le_a)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "k_n <= a_n construction for {} (b = {})\n",
            self.function, self.b_target
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "  n={} l_n = {:.6e} k_n = {:.6e} a_n = {:.6e} k<=a: {} (8S)^(2k)<=b: {}{}",
                r.n,
                r.l_n,
                r.k_n,
                r.a_n,
                pass(r.k_le_a),
                pass(r.below_target),
                if r.near_jump {
                    " [near a jump of nu]"
                } else {
                    ""
                }
            );
        }
        for n in &self.notices {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn lemma1_record(
    f: &CoefficientSeries,
    n: usize,
    log_rq: f64,
    log_s: f64,
    ln_b: f64,
    nu_b: u64,
    near_jump: bool,
    opts: &ModulusOptions,
) -> Result<Lemma1Record> {
    let log_8s = 8f64.ln() + log_s;
    let log_4s2 = 4f64.ln() + 2.0 * log_s;
    let l_n = ln_b / (2.0 * log_8s);
    let (_, nu_rq) = max_term(f, log_rq)?;
    let log_m4 = max_modulus(f, log_4s2, opts)?;
    let b_n = nu_rq as f64 / (log_m4 * log_m4);
    let ratio = |nu: u64| {
        if nu == 0 {
            f64::INFINITY
        } else {
            b_n / nu as f64
        }
    };
    // nu is nondecreasing, so nu at (8 S_n)^{2 k_n} <= b never exceeds nu(b)
    let (k_n, log_radius_k) = if ratio(nu_b) >= l_n {
        (l_n, ln_b)
    } else {
        let k = ratio(nu_b);
        (k, 2.0 * k * log_8s)
    };
    let (_, nu_k) = max_term(f, log_radius_k)?;
    let a_n = ratio(nu_k);
    Ok(Lemma1Record {
        n,
        log_s,
        l_n,
        k_n,
        a_n,
        b_n,
        log_radius_k,
        nu_at_radius_k: nu_k,
        nu_at_b: nu_b,
        near_jump,
        k_le_a: k_n <= a_n,
        below_target: log_radius_k <= ln_b,
    })
}

pub fn lemma1_construct(
    f: &CoefficientSeries,
    pair: &SequencePair,
    b_target: f64,
    opts: &ModulusOptions,
) -> Result<Lemma1Report> {
    if pair.variant != Variant::QuarterAlpha {
        return Err(Error::InvalidArgument(
            "needs the quarter-alpha sequences".into(),
        ));
    }
    if !(b_target > 1.0 && b_target.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "b_target must exceed 1, got {b_target}"
        )));
    }
    let ln_b = b_target.ln();
    let (_, nu_b) = max_term(f, ln_b)?;
    let near_jump = max_term(f, ln_b - 1e-9)?.1 != max_term(f, ln_b + 1e-9)?.1;
    let quarter = 1.0 / (4.0 * pair.alpha);
    let mut records = Vec::new();
    let mut notices = Vec::new();
    for (i, (lr, ls)) in pair.log_r.iter().zip(&pair.log_s).enumerate() {
        let n = i + 1;
        let log_rq = lr.mul_f64(quarter);
        if !(ls.is_finite_f64() && log_rq.is_finite_f64()) {
            notices.push(format!("n = {n} skipped: radii beyond f64 range"));
            continue;
        }
        match lemma1_record(f, n, log_rq.value, ls.value, ln_b, nu_b, near_jump, opts) {
            Ok(r) => records.push(r),
            Err(e @ Error::TruncationUnavailable { .. }) => {
                notices.push(format!("n = {n} skipped: {e}"))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Lemma1Report {
        function: f.name(),
        alpha: pair.alpha,
        b_target,
        records,
        notices,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexedRow {
    pub n: usize,
    pub lhs: f64,
    #[serde(with = "extended_f64")]
    pub rhs: f64,
    pub holds: bool,
}

/// `nu(2 S_n) <= a_n nu((8 S_n)^{2 k_n}) log (8 S_n)^{2 k_n} / (4 alpha)` per record.
#[derive(Debug, Clone, Serialize)]
pub struct ConclusionReport {
    pub function: String,
    pub rows: Vec<IndexedRow>,
    pub n1: Option<usize>,
}

impl ConclusionReport {
    pub fn require(&self) -> Result<&Self> {
        match self.n1 {
            Some(_) => Ok(self),
            None => Err(Error::NotSatisfiedOnGrid {
                largest_violation: self
                    .rows
                    .iter()
                    .filter(|r| !r.holds)
                    .map(|r| r.n as f64)
                    .fold(f64::NAN, f64::max),
            }),
        }
    }
}

pub fn verify_conclusion_ineq(
    f: &CoefficientSeries,
    report: &Lemma1Report,
) -> Result<ConclusionReport> {
    let mut rows = Vec::new();
    for r in &report.records {
        let (_, nu_2s) = max_term(f, LN_2 + r.log_s)?;
        let a_nu = if r.nu_at_radius_k == 0 {
            r.b_n
        } else {
            r.a_n * r.nu_at_radius_k as f64
        };
        let rhs = a_nu * r.log_radius_k / (4.0 * report.alpha);
        rows.push(IndexedRow {
            n: r.n,
            lhs: nu_2s as f64,
            rhs,
            holds: le_slack(nu_2s as f64, rhs),
        });
    }
    let flags: Vec<bool> = rows.iter().map(|r| r.holds).collect();
    Ok(ConclusionReport {
        function: report.function.clone(),
        n1: tail_start(&flags).map(|i| rows[i].n),
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusRow {
    pub log_r: f64,
    #[serde(with = "extended_f64")]
    pub lhs: f64,
    #[serde(with = "extended_f64")]
    pub rhs: f64,
    pub holds: bool,
}

/// Grid table for an inequality expected from some radius on.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusReport {
    pub function: String,
    pub inequality: String,
    pub grid: GridSpec,
    pub rows: Vec<RadiusRow>,
    pub first_passing_log_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RadiusReport {
    fn new(f: &CoefficientSeries, inequality: &str, grid: &GridSpec, rows: Vec<RadiusRow>) -> Self {
        let flags: Vec<bool> = rows.iter().map(|r| r.holds).collect();
        RadiusReport {
            function: f.name(),
            inequality: inequality.into(),
            grid: *grid,
            first_passing_log_r: tail_start(&flags).map(|i| rows[i].log_r),
            rows,
            note: None,
        }
    }

    pub fn first_passing_radius(&self) -> Option<f64> {
        self.first_passing_log_r.map(f64::exp)
    }

    pub fn require(&self) -> Result<&Self> {
        match self.first_passing_log_r {
            Some(_) => Ok(self),
            None => Err(Error::NotSatisfiedOnGrid {
                largest_violation: largest_violation(self.rows.iter().map(|r| (r.log_r, r.holds))),
            }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} for {} on {}\n",
            self.inequality, self.function, self.grid
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "  log r = {:.6}  {} vs {}  {}",
                r.log_r,
                fmt17(r.lhs),
                fmt17(r.rhs),
                pass(r.holds)
            );
        }
        let _ = writeln!(out, "  holds from log r = {:?}", self.first_passing_log_r);
        if let Some(n) = &self.note {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

/// `M(X) >= ((1/(2m)) M(rho)^{1/(2m)} log M(rho))^m` with `rho = r^{1/(2m)}`
/// and `X = (1/(2m)) r^{1/(2m)} log r`, compared in log form.
pub fn verify_lemma2(
    f: &CoefficientSeries,
    m: f64,
    grid: &GridSpec,
    opts: &ModulusOptions,
) -> Result<RadiusReport> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::InvalidArgument(format!("m must exceed 1, got {m}")));
    }
    grid.validate()?;
    let inv = 1.0 / (2.0 * m);
    let rows = par::map(&grid.log_radii(), |&lr| -> Result<RadiusRow> {
        if lr <= 0.0 {
            return Ok(RadiusRow {
                log_r: lr,
                lhs: f64::NAN,
                rhs: f64::NAN,
                holds: false,
            });
        }
        let log_x = -(2.0 * m).ln() + inv * lr + lr.ln();
        let lhs = max_modulus(f, log_x, opts)?;
        let log_m_rho = max_modulus(f, inv * lr, opts)?;
        let rhs = if log_m_rho > 0.0 {
            m * (-(2.0 * m).ln() + inv * log_m_rho + log_m_rho.ln())
        } else {
            f64::NAN
        };
        Ok(RadiusRow {
            log_r: lr,
            lhs,
            rhs,
            holds: rhs.is_finite() && le_slack(rhs, lhs),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(RadiusReport::new(
        f,
        &format!("M(log r^((1/2m) r^(1/2m))) >= (log M(r^(1/2m))^((1/2m) M(r^(1/2m))^(1/2m)))^m, m = {m}"),
        grid,
        rows,
    ))
}

/// `M(r^{2 alpha}) >= M(r)^{2 alpha}`.
pub fn verify_step2ii(
    f: &CoefficientSeries,
    alpha: f64,
    grid: &GridSpec,
    opts: &ModulusOptions,
) -> Result<RadiusReport> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha must exceed 1, got {alpha}"
        )));
    }
    grid.validate()?;
    let c = 2.0 * alpha;
    let rows = par::map(&grid.log_radii(), |&lr| -> Result<RadiusRow> {
        let lhs = max_modulus(f, c * lr, opts)?;
        let rhs = c * max_modulus(f, lr, opts)?;
        Ok(RadiusRow {
            log_r: lr,
            lhs,
            rhs,
            holds: le_slack(rhs, lhs),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut report = RadiusReport::new(
        f,
        &format!("M(r^(2 alpha)) >= M(r)^(2 alpha), alpha = {alpha}"),
        grid,
        rows,
    );
    if f.degree().is_some() {
        report.note = Some(
            "polynomial: the leading constant decides the inequality (holds iff |c| <= 1)".into(),
        );
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaRoot {
    pub log_sigma: f64,
    /// `log L(sigma) - log M(r)` at the returned point.
    pub residual: f64,
}

/// Root of `log L(sigma) = log M(r)` with `r <= sigma <= r^alpha`: the first
/// sign change on a coarse scan, refined by bisection.
pub fn find_sigma_step1(
    f: &CoefficientSeries,
    log_r: f64,
    alpha: f64,
    opts: &ModulusOptions,
) -> Result<SigmaRoot> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha must exceed 1, got {alpha}"
        )));
    }
    if log_r.is_nan() || log_r <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need r > 1, got log r = {log_r}"
        )));
    }
    f.check_radius(alpha * log_r)?;
    let target = max_modulus(f, log_r, opts)?;
    let g = |s: f64| min_modulus(f, s, opts).map(|l| l - target);
    let g_lo = g(log_r)?;
    if g_lo >= 0.0 {
        return Ok(SigmaRoot {
            log_sigma: log_r,
            residual: g_lo,
        });
    }
    const SCAN: usize = 64;
    let hi_end = alpha * log_r;
    let mut lo = log_r;
    let mut hi = None;
    for j in 1..=SCAN {
        let s = log_r + (hi_end - log_r) * j as f64 / SCAN as f64;
        if g(s)? >= 0.0 {
            hi = Some(s);
            break;
        }
        lo = s;
    }
    let mut hi = hi.ok_or(Error::NotFound)?;
    let mut g_hi = g(hi)?;
    for _ in 0..200 {
        if hi - lo <= 1e-13 * (1.0 + hi.abs()) || g_hi.abs() <= 1e-9 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm >= 0.0 {
            hi = mid;
            g_hi = gm;
        } else {
            lo = mid;
        }
    }
    Ok(SigmaRoot {
        log_sigma: hi,
        residual: g_hi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusSource {
    Exact,
    /// `sigma_n >= rho_n`; used when the root is unavailable.
    LowerBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircleTriple {
    pub n: usize,
    /// `log S_n`.
    pub log_t: LevelLog,
    /// `log sigma_n`.
    pub log_t1: LevelLog,
    pub t1_source: RadiusSource,
    /// `alpha * log rho_n`, `rho_n = (1/(2 alpha)) R_n^{1/(2 alpha)} log R_n`.
    pub log_t2: LevelLog,
    pub nested: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn circle_triple(pair: &SequencePair, curve: &GrowthCurve, n: usize) -> Result<CircleTriple> {
    if n == 0 || n > pair.len() {
        return Err(Error::OutOfRange {
            index: n,
            len: pair.len(),
        });
    }
    let alpha = pair.alpha;
    let log_rn = pair.log_r[n - 1];
    let log_log_rn = log_rn.ln();
    let mut log_rho = log_rn.mul_f64(1.0 / (2.0 * alpha));
    if log_log_rn.level == 0 {
        log_rho = log_rho.add_f64(log_log_rn.value);
    }
    let log_rho = log_rho.add_f64(-(2.0 * alpha).ln());
    let log_t2 = log_rho.mul_f64(alpha);
    let log_t = pair.log_s[n - 1];

    let mut note = None;
    let exact = match curve.series() {
        Some(f)
            if log_rho.is_finite_f64()
                && log_rho.value > 0.0
                && alpha * log_rho.value <= f.log_r_ceiling =>
        {
            match find_sigma_step1(f, log_rho.value, alpha, curve.modulus_options()) {
                Ok(root) => Some(root.log_sigma),
                Err(Error::NotFound) => {
                    note = Some("no root of L(sigma) = M(rho_n) in range; sigma_n replaced by its lower bound".into());
                    None
                }
                Err(e @ Error::TruncationUnavailable { .. }) => {
                    note = Some(format!("{e}; sigma_n replaced by its lower bound"));
                    None
                }
                Err(e) => return Err(e),
            }
        }
        _ => {
            note = Some("rho_n beyond the exact range; sigma_n replaced by its lower bound".into());
            None
        }
    };
    let (log_t1, t1_source) = match exact {
        Some(v) => (LevelLog::from_f64(v), RadiusSource::Exact),
        None => (log_rho, RadiusSource::LowerBound),
    };
    let nested =
        matches!(log_t.partial_cmp(&log_t1), Some(std::cmp::Ordering::Less)) && le(log_t1, log_t2);
    Ok(CircleTriple {
        n,
        log_t,
        log_t1,
        t1_source,
        log_t2,
        nested,
        note,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecialCaseRow {
    pub n: usize,
    /// `log S_n / (2 alpha)`.
    pub lhs: LevelLog,
    /// `log R_n / (16 alpha^4 n_lambda_rho)`.
    pub rhs: LevelLog,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecialCaseReport {
    pub rho: f64,
    pub lambda: f64,
    pub n_lambda_rho: u64,
    pub rows: Vec<SpecialCaseRow>,
    pub all_hold: bool,
}

/// Smallest integer above `rho / lambda`.
pub fn n_lambda_rho(rho: f64, lambda: f64) -> Result<u64> {
    if !(lambda > 0.0 && rho.is_finite() && lambda <= rho) {
        return Err(Error::UndefinedForZeroLowerOrder { lambda, rho });
    }
    Ok((rho / lambda).floor() as u64 + 1)
}

pub fn special_case_seeds(
    curve: &GrowthCurve,
    exponents: &GrowthExponents,
    alpha: f64,
    log_r1: f64,
    log_s1: f64,
    n_max: usize,
) -> Result<SpecialCaseReport> {
    let n_lr = n_lambda_rho(exponents.rho, exponents.lambda)?;
    let pair = build_sequences(curve, alpha, log_r1, log_s1, n_max, Variant::HalfAlpha)?;
    let scale = 1.0 / (16.0 * alpha.powi(4) * n_lr as f64);
    let rows: Vec<SpecialCaseRow> = pair
        .log_r
        .iter()
        .zip(&pair.log_s)
        .enumerate()
        .map(|(i, (r, s))| {
            let lhs = s.mul_f64(1.0 / (2.0 * alpha));
            let rhs = r.mul_f64(scale);
            SpecialCaseRow {
                n: i + 1,
                lhs,
                rhs,
                holds: le(lhs, rhs),
            }
        })
        .collect();
    Ok(SpecialCaseReport {
        rho: exponents.rho,
        lambda: exponents.lambda,
        n_lambda_rho: n_lr,
        all_hold: rows.iter().all(|r| r.holds),
        rows,
    })
}
