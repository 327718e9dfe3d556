//! Maximum term, central index, maximum and minimum modulus on circles, and
//! finite-grid estimates of order, lower order and type.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::report::{extended_f64, fmt17};
use crate::series::{CircleEvaluator, CoefficientSeries};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusOptions {
    pub angular_samples: usize,
    /// Width of the final theta bracket.
    pub refine_tol: f64,
    /// Relative truncation tolerance handed to the series.
    pub series_tol: f64,
    /// `log L` below this is reported as `-inf` (a zero near the circle).
    pub zero_log_threshold: f64,
    pub parallel: bool,
}

impl Default for ModulusOptions {
    fn default() -> Self {
        ModulusOptions {
            angular_samples: 1024,
            refine_tol: 1e-10,
            series_tol: 1e-14,
            zero_log_threshold: (1e-300f64).ln(),
            parallel: true,
        }
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn circle_extremum(ev: &CircleEvaluator, opts: &ModulusOptions, maximize: bool) -> f64 {
    let n = opts.angular_samples.max(8);
    let step = 2.0 * PI / n as f64;
    let sign = if maximize { 1.0 } else { -1.0 };
    let thetas: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
    let objective = |t: &f64| sign * ev.eval_log_mag(*t);
    let vals = if opts.parallel {
        par::map(&thetas, objective)
    } else {
        par::map_seq(&thetas, objective)
    };
    let mut best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if best == f64::INFINITY {
        return sign * best;
    }
    let mut cands: Vec<usize> = (0..n)
        .filter(|&i| vals[i] >= vals[(i + n - 1) % n] && vals[i] >= vals[(i + 1) % n])
        .collect();
    cands.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
    cands.truncate(3);
    for i in cands {
        let t = thetas[i];
        let (_, v) = golden_section_max(
            |x| sign * ev.eval_log_mag(x),
            t - step,
            t + step,
            opts.refine_tol,
        );
        best = best.max(v);
    }
    sign * best
}

/// `(log mu(r,f), nu(r,f))`; `nu` is the largest maximizing index.
pub fn max_term(f: &CoefficientSeries, log_r: f64) -> Result<(f64, u64)> {
    f.max_term(log_r)
}

pub fn max_modulus(f: &CoefficientSeries, log_r: f64, opts: &ModulusOptions) -> Result<f64> {
    if opts.angular_samples < 64 {
        return Err(Error::InvalidArgument(
            "angular_samples must be at least 64".into(),
        ));
    }
    let ev = CircleEvaluator::new(f, log_r, opts.series_tol)?;
    Ok(circle_extremum(&ev, opts, true))
}

/// `log L(r,f)`, or `-inf` when the minimum falls below the zero threshold.
pub fn min_modulus(f: &CoefficientSeries, log_r: f64, opts: &ModulusOptions) -> Result<f64> {
    if opts.angular_samples < 64 {
        return Err(Error::InvalidArgument(
            "angular_samples must be at least 64".into(),
        ));
    }
    let ev = CircleEvaluator::new(f, log_r, opts.series_tol)?;
    Ok(clamp_zero(circle_extremum(&ev, opts, false), opts))
}

fn clamp_zero(log_l: f64, opts: &ModulusOptions) -> f64 {
    if log_l < opts.zero_log_threshold {
        f64::NEG_INFINITY
    } else {
        log_l
    }
}

/// Uniform grid in `log r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub log_r_min: f64,
    pub log_r_max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(log_r_min: f64, log_r_max: f64, points: usize) -> Self {
        GridSpec {
            log_r_min,
            log_r_max,
            points,
        }
    }

    /// `min:max:points`
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "grid must be min:max:points, got {s:?}"
            )));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("grid {p:?}: {e}")))
        };
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("grid points: {e}")))?;
        let g = GridSpec::new(num(parts[0])?, num(parts[1])?, points);
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2
            || !self.log_r_min.is_finite()
            || !self.log_r_max.is_finite()
            || self.log_r_max <= self.log_r_min
        {
            return Err(Error::InvalidArgument(format!("degenerate grid {self:?}")));
        }
        Ok(())
    }

    pub fn log_radii(&self) -> Vec<f64> {
        let h = (self.log_r_max - self.log_r_min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.log_r_min + i as f64 * h)
            .collect()
    }

    pub fn refined(&self) -> Self {
        GridSpec::new(self.log_r_min, self.log_r_max, 2 * self.points - 1)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.log_r_min, self.log_r_max, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSample {
    pub log_r: f64,
    #[serde(rename = "log_M", with = "extended_f64")]
    pub log_m: f64,
    #[serde(rename = "log_L", with = "extended_f64")]
    pub log_l: f64,
    #[serde(with = "extended_f64")]
    pub log_mu: f64,
    pub nu: u64,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl GrowthSample {
    pub fn at(f: &CoefficientSeries, log_r: f64, opts: &ModulusOptions) -> Self {
        match CircleEvaluator::new(f, log_r, opts.series_tol) {
            Ok(ev) => GrowthSample {
                log_r,
                log_m: circle_extremum(&ev, opts, true),
                log_l: clamp_zero(circle_extremum(&ev, opts, false), opts),
                log_mu: ev.log_mu,
                nu: ev.nu,
                valid: true,
                note: None,
            },
            Err(e) => GrowthSample {
                log_r,
                log_m: f64::NAN,
                log_l: f64::NAN,
                log_mu: f64::NAN,
                nu: 0,
                valid: false,
                note: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthProfile {
    pub function: String,
    pub transcendental: bool,
    pub grid: GridSpec,
    pub samples: Vec<GrowthSample>,
}

impl GrowthProfile {
    pub fn valid_samples(&self) -> impl Iterator<Item = &GrowthSample> {
        self.samples.iter().filter(|s| s.valid)
    }

    pub fn invalid_count(&self) -> usize {
        self.samples.iter().filter(|s| !s.valid).count()
    }

    /// CSV with header `log_r,log_M,log_L,log_mu,nu,valid`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("log_r,log_M,log_L,log_mu,nu,valid\n");
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt17(s.log_r),
                fmt17(s.log_m),
                fmt17(s.log_l),
                fmt17(s.log_mu),
                s.nu,
                u8::from(s.valid)
            );
        }
        out
    }
}

pub fn growth_profile(
    f: &CoefficientSeries,
    grid: &GridSpec,
    opts: &ModulusOptions,
) -> Result<GrowthProfile> {
    grid.validate()?;
    let radii = grid.log_radii();
    let sample = |lr: &f64| GrowthSample::at(f, *lr, opts);
    let samples = if opts.parallel {
        par::map(&radii, sample)
    } else {
        par::map_seq(&radii, sample)
    };
    Ok(GrowthProfile {
        function: f.name(),
        transcendental: f.is_transcendental(),
        grid: *grid,
        samples,
    })
}

/// Ordinary least squares `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub max_residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y - intercept - slope * x)
        .collect();
    let rms = (res.iter().map(|r| r * r).sum::<f64>() / n as f64).sqrt();
    let max = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    Some(LineFit {
        slope,
        intercept,
        rms_residual: rms,
        max_residual: max,
    })
}

pub const DEFAULT_TAIL_WINDOW: f64 = 0.5;
const MIN_VALID_SAMPLES: usize = 16;

fn tail_window(profile: &GrowthProfile, fraction: f64) -> Result<Vec<&GrowthSample>> {
    let valid: Vec<&GrowthSample> = profile.valid_samples().collect();
    if valid.len() < MIN_VALID_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_VALID_SAMPLES,
            got: valid.len(),
        });
    }
    let fraction = fraction.clamp(0.0, 1.0);
    let start = ((1.0 - fraction) * valid.len() as f64).floor() as usize;
    Ok(valid[start.min(valid.len() - 2)..].to_vec())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub rho: f64,
    pub lambda: f64,
    /// `log M` is affine in `log r` on the window: polynomial growth, order 0.
    pub polynomial_growth: bool,
    /// Least-squares fit of `log log M` against `log r` (diagnostic).
    pub fit: Option<LineFit>,
    pub window: (f64, f64),
}

/// Order and lower order as sup/inf of `log log M / log r` over the tail
/// window of the grid.
pub fn estimate_order(profile: &GrowthProfile, window_fraction: f64) -> Result<OrderEstimate> {
    let tail = tail_window(profile, window_fraction)?;
    let window = (tail[0].log_r, tail[tail.len() - 1].log_r);
    let xs: Vec<f64> = tail.iter().map(|s| s.log_r).collect();
    let ms: Vec<f64> = tail.iter().map(|s| s.log_m).collect();
    if let Some(lin) = fit_line(&xs, &ms) {
        let scale = 1.0 + ms.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if lin.max_residual <= 1e-8 * scale {
            return Ok(OrderEstimate {
                rho: 0.0,
                lambda: 0.0,
                polynomial_growth: true,
                fit: Some(lin),
                window,
            });
        }
    }
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .filter(|s| s.log_r > 0.0 && s.log_m > 0.0)
        .map(|s| (s.log_r, s.log_m.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: pts.len(),
        });
    }
    let ratios = pts.iter().map(|(lr, llm)| llm / lr);
    let rho = ratios.clone().fold(f64::NEG_INFINITY, f64::max).max(0.0);
    let lambda = ratios.fold(f64::INFINITY, f64::min).max(0.0).min(rho);
    let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    Ok(OrderEstimate {
        rho,
        lambda,
        polynomial_growth: false,
        fit: fit_line(&x, &y),
        window,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeClass {
    Minimal,
    Mean,
    Maximal,
}

/// Finite-grid thresholds standing in for `sigma = 0` and `sigma = inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeThresholds {
    pub zero_below: f64,
    pub infinite_above: f64,
    /// `|d log(log M / r^rho) / d log r|` beyond which the ratio is taken
    /// to be drifting to 0 or infinity.
    pub trend: f64,
}

impl Default for TypeThresholds {
    fn default() -> Self {
        TypeThresholds {
            zero_below: 1e-3,
            infinite_above: 1e3,
            trend: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeEstimate {
    #[serde(with = "extended_f64")]
    pub sigma_type: f64,
    pub sigma_raw: f64,
    pub trend_slope: f64,
    pub type_class: TypeClass,
}

/// `sigma = max log M / r^rho` over the tail window.
pub fn estimate_type(
    profile: &GrowthProfile,
    rho: f64,
    window_fraction: f64,
    th: &TypeThresholds,
) -> Result<TypeEstimate> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::UndefinedForZeroOrder { rho });
    }
    let tail = tail_window(profile, window_fraction)?;
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .filter(|s| s.log_m > 0.0)
        .map(|s| (s.log_r, s.log_m.ln() - rho * s.log_r))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: pts.len(),
        });
    }
    let log_sigma = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let trend = fit_line(&x, &y).map_or(0.0, |l| l.slope);
    let sigma_raw = log_sigma.exp();
    let type_class = if sigma_raw <= th.zero_below || trend <= -th.trend {
        TypeClass::Minimal
    } else if sigma_raw >= th.infinite_above || trend >= th.trend {
        TypeClass::Maximal
    } else {
        TypeClass::Mean
    };
    let sigma_type = match type_class {
        TypeClass::Minimal => 0.0,
        TypeClass::Mean => sigma_raw,
        TypeClass::Maximal => f64::INFINITY,
    };
    Ok(TypeEstimate {
        sigma_type,
        sigma_raw,
        trend_slope: trend,
        type_class,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthExponents {
    pub function: String,
    pub transcendental: bool,
    pub rho: f64,
    pub lambda: f64,
    /// `None` when the order is 0 and type is undefined.
    #[serde(rename = "sigma")]
    pub sigma_type: Option<TypeEstimate>,
    pub type_class: Option<TypeClass>,
    pub window: (f64, f64),
    pub tail_window: f64,
    pub residuals: Option<LineFit>,
    pub polynomial_growth: bool,
}

pub fn growth_exponents(
    profile: &GrowthProfile,
    window_fraction: f64,
    th: &TypeThresholds,
) -> Result<GrowthExponents> {
    let order = estimate_order(profile, window_fraction)?;
    let sigma = if order.rho > 0.0 {
        Some(estimate_type(profile, order.rho, window_fraction, th)?)
    } else {
        None
    };
    Ok(GrowthExponents {
        function: profile.function.clone(),
        transcendental: profile.transcendental,
        rho: order.rho,
        lambda: order.lambda,
        type_class: sigma.as_ref().map(|s| s.type_class),
        sigma_type: sigma,
        window: order.window,
        tail_window: window_fraction,
        residuals: order.fit,
        polynomial_growth: order.polynomial_growth,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryVerdict {
    pub qualifies: bool,
    pub explanation: String,
    pub transcendental: bool,
}

/// Half-width of the band treated as `rho = 1/2` on finite data.
pub const DEFAULT_ORDER_BAND: f64 = 0.05;

/// Order below 1/2, or order 1/2 with minimal type.
pub fn classify_corollary(rho: f64, type_class: Option<TypeClass>, band: f64) -> CorollaryVerdict {
    let (qualifies, explanation) = if rho < 0.5 - band {
        (true, format!("order {rho:.4} < 1/2"))
    } else if (rho - 0.5).abs() <= band {
        match type_class {
            Some(TypeClass::Minimal) => (true, format!("order {rho:.4} ~ 1/2 with minimal type")),
            Some(t) => (
                false,
                format!("order {rho:.4} ~ 1/2 but type is {t:?}, not minimal"),
            ),
            None => (
                false,
                format!("order {rho:.4} ~ 1/2 with undetermined type"),
            ),
        }
    } else {
        (false, format!("order {rho:.4} > 1/2"))
    };
    CorollaryVerdict {
        qualifies,
        explanation,
        transcendental: true,
    }
}

pub fn classify_exponents(e: &GrowthExponents, band: f64) -> CorollaryVerdict {
    let mut v = classify_corollary(e.rho, e.type_class, band);
    if !e.transcendental {
        v.transcendental = false;
        v.qualifies = false;
        v.explanation.push_str("; not transcendental");
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub function: String,
    pub checked: usize,
    /// `log r` of every sample violating `log mu(r) <= log M(r) <= log 2 + log mu(2r)`.
    pub violations: Vec<f64>,
}

/// Relative slack used for float comparisons of equal quantities.
pub const COMPARE_SLACK: f64 = 1e-12;

#[inline]
pub fn le_slack(a: f64, b: f64) -> bool {
    a <= b + COMPARE_SLACK * (1.0 + a.abs().max(b.abs()))
}

pub fn sandwich_check(f: &CoefficientSeries, profile: &GrowthProfile) -> SandwichReport {
    let mut checked = 0;
    let mut violations = Vec::new();
    for s in profile.valid_samples() {
        let Ok((log_mu2, _)) = f.max_term(s.log_r + LN_2) else {
            continue;
        };
        checked += 1;
        if !(le_slack(s.log_mu, s.log_m) && le_slack(s.log_m, LN_2 + log_mu2)) {
            violations.push(s.log_r);
        }
    }
    SandwichReport {
        function: profile.function.clone(),
        checked,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn mono() -> CoefficientSeries {
        CoefficientSeries::monomial(Complex64::new(3.0, 0.0), 2)
    }

    #[test]
    fn max_term_examples() {
        // enumerate k = 0..50 of r^k / k!
        let brute = |r: f64| {
            let mut best = (0.0f64, 0u64);
            let mut t = 1.0;
            for k in 0..=50u64 {
                if k > 0 {
                    t *= r / k as f64;
                }
                if t >= best.0 * (1.0 - 1e-14) {
                    best = (t.max(best.0), k);
                }
            }
            best
        };
        let (mu, nu) = max_term(&CoefficientSeries::exp(), 0.0).unwrap();
        assert_eq!((mu, nu), (0.0, 1));
        assert_eq!(brute(1.0).1, 1);
        let (mu, nu) = max_term(&CoefficientSeries::exp(), 2f64.ln()).unwrap();
        assert_eq!(nu, 2);
        assert_eq!(brute(2.0).1, 2);
        assert!((mu - 2f64.ln()).abs() < 1e-15);
        let (mu, nu) = max_term(&mono(), 2f64.ln()).unwrap();
        assert_eq!(nu, 2);
        assert!((mu - 12f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn modulus_examples() {
        let o = ModulusOptions::default();
        let e = CoefficientSeries::exp();
        assert!((max_modulus(&e, 0.0, &o).unwrap() - 1.0).abs() < 1e-9);
        assert!((min_modulus(&e, 0.0, &o).unwrap() + 1.0).abs() < 1e-9);
        assert_eq!(max_modulus(&mono(), 2f64.ln(), &o).unwrap(), 12f64.ln());
        assert_eq!(min_modulus(&mono(), 2f64.ln(), &o).unwrap(), 12f64.ln());
        let k = CoefficientSeries::constant(Complex64::new(5.0, 0.0));
        assert_eq!(max_modulus(&k, 2.2, &o).unwrap(), 5f64.ln());
        let zm1 =
            CoefficientSeries::polynomial(&[Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(min_modulus(&zm1, 0.0, &o).unwrap(), f64::NEG_INFINITY);
        assert!(max_modulus(
            &e,
            0.0,
            &ModulusOptions {
                angular_samples: 32,
                ..o
            }
        )
        .is_err());
    }

    #[test]
    fn refinement_converges() {
        let o = ModulusOptions::default();
        let o2 = ModulusOptions {
            angular_samples: 2048,
            ..o
        };
        for f in [
            CoefficientSeries::exp(),
            CoefficientSeries::cos_sqrt(),
            CoefficientSeries::gap_squares(),
            CoefficientSeries::baker(10.0),
        ] {
            for lr in [0.5, 2.0, 4.0] {
                let a = max_modulus(&f, lr, &o).unwrap();
                let b = max_modulus(&f, lr, &o2).unwrap();
                assert!((a - b).abs() <= 1e-9, "{f} {lr}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn exp_profile_closed_form() {
        let p = growth_profile(
            &CoefficientSeries::exp(),
            &GridSpec::new(0.0, 5.0, 32),
            &ModulusOptions::default(),
        )
        .unwrap();
        for s in &p.samples {
            let r = s.log_r.exp();
            assert!(((s.log_m - r) / r).abs() <= 1e-6);
            assert!(((s.log_l + r) / r).abs() <= 1e-6);
        }
    }

    #[test]
    fn monomial_profile_is_flat() {
        let p = growth_profile(
            &mono(),
            &GridSpec::new(-1.0, 3.0, 9),
            &ModulusOptions::default(),
        )
        .unwrap();
        for s in &p.samples {
            assert_eq!(s.log_m, s.log_l);
            assert_eq!(s.log_m, s.log_mu);
            assert_eq!(s.nu, 2);
        }
    }

    #[test]
    fn gap_profile_central_index_is_square() {
        let p = growth_profile(
            &CoefficientSeries::gap_squares(),
            &GridSpec::new(0.0, 6.0, 40),
            &ModulusOptions::default(),
        )
        .unwrap();
        let mut prev = 0;
        for s in &p.samples {
            let j = (s.nu as f64).sqrt().round() as u64;
            assert_eq!(j * j, s.nu);
            assert!(s.nu >= prev);
            prev = s.nu;
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = GridSpec::new(0.0, 4.0, 12);
        let f = CoefficientSeries::baker(10.0);
        let a = growth_profile(&f, &g, &ModulusOptions::default()).unwrap();
        let b = growth_profile(
            &f,
            &g,
            &ModulusOptions {
                parallel: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn order_estimates() {
        let o = ModulusOptions::default();
        let e =
            growth_profile(&CoefficientSeries::exp(), &GridSpec::new(2.0, 6.0, 32), &o).unwrap();
        let est = estimate_order(&e, DEFAULT_TAIL_WINDOW).unwrap();
        assert!((est.rho - 1.0).abs() <= 0.02 && (est.lambda - 1.0).abs() <= 0.02);

        let m = growth_profile(&mono(), &GridSpec::new(2.0, 6.0, 32), &o).unwrap();
        let est = estimate_order(&m, DEFAULT_TAIL_WINDOW).unwrap();
        assert!(est.polynomial_growth);
        assert_eq!(est.rho, 0.0);

        let short = growth_profile(&mono(), &GridSpec::new(2.0, 6.0, 8), &o).unwrap();
        assert!(matches!(
            estimate_order(&short, 0.5),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn type_estimates() {
        let o = ModulusOptions::default();
        let th = TypeThresholds::default();
        let e =
            growth_profile(&CoefficientSeries::exp(), &GridSpec::new(2.0, 6.0, 32), &o).unwrap();
        let t = estimate_type(&e, 1.0, 0.5, &th).unwrap();
        assert!((t.sigma_type - 1.0).abs() < 1e-6);
        assert_eq!(t.type_class, TypeClass::Mean);

        let c = growth_profile(
            &CoefficientSeries::cos_sqrt(),
            &GridSpec::new(2.0, 6.0, 32),
            &o,
        )
        .unwrap();
        let t = estimate_type(&c, 0.5, 0.5, &th).unwrap();
        assert!((t.sigma_type - 1.0).abs() < 0.05, "{t:?}");
        assert_eq!(t.type_class, TypeClass::Mean);

        assert!(matches!(
            estimate_type(&e, 0.0, 0.5, &th),
            Err(Error::UndefinedForZeroOrder { .. })
        ));
    }

    #[test]
    fn corollary_clauses() {
        assert!(classify_corollary(0.3, Some(TypeClass::Mean), DEFAULT_ORDER_BAND).qualifies);
        assert!(!classify_corollary(0.5, Some(TypeClass::Mean), DEFAULT_ORDER_BAND).qualifies);
        assert!(classify_corollary(0.5, Some(TypeClass::Minimal), DEFAULT_ORDER_BAND).qualifies);
        assert!(!classify_corollary(1.0, Some(TypeClass::Mean), DEFAULT_ORDER_BAND).qualifies);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2), -1.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx.abs() < 1e-18);
    }

    #[test]
    fn grid_parsing() {
        let g = GridSpec::parse("0:5:32").unwrap();
        assert_eq!(g, GridSpec::new(0.0, 5.0, 32));
        assert_eq!(g.log_radii().len(), 32);
        assert!(GridSpec::parse("0:5").is_err());
        assert!(GridSpec::parse("5:0:10").is_err());
    }
}
