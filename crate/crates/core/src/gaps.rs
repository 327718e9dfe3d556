//! Gap structure of the exponent sequence and the minimum-modulus
//! hypothesis `log L(r,f) > (1 - eps) log M(r,f)` outside a set of
//! logarithmic density zero.
//!
//! Fabry and Fejér conditions are limits; from finitely many exponents the
//! verdicts here are heuristics, and each report keeps the raw tables.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{fit_line, growth_profile, GridSpec, GrowthProfile, ModulusOptions};
use crate::report::fmt17;
use crate::series::CoefficientSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Every `k <= scan_bound` with `a_k != 0`.
pub fn exponent_sequence(f: &CoefficientSeries, scan_bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = f.next_nonzero(0);
    while let Some(i) = k {
        if i > scan_bound {
            break;
        }
        out.push(i);
        k = f.next_nonzero(i + 1);
    }
    out
}

fn positive(exponents: &[u64]) -> Result<Vec<u64>> {
    let pos: Vec<u64> = exponents.iter().copied().filter(|&n| n > 0).collect();
    if pos.len() < 4 {
        return Err(Error::InsufficientExponents {
            needed: 4,
            got: pos.len(),
        });
    }
    Ok(pos)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FabryReport {
    /// `n_k / k` over the positive exponents, `k` counted from 1.
    pub ratios: Vec<f64>,
    pub verdict: Verdict,
}

/// Growth factor of `n_k / k` required for a `holds` verdict.
pub const FABRY_GROWTH: f64 = 4.0;

pub fn fabry_check(exponents: &[u64]) -> Result<FabryReport> {
    let pos = positive(exponents)?;
    let ratios: Vec<f64> = pos
        .iter()
        .enumerate()
        .map(|(i, &n)| n as f64 / (i + 1) as f64)
        .collect();
    let tail = &ratios[ratios.len() / 2..];
    let last = *ratios.last().unwrap();
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    let verdict = if increasing && last >= FABRY_GROWTH * ratios[0] {
        Verdict::Holds
    } else if last <= 1.05 * tail[0] {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(FabryReport { ratios, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FejerReport {
    pub partial_sums: Vec<f64>,
    /// Log-log slope of the increments `1/n_k` against `k` on the tail.
    pub decay_exponent: f64,
    pub verdict: Verdict,
}

pub fn fejer_check(exponents: &[u64]) -> Result<FejerReport> {
    let pos = positive(exponents)?;
    let mut acc = 0.0;
    let partial_sums: Vec<f64> = pos
        .iter()
        .map(|&n| {
            acc += 1.0 / n as f64;
            acc
        })
        .collect();
    let start = pos.len() / 2;
    let (x, y): (Vec<f64>, Vec<f64>) = pos[start..]
        .iter()
        .enumerate()
        .map(|(i, &n)| (((start + i + 1) as f64).ln(), -(n as f64).ln()))
        .unzip();
    let decay_exponent = fit_line(&x, &y).map_or(0.0, |l| l.slope);
    // summable like k^-1.5 or faster; harmonic-like near k^-1
    let verdict = if decay_exponent <= -1.5 {
        Verdict::Holds
    } else if decay_exponent >= -1.1 {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(FejerReport {
        partial_sums,
        decay_exponent,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub function: String,
    pub scan_bound: u64,
    pub exponents: Vec<u64>,
    pub fabry: Option<FabryReport>,
    pub fejer: Option<FejerReport>,
    pub note: String,
}

pub fn gap_report(f: &CoefficientSeries, scan_bound: u64) -> GapReport {
    let exponents = exponent_sequence(f, scan_bound);
    GapReport {
        function: f.name(),
        scan_bound,
        fabry: fabry_check(&exponents).ok(),
        fejer: fejer_check(&exponents).ok(),
        exponents,
        note: "gap verdicts are heuristic: Fabry and Fejér conditions are asymptotic".into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypothesisOptions {
    /// Largest final density accepted as consistent.
    pub density_threshold: f64,
    /// Fraction of grid points forming the trend window.
    pub trend_window: f64,
}

impl Default for HypothesisOptions {
    fn default() -> Self {
        HypothesisOptions {
            density_threshold: 0.3,
            trend_window: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisVerdict {
    ConsistentWithHypothesis,
    Violates,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub function: String,
    pub epsilon: f64,
    pub grid: GridSpec,
    pub log_r: Vec<f64>,
    /// `r` in `E = {log L <= (1 - eps) log M}`; invalid samples count as exceptional.
    pub exceptional: Vec<bool>,
    /// Radii with `log M <= 0`, left out of the classification.
    pub excluded: Vec<bool>,
    /// `(int_{E cap [r_0, R]} dt/t) / log(R / r_0)` at each grid radius `R`.
    pub log_density: Vec<f64>,
    pub density_threshold: f64,
    pub verdict: HypothesisVerdict,
    pub note: String,
}

impl HypothesisReport {
    pub fn final_density(&self) -> f64 {
        *self.log_density.last().unwrap_or(&f64::NAN)
    }

    pub fn exceptional_count(&self) -> usize {
        self.exceptional.iter().filter(|&&e| e).count()
    }

    /// Two-column CSV `log_r,exceptional`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("log_r,exceptional\n");
        for (lr, e) in self.log_r.iter().zip(&self.exceptional) {
            let _ = writeln!(out, "{},{}", fmt17(*lr), u8::from(*e));
        }
        out
    }
}

/// Per-sample membership in the exceptional set and exclusion mask.
pub fn exceptional_flags(profile: &GrowthProfile, epsilon: f64) -> (Vec<bool>, Vec<bool>) {
    profile
        .samples
        .iter()
        .map(|s| {
            if !s.valid {
                (true, false)
            } else if s.log_m <= 0.0 {
                (false, true)
            } else {
                (s.log_l <= (1.0 - epsilon) * s.log_m, false)
            }
        })
        .unzip()
}

/// Running logarithmic density of the flagged set, trapezoidal in `log t`.
pub fn log_density_curve(log_r: &[f64], flags: &[bool]) -> Vec<f64> {
    let ind = |b: bool| if b { 1.0 } else { 0.0 };
    let mut out = Vec::with_capacity(log_r.len());
    let mut integral = 0.0;
    for j in 0..log_r.len() {
        if j == 0 {
            out.push(ind(flags[0]));
            continue;
        }
        integral += 0.5 * (ind(flags[j - 1]) + ind(flags[j])) * (log_r[j] - log_r[j - 1]);
        out.push((integral / (log_r[j] - log_r[0])).clamp(0.0, 1.0));
    }
    out
}

pub fn hypothesis_from_profile(
    profile: &GrowthProfile,
    epsilon: f64,
    opts: &HypothesisOptions,
) -> Result<HypothesisReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let log_r: Vec<f64> = profile.samples.iter().map(|s| s.log_r).collect();
    let (exceptional, excluded) = exceptional_flags(profile, epsilon);
    let log_density = log_density_curve(&log_r, &exceptional);
    let n = log_density.len();
    let w = ((opts.trend_window * n as f64).ceil() as usize).clamp(2, n);
    let tail = &log_density[n - w..];
    let nonincreasing = tail.windows(2).all(|p| p[1] <= p[0] + 1e-12);
    let nondecreasing = tail.windows(2).all(|p| p[1] >= p[0] - 1e-12);
    let last = log_density[n - 1];
    let verdict = if last < opts.density_threshold && nonincreasing {
        HypothesisVerdict::ConsistentWithHypothesis
    } else if last >= opts.density_threshold && nondecreasing {
        HypothesisVerdict::Violates
    } else {
        HypothesisVerdict::Inconclusive
    };
    Ok(HypothesisReport {
        function: profile.function.clone(),
        epsilon,
        grid: profile.grid,
        log_r,
        exceptional,
        excluded,
        log_density,
        density_threshold: opts.density_threshold,
        verdict,
        note: format!(
            "density threshold {} with nonincreasing trend over the last {} points is a finite-grid convention",
            opts.density_threshold, w
        ),
    })
}

pub fn hypothesis_check(
    f: &CoefficientSeries,
    epsilon: f64,
    grid: &GridSpec,
    modulus: &ModulusOptions,
    opts: &HypothesisOptions,
) -> Result<HypothesisReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let profile = growth_profile(f, grid, modulus)?;
    hypothesis_from_profile(&profile, epsilon, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn exponent_sequences() {
        assert_eq!(
            exponent_sequence(&CoefficientSeries::gap_squares(), 20),
            vec![1, 4, 9, 16]
        );
        assert_eq!(
            exponent_sequence(&CoefficientSeries::exp(), 5),
            vec![0, 1, 2, 3, 4, 5]
        );
        let m = CoefficientSeries::monomial(Complex64::new(3.0, 0.0), 2);
        assert_eq!(exponent_sequence(&m, 10), vec![2]);
    }

    #[test]
    fn fabry_examples() {
        let r = fabry_check(&[1, 4, 9, 16, 25]).unwrap();
        assert_eq!(r.ratios, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(r.verdict, Verdict::Holds);
        let full: Vec<u64> = (0..40).collect();
        assert_eq!(fabry_check(&full).unwrap().verdict, Verdict::Fails);
        assert!(matches!(
            fabry_check(&[2]),
            Err(Error::InsufficientExponents { .. })
        ));
    }

    #[test]
    fn fejer_examples() {
        let sq: Vec<u64> = (1..=5).map(|k| k * k).collect();
        let r = fejer_check(&sq).unwrap();
        assert!((r.partial_sums[4] - 1.463_611_111_111_111).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Holds);
        let sq: Vec<u64> = (1..=2000).map(|k| k * k).collect();
        let r = fejer_check(&sq).unwrap();
        assert!((r.partial_sums.last().unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-3);

        let lin: Vec<u64> = (1..=50).collect();
        assert_eq!(fejer_check(&lin).unwrap().verdict, Verdict::Fails);

        let geo: Vec<u64> = (1..=30).map(|k| 1u64 << k).collect();
        let r = fejer_check(&geo).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.partial_sums.last().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn density_curve_trapezoid() {
        let lr = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(log_density_curve(&lr, &[true; 4]), vec![1.0; 4]);
        let d = log_density_curve(&lr, &[true, false, false, false]);
        assert_eq!(d, vec![1.0, 0.5, 0.25, 0.5 / 3.0]);
    }

    #[test]
    fn monomial_never_exceptional() {
        let m = CoefficientSeries::monomial(Complex64::new(3.0, 0.0), 2);
        let r = hypothesis_check(
            &m,
            0.1,
            &GridSpec::new(0.0, 4.0, 17),
            &ModulusOptions::default(),
            &HypothesisOptions::default(),
        )
        .unwrap();
        assert_eq!(r.exceptional_count(), 0);
        assert!(r.log_density.iter().all(|&d| d == 0.0));
        assert_eq!(r.verdict, HypothesisVerdict::ConsistentWithHypothesis);
    }

    #[test]
    fn exp_is_everywhere_exceptional() {
        let r = hypothesis_check(
            &CoefficientSeries::exp(),
            0.5,
            &GridSpec::new(1.0, 5.0, 33),
            &ModulusOptions::default(),
            &HypothesisOptions::default(),
        )
        .unwrap();
        assert_eq!(r.exceptional_count(), 33);
        assert!(r.final_density() >= 0.95);
        assert_eq!(r.verdict, HypothesisVerdict::Violates);
        assert!(r.to_csv().starts_with("log_r,exceptional\n"));
    }

    #[test]
    fn epsilon_rejected_outside_unit_interval() {
        let m = CoefficientSeries::exp();
        assert!(hypothesis_check(
            &m,
            1.0,
            &GridSpec::new(0.0, 1.0, 4),
            &ModulusOptions::default(),
            &HypothesisOptions::default()
        )
        .is_err());
    }
}
