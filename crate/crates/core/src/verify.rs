//! The twelve acceptance checks behind `verify-all`.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::dynamics::{
    baker_segment_check, component_probe, escape_field, Budgets, OrbitClass, Window,
};
use crate::error::{Error, Result};
use crate::gaps::{hypothesis_check, HypothesisOptions, HypothesisVerdict};
use crate::growth::{
    growth_exponents, growth_profile, sandwich_check, GridSpec, ModulusOptions, TypeClass,
    TypeThresholds, DEFAULT_TAIL_WINDOW,
};
use crate::report::{fmt17, stamped_json};
use crate::sequences::{
    build_sequences, find_sigma_step1, lemma1_construct, verify_lemma2, verify_step2ii,
    verify_wiman_valiron, GrowthCurve, Variant,
};
use crate::series::CoefficientSeries;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub criteria: Vec<CriterionResult>,
    pub passed: usize,
    pub total: usize,
    pub all_passed: bool,
    pub first_failure: Option<String>,
}

impl VerifySummary {
    fn from(criteria: Vec<CriterionResult>) -> Self {
        let passed = criteria.iter().filter(|c| c.passed).count();
        VerifySummary {
            total: criteria.len(),
            all_passed: passed == criteria.len(),
            first_failure: criteria
                .iter()
                .find(|c| !c.passed)
                .map(|c| format!("{}: {}", c.id, c.name)),
            passed,
            criteria,
        }
    }
}

/// Grids and parameters of each check.
pub mod setup {
    use super::*;

    pub fn baker_grid() -> GridSpec {
        GridSpec::new(2.0, 6.0, 64)
    }
    pub fn exp_density_grid() -> GridSpec {
        GridSpec::new(1.0, 5.0, 33)
    }
    pub fn monomial_density_grid() -> GridSpec {
        GridSpec::new(0.0, 4.0, 17)
    }
    pub fn gap_density_grid() -> GridSpec {
        GridSpec::new(0.0, 12.0, 97)
    }
    pub fn sandwich_grid() -> GridSpec {
        GridSpec::new(0.0, 6.0, 49)
    }
    pub fn wiman_valiron_grid() -> GridSpec {
        GridSpec::new(1.0, 5.0, 33)
    }
    pub fn lemma2_grid() -> GridSpec {
        GridSpec::new(1.0, 12.0, 45)
    }
    pub fn step2ii_grid() -> GridSpec {
        GridSpec::new(0.0, 2.0, 401)
    }
    pub const GAP_SEEDS: (f64, f64) = (32.0, 1.0);
    pub const BAKER_A: f64 = 10.0;
    pub const BAKER_X0: f64 = 100.0;
    pub const BAKER_COUNT: usize = 16;
    pub const FIELD_RES: usize = 256;
}

type Check = fn(&RunConfig, &ModulusOptions) -> Result<(bool, String)>;

fn c1_baker_growth(cfg: &RunConfig, o: &ModulusOptions) -> Result<(bool, String)> {
    let f = CoefficientSeries::baker(setup::BAKER_A);
    let p = growth_profile(&f, &setup::baker_grid(), o)?;
    let e = growth_exponents(&p, DEFAULT_TAIL_WINDOW, &TypeThresholds::default())?;
    let ok = (e.rho - 0.5).abs() <= cfg.tolerances.baker_order_tol
        && e.type_class == Some(TypeClass::Mean);
    Ok((
        ok,
        format!("rho = {}, type = {:?}", fmt17(e.rho), e.type_class),
    ))
}

fn c2_baker_segment(_: &RunConfig, _: &ModulusOptions) -> Result<(bool, String)> {
    let r = baker_segment_check(setup::BAKER_A, setup::BAKER_X0, setup::BAKER_COUNT, 1e-3)?;
    Ok((
        r.increasing_escaping == setup::BAKER_COUNT,
        format!(
            "{}/{} strictly increasing escaping real orbits",
            r.increasing_escaping,
            setup::BAKER_COUNT
        ),
    ))
}

fn c3_hypothesis(cfg: &RunConfig, o: &ModulusOptions) -> Result<(bool, String)> {
    let h = HypothesisOptions {
        density_threshold: cfg.tolerances.density_threshold,
        ..Default::default()
    };
    let e = hypothesis_check(
        &CoefficientSeries::exp(),
        0.5,
        &setup::exp_density_grid(),
        o,
        &h,
    )?;
    let m = hypothesis_check(
        &CoefficientSeries::monomial(Complex64::new(3.0, 0.0), 2),
        0.1,
        &setup::monomial_density_grid(),
        o,
        &h,
    )?;
    let g = hypothesis_check(
        &CoefficientSeries::gap_squares(),
        0.1,
        &setup::gap_density_grid(),
        o,
        &h,
    )?;
    let ok = e.final_density() >= cfg.tolerances.exp_density_min
        && e.verdict == HypothesisVerdict::Violates
        && m.log_density.iter().all(|&d| d == 0.0)
        && g.verdict == HypothesisVerdict::ConsistentWithHypothesis;
    Ok((
        ok,
        format!(
            "exp {} ({:?}); monomial {}; gap_squares {} ({:?})",
            fmt17(e.final_density()),
            e.verdict,
            fmt17(m.final_density()),
            fmt17(g.final_density()),
            g.verdict
        ),
    ))
}

fn c4_sandwich(cfg: &RunConfig, o: &ModulusOptions) -> Result<(bool, String)> {
    if cfg.corpus.is_empty() {
        return Err(Error::InvalidArgument("empty corpus".into()));
    }
    let mut checked = 0;
    let mut violations = 0;
    for spec in &cfg.corpus {
        let f = CoefficientSeries::parse(spec)?;
        let p = growth_profile(&f, &setup::sandwich_grid(), o)?;
        let r = sandwich_check(&f, &p);
        checked += r.checked;
        violations += r.violations.len();
    }
    Ok((
        violations == 0 && checked > 0,
        format!(
            "{violations} violations over {checked} samples, {} functions",
            cfg.corpus.len()
        ),
    ))
}

fn c5_wiman_valiron(_: &RunConfig, o: &ModulusOptions) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for f in [
        CoefficientSeries::exp(),
        CoefficientSeries::cos_sqrt(),
        CoefficientSeries::gap_squares(),
    ] {
        let r = verify_wiman_valiron(&f, &setup::wiman_valiron_grid(), o)?;
        let c = &r.constants;
        let pass = r.require().is_ok() && c.k.is_finite() && c.k >= 2.0;
        ok &= pass;
        parts.push(format!(
            "{}: K = {}, s0 = {:?}, s1 = {:?}",
            f.name(),
            fmt17(c.k),
            c.s0,
            c.s1
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn c6_lemma2(_: &RunConfig, o: &ModulusOptions) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for f in [CoefficientSeries::exp(), CoefficientSeries::gap_squares()] {
        let r = verify_lemma2(&f, 2.0, &setup::lemma2_grid(), o)?;
        ok &= r.first_passing_log_r.is_some();
        parts.push(format!(
            "{}: from log r = {:?}",
            f.name(),
            r.first_passing_log_r
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn c7_sequences(cfg: &RunConfig, _: &ModulusOptions) -> Result<(bool, String)> {
    let p = build_sequences(
        &GrowthCurve::exp_closed_form(),
        2.0,
        256.0,
        2.0,
        8,
        Variant::HalfAlpha,
    )?;
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    let e_r = rel(p.log_r[1].to_f64(), 64f64.exp());
    let e_s = rel(p.log_s[1].to_f64(), 2f64.exp());
    let tol = cfg.tolerances.sequence_rel_tol;
    let ok = e_r <= tol && e_s <= tol && p.len() == 8 && p.property2_holds.iter().all(|&b| b);
    Ok((
        ok,
        format!(
            "rel err R2 {}, S2 {}; property holds for n <= {}",
            fmt17(e_r),
            fmt17(e_s),
            p.len()
        ),
    ))
}

fn c8_lemma1(_: &RunConfig, o: &ModulusOptions) -> Result<(bool, String)> {
    let f = CoefficientSeries::gap_squares();
    let curve = GrowthCurve::exact(&f, o);
    let (r1, s1) = setup::GAP_SEEDS;
    let p = build_sequences(&curve, 2.0, r1, s1, 6, Variant::QuarterAlpha)?;
    let l = lemma1_construct(&f, &p, 100.0, o)?;
    let ok = !l.records.is_empty() && l.all_k_le_a();
    Ok((
        ok,
        format!(
            "{}/{} records with k_n <= a_n",
            l.records.iter().filter(|r| r.k_le_a).count(),
            l.records.len()
        ),
    ))
}

fn c9_sigma(cfg: &RunConfig, o: &ModulusOptions) -> Result<(bool, String)> {
    let m = CoefficientSeries::monomial(Complex64::new(3.0, 0.0), 2);
    let mono = find_sigma_step1(&m, 1.7, 2.0, o)?.log_sigma == 1.7;
    let exp_nf = matches!(
        find_sigma_step1(&CoefficientSeries::exp(), 2.0, 2.0, o),
        Err(Error::NotFound)
    );
    let g = find_sigma_step1(&CoefficientSeries::gap_squares(), 3.0, 2.0, o)?;
    let gap =
        g.residual.abs() <= cfg.tolerances.sigma_residual && (3.0..=6.0).contains(&g.log_sigma);
    Ok((
        mono && exp_nf && gap,
        format!(
            "monomial exact {mono}; exp not found {exp_nf}; gap_squares log sigma = {}, residual {}",
            fmt17(g.log_sigma),
            fmt17(g.residual)
        ),
    ))
}

fn c10_step2ii(cfg: &RunConfig, o: &ModulusOptions) -> Result<(bool, String)> {
    let r = verify_step2ii(&CoefficientSeries::exp(), 2.0, &setup::step2ii_grid(), o)?;
    let first = r.first_passing_radius();
    let ok = first.is_some_and(|x| x <= cfg.tolerances.step2ii_max_radius);
    Ok((
        ok,
        format!("first passing r = {}", first.map_or("none".into(), fmt17)),
    ))
}

fn c11_square_field(cfg: &RunConfig, _: &ModulusOptions) -> Result<(bool, String)> {
    let n = setup::FIELD_RES;
    let window = Window::square(2.0);
    let sq = CoefficientSeries::monomial(Complex64::new(1.0, 0.0), 2);
    let field = escape_field(&sq, &window, n, n, &Budgets::default(), true)?;
    let px = (window.re_max - window.re_min) / n as f64;
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let d = window.pixel_center(i, j, n, n).norm() - 1.0;
            let off = match field.cell(i, j).class {
                OrbitClass::Bounded => d.max(0.0),
                OrbitClass::Escaping => (-d).max(0.0),
                OrbitClass::Indeterminate => d.abs(),
            };
            worst = worst.max(off / px);
        }
    }
    let comps = component_probe(&field, OrbitClass::Bounded);
    let ok = worst <= cfg.tolerances.boundary_pixels && comps.flagged() == 0;
    Ok((
        ok,
        format!(
            "boundary within {} px of |z| = 1; {} bounded components, {} flagged",
            fmt17(worst),
            comps.components.len(),
            comps.flagged()
        ),
    ))
}

const CHECKS: [(u32, &str, Check); 11] = [
    (1, "baker order and type", c1_baker_growth),
    (2, "baker real segment", c2_baker_segment),
    (3, "hypothesis dichotomy", c3_hypothesis),
    (4, "wiman-valiron sandwich", c4_sandwich),
    (5, "wiman-valiron bounds", c5_wiman_valiron),
    (6, "log-radius lemma", c6_lemma2),
    (7, "sequence recurrences", c7_sequences),
    (8, "k_n <= a_n construction", c8_lemma1),
    (9, "minimum-modulus radius", c9_sigma),
    (10, "power inequality threshold", c10_step2ii),
    (11, "z^2 escape field", c11_square_field),
];

fn run_checks(cfg: &RunConfig, o: &ModulusOptions) -> Vec<CriterionResult> {
    CHECKS
        .iter()
        .map(|(id, name, check)| {
            let (passed, detail) = check(cfg, o).unwrap_or_else(|e| (false, format!("error: {e}")));
            CriterionResult {
                id: *id,
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect()
}

/// Runs every check; the last one repeats the run sequentially and compares
/// the serialized summaries byte for byte.
pub fn run_all(cfg: &RunConfig) -> Result<VerifySummary> {
    if cfg.corpus.is_empty() {
        return Err(Error::InvalidArgument("corpus is empty".into()));
    }
    for spec in &cfg.corpus {
        CoefficientSeries::parse(spec)?;
    }
    let hash = cfg.hash();
    let first = run_checks(cfg, &ModulusOptions::default());
    let seq = ModulusOptions {
        parallel: false,
        ..Default::default()
    };
    let second = run_checks(cfg, &seq);
    let a = stamped_json(&first, &hash)?;
    let b = stamped_json(&second, &hash)?;
    let mut criteria = first;
    criteria.push(CriterionResult {
        id: 12,
        name: "determinism".into(),
        passed: a == b,
        detail: format!("{} bytes, identical = {}", a.len(), a == b),
    });
    Ok(VerifySummary::from(criteria))
}
