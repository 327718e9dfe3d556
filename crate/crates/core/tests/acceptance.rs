//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every expected value comes from an oracle in this
//! file (closed forms, brute-force circle sampling, plain f64 iteration),
//! not from the library under test.

use std::f64::consts::{LN_2, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fatou_core::config::RunConfig;
use fatou_core::dynamics::{
    baker_segment_check, component_probe, escape_field, Budgets, OrbitClass, Window,
};
use fatou_core::gaps::{hypothesis_check, HypothesisOptions, HypothesisVerdict};
use fatou_core::growth::{
    growth_exponents, growth_profile, sandwich_check, GridSpec, ModulusOptions, TypeClass,
    TypeThresholds, DEFAULT_TAIL_WINDOW,
};
use fatou_core::report::stamped_json;
use fatou_core::sequences::{
    build_sequences, find_sigma_step1, lemma1_construct, verify_lemma2, verify_step2ii,
    verify_wiman_valiron, GrowthCurve, Variant,
};
use fatou_core::verify::run_all;
use fatou_core::{CoefficientSeries, Error};
use num_complex::Complex64;

/// Pinned tolerances.
mod tol {
    pub const BAKER_ORDER: f64 = 0.05;
    pub const BAKER_TYPE: (f64, f64) = (0.5, 2.0);
    pub const EXP_DENSITY_MIN: f64 = 0.95;
    pub const DENSITY_THRESHOLD: f64 = 0.3;
    /// One grid cell of disagreement in the exceptional flags.
    pub const DENSITY_AGREEMENT: f64 = 0.02;
    pub const LOG_MODULUS_REL: f64 = 1e-9;
    pub const SEQUENCE_REL: f64 = 1e-12;
    pub const SIGMA_RESIDUAL: f64 = 1e-6;
    pub const STEP2II_MAX_RADIUS: f64 = 1.6;
    pub const BOUNDARY_PIXELS: f64 = 2.0;
    pub const RUNTIME_BAKER_GROWTH: u64 = 60;
    pub const RUNTIME_BAKER_SEGMENT: u64 = 10;
    pub const RUNTIME_HYPOTHESIS: u64 = 120;
}

fn opts() -> ModulusOptions {
    ModulusOptions::default()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

fn ln_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Minimum of a smooth periodic `g` on `[0, 2 pi)`: dense sampling, then
/// golden-section refinement around the best few samples.
fn circle_min(g: impl Fn(f64) -> f64, samples: usize) -> f64 {
    let h = TAU / samples as f64;
    let vals: Vec<f64> = (0..samples).map(|i| g(i as f64 * h)).collect();
    let mut idx: Vec<usize> = (0..samples).collect();
    idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = vals[idx[0]];
    for &i in idx.iter().take(6) {
        let (mut a, mut b) = (i as f64 * h - h, i as f64 * h + h);
        let mut c = b - gr * (b - a);
        let mut d = a + gr * (b - a);
        let (mut gc, mut gd) = (g(c), g(d));
        while b - a > 1e-13 {
            if gc < gd {
                b = d;
                d = c;
                gd = gc;
                c = b - gr * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + gr * (b - a);
                gd = g(d);
            }
        }
        best = best.min(gc).min(gd);
    }
    best
}

fn circle_max(g: impl Fn(f64) -> f64, samples: usize) -> f64 {
    -circle_min(|t| -g(t), samples)
}

/// `log |sum_{j>=1} z^{j^2} / (j^2)!|` at `z = e^{lr + i theta}`, summed
/// with the largest term scaled to one.
fn gap_log_abs(lr: f64, theta: f64) -> f64 {
    let log_term = |j: u64| (j * j) as f64 * lr - ln_factorial(j * j);
    let mut terms = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    for j in 1u64.. {
        let lt = log_term(j);
        peak = peak.max(lt);
        terms.push((j, lt));
        if lt < peak - 80.0 {
            break;
        }
    }
    let sum: Complex64 = terms
        .iter()
        .map(|&(j, lt)| Complex64::from_polar((lt - peak).exp(), ((j * j) as f64 * theta) % TAU))
        .sum();
    peak + sum.norm().ln()
}

fn gap_log_max(lr: f64) -> f64 {
    gap_log_abs(lr, 0.0)
}

fn gap_log_min(lr: f64) -> f64 {
    circle_min(|t| gap_log_abs(lr, t), 4096)
}

/// `log |sin(sqrt z)/sqrt z + z + a|`.
fn baker_log_abs(a: f64, z: Complex64) -> f64 {
    let w = z.sqrt();
    (w.sin() / w + z + a).norm().ln()
}

/// Largest index attaining `max_k |a_k| r^k` over the listed exponents.
fn oracle_nu(
    lr: f64,
    exponents: impl Iterator<Item = u64>,
    log_coeff: impl Fn(u64) -> f64,
) -> (f64, u64) {
    let mut best = (f64::NEG_INFINITY, 0);
    for k in exponents {
        let v = k as f64 * lr + log_coeff(k);
        if v >= best.0 {
            best = (v, k);
        }
    }
    best
}

fn exp_mu(lr: f64) -> (f64, u64) {
    let n = lr.exp().ceil() as u64 + 2;
    oracle_nu(lr, 0..=n, |k| -ln_factorial(k))
}

fn gap_mu(lr: f64) -> (f64, u64) {
    let j = lr.exp().sqrt().ceil() as u64 + 3;
    oracle_nu(lr, (1..=j).map(|i| i * i), |k| -ln_factorial(k))
}

fn cos_sqrt_mu(lr: f64) -> (f64, u64) {
    let n = lr.exp().sqrt().ceil() as u64 + 2;
    oracle_nu(lr, 0..=n, |k| -ln_factorial(2 * k))
}

/// Trapezoidal running logarithmic density of flagged radii, normalized
/// over the sampled window.
fn oracle_density(log_r: &[f64], flags: &[bool]) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut area = 0.0;
    for j in 1..log_r.len() {
        let ind = |b: bool| if b { 1.0 } else { 0.0 };
        area += 0.5 * (ind(flags[j - 1]) + ind(flags[j])) * (log_r[j] - log_r[j - 1]);
        out.push(area / (log_r[j] - log_r[0]));
    }
    out
}

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn within(t: Duration, secs: u64) -> bool {
    t <= Duration::from_secs(secs)
}

fn criterion_1() -> Outcome {
    let a = 10.0;
    let grid = GridSpec::new(2.0, 6.0, 64);
    let t = Instant::now();
    let f = CoefficientSeries::baker(a);
    let p = growth_profile(&f, &grid, &opts()).unwrap();
    let e = growth_exponents(&p, DEFAULT_TAIL_WINDOW, &TypeThresholds::default()).unwrap();
    let elapsed = t.elapsed();

    let mut worst = 0.0f64;
    let mut oracle_ratio = Vec::new();
    for s in &p.samples {
        let r = s.log_r.exp();
        let m = circle_max(|th| baker_log_abs(a, Complex64::from_polar(r, th)), 2048);
        worst = worst.max((s.log_m - m).abs() / (1.0 + m.abs()));
        oracle_ratio.push((m.ln() / s.log_r, m / r.sqrt()));
    }
    let tail = &oracle_ratio[oracle_ratio.len() / 2..];
    let rho_hi = tail.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
    let sigma_end = oracle_ratio.last().unwrap().1;
    let ok = worst <= tol::LOG_MODULUS_REL
        && (e.rho - 0.5).abs() <= tol::BAKER_ORDER
        && (rho_hi - 0.5).abs() <= tol::BAKER_ORDER
        && e.type_class == Some(TypeClass::Mean)
        && (tol::BAKER_TYPE.0..=tol::BAKER_TYPE.1).contains(&sigma_end)
        && within(elapsed, tol::RUNTIME_BAKER_GROWTH);
    outcome(
        ok,
        format!(
            "rho {:.5} (oracle {:.5}), type {:?}, log M / r^(1/2) -> {:.4}, max rel dev {:.1e}, {:.2?}",
            e.rho, rho_hi, e.type_class, sigma_end, worst, elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let (a, x0, count) = (10.0, 100.0, 16);
    let t = Instant::now();
    let r = baker_segment_check(a, x0, count, 1e-3).unwrap();
    let elapsed = t.elapsed();
    let f = |x: f64| x.sqrt().sin() / x.sqrt() + x + a;
    let oracle = (0..count)
        .filter(|&i| {
            let mut x = x0 * 2f64.powf(i as f64 / 2.0);
            let mut rising = true;
            for _ in 0..500 {
                if x > 2000.0 {
                    break;
                }
                let y = f(x);
                rising &= y > x;
                x = y;
            }
            rising && x > 2000.0
        })
        .count();
    let ok = oracle == count
        && r.increasing_escaping == count
        && within(elapsed, tol::RUNTIME_BAKER_SEGMENT);
    outcome(
        ok,
        format!(
            "{}/{count} increasing escaping (oracle {oracle}/{count}), {elapsed:.2?}",
            r.increasing_escaping
        ),
    )
}

fn criterion_3() -> Outcome {
    let h = HypothesisOptions {
        density_threshold: tol::DENSITY_THRESHOLD,
        ..Default::default()
    };
    let t = Instant::now();
    let e = hypothesis_check(
        &CoefficientSeries::exp(),
        0.5,
        &GridSpec::new(1.0, 5.0, 33),
        &opts(),
        &h,
    )
    .unwrap();
    let mono = CoefficientSeries::monomial(Complex64::new(3.0, 0.0), 2);
    let m = hypothesis_check(&mono, 0.1, &GridSpec::new(0.0, 4.0, 17), &opts(), &h).unwrap();
    let gap_grid = GridSpec::new(0.0, 12.0, 97);
    let g = hypothesis_check(
        &CoefficientSeries::gap_squares(),
        0.1,
        &gap_grid,
        &opts(),
        &h,
    )
    .unwrap();
    let elapsed = t.elapsed();

    // exp: log L = -r, log M = r, so every radius is exceptional.
    let exp_oracle = oracle_density(&e.log_r, &vec![true; e.log_r.len()]);
    // c z^n: L = M, never exceptional.
    let eps = 0.1;
    let radii = gap_grid.log_radii();
    let flags: Vec<bool> = radii
        .iter()
        .map(|&lr| gap_log_min(lr) <= (1.0 - eps) * gap_log_max(lr))
        .collect();
    let gap_oracle = oracle_density(&radii, &flags);
    let n = gap_oracle.len();
    let tail = &gap_oracle[n - n / 4..];
    let tail_nonincreasing = tail.windows(2).all(|w| w[1] <= w[0] + 1e-15);
    let gap_final = *gap_oracle.last().unwrap();

    let ok = e.final_density() >= tol::EXP_DENSITY_MIN
        && close(e.final_density(), *exp_oracle.last().unwrap(), 1e-12)
        && e.verdict == HypothesisVerdict::Violates
        && m.log_density.iter().all(|&d| d == 0.0)
        && gap_final < tol::DENSITY_THRESHOLD
        && tail_nonincreasing
        && (g.final_density() - gap_final).abs() <= tol::DENSITY_AGREEMENT
        && g.verdict == HypothesisVerdict::ConsistentWithHypothesis
        && within(elapsed, tol::RUNTIME_HYPOTHESIS);
    outcome(
        ok,
        format!(
            "exp {:.4}; monomial {}; gap_squares {:.5} (oracle {:.5}, tail nonincreasing {}), {:?}, {elapsed:.2?}",
            e.final_density(),
            m.final_density(),
            g.final_density(),
            gap_final,
            tail_nonincreasing,
            g.verdict
        ),
    )
}

fn criterion_4() -> Outcome {
    let grid = GridSpec::new(0.0, 6.0, 49);
    let mut violations = 0;
    let mut checked = 0;
    for spec in fatou_core::config::DEFAULT_CORPUS {
        let f = CoefficientSeries::parse(spec).unwrap();
        let p = growth_profile(&f, &grid, &opts()).unwrap();
        let r = sandwich_check(&f, &p);
        violations += r.violations.len();
        checked += r.checked;
    }
    // Closed-form sandwich: exp has M = e^r, cos sqrt z has M = cosh sqrt r.
    let mut oracle_violations = 0;
    let mut mismatches = 0;
    let exp_p = growth_profile(&CoefficientSeries::exp(), &grid, &opts()).unwrap();
    let cos_p = growth_profile(&CoefficientSeries::cos_sqrt(), &grid, &opts()).unwrap();
    for (s, c) in exp_p.samples.iter().zip(&cos_p.samples) {
        let lr = s.log_r;
        let r = lr.exp();
        let cases = [
            (r, exp_mu(lr).0, exp_mu(lr + LN_2).0, s.log_m, s.log_mu),
            (
                r.sqrt().cosh().ln(),
                cos_sqrt_mu(lr).0,
                cos_sqrt_mu(lr + LN_2).0,
                c.log_m,
                c.log_mu,
            ),
        ];
        for (m, mu, mu2, lib_m, lib_mu) in cases {
            if !(mu <= m + 1e-12 && m <= LN_2 + mu2 + 1e-12) {
                oracle_violations += 1;
            }
            if !close(m, lib_m, tol::LOG_MODULUS_REL) || !close(mu, lib_mu, tol::LOG_MODULUS_REL) {
                mismatches += 1;
            }
        }
    }
    let ok = violations == 0 && checked > 0 && oracle_violations == 0 && mismatches == 0;
    outcome(
        ok,
        format!(
            "{violations} violations over {checked} samples; closed forms: {oracle_violations} violations, {mismatches} mismatches"
        ),
    )
}

fn criterion_5() -> Outcome {
    let grid = GridSpec::new(1.0, 5.0, 33);
    let mut ok = true;
    let mut parts = Vec::new();
    for f in [
        CoefficientSeries::exp(),
        CoefficientSeries::cos_sqrt(),
        CoefficientSeries::gap_squares(),
    ] {
        let r = verify_wiman_valiron(&f, &grid, &opts()).unwrap();
        let c = &r.constants;
        ok &= r.require().is_ok() && c.k.is_finite() && c.k >= 2.0;
        parts.push(format!("{} K {:.4}", f.name(), c.k));
        if f.name() == "exp" {
            let s0 = c.s0.unwrap_or(f64::INFINITY);
            let s1 = c.s1.unwrap_or(f64::INFINITY);
            let mut bad = 0;
            for row in &r.rows {
                let lr = row.log_r;
                let (log_mu, nu) = exp_mu(lr);
                let (_, nu2) = exp_mu(lr + LN_2);
                if nu != row.nu
                    || nu2 != row.nu_2r
                    || !close(log_mu, row.log_mu, tol::LOG_MODULUS_REL)
                {
                    bad += 1;
                }
                let r_ = lr.exp();
                if lr >= s0 && LN_2 + r_ > c.log_k2 + nu2 as f64 * (lr + LN_2) {
                    bad += 1;
                }
                if lr >= s1 && log_mu + nu as f64 * lr > r_ * r_ {
                    bad += 1;
                }
            }
            ok &= bad == 0 && (c.log_k2 - (2.0 * LN_2 + c.k)).abs() < 1e-12;
            parts.push(format!("exp closed-form disagreements {bad}"));
        }
    }
    outcome(ok, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let grid = GridSpec::new(1.0, 12.0, 45);
    let m = 2.0;
    let inv = 1.0 / (2.0 * m);
    let e = verify_lemma2(&CoefficientSeries::exp(), m, &grid, &opts()).unwrap();
    let g = verify_lemma2(&CoefficientSeries::gap_squares(), m, &grid, &opts()).unwrap();

    // exp: log M(x) = x.
    let holds: Vec<(f64, bool)> = grid
        .log_radii()
        .iter()
        .map(|&lr| {
            let lhs = (-(2.0 * m).ln() + inv * lr + lr.ln()).exp();
            let lm = (inv * lr).exp();
            let rhs = m * (-(2.0 * m).ln() + inv * lm + lm.ln());
            (lr, rhs <= lhs * (1.0 + 1e-12))
        })
        .collect();
    let from = holds
        .iter()
        .rposition(|h| !h.1)
        .map_or(Some(holds[0].0), |i| holds.get(i + 1).map(|h| h.0));

    let mut gap_dev = 0.0f64;
    for row in &g.rows {
        let lr = row.log_r;
        let lhs = gap_log_max(-(2.0 * m).ln() + inv * lr + lr.ln());
        gap_dev = gap_dev.max((lhs - row.lhs).abs() / (1.0 + lhs.abs()));
    }
    let ok = e.first_passing_log_r.is_some()
        && e.first_passing_log_r == from
        && g.first_passing_log_r.is_some()
        && gap_dev <= tol::LOG_MODULUS_REL;
    outcome(
        ok,
        format!(
            "exp from log r {:?} (oracle {:?}); gap_squares from {:?}, max rel dev {gap_dev:.1e}",
            e.first_passing_log_r, from, g.first_passing_log_r
        ),
    )
}

fn criterion_7() -> Outcome {
    let p = build_sequences(
        &GrowthCurve::exp_closed_form(),
        2.0,
        256.0,
        2.0,
        8,
        Variant::HalfAlpha,
    )
    .unwrap();
    // log R_{n+1} = exp(log R_n / 4), log S_{n+1} = exp(log S_n).
    let (r2, s2) = ((256.0f64 / 4.0).exp(), 2f64.exp());
    let e_r = ((p.log_r[1].to_f64() - r2) / r2).abs();
    let e_s = ((p.log_s[1].to_f64() - s2) / s2).abs();
    // With u = log R, t = log S: u/4 - t >= log 4 + 1 and t >= 1 at n = 2
    // propagate to every later n, since e^x grows faster than 4x.
    let margin = r2 / 4.0 - s2;
    let induction = margin >= 4f64.ln() + 1.0 && s2 >= 1.0 && 256.0 / 4.0 - 2.0 >= 0.0;
    let ok = e_r <= tol::SEQUENCE_REL
        && e_s <= tol::SEQUENCE_REL
        && p.len() == 8
        && induction
        && p.property2_holds.iter().all(|&b| b);
    outcome(
        ok,
        format!(
            "rel err log R2 {e_r:.1e}, log S2 {e_s:.1e}; property holds {}/{} (oracle: all)",
            p.property2_holds.iter().filter(|&&b| b).count(),
            p.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let f = CoefficientSeries::gap_squares();
    let curve = GrowthCurve::exact(&f, &opts());
    let p = build_sequences(&curve, 2.0, 32.0, 1.0, 6, Variant::QuarterAlpha).unwrap();
    let b = 100.0f64;
    let l = lemma1_construct(&f, &p, b, &opts()).unwrap();
    let mut bad = 0;
    for rec in &l.records {
        let (_, nu_k) = gap_mu(rec.log_radius_k);
        let (_, nu_b) = gap_mu(b.ln());
        let a_n = rec.b_n / nu_k as f64;
        if nu_k != rec.nu_at_radius_k || (!rec.near_jump && nu_b != rec.nu_at_b) {
            bad += 1;
        }
        if rec.k_n > a_n || !close(a_n, rec.a_n, 1e-12) {
            bad += 1;
        }
    }
    let ok = !l.records.is_empty() && l.all_k_le_a() && bad == 0;
    outcome(
        ok,
        format!(
            "{}/{} records with k_n <= a_n, {bad} oracle disagreements",
            l.records.iter().filter(|r| r.k_le_a).count(),
            l.records.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let (lr, alpha) = (3.0, 2.0);
    let mono = CoefficientSeries::monomial(Complex64::new(3.0, 0.0), 2);
    let exact = find_sigma_step1(&mono, 1.7, alpha, &opts())
        .map(|s| s.log_sigma == 1.7)
        .unwrap_or(false);
    let not_found = matches!(
        find_sigma_step1(&CoefficientSeries::exp(), 2.0, alpha, &opts()),
        Err(Error::NotFound)
    );
    let s = find_sigma_step1(&CoefficientSeries::gap_squares(), lr, alpha, &opts()).unwrap();
    let residual = gap_log_min(s.log_sigma) - gap_log_max(lr);
    let ok = exact
        && not_found
        && residual.abs() <= tol::SIGMA_RESIDUAL
        && (lr..=alpha * lr).contains(&s.log_sigma);
    outcome(
        ok,
        format!(
            "monomial sigma = r {exact}; exp NotFound {not_found}; gap_squares log sigma {:.12}, oracle residual {residual:.2e}",
            s.log_sigma
        ),
    )
}

fn criterion_10() -> Outcome {
    let grid = GridSpec::new(0.0, 2.0, 401);
    let r = verify_step2ii(&CoefficientSeries::exp(), 2.0, &grid, &opts()).unwrap();
    // e^{r^4} >= e^{4 r} iff r^3 >= 4.
    let threshold = 4f64.powf(1.0 / 3.0);
    let oracle = grid
        .log_radii()
        .into_iter()
        .find(|lr| lr.exp() >= threshold);
    let first = r.first_passing_radius();
    let ok = first.is_some_and(|x| x <= tol::STEP2II_MAX_RADIUS && x >= threshold)
        && r.first_passing_log_r == oracle;
    outcome(
        ok,
        format!(
            "first passing r {:.6} (oracle grid point {:.6}, threshold {threshold:.6})",
            first.unwrap_or(f64::NAN),
            oracle.map_or(f64::NAN, f64::exp)
        ),
    )
}

fn criterion_11() -> Outcome {
    let n = 256;
    let window = Window::square(2.0);
    let sq = CoefficientSeries::monomial(Complex64::new(1.0, 0.0), 2);
    let field = escape_field(&sq, &window, n, n, &Budgets::default(), true).unwrap();
    let px = 4.0 / n as f64;
    let centre = |i: usize, j: usize| {
        Complex64::new(-2.0 + (i as f64 + 0.5) * px, 2.0 - (j as f64 + 0.5) * px)
    };
    let mut worst = 0.0f64;
    let mut far_mismatch = 0;
    let mut bounded = vec![false; n * n];
    for j in 0..n {
        for i in 0..n {
            let z0 = centre(i, j);
            let mut z = z0;
            let mut escaped = false;
            for _ in 0..100 {
                z = z * z;
                if z.norm() > 1e6 {
                    escaped = true;
                    break;
                }
            }
            let lib = field.cell(i, j).class;
            let off_px = (z0.norm() - 1.0).abs() / px;
            let agrees = match lib {
                OrbitClass::Bounded => !escaped,
                OrbitClass::Escaping => escaped,
                OrbitClass::Indeterminate => false,
            };
            if !agrees {
                worst = worst.max(off_px);
                if off_px > tol::BOUNDARY_PIXELS {
                    far_mismatch += 1;
                }
            }
            bounded[j * n + i] = lib == OrbitClass::Bounded;
        }
    }
    // 4-connected flood fill of the bounded cells.
    let mut seen = vec![false; n * n];
    let mut components = 0;
    let mut touching = 0;
    for start in 0..n * n {
        if !bounded[start] || seen[start] {
            continue;
        }
        components += 1;
        let mut edge = false;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            let (i, j) = (c % n, c / n);
            edge |= i == 0 || j == 0 || i == n - 1 || j == n - 1;
            let mut push = |k: usize| {
                if bounded[k] && !seen[k] {
                    seen[k] = true;
                    stack.push(k);
                }
            };
            if i > 0 {
                push(c - 1);
            }
            if i + 1 < n {
                push(c + 1);
            }
            if j > 0 {
                push(c - n);
            }
            if j + 1 < n {
                push(c + n);
            }
        }
        touching += usize::from(edge);
    }
    let probe = component_probe(&field, OrbitClass::Bounded);
    let ok = far_mismatch == 0
        && worst <= tol::BOUNDARY_PIXELS
        && probe.flagged() == 0
        && touching == 0
        && probe.components.len() == components;
    outcome(
        ok,
        format!(
            "worst disagreement {worst:.2} px from |z| = 1; {} bounded components (oracle {components}), {} flagged",
            probe.components.len(),
            probe.flagged()
        ),
    )
}

fn criterion_12() -> Outcome {
    let cfg = RunConfig::default();
    let a = run_all(&cfg).unwrap();
    let b = run_all(&cfg).unwrap();
    let ja = stamped_json(&a, &cfg.hash()).unwrap();
    let jb = stamped_json(&b, &cfg.hash()).unwrap();
    let inner = a
        .criteria
        .iter()
        .find(|c| c.id == 12)
        .is_some_and(|c| c.passed);
    let ok = ja == jb && inner && a.total == 12;
    outcome(
        ok,
        format!(
            "{} bytes, identical {}, parallel vs sequential identical {inner}, {}/{} passed",
            ja.len(),
            ja == jb,
            a.passed,
            a.total
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "baker order 1/2, mean type", criterion_1),
        (2, "baker real segment escapes", criterion_2),
        (3, "minimum-modulus hypothesis dichotomy", criterion_3),
        (4, "max term sandwich", criterion_4),
        (5, "wiman-valiron bounds", criterion_5),
        (6, "log-radius lemma", criterion_6),
        (7, "sequence recurrences", criterion_7),
        (8, "k_n <= a_n", criterion_8),
        (9, "minimum-modulus radius", criterion_9),
        (10, "power inequality threshold", criterion_10),
        (11, "z^2 escape field", criterion_11),
        (12, "determinism", criterion_12),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let o = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!o.passed);
        println!(
            "criterion {id:>2}: {} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {}/12 passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
