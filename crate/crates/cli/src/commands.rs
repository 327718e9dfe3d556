use std::fs;
use std::path::{Path, PathBuf};

use fatou_core::config::RunConfig;
use fatou_core::dynamics::{component_probe, escape_field, ComponentReport};
use fatou_core::gaps::{
    gap_report, hypothesis_check, GapReport, HypothesisOptions, HypothesisReport,
};
use fatou_core::growth::{
    classify_exponents, growth_exponents, growth_profile, sandwich_check, CorollaryVerdict,
    GrowthExponents, ModulusOptions, SandwichReport, TypeThresholds, DEFAULT_ORDER_BAND,
    DEFAULT_TAIL_WINDOW,
};
use fatou_core::report::stamped_json;
use fatou_core::sequences::{
    build_sequences, check_seed_condition, circle_triple, fit_growth_curve, lemma1_construct,
    special_case_seeds, verify_conclusion_ineq, verify_lemma2, verify_step2ii,
    verify_wiman_valiron, CircleTriple, ConclusionReport, GrowthCurve, Lemma1Report, RadiusReport,
    SeedCheck, SequencePair, SpecialCaseReport, Variant, WvReport, DEFAULT_OVERLAP_TOL,
};
use fatou_core::verify::run_all;
use fatou_core::{CoefficientSeries, Error};
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_PARTIAL: u8 = 2;
pub const EXIT_SEED: u8 = 3;

fn config_error(e: impl std::fmt::Display) -> u8 {
    eprintln!("config error: {e}");
    EXIT_CONFIG
}

fn write(dir: &Path, name: &str, text: &str) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

/// Writes every `(name, text)` pair under the configured output directory.
fn emit(cfg: &RunConfig, files: &[(&str, String)]) -> Result<(), u8> {
    let dir = Path::new(&cfg.out_dir);
    for (name, text) in files {
        match write(dir, name, text) {
            Ok(p) => println!("wrote {}", p.display()),
            Err(e) => {
                eprintln!("cannot write {name}: {e}");
                return Err(EXIT_CONFIG);
            }
        }
    }
    Ok(())
}

fn json<T: Serialize>(cfg: &RunConfig, body: &T) -> String {
    stamped_json(body, &cfg.hash()).expect("reports serialize")
}

fn series(cfg: &RunConfig) -> Result<CoefficientSeries, u8> {
    cfg.series().map_err(config_error)
}

/// A computation that may legitimately fail; the failure becomes data.
#[derive(Serialize)]
struct Section<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl<T> From<fatou_core::Result<T>> for Section<T> {
    fn from(r: fatou_core::Result<T>) -> Self {
        match r {
            Ok(v) => Section {
                result: Some(v),
                error: None,
            },
            Err(e) => Section {
                result: None,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    function: String,
    transcendental: bool,
    invalid_samples: usize,
    exponents: Section<GrowthExponents>,
    corollary: Option<CorollaryVerdict>,
    sandwich: SandwichReport,
}

pub fn analyze(cfg: &RunConfig) -> u8 {
    let run = || -> Result<u8, u8> {
        let f = series(cfg)?;
        let profile =
            growth_profile(&f, &cfg.grid, &ModulusOptions::default()).map_err(config_error)?;
        let exponents: Section<_> =
            growth_exponents(&profile, DEFAULT_TAIL_WINDOW, &TypeThresholds::default()).into();
        let corollary = exponents
            .result
            .as_ref()
            .map(|e| classify_exponents(e, DEFAULT_ORDER_BAND));
        if let Some(e) = &exponents.result {
            println!(
                "rho = {:.6}, lambda = {:.6}, type = {:?}",
                e.rho, e.lambda, e.type_class
            );
        }
        let report = AnalyzeReport {
            function: f.name(),
            transcendental: f.is_transcendental(),
            invalid_samples: profile.invalid_count(),
            sandwich: sandwich_check(&f, &profile),
            exponents,
            corollary,
        };
        emit(
            cfg,
            &[
                ("profile.csv", profile.to_csv()),
                ("exponents.json", json(cfg, &report)),
            ],
        )?;
        Ok(
            if report.invalid_samples > 0 || report.exponents.error.is_some() {
                EXIT_PARTIAL
            } else {
                EXIT_OK
            },
        )
    };
    run().unwrap_or_else(|c| c)
}

#[derive(Serialize)]
struct HypothesisOutput {
    hypothesis: HypothesisReport,
    gaps: GapReport,
}

pub fn hypothesis(cfg: &RunConfig) -> u8 {
    let run = || -> Result<u8, u8> {
        let f = series(cfg)?;
        let h = hypothesis_check(
            &f,
            cfg.epsilon,
            &cfg.grid,
            &ModulusOptions::default(),
            &HypothesisOptions {
                density_threshold: cfg.tolerances.density_threshold,
                ..Default::default()
            },
        )
        .map_err(config_error)?;
        println!(
            "density {:.6} at largest R, verdict {:?}",
            h.final_density(),
            h.verdict
        );
        let out = HypothesisOutput {
            gaps: gap_report(&f, cfg.scan_bound),
            hypothesis: h,
        };
        emit(
            cfg,
            &[
                ("hypothesis.csv", out.hypothesis.to_csv()),
                ("hypothesis.json", json(cfg, &out)),
            ],
        )?;
        Ok(EXIT_OK)
    };
    run().unwrap_or_else(|c| c)
}

#[derive(Serialize)]
struct SummaryRow {
    inequality: &'static str,
    holds_from: String,
}

#[derive(Serialize)]
struct SequencesOutput {
    curve: GrowthCurve,
    pair: SequencePair,
    wiman_valiron: Section<WvReport>,
    seed_condition: Section<SeedCheck>,
    lemma1: Section<Lemma1Report>,
    conclusion: Section<ConclusionReport>,
    lemma2: Section<RadiusReport>,
    step2ii: Section<RadiusReport>,
    circles: Vec<Section<CircleTriple>>,
    special_case: Section<SpecialCaseReport>,
    summary: Vec<SummaryRow>,
}

fn curve_for(cfg: &RunConfig, f: &CoefficientSeries) -> Result<GrowthCurve, u8> {
    let o = ModulusOptions::default();
    let is_exp = f.name() == "exp";
    let fitted = || -> Result<GrowthCurve, u8> {
        let profile = growth_profile(f, &cfg.grid, &o).map_err(config_error)?;
        fit_growth_curve(f, &profile, DEFAULT_OVERLAP_TOL).map_err(|e| {
            eprintln!("{e}");
            EXIT_PARTIAL
        })
    };
    match cfg.curve.as_str() {
        "closed-form" if is_exp => Ok(GrowthCurve::exp_closed_form()),
        "closed-form" => Err(config_error("closed-form curve is only available for exp")),
        "exact" => Ok(GrowthCurve::exact(f, &o)),
        "auto" if is_exp => Ok(GrowthCurve::exp_closed_form()),
        _ => fitted(),
    }
}

fn not_err<T>(s: &Section<T>) -> Option<&T> {
    s.result.as_ref()
}

pub fn sequences(cfg: &RunConfig) -> u8 {
    let run = || -> Result<u8, u8> {
        let f = series(cfg)?;
        let o = ModulusOptions::default();
        let curve = curve_for(cfg, &f)?;
        let pair = match build_sequences(
            &curve,
            cfg.alpha,
            cfg.log_r1,
            cfg.log_s1,
            cfg.n_max,
            cfg.variant,
        ) {
            Ok(p) => p,
            Err(e @ Error::SeedTooSmall { .. }) => {
                eprintln!("{e}");
                eprintln!("raise log_r1 until the first step increases log R_n");
                return Err(EXIT_SEED);
            }
            Err(e @ Error::InvalidArgument(_)) => return Err(config_error(e)),
            Err(e) => {
                eprintln!("{e}");
                return Err(EXIT_PARTIAL);
            }
        };
        let wiman_valiron: Section<_> = verify_wiman_valiron(&f, &cfg.grid, &o).into();
        let seed_condition: Section<_> = match not_err(&wiman_valiron) {
            Some(wv) => check_seed_condition(&f, &wv.constants, cfg.log_r1, cfg.alpha).into(),
            None => Err(Error::InvalidArgument(
                "needs the Wiman-Valiron constants".into(),
            ))
            .into(),
        };
        let lemma1: Section<_> = if cfg.variant == Variant::QuarterAlpha {
            lemma1_construct(&f, &pair, cfg.b_target, &o).into()
        } else {
            Err(Error::InvalidArgument(
                "k_n construction runs on the quarter-alpha variant".into(),
            ))
            .into()
        };
        let conclusion: Section<_> = match not_err(&lemma1) {
            Some(l) => verify_conclusion_ineq(&f, l).into(),
            None => Err(Error::InvalidArgument("needs k_n records".into())).into(),
        };
        let lemma2: Section<_> = verify_lemma2(&f, cfg.lemma2_m, &cfg.grid, &o).into();
        let step2ii: Section<_> = verify_step2ii(&f, cfg.alpha, &cfg.grid, &o).into();
        let circles = (1..=pair.len())
            .map(|n| circle_triple(&pair, &curve, n).into())
            .collect();
        let special_case: Section<_> = growth_profile(&f, &cfg.grid, &o)
            .and_then(|p| growth_exponents(&p, DEFAULT_TAIL_WINDOW, &TypeThresholds::default()))
            .and_then(|e| {
                special_case_seeds(&curve, &e, cfg.alpha, cfg.log_r1, cfg.log_s1, cfg.n_max)
            })
            .into();

        let from = |x: Option<String>| x.unwrap_or_else(|| "not on this run".into());
        let summary = vec![
            SummaryRow {
                inequality: "S_n <= R_n^(1/2a) or 2S_n <= R_n^(1/4a)",
                holds_from: from(pair.n1.map(|n| format!("n = {n}"))),
            },
            SummaryRow {
                inequality: "2M(r) <= K''(2r)^nu(2r)",
                holds_from: from(
                    not_err(&wiman_valiron)
                        .and_then(|w| w.constants.s0)
                        .map(|s| format!("log r = {s}")),
                ),
            },
            SummaryRow {
                inequality: "mu(r) r^nu(r) <= M(r^2)",
                holds_from: from(
                    not_err(&wiman_valiron)
                        .and_then(|w| w.constants.s1)
                        .map(|s| format!("log r = {s}")),
                ),
            },
            SummaryRow {
                inequality: "k_n <= a_n",
                holds_from: from(
                    not_err(&lemma1)
                        .filter(|l| l.all_k_le_a() && !l.records.is_empty())
                        .map(|l| format!("every recorded n ({} records)", l.records.len())),
                ),
            },
            SummaryRow {
                inequality: "nu(2S_n) <= a_n nu((8S_n)^(2k_n)) log (8S_n)^(2k_n) / (4a)",
                holds_from: from(
                    not_err(&conclusion)
                        .and_then(|c| c.n1)
                        .map(|n| format!("n = {n}")),
                ),
            },
            SummaryRow {
                inequality: "M(log r^((1/2m) r^(1/2m))) >= (...)^m",
                holds_from: from(
                    not_err(&lemma2)
                        .and_then(|r| r.first_passing_log_r)
                        .map(|s| format!("log r = {s}")),
                ),
            },
            SummaryRow {
                inequality: "M(r^(2a)) >= M(r)^(2a)",
                holds_from: from(
                    not_err(&step2ii)
                        .and_then(|r| r.first_passing_log_r)
                        .map(|s| format!("log r = {s}")),
                ),
            },
        ];
        let mut text = pair.to_text();
        for s in [&wiman_valiron] {
            if let Some(w) = not_err(s) {
                text.push_str(&w.to_text());
            }
        }
        if let Some(l) = not_err(&lemma1) {
            text.push_str(&l.to_text());
        }
        for s in [&lemma2, &step2ii] {
            if let Some(r) = not_err(s) {
                text.push_str(&r.to_text());
            }
        }
        text.push_str("summary\n");
        for row in &summary {
            text.push_str(&format!("  {:<64} {}\n", row.inequality, row.holds_from));
        }
        print!("{}", pair.to_text());
        let out = SequencesOutput {
            curve,
            pair,
            wiman_valiron,
            seed_condition,
            lemma1,
            conclusion,
            lemma2,
            step2ii,
            circles,
            special_case,
            summary,
        };
        emit(
            cfg,
            &[("sequences.json", json(cfg, &out)), ("sequences.txt", text)],
        )?;
        Ok(EXIT_OK)
    };
    run().unwrap_or_else(|c| c)
}

pub fn render(cfg: &RunConfig) -> u8 {
    let run = || -> Result<u8, u8> {
        let f = series(cfg)?;
        let field = escape_field(&f, &cfg.window, cfg.width, cfg.height, &cfg.budgets, true)
            .map_err(config_error)?;
        let comps: ComponentReport = component_probe(&field, cfg.component_class);
        println!(
            "{} components of class {:?}, {} possibly unbounded",
            comps.components.len(),
            cfg.component_class,
            comps.flagged()
        );
        emit(
            cfg,
            &[
                ("field.pgm", field.to_pgm()),
                ("field.csv", field.to_csv()),
                ("components.json", json(cfg, &comps)),
            ],
        )?;
        Ok(EXIT_OK)
    };
    run().unwrap_or_else(|c| c)
}

pub fn verify_all(cfg: &RunConfig) -> u8 {
    let run = || -> Result<u8, u8> {
        let summary = run_all(cfg).map_err(config_error)?;
        for c in &summary.criteria {
            println!(
                "criterion {:>2} {:<28} {}  {}",
                c.id,
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            );
        }
        emit(cfg, &[("verify_summary.json", json(cfg, &summary))])?;
        if let Some(first) = &summary.first_failure {
            eprintln!("first failing criterion: {first}");
            return Ok(EXIT_PARTIAL);
        }
        Ok(EXIT_OK)
    };
    run().unwrap_or_else(|c| c)
}
