//! `key = value` run configuration shared by every command.

use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::{Budgets, OrbitClass, Window};
use crate::error::{Error, Result};
use crate::growth::GridSpec;
use crate::report::sha256_hex;
use crate::sequences::Variant;
use crate::series::CoefficientSeries;

/// Numeric tolerances of the acceptance run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub baker_order_tol: f64,
    pub exp_density_min: f64,
    pub density_threshold: f64,
    pub sequence_rel_tol: f64,
    pub sigma_residual: f64,
    pub step2ii_max_radius: f64,
    pub boundary_pixels: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            baker_order_tol: 0.05,
            exp_density_min: 0.95,
            density_threshold: 0.3,
            sequence_rel_tol: 1e-12,
            sigma_residual: 1e-6,
            step2ii_max_radius: 1.6,
            boundary_pixels: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub function: String,
    pub grid: GridSpec,
    pub epsilon: f64,
    pub alpha: f64,
    pub log_r1: f64,
    pub log_s1: f64,
    pub n_max: usize,
    pub variant: Variant,
    pub b_target: f64,
    pub lemma2_m: f64,
    /// `auto`, `closed-form`, `exact` or `fitted`.
    pub curve: String,
    pub scan_bound: u64,
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub budgets: Budgets,
    pub component_class: OrbitClass,
    pub out_dir: String,
    pub deterministic: bool,
    /// `;`-separated function specs checked by the acceptance run.
    pub corpus: Vec<String>,
    pub tolerances: Tolerances,
}

pub const DEFAULT_CORPUS: [&str; 6] = [
    "exp",
    "cos_sqrt",
    "gap_squares",
    "baker(a=10)",
    "monomial(c=3,n=2)",
    "constant(c=5)",
];

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            function: "exp".into(),
            grid: GridSpec::new(0.0, 5.0, 32),
            epsilon: 0.1,
            alpha: 2.0,
            log_r1: 256.0,
            log_s1: 2.0,
            n_max: 8,
            variant: Variant::HalfAlpha,
            b_target: 100.0,
            lemma2_m: 2.0,
            curve: "auto".into(),
            scan_bound: 400,
            window: Window::square(2.0),
            width: 256,
            height: 256,
            budgets: Budgets::default(),
            component_class: OrbitClass::Bounded,
            out_dir: "out".into(),
            deterministic: true,
            corpus: DEFAULT_CORPUS.iter().map(|s| s.to_string()).collect(),
            tolerances: Tolerances::default(),
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>()
        .map_err(|e| Error::Parse(format!("{key} = '{v}': {e}")))
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::HalfAlpha => "half-alpha",
        Variant::QuarterAlpha => "quarter-alpha",
    }
}

fn class_name(c: OrbitClass) -> &'static str {
    match c {
        OrbitClass::Escaping => "escaping",
        OrbitClass::Bounded => "bounded",
        OrbitClass::Indeterminate => "indeterminate",
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let t = &mut self.tolerances;
        match key.trim() {
            "function" => self.function = v.into(),
            "grid" => self.grid = GridSpec::parse(v)?,
            "epsilon" => self.epsilon = num(key, v)?,
            "alpha" => self.alpha = num(key, v)?,
            "log_r1" => self.log_r1 = num(key, v)?,
            "log_s1" => self.log_s1 = num(key, v)?,
            "n_max" => self.n_max = num(key, v)?,
            "variant" => self.variant = Variant::parse(v)?,
            "b_target" => self.b_target = num(key, v)?,
            "lemma2_m" => self.lemma2_m = num(key, v)?,
            "curve" => match v {
                "auto" | "closed-form" | "exact" | "fitted" => self.curve = v.into(),
                _ => {
                    return Err(Error::Parse(format!(
                        "curve must be auto, closed-form, exact or fitted, got '{v}'"
                    )))
                }
            },
            "scan_bound" => self.scan_bound = num(key, v)?,
            "window" => self.window = Window::parse(v)?,
            "width" => self.width = num(key, v)?,
            "height" => self.height = num(key, v)?,
            "max_iter" => self.budgets.max_iter = num(key, v)?,
            "escape_log_threshold" => self.budgets.escape_log_threshold = num(key, v)?,
            "bounded_radius" => self.budgets.bounded_radius = num(key, v)?,
            "component_class" => self.component_class = OrbitClass::parse(v)?,
            "out_dir" => self.out_dir = v.into(),
            "deterministic" => self.deterministic = num(key, v)?,
            "corpus" => {
                self.corpus = v
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect();
            }
            "baker_order_tol" => t.baker_order_tol = num(key, v)?,
            "exp_density_min" => t.exp_density_min = num(key, v)?,
            "density_threshold" => t.density_threshold = num(key, v)?,
            "sequence_rel_tol" => t.sequence_rel_tol = num(key, v)?,
            "sigma_residual" => t.sigma_residual = num(key, v)?,
            "step2ii_max_radius" => t.step2ii_max_radius = num(key, v)?,
            "boundary_pixels" => t.boundary_pixels = num(key, v)?,
            other => return Err(Error::Parse(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Defaults overridden by the `key = value` lines of `text`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let t = &self.tolerances;
        let b = &self.budgets;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("function", self.function.clone());
        kv("grid", self.grid.to_string());
        kv("epsilon", self.epsilon.to_string());
        kv("alpha", self.alpha.to_string());
        kv("log_r1", self.log_r1.to_string());
        kv("log_s1", self.log_s1.to_string());
        kv("n_max", self.n_max.to_string());
        kv("variant", variant_name(self.variant).into());
        kv("b_target", self.b_target.to_string());
        kv("lemma2_m", self.lemma2_m.to_string());
        kv("curve", self.curve.clone());
        kv("scan_bound", self.scan_bound.to_string());
        kv("window", self.window.to_string());
        kv("width", self.width.to_string());
        kv("height", self.height.to_string());
        kv("max_iter", b.max_iter.to_string());
        kv("escape_log_threshold", b.escape_log_threshold.to_string());
        kv("bounded_radius", b.bounded_radius.to_string());
        kv("component_class", class_name(self.component_class).into());
        kv("out_dir", self.out_dir.clone());
        kv("deterministic", self.deterministic.to_string());
        kv("corpus", self.corpus.join(";"));
        kv("baker_order_tol", t.baker_order_tol.to_string());
        kv("exp_density_min", t.exp_density_min.to_string());
        kv("density_threshold", t.density_threshold.to_string());
        kv("sequence_rel_tol", t.sequence_rel_tol.to_string());
        kv("sigma_residual", t.sigma_residual.to_string());
        kv("step2ii_max_radius", t.step2ii_max_radius.to_string());
        kv("boundary_pixels", t.boundary_pixels.to_string());
        s
    }

    /// SHA-256 of the canonical text form, leaving out where results are written.
    pub fn hash(&self) -> String {
        let text: String = self
            .to_text()
            .lines()
            .filter(|l| !l.starts_with("out_dir "))
            .map(|l| format!("{l}\n"))
            .collect();
        sha256_hex(&text)
    }

    pub fn series(&self) -> Result<CoefficientSeries> {
        CoefficientSeries::parse(&self.function)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let mut c = RunConfig::default();
        c.set("function", "baker(a=10)").unwrap();
        c.set("grid", "2:6:64").unwrap();
        c.set("epsilon", "0.30000000000000004").unwrap();
        c.set("corpus", "exp; monomial(c=3,n=2)").unwrap();
        let back = RunConfig::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_eq!(c.corpus, vec!["exp", "monomial(c=3,n=2)"]);
        let mut moved = c.clone();
        moved.out_dir = "elsewhere".into();
        assert_eq!(moved.hash(), c.hash());
    }

    #[test]
    fn comments_and_errors() {
        let c = RunConfig::parse("# run\nalpha = 3 # trailing\n\n").unwrap();
        assert_eq!(c.alpha, 3.0);
        assert!(RunConfig::parse("nonsense = 1").is_err());
        assert!(RunConfig::parse("alpha 3").is_err());
    }
}
