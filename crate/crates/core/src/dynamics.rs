//! Orbits, escape fields and connected components of orbit classes.
//!
//! Builtin families are iterated through their closed forms, the others
//! through the series. `sqrt` uses the principal branch, cut along the
//! negative real axis.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lognum::LN_F64_MAX;
use crate::par;
use crate::report::fmt17;
use crate::series::CoefficientSeries;

pub const MAX_RESOLUTION: usize = 2048;
pub const CONFIRM_WINDOW: usize = 3;
pub const BRANCH_NOTE: &str = "principal sqrt, branch cut on the negative real axis";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    pub max_iter: u32,
    pub escape_log_threshold: f64,
    pub bounded_radius: f64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_iter: 100,
            escape_log_threshold: 50.0,
            bounded_radius: 10.0,
        }
    }
}

impl Budgets {
    /// Scale suited to orbits that grow by roughly `a` per step.
    pub fn baker() -> Self {
        Budgets {
            max_iter: 500,
            escape_log_threshold: 2000f64.ln(),
            bounded_radius: 1000.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if !(self.bounded_radius > 0.0 && self.escape_log_threshold > self.bounded_radius.ln()) {
            return Err(Error::InvalidArgument(
                "escape log-threshold must exceed log of the bounded radius".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitClass {
    Escaping,
    Bounded,
    Indeterminate,
}

impl OrbitClass {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "escaping" => Ok(OrbitClass::Escaping),
            "bounded" => Ok(OrbitClass::Bounded),
            "indeterminate" => Ok(OrbitClass::Indeterminate),
            _ => Err(Error::Parse(format!("unknown orbit class '{s}'"))),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            OrbitClass::Escaping => "escaping",
            OrbitClass::Bounded => "bounded",
            OrbitClass::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub start: (f64, f64),
    pub classification: OrbitClass,
    pub steps_taken: u32,
    pub final_log_mag: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// One application of `f`, or the reason it could not be evaluated.
pub fn step(f: &CoefficientSeries, z: Complex64) -> std::result::Result<Complex64, String> {
    let w = match f.closed_form(z) {
        Some(w) => w,
        None => f.eval_point(z, 1e-14).map_err(|e| e.to_string())?,
    };
    if w.log_mag() > LN_F64_MAX - 1.0 {
        return Err(format!(
            "iterate overflows (log|f| = {})",
            fmt17(w.log_mag())
        ));
    }
    Ok(w.to_complex())
}

/// `z_0, f(z_0), ...` until `steps` applications or the first failure.
pub fn orbit_trajectory(f: &CoefficientSeries, z0: Complex64, steps: usize) -> Vec<Complex64> {
    let mut out = vec![z0];
    for _ in 0..steps {
        match step(f, *out.last().unwrap()) {
            Ok(z) if z.re.is_finite() && z.im.is_finite() => out.push(z),
            _ => break,
        }
    }
    out
}

fn log_abs(z: Complex64) -> f64 {
    z.norm().ln()
}

pub fn iterate_orbit(f: &CoefficientSeries, z0: Complex64, b: &Budgets) -> OrbitRecord {
    let mut z = z0;
    let mut history: Vec<f64> = vec![log_abs(z0)];
    let log_bound = b.bounded_radius.ln();
    let mut inside = history[0] <= log_bound;
    let record = |class, steps, last: f64, reason| OrbitRecord {
        start: (z0.re, z0.im),
        classification: class,
        steps_taken: steps,
        final_log_mag: last,
        reason,
    };
    for n in 1..=b.max_iter {
        let prev = *history.last().unwrap();
        match step(f, z) {
            Ok(w) => z = w,
            Err(reason) => {
                // an overflow on an increasing orbit above threshold still counts
                let rising =
                    history.len() >= CONFIRM_WINDOW && monotone_tail(&history, CONFIRM_WINDOW);
                if prev > b.escape_log_threshold && rising && reason.contains("overflows") {
                    return record(OrbitClass::Escaping, n, prev, None);
                }
                return record(OrbitClass::Indeterminate, n, prev, Some(reason));
            }
        }
        let lz = log_abs(z);
        history.push(lz);
        inside &= lz <= log_bound;
        if lz > b.escape_log_threshold
            && history.len() > CONFIRM_WINDOW
            && monotone_tail(&history, CONFIRM_WINDOW + 1)
        {
            return record(OrbitClass::Escaping, n, lz, None);
        }
    }
    let last = *history.last().unwrap();
    if inside {
        record(OrbitClass::Bounded, b.max_iter, last, None)
    } else {
        record(
            OrbitClass::Indeterminate,
            b.max_iter,
            last,
            Some("budget exhausted outside the bounded radius".into()),
        )
    }
}

/// The last `k` entries are strictly increasing.
fn monotone_tail(h: &[f64], k: usize) -> bool {
    h.len() >= k && h[h.len() - k..].windows(2).all(|w| w[1] > w[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Window {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    pub fn square(half: f64) -> Self {
        Window::new(-half, half, -half, half)
    }

    /// `re_min:re_max:im_min:im_max`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(':')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("window '{s}': {e}")))
            })
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::Parse(format!(
                "window '{s}' needs re_min:re_max:im_min:im_max"
            )));
        }
        let w = Window::new(v[0], v[1], v[2], v[3]);
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|x| x.is_finite())
            && self.re_max > self.re_min
            && self.im_max > self.im_min;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("degenerate window {self}")))
        }
    }

    /// Center of pixel `(i, j)`; row 0 is the top edge.
    pub fn pixel_center(&self, i: usize, j: usize, w: usize, h: usize) -> Complex64 {
        Complex64::new(
            self.re_min + (i as f64 + 0.5) * (self.re_max - self.re_min) / w as f64,
            self.im_max - (j as f64 + 0.5) * (self.im_max - self.im_min) / h as f64,
        )
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}",
            self.re_min, self.re_max, self.im_min, self.im_max
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub class: OrbitClass,
    pub steps: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeField {
    pub function: String,
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub budgets: Budgets,
    /// Row-major, top row first.
    pub cells: Vec<Cell>,
}

impl EscapeField {
    pub fn from_cells(
        window: Window,
        width: usize,
        height: usize,
        cells: Vec<Cell>,
    ) -> Result<Self> {
        window.validate()?;
        if cells.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} cells for a {width}x{height} raster",
                cells.len()
            )));
        }
        Ok(EscapeField {
            function: "synthetic".into(),
            window,
            width,
            height,
            budgets: Budgets::default(),
            cells,
        })
    }

    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[j * self.width + i]
    }

    pub fn count(&self, class: OrbitClass) -> usize {
        self.cells.iter().filter(|c| c.class == class).count()
    }

    /// 8-bit grey level: bounded 0, indeterminate 1, escaping from 255
    /// (immediate) down to 2 (last step of the budget).
    pub fn grey(&self, c: Cell) -> u8 {
        match c.class {
            OrbitClass::Bounded => 0,
            OrbitClass::Indeterminate => 1,
            OrbitClass::Escaping => {
                let t = (c.steps.saturating_sub(1)) as f64 / self.budgets.max_iter.max(1) as f64;
                (255.0 - 253.0 * t.clamp(0.0, 1.0)).round() as u8
            }
        }
    }

    /// Plain (P2) PGM.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.cells.chunks(self.width) {
            let line: Vec<String> = row.iter().map(|c| self.grey(*c).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// CSV `x,y,class,steps` over pixel centers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,class,steps\n");
        for j in 0..self.height {
            for i in 0..self.width {
                let z = self.window.pixel_center(i, j, self.width, self.height);
                let c = self.cell(i, j);
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt17(z.re),
                    fmt17(z.im),
                    c.class.as_str(),
                    c.steps
                );
            }
        }
        out
    }

    /// RGBA bytes for canvas display.
    pub fn to_rgba(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.cells.len() * 4);
        for c in &self.cells {
            let px = match c.class {
                OrbitClass::Bounded => [20, 30, 70, 255],
                OrbitClass::Indeterminate => [120, 120, 120, 255],
                OrbitClass::Escaping => {
                    let g = self.grey(*c);
                    [g, g / 2 + 60, 255 - g / 3, 255]
                }
            };
            out.extend_from_slice(&px);
        }
        out
    }
}

pub fn escape_field(
    f: &CoefficientSeries,
    window: &Window,
    width: usize,
    height: usize,
    budgets: &Budgets,
    parallel: bool,
) -> Result<EscapeField> {
    window.validate()?;
    budgets.validate()?;
    if width == 0 || height == 0 || width > MAX_RESOLUTION || height > MAX_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "resolution {width}x{height} outside 1..={MAX_RESOLUTION}"
        )));
    }
    let rows: Vec<usize> = (0..height).collect();
    let row = |&j: &usize| -> Vec<Cell> {
        (0..width)
            .map(|i| {
                let o = iterate_orbit(f, window.pixel_center(i, j, width, height), budgets);
                Cell {
                    class: o.classification,
                    steps: o.steps_taken,
                }
            })
            .collect()
    };
    let cells = if parallel {
        par::map(&rows, row)
    } else {
        par::map_seq(&rows, row)
    };
    Ok(EscapeField {
        function: f.name(),
        window: *window,
        width,
        height,
        budgets: *budgets,
        cells: cells.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Edges {
    pub left: bool,
    pub right: bool,
    pub top: bool,
    pub bottom: bool,
}

impl Edges {
    pub fn any(&self) -> bool {
        self.left || self.right || self.top || self.bottom
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub label: u32,
    pub pixel_count: usize,
    /// `(i_min, j_min, i_max, j_max)` in pixels.
    pub bbox: (usize, usize, usize, usize),
    pub touches: Edges,
    /// Touches the window edge: possibly unbounded at this window and resolution.
    pub possibly_unbounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub function: String,
    pub selector: OrbitClass,
    pub window: Window,
    pub components: Vec<Component>,
    /// Per-pixel label, 0 outside the selected class.
    #[serde(skip)]
    pub labels: Vec<u32>,
}

impl ComponentReport {
    pub fn flagged(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.possibly_unbounded)
            .count()
    }
}

/// 4-connected labeling in raster order: label `k` goes to the component
/// containing the `k`-th smallest unlabeled pixel index.
pub fn component_probe(field: &EscapeField, selector: OrbitClass) -> ComponentReport {
    let (w, h) = (field.width, field.height);
    let mut labels = vec![0u32; w * h];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if labels[start] != 0 || field.cells[start].class != selector {
            continue;
        }
        let label = components.len() as u32 + 1;
        labels[start] = label;
        queue.push_back(start);
        let mut count = 0;
        let mut bbox = (usize::MAX, usize::MAX, 0, 0);
        while let Some(p) = queue.pop_front() {
            count += 1;
            let (i, j) = (p % w, p / w);
            bbox = (bbox.0.min(i), bbox.1.min(j), bbox.2.max(i), bbox.3.max(j));
            let mut visit = |q: usize| {
                if labels[q] == 0 && field.cells[q].class == selector {
                    labels[q] = label;
                    queue.push_back(q);
                }
            };
            if i > 0 {
                visit(p - 1);
            }
            if i + 1 < w {
                visit(p + 1);
            }
            if j > 0 {
                visit(p - w);
            }
            if j + 1 < h {
                visit(p + w);
            }
        }
        let touches = Edges {
            left: bbox.0 == 0,
            top: bbox.1 == 0,
            right: bbox.2 == w - 1,
            bottom: bbox.3 == h - 1,
        };
        components.push(Component {
            label,
            pixel_count: count,
            bbox,
            possibly_unbounded: touches.any(),
            touches,
        });
    }
    ComponentReport {
        function: field.function.clone(),
        selector,
        window: field.window,
        components,
        labels,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedResult {
    pub x: f64,
    pub strictly_increasing: bool,
    /// Smallest `f(x_k) - x_k` seen along the tracked steps.
    pub min_increment: f64,
    pub escaping: bool,
    pub escape_steps: u32,
    /// `max_k |f^k(x + i p) - f^k(x)| / p`.
    pub divergence: f64,
    pub tracks: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentReport {
    pub a: f64,
    pub x0: f64,
    pub perturbation: f64,
    pub track_steps: usize,
    pub divergence_factor: f64,
    pub budgets: Budgets,
    pub seeds: Vec<SeedResult>,
    /// Seeds whose real orbit is strictly increasing and escaping.
    pub increasing_escaping: usize,
    /// Seeds that additionally track under the perturbation.
    pub passed: usize,
    pub pass_fraction: f64,
    pub branch: String,
    pub note: String,
}

pub const TRACK_STEPS: usize = 32;
pub const DIVERGENCE_FACTOR: f64 = 10.0;

/// Real orbits of `sin(sqrt z)/sqrt z + z + a` from seeds `x0 * 2^{i/2}`.
pub fn baker_segment_check(
    a: f64,
    x0: f64,
    count: usize,
    perturbation: f64,
) -> Result<SegmentReport> {
    if !(a > 0.0 && x0 > 0.0 && perturbation > 0.0) {
        return Err(Error::InvalidArgument(
            "need a > 0, x0 > 0 and a positive perturbation".into(),
        ));
    }
    let f = CoefficientSeries::baker(a);
    let budgets = Budgets::baker();
    let xs: Vec<f64> = (0..count).map(|i| x0 * 2f64.powf(i as f64 / 2.0)).collect();
    let seeds = par::map(&xs, |&x| {
        let real = orbit_trajectory(&f, Complex64::new(x, 0.0), TRACK_STEPS);
        let pert = orbit_trajectory(&f, Complex64::new(x, perturbation), TRACK_STEPS);
        let incs: Vec<f64> = real.windows(2).map(|p| p[1].re - p[0].re).collect();
        let strictly_increasing = real.len() == TRACK_STEPS + 1 && incs.iter().all(|&d| d > 0.0);
        let min_increment = incs.iter().copied().fold(f64::INFINITY, f64::min);
        let divergence = if pert.len() == real.len() {
            real.iter()
                .zip(&pert)
                .map(|(r, p)| (p - r).norm() / perturbation)
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        let orbit = iterate_orbit(&f, Complex64::new(x, 0.0), &budgets);
        SeedResult {
            x,
            strictly_increasing,
            min_increment,
            escaping: orbit.classification == OrbitClass::Escaping,
            escape_steps: orbit.steps_taken,
            divergence,
            tracks: divergence <= DIVERGENCE_FACTOR,
        }
    });
    let increasing_escaping = seeds
        .iter()
        .filter(|s| s.strictly_increasing && s.escaping)
        .count();
    let passed = seeds
        .iter()
        .filter(|s| s.strictly_increasing && s.escaping && s.tracks)
        .count();
    Ok(SegmentReport {
        a,
        x0,
        perturbation,
        track_steps: TRACK_STEPS,
        divergence_factor: DIVERGENCE_FACTOR,
        budgets,
        pass_fraction: if count == 0 {
            0.0
        } else {
            passed as f64 / count as f64
        },
        increasing_escaping,
        passed,
        seeds,
        branch: BRANCH_NOTE.into(),
        note: "a and x0 are chosen defaults; the segment claim needs a sufficiently large".into(),
    })
}
