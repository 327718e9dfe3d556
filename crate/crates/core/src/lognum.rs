//! Log-domain magnitudes.
//!
//! Maximum moduli of transcendental functions leave the `f64` range at
//! modest radii, so every magnitude in this crate travels as its natural
//! logarithm. [`LevelLog`] goes one step further and stores iterated
//! logarithms for the recursively defined radius sequences.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `ln(f64::MAX)`; anything above overflows `exp`.
pub const LN_F64_MAX: f64 = 709.782_712_893_384;

/// `log(e^a + e^b)` without overflow.
#[inline]
pub fn logsumexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// Wrap an angle into `(-pi, pi]`.
#[inline]
pub fn wrap_phase(phase: f64) -> f64 {
    if phase > -PI && phase <= PI {
        return phase;
    }
    let tau = 2.0 * PI;
    let mut p = phase.rem_euclid(tau);
    if p > PI {
        p -= tau;
    }
    p
}

/// A nonnegative extended real stored as its natural logarithm.
/// `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScalar(pub f64);

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar(f64::NEG_INFINITY);
    pub const ONE: LogScalar = LogScalar(0.0);

    pub fn from_magnitude(x: f64) -> Self {
        debug_assert!(x >= 0.0);
        LogScalar(x.ln())
    }

    #[inline]
    pub fn log_value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Underlying magnitude; overflows to `inf` beyond the float range.
    pub fn magnitude(self) -> f64 {
        self.0.exp()
    }

    pub fn powf(self, p: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        LogScalar(self.0 * p)
    }
}

impl Add for LogScalar {
    type Output = LogScalar;
    fn add(self, rhs: Self) -> Self {
        LogScalar(logsumexp(self.0, rhs.0))
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return LogScalar::ZERO;
        }
        LogScalar(self.0 + rhs.0)
    }
}

impl Eq for LogScalar {}

impl PartialOrd for LogScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// `exp(log_mag) * exp(i * phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_mag: LogScalar,
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: LogScalar::ZERO,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        LogComplex {
            log_mag: LogScalar(log_mag),
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        let (r, theta) = z.to_polar();
        LogComplex::new(r.ln(), theta)
    }

    /// `exp(w)` for any complex exponent.
    pub fn exp_of(w: Complex64) -> Self {
        LogComplex::new(w.re, w.im)
    }

    #[inline]
    pub fn log_mag(&self) -> f64 {
        self.log_mag.0
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag.is_zero()
    }

    /// Back to a plain complex number; may overflow to infinities.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.0.exp(), self.phase)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        LogComplex::new(self.log_mag.0, self.phase + PI)
    }

    pub fn inv(&self) -> Self {
        LogComplex::new(-self.log_mag.0, -self.phase)
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag.0 + rhs.log_mag.0, self.phase + rhs.phase)
    }
}

impl Add for LogComplex {
    type Output = LogComplex;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let ratio = Complex64::from_polar(
            (small.log_mag.0 - big.log_mag.0).exp(),
            small.phase - big.phase,
        );
        let s = Complex64::new(1.0, 0.0) + ratio;
        if s.re == 0.0 && s.im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(big.log_mag.0 + s.norm().ln(), big.phase + s.arg())
    }
}

/// A positive real stored as an iterated logarithm: the represented value
/// is `exp` applied `level` times to `value`.
///
/// Canonical form keeps the lowest level at which `value` is finite, so a
/// level-0 number is an ordinary float and any higher level is beyond
/// `f64::MAX`. Ordering compares level first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelLog {
    pub level: u32,
    pub value: f64,
}

impl LevelLog {
    pub fn from_f64(x: f64) -> Self {
        LevelLog { level: 0, value: x }
    }

    fn canonical(mut self) -> Self {
        while self.level > 0 && self.value <= LN_F64_MAX {
            self.value = self.value.exp();
            self.level -= 1;
        }
        self
    }

    pub fn to_f64(&self) -> f64 {
        if self.level == 0 {
            self.value
        } else {
            f64::INFINITY
        }
    }

    pub fn is_finite_f64(&self) -> bool {
        self.level == 0 && self.value.is_finite()
    }

    pub fn exp(&self) -> Self {
        if self.level == 0 && self.value <= LN_F64_MAX {
            return LevelLog::from_f64(self.value.exp());
        }
        LevelLog {
            level: self.level + 1,
            value: self.value,
        }
    }

    /// Natural log; the represented value must be positive.
    pub fn ln(&self) -> Self {
        if self.level == 0 {
            return LevelLog::from_f64(self.value.ln());
        }
        LevelLog {
            level: self.level - 1,
            value: self.value,
        }
        .canonical()
    }

    /// `x + c` for a float `c`.
    pub fn add_f64(&self, c: f64) -> Self {
        match self.level {
            0 => LevelLog::from_f64(self.value + c),
            1 => {
                // x = e^v, x + c = e^{v + ln(1 + c e^-v)}
                if c == 0.0 {
                    return *self;
                }
                let rel = c.signum() * (c.abs().ln() - self.value).exp();
                LevelLog {
                    level: 1,
                    value: self.value + rel.ln_1p(),
                }
                .canonical()
            }
            // below one ulp of the inner exponent
            _ => *self,
        }
    }

    /// `x * c` for `c > 0`.
    pub fn mul_f64(&self, c: f64) -> Self {
        debug_assert!(c > 0.0);
        if self.level == 0 {
            return LevelLog::from_f64(self.value * c);
        }
        let inner = LevelLog {
            level: self.level - 1,
            value: self.value,
        }
        .add_f64(c.ln());
        LevelLog {
            level: inner.level + 1,
            value: inner.value,
        }
        .canonical()
    }
}

impl PartialOrd for LevelLog {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let a = self.canonical();
        let b = other.canonical();
        match a.level.cmp(&b.level) {
            Ordering::Equal => a.value.partial_cmp(&b.value),
            o => Some(o),
        }
    }
}

impl fmt::Display for LevelLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            write!(f, "{:.16e}", self.value)
        } else {
            write!(f, "exp^{}({:.16e})", self.level, self.value)
        }
    }
}
