//! Growth invariants and escape-field dynamics of transcendental entire
//! functions, computed from power-series coefficients.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod gaps;
pub mod growth;
pub mod lognum;
mod par;
pub mod report;
pub mod sequences;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use lognum::{LevelLog, LogComplex, LogScalar};
pub use series::{CoefficientSeries, Family};
