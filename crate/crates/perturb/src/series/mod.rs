//! Truncated series: Puiseux in `x`, and bivariate Laurent–Puiseux in
//! `eps` with Puiseux coefficients, plus their Newton-line normalisation
//! and text form.

mod biseries;
mod newton;
mod puiseux;
pub mod text;

pub use biseries::BiSeries;
pub use newton::{newton_line, normalize, NewtonLine};
pub use puiseux::Puiseux;
pub(crate) use puiseux::min_opt;
