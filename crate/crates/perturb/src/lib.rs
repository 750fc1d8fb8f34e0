pub mod cli;
pub mod coeff;
pub mod driver;
pub mod error;
pub mod linalg;
pub mod reduce;
pub mod scalar;
pub mod series;
