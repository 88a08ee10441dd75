//! Exact polynomial arithmetic: dense univariate and sparse bivariate.

mod bi;
mod uni;

pub use bi::BiPoly;
pub use uni::UniPoly;
