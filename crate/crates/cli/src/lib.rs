//! Command-line front end: state expressions, atom specifications, and
//! report rendering on top of `quarticles-core`.

pub mod atoms;
mod cli;
pub mod expr;
pub mod report;

pub use cli::run;
