//! Numerical thresholds used throughout the crate.

/// Amplitudes with modulus below this are dropped after arithmetic.
pub const PRUNE: f64 = 1e-14;
/// Default tolerance for comparing amplitudes, operators and probabilities.
pub const COMPARE: f64 = 1e-10;
/// Eigenvalues closer than this share one eigenprojector.
pub const EIGEN_CLUSTER: f64 = 1e-8;
/// A condition whose probability falls below this cannot be conditioned on.
pub const NULL_CONDITION: f64 = 1e-12;
/// Minimum probability gap reported as a discerning witness.
pub const WITNESS: f64 = 1e-6;
/// Norm below which a ket counts as zero.
pub const ZERO_NORM: f64 = 1e-12;
/// Imaginary part above which a conditional value is flagged as non-real.
pub const NON_REAL: f64 = 1e-10;
