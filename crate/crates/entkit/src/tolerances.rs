//! Centralized numerical tolerances.
//!
//! Every validation threshold used by the domain types and measure
//! computations lives here, so no module carries its own ad-hoc magic numbers.

/// Pure states and local product vectors must be normalized this tightly.
pub const NORM_TOL: f64 = 1e-12;

/// Max elementwise deviation from `m == m†` accepted when validating a
/// density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Density-matrix eigenvalues may undershoot zero by at most this much.
pub const PSD_TOL: f64 = 1e-10;

/// Trace of a density matrix must equal 1 within this.
pub const TRACE_TOL: f64 = 1e-12;

/// Ensemble and mixture weights must sum to 1 within this.
pub const WEIGHT_TOL: f64 = 1e-10;

/// Eigenvalues above this count as support for the matrix logarithm and for
/// the infinite-relative-entropy test.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as exact zeros in `-Σ λ log₂ λ`.
pub const ENTROPY_EIG_CUTOFF: f64 = 1e-12;

/// Probability mass of `ρ` outside the support of `σ` above which
/// `S(ρ‖σ)` is reported as infinite.
pub const INFINITE_MASS_TOL: f64 = 1e-9;

/// Hermiticity required of the *input* to the Jacobi eigensolver. Looser
/// than [`HERMITIAN_TOL`] so matrices assembled from sums of outer products
/// pass without an explicit symmetrization step at every call site.
pub const EIG_INPUT_HERMITIAN_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius mass at which the cyclic Jacobi sweep stops.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

/// Hard cap on Jacobi sweeps; convergence is quadratic so this is generous.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Densities larger than this are refused (dense-matrix feasibility).
pub const MAX_DENSITY_DIM: usize = 1 << 12;

/// Pure states larger than this are refused.
pub const MAX_PURE_DIM: usize = 1 << 14;
