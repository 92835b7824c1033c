//! Numerical tolerances shared by the evaluators, the verification suites and
//! the tests.

/// Two sums of roots of unity agree when they differ by at most this times
/// `max(1, term_count)`.
pub const SUM_EQ_REL: f64 = 1e-9;

/// Slack on explicit-constant bounds (Weil, T_f, the infinity-cusp bound).
pub const BOUND_SLACK: f64 = 1e-10;

/// Slack on the Gauss sum bound margin.
pub const GAUSS_BOUND_SLACK: f64 = 1e-8;

/// Per-term tolerance of the smooth decomposition identity.
pub const DECOMPOSITION_REL: f64 = 1e-8;

/// Largest fitted slope accepted by the correlation-sum probe.
pub const CORRELATION_SLOPE_MAX: f64 = 0.82;

/// Relative tolerance when comparing a grid maximum with its frozen value.
pub const REGRESSION_REL: f64 = 1e-9;
