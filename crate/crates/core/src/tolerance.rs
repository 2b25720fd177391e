//! Numerical thresholds shared by the library, the CLI and the test suites.

/// Identity residuals (three-point, four-point, gradient roundtrip,
/// Fenchel-Young).
pub const IDENTITY_RESIDUAL: f64 = 1e-9;

/// Slack allowed below zero for a computed Bregman distance.
pub const NONNEG_SLACK: f64 = 1e-12;

/// Relative tolerance for membership in the farthest-point set.
pub const ARGMAX_REL: f64 = 1e-9;

/// Absolute tolerance for membership in the farthest-point set.
pub const ARGMAX_ABS: f64 = 1e-12;

/// Subdifferential vertices closer than this are merged.
pub const VERTEX_DEDUP: f64 = 1e-10;

/// Convergence threshold of the iterative simplex least-squares fit.
pub const SIMPLEX_FIT: f64 = 1e-12;

/// Slack in the dual-hull projection inequality.
pub const PROJECTION_INEQUALITY: f64 = 1e-8;

/// Optimality tolerance of the dual-hull projection.
pub const PROJECTION_OPT: f64 = 1e-10;

/// Monotonicity witnesses must stay above `-MONOTONE_SLACK`.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Thresholds bundled as one record; `Default` yields the constants above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub identity_residual: f64,
    pub nonneg_slack: f64,
    pub argmax_rel: f64,
    pub argmax_abs: f64,
    pub vertex_dedup: f64,
    pub simplex_fit: f64,
    pub projection_inequality: f64,
    pub monotone_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity_residual: IDENTITY_RESIDUAL,
            nonneg_slack: NONNEG_SLACK,
            argmax_rel: ARGMAX_REL,
            argmax_abs: ARGMAX_ABS,
            vertex_dedup: VERTEX_DEDUP,
            simplex_fit: SIMPLEX_FIT,
            projection_inequality: PROJECTION_INEQUALITY,
            monotone_slack: MONOTONE_SLACK,
        }
    }
}
