//! Thresholds shared across the crate.

/// Curvature below which the Frenet frame is treated as undefined.
pub const KAPPA_MIN: f64 = 1e-9;

/// Minimum `|r1 x r2|` for a regular parametrization.
pub const REGULARITY: f64 = 1e-10;

/// `|det|` of an operator metric below which Christoffel symbols are refused.
pub const SINGULAR_DET: f64 = 1e-12;

/// `|K|` below which the second and third forms are refused as operator metrics.
pub const SINGULAR_CURVATURE: f64 = 1e-12;

/// Default exclusion around `cos phi = 0` for tube evaluations with the second form.
pub const EPS_BAND: f64 = 0.15;

/// `|cos phi|` treated as exactly zero even when the band is disabled.
pub const COS_ZERO: f64 = 1e-12;

/// Normalized residual below which the fit is declared finite type.
pub const TAU_FINITE: f64 = 1e-6;

/// Normalized residual at or above which the fit is declared infinite type.
pub const TAU_REJECT: f64 = 1e-2;

/// `max |beta|` over a grid below which a tube is classified as an anchor ring.
pub const BETA_ZERO: f64 = 1e-10;

/// Relative singular value below which the sampled normals are rank deficient.
pub const RANK_TOL: f64 = 1e-10;
