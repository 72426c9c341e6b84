//! Numerical tolerances used across the crate.
//!
//! Scalar root finding resolves to near machine precision; everything built
//! on top of it (wave speeds, level residuals, ordering checks) gets looser
//! bounds that absorb the accumulated error of composition.

/// Absolute tolerance (in `s`) for bracketed root finding.
pub const ROOT_TOL: f64 = 1e-12;

/// Local error tolerance for adaptive ODE integration.
pub const ODE_TOL: f64 = 1e-10;

/// Rankine-Hugoniot residual allowed on a constructed discontinuity.
pub const RH_TOL: f64 = 1e-10;

/// Two states are "on the same contact level" when |f/s| values differ by
/// less than this.
pub const LEVEL_TOL: f64 = 1e-9;

/// Dead band around the coincidence locus: |lambda_s - lambda_c| below this
/// maps to the Boundary classification instead of a side.
pub const COINCIDENCE_BAND: f64 = 1e-9;

/// Slack allowed when checking that wave speeds are non-decreasing.
pub const ORDER_TOL: f64 = 1e-8;

/// Slack for the Oleinik chord inequality.
pub const OLEINIK_TOL: f64 = 1e-9;

/// Mismatch (in `s` at the matching section) at which the traveling-wave
/// shooting bisection stops.
pub const SHOOT_TOL: f64 = 1e-9;

/// Continuation step in `c` when tracing contact curves.
pub const TRACE_DC: f64 = 1.0 / 512.0;

/// |lambda_s - lambda_c| below which curve continuation switches from
/// c-stepping to s-stepping (arch apexes have vertical tangent in c).
pub const APEX_SWITCH: f64 = 1e-4;

/// Profiles closer than this in sup norm are the same weak solution.
pub const PROFILE_DEDUP: f64 = 1e-9;
