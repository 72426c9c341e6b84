//! Wave curves of the concentration family.
//!
//! Three curve families matter for the Riemann construction:
//!
//! * c-type Hugoniot branches: states joinable to a reference state by a
//!   discontinuity with `f(s,c)/(s + alpha <a1'>) = sigma` on both sides,
//!   where `<a1'>` is the secant slope of the isotherm between the two
//!   concentrations;
//! * integral curves of the eigenvector field `r_c = (-f_c, lambda_s -
//!   lambda_c)`, the loci of c-rarefactions when `alpha > 0`;
//! * level sets of `f/s`, which are simultaneously the Hugoniot branches and
//!   integral curves of the adsorption-free system — the contact curves.
//!
//! All three form arches with a horizontal tangent where they meet the
//! coincidence locus. For the boomerang model the level at the tangent
//! construction's minimum is attained at a saddle equilibrium of the
//! eigenvector field, and the level set through it is a separatrix cross.

use thiserror::Error;

use crate::model::{
    c_eigenvector, char_speeds, coincidence_s_shifted, lambda_c0, tangent_level, Adsorption,
    FluxModel, ModelError, State,
};
use crate::numeric::{self, OdeOptions};
use crate::tol;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CurveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no intersection of the arch with c={c_target} on the {side:?} side (level {level})")]
    NoIntersection { c_target: f64, side: ArchSide, level: f64 },
    #[error("integral curve stalled at the coincidence locus before reaching c={c_target}")]
    StalledAtApex { c_target: f64 },
    #[error("curve left the unit square at ({s}, {c})")]
    LeftDomain { s: f64, c: f64 },
    #[error("numerical failure: {0}")]
    Numeric(String),
}

/// Which side of an arch relative to its apex on the coincidence locus.
/// Lower is the small-saturation side, where lambda_s > lambda_c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchSide {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    HugoniotC,
    IntegralC,
    ContactLevelSet,
}

/// Coordinate that parameterises a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Concentration,
    Saturation,
    ArcLength,
}

/// A sampled curve with one scalar value per point (shock speed, level, or
/// characteristic speed, depending on the kind).
#[derive(Debug, Clone)]
pub struct CurveSample {
    pub kind: CurveKind,
    pub param: Param,
    pub points: Vec<State>,
    pub values: Vec<f64>,
    /// Set when an integral curve stopped at the coincidence locus.
    pub hit_apex: bool,
}

/// Root of `f(s, c)/(s + offset) = level` on the requested side of the arch
/// apex at concentration `c`.
pub fn level_root(
    model: &FluxModel,
    c: f64,
    offset: f64,
    level: f64,
    side: ArchSide,
) -> Result<f64, CurveError> {
    let apex = coincidence_s_shifted(model, c, offset)?;
    let phi = |s: f64| model.f(s, c) / (s + offset) - level;
    let apex_phi = phi(apex);
    // tolerate level error of sonic anchors at the tangency
    if apex_phi < -1e-11 {
        return Err(CurveError::NoIntersection { c_target: c, side, level });
    }
    let (lo, hi) = match side {
        ArchSide::Lower => (1e-12, apex),
        ArchSide::Upper => (apex, 1.0 - 1e-12),
    };
    if phi(lo).signum() == phi(hi).signum() {
        // level tangent at the apex within roundoff
        if apex_phi.abs() < 1e-10 {
            return Ok(apex);
        }
        return Err(CurveError::NoIntersection { c_target: c, side, level });
    }
    numeric::bisect(phi, lo, hi, tol::ROOT_TOL).map_err(|e| CurveError::Numeric(e.to_string()))
}

/// State on the c-type Hugoniot branch of `u_minus` at concentration
/// `c_target`, on the requested side, together with the shock speed.
///
/// Solves `f(s_+, c_+)/(s_+ + alpha <a1'>) = sigma = f(s_-, c_-)/(s_- +
/// alpha <a1'>)`: sigma comes from the left relation, the right relation is
/// then solved for `s_+` by bracketed bisection.
pub fn hugoniot_c_branch(
    model: &FluxModel,
    ads: &Adsorption,
    u_minus: State,
    c_target: f64,
    side: ArchSide,
) -> Result<(State, f64), CurveError> {
    let m = ads.a1_secant(u_minus.c, c_target);
    let offset = ads.alpha * m;
    let sigma = model.f(u_minus.s, u_minus.c) / (u_minus.s + offset);
    let s = level_root(model, c_target, offset, sigma, side)?;
    Ok((State::new(s, c_target), sigma))
}

/// Integral curve of the concentration-family eigenvector field from `u0`
/// until the concentration reaches `c_target`, sampled adaptively.
///
/// Integration is by arc length of the normalised field, which crosses arch
/// apexes smoothly; `hit_apex` is set when the curve meets the coincidence
/// locus before `c_target` (the sign of lambda_s - lambda_c flips) and the
/// caller asked to stop there.
pub fn integral_curve(
    model: &FluxModel,
    ads: &Adsorption,
    u0: State,
    c_target: f64,
    stop_at_apex: bool,
) -> Result<CurveSample, CurveError> {
    let dir_c = (c_target - u0.c).signum();
    if dir_c == 0.0 {
        let v = char_speeds(model, ads, u0)?.1;
        return Ok(CurveSample {
            kind: CurveKind::IntegralC,
            param: Param::ArcLength,
            points: vec![u0],
            values: vec![v],
            hit_apex: false,
        });
    }
    // Orient the field so that c initially moves toward the target.
    let (_r1, r2) = c_eigenvector(model, ads, u0)?;
    let margin0 = r2; // lambda_s - lambda_c at u0
    let flip = if r2 * dir_c < 0.0 { -1.0 } else { 1.0 };
    let rhs = move |_t: f64, y: &[f64; 2]| {
        let u = State::new(y[0], y[1]);
        match c_eigenvector(model, ads, u) {
            Ok((a, b)) => {
                let n = (a * a + b * b).sqrt().max(1e-300);
                [flip * a / n, flip * b / n]
            }
            Err(_) => [0.0, 0.0],
        }
    };

    let mut points: Vec<State> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut hit_apex = false;

    // The event is the first of: reaching c_target, leaving the square, or
    // (optionally) crossing the coincidence locus.
    let event = |_t: f64, y: &[f64; 2]| {
        let u = State::new(y[0], y[1]);
        let reach = (u.c - c_target) * dir_c; // >= 0 when reached
        let out = (y[0] - 1.0).max(-y[0]).max(y[1] - 1.0).max(-y[1]) - 1e-9;
        let mut g = reach.max(out);
        if stop_at_apex {
            if let Ok((ls, lc)) = char_speeds(model, ads, u) {
                // sign flip relative to the start side
                let crossed = -(ls - lc) * margin0.signum() - tol::COINCIDENCE_BAND;
                g = g.max(crossed);
            }
        }
        g
    };

    let opts = OdeOptions { tol: tol::ODE_TOL, max_step: 0.01, max_steps: 2_000_000 };
    let res = numeric::integrate(
        rhs,
        0.0,
        [u0.s, u0.c],
        4.0, // arc-length budget; the square's diameter is sqrt(2)
        opts,
        Some(event),
        |_t, y| {
            let u = State::new(y[0], y[1]);
            if let Ok((_, lc)) = char_speeds(model, ads, u) {
                points.push(u);
                values.push(lc);
            }
        },
    )
    .map_err(|e| CurveError::Numeric(e.to_string()))?;

    let end = State::new(res.y[0], res.y[1]);
    let reached = (end.c - c_target) * dir_c > -1e-9;
    if !reached {
        if stop_at_apex {
            if let Ok((ls, lc)) = char_speeds(model, ads, end) {
                if (ls - lc) * margin0.signum() < tol::COINCIDENCE_BAND {
                    hit_apex = true;
                }
            }
        }
        if !hit_apex {
            if !end.in_unit_square() || end.s < 1e-9 || end.s > 1.0 - 1e-9 {
                return Err(CurveError::LeftDomain { s: end.s, c: end.c });
            }
            return Err(CurveError::StalledAtApex { c_target });
        }
    }
    Ok(CurveSample { kind: CurveKind::IntegralC, param: Param::ArcLength, points, values, hit_apex })
}

/// Largest contact level attainable at concentration c (the level of the
/// coincidence point): max over s of f(s,c)/s.
pub fn max_level(model: &FluxModel, c: f64) -> Result<f64, CurveError> {
    Ok(tangent_level(model, c, 0.0)?.1)
}

/// Connected component of the contact level set {f/s = f(u0)/s0} through
/// `u0`, traced by continuation in c with nearest-root tracking; apexes are
/// crossed by switching to saturation steps, and for the boomerang model at
/// the saddle level the trace passes through the saddle onto the opposite
/// branch (the separatrix continuation).
///
/// Points are ordered along the trace; for a separatrix cross the returned
/// path is the c-monotone traversal through `u0`.
pub fn contact_level_set(model: &FluxModel, u0: State) -> Result<CurveSample, CurveError> {
    let level = lambda_c0(model, u0)?;
    let mut forward = trace_level(model, u0, level, 1.0)?;
    let backward = trace_level(model, u0, level, -1.0)?;
    let mut points: Vec<State> = backward.into_iter().rev().collect();
    points.push(u0);
    points.append(&mut forward);
    let values = vec![level; points.len()];
    Ok(CurveSample {
        kind: CurveKind::ContactLevelSet,
        param: Param::Concentration,
        points,
        values,
        hit_apex: false,
    })
}

/// Trace the level set from `u0` (exclusive) in the given c-direction until
/// the domain boundary or an untraversable tangency; regular apexes turn the
/// trace around, saddle apexes are crossed onto the opposite branch.
fn trace_level(model: &FluxModel, u0: State, level: f64, dir: f64) -> Result<Vec<State>, CurveError> {
    let mut out: Vec<State> = Vec::new();
    let apex0 = coincidence_s_shifted(model, u0.c, 0.0)?;
    let mut side = if u0.s >= apex0 { ArchSide::Upper } else { ArchSide::Lower };
    let mut c = u0.c;
    let mut dir = dir;
    let saddle = saddle_info(model, level);
    let mut crossed_saddle = false;
    let mut turns = 0;
    for _ in 0..100_000 {
        let c_next = c + dir * tol::TRACE_DC;
        if c_next > 1.0 + 1e-12 || c_next < -1e-12 {
            // clamp the last step to the boundary row
            let c_edge = if dir > 0.0 { 1.0 } else { 0.0 };
            if (c_edge - c).abs() > 1e-12 {
                if let Ok(s) = level_root(model, c_edge, 0.0, level, side) {
                    out.push(State::new(s, c_edge));
                }
            }
            return Ok(out);
        }
        // At the saddle level the branches swap identity across the saddle
        // concentration (the level set is an X there): crossing it continues
        // on the opposite branch along the same tangent line.
        if let Some((cs, _)) = saddle {
            if !crossed_saddle && (c - cs) * (c_next - cs) <= 0.0 && c != cs {
                let s_saddle = coincidence_s_shifted(model, cs, 0.0)?;
                out.push(State::new(s_saddle, cs));
                side = match side {
                    ArchSide::Lower => ArchSide::Upper,
                    ArchSide::Upper => ArchSide::Lower,
                };
                crossed_saddle = true;
            }
        }
        match level_root(model, c_next, 0.0, level, side) {
            Ok(s) => {
                out.push(State::new(s, c_next));
                c = c_next;
            }
            Err(CurveError::NoIntersection { .. }) => {
                // Apex between c and c_next: locate it by bisection on the
                // attainable-level margin.
                let tau = |x: f64| max_level(model, x).unwrap_or(f64::NAN) - level;
                let c_apex = match numeric::bisect(tau, c, c_next, 1e-13) {
                    Ok(x) => x,
                    Err(_) => c, // tangency right at the current row
                };
                let s_apex = coincidence_s_shifted(model, c_apex, 0.0)?;
                out.push(State::new(s_apex, c_apex));
                let is_saddle = saddle
                    .map(|(cs, _)| (c_apex - cs).abs() < 1e-5 && !crossed_saddle)
                    .unwrap_or(false);
                side = match side {
                    ArchSide::Lower => ArchSide::Upper,
                    ArchSide::Upper => ArchSide::Lower,
                };
                if is_saddle {
                    crossed_saddle = true;
                } else {
                    dir = -dir;
                    turns += 1;
                    if turns > 1 {
                        // second turnaround: the component is closed within
                        // the strip we have already traced
                        return Ok(out);
                    }
                }
                c = c_apex;
                // step off the apex; if even the small step fails we are at a
                // tangency point of the level and must stop
                let c_try = c + dir * tol::TRACE_DC;
                if !(0.0..=1.0).contains(&c_try) {
                    return Ok(out);
                }
                if level_root(model, c_try, 0.0, level, side).is_err() {
                    return Ok(out);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(CurveError::Numeric("level-set trace did not terminate".into()))
}

/// Saddle data for the boomerang model: (c at the saddle, its level), when
/// the traced level is the saddle level.
fn saddle_info(model: &FluxModel, level: f64) -> Option<(f64, f64)> {
    let c_m = model.c_peak()?;
    let (_, tau) = tangent_level(model, c_m, 0.0).ok()?;
    if (tau - level).abs() < 1e-7 {
        Some((c_m, tau))
    } else {
        None
    }
}

/// Monotone-in-c walk along the level set of `u_minus` toward `c_plus`.
/// Returns the arrival saturation and branch side, or None when the walk
/// would require a c-turnaround (regular apex) before arriving. Saddle
/// apexes are traversed onto the opposite branch.
pub(crate) fn monotone_level_walk(
    model: &FluxModel,
    u_minus: State,
    c_plus: f64,
) -> Result<Option<(f64, ArchSide)>, CurveError> {
    let level = lambda_c0(model, u_minus)?;
    let apex0 = coincidence_s_shifted(model, u_minus.c, 0.0)?;
    let mut side = if u_minus.s >= apex0 { ArchSide::Upper } else { ArchSide::Lower };
    let dir = (c_plus - u_minus.c).signum();
    if dir == 0.0 {
        return Ok(Some((u_minus.s, side)));
    }
    let saddle = saddle_info(model, level);
    let mut crossed_saddle = false;
    let mut c = u_minus.c;
    for _ in 0..100_000 {
        let c_next =
            if dir > 0.0 { (c + tol::TRACE_DC).min(c_plus) } else { (c - tol::TRACE_DC).max(c_plus) };
        // branch identity swaps across the saddle concentration
        if let Some((cs, _)) = saddle {
            if !crossed_saddle && (c - cs) * (c_next - cs) <= 0.0 && c != cs {
                side = match side {
                    ArchSide::Lower => ArchSide::Upper,
                    ArchSide::Upper => ArchSide::Lower,
                };
                crossed_saddle = true;
            }
        }
        match level_root(model, c_next, 0.0, level, side) {
            Ok(s) => {
                if (c_next - c_plus).abs() < 1e-14 {
                    return Ok(Some((s, side)));
                }
                c = c_next;
            }
            Err(CurveError::NoIntersection { .. }) => {
                // apex in (c, c_next]: traversable only at a saddle
                let tau = |x: f64| max_level(model, x).unwrap_or(f64::NAN) - level;
                let c_apex = numeric::bisect(tau, c, c_next, 1e-13).unwrap_or(c);
                let is_saddle = saddle
                    .map(|(cs, _)| (c_apex - cs).abs() < 1e-5 && !crossed_saddle)
                    .unwrap_or(false);
                if !is_saddle {
                    return Ok(None);
                }
                crossed_saddle = true;
                side = match side {
                    ArchSide::Lower => ArchSide::Upper,
                    ArchSide::Upper => ArchSide::Lower,
                };
                c = c_apex;
                if (c - c_plus) * dir >= 0.0 {
                    let s = coincidence_s_shifted(model, c_plus, 0.0)?;
                    return Ok(Some((s, side)));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(CurveError::Numeric("monotone level walk did not terminate".into()))
}

/// The tangent-speed pair (sigma_min(alpha), sigma_max(alpha)) of the
/// boomerang traveling-wave construction: slopes of the tangents to f(., c)
/// drawn from Q(alpha) = (-alpha a1(1), 0). sigma_min minimises over c (the
/// minimiser is c = 1/2 for the symmetric mobility, verified by search, not
/// assumed), sigma_max is the tangent to the edge flux f(., 0) = f(., 1).
pub fn sigma_min_max(model: &FluxModel, ads: &Adsorption) -> Result<(f64, f64), CurveError> {
    if !model.is_boomerang() {
        return Err(CurveError::Model(ModelError::WrongFamily("boomerang")));
    }
    let offset = ads.alpha * ads.a1(1.0);
    let slope = |c: f64| match tangent_level(model, c, offset) {
        Ok((_, tau)) => tau,
        Err(_) => f64::INFINITY,
    };
    let (c_min, tau_min) = numeric::golden_min(&slope, 0.0, 1.0, 1e-10);
    let tau_peak = slope(model.c_peak().unwrap_or(c_min));
    let sigma_min = tau_min.min(tau_peak);
    if (tau_peak - tau_min).abs() > 1e-8 {
        return Err(CurveError::Numeric(format!(
            "tangent-slope minimiser {c_min} is not the mobility peak (values {tau_min} vs {tau_peak})"
        )));
    }
    let sigma_max = slope(0.0);
    Ok((sigma_min, sigma_max))
}

/// Saddle equilibrium of the contact-curve field for the boomerang model:
/// the state A where f_c = 0 and lambda_s = lambda_c, with the determinant
/// `-(f_sc)^2 + f_ss f_cc` that certifies the saddle (negative).
pub fn saddle_point_a(model: &FluxModel) -> Result<(State, f64), CurveError> {
    let c_m = model.c_peak().ok_or(CurveError::Model(ModelError::WrongFamily("boomerang")))?;
    let s = coincidence_s_shifted(model, c_m, 0.0)?;
    let a = State::new(s, c_m);
    let e = model.eval(a);
    Ok((a, -e.f_sc * e.f_sc + e.f_ss * e.f_cc))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_2_3: f64 = 0.816_496_580_927_726;
    const SQRT_1_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
    const SIGMA_U: f64 = 1.112_372_435_695_794_5;
    const S_MINUS_U: f64 = 0.883_663_493_989_480_2;
    const S_PLUS_U: f64 = 0.565_826_248_793_697_9;

    fn ads0() -> Adsorption {
        Adsorption::reference(0.0)
    }

    #[test]
    fn hugoniot_alpha_zero_is_level_set_and_reflexive() {
        let m = FluxModel::monotone();
        let u = State::new(0.85, 0.7);
        let lvl = lambda_c0(&m, u).unwrap();
        let (v, sigma) = hugoniot_c_branch(&m, &ads0(), u, 0.2, ArchSide::Upper).unwrap();
        assert!((sigma - lvl).abs() < 1e-12);
        assert!((lambda_c0(&m, v).unwrap() - lvl).abs() < 1e-10);
        // reflexivity: same concentration, same side, returns u itself
        let (back, _) = hugoniot_c_branch(&m, &ads0(), u, u.c, ArchSide::Upper).unwrap();
        assert!((back.s - u.s).abs() < 1e-10);
    }

    #[test]
    fn hugoniot_symmetry_of_roles() {
        // if U+ is on H(U-) with speed sigma, then U- is on H(U+) with the
        // same sigma. The side refers to the arch apex for the shock's own
        // isotherm secant, so place u clearly above it.
        let m = FluxModel::monotone();
        let ads = Adsorption::reference(0.07);
        let u = State::new(0.88, 0.65);
        let off = ads.alpha * ads.a1_secant(0.65, 0.25);
        assert!(u.s > coincidence_s_shifted(&m, 0.65, off).unwrap());
        let (v, sigma) = hugoniot_c_branch(&m, &ads, u, 0.25, ArchSide::Lower).unwrap();
        let (u_back, sigma_back) = hugoniot_c_branch(&m, &ads, v, u.c, ArchSide::Upper).unwrap();
        assert!((sigma - sigma_back).abs() < 1e-10);
        assert!((u_back.s - u.s).abs() < 1e-9);
    }

    #[test]
    fn hugoniot_undercompressive_anchor() {
        let m = FluxModel::boomerang();
        let u_minus = State::new(S_MINUS_U, 1.0);
        let (v, sigma) = hugoniot_c_branch(&m, &ads0(), u_minus, 0.0, ArchSide::Lower).unwrap();
        assert!((sigma - SIGMA_U).abs() < 1e-9, "sigma={sigma}");
        assert!((v.s - S_PLUS_U).abs() < 1e-9, "s+={}", v.s);
    }

    #[test]
    fn hugoniot_no_intersection_beyond_arch() {
        // monotone model: a level above the c=1 tangent level cannot reach
        // c=1 on the lower side once the arch has closed
        let m = FluxModel::monotone();
        let u = State::new(SQRT_1_2 + 1e-3, 0.0); // level close to max at c=0
        let r = hugoniot_c_branch(&m, &ads0(), u, 1.0, ArchSide::Lower);
        assert!(matches!(r, Err(CurveError::NoIntersection { .. })));
    }

    #[test]
    fn hugoniot_apex_exceeds_coincidence_for_positive_alpha() {
        let m = FluxModel::monotone();
        let ads = Adsorption::reference(0.1);
        for c in [0.2, 0.5, 0.8] {
            let s_co = crate::model::coincidence_s(&m, &ads0(), c).unwrap();
            let off = ads.alpha * ads.a1_secant(0.9, c);
            let apex = coincidence_s_shifted(&m, c, off).unwrap();
            assert!(apex > s_co, "arch apex must sit above the alpha=0 coincidence");
        }
    }

    #[test]
    fn integral_curve_alpha_zero_follows_level_set() {
        let m = FluxModel::monotone();
        let u0 = State::new(0.75, 0.6);
        let lvl = lambda_c0(&m, u0).unwrap();
        let cur = integral_curve(&m, &ads0(), u0, 0.1, false).unwrap();
        assert!(!cur.points.is_empty());
        for p in &cur.points {
            assert!((lambda_c0(&m, *p).unwrap() - lvl).abs() < 1e-8);
        }
        let end = cur.points.last().unwrap();
        assert!((end.c - 0.1).abs() < 1e-8);
    }

    #[test]
    fn integral_curve_approaches_level_set_as_alpha_shrinks() {
        let m = FluxModel::monotone();
        let u0 = State::new(0.75, 0.6);
        let lvl = lambda_c0(&m, u0).unwrap();
        let dist = |alpha: f64| {
            let ads = Adsorption::reference(alpha);
            let cur = integral_curve(&m, &ads, u0, 0.2, false).unwrap();
            // deviation of f/s from the level along the curve as a proxy for
            // the distance to the alpha=0 curve
            cur.points
                .iter()
                .map(|p| (lambda_c0(&m, *p).unwrap() - lvl).abs())
                .fold(0.0f64, f64::max)
        };
        let (d2, d1) = (dist(0.1), dist(0.05));
        assert!(d1 < d2, "closer for smaller alpha");
        let ratio = d2 / d1;
        assert!(ratio > 1.4 && ratio < 2.6, "roughly first order in alpha, got {ratio}");
    }

    #[test]
    fn integral_curve_horizontal_tangent_at_apex() {
        let m = FluxModel::monotone();
        let ads = Adsorption::reference(0.08);
        // start at a level high enough that the arch peaks before c = 1
        let u0 = State::new(0.68, 0.05);
        assert!(lambda_c0(&m, u0).unwrap() > max_level(&m, 1.0).unwrap());
        // walk up in c until the apex stops the curve
        let cur = integral_curve(&m, &ads, u0, 1.0, true).unwrap();
        if cur.hit_apex {
            let end = cur.points.last().unwrap();
            let (r1, r2) = c_eigenvector(&m, &ads, *end).unwrap();
            // dc/ds = r2/r1 vanishes at the coincidence locus
            assert!((r2 / r1).abs() < 1e-3, "tangent not horizontal: {}", r2 / r1);
        } else {
            panic!("expected the curve from the lower side to stall at the apex");
        }
    }

    #[test]
    fn contact_level_set_residual_and_span() {
        let m = FluxModel::monotone();
        let u0 = State::new(0.8, 0.5);
        let lvl = lambda_c0(&m, u0).unwrap();
        let comp = contact_level_set(&m, u0).unwrap();
        assert!(comp.points.len() > 100);
        for p in &comp.points {
            assert!((lambda_c0(&m, *p).unwrap() - lvl).abs() < 1e-10);
        }
        // the monotone arch through (0.8, 0.5) spans down to c=0 on both sides
        let c_min = comp.points.iter().map(|p| p.c).fold(f64::INFINITY, f64::min);
        assert!(c_min < 1e-9);
    }

    #[test]
    fn contact_level_set_saddle_cross() {
        let m = FluxModel::boomerang();
        let u0 = State::new(S_MINUS_U, 1.0);
        let comp = contact_level_set(&m, u0).unwrap();
        // passes through the saddle A = (sqrt(2/3), 1/2) and continues to the
        // opposite corner state (s_plus_u, 0)
        let near_a = comp
            .points
            .iter()
            .any(|p| (p.s - SQRT_2_3).abs() < 1e-3 && (p.c - 0.5).abs() < 1e-3);
        assert!(near_a, "component must pass through the saddle");
        let near_end =
            comp.points.iter().any(|p| (p.s - S_PLUS_U).abs() < 1e-3 && p.c < 1e-6);
        assert!(near_end, "separatrix continuation must reach (s_+^u, 0)");
    }

    #[test]
    fn sigma_min_max_limits_and_order() {
        let m = FluxModel::boomerang();
        let (lo0, hi0) = sigma_min_max(&m, &ads0()).unwrap();
        assert!((lo0 - SIGMA_U).abs() < 1e-9, "sigma_min(0)={lo0}");
        assert!((hi0 - 1.207_106_781_186_547_5).abs() < 1e-9, "sigma_max(0)={hi0}");
        for alpha in [0.01, 0.1] {
            let (lo, hi) = sigma_min_max(&m, &Adsorption::reference(alpha)).unwrap();
            assert!(0.0 < lo && lo < hi, "ordering fails at alpha={alpha}");
        }
    }

    #[test]
    fn saddle_point_location_and_determinant() {
        let m = FluxModel::boomerang();
        let (a, det) = saddle_point_a(&m).unwrap();
        assert!((a.s - SQRT_2_3).abs() < 1e-10);
        assert!((a.c - 0.5).abs() < 1e-12);
        assert!(det < 0.0, "determinant must certify a saddle, got {det}");
        assert!(m.eval(a).f_c.abs() < 1e-12);
    }

    #[test]
    fn monotone_walk_meets_and_blocks() {
        let m = FluxModel::monotone();
        // same-branch walk reaches the target
        let u = State::new(0.85, 0.7);
        let lvl = lambda_c0(&m, u).unwrap();
        let hit = monotone_level_walk(&m, u, 0.2).unwrap();
        assert!(hit.is_some());
        let (s, side) = hit.unwrap();
        assert_eq!(side, ArchSide::Upper);
        assert!((lambda_c0(&m, State::new(s, 0.2)).unwrap() - lvl).abs() < 1e-9);
        // walking past the apex requires a turnaround: blocked
        let u2 = State::new(0.72, 0.0); // level just above the c=1 tangent level
        let lvl2 = lambda_c0(&m, u2).unwrap();
        assert!(lvl2 > max_level(&m, 1.0).unwrap());
        assert!(monotone_level_walk(&m, u2, 1.0).unwrap().is_none());
    }

    #[test]
    fn monotone_walk_crosses_saddle_for_boomerang() {
        let m = FluxModel::boomerang();
        let u_minus = State::new(S_MINUS_U, 1.0);
        let hit = monotone_level_walk(&m, u_minus, 0.0).unwrap();
        assert!(hit.is_some());
        let (s, side) = hit.unwrap();
        assert_eq!(side, ArchSide::Lower);
        assert!((s - S_PLUS_U).abs() < 1e-6, "arrived at {s}");
        // a level below the saddle level stays on its own branch
        let u_low = State::new(0.9, 1.0);
        assert!(lambda_c0(&m, u_low).unwrap() < SIGMA_U);
        let hit_low = monotone_level_walk(&m, u_low, 0.0).unwrap();
        let (s_low, side_low) = hit_low.unwrap();
        assert_eq!(side_low, ArchSide::Upper);
        assert!(s_low > 0.8);
    }
}
