//! Scalar Buckley-Leverett wave groups at fixed concentration.
//!
//! For fixed `c` the saturation obeys the scalar conservation law
//! `s_t + f(s,c)_x = 0` with an S-shaped flux. The admissible solution
//! between two saturations is read off the convex envelope of `f` (lower
//! envelope for increasing s, upper for decreasing): graph-following pieces
//! are rarefaction fans and chords are shocks, automatically satisfying the
//! Oleinik chord condition. Speeds never depend on the adsorption
//! coefficient because the jump condition for `c_+ = c_-` has no alpha term.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FluxModel, State};
use crate::numeric;
use crate::tol;

/// Number of grid cells used to seed the envelope construction.
const ENVELOPE_GRID: usize = 2000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScalarError {
    #[error("sigma={sigma} violates the jump condition (chord slope {chord})")]
    SpeedMismatch { sigma: f64, chord: f64 },
    #[error("tangency polish failed: {0}")]
    NoRoot(String),
}

/// One monotone piece of an s-wave group, in order of increasing speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Shock { s_l: f64, s_r: f64, sigma: f64 },
    Rarefaction { s_l: f64, s_r: f64 },
}

impl Segment {
    pub fn left(&self) -> f64 {
        match *self {
            Segment::Shock { s_l, .. } | Segment::Rarefaction { s_l, .. } => s_l,
        }
    }

    pub fn right(&self) -> f64 {
        match *self {
            Segment::Shock { s_r, .. } | Segment::Rarefaction { s_r, .. } => s_r,
        }
    }
}

/// An Oleinik-admissible wave group connecting two saturations at fixed c.
#[derive(Debug, Clone, PartialEq)]
pub struct SWaveGroup {
    pub c: f64,
    pub s_minus: f64,
    pub s_plus: f64,
    pub segments: Vec<Segment>,
}

impl SWaveGroup {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Slowest and fastest speed in the group, None when empty.
    pub fn speed_range(&self, model: &FluxModel) -> Option<(f64, f64)> {
        let first = self.segments.first()?;
        let last = self.segments.last()?;
        let lo = match *first {
            Segment::Shock { sigma, .. } => sigma,
            Segment::Rarefaction { s_l, .. } => model.f_s(s_l, self.c),
        };
        let hi = match *last {
            Segment::Shock { sigma, .. } => sigma,
            Segment::Rarefaction { s_r, .. } => model.f_s(s_r, self.c),
        };
        Some((lo, hi))
    }

    /// Saturation at similarity coordinate xi (right-continuous at shocks).
    pub fn eval(&self, model: &FluxModel, xi: f64) -> f64 {
        for seg in &self.segments {
            match *seg {
                Segment::Shock { s_l, s_r, sigma } => {
                    if xi < sigma {
                        return s_l;
                    }
                    let _ = s_r;
                }
                Segment::Rarefaction { s_l, s_r } => {
                    let (xl, xr) = (model.f_s(s_l, self.c), model.f_s(s_r, self.c));
                    if xi < xl {
                        return s_l;
                    }
                    if xi <= xr {
                        // invert f_s on the monotone fan interval
                        let g = |s: f64| model.f_s(s, self.c) - xi;
                        return numeric::bisect(g, s_l.min(s_r), s_l.max(s_r), tol::ROOT_TOL)
                            .unwrap_or(s_r);
                    }
                }
            }
        }
        self.s_plus
    }

    /// Total variation of saturation across the group.
    pub fn total_variation(&self) -> f64 {
        self.segments.iter().map(|seg| (seg.right() - seg.left()).abs()).sum()
    }
}

/// Build the admissible wave group between `s_minus` and `s_plus` at fixed
/// concentration. Envelope breakpoints found on a 2001-point grid are
/// polished by Newton on the tangency condition to full precision.
pub fn envelope_construct(
    model: &FluxModel,
    c: f64,
    s_minus: f64,
    s_plus: f64,
) -> Result<SWaveGroup, ScalarError> {
    // Below root-finding resolution the states are the same state.
    if (s_minus - s_plus).abs() < 1e-9 {
        return Ok(SWaveGroup { c, s_minus, s_plus, segments: Vec::new() });
    }
    let increasing = s_minus < s_plus;
    // A span this short is below hull resolution; it is one elementary wave,
    // fan or shock by the curvature at its midpoint (getting the straddling
    // case wrong costs O(span^2), beneath every tolerance in play).
    if (s_plus - s_minus).abs() < 1e-5 {
        let mid = 0.5 * (s_minus + s_plus);
        let convex = model.eval(State::new(mid, c)).f_ss > 0.0;
        let seg = if convex == increasing {
            Segment::Rarefaction { s_l: s_minus, s_r: s_plus }
        } else {
            Segment::Shock { s_l: s_minus, s_r: s_plus, sigma: chord(model, c, s_minus, s_plus) }
        };
        return Ok(SWaveGroup { c, s_minus, s_plus, segments: vec![seg] });
    }
    let (lo, hi) = if increasing { (s_minus, s_plus) } else { (s_plus, s_minus) };

    // Sample the flux; orientation is handled by flipping the convexity test
    // sign: lower convex hull for increasing s, upper concave hull for
    // decreasing s.
    let n = ENVELOPE_GRID;
    let mut xs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let s = lo + (hi - lo) * (i as f64 / n as f64);
        xs.push(s);
    }
    // Hull in travel order. Reversing the traversal flips both the turn sign
    // and the envelope we want (lower convex for increasing s, upper concave
    // for decreasing s), so the pop condition is the same in both cases.
    let travel: Vec<f64> = if increasing { xs.clone() } else { xs.into_iter().rev().collect() };
    let mut hull: Vec<f64> = Vec::with_capacity(64);
    for &s in &travel {
        let fs = model.f(s, c);
        while hull.len() >= 2 {
            let s1 = hull[hull.len() - 2];
            let s2 = hull[hull.len() - 1];
            let f1 = model.f(s1, c);
            let f2 = model.f(s2, c);
            // cross product of (s2-s1, f2-f1) x (s-s1, fs-f1)
            let cross = (s2 - s1) * (fs - f1) - (f2 - f1) * (s - s1);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(s);
    }

    // Classify hull edges: near-consecutive grid points follow the graph
    // (rarefaction), longer edges are chords (shocks). Edges a few cells
    // long near a tangency are hull discretisation, not real shocks; the
    // graph-hull gap there is O(step^2).
    let grid_step = (hi - lo) / n as f64;
    let near = 4.0 * grid_step;
    let mut segments: Vec<Segment> = Vec::new();
    let mut i = 0;
    while i + 1 < hull.len() {
        let start = hull[i];
        if (hull[i + 1] - hull[i]).abs() <= near {
            let mut j = i + 1;
            while j + 1 < hull.len() && (hull[j + 1] - hull[j]).abs() <= near {
                j += 1;
            }
            segments.push(Segment::Rarefaction { s_l: start, s_r: hull[j] });
            i = j;
        } else {
            let (s_l, s_r) = (start, hull[i + 1]);
            let sigma = chord(model, c, s_l, s_r);
            segments.push(Segment::Shock { s_l, s_r, sigma });
            i += 1;
        }
    }

    polish_tangencies(model, c, s_minus, s_plus, &mut segments)?;

    // Drop zero-length fragments the polish may have produced and merge
    // adjacent fans.
    segments.retain(|seg| (seg.right() - seg.left()).abs() > 1e-12);
    let mut merged: Vec<Segment> = Vec::with_capacity(segments.len());
    for seg in segments {
        if let (Some(Segment::Rarefaction { s_l, s_r }), Segment::Rarefaction { s_r: r2, .. }) =
            (merged.last().copied(), seg)
        {
            *merged.last_mut().unwrap() = Segment::Rarefaction { s_l, s_r: r2 };
            let _ = s_r;
        } else {
            merged.push(seg);
        }
    }
    Ok(SWaveGroup { c, s_minus, s_plus, segments: merged })
}

fn chord(model: &FluxModel, c: f64, s_l: f64, s_r: f64) -> f64 {
    (model.f(s_r, c) - model.f(s_l, c)) / (s_r - s_l)
}

/// Move interior shock endpoints onto the exact tangency f_s(x) = chord.
/// The flux has a single inflection in s, so a shock can be sonic on at most
/// one side; both-interior shocks would need two inflections and are
/// rejected defensively.
fn polish_tangencies(
    model: &FluxModel,
    c: f64,
    s_minus: f64,
    s_plus: f64,
    segments: &mut [Segment],
) -> Result<(), ScalarError> {
    let is_end = |s: f64| (s - s_minus).abs() < 1e-12 || (s - s_plus).abs() < 1e-12;
    let grid_step = (s_plus - s_minus).abs() / ENVELOPE_GRID as f64;
    let m = segments.len();
    for i in 0..m {
        if let Segment::Shock { s_l, s_r, .. } = segments[i] {
            let left_free = !is_end(s_l);
            let right_free = !is_end(s_r);
            if left_free && right_free {
                // a genuine double-sided tangency needs two inflections; a
                // short stray chord is hull discretisation and joins the fan
                if (s_r - s_l).abs() <= 8.0 * grid_step {
                    segments[i] = Segment::Rarefaction { s_l, s_r };
                    continue;
                }
                return Err(ScalarError::NoRoot(format!(
                    "double-sided tangency is impossible for a single-inflection flux \
                     (span {s_minus}..{s_plus} at c={c}, chord {s_l}..{s_r})"
                )));
            }
            if !left_free && !right_free {
                continue;
            }
            // tangency at x against the fixed end e: f_s(x) (x - e) = f(x) - f(e)
            let (x0, e) = if left_free { (s_l, s_r) } else { (s_r, s_l) };
            let fe = model.f(e, c);
            let g = |x: f64| model.f_s(x, c) * (x - e) - (model.f(x, c) - fe);
            let dg = |x: f64| {
                let ev = model.eval(State::new(x, c));
                ev.f_ss * (x - e)
            };
            // bracket around the grid estimate, stepping out as needed
            let mut half = 2.0 * (s_minus - s_plus).abs() / ENVELOPE_GRID as f64;
            let mut bracket = None;
            for _ in 0..12 {
                let (a, b) = (x0 - half, x0 + half);
                let (a, b) = (a.max(0.0), b.min(1.0));
                if g(a).signum() != g(b).signum() {
                    bracket = Some((a, b));
                    break;
                }
                half *= 2.0;
            }
            let x = match bracket {
                Some((a, b)) => numeric::find_root(g, Some(dg), a, b, tol::ROOT_TOL)
                    .map_err(|err| ScalarError::NoRoot(err.to_string()))?,
                // flat region: keep the grid value
                None => x0,
            };
            let sigma = chord(model, c, x.min(e).max(0.0), e.max(x).min(1.0));
            let sigma = if (x - e).abs() > 1e-12 { chord(model, c, x, e) } else { sigma };
            if left_free {
                segments[i] = Segment::Shock { s_l: x, s_r: e, sigma };
                if i > 0 {
                    if let Segment::Rarefaction { s_l, .. } = segments[i - 1] {
                        segments[i - 1] = Segment::Rarefaction { s_l, s_r: x };
                    }
                }
            } else {
                segments[i] = Segment::Shock { s_l: e, s_r: x, sigma };
                if i + 1 < m {
                    if let Segment::Rarefaction { s_r, .. } = segments[i + 1] {
                        segments[i + 1] = Segment::Rarefaction { s_l: x, s_r };
                    }
                }
            }
        }
    }
    Ok(())
}

/// Oleinik chord condition for a single shock: for every saturation between
/// the end states, the chord from `(s_l, f(s_l))` must be at least as steep
/// as sigma. (For s_l < s_r this says the graph lies above the shock chord,
/// for s_l > s_r below it; both reduce to the same one-sided inequality.)
/// Sampled on 1001 interior points with golden-section refinement of the
/// worst point.
pub fn oleinik_check(
    model: &FluxModel,
    c: f64,
    s_l: f64,
    s_r: f64,
    sigma: f64,
) -> Result<bool, ScalarError> {
    let ch = chord(model, c, s_l, s_r);
    if (sigma - ch).abs() > 1e-10 * (1.0 + ch.abs()) {
        return Err(ScalarError::SpeedMismatch { sigma, chord: ch });
    }
    let f_l = model.f(s_l, c);
    // signed violation: positive means inadmissible
    let viol = |s: f64| {
        let slope = (model.f(s, c) - f_l) / (s - s_l);
        sigma - slope
    };
    let n = 1001;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_s = s_l;
    for i in 1..n {
        let t = i as f64 / n as f64;
        let s = s_l + (s_r - s_l) * t;
        let v = viol(s);
        if v > worst {
            worst = v;
            worst_s = s;
        }
    }
    // refine the worst violation bracketing one grid cell on each side
    let h = (s_r - s_l) / n as f64;
    let (a, b) = (worst_s - h, worst_s + h);
    let (lo, hi) = (a.min(b), a.max(b));
    let (_, neg_max) = numeric::golden_min(|s| -viol(s), lo, hi, 1e-12);
    worst = worst.max(-neg_max);
    Ok(worst <= tol::OLEINIK_TOL)
}
