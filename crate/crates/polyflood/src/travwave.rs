//! Traveling waves of the viscous adsorption system.
//!
//! A c-shock with speed sigma admits a viscous profile exactly when the
//! planar system
//!
//! ```text
//! s_xi = f(s, c) - sigma (s + alpha a1(1)),
//! c_xi = (sigma alpha / kappa) [a1(1) c - a1(c)],
//! ```
//!
//! has an orbit joining the corresponding equilibria. The concentration
//! equation is autonomous and strictly negative inside the strip 0 < c < 1
//! (the isotherm is concave with a1(0) = 0), so orbits flow from c = 1 to
//! c = 0 and are graphs s(c). For speeds strictly between the tangent
//! slopes sigma_min(alpha) and sigma_max(alpha), each edge carries exactly
//! two equilibria; the undercompressive connection joins the saddle at
//! c = 1 to the saddle at c = 0 and exists for a single speed, found here by
//! bisection on the sign of the saturation mismatch where the two saddle
//! manifolds meet the section c = 1/2.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{level_root, sigma_min_max, ArchSide, CurveError};
use crate::model::{Adsorption, FluxModel, ModelError, State};
use crate::numeric::{self, OdeOptions};
use crate::tol;

#[derive(Debug, Clone, Error)]
pub enum TwError {
    #[error("expected exactly two equilibria at c={c_edge} for sigma={sigma}, found {found}")]
    RootCountMismatch { c_edge: f64, sigma: f64, found: usize },
    #[error("no saddle connection in the speed bracket [{lo}, {hi}]: mismatches ({m_lo}, {m_hi})")]
    NoConnection { lo: f64, hi: f64, m_lo: f64, m_hi: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

/// The traveling-wave vector field at fixed speed.
#[derive(Debug, Clone, Copy)]
pub struct TwSystem {
    pub model: FluxModel,
    pub ads: Adsorption,
    pub kappa: f64,
    pub sigma: f64,
}

impl TwSystem {
    pub fn new(model: FluxModel, ads: Adsorption, kappa: f64, sigma: f64) -> Self {
        assert!(kappa > 0.0, "kappa must be positive");
        Self { model, ads, kappa, sigma }
    }

    /// Right-hand side (s_xi, c_xi). At alpha = 0 it degenerates to
    /// (f - sigma s, 0): every horizontal line is invariant and no profile
    /// can carry a concentration jump.
    pub fn rhs(&self, u: State) -> (f64, f64) {
        let a1_top = self.ads.alpha * self.ads.a1(1.0);
        let s_xi = self.model.f(u.s, u.c) - self.sigma * (u.s + a1_top);
        let c_xi = (self.sigma * self.ads.alpha / self.kappa)
            * (self.ads.a1(1.0) * u.c - self.ads.a1(u.c));
        (s_xi, c_xi)
    }

    /// Eigenvalue of the c-direction at a c-edge equilibrium:
    /// (sigma alpha / kappa)(a1(1) - a1'(c)).
    fn c_eigenvalue(&self, c_edge: f64) -> f64 {
        (self.sigma * self.ads.alpha / self.kappa) * (self.ads.a1(1.0) - self.ads.a1_prime(c_edge))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    Saddle,
    Repeller,
    Attractor,
}

/// An equilibrium on a concentration edge with its eigenvalues
/// (s-direction f_s - sigma, c-direction).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Equilibrium {
    pub state: State,
    pub kind: EquilibriumKind,
    pub eigen_s: f64,
    pub eigen_c: f64,
}

/// The two equilibria on an edge c in {0, 1}, ordered by saturation.
/// Errors when the speed is outside the open tangent bracket and the
/// equilibria have collided or vanished.
pub fn equilibria_at_edge(sys: &TwSystem, c_edge: f64) -> Result<Vec<Equilibrium>, TwError> {
    let offset = sys.ads.alpha * sys.ads.a1(1.0);
    let g = |s: f64| sys.model.f(s, c_edge) - sys.sigma * (s + offset);
    // the line from (-offset, 0) with slope sigma crosses the S-curve twice
    // between the tangency abscissa and the ends
    let apex = crate::model::coincidence_s_shifted(&sys.model, c_edge, offset)?;
    let mut roots = Vec::new();
    if g(1e-9).signum() != g(apex).signum() {
        roots.push(
            numeric::bisect(g, 1e-9, apex, tol::ROOT_TOL)
                .map_err(|e| TwError::Numeric(e.to_string()))?,
        );
    }
    if g(apex).signum() != g(1.0 - 1e-9).signum() {
        roots.push(
            numeric::bisect(g, apex, 1.0 - 1e-9, tol::ROOT_TOL)
                .map_err(|e| TwError::Numeric(e.to_string()))?,
        );
    }
    if roots.len() != 2 || (roots[1] - roots[0]).abs() < 1e-9 {
        return Err(TwError::RootCountMismatch {
            c_edge,
            sigma: sys.sigma,
            found: roots.len(),
        });
    }
    let eigen_c = sys.c_eigenvalue(c_edge);
    Ok(roots
        .into_iter()
        .map(|s| {
            let eigen_s = sys.model.f_s(s, c_edge) - sys.sigma;
            let kind = if eigen_s * eigen_c < 0.0 {
                EquilibriumKind::Saddle
            } else if eigen_s > 0.0 {
                EquilibriumKind::Repeller
            } else {
                EquilibriumKind::Attractor
            };
            Equilibrium { state: State::new(s, c_edge), kind, eigen_s, eigen_c }
        })
        .collect())
}

/// A computed saddle-to-saddle connection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Connection {
    pub sigma: f64,
    pub u_minus: State,
    pub u_plus: State,
    /// Orbit samples (xi, s, c), xi increasing, xi = 0 at c = 1/2.
    pub orbit: Vec<(f64, f64, f64)>,
}

/// Saddle data at both edges for a trial speed: (U-, slope of its unstable
/// manifold) and (U+, slope of its stable manifold), slopes ds/dc.
fn saddles(sys: &TwSystem) -> Result<(State, f64, State, f64), TwError> {
    let top = equilibria_at_edge(sys, 1.0)?;
    let bottom = equilibria_at_edge(sys, 0.0)?;
    // at c=1 the upper root is the saddle; at c=0 the lower root
    let u_minus = top[1];
    let u_plus = bottom[0];
    if u_minus.kind != EquilibriumKind::Saddle || u_plus.kind != EquilibriumKind::Saddle {
        return Err(TwError::RootCountMismatch {
            c_edge: if u_minus.kind != EquilibriumKind::Saddle { 1.0 } else { 0.0 },
            sigma: sys.sigma,
            found: 2,
        });
    }
    // eigenvector slope in (s, c): from (J - nu) v = 0 with the triangular
    // Jacobian [[f_s - sigma, f_c], [0, nu_c]]
    let slope = |u: State, nu: f64| {
        let e = sys.model.eval(u);
        e.f_c / (nu - (e.f_s - sys.sigma))
    };
    let m_minus = slope(u_minus.state, u_minus.eigen_c);
    let m_plus = slope(u_plus.state, u_plus.eigen_c);
    Ok((u_minus.state, m_minus, u_plus.state, m_plus))
}

const SEED_OFFSET: f64 = 1e-8;
const SECTION_C: f64 = 0.5;

/// Integrate the manifold graph s(c) from a seed to the matching section,
/// collecting samples when a sink is given. Saturations escaping the strip
/// freeze the result (the mismatch keeps its sign).
fn manifold_to_section(
    sys: &TwSystem,
    c_from: f64,
    s_from: f64,
    samples: Option<&mut Vec<(f64, f64)>>,
) -> Result<f64, TwError> {
    let dsdc = |c: f64, y: &[f64; 1]| {
        let (s_xi, c_xi) = sys.rhs(State::new(y[0], c));
        [s_xi / c_xi]
    };
    let opts = OdeOptions { tol: tol::ODE_TOL, max_step: 0.01, max_steps: 4_000_000 };
    let escape = |_c: f64, y: &[f64; 1]| {
        if y[0] < -0.2 || y[0] > 1.2 {
            1.0
        } else {
            -1.0
        }
    };
    let mut collect = samples;
    let res = numeric::integrate(
        dsdc,
        c_from,
        [s_from],
        SECTION_C,
        opts,
        Some(escape),
        |c, y| {
            if let Some(v) = collect.as_mut() {
                v.push((c, y[0]));
            }
        },
    )
    .map_err(|e| TwError::Numeric(e.to_string()))?;
    Ok(res.y[0])
}

fn mismatch_at(sys: &TwSystem) -> Result<f64, TwError> {
    let (u_minus, m_minus, u_plus, m_plus) = saddles(sys)?;
    let s_top = manifold_to_section(sys, 1.0 - SEED_OFFSET, u_minus.s - m_minus * SEED_OFFSET, None)?;
    let s_bot = manifold_to_section(sys, SEED_OFFSET, u_plus.s + m_plus * SEED_OFFSET, None)?;
    Ok(s_top - s_bot)
}

/// Locate the saddle-to-saddle connection by bisecting the wave speed on the
/// sign of the saturation mismatch at the section c = 1/2.
pub fn shoot_connection(
    model: &FluxModel,
    ads: &Adsorption,
    kappa: f64,
) -> Result<Connection, TwError> {
    assert!(ads.alpha > 0.0, "shooting requires positive adsorption");
    let (sig_lo, sig_hi) = sigma_min_max(model, ads)?;
    let eps = 1e-6 * (sig_hi - sig_lo);
    let (mut lo, mut hi) = (sig_lo + eps, sig_hi - eps);
    let sys_at = |sigma: f64| TwSystem::new(*model, *ads, kappa, sigma);
    let mut m_lo = mismatch_at(&sys_at(lo))?;
    let m_hi = mismatch_at(&sys_at(hi))?;
    if m_lo == 0.0 {
        hi = lo;
    } else if m_hi == 0.0 {
        lo = hi;
    } else if m_lo.signum() == m_hi.signum() {
        return Err(TwError::NoConnection { lo, hi, m_lo, m_hi });
    }
    let mut sigma = 0.5 * (lo + hi);
    for _ in 0..200 {
        sigma = 0.5 * (lo + hi);
        let m = mismatch_at(&sys_at(sigma))?;
        if m.abs() < tol::SHOOT_TOL || (hi - lo) < 1e-15 {
            break;
        }
        if m.signum() == m_lo.signum() {
            lo = sigma;
            m_lo = m;
        } else {
            hi = sigma;
        }
    }

    // final pass with orbit collection
    let sys = sys_at(sigma);
    let (u_minus, m_minus, u_plus, m_plus) = saddles(&sys)?;
    let mut top: Vec<(f64, f64)> = Vec::new();
    let mut bot: Vec<(f64, f64)> = Vec::new();
    manifold_to_section(&sys, 1.0 - SEED_OFFSET, u_minus.s - m_minus * SEED_OFFSET, Some(&mut top))?;
    manifold_to_section(&sys, SEED_OFFSET, u_plus.s + m_plus * SEED_OFFSET, Some(&mut bot))?;
    // attach xi by quadrature of 1/c_xi from the section
    let orbit = build_orbit(&sys, top, bot);
    Ok(Connection { sigma, u_minus, u_plus, orbit })
}

/// Merge the two half-orbits and attach the similarity coordinate:
/// xi(c) = integral from 1/2 to c of dc'/c_xi(c'), so xi increases as c
/// falls and the section sits at xi = 0. `top` is sampled with c falling
/// from 1 to the section, `bot` with c rising from 0 to it.
fn build_orbit(sys: &TwSystem, top: Vec<(f64, f64)>, bot: Vec<(f64, f64)>) -> Vec<(f64, f64, f64)> {
    let g = |c: f64| sys.rhs(State::new(0.0, c)).1; // c_xi is independent of s
    let mut out: Vec<(f64, f64, f64)> = Vec::new();
    // xi along the top half by backward trapezoid accumulation from xi = 0
    // at the section
    let mut xis = vec![0.0; top.len()];
    for i in (0..top.len().saturating_sub(1)).rev() {
        let (c0, _) = top[i];
        let (c1, _) = top[i + 1];
        xis[i] = xis[i + 1] + 0.5 * (1.0 / g(c0) + 1.0 / g(c1)) * (c0 - c1);
    }
    for (&(c, s), &xi) in top.iter().zip(&xis) {
        out.push((xi, s, c));
    }
    // bottom half reversed: c falls away from the section, xi grows
    let mut xi = 0.0;
    let mut prev_c = bot.last().map(|p| p.0).unwrap_or(SECTION_C);
    for &(c, s) in bot.iter().rev() {
        xi += 0.5 * (1.0 / g(prev_c) + 1.0 / g(c)) * (c - prev_c);
        prev_c = c;
        if (c - SECTION_C).abs() < 1e-12 && !out.is_empty() {
            continue; // the section point was emitted by the top half
        }
        out.push((xi, s, c));
    }
    out
}

/// One row of the vanishing-adsorption limit study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitRow {
    pub alpha: f64,
    pub sigma: f64,
    pub s_minus: f64,
    pub s_plus: f64,
    pub err_sigma: f64,
    pub err_s_minus: f64,
    pub err_s_plus: f64,
}

/// The limit study table together with its analytic limits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitStudy {
    pub kappa: f64,
    pub sigma_limit: f64,
    pub s_minus_limit: f64,
    pub s_plus_limit: f64,
    pub rows: Vec<LimitRow>,
}

/// Analytic limits of the connection as alpha tends to zero: the saddle
/// level sigma_min(0) and the edge states on that contact level.
pub fn limit_anchors(model: &FluxModel) -> Result<(f64, f64, f64), TwError> {
    let ads0 = Adsorption::reference(0.0);
    let (sigma_u, _) = sigma_min_max(model, &ads0)?;
    let s_minus = level_root(model, 1.0, 0.0, sigma_u, ArchSide::Upper)?;
    let s_plus = level_root(model, 0.0, 0.0, sigma_u, ArchSide::Lower)?;
    Ok((sigma_u, s_minus, s_plus))
}

/// Run the shooting problem along a decreasing alpha sequence and report the
/// distance of each connection to its vanishing-adsorption limit.
pub fn limit_study(
    model: &FluxModel,
    ads_template: &Adsorption,
    kappa: f64,
    alpha_seq: &[f64],
) -> Result<LimitStudy, TwError> {
    let (sigma_u, s_minus_u, s_plus_u) = limit_anchors(model)?;
    let mut rows = Vec::with_capacity(alpha_seq.len());
    for &alpha in alpha_seq {
        let conn = shoot_connection(model, &ads_template.with_alpha(alpha), kappa)?;
        rows.push(LimitRow {
            alpha,
            sigma: conn.sigma,
            s_minus: conn.u_minus.s,
            s_plus: conn.u_plus.s,
            err_sigma: (conn.sigma - sigma_u).abs(),
            err_s_minus: (conn.u_minus.s - s_minus_u).abs(),
            err_s_plus: (conn.u_plus.s - s_plus_u).abs(),
        });
    }
    Ok(LimitStudy {
        kappa,
        sigma_limit: sigma_u,
        s_minus_limit: s_minus_u,
        s_plus_limit: s_plus_u,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIGMA_U: f64 = 1.112_372_435_695_794_5;

    fn sys(alpha: f64, kappa: f64, sigma: f64) -> TwSystem {
        TwSystem::new(FluxModel::boomerang(), Adsorption::reference(alpha), kappa, sigma)
    }

    #[test]
    fn concentration_flow_is_downward() {
        let sys = sys(0.1, 1.0, 1.15);
        // both edges are equilibrium lines of the concentration equation
        assert_eq!(sys.rhs(State::new(0.4, 1.0)).1, 0.0);
        assert_eq!(sys.rhs(State::new(0.4, 0.0)).1, 0.0);
        for k in 1..10 {
            let c = k as f64 / 10.0;
            assert!(sys.rhs(State::new(0.4, c)).1 < 0.0, "c_xi must be negative at c={c}");
        }
    }

    #[test]
    fn edge_equilibria_classification() {
        let m = FluxModel::boomerang();
        let ads = Adsorption::reference(0.1);
        let (lo, hi) = sigma_min_max(&m, &ads).unwrap();
        let sys = sys(0.1, 1.0, 0.5 * (lo + hi));
        let top = equilibria_at_edge(&sys, 1.0).unwrap();
        let bottom = equilibria_at_edge(&sys, 0.0).unwrap();
        assert_eq!(top.len(), 2);
        assert_eq!(bottom.len(), 2);
        // c-eigenvalue signs from the isotherm slopes
        assert!(top[0].eigen_c > 0.0 && top[1].eigen_c > 0.0);
        assert!(bottom[0].eigen_c < 0.0 && bottom[1].eigen_c < 0.0);
        assert_eq!(top[0].kind, EquilibriumKind::Repeller);
        assert_eq!(top[1].kind, EquilibriumKind::Saddle);
        assert_eq!(bottom[0].kind, EquilibriumKind::Saddle);
        assert_eq!(bottom[1].kind, EquilibriumKind::Attractor);
    }

    #[test]
    fn tangent_speed_collapses_the_edge_roots() {
        let m = FluxModel::boomerang();
        let ads = Adsorption::reference(0.1);
        let (_, hi) = sigma_min_max(&m, &ads).unwrap();
        let sys = sys(0.1, 1.0, hi + 1e-4);
        assert!(matches!(
            equilibria_at_edge(&sys, 0.0),
            Err(TwError::RootCountMismatch { .. })
        ));
    }

    #[test]
    fn shoot_finds_connection_inside_bracket() {
        let m = FluxModel::boomerang();
        let ads = Adsorption::reference(0.1);
        let conn = shoot_connection(&m, &ads, 1.0).unwrap();
        let (lo, hi) = sigma_min_max(&m, &ads).unwrap();
        assert!(conn.sigma > lo && conn.sigma < hi);
        // orbit endpoints sit on the saddles
        let first = conn.orbit.first().unwrap();
        let last = conn.orbit.last().unwrap();
        assert!((first.1 - conn.u_minus.s).abs() < 1e-6);
        assert!((last.1 - conn.u_plus.s).abs() < 1e-6);
        // c strictly decreasing, xi strictly increasing along the orbit
        for w in conn.orbit.windows(2) {
            assert!(w[1].2 <= w[0].2 + 1e-12, "c must fall along the orbit");
            assert!(w[1].0 >= w[0].0 - 1e-12, "xi must rise along the orbit");
        }
        // the saddle states satisfy the jump relations of the c-shock
        let a1_top = ads.alpha * ads.a1(1.0);
        let rh_minus = m.f(conn.u_minus.s, 1.0) / (conn.u_minus.s + a1_top);
        let rh_plus = m.f(conn.u_plus.s, 0.0) / (conn.u_plus.s + a1_top);
        assert!((rh_minus - conn.sigma).abs() < 1e-8);
        assert!((rh_plus - conn.sigma).abs() < 1e-8);
    }

    #[test]
    fn mismatch_changes_sign_exactly_once_and_brackets_sigma() {
        // coarse independent scan of the shooting functional
        let m = FluxModel::boomerang();
        let ads = Adsorption::reference(0.1);
        let (lo, hi) = sigma_min_max(&m, &ads).unwrap();
        let eps = 1e-6 * (hi - lo);
        let n = 200;
        let mut signs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let sigma = (lo + eps) + ((hi - eps) - (lo + eps)) * i as f64 / n as f64;
            let sys = TwSystem::new(m, ads, 1.0, sigma);
            signs.push(mismatch_at(&sys).unwrap().signum());
        }
        let changes: Vec<usize> = signs
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] != w[1])
            .map(|(i, _)| i)
            .collect();
        assert_eq!(changes.len(), 1, "the mismatch must cross zero exactly once");
        let conn = shoot_connection(&m, &ads, 1.0).unwrap();
        let i = changes[0];
        let cell_lo = (lo + eps) + ((hi - eps) - (lo + eps)) * i as f64 / n as f64;
        let cell_hi = (lo + eps) + ((hi - eps) - (lo + eps)) * (i + 1) as f64 / n as f64;
        assert!(conn.sigma >= cell_lo && conn.sigma <= cell_hi);
    }

    #[test]
    fn limits_approach_the_saddle_level() {
        let m = FluxModel::boomerang();
        let study = limit_study(&m, &Adsorption::reference(0.1), 1.0, &[0.2, 0.1, 0.05]).unwrap();
        assert!((study.sigma_limit - SIGMA_U).abs() < 1e-9);
        let errs: Vec<f64> = study.rows.iter().map(|r| r.err_sigma).collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "sigma errors must fall: {errs:?}");
    }
}
