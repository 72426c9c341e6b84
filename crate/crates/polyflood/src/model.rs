//! Flux models, adsorption isotherm, and characteristic structure.
//!
//! Both built-in fractional-flow families are Corey quotients
//! `f(s,c) = s^2 / (s^2 + mu(c) (1-s)^2)` and differ only in the water/oil
//! mobility ratio `mu(c)`:
//!
//! * monotone polymer model: `mu(c) = mu0 + mu1 c`, strictly increasing, so
//!   `f_c < 0` on the interior — adding polymer always slows the water;
//! * boomerang model: `mu(c) = mu0 + amp c (1-c)`, symmetric about
//!   `c = 1/2`, so `f(s,0) = f(s,1)` and `f_c` changes sign at `c = 1/2`.
//!
//! The adsorption isotherm is a Langmuir form `a1(c) = cap c / (1 + shape c)`
//! scaled by the coefficient `alpha >= 0`. It is strictly increasing and
//! strictly concave, and `a1(0) = 0` so that `c = 0` is an equilibrium of the
//! traveling-wave system.
//!
//! Characteristic speeds of the system are `lambda_s = f_s` (saturation
//! family) and `lambda_c = f / (s + alpha a1'(c))` (concentration family).
//! They coincide on the boundary line `s = 0` and on an interior curve
//! `s = s_coinc(c)`, the geometric tangency point of `f(., c)` seen from
//! `(-alpha a1'(c), 0)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric;
use crate::tol;

/// A point (s, c) in the saturation-concentration unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub s: f64,
    pub c: f64,
}

impl State {
    pub fn new(s: f64, c: f64) -> Self {
        Self { s, c }
    }

    /// True when the state lies in the closed unit square (with slack for
    /// roundoff).
    pub fn in_unit_square(&self) -> bool {
        let eps = 1e-12;
        self.s >= -eps && self.s <= 1.0 + eps && self.c >= -eps && self.c <= 1.0 + eps
    }
}

impl std::fmt::Display for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.s, self.c)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("concentration speed undefined at s=0 with alpha=0 (state ({s}, {c}))")]
    DegenerateState { s: f64, c: f64 },
    #[error("root not found: {0}")]
    NoRoot(String),
    #[error("operation requires the {0} flux family")]
    WrongFamily(&'static str),
}

/// Value and partial derivatives of the fractional flow at a state.
#[derive(Debug, Clone, Copy)]
pub struct FluxEval {
    pub f: f64,
    pub f_s: f64,
    pub f_c: f64,
    pub f_ss: f64,
    pub f_sc: f64,
    pub f_cc: f64,
}

/// Fractional-flow family. See the module docs for the two forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FluxModel {
    MonotoneCorey { mu0: f64, mu1: f64 },
    Boomerang { mu0: f64, amp: f64 },
}

impl FluxModel {
    /// Reference monotone model: mu(c) = 1 + c.
    pub fn monotone() -> Self {
        FluxModel::MonotoneCorey { mu0: 1.0, mu1: 1.0 }
    }

    /// Reference boomerang model: mu(c) = 1 + 4 c (1-c).
    pub fn boomerang() -> Self {
        FluxModel::Boomerang { mu0: 1.0, amp: 4.0 }
    }

    pub fn is_boomerang(&self) -> bool {
        matches!(self, FluxModel::Boomerang { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FluxModel::MonotoneCorey { .. } => "monotone",
            FluxModel::Boomerang { .. } => "boomerang",
        }
    }

    /// Concentration at which f_c vanishes (boomerang only; mu is symmetric
    /// so this is always 1/2).
    pub fn c_peak(&self) -> Option<f64> {
        match self {
            FluxModel::Boomerang { .. } => Some(0.5),
            FluxModel::MonotoneCorey { .. } => None,
        }
    }

    fn mu(&self, c: f64) -> (f64, f64, f64) {
        match *self {
            FluxModel::MonotoneCorey { mu0, mu1 } => (mu0 + mu1 * c, mu1, 0.0),
            FluxModel::Boomerang { mu0, amp } => {
                (mu0 + amp * c * (1.0 - c), amp * (1.0 - 2.0 * c), -2.0 * amp)
            }
        }
    }

    /// Fractional flow and all partials up to second order, in closed form.
    pub fn eval(&self, u: State) -> FluxEval {
        let (mu, mu_c, mu_cc) = self.mu(u.c);
        let s = u.s;
        let w = 1.0 - s;
        let d = s * s + mu * w * w;
        let d2 = d * d;
        let d3 = d2 * d;
        let d_s = 2.0 * s - 2.0 * mu * w;
        let f = s * s / d;
        let f_s = 2.0 * mu * s * w / d2;
        let f_c = -s * s * w * w * mu_c / d2;
        let f_ss = 2.0 * mu * ((1.0 - 2.0 * s) * d - 2.0 * s * w * d_s) / d3;
        let f_sc = 2.0 * s * w * mu_c * (s * s - mu * w * w) / d3;
        let f_cc = -s * s * w * w * (mu_cc * d - 2.0 * w * w * mu_c * mu_c) / d3;
        FluxEval { f, f_s, f_c, f_ss, f_sc, f_cc }
    }

    /// Fractional flow alone (cheaper inner loop for envelopes).
    pub fn f(&self, s: f64, c: f64) -> f64 {
        let (mu, _, _) = self.mu(c);
        let w = 1.0 - s;
        s * s / (s * s + mu * w * w)
    }

    /// d f / d s alone.
    pub fn f_s(&self, s: f64, c: f64) -> f64 {
        let (mu, _, _) = self.mu(c);
        let w = 1.0 - s;
        let d = s * s + mu * w * w;
        2.0 * mu * s * w / (d * d)
    }
}

/// Langmuir adsorption isotherm `a1(c) = cap c / (1 + shape c)` with
/// coefficient `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Adsorption {
    pub cap: f64,
    pub shape: f64,
    pub alpha: f64,
}

impl Adsorption {
    pub fn langmuir(cap: f64, shape: f64, alpha: f64) -> Self {
        assert!(cap > 0.0 && shape > 0.0 && alpha >= 0.0, "invalid Langmuir parameters");
        Self { cap, shape, alpha }
    }

    /// Reference isotherm a1(c) = 2c/(1+c) with the given alpha.
    pub fn reference(alpha: f64) -> Self {
        Self::langmuir(2.0, 1.0, alpha)
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn a1(&self, c: f64) -> f64 {
        self.cap * c / (1.0 + self.shape * c)
    }

    pub fn a1_prime(&self, c: f64) -> f64 {
        let q = 1.0 + self.shape * c;
        self.cap / (q * q)
    }

    pub fn a1_second(&self, c: f64) -> f64 {
        let q = 1.0 + self.shape * c;
        -2.0 * self.cap * self.shape / (q * q * q)
    }

    /// Secant slope <a1'> = (a1(c2) - a1(c1)) / (c2 - c1), evaluated in a
    /// cancellation-free closed form. Degenerates to a1'(c) as c2 -> c1.
    pub fn a1_secant(&self, c1: f64, c2: f64) -> f64 {
        self.cap / ((1.0 + self.shape * c1) * (1.0 + self.shape * c2))
    }
}

/// Both characteristic speeds (lambda_s, lambda_c) at a state.
pub fn char_speeds(model: &FluxModel, ads: &Adsorption, u: State) -> Result<(f64, f64), ModelError> {
    let denom = u.s + ads.alpha * ads.a1_prime(u.c);
    if denom <= 1e-300 {
        return Err(ModelError::DegenerateState { s: u.s, c: u.c });
    }
    let e = model.eval(u);
    Ok((e.f_s, e.f / denom))
}

/// Concentration-family eigenvector r_c = (-f_c, lambda_s - lambda_c).
///
/// The saturation-family eigenvector is the constant (1, 0).
pub fn c_eigenvector(model: &FluxModel, ads: &Adsorption, u: State) -> Result<(f64, f64), ModelError> {
    let (ls, lc) = char_speeds(model, ads, u)?;
    let e = model.eval(u);
    Ok((-e.f_c, ls - lc))
}

/// lambda_c for the adsorption-free system: f/s.
pub fn lambda_c0(model: &FluxModel, u: State) -> Result<f64, ModelError> {
    if u.s <= 1e-300 {
        return Err(ModelError::DegenerateState { s: u.s, c: u.c });
    }
    Ok(model.f(u.s, u.c) / u.s)
}

/// The interior saturation where lambda_s = lambda_c at concentration `c`.
pub fn coincidence_s(model: &FluxModel, ads: &Adsorption, c: f64) -> Result<f64, ModelError> {
    coincidence_s_shifted(model, c, ads.alpha * ads.a1_prime(c))
}

/// Generalised coincidence: the unique s in (0,1) where the line from
/// `(-offset, 0)` is tangent to the graph of `f(., c)`, i.e. where
/// `f_s = f / (s + offset)`. `offset = alpha a1'(c)` gives the coincidence
/// locus, `offset = alpha <a1'>` the apex of a Hugoniot arch, and
/// `offset = alpha a1(1)` the traveling-wave tangent construction.
pub fn coincidence_s_shifted(model: &FluxModel, c: f64, offset: f64) -> Result<f64, ModelError> {
    let g = |s: f64| {
        let e = model.eval(State::new(s, c));
        e.f_s * (s + offset) - e.f
    };
    let dg = |s: f64| {
        let e = model.eval(State::new(s, c));
        e.f_ss * (s + offset)
    };
    let lo = 1e-9;
    let hi = 1.0 - 1e-9;
    numeric::find_root(g, Some(dg), lo, hi, tol::ROOT_TOL)
        .map_err(|e| ModelError::NoRoot(format!("coincidence at c={c}, offset={offset}: {e}")))
}

/// Directional derivative of lambda_c along its own eigenvector,
/// `-alpha f a1'' (lambda_s - lambda_c) / (s + alpha a1')^2`.
///
/// Identically zero when alpha = 0: the concentration family is linearly
/// degenerate without adsorption.
pub fn lin_degeneracy(model: &FluxModel, ads: &Adsorption, u: State) -> Result<f64, ModelError> {
    let denom = u.s + ads.alpha * ads.a1_prime(u.c);
    if denom <= 1e-300 {
        return Err(ModelError::DegenerateState { s: u.s, c: u.c });
    }
    let e = model.eval(u);
    let (ls, lc) = (e.f_s, e.f / denom);
    Ok(-ads.alpha * e.f * ads.a1_second(u.c) * (ls - lc) / (denom * denom))
}

/// Tangent level: the slope of the line from `(-offset, 0)` tangent to
/// `f(., c)`, together with the tangency saturation. For `offset = 0` this is
/// the maximum of `f/s` over `s`, the largest contact level attainable at
/// concentration `c`.
pub fn tangent_level(model: &FluxModel, c: f64, offset: f64) -> Result<(f64, f64), ModelError> {
    let s = coincidence_s_shifted(model, c, offset)?;
    Ok((s, model.f(s, c) / (s + offset)))
}

/// Signed side of the coincidence locus: positive in {lambda_s > lambda_c},
/// negative in {lambda_s < lambda_c}.
pub fn coincidence_margin(model: &FluxModel, ads: &Adsorption, u: State) -> Result<f64, ModelError> {
    let (ls, lc) = char_speeds(model, ads, u)?;
    Ok(ls - lc)
}
