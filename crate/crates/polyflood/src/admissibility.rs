//! Classification and admissibility of contact discontinuities.
//!
//! A c-wave of the adsorption-free system is a contact: both states share
//! the level `sigma = f/s`. Which contacts a Riemann solution may use is
//! decided by an admissibility criterion:
//!
//! * Keyfitz-Kranzer / Isaacson: sigma strictly on the same side of
//!   lambda_s at both states, plus limits of such contacts;
//! * Isaacson-Temple: both states in the same closed region
//!   {lambda_s >= lambda_c} or {lambda_s <= lambda_c};
//! * de Souza-Marchesin: the concentration varies monotonically along a
//!   contact-curve path from one state to the other (separatrix junctions at
//!   a saddle count as path continuations);
//! * vanishing adsorption: the contact is the L1 limit of solutions of the
//!   adsorption system as alpha tends to zero — decided numerically by
//!   [`vanishing_adsorption_verify`].
//!
//! For monotone models all four agree; the boomerang model's crossing
//! contacts at the saddle level split them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{monotone_level_walk, CurveError};
use crate::model::{
    char_speeds, coincidence_s, lambda_c0, Adsorption, FluxModel, ModelError, State,
};
use crate::riemann::{self, RiemannError, RiemannSolution};
use crate::tol;

#[derive(Debug, Clone, Error)]
pub enum AdmissError {
    #[error("states are not on a common contact level ({0} vs {1})")]
    NotAContact(f64, f64),
    #[error("state ({0}, {1}) is not in the region lambda_s < lambda_c")]
    WrongRegion(f64, f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("adsorption solve failed at alpha={alpha}: {source}")]
    Solve { alpha: f64, source: Box<RiemannError> },
}

/// Characteristic configuration of a c-discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactConfig {
    OneFamily,
    TwoFamily,
    Overcompressive,
    Crossing,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Admissible,
    NotAdmissible,
}

/// Admissibility criterion selector for the alpha = 0 Riemann solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    KeyfitzKranzer,
    IsaacsonTemple,
    DeSouzaMarchesin,
    /// The vanishing-adsorption criterion selects the same contacts as de
    /// Souza-Marchesin on both built-in families; solving under it delegates
    /// to the same admissibility test.
    VanishingAdsorption,
}

/// Configuration and per-criterion verdicts of one contact discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactClass {
    pub config: ContactConfig,
    pub sigma: f64,
    pub kk: Verdict,
    pub it: Verdict,
    pub dsm: Verdict,
}

impl ContactClass {
    pub fn verdict(&self, criterion: Criterion) -> Verdict {
        match criterion {
            Criterion::KeyfitzKranzer => self.kk,
            Criterion::IsaacsonTemple => self.it,
            Criterion::DeSouzaMarchesin | Criterion::VanishingAdsorption => self.dsm,
        }
    }
}

/// Side of the interior coincidence locus, with a dead band mapped to
/// Boundary to avoid classification flicker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Lower,
    Upper,
    Boundary,
}

pub(crate) fn side_of(model: &FluxModel, u: State) -> Result<Side, ModelError> {
    let ads0 = Adsorption::reference(0.0);
    let (ls, lc) = char_speeds(model, &ads0, u)?;
    let margin = ls - lc;
    Ok(if margin > tol::COINCIDENCE_BAND {
        Side::Lower
    } else if margin < -tol::COINCIDENCE_BAND {
        Side::Upper
    } else {
        Side::Boundary
    })
}

/// Classify a contact discontinuity by the characteristic configuration of
/// its two states and fill the verdicts of the three algebraic criteria.
pub fn classify_contact(
    model: &FluxModel,
    u_minus: State,
    u_plus: State,
) -> Result<ContactClass, AdmissError> {
    let lvl_minus = lambda_c0(model, u_minus)?;
    let lvl_plus = lambda_c0(model, u_plus)?;
    if (lvl_minus - lvl_plus).abs() > tol::LEVEL_TOL {
        return Err(AdmissError::NotAContact(lvl_minus, lvl_plus));
    }
    let sigma = lvl_minus;
    let side_m = side_of(model, u_minus)?;
    let side_p = side_of(model, u_plus)?;
    let config = match (side_m, side_p) {
        (Side::Boundary, _) | (_, Side::Boundary) => ContactConfig::Boundary,
        (Side::Lower, Side::Lower) => ContactConfig::OneFamily,
        (Side::Upper, Side::Upper) => ContactConfig::TwoFamily,
        (Side::Lower, Side::Upper) => ContactConfig::Overcompressive,
        (Side::Upper, Side::Lower) => ContactConfig::Crossing,
    };
    // Keyfitz-Kranzer/Isaacson and Isaacson-Temple agree on all five
    // configurations: same-side contacts pass, over/crossing fail, and a
    // boundary contact inherits admissibility from its open-region side.
    // With both states on the coincidence locus there is no open side to
    // inherit from and the contact is rejected.
    let algebraic = match config {
        ContactConfig::OneFamily | ContactConfig::TwoFamily => Verdict::Admissible,
        ContactConfig::Overcompressive | ContactConfig::Crossing => Verdict::NotAdmissible,
        ContactConfig::Boundary => {
            if side_m == Side::Boundary && side_p == Side::Boundary {
                Verdict::NotAdmissible
            } else {
                Verdict::Admissible
            }
        }
    };
    let dsm = if check_dsm(model, u_minus, u_plus)? {
        Verdict::Admissible
    } else {
        Verdict::NotAdmissible
    };
    Ok(ContactClass { config, sigma, kk: algebraic, it: algebraic, dsm })
}

/// de Souza-Marchesin admissibility: does a contact-curve path from
/// `u_minus` to `u_plus` exist along which c is monotone? Saddle separatrix
/// junctions are traversed; a regular arch apex would force c to turn
/// around and fails the test.
pub fn check_dsm(model: &FluxModel, u_minus: State, u_plus: State) -> Result<bool, AdmissError> {
    let lvl_minus = lambda_c0(model, u_minus)?;
    let lvl_plus = lambda_c0(model, u_plus)?;
    if (lvl_minus - lvl_plus).abs() > tol::LEVEL_TOL {
        return Err(AdmissError::NotAContact(lvl_minus, lvl_plus));
    }
    if (u_minus.c - u_plus.c).abs() < 1e-12 {
        // zero-strength contact connects; distinct same-c partners would
        // need a c-turnaround through the apex
        return Ok((u_minus.s - u_plus.s).abs() < 1e-9);
    }
    let arrive = |start: State| -> Result<bool, AdmissError> {
        match monotone_level_walk(model, start, u_plus.c)? {
            Some((s, _)) => Ok((s - u_plus.s).abs() < 1e-4),
            None => Ok(false),
        }
    };
    // A start on the coincidence locus belongs to both branches; try both.
    if side_of(model, u_minus)? == Side::Boundary {
        let eps = 2.0 * tol::COINCIDENCE_BAND;
        let lo = State::new((u_minus.s - eps).max(0.0), u_minus.c);
        let hi = State::new((u_minus.s + eps).min(1.0), u_minus.c);
        return Ok(arrive(lo)? || arrive(hi)? || arrive(u_minus)?);
    }
    arrive(u_minus)
}

/// The persistent rarefaction spread that obstructs vanishing-adsorption
/// convergence of a crossing contact: |f_s(U*) - f_s(U-)| where U* is the
/// coincidence state at the left concentration. Defined for
/// U- in {lambda_s < lambda_c}.
pub fn crossing_gap(model: &FluxModel, u_minus: State) -> Result<f64, AdmissError> {
    if side_of(model, u_minus)? != Side::Upper {
        return Err(AdmissError::WrongRegion(u_minus.s, u_minus.c));
    }
    let ads0 = Adsorption::reference(0.0);
    let s_star = coincidence_s(model, &ads0, u_minus.c)?;
    let f_star = model.f_s(s_star, u_minus.c);
    Ok((f_star - model.f_s(u_minus.s, u_minus.c)).abs())
}

/// Decision thresholds for the vanishing-adsorption verifier.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AdThresholds {
    /// Admissible when the last distance is below this fraction of the first...
    pub decay_ratio: f64,
    /// ...and below this fraction of window-width x state-diameter.
    pub small_fraction: f64,
    /// Not admissible when the last distance stays above this fraction of
    /// the first.
    pub persist_ratio: f64,
}

impl Default for AdThresholds {
    fn default() -> Self {
        Self { decay_ratio: 0.05, small_fraction: 0.02, persist_ratio: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdVerdict {
    Admissible,
    NotAdmissible,
    Inconclusive,
}

/// Report of one vanishing-adsorption verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdReport {
    pub config: ContactConfig,
    pub kk: Verdict,
    pub it: Verdict,
    pub dsm: Verdict,
    pub vanishing_adsorption: AdVerdict,
    pub alphas: Vec<f64>,
    pub l1: Vec<f64>,
    /// Crossing-gap spread when the left state is in {lambda_s < lambda_c}.
    pub delta: Option<f64>,
}

/// Vanishing-adsorption admissibility, decided numerically: solve the
/// adsorption-model Riemann problem with the contact's end states for each
/// alpha in a decreasing sequence and measure the L1 distance to the contact
/// step function on the window at t = 1. Distances shrinking to zero mean
/// the contact is a limit of admissible adsorption solutions; distances
/// bounded away from zero mean it is not.
pub fn vanishing_adsorption_verify(
    model: &FluxModel,
    ads_template: &Adsorption,
    u_minus: State,
    u_plus: State,
    alpha_seq: &[f64],
    window: (f64, f64),
    thresholds: AdThresholds,
) -> Result<AdReport, AdmissError> {
    assert!(!alpha_seq.is_empty(), "alpha sequence must be non-empty");
    assert!(
        alpha_seq.windows(2).all(|w| w[1] < w[0]) && *alpha_seq.last().unwrap() > 0.0,
        "alpha sequence must be strictly decreasing and positive"
    );
    let class = classify_contact(model, u_minus, u_plus)?;
    let contact = RiemannSolution::single_contact(model, u_minus, u_plus, class)
        .map_err(|e| AdmissError::Solve { alpha: 0.0, source: Box::new(e) })?;
    let mut l1 = Vec::with_capacity(alpha_seq.len());
    for &alpha in alpha_seq {
        let ads = ads_template.with_alpha(alpha);
        let sol = riemann::solve_malpha(model, &ads, u_minus, u_plus)
            .map_err(|e| AdmissError::Solve { alpha, source: Box::new(e) })?;
        l1.push(riemann::l1_distance(&sol, &contact, window));
    }
    let first = l1[0];
    let last = *l1.last().unwrap();
    let diameter = (u_plus.s - u_minus.s).abs() + (u_plus.c - u_minus.c).abs();
    let scale = thresholds.small_fraction * (window.1 - window.0).abs() * diameter;
    let verdict = if first < 1e-12 || (last < thresholds.decay_ratio * first && last < scale) {
        AdVerdict::Admissible
    } else if last > thresholds.persist_ratio * first {
        AdVerdict::NotAdmissible
    } else {
        AdVerdict::Inconclusive
    };
    let delta = match side_of(model, u_minus)? {
        Side::Upper => crossing_gap(model, u_minus).ok(),
        _ => None,
    };
    Ok(AdReport {
        config: class.config,
        kk: class.kk,
        it: class.it,
        dsm: class.dsm,
        vanishing_adsorption: verdict,
        alphas: alpha_seq.to_vec(),
        l1,
        delta,
    })
}
