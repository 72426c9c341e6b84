//! Exact Riemann solutions for the two-component polymer-flooding system
//!
//! The system tracks water saturation `s` and polymer concentration `c` in
//! two-phase porous-media flow,
//!
//! ```text
//! s_t + f(s,c)_x = 0,
//! [c s + alpha a1(c)]_t + [c f(s,c)]_x = 0,
//! ```
//!
//! where `f` is an S-shaped fractional-flow function and `alpha a1(c)` is the
//! amount of polymer adsorbed onto the rock. With `alpha = 0` the
//! concentration family is linearly degenerate and every c-wave is a contact
//! discontinuity; picking the admissible contacts is the whole game. This
//! crate implements
//!
//! * the flux families and their characteristic structure ([`model`]),
//! * Oleinik-admissible scalar Buckley-Leverett wave groups ([`scalar_bl`]),
//! * Hugoniot branches, integral curves, and contact level sets of the
//!   concentration family ([`curves`]),
//! * contact classification and the Keyfitz-Kranzer, Isaacson-Temple,
//!   de Souza-Marchesin, and vanishing-adsorption admissibility criteria
//!   ([`admissibility`]),
//! * full Riemann solutions for `alpha = 0` and `alpha > 0` ([`riemann`]),
//! * the traveling-wave shooting problem that certifies undercompressive
//!   contacts in the non-monotone "boomerang" model ([`travwave`]).

pub mod admissibility;
pub mod curves;
pub mod model;
mod numeric;
pub mod riemann;
pub mod scalar_bl;
pub mod tol;
pub mod travwave;

pub use model::{Adsorption, FluxEval, FluxModel, ModelError, State};
