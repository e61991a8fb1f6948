//! Bounded synthesis for timed discrete event systems (TDES).
//!
//! An untimed activity automaton with per-event tick bounds is expanded into
//! the reachable TDES ([`tdes`]). A ticked LTLf formula ([`logic`]) is then
//! compiled together with the TDES into a 0/1 integer-linear feasibility
//! model ([`encode`]), solved by a small exact branch-and-bound engine
//! ([`ilp`]), and the resulting execution fragment is certified by direct
//! semantic evaluation. [`synth`] drives the horizon loop and also provides a
//! brute-force enumeration oracle.

pub mod cli;
pub mod encode;
mod error;
pub mod ilp;
pub mod io;
pub mod logic;
pub mod synth;
pub mod tdes;

pub use error::{Error, Result};
