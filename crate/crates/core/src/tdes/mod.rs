//! Untimed activity systems, their timed expansion, and execution fragments.

mod dot;
mod dynamics;
mod fragment;
mod graph;
mod system;

pub use dot::{activity_dot, tdes_dot};
pub use dynamics::{ActivityId, Dynamics, Event, EventId, TimedState, Timing};
pub use fragment::{Fragment, FragmentView};
pub use graph::{TimedDes, Transition, DEFAULT_STATE_CAP};
pub use system::{
    Diagnostic, EventKind, EventSpec, Invariant, Severity, TransitionSpec, UntimedDes, TICK,
};

use crate::Result;

pub fn validate(u: &UntimedDes) -> Vec<Diagnostic> {
    u.validate()
}

pub fn initial_state(u: &UntimedDes) -> Result<TimedState> {
    Ok(Dynamics::new(u)?.initial_state())
}

/// Whether `event` (by name, `"tick"` included) can occur at `s`.
pub fn enabled(u: &UntimedDes, s: &TimedState, event: &str) -> Result<bool> {
    let d = Dynamics::new(u)?;
    let e = d.event(event)?;
    Ok(d.enabled(s, e))
}

pub fn step(u: &UntimedDes, s: &TimedState, event: &str) -> Result<TimedState> {
    let d = Dynamics::new(u)?;
    let e = d.event(event)?;
    d.step(s, e)
}

pub fn build_tdes(u: &UntimedDes, state_cap: usize) -> Result<TimedDes> {
    TimedDes::build(u, state_cap)
}
