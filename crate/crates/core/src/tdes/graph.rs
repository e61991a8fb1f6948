use std::collections::{HashMap, VecDeque};

use super::dynamics::{ActivityId, Dynamics, Event, TimedState};
use super::fragment::Fragment;
use super::system::UntimedDes;
use crate::{Error, Result};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// A transition `(from, event, to)` of the reachable TDES, by state index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: usize,
    pub event: Event,
    pub to: usize,
}

/// The reachable part of the timed DES.
///
/// States are numbered in breadth-first discovery order from the initial
/// state (index 0); out-edges follow [`Dynamics::event_order`].
#[derive(Clone, Debug)]
pub struct TimedDes {
    dynamics: Dynamics,
    states: Vec<TimedState>,
    index: HashMap<TimedState, usize>,
    out: Vec<Vec<(Event, usize)>>,
}

impl TimedDes {
    pub fn build(u: &UntimedDes, state_cap: usize) -> Result<Self> {
        Self::from_dynamics(Dynamics::new(u)?, state_cap)
    }

    pub fn from_dynamics(dynamics: Dynamics, state_cap: usize) -> Result<Self> {
        let s0 = dynamics.initial_state();
        let mut states = vec![s0.clone()];
        let mut index = HashMap::from([(s0, 0usize)]);
        let mut out = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        if state_cap == 0 {
            return Err(Error::StateCapExceeded { cap: state_cap });
        }

        while let Some(i) = queue.pop_front() {
            let mut edges = Vec::new();
            for (ev, next) in dynamics.successors(&states[i]) {
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= state_cap {
                            return Err(Error::StateCapExceeded { cap: state_cap });
                        }
                        let j = states.len();
                        states.push(next.clone());
                        index.insert(next, j);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((ev, j));
            }
            // BFS pops in index order, so `out[i]` lines up with state i
            debug_assert_eq!(out.len(), i);
            out.push(edges);
        }

        Ok(TimedDes {
            dynamics,
            states,
            index,
            out,
        })
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn state(&self, i: usize) -> &TimedState {
        &self.states[i]
    }

    pub fn states(&self) -> &[TimedState] {
        &self.states
    }

    pub fn index_of(&self, s: &TimedState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn activity(&self, i: usize) -> ActivityId {
        self.states[i].activity
    }

    pub fn out_edges(&self, i: usize) -> &[(Event, usize)] {
        &self.out[i]
    }

    pub fn successor(&self, i: usize, e: Event) -> Option<usize> {
        self.out[i].iter().find(|(ev, _)| *ev == e).map(|&(_, j)| j)
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.out.iter().enumerate().flat_map(|(from, edges)| {
            edges.iter().map(move |&(event, to)| Transition { from, event, to })
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn holds(&self, i: usize, atom: usize) -> bool {
        self.dynamics.activity_holds(self.states[i].activity, atom)
    }

    pub fn describe(&self, i: usize) -> String {
        self.dynamics.describe(&self.states[i])
    }

    /// Checks that `f` starts at the initial state and every step is a
    /// transition of this TDES.
    pub fn check_fragment(&self, f: &Fragment<TimedState>) -> Result<()> {
        let s0 = &self.states[0];
        if &f.states()[0] != s0 {
            return Err(Error::MalformedFragment(format!(
                "fragment starts at {} instead of {}",
                self.dynamics.describe(&f.states()[0]),
                self.dynamics.describe(s0)
            )));
        }
        for (k, (&e, pair)) in f.events().iter().zip(f.states().windows(2)).enumerate() {
            let next = self.dynamics.step(&pair[0], e).map_err(|err| {
                Error::MalformedFragment(format!("step {}: {err}", k + 1))
            })?;
            if next != pair[1] {
                return Err(Error::MalformedFragment(format!(
                    "step {}: {} --{}--> {} but fragment has {}",
                    k + 1,
                    self.dynamics.describe(&pair[0]),
                    self.dynamics.event_name(e),
                    self.dynamics.describe(&next),
                    self.dynamics.describe(&pair[1])
                )));
            }
        }
        Ok(())
    }

    /// Replays `events` from the initial state, producing the state indices.
    pub fn replay(&self, events: &[Event]) -> Result<Fragment<usize>> {
        let mut states = vec![self.initial()];
        for (k, &e) in events.iter().enumerate() {
            let cur = *states.last().unwrap();
            let next = self.successor(cur, e).ok_or_else(|| Error::NotEnabled {
                state: format!("step {} ({})", k + 1, self.describe(cur)),
                event: self.dynamics.event_name(e).to_string(),
            })?;
            states.push(next);
        }
        Fragment::new(states, events.to_vec())
    }

    pub fn to_timed(&self, f: &Fragment<usize>) -> Fragment<TimedState> {
        f.map_states(|&i| self.states[i].clone())
    }

    pub fn to_indices(&self, f: &Fragment<TimedState>) -> Result<Fragment<usize>> {
        let states = f
            .states()
            .iter()
            .map(|s| {
                self.index_of(s).ok_or_else(|| {
                    Error::MalformedFragment(format!(
                        "{} is not a reachable state",
                        self.dynamics.describe(s)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Fragment::new(states, f.events().to_vec())
    }
}
