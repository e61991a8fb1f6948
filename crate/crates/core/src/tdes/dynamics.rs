use std::collections::HashMap;
use std::fmt;

use super::system::{EventKind, UntimedDes, TICK};
use crate::{Error, Result};

/// Index of an activity event. Events are numbered in ascending name order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub usize);

/// Index of an activity state, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivityId(pub usize);

/// An event of the timed system: the clock `tick` or an activity event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    Tick,
    Act(EventId),
}

impl Event {
    pub fn is_tick(self) -> bool {
        matches!(self, Event::Tick)
    }
}

/// A TDES state: activity plus one countdown timer per activity event.
///
/// Timers are stored in [`EventId`] order, so equality and hashing are by
/// value and independent of declaration order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimedState {
    pub activity: ActivityId,
    pub timers: Box<[u32]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Timing {
    pub kind: EventKind,
    pub lower: u32,
    /// `None` for remote events.
    pub upper: Option<u32>,
}

impl Timing {
    pub fn default_timer(&self) -> u32 {
        match self.kind {
            EventKind::Prospective => self.upper.expect("validated prospective bound"),
            EventKind::Remote => self.lower,
        }
    }
}

/// Indexed form of a validated [`UntimedDes`], implementing the enabling
/// conditions and timer updates of the timed system.
#[derive(Clone, Debug)]
pub struct Dynamics {
    states: Vec<String>,
    state_index: HashMap<String, ActivityId>,
    events: Vec<String>,
    event_index: HashMap<String, EventId>,
    timing: Vec<Timing>,
    delta: Vec<Vec<Option<ActivityId>>>,
    initial: ActivityId,
    atoms: Vec<String>,
    atom_index: HashMap<String, usize>,
    labels: Vec<Vec<bool>>,
    order: Vec<Event>,
}

impl Dynamics {
    pub fn new(u: &UntimedDes) -> Result<Self> {
        let errors: Vec<_> = u.validate().into_iter().filter(|d| d.is_error()).collect();
        if !errors.is_empty() {
            return Err(Error::InvalidSystem(errors));
        }

        let states = u.states.clone();
        let state_index: HashMap<_, _> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), ActivityId(i)))
            .collect();

        let mut specs: Vec<_> = u.events.iter().collect();
        specs.sort_by(|a, b| a.name.cmp(&b.name));
        let events: Vec<String> = specs.iter().map(|e| e.name.clone()).collect();
        let event_index: HashMap<_, _> = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), EventId(i)))
            .collect();
        let timing = specs
            .iter()
            .map(|e| Timing {
                kind: e.kind,
                lower: e.lower,
                upper: e.upper,
            })
            .collect();

        let mut delta = vec![vec![None; events.len()]; states.len()];
        for t in &u.transitions {
            let from = state_index[&t.from];
            let ev = event_index[&t.event];
            delta[from.0][ev.0] = Some(state_index[&t.to]);
        }

        let mut atoms = u.atoms.clone();
        atoms.sort();
        let atom_index: HashMap<_, _> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let mut labels = vec![vec![false; atoms.len()]; states.len()];
        for (state, aps) in &u.labels {
            for ap in aps {
                labels[state_index[state].0][atom_index[ap]] = true;
            }
        }

        let mut order: Vec<Event> = (0..events.len()).map(|i| Event::Act(EventId(i))).collect();
        order.push(Event::Tick);
        order.sort_by(|a, b| name_of(&events, *a).cmp(name_of(&events, *b)));

        Ok(Dynamics {
            initial: state_index[&u.initial],
            states,
            state_index,
            events,
            event_index,
            timing,
            delta,
            atoms,
            atom_index,
            labels,
            order,
        })
    }

    pub fn num_activities(&self) -> usize {
        self.states.len()
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn activity_name(&self, a: ActivityId) -> &str {
        &self.states[a.0]
    }

    pub fn activity(&self, name: &str) -> Result<ActivityId> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn event_names(&self) -> &[String] {
        &self.events
    }

    pub fn event_name(&self, e: Event) -> &str {
        name_of(&self.events, e)
    }

    /// Resolves an event name; `"tick"` maps to [`Event::Tick`].
    pub fn event(&self, name: &str) -> Result<Event> {
        if name == TICK {
            return Ok(Event::Tick);
        }
        self.event_index
            .get(name)
            .map(|&id| Event::Act(id))
            .ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    pub fn timing(&self, e: EventId) -> Timing {
        self.timing[e.0]
    }

    /// All events, `tick` included, in ascending name order.
    pub fn event_order(&self) -> &[Event] {
        &self.order
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, atom: &str) -> Option<usize> {
        self.atom_index.get(atom).copied()
    }

    pub fn activity_holds(&self, a: ActivityId, atom: usize) -> bool {
        self.labels[a.0][atom]
    }

    pub fn activity_labels(&self, a: ActivityId) -> impl Iterator<Item = &str> + '_ {
        self.labels[a.0]
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(i, _)| self.atoms[i].as_str())
    }

    /// Untimed transition function.
    pub fn delta_act(&self, a: ActivityId, e: EventId) -> Option<ActivityId> {
        self.delta[a.0][e.0]
    }

    pub fn initial_activity(&self) -> ActivityId {
        self.initial
    }

    pub fn initial_state(&self) -> TimedState {
        TimedState {
            activity: self.initial,
            timers: self.timing.iter().map(Timing::default_timer).collect(),
        }
    }

    pub fn enabled(&self, s: &TimedState, sigma: Event) -> bool {
        match sigma {
            // every prospective event defined at `a` must still have time left
            Event::Tick => self.timing.iter().enumerate().all(|(i, t)| {
                t.kind != EventKind::Prospective
                    || self.delta[s.activity.0][i].is_none()
                    || s.timers[i] > 0
            }),
            Event::Act(e) => {
                if self.delta_act(s.activity, e).is_none() {
                    return false;
                }
                let t = self.timing[e.0];
                let timer = s.timers[e.0];
                match t.kind {
                    EventKind::Prospective => {
                        timer <= t.upper.expect("validated prospective bound") - t.lower
                    }
                    EventKind::Remote => timer == 0,
                }
            }
        }
    }

    pub fn step(&self, s: &TimedState, sigma: Event) -> Result<TimedState> {
        if !self.enabled(s, sigma) {
            return Err(Error::NotEnabled {
                state: self.describe(s),
                event: self.event_name(sigma).to_string(),
            });
        }
        let a = s.activity;
        let next = match sigma {
            Event::Tick => {
                let timers = self
                    .timing
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let cur = s.timers[i];
                        if self.delta[a.0][i].is_none() {
                            t.default_timer()
                        } else if cur > 0 {
                            cur - 1
                        } else {
                            // prospective with zero timer disables tick
                            assert_eq!(t.kind, EventKind::Remote, "tick with an expired deadline");
                            0
                        }
                    })
                    .collect();
                TimedState {
                    activity: a,
                    timers,
                }
            }
            Event::Act(e) => {
                let a2 = self.delta_act(a, e).expect("enabled event is defined");
                let timers = self
                    .timing
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        if i == e.0 || self.delta[a2.0][i].is_none() {
                            t.default_timer()
                        } else {
                            s.timers[i]
                        }
                    })
                    .collect();
                TimedState {
                    activity: a2,
                    timers,
                }
            }
        };
        Ok(next)
    }

    /// Enabled events of `s` with their successors, in [`event_order`](Self::event_order).
    pub fn successors(&self, s: &TimedState) -> Vec<(Event, TimedState)> {
        self.order
            .iter()
            .filter(|&&e| self.enabled(s, e))
            .map(|&e| (e, self.step(s, e).expect("checked enabled")))
            .collect()
    }

    /// `activity | (t_1,...,t_n)` with timers in event-name order.
    pub fn describe(&self, s: &TimedState) -> String {
        format!("{} | {}", self.activity_name(s.activity), TimerVector(&s.timers))
    }
}

fn name_of(events: &[String], e: Event) -> &str {
    match e {
        Event::Tick => TICK,
        Event::Act(id) => &events[id.0],
    }
}

pub(crate) struct TimerVector<'a>(pub &'a [u32]);

impl fmt::Display for TimerVector<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}
