use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Name reserved for the global clock event.
pub const TICK: &str = "tick";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// Finite upper bound.
    Prospective,
    /// Upper bound is infinite.
    Remote,
}

/// An activity event together with its lower and upper tick bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventSpec {
    pub name: String,
    pub kind: EventKind,
    pub lower: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<u32>,
}

impl EventSpec {
    pub fn prospective(name: impl Into<String>, lower: u32, upper: u32) -> Self {
        EventSpec {
            name: name.into(),
            kind: EventKind::Prospective,
            lower,
            upper: Some(upper),
        }
    }

    pub fn remote(name: impl Into<String>, lower: u32) -> Self {
        EventSpec {
            name: name.into(),
            kind: EventKind::Remote,
            lower,
            upper: None,
        }
    }

    /// Initial (and reset) value of the event's timer: `u` for prospective
    /// events, `l` for remote ones. This is also the upper end of the timer
    /// interval.
    pub fn default_timer(&self) -> u32 {
        match self.kind {
            EventKind::Prospective => self.upper.unwrap_or(self.lower),
            EventKind::Remote => self.lower,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionSpec {
    pub from: String,
    pub event: String,
    pub to: String,
}

/// Untimed activity automaton with per-event timing bounds.
///
/// The fields mirror the JSON system description one to one. Nothing is
/// checked on construction; use [`UntimedDes::validate`] (or any of the
/// compiling entry points, which validate first).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UntimedDes {
    pub states: Vec<String>,
    pub events: Vec<EventSpec>,
    pub transitions: Vec<TransitionSpec>,
    pub initial: String,
    #[serde(default)]
    pub atoms: Vec<String>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

/// The invariant a [`Diagnostic`] reports as violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Invariant {
    InitialDeclared,
    DuplicateState,
    DuplicateEvent,
    DuplicateAtom,
    ReservedEventName,
    TransitionSourceDeclared,
    TransitionTargetDeclared,
    TransitionEventDeclared,
    Deterministic,
    LabeledStateDeclared,
    LabelAtomDeclared,
    ProspectiveNeedsUpper,
    RemoteHasNoUpper,
    LowerAtMostUpper,
    EventUsed,
}

impl Invariant {
    fn describe(self) -> &'static str {
        match self {
            Invariant::InitialDeclared => "initial state must be declared",
            Invariant::DuplicateState => "state names must be unique",
            Invariant::DuplicateEvent => "each event needs exactly one timing entry",
            Invariant::DuplicateAtom => "atom names must be unique",
            Invariant::ReservedEventName => "`tick` is reserved for the clock event",
            Invariant::TransitionSourceDeclared => "transition source must be a declared state",
            Invariant::TransitionTargetDeclared => "transition target must be a declared state",
            Invariant::TransitionEventDeclared => "transition event must be declared",
            Invariant::Deterministic => "at most one successor per (state, event)",
            Invariant::LabeledStateDeclared => "labeled state must be declared",
            Invariant::LabelAtomDeclared => "label atom must be declared",
            Invariant::ProspectiveNeedsUpper => "prospective event needs an upper bound",
            Invariant::RemoteHasNoUpper => "remote event must not carry an upper bound",
            Invariant::LowerAtMostUpper => "lower bound must not exceed upper bound",
            Invariant::EventUsed => "event never occurs in any transition",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub invariant: Invariant,
    /// The offending element, rendered as text.
    pub element: String,
}

impl Diagnostic {
    fn error(invariant: Invariant, element: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            invariant,
            element: element.into(),
        }
    }

    fn warning(invariant: Invariant, element: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            invariant,
            element: element.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}: {}: {}", self.invariant.describe(), self.element)
    }
}

impl UntimedDes {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system serializes")
    }

    pub fn event(&self, name: &str) -> Option<&EventSpec> {
        self.events.iter().find(|e| e.name == name)
    }

    /// Checks every structural invariant and reports each violation.
    ///
    /// Events that never occur in a transition are reported as warnings;
    /// everything else is an error.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();

        let states = unique(&self.states, Invariant::DuplicateState, &mut diags);
        let event_names: Vec<String> = self.events.iter().map(|e| e.name.clone()).collect();
        let events = unique(&event_names, Invariant::DuplicateEvent, &mut diags);
        let atoms = unique(&self.atoms, Invariant::DuplicateAtom, &mut diags);

        if !states.contains(self.initial.as_str()) {
            diags.push(Diagnostic::error(Invariant::InitialDeclared, &self.initial));
        }

        for ev in &self.events {
            if ev.name == TICK {
                diags.push(Diagnostic::error(Invariant::ReservedEventName, &ev.name));
            }
            match (ev.kind, ev.upper) {
                (EventKind::Prospective, None) => {
                    diags.push(Diagnostic::error(Invariant::ProspectiveNeedsUpper, &ev.name))
                }
                (EventKind::Prospective, Some(u)) if ev.lower > u => diags.push(Diagnostic::error(
                    Invariant::LowerAtMostUpper,
                    format!("{} (lower {}, upper {})", ev.name, ev.lower, u),
                )),
                (EventKind::Remote, Some(_)) => {
                    diags.push(Diagnostic::error(Invariant::RemoteHasNoUpper, &ev.name))
                }
                _ => {}
            }
        }

        let mut successor: HashMap<(&str, &str), &str> = HashMap::new();
        let mut used: BTreeSet<&str> = BTreeSet::new();
        for t in &self.transitions {
            let edge = format!("{} --{}--> {}", t.from, t.event, t.to);
            if !states.contains(t.from.as_str()) {
                diags.push(Diagnostic::error(Invariant::TransitionSourceDeclared, &edge));
            }
            if !states.contains(t.to.as_str()) {
                diags.push(Diagnostic::error(Invariant::TransitionTargetDeclared, &edge));
            }
            if !events.contains(t.event.as_str()) {
                diags.push(Diagnostic::error(Invariant::TransitionEventDeclared, &edge));
            }
            used.insert(t.event.as_str());
            match successor.get(&(t.from.as_str(), t.event.as_str())) {
                Some(prev) if *prev != t.to => {
                    diags.push(Diagnostic::error(
                        Invariant::Deterministic,
                        format!("{edge} conflicts with target {prev}"),
                    ));
                }
                Some(_) => {}
                None => {
                    successor.insert((t.from.as_str(), t.event.as_str()), t.to.as_str());
                }
            }
        }

        for (state, label) in &self.labels {
            if !states.contains(state.as_str()) {
                diags.push(Diagnostic::error(Invariant::LabeledStateDeclared, state));
            }
            for ap in label {
                if !atoms.contains(ap.as_str()) {
                    diags.push(Diagnostic::error(
                        Invariant::LabelAtomDeclared,
                        format!("{ap} on {state}"),
                    ));
                }
            }
        }

        for ev in &self.events {
            if !used.contains(ev.name.as_str()) {
                diags.push(Diagnostic::warning(Invariant::EventUsed, &ev.name));
            }
        }

        diags
    }

    /// True iff [`validate`](Self::validate) reports no errors (warnings are allowed).
    pub fn is_valid(&self) -> bool {
        self.validate().iter().all(|d| !d.is_error())
    }
}

fn unique<'a>(
    names: &'a [String],
    invariant: Invariant,
    diags: &mut Vec<Diagnostic>,
) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            diags.push(Diagnostic::error(invariant, n));
        }
    }
    seen
}
