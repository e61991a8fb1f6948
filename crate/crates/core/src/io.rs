//! JSON documents for fragments and synthesis results.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::synth::{Outcome, SynthesisResult};
use crate::tdes::{Dynamics, EventKind, Fragment, TimedDes, TimedState, UntimedDes};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub activity: String,
    /// Timer value per non-tick event; reconstructed by replay when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timers: Option<BTreeMap<String, u32>>,
}

/// `{"system"?, "states": [{activity, timers?}], "events": [name]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentDoc {
    /// Path of the system JSON, relative to the fragment file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    pub states: Vec<StateDoc>,
    pub events: Vec<String>,
}

impl FragmentDoc {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fragment serializes")
    }

    pub fn from_fragment(d: &Dynamics, f: &Fragment<TimedState>) -> Self {
        FragmentDoc {
            system: None,
            states: f
                .states()
                .iter()
                .map(|s| StateDoc {
                    activity: d.activity_name(s.activity).to_string(),
                    timers: Some(timers_map(d, s)),
                })
                .collect(),
            events: f.events().iter().map(|&e| d.event_name(e).to_string()).collect(),
        }
    }

    /// Resolves the fragment against `g`, replaying the events from the
    /// initial state. Listed activities and timers must agree with the replay.
    pub fn resolve(&self, g: &TimedDes) -> Result<Fragment<usize>> {
        if self.states.len() != self.events.len() + 1 {
            return Err(Error::MalformedFragment(format!(
                "{} states for {} events",
                self.states.len(),
                self.events.len()
            )));
        }
        let d = g.dynamics();
        let events = self
            .events
            .iter()
            .map(|e| d.event(e))
            .collect::<Result<Vec<_>>>()?;
        let mut states = vec![g.initial()];
        for (k, &e) in events.iter().enumerate() {
            let cur = states[k];
            let next = g.successor(cur, e).ok_or_else(|| {
                Error::MalformedFragment(format!(
                    "step {}: {} is not enabled at {}",
                    k + 1,
                    self.events[k],
                    g.describe(cur)
                ))
            })?;
            states.push(next);
        }
        for (k, (doc, &i)) in self.states.iter().zip(&states).enumerate() {
            let s = g.state(i);
            if doc.activity != d.activity_name(s.activity) {
                return Err(Error::MalformedFragment(format!(
                    "state {k}: listed as {} but replay reaches {}",
                    doc.activity,
                    g.describe(i)
                )));
            }
            if let Some(t) = &doc.timers {
                if *t != timers_map(d, s) {
                    return Err(Error::MalformedFragment(format!(
                        "state {k}: timers disagree with replay ({})",
                        g.describe(i)
                    )));
                }
            }
        }
        Fragment::new(states, events)
    }

    /// Location of the referenced system file, if any.
    pub fn system_path(&self, fragment_path: &Path) -> Option<PathBuf> {
        let rel = self.system.as_ref()?;
        Some(match fragment_path.parent() {
            Some(dir) => dir.join(rel),
            None => PathBuf::from(rel),
        })
    }
}

fn timers_map(d: &Dynamics, s: &TimedState) -> BTreeMap<String, u32> {
    d.event_names()
        .iter()
        .zip(s.timers.iter())
        .map(|(n, &t)| (n.clone(), t))
        .collect()
}

pub fn read_system(path: &Path) -> Result<UntimedDes> {
    let text = std::fs::read_to_string(path)?;
    Ok(UntimedDes::from_json(&text)?)
}

/// TDES summary as JSON: sizes and per-activity timed state counts.
pub fn tdes_json(g: &TimedDes) -> Value {
    let d = g.dynamics();
    let mut per_activity = BTreeMap::new();
    for s in g.states() {
        *per_activity
            .entry(d.activity_name(s.activity).to_string())
            .or_insert(0usize) += 1;
    }
    let events: Vec<Value> = d
        .event_names()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let t = d.timing(crate::tdes::EventId(i));
            json!({
                "name": n,
                "kind": match t.kind { EventKind::Prospective => "prospective", EventKind::Remote => "remote" },
                "lower": t.lower,
                "upper": t.upper,
            })
        })
        .collect();
    json!({
        "activities": d.num_activities(),
        "events": events,
        "states": g.len(),
        "transitions": g.num_transitions(),
        "states_per_activity": per_activity,
    })
}

/// Synthesis result as JSON. Wall times are included only when requested.
pub fn result_json(g: &TimedDes, r: &SynthesisResult, timings: bool) -> Value {
    let attempts: Vec<Value> = r
        .attempts
        .iter()
        .map(|a| {
            let mut v = match a.mode {
                Some(mode) => json!({
                    "horizon": a.horizon,
                    "mode": mode.to_string(),
                    "variables": a.variables,
                    "constraints": a.constraints,
                    "nodes": a.nodes,
                    "feasible": a.feasible,
                }),
                None => json!({
                    "horizon": a.horizon,
                    "visited": a.nodes,
                    "feasible": a.feasible,
                }),
            };
            if timings {
                v["wall_time_s"] = json!(a.wall_time.as_secs_f64());
            }
            v
        })
        .collect();
    match &r.outcome {
        Outcome::Found {
            fragment,
            horizon,
            stats,
        } => {
            let mut s = json!({
                "variables": stats.variables,
                "constraints": stats.constraints,
                "nodes": stats.nodes,
                "fallback": stats.fallback,
            });
            if timings {
                s["wall_time_s"] = json!(stats.wall_time.as_secs_f64());
            }
            json!({
                "outcome": "found",
                "horizon": horizon,
                "fragment": FragmentDoc::from_fragment(g.dynamics(), fragment),
                "statistics": s,
                "attempts": attempts,
            })
        }
        Outcome::NotFound { horizon_max } => json!({
            "outcome": "not_found",
            "horizon_max": horizon_max,
            "attempts": attempts,
        }),
    }
}

/// Fragment as `s(k) = ...` / `e(k) = ...` lines.
pub fn fragment_text(g: &TimedDes, f: &Fragment<TimedState>) -> String {
    let d = g.dynamics();
    let mut out = format!("s(0) = {}\n", d.describe(&f.states()[0]));
    for (k, (e, s)) in f.events().iter().zip(&f.states()[1..]).enumerate() {
        out.push_str(&format!("e({}) = {}\ns({}) = {}\n", k + 1, d.event_name(*e), k + 1, d.describe(s)));
    }
    out
}
