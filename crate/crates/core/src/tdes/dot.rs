use std::collections::BTreeSet;
use std::fmt::Write;

use super::dynamics::{Dynamics, Event, EventId};
use super::graph::TimedDes;
use super::Fragment;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of the untimed activity automaton.
pub fn activity_dot(d: &Dynamics) -> String {
    let mut out = String::from("digraph activity {\n  rankdir=LR;\n");
    let init = d.initial_activity();
    for a in 0..d.num_activities() {
        let a = super::ActivityId(a);
        let name = d.activity_name(a);
        let labels: Vec<_> = d.activity_labels(a).collect();
        let label = if labels.is_empty() {
            name.to_string()
        } else {
            format!("{name}\\n{{{}}}", labels.join(","))
        };
        let shape = if a == init { "doublecircle" } else { "circle" };
        writeln!(out, "  {} [label={}, shape={shape}];", quote(name), quote(&label)).unwrap();
    }
    for a in 0..d.num_activities() {
        let a = super::ActivityId(a);
        for e in 0..d.num_events() {
            if let Some(b) = d.delta_act(a, EventId(e)) {
                let t = d.timing(EventId(e));
                let bounds = match t.upper {
                    Some(u) => format!("[{},{}]", t.lower, u),
                    None => format!("[{},inf]", t.lower),
                };
                writeln!(
                    out,
                    "  {} -> {} [label={}];",
                    quote(d.activity_name(a)),
                    quote(d.activity_name(b)),
                    quote(&format!("{} {bounds}", d.event_names()[e]))
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Graphviz rendering of the reachable TDES. Nodes are labeled
/// `activity | timer vector`, tick edges are dashed. When `path` is given,
/// its states and transitions are drawn in red.
pub fn tdes_dot(g: &TimedDes, path: Option<&Fragment<usize>>) -> String {
    let mut on_path_nodes = BTreeSet::new();
    let mut on_path_edges = BTreeSet::new();
    if let Some(f) = path {
        on_path_nodes.extend(f.states().iter().copied());
        for (k, &e) in f.events().iter().enumerate() {
            on_path_edges.insert((f.states()[k], e, f.states()[k + 1]));
        }
    }
    let d = g.dynamics();
    let mut out = String::from("digraph tdes {\n  rankdir=LR;\n  node [shape=box];\n");
    for i in 0..g.len() {
        let mut attrs = format!("label={}", quote(&g.describe(i)));
        if i == g.initial() {
            attrs.push_str(", peripheries=2");
        }
        if on_path_nodes.contains(&i) {
            attrs.push_str(", color=red, fontcolor=red");
        }
        writeln!(out, "  s{i} [{attrs}];").unwrap();
    }
    for t in g.transitions() {
        let mut attrs = format!("label={}", quote(d.event_name(t.event)));
        if t.event == Event::Tick {
            attrs.push_str(", style=dashed");
        }
        if on_path_edges.contains(&(t.from, t.event, t.to)) {
            attrs.push_str(", color=red, fontcolor=red");
        }
        writeln!(out, "  s{} -> s{} [{attrs}];", t.from, t.to).unwrap();
    }
    out.push_str("}\n");
    out
}
