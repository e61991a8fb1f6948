#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use tdsynth::ilp::{Comparator, IlpModel, LinearConstraint};
use tdsynth::logic::{Formula, Interval};
use tdsynth::tdes::{EventSpec, Fragment, TimedDes, TransitionSpec, UntimedDes};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fig1() -> UntimedDes {
    UntimedDes::from_json(&std::fs::read_to_string(fixture("fig1.json")).unwrap()).unwrap()
}

pub fn fig1_tdes() -> TimedDes {
    TimedDes::build(&fig1(), 10_000).unwrap()
}

pub const ATOMS: [&str; 2] = ["p", "q"];

/// Random deterministic activity system with `1..=max_states` states,
/// up to four events and timing bounds at most `max_bound`.
pub fn random_system(rng: &mut impl Rng, max_states: usize, max_bound: u32) -> UntimedDes {
    let n = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let ne = rng.gen_range(1..=4);
    let events: Vec<EventSpec> = (0..ne)
        .map(|i| {
            let name = format!("e{i}");
            let lower = rng.gen_range(0..=max_bound);
            if rng.gen_bool(0.5) {
                EventSpec::prospective(name, lower, rng.gen_range(lower..=max_bound))
            } else {
                EventSpec::remote(name, lower)
            }
        })
        .collect();
    let mut transitions = Vec::new();
    for s in &states {
        for e in &events {
            if rng.gen_bool(0.4) {
                transitions.push(TransitionSpec {
                    from: s.clone(),
                    event: e.name.clone(),
                    to: states.choose(rng).unwrap().clone(),
                });
            }
        }
    }
    let mut labels = BTreeMap::new();
    for s in &states {
        let l: Vec<String> = ATOMS
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(|a| a.to_string())
            .collect();
        if !l.is_empty() {
            labels.insert(s.clone(), l);
        }
    }
    UntimedDes {
        states,
        events,
        transitions,
        initial: "s0".into(),
        atoms: ATOMS.iter().map(|a| a.to_string()).collect(),
        labels,
    }
}

fn random_interval(rng: &mut impl Rng, h: u32) -> Interval {
    let lo = rng.gen_range(0..=h);
    Interval::new(lo, rng.gen_range(lo..=h)).unwrap()
}

/// Random formula of depth at most `depth` over [`ATOMS`], until bounds in `[0, h]`.
pub fn random_formula(rng: &mut impl Rng, depth: usize, h: u32) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.2);
    if leaf {
        return if rng.gen_bool(0.15) {
            Formula::True
        } else {
            Formula::atom(*ATOMS.choose(rng).unwrap())
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => Formula::not(random_formula(rng, d, h)),
        1 => Formula::and(random_formula(rng, d, h), random_formula(rng, d, h)),
        2 => Formula::or(random_formula(rng, d, h), random_formula(rng, d, h)),
        _ => {
            let iv = random_interval(rng, h);
            Formula::until(random_formula(rng, d, h), random_formula(rng, d, h), iv.lo(), iv.hi())
        }
    }
}

/// Uniform random walk of `h` steps from the initial state; `None` on deadlock.
pub fn random_walk(g: &TimedDes, h: usize, rng: &mut impl Rng) -> Option<Fragment<usize>> {
    let mut states = vec![g.initial()];
    let mut events = Vec::new();
    for _ in 0..h {
        let &(e, s) = g.out_edges(*states.last().unwrap()).choose(rng)?;
        events.push(e);
        states.push(s);
    }
    Some(Fragment::new(states, events).unwrap())
}

fn row_holds(c: &LinearConstraint, lhs: i64) -> bool {
    match c.cmp {
        Comparator::Le => lhs <= c.rhs,
        Comparator::Ge => lhs >= c.rhs,
        Comparator::Eq => lhs == c.rhs,
    }
}

/// Exhaustive search over all assignments of a 0/1 model (Gray-code order,
/// row activities updated incrementally). Returns the first satisfying
/// assignment found.
pub fn brute_force(m: &IlpModel) -> Option<Vec<i64>> {
    let n = m.num_vars();
    let mut x: Vec<i64> = m.vars().iter().map(|d| d.lo).collect();
    let free: Vec<usize> = (0..n).filter(|&v| m.vars()[v].lo < m.vars()[v].hi).collect();
    for d in m.vars() {
        assert!(d.lo >= 0 && d.hi <= 1, "binary models only");
    }
    assert!(free.len() <= 24, "too many free variables to enumerate");
    let rows = m.rows();
    let mut occurs = vec![Vec::new(); n];
    for (r, c) in rows.iter().enumerate() {
        for &(a, v) in &c.terms {
            occurs[v.0].push((r, a));
        }
    }
    let mut lhs: Vec<i64> = rows
        .iter()
        .map(|c| c.terms.iter().map(|&(a, v)| a * x[v.0]).sum())
        .collect();
    let mut violated = rows
        .iter()
        .zip(&lhs)
        .filter(|(c, &l)| !row_holds(c, l))
        .count();
    if violated == 0 {
        return Some(x);
    }
    for i in 1u64..(1u64 << free.len()) {
        let v = free[i.trailing_zeros() as usize];
        let delta = 1 - 2 * x[v];
        x[v] += delta;
        for &(r, a) in &occurs[v] {
            let before = row_holds(&rows[r], lhs[r]);
            lhs[r] += a * delta;
            let after = row_holds(&rows[r], lhs[r]);
            match (before, after) {
                (true, false) => violated += 1,
                (false, true) => violated -= 1,
                _ => {}
            }
        }
        if violated == 0 {
            return Some(x);
        }
    }
    None
}

/// Random 0/1 model with `1..=max_vars` variables. About half the models
/// are built around a planted solution.
pub fn random_model(rng: &mut impl Rng, max_vars: usize) -> IlpModel {
    let n = rng.gen_range(1..=max_vars);
    let mut m = IlpModel::new();
    let vars: Vec<_> = (0..n).map(|i| m.add_binary(format!("x{i}"))).collect();
    let planted: Option<Vec<i64>> = rng
        .gen_bool(0.5)
        .then(|| (0..n).map(|_| rng.gen_range(0..=1)).collect());
    let rows = rng.gen_range(1..=n + 4);
    for _ in 0..rows {
        let k = rng.gen_range(1..=n.min(6));
        let mut picked = vars.clone();
        picked.shuffle(rng);
        let terms: Vec<_> = picked[..k]
            .iter()
            .map(|&v| {
                let mut a = rng.gen_range(-3i64..=3);
                if a == 0 {
                    a = 1;
                }
                (a, v)
            })
            .collect();
        let cmp = match rng.gen_range(0..5) {
            0 => Comparator::Eq,
            1 | 2 => Comparator::Le,
            _ => Comparator::Ge,
        };
        let rhs = match &planted {
            Some(p) => {
                let act: i64 = terms.iter().map(|&(a, v)| a * p[v.0]).sum();
                match cmp {
                    Comparator::Eq => act,
                    Comparator::Le => act + rng.gen_range(0..=1),
                    Comparator::Ge => act - rng.gen_range(0..=1),
                }
            }
            None => rng.gen_range(-3..=3),
        };
        m.add_constraint(LinearConstraint::new(terms, cmp, rhs)).unwrap();
    }
    if rng.gen_bool(0.2) {
        let v = *vars.choose(rng).unwrap();
        let value = planted.as_ref().map_or(rng.gen_range(0..=1), |p| p[v.0]);
        m.fix(v, value).unwrap();
    }
    m
}
