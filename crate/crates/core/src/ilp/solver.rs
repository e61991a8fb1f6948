//! Depth-first branch and bound with exact integer bounds propagation.
//!
//! Every row is normalized to `sum(a * x) <= b`. A row is revisited whenever
//! one of its variables changes bounds, until no row tightens anything.
//! Branching picks the lowest-index unfixed variable and tries its current
//! lower bound first (so `0` before `1` on binaries); the alternative branch
//! raises the lower bound by one.

use super::model::{Assignment, Comparator, IlpModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Feasible(Assignment),
    Infeasible,
}

impl Outcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Feasible(_))
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            Outcome::Feasible(a) => Some(a),
            Outcome::Infeasible => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Branching decisions taken, alternatives included.
    pub nodes: u64,
    pub backtracks: u64,
}

struct Row {
    terms: Vec<(i64, usize)>,
    rhs: i64,
}

struct Frame {
    var: usize,
    value: i64,
    trail_len: usize,
}

struct Search {
    rows: Vec<Row>,
    occurs: Vec<Vec<usize>>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    trail: Vec<(usize, i64, i64)>,
    queue: Vec<usize>,
    queued: Vec<bool>,
}

impl Search {
    fn new(m: &IlpModel) -> Self {
        let n = m.num_vars();
        let mut occurs = vec![Vec::new(); n];
        let rows: Vec<Row> = m
            .rows()
            .iter()
            .enumerate()
            .map(|(r, c)| {
                let sign = match c.cmp {
                    Comparator::Le => 1,
                    Comparator::Ge => -1,
                    Comparator::Eq => unreachable!("model stores equalities as pairs"),
                };
                for &(_, v) in &c.terms {
                    occurs[v.0].push(r);
                }
                Row {
                    terms: c.terms.iter().map(|&(a, v)| (sign * a, v.0)).collect(),
                    rhs: sign * c.rhs,
                }
            })
            .collect();
        let nrows = rows.len();
        Search {
            rows,
            occurs,
            lo: m.vars().iter().map(|d| d.lo).collect(),
            hi: m.vars().iter().map(|d| d.hi).collect(),
            trail: Vec::new(),
            queue: (0..nrows).rev().collect(),
            queued: vec![true; nrows],
        }
    }

    fn set_bounds(&mut self, v: usize, lo: i64, hi: i64) {
        self.trail.push((v, self.lo[v], self.hi[v]));
        self.lo[v] = lo;
        self.hi[v] = hi;
        for &r in &self.occurs[v] {
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r);
            }
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let (v, lo, hi) = self.trail.pop().unwrap();
            self.lo[v] = lo;
            self.hi[v] = hi;
        }
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.queued[r] = false;
        }
    }

    /// Runs the queue to fixpoint. Returns false on a conflict.
    fn propagate(&mut self) -> bool {
        while let Some(r) = self.queue.pop() {
            self.queued[r] = false;
            let row = &self.rows[r];
            let min_act: i64 = row
                .terms
                .iter()
                .map(|&(a, v)| if a > 0 { a * self.lo[v] } else { a * self.hi[v] })
                .sum();
            let slack = row.rhs - min_act;
            if slack < 0 {
                self.clear_queue();
                return false;
            }
            let mut tightened = Vec::new();
            for &(a, v) in &row.terms {
                let (lo, hi) = (self.lo[v], self.hi[v]);
                if a > 0 {
                    let cap = lo + slack / a;
                    if cap < hi {
                        tightened.push((v, lo, cap));
                    }
                } else {
                    let floor = hi - slack / (-a);
                    if floor > lo {
                        tightened.push((v, floor, hi));
                    }
                }
            }
            // tightening one term never changes this row's minimum activity
            for (v, lo, hi) in tightened {
                self.set_bounds(v, lo, hi);
            }
        }
        true
    }

    fn first_unfixed(&self, from: usize) -> Option<usize> {
        (from..self.lo.len()).find(|&v| self.lo[v] < self.hi[v])
    }
}

pub fn solve(m: &IlpModel) -> Outcome {
    solve_with_stats(m).0
}

/// Solves `m` and reports search statistics.
///
/// # Panics
/// If a returned assignment fails [`IlpModel::verify`]; that would be a
/// solver bug, never a property of the input.
pub fn solve_with_stats(m: &IlpModel) -> (Outcome, SolveStats) {
    let mut stats = SolveStats::default();
    let mut s = Search::new(m);
    if !s.propagate() {
        return (Outcome::Infeasible, stats);
    }

    let mut stack: Vec<Frame> = Vec::new();
    // invariant: every variable below `cursor` is fixed
    let mut cursor = 0;
    loop {
        let Some(v) = s.first_unfixed(cursor) else {
            let a = Assignment::new(s.lo.clone());
            if let Err(v) = m.verify(&a) {
                panic!("solver produced an assignment violating the model: {v:?}");
            }
            return (Outcome::Feasible(a), stats);
        };
        cursor = v;
        stats.nodes += 1;
        let value = s.lo[v];
        stack.push(Frame {
            var: v,
            value,
            trail_len: s.trail.len(),
        });
        s.set_bounds(v, value, value);
        if s.propagate() {
            continue;
        }

        loop {
            stats.backtracks += 1;
            let Some(frame) = stack.pop() else {
                return (Outcome::Infeasible, stats);
            };
            s.undo_to(frame.trail_len);
            let v = frame.var;
            if frame.value + 1 > s.hi[v] {
                continue;
            }
            stats.nodes += 1;
            let hi = s.hi[v];
            s.set_bounds(v, frame.value + 1, hi);
            if s.propagate() {
                cursor = v;
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{LinearConstraint, VarId};

    fn binaries(n: usize) -> (IlpModel, Vec<VarId>) {
        let mut m = IlpModel::new();
        let vs = (0..n).map(|i| m.add_binary(format!("x{i}"))).collect();
        (m, vs)
    }

    #[test]
    fn forced_by_propagation() {
        let (mut m, v) = binaries(2);
        m.add_constraint(LinearConstraint::ge(vec![(1, v[0]), (1, v[1])], 2)).unwrap();
        let (out, stats) = solve_with_stats(&m);
        assert_eq!(out, Outcome::Feasible(Assignment::new(vec![1, 1])));
        assert_eq!(stats.nodes, 0);
    }

    #[test]
    fn contradictory_rows() {
        let (mut m, v) = binaries(2);
        m.add_constraint(LinearConstraint::le(vec![(1, v[0]), (1, v[1])], 0)).unwrap();
        m.add_constraint(LinearConstraint::ge(vec![(1, v[0])], 1)).unwrap();
        assert_eq!(solve(&m), Outcome::Infeasible);
    }

    #[test]
    fn zero_first_branching() {
        let (mut m, v) = binaries(3);
        m.add_constraint(LinearConstraint::ge(vec![(1, v[0]), (1, v[1]), (1, v[2])], 1)).unwrap();
        assert_eq!(solve(&m), Outcome::Feasible(Assignment::new(vec![0, 0, 1])));
    }

    #[test]
    fn needs_backtracking() {
        // x2 = x0 and x1 = 1 - x0, so x2 + x1 = 1 always
        let (mut m, v) = binaries(3);
        m.add_constraint(LinearConstraint::eq(vec![(1, v[0]), (1, v[1])], 1)).unwrap();
        m.add_constraint(LinearConstraint::eq(vec![(1, v[0]), (-1, v[2])], 0)).unwrap();
        m.add_constraint(LinearConstraint::ge(vec![(1, v[2]), (1, v[1])], 2)).unwrap();
        assert_eq!(solve(&m), Outcome::Infeasible);
    }

    #[test]
    fn general_integers() {
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 10).unwrap();
        let y = m.add_var("y", -5, 5).unwrap();
        // 3x - 2y = 7 and x + y >= 6
        m.add_constraint(LinearConstraint::eq(vec![(3, x), (-2, y)], 7)).unwrap();
        m.add_constraint(LinearConstraint::ge(vec![(1, x), (1, y)], 6)).unwrap();
        let a = solve(&m).assignment().cloned().unwrap();
        assert_eq!(3 * a.get(x) - 2 * a.get(y), 7);
        assert!(a.get(x) + a.get(y) >= 6);
        assert_eq!(m.verify(&a), Ok(()));
    }

    #[test]
    fn empty_model_is_feasible() {
        assert_eq!(solve(&IlpModel::new()), Outcome::Feasible(Assignment::new(vec![])));
    }

    #[test]
    fn deterministic() {
        let (mut m, v) = binaries(6);
        for w in v.windows(3) {
            m.add_constraint(LinearConstraint::eq(
                w.iter().map(|&x| (1, x)).collect(),
                1,
            ))
            .unwrap();
        }
        assert_eq!(solve(&m), solve(&m.clone()));
    }
}
