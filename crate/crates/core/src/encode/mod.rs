//! Compilation of (TDES, formula, horizon) into a 0/1 feasibility model.
//!
//! Variables, in creation order:
//!
//! * `w[k][i]`: the trajectory is in TDES state `i` at step `k` (one-hot per `k`);
//! * `ze[k]`: the `k`-th event is `tick`;
//! * `x[k][t]` (exact mode only): the `k`-th step uses transition `t`;
//! * `z[node][k]`: subformula `node` holds on the suffix starting at `k`;
//! * `zl`, `zu`, `z[node][k,j]`: per until node, tick-count threshold
//!   indicators and the witness for `(k, j)`.
//!
//! The tick counter `c(k, j)` is never a variable; it is the linear
//! expression `ze[k+1] + ... + ze[j]`. Satisfaction is only ever witnessed
//! inside the horizon: until looks for `j` in `[k, H]`.

mod decode;

use std::collections::BTreeMap;
use std::fmt::Write;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::ilp::{Assignment, IlpModel, LinearConstraint, VarId};
use crate::logic::{Evaluator, Formula, Node, SubformulaTable};
use crate::tdes::{Event, Fragment, TimedDes, Transition};
use crate::{Error, Result};

pub use decode::decode;

/// How the tick indicators `ze[k]` are tied to the trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `ze[k] = alpha.w(k-1) AND beta.w(k)`: a step counts as a tick when
    /// it leaves a state where tick is enabled and enters a state that has
    /// a tick predecessor. Over-approximates when such a pair is also
    /// linked by another event.
    Paper,
    /// One selector per transition and step; `ze[k]` sums the tick selectors.
    #[default]
    Exact,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Exact => "exact",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Mode::Paper),
            "exact" => Ok(Mode::Exact),
            other => Err(Error::InvalidRequest(format!("unknown mode `{other}`"))),
        }
    }
}

/// Which part of the encoding produced a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowGroup {
    Trajectory,
    Ticks,
    Edges,
    Formula,
    Root,
}

/// Threshold indicators and witness of one `(k, j)` cell of an until node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UntilCell {
    /// `c(k, j) >= m`
    pub lower: VarId,
    /// `c(k, j) <= n`
    pub upper: VarId,
    pub witness: VarId,
}

#[derive(Clone, Debug)]
pub struct Encoding {
    pub model: IlpModel,
    horizon: usize,
    mode: Option<Mode>,
    /// `w[k][i]`
    pub w: Vec<Vec<VarId>>,
    /// `ze[k - 1]` is the indicator of step `k`.
    pub ze: Vec<VarId>,
    /// `zphi[node][k]`
    pub zphi: Vec<Vec<VarId>>,
    /// Until node index to `cells[k][j - k]`.
    pub until: BTreeMap<usize, Vec<Vec<UntilCell>>>,
    /// `edges[k - 1][t]`, exact mode only.
    pub edges: Option<Vec<Vec<VarId>>>,
    transitions: Vec<Transition>,
    preds: Vec<Vec<usize>>,
    alpha: Vec<bool>,
    beta: Vec<bool>,
    big_m: i64,
    table: Option<SubformulaTable>,
    groups: Vec<(RowGroup, Range<usize>)>,
}

fn sum(vars: impl IntoIterator<Item = VarId>) -> Vec<(i64, VarId)> {
    vars.into_iter().map(|v| (1, v)).collect()
}

/// `out = AND(inputs)` over binaries.
pub(crate) fn add_and(model: &mut IlpModel, out: VarId, inputs: &[VarId]) {
    for &x in inputs {
        model
            .add_constraint(LinearConstraint::le(vec![(1, out), (-1, x)], 0))
            .expect("declared");
    }
    let mut terms = vec![(1, out)];
    terms.extend(inputs.iter().map(|&x| (-1, x)));
    model
        .add_constraint(LinearConstraint::ge(terms, 1 - inputs.len() as i64))
        .expect("declared");
}

/// `out = OR(inputs)` over binaries.
pub(crate) fn add_or(model: &mut IlpModel, out: VarId, inputs: &[VarId]) {
    for &x in inputs {
        model
            .add_constraint(LinearConstraint::ge(vec![(1, out), (-1, x)], 0))
            .expect("declared");
    }
    let mut terms = vec![(1, out)];
    terms.extend(inputs.iter().map(|&x| (-1, x)));
    model
        .add_constraint(LinearConstraint::le(terms, 0))
        .expect("declared");
}

/// Adds the big-M rows tying binaries `lower`/`upper` to `[c >= m]` and
/// `[c <= n]`, where `c` is the sum of `counter` and lies in `[0, horizon]`.
///
/// `M = horizon + 1`. Bounds beyond the counter's range are clamped first
/// (`m` to `horizon + 1`, `n` to `horizon`), which leaves both indicator
/// values unchanged and keeps every row satisfiable.
pub fn add_tick_thresholds(
    model: &mut IlpModel,
    counter: &[VarId],
    m: u32,
    n: u32,
    horizon: usize,
    lower: VarId,
    upper: VarId,
) {
    let big_m = horizon as i64 + 1;
    let m = (m as i64).min(horizon as i64 + 1);
    let n = (n as i64).min(horizon as i64);
    let c = sum(counter.iter().copied());

    // m - M <= c - M*lower <= m - 1
    let mut row = c.clone();
    row.push((-big_m, lower));
    model
        .add_constraint(LinearConstraint::le(row.clone(), m - 1))
        .expect("declared");
    model
        .add_constraint(LinearConstraint::ge(row, m - big_m))
        .expect("declared");

    // n + 1 <= c + M*upper <= n + M
    let mut row = c;
    row.push((big_m, upper));
    model
        .add_constraint(LinearConstraint::ge(row.clone(), n + 1))
        .expect("declared");
    model
        .add_constraint(LinearConstraint::le(row, n + big_m))
        .expect("declared");
}

impl Encoding {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_states(&self) -> usize {
        self.w.first().map_or(0, Vec::len)
    }

    pub fn mode(&self) -> Option<Mode> {
        self.mode
    }

    pub fn big_m(&self) -> i64 {
        self.big_m
    }

    pub fn table(&self) -> Option<&SubformulaTable> {
        self.table.as_ref()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// `A[i][j] = 1` iff some event leads from state `i` to state `j`.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.preds[j].binary_search(&i).is_ok()
    }

    /// `alpha[i]`: tick is enabled at state `i`.
    pub fn alpha(&self) -> &[bool] {
        &self.alpha
    }

    /// `beta[i]`: state `i` has a tick predecessor.
    pub fn beta(&self) -> &[bool] {
        &self.beta
    }

    pub fn row_groups(&self) -> &[(RowGroup, Range<usize>)] {
        &self.groups
    }

    pub fn row_group(&self, row: usize) -> Option<RowGroup> {
        self.groups
            .iter()
            .find(|(_, r)| r.contains(&row))
            .map(|(g, _)| *g)
    }

    fn track<T>(&mut self, group: RowGroup, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = self.model.num_rows();
        let out = f(self);
        let end = self.model.num_rows();
        if end > start {
            self.groups.push((group, start..end));
        }
        out
    }

    fn ensure_ticks(&mut self) {
        if self.ze.is_empty() {
            self.ze = (1..=self.horizon)
                .map(|k| self.model.add_binary(format!("ze[{k}]")))
                .collect();
        }
    }

    /// Counter expression `c(k, j)` as the list of its tick indicators.
    fn counter(&self, k: usize, j: usize) -> &[VarId] {
        &self.ze[k..j]
    }

    /// Upper bound on the number of variables, for `num_transitions`
    /// transitions and a formula table with `nodes` entries of which
    /// `untils` are until nodes.
    pub fn variable_bound(
        num_states: usize,
        num_transitions: usize,
        horizon: usize,
        nodes: usize,
        untils: usize,
    ) -> usize {
        let h = horizon;
        (h + 1) * num_states
            + h
            + h * num_transitions
            + nodes * (h + 1)
            + untils * 3 * (h + 1) * (h + 2) / 2
    }

    /// Valuation induced by a genuine fragment (over TDES state indices):
    /// one-hot states, real tick indicators, transition selectors, and
    /// subformula values taken from direct evaluation.
    pub fn replay_assignment(&self, g: &TimedDes, f: &Fragment<usize>) -> Result<Assignment> {
        if f.horizon() != self.horizon {
            return Err(Error::MalformedFragment(format!(
                "fragment horizon {} differs from encoding horizon {}",
                f.horizon(),
                self.horizon
            )));
        }
        let mut a = Assignment::new(vec![0; self.model.num_vars()]);
        for (k, row) in self.w.iter().enumerate() {
            a.set(row[f.states()[k]], 1);
        }
        for (k, &z) in self.ze.iter().enumerate() {
            a.set(z, f.events()[k].is_tick() as i64);
        }
        if let Some(edges) = &self.edges {
            for (k, row) in edges.iter().enumerate() {
                let want = Transition {
                    from: f.states()[k],
                    event: f.events()[k],
                    to: f.states()[k + 1],
                };
                let t = self
                    .transitions
                    .iter()
                    .position(|t| *t == want)
                    .ok_or_else(|| Error::MalformedFragment(format!("step {} is not a transition", k + 1)))?;
                a.set(row[t], 1);
            }
        }
        if let Some(table) = &self.table {
            let ev = Evaluator::from_table(table.clone(), g)?;
            let truth = ev.eval_all(f.view(), g);
            for (node, row) in self.zphi.iter().enumerate() {
                for (k, &z) in row.iter().enumerate() {
                    a.set(z, truth[node][k] as i64);
                }
            }
            let ticks = f.view().tick_prefix();
            for (&node, cells) in &self.until {
                let Node::Until(lhs, rhs, iv) = *table.node(node) else {
                    unreachable!("until map only holds until nodes")
                };
                for (k, row) in cells.iter().enumerate() {
                    for (off, cell) in row.iter().enumerate() {
                        let j = k + off;
                        let c = (ticks[j] - ticks[k]) as u32;
                        let lower = c >= iv.lo();
                        let upper = c <= iv.hi();
                        let witness =
                            lower && upper && truth[rhs][j] && (k..j).all(|l| truth[lhs][l]);
                        a.set(cell.lower, lower as i64);
                        a.set(cell.upper, upper as i64);
                        a.set(cell.witness, witness as i64);
                    }
                }
            }
        }
        Ok(a)
    }

    /// The model dump preceded by a description of the encoding.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "\\ horizon H = {}", self.horizon).unwrap();
        writeln!(out, "\\ TDES states N = {}", self.num_states()).unwrap();
        if let Some(mode) = self.mode {
            writeln!(out, "\\ tick mode = {mode}").unwrap();
        }
        writeln!(out, "\\ big-M = {}", self.big_m).unwrap();
        out.push_str("\\ counter c(k,j) := ze[k+1] + ... + ze[j], c(k,k) := 0\n");
        for (group, range) in &self.groups {
            writeln!(out, "\\ rows r{}..r{}: {group:?}", range.start, range.end - 1).unwrap();
        }
        out.push_str(&self.model.dump());
        out
    }
}

/// Creates the one-hot state variables and the trajectory rows
/// `w(k+1) <= A^T w(k)`, `1^T w(k) = 1`, and pins `w(0)` to the initial state.
pub fn encode_trajectory(g: &TimedDes, horizon: usize) -> Result<Encoding> {
    if horizon == 0 {
        return Err(Error::InvalidRequest("horizon must be at least 1".into()));
    }
    let n = g.len();
    let transitions: Vec<Transition> = g.transitions().collect();
    let mut preds = vec![Vec::new(); n];
    let mut alpha = vec![false; n];
    let mut beta = vec![false; n];
    for t in &transitions {
        preds[t.to].push(t.from);
        if t.event == Event::Tick {
            alpha[t.from] = true;
            beta[t.to] = true;
        }
    }
    for p in &mut preds {
        p.sort_unstable();
        p.dedup();
    }

    let mut model = IlpModel::new();
    let w: Vec<Vec<VarId>> = (0..=horizon)
        .map(|k| (0..n).map(|i| model.add_binary(format!("w[{k}][{i}]"))).collect())
        .collect();

    let mut enc = Encoding {
        model,
        horizon,
        mode: None,
        w,
        ze: Vec::new(),
        zphi: Vec::new(),
        until: BTreeMap::new(),
        edges: None,
        transitions,
        preds,
        alpha,
        beta,
        big_m: horizon as i64 + 1,
        table: None,
        groups: Vec::new(),
    };

    enc.track(RowGroup::Trajectory, |enc| {
        for k in 0..=horizon {
            enc.model
                .add_constraint(LinearConstraint::eq(sum(enc.w[k].iter().copied()), 1))
                .expect("declared");
        }
        for k in 0..horizon {
            for j in 0..n {
                let mut terms = vec![(1, enc.w[k + 1][j])];
                terms.extend(enc.preds[j].iter().map(|&i| (-1, enc.w[k][i])));
                enc.model
                    .add_constraint(LinearConstraint::le(terms, 0))
                    .expect("declared");
            }
        }
    });
    let init = enc.w[0][g.initial()];
    enc.model.fix(init, 1)?;
    Ok(enc)
}

/// Tick indicators from the state-pair vectors `alpha` and `beta`:
/// `ze(k) <= alpha.w(k-1)`, `ze(k) <= beta.w(k)`,
/// `ze(k) >= alpha.w(k-1) + beta.w(k) - 1`.
pub fn encode_ticks(_g: &TimedDes, horizon: usize, enc: &mut Encoding) -> Result<()> {
    check_horizon(enc, horizon)?;
    enc.ensure_ticks();
    enc.mode = Some(Mode::Paper);
    enc.track(RowGroup::Ticks, |enc| {
        for k in 1..=horizon {
            let z = enc.ze[k - 1];
            let alpha: Vec<_> = (0..enc.num_states())
                .filter(|&i| enc.alpha[i])
                .map(|i| enc.w[k - 1][i])
                .collect();
            let beta: Vec<_> = (0..enc.num_states())
                .filter(|&i| enc.beta[i])
                .map(|i| enc.w[k][i])
                .collect();

            let mut row = vec![(1, z)];
            row.extend(alpha.iter().map(|&v| (-1, v)));
            enc.model.add_constraint(LinearConstraint::le(row, 0)).expect("declared");

            let mut row = vec![(1, z)];
            row.extend(beta.iter().map(|&v| (-1, v)));
            enc.model.add_constraint(LinearConstraint::le(row, 0)).expect("declared");

            let mut row = vec![(1, z)];
            row.extend(alpha.iter().chain(&beta).map(|&v| (-1, v)));
            enc.model.add_constraint(LinearConstraint::ge(row, -1)).expect("declared");
        }
    });
    Ok(())
}

/// Exact step encoding: one selector `x[k][t]` per transition and step,
/// exactly one per step, consistent with `w(k-1)` and `w(k)`, and
/// `ze(k)` equal to the sum of the tick selectors.
pub fn encode_edges_exact(_g: &TimedDes, horizon: usize, enc: &mut Encoding) -> Result<()> {
    check_horizon(enc, horizon)?;
    enc.ensure_ticks();
    enc.mode = Some(Mode::Exact);
    let n = enc.num_states();
    let edges: Vec<Vec<VarId>> = (1..=horizon)
        .map(|k| {
            (0..enc.transitions.len())
                .map(|t| enc.model.add_binary(format!("x[{k}][{t}]")))
                .collect()
        })
        .collect();
    enc.track(RowGroup::Edges, |enc| {
        for k in 1..=horizon {
            let x = &edges[k - 1];
            enc.model
                .add_constraint(LinearConstraint::eq(sum(x.iter().copied()), 1))
                .expect("declared");
            let mut out_of = vec![Vec::new(); n];
            let mut into = vec![Vec::new(); n];
            let mut ticks = Vec::new();
            for (t, tr) in enc.transitions.iter().enumerate() {
                out_of[tr.from].push(x[t]);
                into[tr.to].push(x[t]);
                if tr.event == Event::Tick {
                    ticks.push(x[t]);
                }
            }
            for i in 0..n {
                let mut row = vec![(1, enc.w[k - 1][i])];
                row.extend(out_of[i].iter().map(|&v| (-1, v)));
                enc.model.add_constraint(LinearConstraint::eq(row, 0)).expect("declared");
                let mut row = vec![(1, enc.w[k][i])];
                row.extend(into[i].iter().map(|&v| (-1, v)));
                enc.model.add_constraint(LinearConstraint::eq(row, 0)).expect("declared");
            }
            let mut row = vec![(1, enc.ze[k - 1])];
            row.extend(ticks.iter().map(|&v| (-1, v)));
            enc.model.add_constraint(LinearConstraint::eq(row, 0)).expect("declared");
        }
    });
    enc.edges = Some(edges);
    Ok(())
}

/// Encodes every subformula of `phi` bottom-up, one `z[node][k]` per
/// subformula and step.
pub fn encode_formula(g: &TimedDes, phi: &Formula, horizon: usize, enc: &mut Encoding) -> Result<()> {
    check_horizon(enc, horizon)?;
    if enc.ze.is_empty() {
        return Err(Error::InvalidRequest(
            "tick indicators must be encoded before the formula".into(),
        ));
    }
    let table = SubformulaTable::new(phi);
    // resolve atoms up front so errors leave the model untouched
    let mut atom_vecs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, node) in table.nodes().iter().enumerate() {
        if let Node::Atom(ap) = node {
            let a = g
                .dynamics()
                .atom_index(ap)
                .ok_or_else(|| Error::UnknownAtom(ap.clone()))?;
            atom_vecs.insert(idx, (0..g.len()).filter(|&i| g.holds(i, a)).collect());
        }
    }

    let h = horizon;
    let zphi: Vec<Vec<VarId>> = (0..table.len())
        .map(|node| {
            let tag = table.label(node);
            (0..=h)
                .map(|k| enc.model.add_binary(format!("z[{tag}][{k}]")))
                .collect()
        })
        .collect();

    let mut until = BTreeMap::new();
    for (node, n) in table.nodes().iter().enumerate() {
        if let Node::Until(..) = n {
            let tag = table.label(node);
            let cells: Vec<Vec<UntilCell>> = (0..=h)
                .map(|k| {
                    (k..=h)
                        .map(|j| UntilCell {
                            lower: enc.model.add_binary(format!("zl[{tag}][{k},{j}]")),
                            upper: enc.model.add_binary(format!("zu[{tag}][{k},{j}]")),
                            witness: enc.model.add_binary(format!("z[{tag}][{k},{j}]")),
                        })
                        .collect()
                })
                .collect();
            until.insert(node, cells);
        }
    }

    enc.track(RowGroup::Formula, |enc| {
        for (node, n) in table.nodes().iter().enumerate() {
            let z = &zphi[node];
            match *n {
                Node::True => {
                    for &v in z {
                        enc.model
                            .add_constraint(LinearConstraint::eq(vec![(1, v)], 1))
                            .expect("declared");
                    }
                }
                Node::Atom(_) => {
                    // v.w(k) is 0/1 under the one-hot rows, so the pair
                    // v.w(k) >= z, v.w(k) < z + 1 is an equality
                    for (k, &v) in z.iter().enumerate() {
                        let mut row = vec![(1, v)];
                        row.extend(atom_vecs[&node].iter().map(|&i| (-1, enc.w[k][i])));
                        enc.model
                            .add_constraint(LinearConstraint::eq(row, 0))
                            .expect("declared");
                    }
                }
                Node::Not(a) => {
                    for k in 0..=h {
                        enc.model
                            .add_constraint(LinearConstraint::eq(vec![(1, z[k]), (1, zphi[a][k])], 1))
                            .expect("declared");
                    }
                }
                Node::And(a, b) => {
                    for k in 0..=h {
                        add_and(&mut enc.model, z[k], &[zphi[a][k], zphi[b][k]]);
                    }
                }
                Node::Or(a, b) => {
                    for k in 0..=h {
                        add_or(&mut enc.model, z[k], &[zphi[a][k], zphi[b][k]]);
                    }
                }
                Node::Until(a, b, iv) => {
                    let cells = &until[&node];
                    for k in 0..=h {
                        let mut witnesses = Vec::with_capacity(h + 1 - k);
                        for j in k..=h {
                            let cell = cells[k][j - k];
                            let counter = enc.counter(k, j).to_vec();
                            add_tick_thresholds(
                                &mut enc.model,
                                &counter,
                                iv.lo(),
                                iv.hi(),
                                h,
                                cell.lower,
                                cell.upper,
                            );
                            let mut inputs = vec![cell.upper, cell.lower, zphi[b][j]];
                            inputs.extend((k..j).map(|l| zphi[a][l]));
                            add_and(&mut enc.model, cell.witness, &inputs);
                            witnesses.push(cell.witness);
                        }
                        add_or(&mut enc.model, z[k], &witnesses);
                    }
                }
            }
        }
    });

    enc.zphi = zphi;
    enc.until = until;
    enc.table = Some(table);
    Ok(())
}

/// Requires the encoded formula to hold on the whole fragment: `z[root][0] = 1`.
pub fn encode_root(enc: &mut Encoding) -> Result<()> {
    let Some(table) = &enc.table else {
        return Err(Error::InvalidRequest("no formula has been encoded".into()));
    };
    let z = enc.zphi[table.root()][0];
    enc.track(RowGroup::Root, |enc| {
        enc.model
            .add_constraint(LinearConstraint::eq(vec![(1, z)], 1))
            .expect("declared");
    });
    Ok(())
}

/// Full pipeline: trajectory, ticks in the requested mode, formula, root.
pub fn encode(g: &TimedDes, phi: &Formula, horizon: usize, mode: Mode) -> Result<Encoding> {
    let mut enc = encode_trajectory(g, horizon)?;
    match mode {
        Mode::Paper => encode_ticks(g, horizon, &mut enc)?,
        Mode::Exact => encode_edges_exact(g, horizon, &mut enc)?,
    }
    encode_formula(g, phi, horizon, &mut enc)?;
    encode_root(&mut enc)?;
    let table = enc.table.as_ref().expect("formula encoded");
    let untils = table
        .nodes()
        .iter()
        .filter(|n| matches!(n, Node::Until(..)))
        .count();
    debug_assert!(
        enc.model.num_vars()
            <= Encoding::variable_bound(g.len(), enc.transitions.len(), horizon, table.len(), untils)
    );
    Ok(enc)
}

fn check_horizon(enc: &Encoding, horizon: usize) -> Result<()> {
    if enc.horizon != horizon {
        return Err(Error::InvalidRequest(format!(
            "horizon {horizon} differs from the encoded trajectory ({})",
            enc.horizon
        )));
    }
    Ok(())
}
