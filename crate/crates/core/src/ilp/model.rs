use std::collections::BTreeMap;
use std::fmt::{self, Write};

use crate::{Error, Result};

/// Dense, creation-ordered variable index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparator {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparator::Le => "<=",
            Comparator::Ge => ">=",
            Comparator::Eq => "=",
        })
    }
}

/// `sum(coef * var) cmp rhs` over exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(i64, VarId)>,
    pub cmp: Comparator,
    pub rhs: i64,
}

impl LinearConstraint {
    pub fn new(terms: Vec<(i64, VarId)>, cmp: Comparator, rhs: i64) -> Self {
        LinearConstraint { terms, cmp, rhs }
    }

    pub fn le(terms: Vec<(i64, VarId)>, rhs: i64) -> Self {
        Self::new(terms, Comparator::Le, rhs)
    }

    pub fn ge(terms: Vec<(i64, VarId)>, rhs: i64) -> Self {
        Self::new(terms, Comparator::Ge, rhs)
    }

    pub fn eq(terms: Vec<(i64, VarId)>, rhs: i64) -> Self {
        Self::new(terms, Comparator::Eq, rhs)
    }

    pub fn lhs(&self, values: &[i64]) -> i64 {
        self.terms.iter().map(|&(a, v)| a * values[v.0]).sum()
    }

    pub fn holds(&self, values: &[i64]) -> bool {
        let lhs = self.lhs(values);
        match self.cmp {
            Comparator::Le => lhs <= self.rhs,
            Comparator::Ge => lhs >= self.rhs,
            Comparator::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

/// Integer feasibility model: bounded integer variables and linear rows.
///
/// Equalities are stored as a `<=` / `>=` pair, so [`rows`](Self::rows)
/// only ever holds the two inequality forms.
#[derive(Clone, Debug, Default)]
pub struct IlpModel {
    vars: Vec<VarDecl>,
    rows: Vec<LinearConstraint>,
    added: usize,
}

/// A value for every model variable, indexed by [`VarId`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<i64>,
}

impl Assignment {
    pub fn new(values: Vec<i64>) -> Self {
        Assignment { values }
    }

    pub fn get(&self, v: VarId) -> i64 {
        self.values[v.0]
    }

    pub fn is_one(&self, v: VarId) -> bool {
        self.values[v.0] == 1
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn set(&mut self, v: VarId, value: i64) {
        self.values[v.0] = value;
    }
}

/// First problem found by [`IlpModel::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, got: usize },
    OutOfBounds { var: usize, value: i64 },
    Row { row: usize, lhs: i64 },
}

impl IlpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> Result<VarId> {
        let name = name.into();
        if lo > hi {
            return Err(Error::EmptyBounds { var: name, lo, hi });
        }
        self.vars.push(VarDecl { name, lo, hi });
        Ok(VarId(self.vars.len() - 1))
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.add_var(name, 0, 1).expect("0 <= 1")
    }

    /// Appends `c`, merging repeated variables and dropping zero terms.
    pub fn add_constraint(&mut self, c: LinearConstraint) -> Result<()> {
        let mut merged: BTreeMap<VarId, i64> = BTreeMap::new();
        for &(a, v) in &c.terms {
            if v.0 >= self.vars.len() {
                return Err(Error::UndeclaredVariable(v.0));
            }
            *merged.entry(v).or_default() += a;
        }
        let terms: Vec<_> = merged
            .into_iter()
            .filter(|&(_, a)| a != 0)
            .map(|(v, a)| (a, v))
            .collect();
        match c.cmp {
            Comparator::Eq => {
                self.rows.push(LinearConstraint::le(terms.clone(), c.rhs));
                self.rows.push(LinearConstraint::ge(terms, c.rhs));
            }
            cmp => self.rows.push(LinearConstraint::new(terms, cmp, c.rhs)),
        }
        self.added += 1;
        Ok(())
    }

    /// Narrows the bounds of `v` to the single value `value`.
    pub fn fix(&mut self, v: VarId, value: i64) -> Result<()> {
        let decl = self
            .vars
            .get_mut(v.0)
            .ok_or(Error::UndeclaredVariable(v.0))?;
        if value < decl.lo || value > decl.hi {
            return Err(Error::EmptyBounds {
                var: decl.name.clone(),
                lo: value.max(decl.lo),
                hi: value.min(decl.hi),
            });
        }
        decl.lo = value;
        decl.hi = value;
        Ok(())
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn var(&self, v: VarId) -> &VarDecl {
        &self.vars[v.0]
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn rows(&self) -> &[LinearConstraint] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of `add_constraint` calls, counting an equality once.
    pub fn num_constraints(&self) -> usize {
        self.added
    }

    /// Independent check of an assignment against bounds and every row.
    pub fn verify(&self, a: &Assignment) -> std::result::Result<(), Violation> {
        if a.values.len() != self.vars.len() {
            return Err(Violation::WrongLength {
                expected: self.vars.len(),
                got: a.values.len(),
            });
        }
        for (i, (d, &x)) in self.vars.iter().zip(&a.values).enumerate() {
            if x < d.lo || x > d.hi {
                return Err(Violation::OutOfBounds { var: i, value: x });
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.holds(&a.values) {
                return Err(Violation::Row {
                    row: i,
                    lhs: row.lhs(&a.values),
                });
            }
        }
        Ok(())
    }

    /// Indices of all rows violated by `a`.
    pub fn violated_rows(&self, a: &Assignment) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.holds(&a.values))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn format_row(&self, row: &LinearConstraint) -> String {
        let mut s = String::new();
        if row.terms.is_empty() {
            s.push('0');
        }
        for (i, &(a, v)) in row.terms.iter().enumerate() {
            let sign = if a < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                s.push(' ');
            }
            let mag = a.abs();
            if mag == 1 {
                write!(s, "{sign}{}", self.vars[v.0].name).unwrap();
            } else {
                write!(s, "{sign}{mag} {}", self.vars[v.0].name).unwrap();
            }
        }
        write!(s, " {} {}", row.cmp, row.rhs).unwrap();
        s
    }

    /// LP-like plain-text dump (pure feasibility, zero objective).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "\\ {} variables, {} rows", self.vars.len(), self.rows.len()).unwrap();
        out.push_str("Minimize\n obj: 0\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            writeln!(out, " r{i}: {}", self.format_row(row)).unwrap();
        }
        out.push_str("Bounds\n");
        let mut binaries = Vec::new();
        let mut generals = Vec::new();
        for d in &self.vars {
            if d.lo == d.hi {
                writeln!(out, " {} = {}", d.name, d.lo).unwrap();
            } else {
                writeln!(out, " {} <= {} <= {}", d.lo, d.name, d.hi).unwrap();
            }
            if d.lo >= 0 && d.hi <= 1 {
                binaries.push(d.name.as_str());
            } else {
                generals.push(d.name.as_str());
            }
        }
        if !generals.is_empty() {
            out.push_str("Generals\n");
            for n in generals {
                writeln!(out, " {n}").unwrap();
            }
        }
        if !binaries.is_empty() {
            out.push_str("Binaries\n");
            for n in binaries {
                writeln!(out, " {n}").unwrap();
            }
        }
        out.push_str("End\n");
        out
    }
}
