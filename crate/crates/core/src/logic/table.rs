use std::collections::HashMap;

use super::formula::{Formula, Interval};

/// A subformula with its children replaced by table indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    Atom(String),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Until(usize, usize, Interval),
}

/// Distinct subformulas of a root formula, children before parents, root last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubformulaTable {
    nodes: Vec<Node>,
}

impl SubformulaTable {
    pub fn new(root: &Formula) -> Self {
        let mut table = SubformulaTable { nodes: Vec::new() };
        let mut seen = HashMap::new();
        table.intern(root, &mut seen);
        table
    }

    fn intern<'f>(&mut self, f: &'f Formula, seen: &mut HashMap<&'f Formula, usize>) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let node = match f {
            Formula::True => Node::True,
            Formula::Atom(a) => Node::Atom(a.clone()),
            Formula::Not(a) => Node::Not(self.intern(a, seen)),
            Formula::And(a, b) => {
                let a = self.intern(a, seen);
                Node::And(a, self.intern(b, seen))
            }
            Formula::Or(a, b) => {
                let a = self.intern(a, seen);
                Node::Or(a, self.intern(b, seen))
            }
            Formula::Until(a, b, iv) => {
                let a = self.intern(a, seen);
                Node::Until(a, self.intern(b, seen), *iv)
            }
        };
        let i = self.nodes.len();
        self.nodes.push(node);
        seen.insert(f, i);
        i
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        match self.nodes[i] {
            Node::True | Node::Atom(_) => vec![],
            Node::Not(a) => vec![a],
            Node::And(a, b) | Node::Or(a, b) | Node::Until(a, b, _) => vec![a, b],
        }
    }

    /// Short human-readable tag such as `Until#4`.
    pub fn label(&self, i: usize) -> String {
        let kind = match &self.nodes[i] {
            Node::True => "True",
            Node::Atom(_) => "Atom",
            Node::Not(_) => "Not",
            Node::And(..) => "And",
            Node::Or(..) => "Or",
            Node::Until(..) => "Until",
        };
        format!("{kind}#{i}")
    }
}

/// Convenience wrapper for [`SubformulaTable::new`].
pub fn subformulas(f: &Formula) -> SubformulaTable {
    SubformulaTable::new(f)
}
