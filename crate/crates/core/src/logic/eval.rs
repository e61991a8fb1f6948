use super::formula::Formula;
use super::table::{Node, SubformulaTable};
use crate::tdes::{Dynamics, FragmentView, TimedDes, TimedState};
use crate::{Error, Result};

/// Resolves atomic propositions to indices.
pub trait Atoms {
    fn atom_index(&self, atom: &str) -> Option<usize>;
}

/// Decides resolved atoms on fragment states.
pub trait Labeling<S>: Atoms {
    fn holds(&self, state: &S, atom: usize) -> bool;
}

impl Atoms for Dynamics {
    fn atom_index(&self, atom: &str) -> Option<usize> {
        Dynamics::atom_index(self, atom)
    }
}

impl Atoms for TimedDes {
    fn atom_index(&self, atom: &str) -> Option<usize> {
        self.dynamics().atom_index(atom)
    }
}

impl Labeling<TimedState> for Dynamics {
    fn holds(&self, state: &TimedState, atom: usize) -> bool {
        self.activity_holds(state.activity, atom)
    }
}

impl Labeling<TimedState> for TimedDes {
    fn holds(&self, state: &TimedState, atom: usize) -> bool {
        self.dynamics().activity_holds(state.activity, atom)
    }
}

/// Fragments over TDES state indices.
impl Labeling<usize> for TimedDes {
    fn holds(&self, state: &usize, atom: usize) -> bool {
        TimedDes::holds(self, *state, atom)
    }
}

const UNKNOWN: u8 = 0;
const FALSE: u8 = 1;
const TRUE: u8 = 2;

/// Direct semantic evaluator over a [`SubformulaTable`] with atoms already
/// resolved against a labeling. Reusable across fragments.
#[derive(Clone, Debug)]
pub struct Evaluator {
    table: SubformulaTable,
    atoms: Vec<usize>,
}

impl Evaluator {
    pub fn new<L: Atoms + ?Sized>(formula: &Formula, labeling: &L) -> Result<Self> {
        Self::from_table(SubformulaTable::new(formula), labeling)
    }

    pub fn from_table<L: Atoms + ?Sized>(
        table: SubformulaTable,
        labeling: &L,
    ) -> Result<Self> {
        let atoms = table
            .nodes()
            .iter()
            .map(|n| match n {
                Node::Atom(a) => labeling
                    .atom_index(a)
                    .ok_or_else(|| Error::UnknownAtom(a.clone())),
                _ => Ok(usize::MAX),
            })
            .collect::<Result<_>>()?;
        Ok(Evaluator { table, atoms })
    }

    pub fn table(&self) -> &SubformulaTable {
        &self.table
    }

    /// Whether the `k`-th suffix of `f` satisfies the root formula.
    pub fn eval<S, L: Labeling<S> + ?Sized>(
        &self,
        f: FragmentView<'_, S>,
        labeling: &L,
        k: usize,
    ) -> Result<bool> {
        if k > f.horizon() {
            return Err(Error::IndexOutOfRange {
                index: k,
                horizon: f.horizon(),
            });
        }
        let mut run = Run::new(self, f, labeling);
        Ok(run.sat(self.table.root(), k))
    }

    /// Truth value of every subformula at every position, `[node][k]`.
    pub fn eval_all<S, L: Labeling<S> + ?Sized>(
        &self,
        f: FragmentView<'_, S>,
        labeling: &L,
    ) -> Vec<Vec<bool>> {
        let mut run = Run::new(self, f, labeling);
        (0..self.table.len())
            .map(|n| (0..=f.horizon()).map(|k| run.sat(n, k)).collect())
            .collect()
    }
}

struct Run<'e, 'f, S, L: ?Sized> {
    ev: &'e Evaluator,
    frag: FragmentView<'f, S>,
    labeling: &'e L,
    ticks: Vec<usize>,
    width: usize,
    memo: Vec<u8>,
}

impl<'e, 'f, S, L: Labeling<S> + ?Sized> Run<'e, 'f, S, L> {
    fn new(ev: &'e Evaluator, frag: FragmentView<'f, S>, labeling: &'e L) -> Self {
        let width = frag.horizon() + 1;
        Run {
            ev,
            frag,
            labeling,
            ticks: frag.tick_prefix(),
            width,
            memo: vec![UNKNOWN; ev.table.len() * width],
        }
    }

    fn sat(&mut self, node: usize, k: usize) -> bool {
        let slot = node * self.width + k;
        match self.memo[slot] {
            TRUE => return true,
            FALSE => return false,
            _ => {}
        }
        let value = match *self.ev.table.node(node) {
            Node::True => true,
            Node::Atom(_) => self
                .labeling
                .holds(&self.frag.states()[k], self.ev.atoms[node]),
            Node::Not(a) => !self.sat(a, k),
            Node::And(a, b) => self.sat(a, k) && self.sat(b, k),
            Node::Or(a, b) => self.sat(a, k) || self.sat(b, k),
            Node::Until(a, b, iv) => {
                let h = self.frag.horizon();
                let mut found = false;
                for j in k..=h {
                    let c = (self.ticks[j] - self.ticks[k]) as u64;
                    if c > iv.hi() as u64 {
                        break;
                    }
                    if c >= iv.lo() as u64 && self.sat(b, j) {
                        found = true;
                        break;
                    }
                    // a must hold at j for any later witness
                    if !self.sat(a, j) {
                        break;
                    }
                }
                found
            }
        };
        self.memo[slot] = if value { TRUE } else { FALSE };
        value
    }
}

/// Whether the `k`-th suffix of `f` satisfies `formula`.
pub fn evaluate<S, L: Labeling<S> + ?Sized>(
    f: FragmentView<'_, S>,
    formula: &Formula,
    k: usize,
    labeling: &L,
) -> Result<bool> {
    Evaluator::new(formula, labeling)?.eval(f, labeling, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::tdes::{Event, EventId, Fragment};

    /// States are single letters; the atom with the same name holds there.
    struct Letters;

    impl Atoms for Letters {
        fn atom_index(&self, atom: &str) -> Option<usize> {
            let mut it = atom.chars();
            match (it.next(), it.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => Some(c as usize),
                _ => None,
            }
        }

    }

    impl Labeling<char> for Letters {
        fn holds(&self, state: &char, atom: usize) -> bool {
            *state as usize == atom
        }
    }

    const SIGMA: Event = Event::Act(EventId(0));

    fn example() -> Fragment<char> {
        Fragment::new(vec!['a', 'a', 'b', 'a'], vec![Event::Tick, SIGMA, Event::Tick]).unwrap()
    }

    #[test]
    fn worked_until_example() {
        let f = example();
        let phi = parse("a U[1,3] b").unwrap();
        assert!(evaluate(f.view(), &phi, 0, &Letters).unwrap());
        assert!(!evaluate(f.view(), &phi, 1, &Letters).unwrap());
    }

    #[test]
    fn true_holds_everywhere() {
        let f = example();
        for k in 0..=3 {
            assert!(evaluate(f.view(), &Formula::True, k, &Letters).unwrap());
        }
    }

    #[test]
    fn zero_width_witness_at_anchor() {
        // j = k: the left operand is not required anywhere
        let f = example();
        let phi = parse("z U[0,0] a").unwrap();
        assert!(evaluate(f.view(), &phi, 0, &Letters).unwrap());
        let phi = parse("z U[1,1] a").unwrap();
        assert!(!evaluate(f.view(), &phi, 0, &Letters).unwrap());
    }

    #[test]
    fn errors() {
        let f = example();
        assert!(matches!(
            evaluate(f.view(), &parse("Ab").unwrap(), 0, &Letters),
            Err(Error::UnknownAtom(_))
        ));
        assert!(matches!(
            evaluate(f.view(), &Formula::True, 4, &Letters),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
