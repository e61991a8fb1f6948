use std::collections::BTreeSet;
use std::fmt;

/// Closed tick interval `[lo, hi]` of an until operator, `lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: u32,
    hi: u32,
}

impl Interval {
    pub fn new(lo: u32, hi: u32) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn lo(self) -> u32 {
        self.lo
    }

    pub fn hi(self) -> u32 {
        self.hi
    }

    pub fn contains(self, c: u32) -> bool {
        self.lo <= c && c <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Ticked LTLf formula over the core connectives.
///
/// Derived operators (`false`, `->`, `<->`, `F`, `G`) are expanded by the
/// constructors below and by the parser; disjunction stays native because
/// it has its own encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Until(Box<Formula>, Box<Formula>, Interval),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn falsum() -> Self {
        Formula::Not(Box::new(Formula::True))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `a -> b` as `!a | b`.
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::not(a), b)
    }

    /// `a <-> b` as `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// # Panics
    /// If `lo > hi`.
    pub fn until(a: Formula, b: Formula, lo: u32, hi: u32) -> Self {
        let iv = Interval::new(lo, hi).expect("until interval needs lo <= hi");
        Formula::Until(Box::new(a), Box::new(b), iv)
    }

    /// `F[lo,hi] f` as `true U[lo,hi] f`.
    pub fn eventually(f: Formula, lo: u32, hi: u32) -> Self {
        Formula::until(Formula::True, f, lo, hi)
    }

    /// `G[lo,hi] f` as `!F[lo,hi] !f`.
    pub fn globally(f: Formula, lo: u32, hi: u32) -> Self {
        Formula::not(Formula::eventually(Formula::not(f), lo, hi))
    }

    /// Height of the syntax tree; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(_) => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b, _) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::True => {}
            Formula::Atom(a) => {
                out.insert(a);
            }
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b, _) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

// Binding strength, loosest first.
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_UNTIL: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::True | Formula::Atom(_) => PREC_ATOM,
            Formula::Not(_) => PREC_UNARY,
            Formula::Until(a, _, _) if **a == Formula::True => PREC_UNARY,
            Formula::Until(..) => PREC_UNTIL,
            Formula::And(..) => PREC_AND,
            Formula::Or(..) => PREC_OR,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_bare(f)?;
            f.write_str(")")
        } else {
            self.write_bare(f)
        }
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(a) => match &**a {
                Formula::True => f.write_str("false"),
                Formula::Until(t, inner, iv) if **t == Formula::True => match &**inner {
                    Formula::Not(g) => {
                        write!(f, "G{iv} ")?;
                        g.write_at(f, PREC_UNARY)
                    }
                    _ => {
                        f.write_str("!")?;
                        a.write_at(f, PREC_UNARY)
                    }
                },
                _ => {
                    f.write_str("!")?;
                    a.write_at(f, PREC_UNARY)
                }
            },
            Formula::And(a, b) => {
                a.write_at(f, PREC_AND)?;
                f.write_str(" & ")?;
                b.write_at(f, PREC_AND + 1)
            }
            Formula::Or(a, b) => {
                a.write_at(f, PREC_OR)?;
                f.write_str(" | ")?;
                b.write_at(f, PREC_OR + 1)
            }
            Formula::Until(a, b, iv) => {
                if **a == Formula::True {
                    write!(f, "F{iv} ")?;
                    return b.write_at(f, PREC_UNARY);
                }
                a.write_at(f, PREC_UNTIL + 1)?;
                write!(f, " U{iv} ")?;
                b.write_at(f, PREC_UNTIL)
            }
        }
    }
}

/// Prints in the concrete syntax accepted by [`parse`](super::parse).
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
