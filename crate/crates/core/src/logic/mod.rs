//! Ticked LTLf: syntax, parsing, printing, and direct finite-trace semantics.

mod eval;
mod formula;
mod parser;
mod table;

pub use eval::{evaluate, Atoms, Evaluator, Labeling};
pub use formula::{Formula, Interval};
pub use parser::parse;
pub use table::{subformulas, Node, SubformulaTable};
