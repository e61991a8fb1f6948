use thiserror::Error;

use crate::tdes::Diagnostic;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system: {}", format_diagnostics(.0))]
    InvalidSystem(Vec<Diagnostic>),

    #[error("unknown event `{0}`")]
    UnknownEvent(String),

    #[error("unknown activity state `{0}`")]
    UnknownState(String),

    #[error("unknown atomic proposition `{0}`")]
    UnknownAtom(String),

    #[error("event `{event}` is not enabled at {state}")]
    NotEnabled { state: String, event: String },

    #[error("reachable state space exceeds the cap of {cap} states")]
    StateCapExceeded { cap: usize },

    #[error("index {index} out of range for a fragment of horizon {horizon}")]
    IndexOutOfRange { index: usize, horizon: usize },

    #[error("malformed fragment: {0}")]
    MalformedFragment(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable {var} has empty bounds [{lo}, {hi}]")]
    EmptyBounds { var: String, lo: i64, hi: i64 },

    #[error("constraint references undeclared variable index {0}")]
    UndeclaredVariable(usize),

    #[error("decode ambiguity at step {step}: {msg}")]
    DecodeAmbiguity { step: usize, msg: String },

    #[error("decoded fragment does not satisfy the formula")]
    CertificationFailed,

    #[error("enumeration budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
