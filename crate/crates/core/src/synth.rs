//! Horizon iteration over the encode, solve, decode, certify loop, and a
//! brute-force enumeration oracle.

use std::time::{Duration, Instant};

use crate::encode::{self, decode, Mode};
use crate::ilp::{solve_with_stats, Outcome as SolverOutcome};
use crate::logic::{Evaluator, Formula};
use crate::tdes::{Event, Fragment, TimedDes, TimedState, UntimedDes, DEFAULT_STATE_CAP};
use crate::{Error, Result};

pub const DEFAULT_ORACLE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
pub struct SynthesisRequest {
    pub system: UntimedDes,
    pub formula: Formula,
    pub horizon_min: usize,
    pub horizon_max: usize,
    pub mode: Mode,
    pub state_cap: usize,
    /// Maximum number of fragment prefixes the oracle may visit.
    pub oracle_budget: u64,
}

impl SynthesisRequest {
    pub fn new(system: UntimedDes, formula: Formula, horizon_min: usize, horizon_max: usize) -> Self {
        SynthesisRequest {
            system,
            formula,
            horizon_min,
            horizon_max,
            mode: Mode::default(),
            state_cap: DEFAULT_STATE_CAP,
            oracle_budget: DEFAULT_ORACLE_BUDGET,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_range(self.horizon_min, self.horizon_max)?;
        if self.state_cap == 0 {
            return Err(Error::InvalidRequest("state cap must be positive".into()));
        }
        Ok(())
    }
}

fn check_range(hmin: usize, hmax: usize) -> Result<()> {
    if hmin == 0 || hmin > hmax {
        return Err(Error::InvalidRequest(format!(
            "horizon range {hmin}..{hmax} must satisfy 1 <= min <= max"
        )));
    }
    Ok(())
}

/// Cost of one horizon attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub horizon: usize,
    /// `None` for oracle enumeration.
    pub mode: Option<Mode>,
    pub variables: usize,
    pub constraints: usize,
    pub nodes: u64,
    pub feasible: bool,
    pub wall_time: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Statistics {
    pub variables: usize,
    pub constraints: usize,
    pub nodes: u64,
    pub wall_time: Duration,
    /// Set when a paper-mode solution failed certification and the
    /// horizon was re-solved in exact mode.
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found {
        fragment: Fragment<TimedState>,
        horizon: usize,
        stats: Statistics,
    },
    NotFound {
        horizon_max: usize,
    },
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub outcome: Outcome,
    /// One entry per solve, in order.
    pub attempts: Vec<Attempt>,
}

impl SynthesisResult {
    pub fn is_found(&self) -> bool {
        matches!(self.outcome, Outcome::Found { .. })
    }

    pub fn horizon(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Found { horizon, .. } => Some(horizon),
            Outcome::NotFound { .. } => None,
        }
    }

    pub fn fragment(&self) -> Option<&Fragment<TimedState>> {
        match &self.outcome {
            Outcome::Found { fragment, .. } => Some(fragment),
            Outcome::NotFound { .. } => None,
        }
    }
}

pub fn synthesize(r: &SynthesisRequest) -> Result<SynthesisResult> {
    r.validate()?;
    let g = TimedDes::build(&r.system, r.state_cap)?;
    synthesize_on(&g, &r.formula, r.horizon_min, r.horizon_max, r.mode)
}

/// [`synthesize`] against an already built TDES.
pub fn synthesize_on(
    g: &TimedDes,
    formula: &Formula,
    horizon_min: usize,
    horizon_max: usize,
    mode: Mode,
) -> Result<SynthesisResult> {
    check_range(horizon_min, horizon_max)?;
    let certifier = Evaluator::new(formula, g)?;
    let mut attempts = Vec::new();
    for h in horizon_min..=horizon_max {
        let (attempt, found) = solve_horizon(g, formula, h, mode)?;
        attempts.push(attempt);
        let mut fallback = false;
        let found = match found {
            Some(Ok(f)) => Some(f),
            Some(Err(Error::CertificationFailed | Error::DecodeAmbiguity { .. }))
                if mode == Mode::Paper =>
            {
                fallback = true;
                let (attempt, found) = solve_horizon(g, formula, h, Mode::Exact)?;
                attempts.push(attempt);
                found.transpose()?
            }
            Some(Err(e)) => return Err(e),
            None => None,
        };
        if let Some(fragment) = found {
            let indices = g.to_indices(&fragment)?;
            assert!(
                certifier.eval(indices.view(), g, 0)?,
                "returned fragment does not satisfy the formula"
            );
            let last = attempts.last().expect("at least one attempt");
            let stats = Statistics {
                variables: last.variables,
                constraints: last.constraints,
                nodes: attempts.iter().filter(|a| a.horizon == h).map(|a| a.nodes).sum(),
                wall_time: attempts
                    .iter()
                    .filter(|a| a.horizon == h)
                    .map(|a| a.wall_time)
                    .sum(),
                fallback,
            };
            return Ok(SynthesisResult {
                outcome: Outcome::Found {
                    fragment,
                    horizon: h,
                    stats,
                },
                attempts,
            });
        }
    }
    Ok(SynthesisResult {
        outcome: Outcome::NotFound { horizon_max },
        attempts,
    })
}

type Decoded = Option<Result<Fragment<TimedState>>>;

fn solve_horizon(g: &TimedDes, formula: &Formula, h: usize, mode: Mode) -> Result<(Attempt, Decoded)> {
    let start = Instant::now();
    let enc = encode::encode(g, formula, h, mode)?;
    let (out, stats) = solve_with_stats(&enc.model);
    let decoded = match &out {
        SolverOutcome::Feasible(a) => Some(decode(&enc, a, g)),
        SolverOutcome::Infeasible => None,
    };
    let attempt = Attempt {
        horizon: h,
        mode: Some(mode),
        variables: enc.model.num_vars(),
        constraints: enc.model.num_constraints(),
        nodes: stats.nodes,
        feasible: out.is_feasible(),
        wall_time: start.elapsed(),
    };
    Ok((attempt, decoded))
}

/// Enumerates every fragment of each horizon in range, depth first with
/// successors in event-name order, and returns the first one satisfying
/// the formula. Fails once more than `r.oracle_budget` prefixes have been
/// visited.
pub fn oracle_synthesize(r: &SynthesisRequest) -> Result<SynthesisResult> {
    r.validate()?;
    let g = TimedDes::build(&r.system, r.state_cap)?;
    oracle_on(&g, &r.formula, r.horizon_min, r.horizon_max, r.oracle_budget)
}

/// [`oracle_synthesize`] against an already built TDES.
pub fn oracle_on(
    g: &TimedDes,
    formula: &Formula,
    horizon_min: usize,
    horizon_max: usize,
    budget: u64,
) -> Result<SynthesisResult> {
    check_range(horizon_min, horizon_max)?;
    let ev = Evaluator::new(formula, g)?;
    let mut visited = 0u64;
    let mut attempts = Vec::new();
    for h in horizon_min..=horizon_max {
        let start = Instant::now();
        let before = visited;
        let hit = first_fragment(g, h, budget, &mut visited, |f| {
            ev.eval(f.view(), g, 0).expect("k = 0 is in range")
        })?;
        attempts.push(Attempt {
            horizon: h,
            mode: None,
            variables: 0,
            constraints: 0,
            nodes: visited - before,
            feasible: hit.is_some(),
            wall_time: start.elapsed(),
        });
        if let Some(f) = hit {
            let stats = Statistics {
                variables: 0,
                constraints: 0,
                nodes: visited - before,
                wall_time: start.elapsed(),
                fallback: false,
            };
            return Ok(SynthesisResult {
                outcome: Outcome::Found {
                    fragment: g.to_timed(&f),
                    horizon: h,
                    stats,
                },
                attempts,
            });
        }
    }
    Ok(SynthesisResult {
        outcome: Outcome::NotFound { horizon_max },
        attempts,
    })
}

/// Depth-first walk over all fragments of horizon `h`; returns the first
/// one accepted by `accept`.
pub fn first_fragment(
    g: &TimedDes,
    h: usize,
    budget: u64,
    visited: &mut u64,
    mut accept: impl FnMut(&Fragment<usize>) -> bool,
) -> Result<Option<Fragment<usize>>> {
    let mut states = vec![g.initial()];
    let mut events: Vec<Event> = Vec::new();
    // cursor[d]: next out-edge to try at depth d
    let mut cursor = vec![0usize];
    loop {
        let d = events.len();
        if d == h {
            let f = Fragment::new(states.clone(), events.clone())?;
            if accept(&f) {
                return Ok(Some(f));
            }
        } else {
            let s = states[d];
            let i = cursor[d];
            if let Some(&(e, next)) = g.out_edges(s).get(i) {
                cursor[d] += 1;
                *visited += 1;
                if *visited > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                states.push(next);
                events.push(e);
                cursor.push(0);
                continue;
            }
        }
        // exhausted this depth
        if d == 0 {
            return Ok(None);
        }
        states.pop();
        events.pop();
        cursor.pop();
    }
}
