use super::{Encoding, Mode};
use crate::ilp::Assignment;
use crate::logic::Evaluator;
use crate::tdes::{Event, Fragment, TimedDes, TimedState};
use crate::{Error, Result};

/// Reads a fragment back out of a feasible assignment and certifies it:
/// every step must be a TDES transition and the root formula must hold at
/// position 0 under direct evaluation.
///
/// With explicit transition selectors the event is read off directly.
/// Otherwise the event of step `k` is `tick` when `ze[k] = 1`, and the
/// lexicographically smallest non-tick event linking the two states when
/// `ze[k] = 0`.
pub fn decode(enc: &Encoding, a: &Assignment, g: &TimedDes) -> Result<Fragment<TimedState>> {
    Ok(g.to_timed(&decode_indices(enc, a, g)?))
}

pub(crate) fn decode_indices(enc: &Encoding, a: &Assignment, g: &TimedDes) -> Result<Fragment<usize>> {
    if a.values().len() != enc.model.num_vars() {
        return Err(Error::InvalidRequest(format!(
            "assignment has {} values for {} variables",
            a.values().len(),
            enc.model.num_vars()
        )));
    }
    let states = enc
        .w
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let mut hot = row.iter().enumerate().filter(|(_, &v)| a.is_one(v));
            match (hot.next(), hot.next()) {
                (Some((i, _)), None) => Ok(i),
                _ => Err(Error::DecodeAmbiguity {
                    step: k,
                    msg: "state indicator is not one-hot".into(),
                }),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut events = Vec::with_capacity(enc.horizon());
    for k in 1..=enc.horizon() {
        let (from, to) = (states[k - 1], states[k]);
        let e = match (&enc.edges, enc.mode()) {
            (Some(edges), _) => {
                let t = edges[k - 1]
                    .iter()
                    .position(|&v| a.is_one(v))
                    .ok_or_else(|| Error::DecodeAmbiguity {
                        step: k,
                        msg: "no transition selected".into(),
                    })?;
                let t = enc.transitions()[t];
                if t.from != from || t.to != to {
                    return Err(Error::DecodeAmbiguity {
                        step: k,
                        msg: "selected transition disagrees with the states".into(),
                    });
                }
                t.event
            }
            (None, Some(Mode::Paper)) => {
                if a.is_one(enc.ze[k - 1]) {
                    if g.successor(from, Event::Tick) != Some(to) {
                        return Err(Error::DecodeAmbiguity {
                            step: k,
                            msg: format!(
                                "tick indicated but {} does not tick into {}",
                                g.describe(from),
                                g.describe(to)
                            ),
                        });
                    }
                    Event::Tick
                } else {
                    g.out_edges(from)
                        .iter()
                        .find(|&&(e, s)| !e.is_tick() && s == to)
                        .map(|&(e, _)| e)
                        .ok_or_else(|| Error::DecodeAmbiguity {
                            step: k,
                            msg: format!(
                                "no non-tick event leads from {} to {}",
                                g.describe(from),
                                g.describe(to)
                            ),
                        })?
                }
            }
            (None, _) => {
                return Err(Error::InvalidRequest(
                    "encoding has no tick indicators".into(),
                ))
            }
        };
        events.push(e);
    }

    let f = Fragment::new(states, events)?;
    if let Some(table) = enc.table() {
        let ev = Evaluator::from_table(table.clone(), g)?;
        if !ev.eval(f.view(), g, 0)? {
            return Err(Error::CertificationFailed);
        }
    }
    Ok(f)
}
