use super::dynamics::{Event, TimedState};
use crate::{Error, Result};

/// A finite execution fragment `s(0), e(1), s(1), ..., e(H), s(H)`.
///
/// The state type is generic so that fragments can be written over TDES
/// states, over state indices, or over plain labels in tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment<S = TimedState> {
    states: Vec<S>,
    events: Vec<Event>,
}

/// Borrowed fragment, possibly of horizon 0. Suffixes are views.
#[derive(Debug, PartialEq, Eq)]
pub struct FragmentView<'a, S> {
    states: &'a [S],
    events: &'a [Event],
}

impl<S> Clone for FragmentView<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for FragmentView<'_, S> {}

impl<S> Fragment<S> {
    /// Requires `states.len() == events.len() + 1` and at least one event.
    pub fn new(states: Vec<S>, events: Vec<Event>) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::MalformedFragment("horizon must be at least 1".into()));
        }
        if states.len() != events.len() + 1 {
            return Err(Error::MalformedFragment(format!(
                "{} states do not alternate with {} events",
                states.len(),
                events.len()
            )));
        }
        Ok(Fragment { states, events })
    }

    pub fn horizon(&self) -> usize {
        self.events.len()
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    /// `events()[k - 1]` is `e(k)`.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn view(&self) -> FragmentView<'_, S> {
        FragmentView {
            states: &self.states,
            events: &self.events,
        }
    }

    pub fn count(&self, k: usize, j: usize) -> Result<usize> {
        self.view().count(k, j)
    }

    pub fn suffix(&self, k: usize) -> Result<FragmentView<'_, S>> {
        self.view().suffix(k)
    }

    pub fn map_states<T>(&self, f: impl FnMut(&S) -> T) -> Fragment<T> {
        Fragment {
            states: self.states.iter().map(f).collect(),
            events: self.events.clone(),
        }
    }

    pub fn into_parts(self) -> (Vec<S>, Vec<Event>) {
        (self.states, self.events)
    }
}

impl<'a, S> FragmentView<'a, S> {
    /// Same shape requirement as [`Fragment::new`] but horizon 0 is allowed.
    pub fn new(states: &'a [S], events: &'a [Event]) -> Result<Self> {
        if states.len() != events.len() + 1 {
            return Err(Error::MalformedFragment(format!(
                "{} states do not alternate with {} events",
                states.len(),
                events.len()
            )));
        }
        Ok(FragmentView { states, events })
    }

    pub fn horizon(&self) -> usize {
        self.events.len()
    }

    pub fn states(&self) -> &'a [S] {
        self.states
    }

    pub fn events(&self) -> &'a [Event] {
        self.events
    }

    pub fn state(&self, k: usize) -> Result<&'a S> {
        self.states.get(k).ok_or(Error::IndexOutOfRange {
            index: k,
            horizon: self.horizon(),
        })
    }

    /// Number of ticks among `e(k+1), ..., e(j)`.
    pub fn count(&self, k: usize, j: usize) -> Result<usize> {
        let h = self.horizon();
        if j > h {
            return Err(Error::IndexOutOfRange { index: j, horizon: h });
        }
        if k > j {
            return Err(Error::IndexOutOfRange { index: k, horizon: j });
        }
        Ok(self.events[k..j].iter().filter(|e| e.is_tick()).count())
    }

    /// `s(k), e(k+1), ..., s(H)`.
    pub fn suffix(&self, k: usize) -> Result<FragmentView<'a, S>> {
        if k > self.horizon() {
            return Err(Error::IndexOutOfRange {
                index: k,
                horizon: self.horizon(),
            });
        }
        Ok(FragmentView {
            states: &self.states[k..],
            events: &self.events[k..],
        })
    }

    /// Prefix sums of ticks: `ticks[j] - ticks[k] == count(k, j)`.
    pub(crate) fn tick_prefix(&self) -> Vec<usize> {
        let mut acc = Vec::with_capacity(self.states.len());
        acc.push(0);
        let mut n = 0;
        for e in self.events {
            n += e.is_tick() as usize;
            acc.push(n);
        }
        acc
    }

    pub fn to_fragment(&self) -> Fragment<S>
    where
        S: Clone,
    {
        Fragment {
            states: self.states.to_vec(),
            events: self.events.to_vec(),
        }
    }
}
