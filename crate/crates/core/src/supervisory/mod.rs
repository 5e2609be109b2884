//! Controllability, observability and the constructions built on them.

mod cm;
mod control;
mod observe;
mod observer;
mod reduce;

pub use cm::{cm_from, is_valid_cm, EnablingViolation};
pub use control::{is_controllable, supcon, ControllabilityViolation};
pub use observe::{is_coordinable, is_observable, min_sys_com_set, ObservabilityViolation};
pub use observer::{
    enlarge_event_set, is_observer, is_occ, ObserverViolation, OccViolation, Property,
};
pub use reduce::{cm_reduce, ReductionContext};

/// Result of a property check: either it holds or a witness is returned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check<W> {
    Holds,
    Fails(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }
}

use crate::automata::{Automaton, EventSet};
use crate::error::{Error, Result};

pub(crate) fn require_same_alphabet(a: &Automaton, b: &Automaton, what: &str) -> Result<()> {
    if a.events()
        .iter()
        .map(|e| e.name())
        .ne(b.events().iter().map(|e| e.name()))
    {
        return Err(Error::invalid(format!("{what}: alphabets differ")));
    }
    Ok(())
}

pub(crate) fn require_subset(sigma: &EventSet, a: &Automaton, what: &str) -> Result<()> {
    match sigma.iter().find(|e| !a.has_event(e.name())) {
        Some(e) => Err(Error::invalid(format!(
            "{what}: event `{e}` not in the alphabet"
        ))),
        None => Ok(()),
    }
}
