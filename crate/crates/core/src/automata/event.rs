use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// An event label with its control attribute and owning agent.
///
/// Identity (equality, ordering, hashing) is by name only; the attributes
/// travel with the name and are checked for agreement whenever two
/// alphabets are combined.
#[derive(Clone, Debug)]
pub struct Event {
    name: Arc<str>,
    controllable: bool,
    owner: Option<usize>,
}

impl Event {
    pub fn new(name: impl AsRef<str>, controllable: bool) -> Self {
        Event {
            name: Arc::from(name.as_ref()),
            controllable,
            owner: None,
        }
    }

    pub fn controllable(name: impl AsRef<str>) -> Self {
        Self::new(name, true)
    }

    pub fn uncontrollable(name: impl AsRef<str>) -> Self {
        Self::new(name, false)
    }

    /// Tag the event with a 0-based agent index.
    pub fn with_owner(mut self, owner: usize) -> Self {
        self.owner = Some(owner);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_controllable(&self) -> bool {
        self.controllable
    }

    pub fn owner(&self) -> Option<usize> {
        self.owner
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

impl Hash for Event {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl std::borrow::Borrow<str> for Event {
    fn borrow(&self) -> &str {
        &self.name
    }
}

pub type EventSet = BTreeSet<Event>;

/// Event names of a set, in order.
pub fn names(set: &EventSet) -> Vec<&str> {
    set.iter().map(Event::name).collect()
}

/// `{a, b, c}` rendering used in reports.
pub fn format_set(set: &EventSet) -> String {
    format!("{{{}}}", names(set).join(", "))
}
