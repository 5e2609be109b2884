//! Agents, inter-agent constraints and the networks they form.

mod crn;
mod dot;
mod format;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

pub use crn::Crn;
pub use dot::{crn_to_dot, dcsn_to_dot};
pub use format::parse_dcsn;

use crate::automata::{parse_aut, sync_product_all, union_alphabet, Automaton, EventSet};
use crate::error::{Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// An inter-agent constraint `C^k` over the agents `J_k`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub name: String,
    /// 0-based agent indices.
    pub agents: BTreeSet<usize>,
    pub automaton: Automaton,
}

/// A distributed constraint specification network.
///
/// Indices are 0-based in the API and 1-based in files and messages.
#[derive(Clone, Debug)]
pub struct Dcsn {
    id: u64,
    agent_names: Vec<String>,
    agents: Vec<Automaton>,
    constraints: Vec<Constraint>,
}

/// One broken well-formedness condition. Indices are 0-based; `Display`
/// prints them 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SharedEvent {
        first: usize,
        second: usize,
        event: String,
    },
    UnknownAgent {
        constraint: usize,
        agent: usize,
    },
    NoAgents {
        constraint: usize,
    },
    ConstraintMissesAgent {
        constraint: usize,
        agent: usize,
    },
    ForeignConstraintEvent {
        constraint: usize,
        event: String,
    },
    UncoveredAgent {
        agent: usize,
    },
    OwnerMismatch {
        agent: usize,
        event: String,
        declared: usize,
    },
    AttributeClash {
        event: String,
    },
    BlockingAgent {
        agent: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            SharedEvent {
                first,
                second,
                event,
            } => write!(
                f,
                "agents {} and {} share event `{event}`",
                first + 1,
                second + 1
            ),
            UnknownAgent { constraint, agent } => {
                write!(
                    f,
                    "constraint {} lists unknown agent {}",
                    constraint + 1,
                    agent + 1
                )
            }
            NoAgents { constraint } => write!(f, "constraint {} lists no agents", constraint + 1),
            ConstraintMissesAgent { constraint, agent } => write!(
                f,
                "constraint {} shares no event with its agent {}",
                constraint + 1,
                agent + 1
            ),
            ForeignConstraintEvent { constraint, event } => write!(
                f,
                "constraint {} uses `{event}`, which none of its agents owns",
                constraint + 1
            ),
            UncoveredAgent { agent } => {
                write!(f, "agent {} takes part in no constraint", agent + 1)
            }
            OwnerMismatch {
                agent,
                event,
                declared,
            } => write!(
                f,
                "event `{event}` of agent {} is declared as owned by agent {}",
                agent + 1,
                declared + 1
            ),
            AttributeClash { event } => {
                write!(f, "event `{event}` is both controllable and uncontrollable")
            }
            BlockingAgent { agent } => write!(f, "agent {} is blocking", agent + 1),
        }
    }
}

impl Dcsn {
    /// Assemble a network. Agent events get their owner filled in when the
    /// automaton leaves it unset. No validation is done here.
    pub fn new(agents: Vec<(String, Automaton)>, constraints: Vec<Constraint>) -> Self {
        let (agent_names, agents) = agents
            .into_iter()
            .enumerate()
            .map(|(i, (n, a))| (n, with_owner(&a, i)))
            .unzip();
        Dcsn {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            agent_names,
            agents,
            constraints,
        }
    }

    /// Read a `.dcsn` file; automaton paths are relative to its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        parse_dcsn(&text, &path.display().to_string(), |rel| {
            let p = dir.join(rel);
            parse_aut(&read(&p)?, &p.display().to_string())
        })
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn agent(&self, i: usize) -> &Automaton {
        &self.agents[i]
    }

    pub fn agents(&self) -> &[Automaton] {
        &self.agents
    }

    pub fn agent_name(&self, i: usize) -> &str {
        &self.agent_names[i]
    }

    pub fn constraint(&self, k: usize) -> &Constraint {
        &self.constraints[k]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Every violated condition, in a fixed order.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Err(Error::ControllabilityConflict { event }) = union_alphabet(
            self.agents
                .iter()
                .chain(self.constraints.iter().map(|c| &c.automaton)),
        ) {
            out.push(Violation::AttributeClash { event });
        }
        for i in 0..self.agents.len() {
            for j in i + 1..self.agents.len() {
                if let Some(e) = self.agents[i]
                    .events()
                    .iter()
                    .find(|e| self.agents[j].has_event(e.name()))
                {
                    out.push(Violation::SharedEvent {
                        first: i,
                        second: j,
                        event: e.name().to_string(),
                    });
                }
            }
            for e in self.agents[i].events() {
                if let Some(o) = e.owner() {
                    if o != i {
                        out.push(Violation::OwnerMismatch {
                            agent: i,
                            event: e.name().to_string(),
                            declared: o,
                        });
                    }
                }
            }
            if !self.agents[i].is_nonblocking() {
                out.push(Violation::BlockingAgent { agent: i });
            }
        }
        let mut covered = vec![false; self.agents.len()];
        for (k, c) in self.constraints.iter().enumerate() {
            if c.agents.is_empty() {
                out.push(Violation::NoAgents { constraint: k });
            }
            for &i in &c.agents {
                if i >= self.agents.len() {
                    out.push(Violation::UnknownAgent {
                        constraint: k,
                        agent: i,
                    });
                    continue;
                }
                covered[i] = true;
                if !self.agents[i]
                    .events()
                    .iter()
                    .any(|e| c.automaton.has_event(e.name()))
                {
                    out.push(Violation::ConstraintMissesAgent {
                        constraint: k,
                        agent: i,
                    });
                }
            }
            for e in c.automaton.events() {
                let owned = c
                    .agents
                    .iter()
                    .any(|&i| i < self.agents.len() && self.agents[i].has_event(e.name()));
                if !owned {
                    out.push(Violation::ForeignConstraintEvent {
                        constraint: k,
                        event: e.name().to_string(),
                    });
                }
            }
        }
        for (i, c) in covered.iter().enumerate() {
            if !c {
                out.push(Violation::UncoveredAgent { agent: i });
            }
        }
        out
    }

    /// `Err` carrying every violation, joined.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
            Err(Error::invalid(msgs.join("; ")))
        }
    }

    pub fn subnet(&self, members: impl IntoIterator<Item = usize>) -> Result<Subnet> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if members.is_empty() {
            return Err(Error::invalid("a subnet needs at least one constraint"));
        }
        if let Some(k) = members.iter().find(|&&k| k >= self.constraints.len()) {
            return Err(Error::invalid(format!("no constraint {}", k + 1)));
        }
        Ok(Subnet {
            parent: self.id,
            members,
        })
    }

    pub fn basic(&self, k: usize) -> Result<Subnet> {
        self.subnet([k])
    }

    pub fn full(&self) -> Subnet {
        Subnet {
            parent: self.id,
            members: (0..self.constraints.len()).collect(),
        }
    }

    fn check_parent(&self, s: &Subnet) -> Result<()> {
        if s.parent == self.id {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "subnet {s} belongs to another network"
            )))
        }
    }

    /// Union of `J_k` over the subnet.
    pub fn agents_of(&self, s: &Subnet) -> BTreeSet<usize> {
        s.members
            .iter()
            .flat_map(|&k| self.constraints[k].agents.iter().copied())
            .collect()
    }

    /// Union of the agents' alphabets.
    pub fn alphabet_of(&self, agents: &BTreeSet<usize>) -> EventSet {
        agents
            .iter()
            .flat_map(|&i| self.agents[i].alphabet())
            .collect()
    }

    /// Product of the listed agents.
    pub fn agent_product(&self, agents: &BTreeSet<usize>) -> Result<Automaton> {
        let parts: Vec<&Automaton> = agents.iter().map(|&i| &self.agents[i]).collect();
        sync_product_all(&parts)
    }

    pub fn build_crn(&self, s: &Subnet) -> Result<Crn> {
        self.check_parent(s)?;
        Ok(Crn::new(
            s.members
                .iter()
                .map(|&k| (k, self.constraints[k].agents.clone()))
                .collect(),
        ))
    }

    pub fn is_constraint_connected(&self, s: &Subnet) -> Result<bool> {
        Ok(self.build_crn(s)?.is_connected())
    }

    /// Constraint-connected components of the whole network.
    pub fn components(&self) -> Vec<Subnet> {
        self.build_crn(&self.full())
            .expect("own subnet")
            .components()
            .into_iter()
            .map(|c| Subnet {
                parent: self.id,
                members: c,
            })
            .collect()
    }

    /// The subnet as a network in its own right: only its constraints and
    /// their agents, renumbered.
    pub fn sub_dcsn(&self, s: &Subnet) -> Result<Dcsn> {
        self.check_parent(s)?;
        let agents: Vec<usize> = self.agents_of(s).into_iter().collect();
        let pos = |i: usize| agents.binary_search(&i).unwrap();
        let a = agents
            .iter()
            .map(|&i| (self.agent_names[i].clone(), strip_owner(&self.agents[i])))
            .collect();
        let c = s
            .members
            .iter()
            .map(|&k| {
                let c = &self.constraints[k];
                Constraint {
                    name: c.name.clone(),
                    agents: c.agents.iter().map(|&i| pos(i)).collect(),
                    automaton: strip_owner(&c.automaton),
                }
            })
            .collect();
        Ok(Dcsn::new(a, c))
    }

    /// Constraint names for a subnet, `{E1,E2}` style.
    pub fn describe(&self, s: &Subnet) -> String {
        let names: Vec<&str> = s
            .members
            .iter()
            .map(|&k| self.constraints[k].name.as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn with_owner(a: &Automaton, i: usize) -> Automaton {
    let attrs: EventSet = a
        .events()
        .iter()
        .map(|e| match e.owner() {
            Some(_) => e.clone(),
            None => e.clone().with_owner(i),
        })
        .collect();
    a.with_event_attributes(&attrs)
}

fn strip_owner(a: &Automaton) -> Automaton {
    let attrs: EventSet = a
        .events()
        .iter()
        .map(|e| crate::automata::Event::new(e.name(), e.is_controllable()))
        .collect();
    a.with_event_attributes(&attrs)
}

/// A nonempty set of constraints of one network.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subnet {
    parent: u64,
    members: BTreeSet<usize>,
}

impl Subnet {
    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_basic(&self) -> bool {
        self.members.len() == 1
    }

    pub fn union(&self, other: &Subnet) -> Result<Subnet> {
        self.same_parent(other)?;
        Ok(Subnet {
            parent: self.parent,
            members: self.members.union(&other.members).copied().collect(),
        })
    }

    /// `None` when the member sets are disjoint.
    pub fn intersection(&self, other: &Subnet) -> Result<Option<Subnet>> {
        self.same_parent(other)?;
        let m: BTreeSet<usize> = self.members.intersection(&other.members).copied().collect();
        Ok((!m.is_empty()).then_some(Subnet {
            parent: self.parent,
            members: m,
        }))
    }

    fn same_parent(&self, other: &Subnet) -> Result<()> {
        if self.parent == other.parent {
            Ok(())
        } else {
            Err(Error::invalid("subnets of different networks"))
        }
    }
}

impl fmt::Display for Subnet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "[{}]", m.join(","))
    }
}
