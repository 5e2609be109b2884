//! Local coordination modules per basic subnet, and their composition
//! into larger subnets through conflict resolution.

mod bundle;

use std::collections::{BTreeMap, BTreeSet};

pub use bundle::{render_bundle, BundleFile};

use crate::automata::{sync_product_all, Automaton, EventSet};
use crate::dcsn::{Dcsn, Subnet};
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::planning::{schedule_from_plan, CompositionOp, NodeSet, PlanTree};
use crate::supervisory::{
    cm_from, cm_reduce, enlarge_event_set, min_sys_com_set, supcon, Property, ReductionContext,
};

/// One coordination module as stored in a solution.
#[derive(Clone, Debug)]
pub struct CmRecord {
    /// `c<k>` for local modules, `d<k>-<h>-...` for deconflicting ones.
    pub tag: String,
    pub automaton: Automaton,
    /// The module before state reduction.
    pub unreduced: Automaton,
}

/// Solved subnet: supervisor, modules per agent, communication sets.
#[derive(Clone, Debug)]
pub struct SubnetSolution {
    pub subnet: Subnet,
    pub agents: BTreeSet<usize>,
    pub sup: Automaton,
    pub local_cms: BTreeMap<usize, Vec<CmRecord>>,
    pub decon_cms: BTreeMap<usize, Vec<CmRecord>>,
    /// Constraint -> agent -> events that agent receives from others.
    pub comm_sets: BTreeMap<usize, BTreeMap<usize, EventSet>>,
}

impl SubnetSolution {
    /// Every module of agent `i`, local ones first.
    pub fn cms_of(&self, i: usize) -> Vec<&Automaton> {
        let local = self.local_cms.get(&i).into_iter().flatten();
        let decon = self.decon_cms.get(&i).into_iter().flatten();
        local.chain(decon).map(|r| &r.automaton).collect()
    }

    pub fn num_cms(&self) -> usize {
        self.local_cms
            .values()
            .chain(self.decon_cms.values())
            .map(Vec::len)
            .sum()
    }

    /// `∥ (A_i ∥ CM_i)` over the subnet's agents.
    pub fn composed(&self, d: &Dcsn) -> Result<Automaton> {
        let mut parts: Vec<&Automaton> = Vec::new();
        for &i in &self.agents {
            parts.push(d.agent(i));
            parts.extend(self.cms_of(i));
        }
        sync_product_all(&parts)
    }
}

fn unsynthesizable(d: &Dcsn, s: &Subnet, reason: impl Into<String>) -> Error {
    Error::Unsynthesizable {
        subnet: format!("{s} {}", d.describe(s)),
        reason: reason.into(),
    }
}

/// Supervisor, minimal communication set and reduced modules for one
/// constraint.
pub fn cm_basic_subnet(d: &Dcsn, k: usize, mode: ExecMode) -> Result<SubnetSolution> {
    let subnet = d.basic(k)?;
    let c = d.constraint(k);
    let plant = d.agent_product(&c.agents)?;
    let sup = supcon(&c.automaton, &plant)?;
    if sup.is_empty() {
        return Err(unsynthesizable(
            d,
            &subnet,
            "the supremal controllable sublanguage is empty",
        ));
    }
    let agents: Vec<usize> = c.agents.iter().copied().collect();
    let autos: Vec<&Automaton> = agents.iter().map(|&i| d.agent(i)).collect();
    let com = min_sys_com_set(&sup, &autos, mode)?;
    log::info!(
        "constraint {}: SUP {} states, communication set {}",
        k + 1,
        sup.num_states(),
        crate::automata::format_set(&com)
    );
    let ctx = ReductionContext {
        target: &sup,
        plant: &plant,
    };
    let cms = exec::map(mode, &agents, |&i| -> Result<CmRecord> {
        let sigma: EventSet = d.agent(i).alphabet().union(&com).cloned().collect();
        let s = cm_from(&sup, &sigma)?;
        let r = cm_reduce(&s, d.agent(i), &ctx)?;
        Ok(CmRecord {
            tag: format!("c{}", k + 1),
            automaton: r,
            unreduced: s,
        })
    });
    let mut local_cms = BTreeMap::new();
    let mut received = BTreeMap::new();
    for (&i, cm) in agents.iter().zip(cms) {
        local_cms.insert(i, vec![cm?]);
        let own = d.agent(i).alphabet();
        received.insert(i, com.difference(&own).cloned().collect());
    }
    Ok(SubnetSolution {
        subnet,
        agents: c.agents.clone(),
        sup,
        local_cms,
        decon_cms: BTreeMap::new(),
        comm_sets: BTreeMap::from([(k, received)]),
    })
}

/// Verdict of the abstracted nonconflict test, with the event set used.
#[derive(Clone, Debug)]
pub struct NonconflictOutcome {
    pub conflicting: bool,
    pub sigma: EventSet,
}

fn restrict(sigma: &EventSet, a: &Automaton) -> EventSet {
    sigma
        .iter()
        .filter(|e| a.has_event(e.name()))
        .cloned()
        .collect()
}

fn shared_agents(x: &SubnetSolution, y: &SubnetSolution) -> BTreeSet<usize> {
    x.agents.intersection(&y.agents).copied().collect()
}

/// Are the two solutions nonconflicting? Decided on projections onto an
/// observer event set seeded with the shared agents' events.
pub fn nonconflict_test(
    d: &Dcsn,
    x: &SubnetSolution,
    y: &SubnetSolution,
) -> Result<NonconflictOutcome> {
    let shared = shared_agents(x, y);
    if shared.is_empty() {
        return Ok(NonconflictOutcome {
            conflicting: false,
            sigma: EventSet::new(),
        });
    }
    let seed = d.alphabet_of(&shared);
    let sigma = enlarge_event_set(
        &seed,
        &[(&x.sup, Property::Observer), (&y.sup, Property::Observer)],
    )?;
    let px = x.sup.natural_projection(&restrict(&sigma, &x.sup))?;
    let py = y.sup.natural_projection(&restrict(&sigma, &y.sup))?;
    let conflicting = !sync_product_all(&[&px, &py])?.is_nonblocking();
    Ok(NonconflictOutcome { conflicting, sigma })
}

/// Conflict resolution and the event set it is expressed over.
#[derive(Clone, Debug)]
pub struct ConflictResolution {
    pub cr: Automaton,
    pub sigma: EventSet,
}

/// Supervisor over the abstraction `P(SUP^x) ∥ P(SUP^y)`, with the event
/// set enlarged (starting from `start`) until both projections are
/// observers and every agent's projection is output control consistent.
pub fn conflict_resolution(
    d: &Dcsn,
    x: &SubnetSolution,
    y: &SubnetSolution,
    start: &EventSet,
) -> Result<ConflictResolution> {
    let agents: BTreeSet<usize> = x.agents.union(&y.agents).copied().collect();
    let mut reqs = vec![(&x.sup, Property::Observer), (&y.sup, Property::Observer)];
    reqs.extend(agents.iter().map(|&i| (d.agent(i), Property::Occ)));
    let mut seed = start.clone();
    if seed.is_empty() {
        seed = d.alphabet_of(&shared_agents(x, y));
    }
    let sigma = enlarge_event_set(&seed, &reqs)?;
    let px = x.sup.natural_projection(&restrict(&sigma, &x.sup))?;
    let py = y.sup.natural_projection(&restrict(&sigma, &y.sup))?;
    let abstraction = sync_product_all(&[&px, &py])?;
    let cr = supcon(&Automaton::universal(&sigma)?, &abstraction)?;
    if cr.is_empty() {
        let joined = x.subnet.union(&y.subnet)?;
        return Err(unsynthesizable(
            d,
            &joined,
            format!(
                "no conflict resolution exists for {} and {}",
                x.subnet, y.subnet
            ),
        ));
    }
    log::info!(
        "conflict resolution {} + {}: {} events, {} states",
        x.subnet,
        y.subnet,
        sigma.len(),
        cr.num_states()
    );
    Ok(ConflictResolution { cr, sigma })
}

fn tag_of(s: &Subnet) -> String {
    let m: Vec<String> = s.members().iter().map(|k| (k + 1).to_string()).collect();
    format!("d{}", m.join("-"))
}

fn merge_maps<V: Clone>(
    a: &BTreeMap<usize, Vec<V>>,
    b: &BTreeMap<usize, Vec<V>>,
) -> BTreeMap<usize, Vec<V>> {
    let mut out = a.clone();
    for (k, v) in b {
        out.entry(*k).or_default().extend(v.iter().cloned());
    }
    out
}

/// Solution for the union of two solved subnets. Conflicting pairs gain a
/// deconflicting module for every agent whose events the resolution uses.
pub fn deconflict_subnets(
    d: &Dcsn,
    x: &SubnetSolution,
    y: &SubnetSolution,
    mode: ExecMode,
) -> Result<SubnetSolution> {
    let subnet = x.subnet.union(&y.subnet)?;
    let agents: BTreeSet<usize> = x.agents.union(&y.agents).copied().collect();
    let mut comm_sets = x.comm_sets.clone();
    comm_sets.extend(y.comm_sets.iter().map(|(k, v)| (*k, v.clone())));
    let mut out = SubnetSolution {
        subnet: subnet.clone(),
        agents: agents.clone(),
        sup: Automaton::empty([])?,
        local_cms: merge_maps(&x.local_cms, &y.local_cms),
        decon_cms: merge_maps(&x.decon_cms, &y.decon_cms),
        comm_sets,
    };
    let test = nonconflict_test(d, x, y)?;
    if !test.conflicting {
        out.sup = sync_product_all(&[&x.sup, &y.sup])?.trim();
        log::info!("{} and {} are nonconflicting", x.subnet, y.subnet);
        return Ok(out);
    }
    log::info!("{} and {} conflict", x.subnet, y.subnet);
    let res = conflict_resolution(d, x, y, &test.sigma)?;
    let plant = sync_product_all(&[&x.sup, &y.sup])?;
    let merged = sync_product_all(&[&res.cr, &plant])?.trim();
    if merged.is_empty() {
        return Err(unsynthesizable(
            d,
            &subnet,
            "the deconflicted behaviour is empty",
        ));
    }
    let users: Vec<usize> = agents
        .iter()
        .copied()
        .filter(|&i| {
            d.agent(i)
                .events()
                .iter()
                .any(|e| res.sigma.contains(e.name()))
        })
        .collect();
    let ctx = ReductionContext {
        target: &merged,
        plant: &plant,
    };
    let tag = tag_of(&subnet);
    let cms = exec::map(mode, &users, |&i| -> Result<CmRecord> {
        let a = d.agent(i);
        let r = cm_reduce(&res.cr, a, &ctx)?;
        let missing: EventSet = a
            .events()
            .iter()
            .filter(|e| !r.has_event(e.name()))
            .cloned()
            .collect();
        Ok(CmRecord {
            tag: tag.clone(),
            automaton: r.selfloop(&missing)?,
            unreduced: res.cr.selfloop(&missing)?,
        })
    });
    for (&i, cm) in users.iter().zip(cms) {
        out.decon_cms.entry(i).or_default().push(cm?);
    }
    out.sup = merged;
    Ok(out)
}

/// Union of solutions over disjoint agent sets.
fn join_independent(x: SubnetSolution, y: SubnetSolution) -> Result<SubnetSolution> {
    let mut comm_sets = x.comm_sets;
    comm_sets.extend(y.comm_sets);
    Ok(SubnetSolution {
        subnet: x.subnet.union(&y.subnet)?,
        agents: x.agents.union(&y.agents).copied().collect(),
        sup: sync_product_all(&[&x.sup, &y.sup])?,
        local_cms: merge_maps(&x.local_cms, &y.local_cms),
        decon_cms: merge_maps(&x.decon_cms, &y.decon_cms),
        comm_sets,
    })
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub mode: ExecMode,
    /// Compare the composed system with the monolithic supervisor.
    pub verify: bool,
}

/// Outcome of running the whole pipeline.
#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub solution: SubnetSolution,
    pub plans: Vec<PlanTree>,
    /// Per plan: levels of compositions, as executed.
    pub schedules: Vec<Vec<Vec<CompositionOp>>>,
    /// `Some(true)` when the composed system equals the monolithic supervisor.
    pub verified: Option<bool>,
}

/// Execute plans (one per constraint-connected component): basic subnets
/// first, then compositions level by level. Within a level, compositions
/// are independent and run under `opts.mode`.
pub fn solve_dcsn(d: &Dcsn, plans: &[PlanTree], opts: SolveOptions) -> Result<SynthesisResult> {
    d.ensure_valid()?;
    let covered: BTreeSet<usize> = plans
        .iter()
        .flat_map(|p| p.node().iter().copied())
        .collect();
    if covered.len() != d.num_constraints()
        || plans.iter().map(|p| p.node().len()).sum::<usize>() != covered.len()
    {
        return Err(Error::Planning(
            "plans must cover every constraint exactly once".into(),
        ));
    }
    for p in plans {
        crate::planning::check_plan(d, p)?;
    }
    let leaves: Vec<usize> = (0..d.num_constraints()).collect();
    let basics = exec::map(opts.mode, &leaves, |&k| cm_basic_subnet(d, k, opts.mode));
    let mut slots: BTreeMap<NodeSet, SubnetSolution> = BTreeMap::new();
    for (k, s) in leaves.iter().zip(basics) {
        slots.insert([*k].into(), s?);
    }
    let mut schedules = Vec::new();
    for plan in plans {
        let schedule = schedule_from_plan(plan);
        for (lvl, ops) in schedule.iter().enumerate() {
            log::info!("level {}: {} composition(s)", lvl + 1, ops.len());
            let inputs: Vec<(SubnetSolution, SubnetSolution)> = ops
                .iter()
                .map(|op| {
                    (
                        slots.remove(&op.left).unwrap(),
                        slots.remove(&op.right).unwrap(),
                    )
                })
                .collect();
            let merged = exec::map(opts.mode, &inputs, |(x, y)| {
                deconflict_subnets(d, x, y, opts.mode)
            });
            for (op, m) in ops.iter().zip(merged) {
                slots.insert(op.parent.clone(), m?);
            }
        }
        schedules.push(schedule);
    }
    let mut parts = plans.iter().map(|p| slots.remove(p.node()).unwrap());
    let mut solution = parts.next().expect("at least one constraint");
    for p in parts {
        solution = join_independent(solution, p)?;
    }
    let verified = if opts.verify {
        Some(verify_solution(d, &solution)?)
    } else {
        None
    };
    Ok(SynthesisResult {
        solution,
        plans: plans.to_vec(),
        schedules,
        verified,
    })
}

/// Monolithic supervisor of the whole network.
pub fn monolithic_supervisor(d: &Dcsn) -> Result<Automaton> {
    let cs: Vec<&Automaton> = d.constraints().iter().map(|c| &c.automaton).collect();
    let spec = sync_product_all(&cs)?;
    let plant = d.agent_product(&(0..d.num_agents()).collect())?;
    supcon(&spec, &plant)
}

/// Does the coordinated system equal the monolithic supervisor?
pub fn verify_solution(d: &Dcsn, s: &SubnetSolution) -> Result<bool> {
    let composed = s.composed(d)?;
    let mono = monolithic_supervisor(d)?;
    let ok = crate::automata::language_equivalent(&composed, &mono);
    if ok {
        log::info!("verification passed: {} states", mono.num_states());
    } else {
        log::error!(
            "verification failed: composed {} states, monolithic {} states",
            composed.minimize().num_states(),
            mono.minimize().num_states()
        );
    }
    Ok(ok)
}
