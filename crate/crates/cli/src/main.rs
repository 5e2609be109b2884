//! `decs`: validate networks, synthesize coordination modules, plan and
//! solve.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use decs_core::automata::{format_set, to_dot, write_aut, Automaton};
use decs_core::dcsn::Dcsn;
use decs_core::planning::{
    andor_to_dot, enumerate_complete_trees, generate_andor_graph_filtered,
    heuristic_plan_selection, parse_plans, ParallelDepth, PlanMetric,
};
use decs_core::synthesis::{cm_basic_subnet, render_bundle, solve_dcsn, SolveOptions};
use decs_core::{Error, ExecMode};

#[derive(Parser)]
#[command(
    name = "decs",
    version,
    about = "Coordination module synthesis for networks of discrete-event agents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network for well-formedness.
    Validate { dcsn: PathBuf },
    /// Supervisor and coordination modules for one constraint.
    SynthBasic {
        dcsn: PathBuf,
        /// 1-based constraint number.
        #[arg(long)]
        constraint: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Build the AND/OR graph of plans and select one.
    Plan {
        dcsn: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::Depth)]
        metric: Metric,
        /// Write the AND/OR graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// List every complete tree with its cost.
        #[arg(long)]
        all_trees: bool,
        /// Write the selected plan.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the whole pipeline and write the module bundle.
    Solve {
        dcsn: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Compare against the monolithic supervisor.
        #[arg(long)]
        verify: bool,
        /// Run independent compositions concurrently.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Depth,
}

enum Failure {
    Domain(String),
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::Parse { .. } => Failure::Input(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn mode(parallel: bool) -> ExecMode {
    if parallel {
        ExecMode::Parallel
    } else {
        ExecMode::Sequential
    }
}

fn counts(a: &Automaton) -> String {
    format!(
        "{} states, {} transitions",
        a.num_states(),
        a.num_transitions()
    )
}

fn write(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn create_dir(dir: &Path) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))
}

fn load_valid(path: &Path) -> Result<Dcsn, Failure> {
    let d = Dcsn::load(path)?;
    d.ensure_valid()?;
    Ok(d)
}

fn validate(path: &Path) -> Outcome {
    let d = Dcsn::load(path)?;
    let v = d.validate();
    if v.is_empty() {
        println!(
            "ok: {} agents, {} constraints",
            d.num_agents(),
            d.num_constraints()
        );
        for c in d.components() {
            println!("component {} {}", c, d.describe(&c));
        }
        return Ok(());
    }
    for x in &v {
        println!("violation: {x}");
    }
    Err(Failure::Domain(format!("{} violation(s)", v.len())))
}

/// One state, marked, a self-loop on every event: restricts nothing.
fn is_universal(a: &Automaton) -> bool {
    a.num_states() == 1 && a.is_marked(0) && a.num_transitions() == a.num_events()
}

fn synth_basic(path: &Path, k: usize, out: Option<&Path>, parallel: bool) -> Outcome {
    let d = load_valid(path)?;
    if k == 0 || k > d.num_constraints() {
        return Err(Failure::Domain(format!(
            "constraint {k} does not exist (the network has {})",
            d.num_constraints()
        )));
    }
    let s = cm_basic_subnet(&d, k - 1, mode(parallel))?;
    println!("SUP: {}", counts(&s.sup));
    for (i, recs) in &s.local_cms {
        for r in recs {
            let note = if is_universal(&r.automaton) {
                " (universal: no restriction)"
            } else {
                ""
            };
            println!(
                "agent {}: CM {} -> {}{note}",
                i + 1,
                counts(&r.unreduced),
                counts(&r.automaton)
            );
        }
    }
    let mut comm = String::new();
    for (i, set) in s.comm_sets.get(&(k - 1)).into_iter().flatten() {
        writeln!(comm, "agent {} receives {}", i + 1, format_set(set)).unwrap();
    }
    print!("{comm}");
    if let Some(dir) = out {
        create_dir(dir)?;
        write(&dir.join(format!("sup{k}.aut")), &write_aut(&s.sup))?;
        write(
            &dir.join(format!("sup{k}.dot")),
            &to_dot(&s.sup, &format!("SUP{k}")),
        )?;
        for (i, recs) in &s.local_cms {
            for r in recs {
                let stem = format!("agent{}_cm{k}", i + 1);
                write(&dir.join(format!("{stem}.aut")), &write_aut(&r.automaton))?;
                write(
                    &dir.join(format!("{stem}_unreduced.aut")),
                    &write_aut(&r.unreduced),
                )?;
            }
        }
        write(&dir.join("comm.txt"), &comm)?;
    }
    Ok(())
}

fn plan(path: &Path, dot: Option<&Path>, all_trees: bool, out: Option<&Path>) -> Outcome {
    let d = load_valid(path)?;
    let metric = ParallelDepth;
    let mut plans = String::new();
    let mut dots = String::new();
    for c in d.components() {
        let g = generate_andor_graph_filtered(&d, &c, &|_| true)?;
        println!(
            "component {}: AND/OR graph {} nodes, {} hyper-edges, root out-degree {}",
            c,
            g.nodes().len(),
            g.edges().len(),
            g.out_degree(g.root())
        );
        let t = heuristic_plan_selection(&g, &metric)?;
        println!("plan {t}");
        println!("depth {}", t.depth());
        if all_trees {
            let trees = enumerate_complete_trees(&g);
            println!("complete trees: {}", trees.len());
            for x in &trees {
                println!("  F_p={} {x}", metric.cost(x));
            }
        }
        writeln!(plans, "{t}").unwrap();
        dots.push_str(&andor_to_dot(&g));
    }
    if let Some(p) = dot {
        write(p, &dots)?;
    }
    if let Some(p) = out {
        write(p, &plans)?;
    }
    Ok(())
}

fn solve(
    path: &Path,
    plan_file: Option<&Path>,
    verify: bool,
    parallel: bool,
    out: Option<&Path>,
) -> Outcome {
    let d = load_valid(path)?;
    let plans = match plan_file {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            parse_plans(&text)?
        }
        None => decs_core::planning::plan_dcsn(&d)?,
    };
    let r = solve_dcsn(
        &d,
        &plans,
        SolveOptions {
            mode: mode(parallel),
            verify,
        },
    )?;
    for p in &r.plans {
        println!("plan {p}");
    }
    for (n, sched) in r.schedules.iter().enumerate() {
        for (lvl, ops) in sched.iter().enumerate() {
            let names: Vec<String> = ops
                .iter()
                .map(|o| format!("{}+{}", fmt_node(&o.left), fmt_node(&o.right)))
                .collect();
            println!("plan {} level {}: {}", n + 1, lvl + 1, names.join(" "));
        }
    }
    let s = &r.solution;
    println!("supervisor: {}", counts(&s.sup));
    for &i in &s.agents {
        let local = s.local_cms.get(&i).map_or(0, Vec::len);
        let decon = s.decon_cms.get(&i).map_or(0, Vec::len);
        println!(
            "agent {}: {local} local, {decon} deconflicting module(s)",
            i + 1
        );
    }
    if let Some(dir) = out {
        create_dir(dir)?;
        for f in render_bundle(&d, &r) {
            write(&dir.join(&f.name), &f.contents)?;
        }
    }
    match r.verified {
        Some(true) => {
            println!("verification: PASS");
            Ok(())
        }
        Some(false) => {
            println!("verification: FAIL");
            Err(Failure::Invariant(
                "composed modules differ from the monolithic supervisor".into(),
            ))
        }
        None => Ok(()),
    }
}

fn fmt_node(n: &decs_core::planning::NodeSet) -> String {
    let m: Vec<String> = n.iter().map(|k| (k + 1).to_string()).collect();
    format!("[{}]", m.join(","))
}

fn init_logging() {
    let level = match std::env::var("DECS_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Warn,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Validate { dcsn } => validate(dcsn),
        Command::SynthBasic {
            dcsn,
            constraint,
            out,
            parallel,
        } => synth_basic(dcsn, *constraint, out.as_deref(), *parallel),
        Command::Plan {
            dcsn,
            metric: Metric::Depth,
            dot,
            all_trees,
            out,
        } => plan(dcsn, dot.as_deref(), *all_trees, out.as_deref()),
        Command::Solve {
            dcsn,
            plan,
            verify,
            parallel,
            out,
        } => solve(dcsn, plan.as_deref(), *verify, *parallel, out.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
