use std::fmt::Write as _;

use super::SynthesisResult;
use crate::automata::{format_set, write_aut};
use crate::dcsn::Dcsn;

/// A file of a solution bundle, relative to the bundle directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleFile {
    pub name: String,
    pub contents: String,
}

fn counts(a: &crate::automata::Automaton) -> String {
    format!(
        "{} states, {} transitions",
        a.num_states(),
        a.num_transitions()
    )
}

/// Modules as `agent<i>_<local|decon>_<tag>.aut` plus `manifest.txt`.
/// Contents depend only on the result, never on how it was scheduled.
pub fn render_bundle(d: &Dcsn, r: &SynthesisResult) -> Vec<BundleFile> {
    let s = &r.solution;
    let mut files = Vec::new();
    let mut m = String::new();
    writeln!(m, "agents {}", d.num_agents()).unwrap();
    writeln!(m, "constraints {}", d.num_constraints()).unwrap();
    for p in &r.plans {
        writeln!(m, "plan {p}").unwrap();
    }
    for (k, per_agent) in &s.comm_sets {
        for (i, set) in per_agent {
            writeln!(
                m,
                "comm constraint {} agent {} receives {}",
                k + 1,
                i + 1,
                format_set(set)
            )
            .unwrap();
        }
    }
    for (kind, map) in [("local", &s.local_cms), ("decon", &s.decon_cms)] {
        for (i, recs) in map {
            for rec in recs {
                let name = format!("agent{}_{kind}_{}.aut", i + 1, rec.tag);
                writeln!(m, "cm {name} {}", counts(&rec.automaton)).unwrap();
                files.push(BundleFile {
                    name,
                    contents: write_aut(&rec.automaton),
                });
            }
        }
    }
    let verdict = match r.verified {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "skipped",
    };
    writeln!(m, "verification {verdict}").unwrap();
    files.push(BundleFile {
        name: "manifest.txt".into(),
        contents: m,
    });
    files
}
