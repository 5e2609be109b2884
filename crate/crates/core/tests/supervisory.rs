use decs_core::automata::*;
use decs_core::supervisory::*;
use decs_testkit::{gen, oracle, rng};
use proptest::prelude::*;

const LEN: usize = 6;

fn len_ok(w: &[String]) -> bool {
    w.len() < LEN
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn controllability_matches_definition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (k, a) = gen::sublanguage_pair(&mut r, 3, 3);
        let verdict = is_controllable(&k, &a).unwrap();
        match verdict.witness() {
            None => prop_assert!(oracle::controllable(&k, &a, LEN)),
            Some(v) => {
                let co = oracle::coreachable(&k);
                let mut se = v.prefix.clone();
                se.push(v.event.clone());
                prop_assert!(oracle::in_marked_closure(&k, &v.prefix, &co));
                prop_assert!(oracle::member(&a, &se).0);
                prop_assert!(!oracle::in_marked_closure(&k, &se, &co));
                let ev = a.event(a.event_index(&v.event).unwrap());
                prop_assert!(!ev.is_controllable());
                if len_ok(&v.prefix) {
                    prop_assert!(!oracle::controllable(&k, &a, LEN));
                }
            }
        }
    }

    #[test]
    fn supcon_is_the_supremal_sublanguage(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (spec, plant) = gen::supcon_instance(&mut r, 12);
        let s = supcon(&spec, &plant).unwrap();
        prop_assert!(s.is_nonblocking());
        if !s.is_empty() {
            prop_assert!(is_controllable(&s, &plant).unwrap().holds());
            prop_assert!(oracle::controllable(&s, &plant, LEN));
        }
        let expect = oracle::supcon_lattice(&spec, &plant);
        prop_assert!(language_equivalent(&s, &expect),
            "supcon {} states, oracle {} states", s.num_states(), expect.num_states());
        for w in oracle::marked_words(&s, LEN) {
            prop_assert!(oracle::member(&plant, &w).1);
            let pw: Vec<String> = w.iter().filter(|e| spec.has_event(e)).cloned().collect();
            prop_assert!(oracle::member(&spec, &pw).1);
        }
    }

    #[test]
    fn observability_matches_definition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (k, a) = gen::sublanguage_pair(&mut r, 3, 3);
        let sigma = gen::subset(&mut r, a.events());
        let verdict = is_observable(&k, &a, &sigma).unwrap();
        let bounded = oracle::observable(&k, &a, &sigma, LEN);
        match verdict.witness() {
            None => prop_assert!(bounded),
            Some(v) => {
                let obs = oracle::name_set(&sigma);
                let co = oracle::coreachable(&k);
                prop_assert_eq!(oracle::erase(&v.s, &obs), oracle::erase(&v.s_prime, &obs));
                prop_assert!(oracle::in_marked_closure(&k, &v.s, &co));
                prop_assert!(oracle::in_marked_closure(&k, &v.s_prime, &co));
                let clash = oracle::observability_clash(&k, &a, &co, &v.s, &v.s_prime);
                prop_assert!(clash.is_some(), "{:?}", v);
                if len_ok(&v.s) && len_ok(&v.s_prime) {
                    prop_assert!(!bounded);
                }
            }
        }
    }

    #[test]
    fn observer_matches_definition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let evs = gen::events(&mut r, "e", 3);
        let g = gen::automaton(&mut r, 3, &evs, 0.6);
        let sigma = gen::subset(&mut r, &evs);
        let verdict = is_observer(&g, &sigma).unwrap();
        match verdict.witness() {
            None => prop_assert!(oracle::observer(&g, &sigma, LEN)),
            Some(v) => {
                prop_assert!(oracle::observer_violation_holds(&g, &sigma, &v.s, &v.extension), "{:?}", v);
                let obs = oracle::name_set(&sigma);
                let mut t = oracle::erase(&v.s, &obs);
                t.extend(v.extension.iter().cloned());
                prop_assert!(oracle::member(&g, &v.realization).1);
                prop_assert_eq!(oracle::erase(&v.realization, &obs), t.clone());
                if v.s.len() <= LEN && t.len() <= LEN {
                    prop_assert!(!oracle::observer(&g, &sigma, LEN));
                }
            }
        }
    }

    #[test]
    fn occ_matches_definition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let evs = gen::events(&mut r, "e", 3);
        let g = gen::automaton(&mut r, 3, &evs, 0.6);
        let sigma = gen::subset(&mut r, &evs);
        let verdict = is_occ(&g, &sigma).unwrap();
        let obs = oracle::name_set(&sigma);
        match verdict.witness() {
            None => prop_assert!(oracle::occ(&g, &sigma, LEN)),
            Some(v) => {
                prop_assert!(oracle::member(&g, &v.s).0);
                prop_assert_eq!(oracle::occ_violation_at(&g, &obs, &v.s), Some(v.segment_start));
                if v.s.len() <= LEN {
                    prop_assert!(!oracle::occ(&g, &sigma, LEN));
                }
            }
        }
    }

    #[test]
    fn enlarged_sets_satisfy_their_requirements(seed in any::<u64>()) {
        let mut r = rng(seed);
        let evs = gen::events(&mut r, "e", 4);
        let g = gen::automaton(&mut r, 3, &evs, 0.6);
        let h = gen::automaton(&mut r, 3, &evs, 0.6);
        let base = gen::subset(&mut r, &evs);
        let sigma = enlarge_event_set(&base, &[(&g, Property::Observer), (&h, Property::Occ)]).unwrap();
        prop_assert!(base.is_subset(&sigma));
        prop_assert!(is_observer(&g, &sigma).unwrap().holds());
        prop_assert!(is_occ(&h, &sigma).unwrap().holds());
    }

    #[test]
    fn cm_projection_is_the_erased_supervisor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (spec, plant) = gen::supcon_instance(&mut r, 12);
        let s = supcon(&spec, &plant).unwrap();
        prop_assume!(!s.is_empty());
        let sigma = gen::subset(&mut r, plant.events());
        let cm = cm_from(&s, &sigma).unwrap();
        let obs = oracle::name_set(&sigma);
        let alpha: Vec<String> = obs.iter().cloned().collect();
        for w in oracle::all_words(&alpha, 4) {
            prop_assert_eq!(oracle::member(&cm, &w), oracle::projected_member(&s, &w, &obs));
        }
        for e in cm.events() {
            prop_assert_eq!(e.is_controllable(), plant.event(plant.event_index(e.name()).unwrap()).is_controllable());
        }
    }
}

#[test]
fn supcon_rejects_foreign_constraint_events() {
    let p = Automaton::new([Event::controllable("a")], 1, Some(0), [0], [(0, "a", 0)]).unwrap();
    let s = Automaton::new([Event::controllable("z")], 1, Some(0), [0], [(0, "z", 0)]).unwrap();
    assert!(supcon(&s, &p).is_err());
}

#[test]
fn uncontrollable_escape_empties_supervisor() {
    // plant: 0 -u-> 1 (unmarked dead end); spec forbids nothing but marks only 0
    let u = Event::uncontrollable("u");
    let p = Automaton::new([u.clone()], 2, Some(0), [0], [(0, "u", 1)]).unwrap();
    let s = Automaton::new([u], 1, Some(0), [0], []).unwrap();
    assert!(supcon(&s, &p).unwrap().is_empty());
}

#[test]
fn transfer_line_minimal_communication() {
    let d = decs_core::models::transfer_line();
    let c = d.constraint(0);
    let plant = d.agent_product(&c.agents).unwrap();
    let sup = supcon(&c.automaton, &plant).unwrap();
    assert_eq!((sup.num_states(), sup.num_transitions()), (40, 82));
    let agents: Vec<&Automaton> = c.agents.iter().map(|&i| d.agent(i)).collect();
    let com = min_sys_com_set(&sup, &agents, decs_core::ExecMode::Sequential).unwrap();
    assert_eq!(format_set(&com), "{1return, 1take1, 2return, 2take1}");
    assert!(is_coordinable(&sup, &agents, &com).unwrap());
    // no smaller set works
    for drop in &com {
        let mut smaller = com.clone();
        smaller.remove(drop);
        assert!(!is_coordinable(&sup, &agents, &smaller).unwrap(), "{drop}");
    }
    let par = min_sys_com_set(&sup, &agents, decs_core::ExecMode::Parallel).unwrap();
    assert_eq!(par, com);
}
