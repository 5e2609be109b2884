use std::collections::BTreeSet;

use decs_core::automata::*;
use decs_testkit::{gen, oracle, rng, ChaCha8Rng};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

const LEN: usize = 5;

fn pool(r: &mut ChaCha8Rng) -> Vec<Event> {
    gen::events(r, "e", 4)
}

fn pick(r: &mut ChaCha8Rng, pool: &[Event]) -> Vec<Event> {
    let n = r.gen_range(1..=pool.len());
    let mut v: Vec<Event> = pool.choose_multiple(r, n).cloned().collect();
    v.sort();
    v
}

fn random(r: &mut ChaCha8Rng, evs: &[Event]) -> Automaton {
    let n = r.gen_range(1..=4);
    gen::automaton(r, n, evs, 0.5)
}

fn words_over(a: &Automaton, b: &Automaton) -> Vec<oracle::Word> {
    let mut alpha: BTreeSet<String> = BTreeSet::new();
    for e in a.events().iter().chain(b.events()) {
        alpha.insert(e.name().to_string());
    }
    oracle::all_words(&alpha.into_iter().collect::<Vec<_>>(), LEN)
}

#[test]
fn aut_format_round_trip() {
    let text = "states 3\ninitial 0\nmarked 0 2\nevent go c 2\nevent stop u\ntrans 0 go 1\ntrans 1 stop 2\n";
    let a = parse_aut(text, "t").unwrap();
    assert_eq!(a.num_states(), 3);
    assert_eq!(a.event(a.event_index("go").unwrap()).owner(), Some(1));
    let b = parse_aut(&write_aut(&a), "t2").unwrap();
    assert_eq!(write_aut(&a), write_aut(&b));
    assert!(language_equivalent(&a, &b));
}

#[test]
fn aut_parse_errors_carry_line_numbers() {
    let err = parse_aut("states 2\ninitial 0\ntrans 0 nope 1\n", "bad.aut").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("bad.aut") && msg.contains('3'), "{msg}");
    assert!(parse_aut("states 1\ninitial 4\n", "x").is_err());
}

#[test]
fn duplicate_transition_rejected() {
    let r = Automaton::new(
        [Event::controllable("a")],
        2,
        Some(0),
        [],
        [(0, "a", 1), (0, "a", 0)],
    );
    assert!(r.is_err());
}

#[test]
fn attribute_clash_in_product() {
    let a = Automaton::new([Event::controllable("x")], 1, Some(0), [0], [(0, "x", 0)]).unwrap();
    let b = Automaton::new([Event::uncontrollable("x")], 1, Some(0), [0], [(0, "x", 0)]).unwrap();
    assert!(sync_product(&a, &b).is_err());
}

#[test]
fn dot_marks_uncontrollable_events() {
    let a = Automaton::new(
        [Event::controllable("go"), Event::uncontrollable("done")],
        2,
        Some(0),
        [0],
        [(0, "go", 1), (1, "done", 0)],
    )
    .unwrap();
    let dot = to_dot(&a, "m");
    assert!(dot.contains("!done") && dot.contains("go") && !dot.contains("!go"));
}

#[test]
fn transfer_line_models_parse() {
    let d = decs_core::models::transfer_line();
    assert_eq!(d.num_agents(), 3);
    assert_eq!(d.num_constraints(), 4);
    for i in 0..2 {
        assert_eq!(d.agent(i).num_states(), 7);
        assert_eq!(d.agent(i).num_transitions(), 8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_matches_simulation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = pool(&mut r);
        let a = random(&mut r, &p);
        for w in words_over(&a, &a) {
            let m = a.accepts(&w).unwrap();
            let (c, k) = oracle::member(&a, &w);
            prop_assert_eq!(m != Membership::Rejected, c);
            prop_assert_eq!(m == Membership::Marked, k);
        }
    }

    #[test]
    fn reach_and_coreach_match_fixpoints(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = pool(&mut r);
        let a = random(&mut r, &p);
        prop_assert_eq!(a.accessible_states(), oracle::reachable(&a));
        prop_assert_eq!(a.coaccessible_states(), oracle::coreachable(&a));
    }

    #[test]
    fn trim_is_idempotent_and_preserves_marked_language(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = pool(&mut r);
        let a = random(&mut r, &p);
        let t = a.trim();
        prop_assert!(t.is_nonblocking());
        prop_assert_eq!(write_aut(&t.trim()), write_aut(&t));
        for w in oracle::marked_words(&a, LEN) {
            prop_assert!(oracle::member(&t, &w).1);
        }
        for w in oracle::closed_words(&t, LEN) {
            prop_assert!(oracle::member(&a, &w).0);
        }
    }

    #[test]
    fn product_matches_componentwise_membership(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = pool(&mut r);
        let ea = pick(&mut r, &p);
        let eb = pick(&mut r, &p);
        let a = random(&mut r, &ea);
        let b = random(&mut r, &eb);
        let ab = sync_product(&a, &b).unwrap();
        for w in words_over(&a, &b) {
            prop_assert_eq!(oracle::member(&ab, &w), oracle::interleaving_member(&[&a, &b], &w));
        }
    }

    #[test]
    fn product_is_commutative_and_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = pool(&mut r);
        let (ea, eb, ec) = (pick(&mut r, &p), pick(&mut r, &p), pick(&mut r, &p));
        let (a, b, c) = (random(&mut r, &ea), random(&mut r, &eb), random(&mut r, &ec));
        let ab = sync_product(&a, &b).unwrap();
        prop_assert!(language_equivalent(&ab, &sync_product(&b, &a).unwrap()));
        let left = sync_product(&ab, &c).unwrap();
        let right = sync_product(&a, &sync_product(&b, &c).unwrap()).unwrap();
        prop_assert!(language_equivalent(&left, &right));
        prop_assert!(language_equivalent(&left, &sync_product_all(&[&a, &b, &c]).unwrap()));
    }

    #[test]
    fn projection_matches_erasure(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = pool(&mut r);
        let a = random(&mut r, &p);
        let sigma: EventSet = pick(&mut r, &p).into_iter().collect();
        let pa = a.natural_projection(&sigma).unwrap();
        let obs = oracle::name_set(&sigma);
        let alpha: Vec<String> = obs.iter().cloned().collect();
        for w in oracle::all_words(&alpha, LEN) {
            prop_assert_eq!(oracle::member(&pa, &w), oracle::projected_member(&a, &w, &obs), "{:?}", w);
        }
    }

    #[test]
    fn minimize_preserves_language_and_is_stable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = pool(&mut r);
        let a = random(&mut r, &p);
        let m = a.minimize();
        prop_assert!(m.num_states() <= a.accessible().num_states());
        prop_assert!(oracle::bounded_equivalent(&a, &m, LEN));
        prop_assert_eq!(write_aut(&m.minimize()), write_aut(&m));
        prop_assert!(language_equivalent(&a, &m));
    }

    #[test]
    fn equivalence_verdict_agrees_with_bounded_words(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = pool(&mut r);
        let a = random(&mut r, &p);
        let b = random(&mut r, &p);
        // a distinguishing word, if any, is shorter than the product size
        let bound = a.num_states() * b.num_states() + 1;
        if bound <= 7 {
            prop_assert_eq!(language_equivalent(&a, &b), oracle::bounded_equivalent(&a, &b, bound));
        } else if language_equivalent(&a, &b) {
            prop_assert!(oracle::bounded_equivalent(&a, &b, LEN));
        }
    }

    #[test]
    fn selfloop_extends_by_free_interleaving(seed in any::<u64>()) {
        let mut r = rng(seed);
        let evs = gen::events(&mut r, "e", 2);
        let a = random(&mut r, &evs);
        let extra: EventSet = gen::events(&mut r, "x", 1).into_iter().collect();
        let l = a.selfloop(&extra).unwrap();
        let u = Automaton::universal(&extra).unwrap();
        prop_assert!(language_equivalent(&l, &sync_product(&a, &u).unwrap()));
        prop_assert!(a.selfloop(&a.alphabet()).is_err());
    }
}
