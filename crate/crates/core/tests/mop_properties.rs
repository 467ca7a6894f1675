use std::collections::BTreeSet;

use limitgen::mop::{
    machine_generator, mop_decide, replay, render, sample_output, string_to_elem, elem_to_string, tokens, CoinAb,
    DecideMode, DetA, FixtureMachine, GeometricMachine, TokenMachine, Undeclared, UniformLen2,
};
use limitgen::sampling::trial_rng;
use limitgen::Elem;

fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| alphabet.iter().map(move |&c| format!("{s}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn check_against<M: TokenMachine>(m: &M, support: &BTreeSet<&str>, prefixes: &BTreeSet<&str>) {
    for s in all_strings(&m.alphabet(), m.max_len()) {
        let full = mop_decide(m, &s, DecideMode::Complete).unwrap();
        assert_eq!(full.answer, support.contains(s.as_str()), "complete {s:?}");
        let pre = mop_decide(m, &s, DecideMode::Prefix).unwrap();
        assert_eq!(pre.answer, prefixes.contains(s.as_str()), "prefix {s:?}");
        if let Some(w) = full.witness {
            let mut out = tokens(&s);
            out.push(limitgen::mop::Token::Eos);
            assert_eq!(replay(m, &w).unwrap(), out);
        }
    }
}

#[test]
fn decider_matches_handwritten_supports() {
    let det = BTreeSet::from(["a"]);
    let det_pre = BTreeSet::from(["", "a"]);
    let coin = BTreeSet::from(["a", "b"]);
    let coin_pre = BTreeSet::from(["", "a", "b"]);
    let len2 = BTreeSet::from(["aa", "ab", "ba", "bb"]);
    let len2_pre = BTreeSet::from(["", "a", "b", "aa", "ab", "ba", "bb"]);
    check_against(&DetA, &det, &det_pre);
    check_against(&CoinAb, &coin, &coin_pre);
    check_against(&UniformLen2, &len2, &len2_pre);
    check_against(&Undeclared(CoinAb), &coin, &coin_pre);
    check_against(&Undeclared(UniformLen2), &len2, &len2_pre);
}

#[test]
fn sampled_outputs_are_in_the_support() {
    for m in FixtureMachine::all() {
        let mut rng = trial_rng(3, 0, 0);
        for _ in 0..100 {
            let s = sample_output(&m, &mut rng).unwrap();
            assert!(mop_decide(&m, &s, DecideMode::Complete).unwrap().answer, "{m:?} {s}");
        }
    }
}

#[test]
fn unbounded_machine_hits_the_discovery_cap() {
    for s in ["a", "aa", ""] {
        assert_eq!(
            mop_decide(&GeometricMachine, s, DecideMode::Complete),
            Err(limitgen::Error::DiscoveryCap(limitgen::mop::DISCOVERY_CAP))
        );
    }
}

#[test]
fn shortlex_round_trips() {
    let ab = ['a', 'b'];
    for k in 1..200u64 {
        let s = elem_to_string(&ab, Elem::new(k));
        assert_eq!(string_to_elem(&ab, &s), Some(Elem::new(k)));
    }
    assert_eq!(render(&tokens("ab")), "ab");
}

#[test]
fn machine_generator_support_is_the_decider() {
    let g = machine_generator(UniformLen2);
    for k in 1..40u64 {
        let s = elem_to_string(&['a', 'b'], Elem::new(k));
        assert_eq!(g.decide_support(Elem::new(k)), s.len() == 2, "{s}");
    }
}
