mod common;

use proptest::prelude::*;

use common::{anbn_words, arb_system, copy_words, oracle_grammar_language, oracle_language};
use gcid_core::engine::{enumerate_language, enumerate_language_with, membership, Exec, Membership, SearchLimits};
use gcid_core::fixtures;
use gcid_core::model::Configuration;
use gcid_core::sgnf::enumerate_grammar_language;
use gcid_core::symbol::word;

#[test]
fn anbn_small_bound_matches_oracle() {
    let l = SearchLimits::new(4);
    let got = enumerate_language(&fixtures::anbn_system(), &l).unwrap();
    let want = oracle_language(&fixtures::anbn_system(), 4, 8, usize::MAX);
    assert!(got.exhausted && want.complete);
    assert_eq!(got.words, want.words);
    assert_eq!(got.words, anbn_words(4));
}

#[test]
fn copy_small_bound_matches_pattern() {
    let l = SearchLimits::new(4);
    let got = enumerate_language(&fixtures::copy_system(), &l).unwrap();
    assert!(got.exhausted);
    assert_eq!(got.words, oracle_language(&fixtures::copy_system(), 4, 8, usize::MAX).words);
    assert_eq!(got.words, copy_words(4));
}

#[test]
fn collapsed_copy_matches_oracle() {
    let sys = fixtures::collapsed_copy_system();
    let got = enumerate_language(&sys, &SearchLimits::new(4).with_config_len(7)).unwrap();
    let want = oracle_language(&sys, 4, 7, usize::MAX);
    assert!(got.exhausted && want.complete);
    assert_eq!(got.words, want.words);
}

#[test]
fn inert_system_yields_terminal_axioms() {
    let got = enumerate_language(&fixtures::inert_system(), &SearchLimits::new(3)).unwrap();
    assert!(got.exhausted);
    assert_eq!(got.words, vec![word(""), word("a b")]);
}

#[test]
fn copy_membership_examples() {
    let sys = fixtures::copy_system();
    let yes = membership(&sys, &word("a a b a a b"), &SearchLimits::new(6)).unwrap();
    assert_eq!(yes.trace().unwrap().labels(), ["r1.1", "r2.1", "r1.1", "r2.1", "r1.2", "r3.1", "r1.3", "r2.2"]);
    let no = membership(&sys, &word("a a b"), &SearchLimits::new(3).with_config_len(10)).unwrap();
    assert_eq!(no, Membership::NoWithinBounds { exhausted: true });
}

#[test]
fn anbn_membership_of_ab() {
    let m = membership(&fixtures::anbn_system(), &word("a b"), &SearchLimits::new(2)).unwrap();
    assert_eq!(m.trace().unwrap().steps.len(), 4);
    assert_eq!(m.trace().unwrap().start, Configuration::new(fixtures::anbn_system().axioms[0].clone(), 1));
}

#[test]
fn grammar_enumeration_matches_rewriting_oracle() {
    for (name, g) in fixtures::sgnf_fixtures() {
        let l = SearchLimits::new(6).with_config_len(10);
        let got = enumerate_grammar_language(&g, &l);
        assert!(got.exhausted, "{name}");
        assert_eq!(got.words, oracle_grammar_language(&g, 6, 10), "{name}");
    }
}

#[test]
fn compiled_small_grammars_match_oracle() {
    use gcid_core::constructions::{compile, Construction};
    for (g, c, cap) in [(fixtures::g1(), Construction::T6, 8), (fixtures::g1(), Construction::T4, 8), (fixtures::g3(), Construction::T4, 8)] {
        let sys = compile(&g, c).unwrap().system;
        let got = enumerate_language(&sys, &SearchLimits::new(4).with_config_len(cap)).unwrap();
        let want = oracle_language(&sys, 4, cap, usize::MAX);
        assert!(got.exhausted && want.complete);
        assert_eq!(got.words, want.words, "{c}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn engine_agrees_with_naive_search(sys in arb_system(), prune in any::<bool>()) {
        let l = SearchLimits::new(3).with_config_len(6).with_steps(25).with_prune(prune);
        let oracle = oracle_language(&sys, 3, 6, 25);
        for exec in [Exec::Sequential, Exec::Parallel] {
            let got = enumerate_language_with(&sys, &l, exec).unwrap();
            prop_assert_eq!(&got.words, &oracle.words);
            if !prune {
                prop_assert_eq!(got.exhausted, oracle.complete);
            } else if oracle.complete {
                prop_assert!(got.exhausted);
            }
        }
    }
}
