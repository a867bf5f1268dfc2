//! Invariant checks over generated inputs, shared by the property suite
//! and the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use gcid_core::engine::{
    apply_at, enumerate_language_with, membership, replay_trace, successors, Exec, SearchLimits,
};
use gcid_core::model::{mirror_system, ActionKind, Configuration, GcidSystem};
use gcid_core::sgnf::{has_center_shape, nprime_count, sentential_forms_up_to, SgnfGrammar};
use gcid_core::symbol::{sym, SymbolString};

use super::{arb_sgnf, arb_system};

pub fn arb_config(k: usize) -> impl Strategy<Value = Configuration> {
    (prop::collection::vec(prop::sample::select(vec!["a", "b", "X", "Y"]), 0..=5), 1..=k)
        .prop_map(|(w, c)| Configuration::new(SymbolString(w.into_iter().map(sym).collect()), c))
}

pub fn arb_system_and_config() -> impl Strategy<Value = (GcidSystem, Configuration)> {
    arb_system().prop_flat_map(|s| {
        let k = s.components;
        (Just(s), arb_config(k))
    })
}

/// Every successor differs in length by exactly the body length of its rule.
pub fn length_delta(sys: &GcidSystem, cfg: &Configuration) -> Result<(), TestCaseError> {
    for (site, next) in successors(sys, cfg) {
        let rule = sys.rule(&site.rule_label).expect("site names a rule");
        let body = rule.action.body.len() as isize;
        let delta = next.string.len() as isize - cfg.string.len() as isize;
        let expected = if rule.action.kind == ActionKind::Insertion { body } else { -body };
        prop_assert_eq!(delta, expected, "{} at {}", site.rule_label, site.position);
        prop_assert_eq!(next.component, rule.target);
        prop_assert_eq!(apply_at(sys, cfg, &site).unwrap(), next);
    }
    Ok(())
}

/// Successors of the mirror on the reversed string are the reversed successors.
pub fn reversal_duality(sys: &GcidSystem, cfg: &Configuration) -> Result<(), TestCaseError> {
    let key = |c: &Configuration| (c.string.render(), c.component);
    let mut a: Vec<_> = successors(sys, cfg)
        .into_iter()
        .map(|(_, c)| key(&Configuration::new(c.string.reversed(), c.component)))
        .collect();
    let rev = Configuration::new(cfg.string.reversed(), cfg.component);
    let mut b: Vec<_> = successors(&mirror_system(sys), &rev).into_iter().map(|(_, c)| key(&c)).collect();
    a.sort();
    b.sort();
    prop_assert_eq!(a, b);
    Ok(())
}

fn small_limits() -> SearchLimits {
    SearchLimits::new(3).with_config_len(6).with_steps(30)
}

/// Equal limits give identical output, whichever executor runs the search.
pub fn determinism(sys: &GcidSystem) -> Result<(), TestCaseError> {
    let l = small_limits();
    let first = enumerate_language_with(sys, &l, Exec::Sequential).unwrap();
    let again = enumerate_language_with(sys, &l, Exec::Sequential).unwrap();
    let parallel = enumerate_language_with(sys, &l, Exec::Parallel).unwrap();
    prop_assert_eq!(&first, &again);
    prop_assert_eq!(&first, &parallel);
    Ok(())
}

/// Enlarging any limit keeps every word.
pub fn monotone_limits(sys: &GcidSystem) -> Result<(), TestCaseError> {
    let l = small_limits();
    let base = enumerate_language_with(sys, &l, Exec::Sequential).unwrap();
    for bigger in [
        SearchLimits { max_word_len: l.max_word_len + 1, ..l },
        SearchLimits { max_config_len: l.max_config_len + 1, ..l },
        SearchLimits { max_steps: l.max_steps + 5, ..l },
        SearchLimits { prune_dead: false, ..l },
    ] {
        let more = enumerate_language_with(sys, &bigger, Exec::Sequential).unwrap();
        for w in &base.words {
            prop_assert!(more.words.contains(w), "{} lost under {}", w.render(), bigger);
        }
    }
    Ok(())
}

/// Every enumerated word comes with a trace that replays to it in a final component.
pub fn enumeration_soundness(sys: &GcidSystem) -> Result<(), TestCaseError> {
    let l = small_limits();
    for w in enumerate_language_with(sys, &l, Exec::Sequential).unwrap().words {
        let m = membership(sys, &w, &l).unwrap();
        let trace = m.trace().ok_or_else(|| TestCaseError::fail(format!("no witness for {}", w.render())))?;
        let end = replay_trace(sys, trace).unwrap();
        prop_assert_eq!(&end.string, &w);
        prop_assert!(sys.is_final(end.component));
    }
    Ok(())
}

/// Every reachable sentential form holds at most one N' symbol, in the center.
pub fn single_nprime(g: &SgnfGrammar) -> Result<(), TestCaseError> {
    let forms = sentential_forms_up_to(g, &SearchLimits::new(4).with_config_len(7).with_steps(12));
    prop_assert!(forms.shape_violations.is_empty(), "{:?}", forms.shape_violations);
    for f in &forms.forms {
        prop_assert!(nprime_count(g, f) <= 1, "{}", f.render());
        prop_assert!(has_center_shape(g, f), "{}", f.render());
    }
    Ok(())
}

/// Outcome of one named invariant run.
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u32,
    pub outcome: Result<(), String>,
}

fn run<S: Strategy>(
    name: &'static str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> SuiteResult {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    let outcome = runner.run(&strategy, test).map_err(|e| e.to_string());
    SuiteResult { name, cases, outcome }
}

pub const INVARIANTS: [&str; 6] = [
    "length-delta",
    "reversal-duality",
    "determinism",
    "monotone-limits",
    "enumeration-soundness",
    "single-nprime",
];

pub fn run_invariant(name: &'static str, cases: u32) -> SuiteResult {
    match name {
        "length-delta" => run(name, cases, arb_system_and_config(), |(s, c)| length_delta(&s, &c)),
        "reversal-duality" => run(name, cases, arb_system_and_config(), |(s, c)| reversal_duality(&s, &c)),
        "determinism" => run(name, cases, arb_system(), |s| determinism(&s)),
        "monotone-limits" => run(name, cases, arb_system(), |s| monotone_limits(&s)),
        "enumeration-soundness" => run(name, cases, arb_system(), |s| enumeration_soundness(&s)),
        "single-nprime" => run(name, cases, arb_sgnf(), |g| single_nprime(&g)),
        _ => panic!("unknown invariant {name}"),
    }
}

/// All invariants, `cases` generated inputs each.
pub fn invariant_suite(cases: u32) -> Vec<SuiteResult> {
    INVARIANTS.iter().map(|n| run_invariant(n, cases)).collect()
}
