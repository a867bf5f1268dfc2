//! Bundled example systems, grammars and traces.
//!
//! The text sources live in the crate's `fixtures/` directory and are
//! embedded at compile time, so callers get the same values the files hold.

use crate::constructions::{compile_regular, compile_t4, compile_t6, RightLinearGrammar};
use crate::engine::DerivationTrace;
use crate::format::{parse_gcid, parse_regular, parse_sgnf, parse_trace};
use crate::model::{Configuration, GcidSystem};
use crate::sgnf::SgnfGrammar;
use crate::symbol::word;

macro_rules! fixture_text {
    ($($name:ident => $file:literal),* $(,)?) => {
        /// Raw fixture sources by file name.
        pub const SOURCES: &[(&str, &str)] = &[$(($file, $name)),*];
        $(pub const $name: &str = include_str!(concat!("../fixtures/", $file));)*
    };
}

fixture_text! {
    COPY => "copy.gcid",
    ANBN => "anbn.gcid",
    COPY_COLLAPSED => "copy_collapsed.gcid",
    FREE_A => "free_a.gcid",
    INERT => "inert.gcid",
    PI_BAD => "pi_bad.gcid",
    G1 => "g1.sgnf",
    G2 => "g2.sgnf",
    G3 => "g3.sgnf",
    G4 => "g4.sgnf",
    G5 => "g5.sgnf",
    G_BAD => "g_bad.sgnf",
    REG_A => "reg_a.regular",
    REG_AB_STAR => "reg_ab_star.regular",
    REG_A_BA_STAR => "reg_a_ba_star.regular",
    COPY_AABAAB => "copy_aabaab.trace",
    PI_BAD_TRACE => "pi_bad.trace",
    T6_P_CHAIN => "t6_p_chain.trace",
    T6_Q_CHAIN => "t6_q_chain.trace",
    T6_F_CHAIN => "t6_f_chain.trace",
    T6_H_CHAIN => "t6_h_chain.trace",
    T4_P_CHAIN => "t4_p_chain.trace",
    T4_Q_CHAIN => "t4_q_chain.trace",
    T4_H_CHAIN => "t4_h_chain.trace",
    T4_F_CHAIN => "t4_f_chain.trace",
    REG_A_CHAIN => "reg_a_chain.trace",
}

fn gcid(text: &str, name: &str) -> GcidSystem {
    parse_gcid(text, name).unwrap_or_else(|e| panic!("bundled fixture: {e}"))
}

fn sgnf(text: &str, name: &str) -> SgnfGrammar {
    parse_sgnf(text, name).unwrap_or_else(|e| panic!("bundled fixture: {e}"))
}

fn regular(text: &str, name: &str) -> RightLinearGrammar {
    parse_regular(text, name).unwrap_or_else(|e| panic!("bundled fixture: {e}"))
}

fn trace(text: &str, name: &str) -> DerivationTrace {
    let (start, steps) = parse_trace(text, name).unwrap_or_else(|e| panic!("bundled fixture: {e}"));
    DerivationTrace { start: start.unwrap_or_else(|| panic!("{name}: missing start line")), steps }
}

pub fn copy_system() -> GcidSystem {
    gcid(COPY, "copy.gcid")
}

pub fn anbn_system() -> GcidSystem {
    gcid(ANBN, "anbn.gcid")
}

/// The copy-system actions as loops on a single component.
pub fn collapsed_copy_system() -> GcidSystem {
    gcid(COPY_COLLAPSED, "copy_collapsed.gcid")
}

/// One context-free insertion `(λ, a, λ)_I`, axiom λ.
pub fn free_a_system() -> GcidSystem {
    gcid(FREE_A, "free_a.gcid")
}

/// One component, no rules, axioms `ab`, `X`, λ.
pub fn inert_system() -> GcidSystem {
    gcid(INERT, "inert.gcid")
}

/// Five-component direct simulation attempt for `p: X -> A Y`, `u: Y -> C X`.
pub fn pi_bad() -> GcidSystem {
    gcid(PI_BAD, "pi_bad.gcid")
}

pub fn g1() -> SgnfGrammar {
    sgnf(G1, "g1.sgnf")
}

pub fn g2() -> SgnfGrammar {
    sgnf(G2, "g2.sgnf")
}

pub fn g3() -> SgnfGrammar {
    sgnf(G3, "g3.sgnf")
}

pub fn g4() -> SgnfGrammar {
    sgnf(G4, "g4.sgnf")
}

pub fn g5() -> SgnfGrammar {
    sgnf(G5, "g5.sgnf")
}

/// `p: X -> A Y`, `u: Y -> C X`, start `X`.
pub fn g_bad() -> SgnfGrammar {
    sgnf(G_BAD, "g_bad.sgnf")
}

pub fn reg_a() -> RightLinearGrammar {
    regular(REG_A, "reg_a.regular")
}

pub fn reg_ab_star() -> RightLinearGrammar {
    regular(REG_AB_STAR, "reg_ab_star.regular")
}

pub fn reg_a_ba_star() -> RightLinearGrammar {
    regular(REG_A_BA_STAR, "reg_a_ba_star.regular")
}

pub fn copy_aabaab_trace() -> DerivationTrace {
    trace(COPY_AABAAB, "copy_aabaab.trace")
}

/// Replayable on [`pi_bad`]; ends in `(C A A Y)_1`.
pub fn pi_bad_trace() -> DerivationTrace {
    trace(PI_BAD_TRACE, "pi_bad.trace")
}

pub fn gcid_fixtures() -> Vec<(&'static str, GcidSystem)> {
    vec![
        ("copy", copy_system()),
        ("anbn", anbn_system()),
        ("copy_collapsed", collapsed_copy_system()),
        ("free_a", free_a_system()),
        ("inert", inert_system()),
        ("pi_bad", pi_bad()),
    ]
}

pub fn one_component_fixtures() -> Vec<(&'static str, GcidSystem)> {
    gcid_fixtures().into_iter().filter(|(_, s)| s.components == 1).collect()
}

/// G1 to G5.
pub fn sgnf_fixtures() -> Vec<(&'static str, SgnfGrammar)> {
    vec![("g1", g1()), ("g2", g2()), ("g3", g3()), ("g4", g4()), ("g5", g5())]
}

pub fn regular_fixtures() -> Vec<(&'static str, RightLinearGrammar)> {
    vec![("reg_a", reg_a()), ("reg_ab_star", reg_ab_star()), ("reg_a_ba_star", reg_a_ba_star())]
}

/// A displayed derivation chain together with where it must end.
#[derive(Debug, Clone)]
pub struct GoldenTrace {
    pub name: &'static str,
    pub system: GcidSystem,
    pub trace: DerivationTrace,
    /// Every string along the chain, start included.
    pub strings: Vec<&'static str>,
    pub end: Configuration,
}

fn golden(
    name: &'static str,
    system: GcidSystem,
    text: &str,
    strings: Vec<&'static str>,
    end: (&str, usize),
) -> GoldenTrace {
    GoldenTrace {
        name,
        system,
        trace: trace(text, name),
        strings,
        end: Configuration::new(word(end.0), end.1),
    }
}

pub fn golden_traces() -> Vec<GoldenTrace> {
    let t6 = compile_t6(&g2()).expect("g2 compiles").system;
    let t4 = compile_t4(&g2()).expect("g2 compiles").system;
    let reg = compile_regular(&reg_a()).expect("reg_a compiles").system;
    vec![
        golden(
            "copy_aabaab",
            copy_system(),
            COPY_AABAAB,
            vec![
                "A B",
                "a A B",
                "a A a B",
                "a a A a B",
                "a a A a a B",
                "a a b A a a B",
                "a a b A a a b B",
                "a a b A a a b",
                "a a b a a b",
            ],
            ("a a b a a b", 1),
        ),
        golden(
            "t6_p_chain",
            t6.clone(),
            T6_P_CHAIN,
            vec![
                "S",
                "S p#0",
                "p#0",
                "p#0 p#1",
                "p#0 p#1 p#5",
                "p#0 p#1 A p#5",
                "p#0 p#1 A p#2 p#5",
                "A p#2 p#5",
                "A p#2 p#3 p#5",
                "A p#2 p#3 p#4 p#5",
                "A p#2 p#3",
                "A p#2 p#3 X",
                "A X",
            ],
            ("A X", 1),
        ),
        golden(
            "t6_q_chain",
            t6.clone(),
            T6_Q_CHAIN,
            vec!["X", "X q#0", "q#0", "q#0 q#1", "q#0 q#1 B", "q#0 q#1 S' B", "S' B"],
            ("S' B", 1),
        ),
        golden(
            "t6_f_chain",
            t6.clone(),
            T6_F_CHAIN,
            vec!["A B", "A f#0 B", "A f#0 B f#1", "A f#1", "<empty>"],
            ("<empty>", 1),
        ),
        golden("t6_h_chain", t6, T6_H_CHAIN, vec!["S'", "S' h#0", "<empty>"], ("<empty>", 1)),
        golden("t4_p_chain", t4.clone(), T4_P_CHAIN, vec!["S", "p#0 S", "p#0", "p#0 A X", "A X"], ("A X", 1)),
        golden(
            "t4_q_chain",
            t4.clone(),
            T4_Q_CHAIN,
            vec!["X", "q#0 X", "q#0", "q#0 S' B", "S' B"],
            ("S' B", 1),
        ),
        golden(
            "t4_h_chain",
            t4.clone(),
            T4_H_CHAIN,
            vec!["S'", "h#0 h#1 S'", "h#0 h#1", "h#0", "<empty>"],
            ("<empty>", 1),
        ),
        golden(
            "t4_f_chain",
            t4,
            T4_F_CHAIN,
            vec![
                "A B",
                "f#1 A B",
                "f#1 A f#0 B",
                "f#1 f#0 B",
                "f#1 f#2 f#4 f#0 B",
                "f#1 f#2 f#4 B",
                "f#1 f#2 f#4 B f#6",
                "f#1 f#2 f#4 f#6",
                "f#1 f#2 f#4 f#3 f#5 f#6",
                "f#1 f#2 f#4 f#3 f#6",
                "f#1 f#4 f#3 f#6",
                "f#1 f#4 f#6",
                "f#4 f#6",
                "f#4",
                "<empty>",
            ],
            ("<empty>", 1),
        ),
        golden(
            "reg_a_chain",
            reg,
            REG_A_CHAIN,
            vec!["S", "a X $#0 S", "a X", "a $#0 X", "a"],
            ("a", 1),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_system;

    #[test]
    fn bundled_systems_validate() {
        for (name, sys) in gcid_fixtures() {
            let rep = validate_system(&sys);
            assert!(rep.is_ok(), "{name}: {rep}");
        }
    }

    #[test]
    fn bundled_traces_parse() {
        assert_eq!(copy_aabaab_trace().steps.len(), 8);
        assert_eq!(pi_bad_trace().steps.len(), 24);
        assert_eq!(golden_traces().len(), 10);
    }
}
