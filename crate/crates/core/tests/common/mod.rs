#![allow(dead_code)]

//! Independent reference implementations and generators shared by the
//! integration tests. Nothing here calls into the search engine.

pub mod props;

use std::collections::{BTreeSet, HashSet, VecDeque};

use proptest::prelude::*;

use gcid_core::constructions::{RightLinearBody, RightLinearGrammar};
use gcid_core::model::{ActionKind, ControlledRule, GcidSystem, InsDelAction};
use gcid_core::sgnf::{GrammarRule, SgnfGrammar};
use gcid_core::symbol::{shortlex, sym, SymbolString};

pub type Word = Vec<String>;

fn names(w: &SymbolString) -> Word {
    w.iter().map(|s| s.to_string()).collect()
}

pub fn to_symbols(w: &Word) -> SymbolString {
    SymbolString(w.iter().map(|s| sym(s)).collect())
}

/// Sorted like the engine output: shortlex over symbol names.
pub fn sorted(words: impl IntoIterator<Item = Word>) -> Vec<SymbolString> {
    let mut out: Vec<SymbolString> = words.into_iter().map(|w| to_symbols(&w)).collect();
    out.sort_by(shortlex);
    out.dedup();
    out
}

/// All results of applying `(u, x, v)` to `w`, one per matching position.
pub fn naive_apply(kind: ActionKind, u: &[String], x: &[String], v: &[String], w: &[String]) -> Vec<Word> {
    let mut out = Vec::new();
    match kind {
        ActionKind::Insertion => {
            for p in 0..=w.len() {
                if p >= u.len() && w[p - u.len()..p] == *u && w.len() - p >= v.len() && w[p..p + v.len()] == *v {
                    let mut n = w[..p].to_vec();
                    n.extend_from_slice(x);
                    n.extend_from_slice(&w[p..]);
                    out.push(n);
                }
            }
        }
        ActionKind::Deletion => {
            let span = x.len() + v.len();
            for p in 0..=w.len() {
                if p >= u.len() && w.len() - p >= span && w[p - u.len()..p] == *u && w[p..p + x.len()] == *x
                    && w[p + x.len()..p + span] == *v
                {
                    let mut n = w[..p].to_vec();
                    n.extend_from_slice(&w[p + x.len()..]);
                    out.push(n);
                }
            }
        }
    }
    out
}

pub struct OracleResult {
    pub words: Vec<SymbolString>,
    /// Every configuration within the length cap was visited.
    pub complete: bool,
}

/// Plain breadth-first closure over `(string, component)` pairs.
pub fn oracle_language(sys: &GcidSystem, max_len: usize, cap: usize, max_depth: usize) -> OracleResult {
    let rules: Vec<(usize, ActionKind, Word, Word, Word, usize)> = sys
        .rules
        .iter()
        .map(|r| {
            (r.source, r.action.kind, names(&r.action.left), names(&r.action.body), names(&r.action.right), r.target)
        })
        .collect();
    let terminals: HashSet<String> = sys.terminals.iter().map(|s| s.to_string()).collect();
    let mut seen: HashSet<(Word, usize)> = HashSet::new();
    let mut queue = VecDeque::new();
    for a in &sys.axioms {
        let k = (names(a), sys.initial);
        if k.0.len() <= cap && seen.insert(k.clone()) {
            queue.push_back((k, 0));
        }
    }
    let mut complete = true;
    while let Some(((w, c), d)) = queue.pop_front() {
        for (src, kind, u, x, v, tgt) in &rules {
            if *src != c {
                continue;
            }
            for n in naive_apply(*kind, u, x, v, &w) {
                if n.len() > cap {
                    continue;
                }
                let k = (n, *tgt);
                if seen.contains(&k) {
                    continue;
                }
                if d >= max_depth {
                    complete = false;
                    continue;
                }
                seen.insert(k.clone());
                queue.push_back((k, d + 1));
            }
        }
    }
    let words = seen
        .into_iter()
        .filter(|(w, c)| sys.finals.contains(c) && w.len() <= max_len && w.iter().all(|s| terminals.contains(s)))
        .map(|(w, _)| w);
    OracleResult { words: sorted(words), complete }
}

/// Plain rewriting closure for normal-form grammars.
pub fn oracle_grammar_language(g: &SgnfGrammar, max_len: usize, cap: usize) -> Vec<SymbolString> {
    let rules: Vec<(Word, Word)> = g.rules.iter().map(|r| (names(&r.lhs), names(&r.rhs))).collect();
    let terminals: HashSet<String> = g.terminals.iter().map(|s| s.to_string()).collect();
    let start = vec![g.start.to_string()];
    let mut seen: HashSet<Word> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for (lhs, rhs) in &rules {
            for p in 0..w.len() {
                if w.len() - p >= lhs.len() && w[p..p + lhs.len()] == *lhs {
                    let mut n = w[..p].to_vec();
                    n.extend_from_slice(rhs);
                    n.extend_from_slice(&w[p + lhs.len()..]);
                    if n.len() <= cap && seen.insert(n.clone()) {
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    sorted(seen.into_iter().filter(|w| w.len() <= max_len && w.iter().all(|s| terminals.contains(s))))
}

/// Words of a right-linear grammar up to `max_len`, by unfolding.
pub fn oracle_regular_language(g: &RightLinearGrammar, max_len: usize) -> Vec<SymbolString> {
    fn go(g: &RightLinearGrammar, nt: &str, prefix: &mut Word, max_len: usize, out: &mut BTreeSet<Word>) {
        for r in g.rules.iter().filter(|r| r.lhs.as_str() == nt) {
            match &r.body {
                RightLinearBody::Erase => {
                    out.insert(prefix.clone());
                }
                RightLinearBody::Step(a, b) => {
                    if prefix.len() < max_len {
                        prefix.push(a.to_string());
                        go(g, b.as_str(), prefix, max_len, out);
                        prefix.pop();
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(g, g.start.as_str(), &mut Vec::new(), max_len, &mut out);
    sorted(out)
}

/// `{ww : |ww| <= max_len}` over `{a, b}`.
pub fn copy_words(max_len: usize) -> Vec<SymbolString> {
    let mut out = Vec::new();
    for half in 0..=max_len / 2 {
        for bits in 0..1u32 << half {
            let w: Word = (0..half).map(|i| if bits >> i & 1 == 1 { "b" } else { "a" }.to_string()).collect();
            out.push([w.clone(), w].concat());
        }
    }
    sorted(out)
}

/// `{a^n b^n : 2n <= max_len}`.
pub fn anbn_words(max_len: usize) -> Vec<SymbolString> {
    sorted((0..=max_len / 2).map(|n| {
        let mut w = vec!["a".to_string(); n];
        w.extend(vec!["b".to_string(); n]);
        w
    }))
}

// ---------------------------------------------------------------------------
// Generators

const SYSTEM_SYMBOLS: [&str; 4] = ["a", "b", "X", "Y"];

fn arb_string(max: usize) -> impl Strategy<Value = SymbolString> {
    prop::collection::vec(0..SYSTEM_SYMBOLS.len(), 0..=max)
        .prop_map(|v| SymbolString(v.into_iter().map(|i| sym(SYSTEM_SYMBOLS[i])).collect()))
}

fn arb_context() -> impl Strategy<Value = SymbolString> {
    prop_oneof![2 => Just(SymbolString::empty()), 1 => arb_string(1).prop_filter("one symbol", |s| s.len() == 1)]
}

fn arb_action() -> impl Strategy<Value = InsDelAction> {
    (any::<bool>(), arb_context(), arb_string(2).prop_filter("non-empty body", |b| !b.is_empty()), arb_context())
        .prop_map(|(ins, u, x, v)| if ins { InsDelAction::insertion(u, x, v) } else { InsDelAction::deletion(u, x, v) })
}

/// Small systems over `{a, b, X, Y}` with terminals `{a, b}`.
pub fn arb_system() -> impl Strategy<Value = GcidSystem> {
    (1usize..=3)
        .prop_flat_map(|k| {
            (
                Just(k),
                prop::collection::vec((1..=k, arb_action(), 1..=k), 2..=6),
                prop::collection::vec(arb_string(2), 1..=2),
                prop::collection::btree_set(1..=k, 1..=k),
            )
        })
        .prop_map(|(k, rules, axioms, finals)| GcidSystem {
            components: k,
            alphabet: SYSTEM_SYMBOLS.iter().map(|s| sym(s)).collect(),
            terminals: vec![sym("a"), sym("b")],
            axioms,
            initial: 1,
            finals: finals.into_iter().collect(),
            rules: rules
                .into_iter()
                .enumerate()
                .map(|(i, (s, a, t))| ControlledRule::new(format!("r{}", i + 1), s, a, t))
                .collect(),
        })
}

const NPRIME: [&str; 4] = ["S", "S'", "X", "Y"];
const LEFT: [&str; 2] = ["A", "C"];
const RIGHT: [&str; 4] = ["B", "D", "a", "b"];

/// Normal-form grammars over `N' = {S, S', X, Y}`: linear rules plus
/// `S' -> λ` and optionally `AB -> λ`, `CD -> λ`.
pub fn arb_sgnf() -> impl Strategy<Value = SgnfGrammar> {
    let linear = (any::<bool>(), 0usize..4, 0usize..4, 0usize..4).prop_filter_map("X != Y, X != S'", |(p, x, y, b)| {
        (x != y && x != 1).then_some((p, x, y, b))
    });
    (prop::collection::vec(linear, 1..=5), any::<bool>(), any::<bool>()).prop_map(|(lin, f, g)| {
        let w = |s: &[&str]| SymbolString(s.iter().map(|n| sym(n)).collect());
        let mut rules = Vec::new();
        for (i, (p, x, y, b)) in lin.into_iter().enumerate() {
            let rhs = if p { w(&[LEFT[b % 2], NPRIME[y]]) } else { w(&[NPRIME[y], RIGHT[b]]) };
            rules.push(GrammarRule::new(format!("l{}", i + 1), w(&[NPRIME[x]]), rhs));
        }
        rules.push(GrammarRule::new("h", w(&["S'"]), SymbolString::empty()));
        if f {
            rules.push(GrammarRule::new("f", w(&["A", "B"]), SymbolString::empty()));
        }
        if g {
            rules.push(GrammarRule::new("g", w(&["C", "D"]), SymbolString::empty()));
        }
        SgnfGrammar::new(NPRIME.iter().map(|s| sym(s)).collect(), vec![sym("a"), sym("b")], rules)
    })
}
