//! Special Geffert normal form grammars.
//!
//! Nonterminals split into `N'` (declared per grammar, containing `S` and
//! `S'`) and the fixed `N'' = {A, B, C, D}`. Admitted rules:
//!
//! * `X -> b Y` with `b` in `{A, C}`,
//! * `X -> Y b` with `b` in `T` or `{B, D}`,
//! * `S' -> λ`, `A B -> λ`, `C D -> λ`,
//!
//! where `X, Y` are distinct members of `N'` and `X != S'`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::engine::SearchLimits;
use crate::model::{is_valid_label, ValidationReport};
use crate::symbol::{shortlex, sym, Symbol, SymbolString};

pub const SPECIAL_NAMES: [&str; 4] = ["A", "B", "C", "D"];

pub fn special_nonterminals() -> [Symbol; 4] {
    SPECIAL_NAMES.map(sym)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrammarRule {
    pub label: String,
    pub lhs: SymbolString,
    pub rhs: SymbolString,
}

impl GrammarRule {
    pub fn new(label: impl Into<String>, lhs: SymbolString, rhs: SymbolString) -> Self {
        GrammarRule { label: label.into(), lhs, rhs }
    }
}

impl fmt::Display for GrammarRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.label, self.lhs, self.rhs.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgnfGrammar {
    pub nprime: Vec<Symbol>,
    pub terminals: Vec<Symbol>,
    pub start: Symbol,
    pub s_prime: Symbol,
    pub rules: Vec<GrammarRule>,
}

impl SgnfGrammar {
    /// Grammar with start `S` and erasable center `S'`.
    pub fn new(nprime: Vec<Symbol>, terminals: Vec<Symbol>, rules: Vec<GrammarRule>) -> Self {
        SgnfGrammar { nprime, terminals, start: sym("S"), s_prime: sym("S'"), rules }
    }

    pub fn is_nprime(&self, s: &Symbol) -> bool {
        self.nprime.contains(s)
    }

    pub fn is_terminal(&self, s: &Symbol) -> bool {
        self.terminals.contains(s)
    }

    /// `N' ∪ N'' ∪ T`, in that order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = self.nprime.clone();
        out.extend(special_nonterminals());
        out.extend(self.terminals.iter().cloned());
        out
    }

    pub fn rule(&self, label: &str) -> Option<&GrammarRule> {
        self.rules.iter().find(|r| r.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// `X -> b Y`.
    P { x: Symbol, b: Symbol, y: Symbol },
    /// `X -> Y b`.
    Q { x: Symbol, y: Symbol, b: Symbol },
    /// `S' -> λ`.
    H,
    /// `A B -> λ`.
    F,
    /// `C D -> λ`.
    G,
}

impl RuleKind {
    pub fn name(&self) -> &'static str {
        match self {
            RuleKind::P { .. } => "p",
            RuleKind::Q { .. } => "q",
            RuleKind::H => "h",
            RuleKind::F => "f",
            RuleKind::G => "g",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SgnfViolation {
    Overlap(Symbol),
    StartNotInNPrime(Symbol),
    SPrimeNotInNPrime(Symbol),
    StartIsSPrime,
    ReservedName(Symbol),
    InvalidLabel(String),
    DuplicateLabel(String),
    BadRule { label: String, reason: String },
}

impl fmt::Display for SgnfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SgnfViolation::Overlap(s) => write!(f, "symbol {s} occurs in more than one of N', N'', T"),
            SgnfViolation::StartNotInNPrime(s) => write!(f, "start symbol {s} not in N'"),
            SgnfViolation::SPrimeNotInNPrime(s) => write!(f, "center symbol {s} not in N'"),
            SgnfViolation::StartIsSPrime => write!(f, "start symbol coincides with the center symbol"),
            SgnfViolation::ReservedName(s) => write!(f, "symbol {s} uses the reserved marker namespace `#`"),
            SgnfViolation::InvalidLabel(l) => write!(f, "invalid rule label `{l}`"),
            SgnfViolation::DuplicateLabel(l) => write!(f, "duplicate rule label {l}"),
            SgnfViolation::BadRule { label, reason } => write!(f, "rule {label}: {reason}"),
        }
    }
}

/// Determines the kind of `rule` in `g`, or explains why it has none.
pub fn classify(g: &SgnfGrammar, rule: &GrammarRule) -> Result<RuleKind, String> {
    let [a, b_, c, d] = special_nonterminals();
    let lhs = rule.lhs.symbols();
    let rhs = rule.rhs.symbols();
    if rhs.is_empty() {
        return match lhs {
            [x] if *x == g.s_prime => Ok(RuleKind::H),
            [x, y] if *x == a && *y == b_ => Ok(RuleKind::F),
            [x, y] if *x == c && *y == d => Ok(RuleKind::G),
            _ => Err(format!("erasing rule {} -> λ is not S' -> λ, A B -> λ or C D -> λ", rule.lhs.render())),
        };
    }
    let [x] = lhs else {
        return Err("non-erasing rules need a single left-hand symbol".into());
    };
    if !g.is_nprime(x) {
        return Err(format!("left-hand side {x} is not in N'"));
    }
    if *x == g.s_prime {
        return Err(format!("{x} occurs on the left of a context-free rule"));
    }
    let [first, second] = rhs else {
        return Err("right-hand side must have exactly two symbols".into());
    };
    if (*first == a || *first == c) && g.is_nprime(second) {
        if second == x {
            return Err(format!("X -> bY needs Y different from X = {x}"));
        }
        return Ok(RuleKind::P { x: x.clone(), b: first.clone(), y: second.clone() });
    }
    if g.is_nprime(first) && (g.is_terminal(second) || *second == b_ || *second == d) {
        if first == x {
            return Err(format!("X -> Yb needs Y different from X = {x}"));
        }
        return Ok(RuleKind::Q { x: x.clone(), y: first.clone(), b: second.clone() });
    }
    Err(format!("right-hand side {} matches neither b Y (b in A, C) nor Y b (b in T, B, D)", rule.rhs))
}

pub fn validate_sgnf(g: &SgnfGrammar) -> ValidationReport<SgnfViolation> {
    let mut out = Vec::new();
    let special = special_nonterminals();
    let mut seen: HashMap<&Symbol, usize> = HashMap::new();
    for s in g.nprime.iter().chain(special.iter()).chain(g.terminals.iter()) {
        *seen.entry(s).or_default() += 1;
    }
    let mut overlaps: Vec<&Symbol> = seen.iter().filter(|(_, n)| **n > 1).map(|(s, _)| *s).collect();
    overlaps.sort();
    out.extend(overlaps.into_iter().map(|s| SgnfViolation::Overlap(s.clone())));
    for s in g.nprime.iter().chain(g.terminals.iter()) {
        if s.is_marker_name() {
            out.push(SgnfViolation::ReservedName(s.clone()));
        }
    }
    if !g.is_nprime(&g.start) {
        out.push(SgnfViolation::StartNotInNPrime(g.start.clone()));
    }
    if !g.is_nprime(&g.s_prime) {
        out.push(SgnfViolation::SPrimeNotInNPrime(g.s_prime.clone()));
    }
    if g.start == g.s_prime {
        out.push(SgnfViolation::StartIsSPrime);
    }
    let mut labels = HashSet::new();
    for r in &g.rules {
        if !is_valid_label(&r.label) {
            out.push(SgnfViolation::InvalidLabel(r.label.clone()));
        }
        if !labels.insert(r.label.as_str()) {
            out.push(SgnfViolation::DuplicateLabel(r.label.clone()));
        }
        if let Err(reason) = classify(g, r) {
            out.push(SgnfViolation::BadRule { label: r.label.clone(), reason });
        }
    }
    ValidationReport { violations: out }
}

fn rules_by_label(g: &SgnfGrammar) -> Vec<&GrammarRule> {
    let mut rules: Vec<&GrammarRule> = g.rules.iter().collect();
    rules.sort_by(|a, b| a.label.cmp(&b.label));
    rules
}

/// Every single rewrite, in (rule label, position) order.
pub fn grammar_steps(g: &SgnfGrammar, sf: &SymbolString) -> Vec<(String, usize, SymbolString)> {
    let w = sf.symbols();
    let mut out = Vec::new();
    for r in rules_by_label(g) {
        let lhs = r.lhs.symbols();
        if lhs.is_empty() || lhs.len() > w.len() {
            continue;
        }
        for p in 0..=w.len() - lhs.len() {
            if &w[p..p + lhs.len()] == lhs {
                let mut next = w[..p].to_vec();
                next.extend_from_slice(r.rhs.symbols());
                next.extend_from_slice(&w[p + lhs.len()..]);
                out.push((r.label.clone(), p, SymbolString(next)));
            }
        }
    }
    out
}

pub fn grammar_successors(g: &SgnfGrammar, sf: &SymbolString) -> Vec<SymbolString> {
    grammar_steps(g, sf).into_iter().map(|(_, _, s)| s).collect()
}

/// True iff `sf` lies in `{A,C}* (N' ∪ {λ}) ({B,D} ∪ T)*`.
pub fn has_center_shape(g: &SgnfGrammar, sf: &SymbolString) -> bool {
    let [a, b, c, d] = special_nonterminals();
    let mut it = sf.iter().peekable();
    while it.next_if(|s| **s == a || **s == c).is_some() {}
    it.next_if(|s| g.is_nprime(s));
    it.all(|s| *s == b || *s == d || g.is_terminal(s))
}

/// Number of `N'` symbols in `sf`.
pub fn nprime_count(g: &SgnfGrammar, sf: &SymbolString) -> usize {
    sf.iter().filter(|s| g.is_nprime(s)).count()
}

/// Result of a bounded sentential-form search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSearch {
    /// Reached forms in discovery order.
    pub forms: Vec<SymbolString>,
    pub exhausted: bool,
    /// Reached forms outside the center shape or with several `N'` symbols.
    pub shape_violations: Vec<SymbolString>,
}

impl FormSearch {
    pub fn contains(&self, sf: &SymbolString) -> bool {
        self.forms.contains(sf)
    }

    pub fn form_set(&self) -> HashSet<&SymbolString> {
        self.forms.iter().collect()
    }
}

fn search_forms(g: &SgnfGrammar, limits: &SearchLimits) -> FormSearch {
    let cap = limits.max_config_len;
    let start = SymbolString(vec![g.start.clone()]);
    let mut seen: HashSet<SymbolString> = HashSet::new();
    let mut forms = Vec::new();
    let mut violations = Vec::new();
    let mut truncated = false;
    let record = |sf: SymbolString, forms: &mut Vec<SymbolString>, violations: &mut Vec<SymbolString>| {
        if !has_center_shape(g, &sf) || nprime_count(g, &sf) > 1 {
            violations.push(sf.clone());
        }
        forms.push(sf);
    };
    let mut frontier = Vec::new();
    if start.len() <= cap {
        seen.insert(start.clone());
        record(start.clone(), &mut forms, &mut violations);
        frontier.push(start);
    }
    let mut depth = 0;
    while !frontier.is_empty() {
        if depth >= limits.max_steps {
            let grows = frontier
                .iter()
                .any(|sf| grammar_successors(g, sf).into_iter().any(|n| n.len() <= cap && !seen.contains(&n)));
            return FormSearch { forms, exhausted: !grows && !truncated, shape_violations: violations };
        }
        let mut next = Vec::new();
        for sf in &frontier {
            for n in grammar_successors(g, sf) {
                if n.len() > cap || seen.contains(&n) {
                    continue;
                }
                if seen.len() >= limits.max_states {
                    truncated = true;
                    continue;
                }
                seen.insert(n.clone());
                record(n.clone(), &mut forms, &mut violations);
                next.push(n);
            }
        }
        frontier = next;
        depth += 1;
    }
    FormSearch { forms, exhausted: !truncated, shape_violations: violations }
}

/// All forms reachable from the start symbol within the caps.
pub fn sentential_forms_up_to(g: &SgnfGrammar, limits: &SearchLimits) -> FormSearch {
    search_forms(g, limits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarSample {
    /// Shortlex-ordered terminal words of length at most the word bound.
    pub words: Vec<SymbolString>,
    pub exhausted: bool,
    pub shape_violations: Vec<SymbolString>,
    pub limits: SearchLimits,
}

pub fn enumerate_grammar_language(g: &SgnfGrammar, limits: &SearchLimits) -> GrammarSample {
    let found = search_forms(g, limits);
    let mut words: Vec<SymbolString> = found
        .forms
        .iter()
        .filter(|sf| sf.len() <= limits.max_word_len && sf.iter().all(|s| g.is_terminal(s)))
        .cloned()
        .collect();
    words.sort_by(shortlex);
    GrammarSample { words, exhausted: found.exhausted, shape_violations: found.shape_violations, limits: *limits }
}
