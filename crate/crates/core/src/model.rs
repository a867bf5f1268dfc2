//! Data model for graph-controlled insertion-deletion systems.
//!
//! A system is `(k, V, T, A, H, i0, F, R)`: `k` components, an alphabet,
//! a terminal subalphabet, axioms, an initial component, final components and
//! labelled rules `l: (i, r, j)` moving the string from component `i` to `j`.
//! Components are numbered from 1.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::symbol::{Symbol, SymbolString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    Insertion,
    Deletion,
}

impl ActionKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ActionKind::Insertion => "ins",
            ActionKind::Deletion => "del",
        }
    }
}

/// `(u, body, v)_I` or `(u, body, v)_D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InsDelAction {
    pub kind: ActionKind,
    pub left: SymbolString,
    pub body: SymbolString,
    pub right: SymbolString,
}

impl InsDelAction {
    pub fn insertion(left: SymbolString, body: SymbolString, right: SymbolString) -> Self {
        InsDelAction { kind: ActionKind::Insertion, left, body, right }
    }

    pub fn deletion(left: SymbolString, body: SymbolString, right: SymbolString) -> Self {
        InsDelAction { kind: ActionKind::Deletion, left, body, right }
    }

    /// The action on reversed strings: `(v^R, body^R, u^R)`.
    pub fn mirrored(&self) -> Self {
        InsDelAction {
            kind: self.kind,
            left: self.right.reversed(),
            body: self.body.reversed(),
            right: self.left.reversed(),
        }
    }

    fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.left.iter().chain(self.body.iter()).chain(self.right.iter())
    }
}

impl fmt::Display for InsDelAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &SymbolString| if s.is_empty() { "λ".to_string() } else { s.to_string() };
        let tag = match self.kind {
            ActionKind::Insertion => 'I',
            ActionKind::Deletion => 'D',
        };
        write!(f, "({}, {}, {})_{}", show(&self.left), show(&self.body), show(&self.right), tag)
    }
}

/// `label: (source, action, target)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ControlledRule {
    pub label: String,
    pub source: usize,
    pub action: InsDelAction,
    pub target: usize,
}

impl ControlledRule {
    pub fn new(label: impl Into<String>, source: usize, action: InsDelAction, target: usize) -> Self {
        ControlledRule { label: label.into(), source, action, target }
    }
}

impl fmt::Display for ControlledRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ({},{},{})", self.label, self.source, self.action, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcidSystem {
    pub components: usize,
    pub alphabet: Vec<Symbol>,
    pub terminals: Vec<Symbol>,
    pub axioms: Vec<SymbolString>,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub rules: Vec<ControlledRule>,
}

impl GcidSystem {
    pub fn is_final(&self, component: usize) -> bool {
        self.finals.contains(&component)
    }

    pub fn is_terminal_word(&self, w: &SymbolString) -> bool {
        w.iter().all(|s| self.terminals.contains(s))
    }

    pub fn rule(&self, label: &str) -> Option<&ControlledRule> {
        self.rules.iter().find(|r| r.label == label)
    }

    /// Rules resident in `component`, ordered by label.
    pub fn rules_in(&self, component: usize) -> Vec<&ControlledRule> {
        let mut v: Vec<_> = self.rules.iter().filter(|r| r.source == component).collect();
        v.sort_by(|a, b| a.label.cmp(&b.label));
        v
    }
}

/// A string together with the component it currently sits in; `(w)_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub string: SymbolString,
    pub component: usize,
}

impl Configuration {
    pub fn new(string: SymbolString, component: usize) -> Self {
        Configuration { string, component }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})_{}", self.string.render(), self.component)
    }
}

/// A single definitional violation found by [`validate_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoComponents,
    DuplicateSymbol(Symbol),
    TerminalNotInAlphabet(Symbol),
    AxiomSymbolNotInAlphabet { axiom: usize, symbol: Symbol },
    RuleSymbolNotInAlphabet { label: String, symbol: Symbol },
    EmptyBody { label: String },
    InvalidLabel { label: String },
    DuplicateLabel { label: String },
    SourceOutOfRange { label: String, source: usize },
    TargetOutOfRange { label: String, target: usize },
    InitialOutOfRange(usize),
    NoFinals,
    FinalOutOfRange(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoComponents => write!(f, "components: system must have at least one component"),
            Violation::DuplicateSymbol(s) => write!(f, "alphabet: duplicate symbol `{s}`"),
            Violation::TerminalNotInAlphabet(s) => write!(f, "terminals: terminal `{s}` not in alphabet"),
            Violation::AxiomSymbolNotInAlphabet { axiom, symbol } => {
                write!(f, "axiom {axiom}: axiom symbol not in alphabet: `{symbol}`")
            }
            Violation::RuleSymbolNotInAlphabet { label, symbol } => {
                write!(f, "rule {label}: rule symbol not in alphabet: `{symbol}`")
            }
            Violation::EmptyBody { label } => write!(f, "rule {label}: empty insertion/deletion body"),
            Violation::InvalidLabel { label } => write!(f, "rule `{label}`: invalid label"),
            Violation::DuplicateLabel { label } => write!(f, "rule {label}: duplicate label"),
            Violation::SourceOutOfRange { label, source } => {
                write!(f, "rule {label}: source out of range ({source})")
            }
            Violation::TargetOutOfRange { label, target } => {
                write!(f, "rule {label}: target out of range ({target})")
            }
            Violation::InitialOutOfRange(i) => write!(f, "initial: component {i} out of range"),
            Violation::NoFinals => write!(f, "final: at least one final component required"),
            Violation::FinalOutOfRange(i) => write!(f, "final: component {i} out of range"),
        }
    }
}

/// Outcome of a validation pass; violations are data, not failures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport<V> {
    pub violations: Vec<V>,
}

impl<V> ValidationReport<V> {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<V: fmt::Display> fmt::Display for ValidationReport<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

pub(crate) fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && !label.chars().any(char::is_whitespace)
        && !label.contains('|')
        && !label.contains('@')
        && !label.starts_with('#')
        && label != "."
        && label != ":"
}

pub fn validate_system(sys: &GcidSystem) -> ValidationReport<Violation> {
    let mut out = Vec::new();
    let k = sys.components;
    if k == 0 {
        out.push(Violation::NoComponents);
    }
    let mut seen = HashSet::new();
    for s in &sys.alphabet {
        if !seen.insert(s) {
            out.push(Violation::DuplicateSymbol(s.clone()));
        }
    }
    let in_v = |s: &Symbol| seen.contains(s);
    for t in &sys.terminals {
        if !in_v(t) {
            out.push(Violation::TerminalNotInAlphabet(t.clone()));
        }
    }
    for (i, ax) in sys.axioms.iter().enumerate() {
        for s in ax {
            if !in_v(s) {
                out.push(Violation::AxiomSymbolNotInAlphabet { axiom: i + 1, symbol: s.clone() });
            }
        }
    }
    if !(1..=k).contains(&sys.initial) {
        out.push(Violation::InitialOutOfRange(sys.initial));
    }
    if sys.finals.is_empty() {
        out.push(Violation::NoFinals);
    }
    for &f in &sys.finals {
        if !(1..=k).contains(&f) {
            out.push(Violation::FinalOutOfRange(f));
        }
    }
    let mut labels = HashSet::new();
    for r in &sys.rules {
        if !is_valid_label(&r.label) {
            out.push(Violation::InvalidLabel { label: r.label.clone() });
        }
        if !labels.insert(r.label.as_str()) {
            out.push(Violation::DuplicateLabel { label: r.label.clone() });
        }
        if !(1..=k).contains(&r.source) {
            out.push(Violation::SourceOutOfRange { label: r.label.clone(), source: r.source });
        }
        if !(1..=k).contains(&r.target) {
            out.push(Violation::TargetOutOfRange { label: r.label.clone(), target: r.target });
        }
        if r.action.body.is_empty() {
            out.push(Violation::EmptyBody { label: r.label.clone() });
        }
        let mut reported = HashSet::new();
        for s in r.action.symbols() {
            if !in_v(s) && reported.insert(s) {
                out.push(Violation::RuleSymbolNotInAlphabet { label: r.label.clone(), symbol: s.clone() });
            }
        }
    }
    ValidationReport { violations: out }
}

/// `(k; n, i', i''; m, j', j'')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SizeMeasure {
    pub k: usize,
    pub n: usize,
    pub i_left: usize,
    pub i_right: usize,
    pub m: usize,
    pub j_left: usize,
    pub j_right: usize,
}

impl SizeMeasure {
    pub const fn new(k: usize, ins: (usize, usize, usize), del: (usize, usize, usize)) -> Self {
        SizeMeasure { k, n: ins.0, i_left: ins.1, i_right: ins.2, m: del.0, j_left: del.1, j_right: del.2 }
    }
}

impl fmt::Display for SizeMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({};{},{},{};{},{},{})",
            self.k, self.n, self.i_left, self.i_right, self.m, self.j_left, self.j_right
        )
    }
}

pub fn compute_size(sys: &GcidSystem) -> SizeMeasure {
    let mut s = SizeMeasure { k: sys.components, ..Default::default() };
    for r in &sys.rules {
        let a = &r.action;
        match a.kind {
            ActionKind::Insertion => {
                s.n = s.n.max(a.body.len());
                s.i_left = s.i_left.max(a.left.len());
                s.i_right = s.i_right.max(a.right.len());
            }
            ActionKind::Deletion => {
                s.m = s.m.max(a.body.len());
                s.j_left = s.j_left.max(a.left.len());
                s.j_right = s.j_right.max(a.right.len());
            }
        }
    }
    s
}

/// Directed arcs `(Ci, Cj)` and the derived undirected edges `{Ci, Cj}`
/// (stored as ordered pairs with the smaller index first).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ControlGraph {
    pub arcs: BTreeSet<(usize, usize)>,
    pub edges: BTreeSet<(usize, usize)>,
}

pub fn control_graph(sys: &GcidSystem) -> ControlGraph {
    let mut g = ControlGraph::default();
    for r in &sys.rules {
        g.arcs.insert((r.source, r.target));
        g.edges.insert((r.source.min(r.target), r.source.max(r.target)));
    }
    g
}

/// Structural breakdown of the star test.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StarReport {
    /// Components `j` with an arc `(Cj, Cj)`.
    pub loops: Vec<usize>,
    /// Undirected edges between two non-central components.
    pub cross_edges: Vec<(usize, usize)>,
    /// Non-central components without any incident rule.
    pub idle: Vec<usize>,
}

impl StarReport {
    /// No loops and no edge avoiding C1.
    pub fn is_star(&self) -> bool {
        self.loops.is_empty() && self.cross_edges.is_empty()
    }

    /// Edge set is exactly `{{C1, Ci} : i in 2..=k}`.
    pub fn is_strict_star(&self) -> bool {
        self.is_star() && self.idle.is_empty()
    }
}

pub fn star_report(sys: &GcidSystem) -> StarReport {
    let g = control_graph(sys);
    let mut rep = StarReport::default();
    for &(a, b) in &g.edges {
        if a == b {
            rep.loops.push(a);
        } else if a != 1 {
            rep.cross_edges.push((a, b));
        }
    }
    rep.idle = (2..=sys.components).filter(|c| !g.edges.contains(&(1, *c))).collect();
    rep
}

/// Star control with C1 central: no loops and every arc has C1 at exactly
/// one endpoint. Components that carry no rules are tolerated and listed by
/// [`star_report`]; see [`star_check_strict`] for the exact edge-set test.
pub fn star_check(sys: &GcidSystem) -> bool {
    star_report(sys).is_star()
}

/// Exact edge-set test: every non-central component must also be connected.
pub fn star_check_strict(sys: &GcidSystem) -> bool {
    star_report(sys).is_strict_star()
}

/// Reverses axioms and mirrors every rule; components, labels and the
/// remaining fields are kept.
pub fn mirror_system(sys: &GcidSystem) -> GcidSystem {
    GcidSystem {
        axioms: sys.axioms.iter().map(SymbolString::reversed).collect(),
        rules: sys
            .rules
            .iter()
            .map(|r| ControlledRule { action: r.action.mirrored(), ..r.clone() })
            .collect(),
        ..sys.clone()
    }
}

/// A plain (one-component) insertion-deletion system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsDelSystem {
    pub alphabet: Vec<Symbol>,
    pub terminals: Vec<Symbol>,
    pub axioms: Vec<SymbolString>,
    pub rules: Vec<InsDelAction>,
}

impl InsDelSystem {
    /// The system as a 1-component graph-controlled system (every rule a loop on C1).
    pub fn as_gcid(&self) -> GcidSystem {
        GcidSystem {
            components: 1,
            alphabet: self.alphabet.clone(),
            terminals: self.terminals.clone(),
            axioms: self.axioms.clone(),
            initial: 1,
            finals: vec![1],
            rules: self
                .rules
                .iter()
                .enumerate()
                .map(|(i, a)| ControlledRule::new(format!("r{}", i + 1), 1, a.clone(), 1))
                .collect(),
        }
    }

    /// Recovers the rule list of a 1-component system, if it is one.
    pub fn from_gcid(sys: &GcidSystem) -> Option<Self> {
        if sys.components != 1 || sys.initial != 1 || !sys.is_final(1) {
            return None;
        }
        Some(InsDelSystem {
            alphabet: sys.alphabet.clone(),
            terminals: sys.terminals.clone(),
            axioms: sys.axioms.clone(),
            rules: sys.rules.iter().map(|r| r.action.clone()).collect(),
        })
    }
}

/// Two-component star system with the same rules in both components:
/// every rule `r` appears as `(1, r, 2)` and `(2, r, 1)`; C1 is initial and
/// both components are final.
pub fn lift_to_star(input: &InsDelSystem) -> GcidSystem {
    let mut rules = Vec::with_capacity(input.rules.len() * 2);
    for (i, a) in input.rules.iter().enumerate() {
        rules.push(ControlledRule::new(format!("c1.r{}", i + 1), 1, a.clone(), 2));
        rules.push(ControlledRule::new(format!("c2.r{}", i + 1), 2, a.clone(), 1));
    }
    GcidSystem {
        components: 2,
        alphabet: input.alphabet.clone(),
        terminals: input.terminals.clone(),
        axioms: input.axioms.clone(),
        initial: 1,
        finals: vec![1, 2],
        rules,
    }
}
