//! Compilers from grammars to star-controlled GCID systems.
//!
//! Each grammar rule labelled `r` expands into a fixed template of
//! controlled rules labelled `r<i>.<n>` (or `r_<i>.<n>` when `r` ends in a
//! digit), where `i` is the resident component. Markers are fresh symbols
//! `r#<n>`; grammar symbols never contain `#`, so they cannot collide.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::model::{is_valid_label, ActionKind, ControlledRule, GcidSystem, InsDelAction};
use crate::sgnf::{classify, special_nonterminals, validate_sgnf, RuleKind, SgnfGrammar};
use crate::symbol::{sym, Symbol, SymbolString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("grammar is not in normal form:\n{0}")]
    InvalidGrammar(String),
    #[error("emitted label {0} is not unique")]
    LabelClash(String),
}

/// The construction to compile with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Six components, size `(6;1,1,0;2,0,0)`.
    T6,
    /// Four components, size `(4;2,1,1;1,0,0)`.
    T4,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::T6 => "t6",
            Construction::T4 => "t4",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Construction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "t6" => Ok(Construction::T6),
            "t4" => Ok(Construction::T4),
            _ => Err(format!("unknown construction `{s}` (expected t6 or t4)")),
        }
    }
}

/// Name of marker `n` of rule `label`.
pub fn marker_name(label: &str, n: u8) -> String {
    format!("{label}#{n}")
}

/// Hands out `label#n` markers, remembering allocation order.
#[derive(Debug, Clone, Default)]
pub struct MarkerAllocator {
    allocated: BTreeMap<(String, u8), Symbol>,
    order: Vec<Symbol>,
}

impl MarkerAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn marker(&mut self, label: &str, n: u8) -> Symbol {
        if let Some(s) = self.allocated.get(&(label.to_string(), n)) {
            return s.clone();
        }
        let s = sym(&marker_name(label, n));
        self.allocated.insert((label.to_string(), n), s.clone());
        self.order.push(s.clone());
        s
    }

    /// Markers in allocation order.
    pub fn markers(&self) -> &[Symbol] {
        &self.order
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileOutput {
    pub system: GcidSystem,
    /// Grammar rule label and the labels emitted for it, in grammar order.
    pub label_map: Vec<(String, Vec<String>)>,
    /// Places where the emitted rules knowingly differ from the printed tables.
    pub deviations: Vec<String>,
}

impl CompileOutput {
    /// One line per grammar rule: `label -> emitted emitted ...`.
    pub fn render_map(&self) -> String {
        let mut out = String::new();
        for (l, emitted) in &self.label_map {
            out.push_str(l);
            out.push_str(" ->");
            for e in emitted {
                out.push(' ');
                out.push_str(e);
            }
            out.push('\n');
        }
        out
    }
}

/// Label emitted for template entry `id` (e.g. `"1.2"`) of grammar rule `label`.
pub fn emitted_label(label: &str, id: &str) -> String {
    if label.ends_with(|c: char| c.is_ascii_digit()) {
        format!("{label}_{id}")
    } else {
        format!("{label}{id}")
    }
}

// A template row: (id, source, kind, left, body, right, target). Tokens name
// placeholders: `X`, `Y`, `b` for the rule's symbols, `m0`..`m6` for markers;
// anything else is taken literally.
type Row = (&'static str, usize, ActionKind, &'static str, &'static str, &'static str, usize);

use ActionKind::{Deletion as D, Insertion as I};

const T6_P: &[Row] = &[
    ("1.1", 1, I, "X", "m0", "", 2),
    ("1.2", 1, I, "m0", "m1", "", 3),
    ("1.3", 1, I, "m1", "b", "", 5),
    ("1.4", 1, D, "", "m0 m1", "", 4),
    ("1.5", 1, I, "m3", "m4", "", 4),
    ("1.6", 1, I, "m3", "Y", "", 2),
    ("2.1", 2, D, "", "X", "", 1),
    ("2.2", 2, D, "", "m2 m3", "", 1),
    ("3.1", 3, I, "m1", "m5", "", 1),
    ("4.1", 4, I, "m2", "m3", "", 1),
    ("4.2", 4, D, "", "m4 m5", "", 1),
    ("5.1", 5, I, "b", "m2", "", 1),
];

const T6_Q: &[Row] = &[
    ("1.1", 1, I, "X", "m0", "", 2),
    ("2.1", 2, D, "", "X", "", 1),
    ("1.2", 1, I, "m0", "m1", "", 3),
    ("3.1", 3, I, "m1", "b", "", 1),
    ("1.3", 1, I, "m1", "Y", "", 4),
    ("4.1", 4, D, "", "m0 m1", "", 1),
];

const T6_H: &[Row] = &[("1.1", 1, I, "S'", "m0", "", 2), ("2.1", 2, D, "", "S' m0", "", 1)];

const T6_F: &[Row] = &[
    ("1.1", 1, I, "A", "m0", "", 6),
    ("6.1", 6, I, "B", "m1", "", 1),
    ("1.2", 1, D, "", "m0 B", "", 2),
    ("2.1", 2, D, "", "A m1", "", 1),
];

const T4_P: &[Row] = &[
    ("1.1", 1, I, "", "m0", "X", 2),
    ("2.1", 2, D, "", "X", "", 1),
    ("1.2", 1, I, "m0", "b Y", "", 3),
    ("3.1", 3, D, "", "m0", "", 1),
];

const T4_Q: &[Row] = &[
    ("1.1", 1, I, "", "m0", "X", 2),
    ("2.1", 2, D, "", "X", "", 1),
    ("1.2", 1, I, "m0", "Y b", "", 3),
    ("3.1", 3, D, "", "m0", "", 1),
];

const T4_H: &[Row] = &[
    ("1.1", 1, I, "", "m0 m1", "S'", 2),
    ("2.1", 2, D, "", "S'", "", 1),
    ("1.2", 1, D, "", "m1", "", 3),
    ("3.1", 3, D, "", "m0", "", 1),
];

// m0..m6 = f, f', f'', f''', f^2, f^3, f^4.
const T4_F: &[Row] = &[
    ("1.1", 1, I, "", "m1", "A", 2),
    ("1.2", 1, D, "", "A", "", 4),
    ("1.3", 1, D, "", "m0", "", 2),
    ("1.4", 1, D, "", "B", "", 4),
    ("1.5", 1, D, "", "m5", "", 3),
    ("1.6", 1, D, "", "m3", "", 3),
    ("1.7", 1, D, "", "m6", "", 2),
    ("2.1", 2, I, "A", "m0", "B", 1),
    ("2.2", 2, I, "B", "m6", "", 1),
    ("2.3", 2, D, "", "m4", "", 1),
    ("3.1", 3, D, "", "m2", "", 1),
    ("3.2", 3, D, "", "m1", "", 1),
    ("4.1", 4, I, "m1", "m2 m4", "m0", 1),
    ("4.2", 4, I, "m4", "m3 m5", "m6", 1),
];

struct Emitter {
    markers: MarkerAllocator,
    rules: Vec<ControlledRule>,
    label_map: Vec<(String, Vec<String>)>,
}

impl Emitter {
    fn new() -> Self {
        Emitter { markers: MarkerAllocator::new(), rules: Vec::new(), label_map: Vec::new() }
    }

    fn expand(&mut self, label: &str, rows: &[Row], bind: &[(&str, Symbol)]) {
        let mut emitted = Vec::new();
        for &(id, source, kind, u, body, v, target) in rows {
            let mut field = |text: &str| -> SymbolString {
                text.split_whitespace()
                    .map(|tok| {
                        if let Some((_, s)) = bind.iter().find(|(k, _)| *k == tok) {
                            return s.clone();
                        }
                        match tok.strip_prefix('m').and_then(|n| n.parse::<u8>().ok()) {
                            Some(n) => self.markers.marker(label, n),
                            None => sym(tok),
                        }
                    })
                    .collect()
            };
            let action = InsDelAction { kind, left: field(u), body: field(body), right: field(v) };
            let l = emitted_label(label, id);
            emitted.push(l.clone());
            self.rules.push(ControlledRule::new(l, source, action, target));
        }
        self.label_map.push((label.to_string(), emitted));
    }

    fn finish(
        self,
        components: usize,
        mut alphabet: Vec<Symbol>,
        terminals: Vec<Symbol>,
        start: Symbol,
        deviations: Vec<String>,
    ) -> Result<CompileOutput, CompileError> {
        let mut seen = HashSet::new();
        for r in &self.rules {
            if !seen.insert(r.label.as_str()) || !is_valid_label(&r.label) {
                return Err(CompileError::LabelClash(r.label.clone()));
            }
        }
        alphabet.extend(self.markers.markers().iter().cloned());
        let system = GcidSystem {
            components,
            alphabet,
            terminals,
            axioms: vec![SymbolString(vec![start])],
            initial: 1,
            finals: vec![1],
            rules: self.rules,
        };
        Ok(CompileOutput { system, label_map: self.label_map, deviations })
    }
}

fn checked_kinds(g: &SgnfGrammar) -> Result<Vec<RuleKind>, CompileError> {
    let rep = validate_sgnf(g);
    if !rep.is_ok() {
        return Err(CompileError::InvalidGrammar(rep.to_string()));
    }
    Ok(g.rules.iter().map(|r| classify(g, r).expect("validated")).collect())
}

fn compile_sgnf(g: &SgnfGrammar, c: Construction) -> Result<CompileOutput, CompileError> {
    let kinds = checked_kinds(g)?;
    let [a, b, cc, d] = special_nonterminals();
    let mut em = Emitter::new();
    let mut families = HashSet::new();
    for (r, kind) in g.rules.iter().zip(&kinds) {
        families.insert(kind.name());
        let (rows, bind): (&[Row], Vec<(&str, Symbol)>) = match (c, kind) {
            (Construction::T6, RuleKind::P { x, b, y }) => (T6_P, vec![("X", x.clone()), ("b", b.clone()), ("Y", y.clone())]),
            (Construction::T6, RuleKind::Q { x, y, b }) => (T6_Q, vec![("X", x.clone()), ("b", b.clone()), ("Y", y.clone())]),
            (Construction::T4, RuleKind::P { x, b, y }) => (T4_P, vec![("X", x.clone()), ("b", b.clone()), ("Y", y.clone())]),
            (Construction::T4, RuleKind::Q { x, y, b }) => (T4_Q, vec![("X", x.clone()), ("b", b.clone()), ("Y", y.clone())]),
            (Construction::T6, RuleKind::H) => (T6_H, vec![("S'", g.s_prime.clone())]),
            (Construction::T4, RuleKind::H) => (T4_H, vec![("S'", g.s_prime.clone())]),
            (Construction::T6, RuleKind::F) => (T6_F, vec![("A", a.clone()), ("B", b.clone())]),
            (Construction::T6, RuleKind::G) => (T6_F, vec![("A", cc.clone()), ("B", d.clone())]),
            (Construction::T4, RuleKind::F) => (T4_F, vec![("A", a.clone()), ("B", b.clone())]),
            (Construction::T4, RuleKind::G) => (T4_F, vec![("A", cc.clone()), ("B", d.clone())]),
        };
        em.expand(&r.label, rows, &bind);
    }
    let mut deviations = Vec::new();
    if c == Construction::T4 {
        if families.contains("p") {
            deviations.push("p-rules: 3.1 resides in C3, the target of 1.2 (printed with source 2)".to_string());
        }
        if families.contains("q") {
            deviations.push("q-rules: 3.1 resides in C3, the target of 1.2 (printed with source 2)".to_string());
        }
        if families.contains("h") {
            deviations.push("h-rules: 2.1 resides in C2, the target of 1.1 (printed with source 3)".to_string());
        }
        if families.contains("f") || families.contains("g") {
            deviations.push(
                "f/g-rules: 2.3 read as (2,(λ,f^2,λ)_D,1) and 3.1 as (3,(λ,f'',λ)_D,1) (both printed malformed)"
                    .to_string(),
            );
        }
    }
    let components = match c {
        Construction::T6 => 6,
        Construction::T4 => 4,
    };
    em.finish(components, g.symbols(), g.terminals.clone(), g.start.clone(), deviations)
}

/// Six-component simulation of an SGNF grammar.
pub fn compile_t6(g: &SgnfGrammar) -> Result<CompileOutput, CompileError> {
    compile_sgnf(g, Construction::T6)
}

/// Four-component simulation of an SGNF grammar.
pub fn compile_t4(g: &SgnfGrammar) -> Result<CompileOutput, CompileError> {
    compile_sgnf(g, Construction::T4)
}

pub fn compile(g: &SgnfGrammar, c: Construction) -> Result<CompileOutput, CompileError> {
    compile_sgnf(g, c)
}

// ---------------------------------------------------------------------------
// Right-linear grammars.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RightLinearBody {
    /// `A -> a B`.
    Step(Symbol, Symbol),
    /// `A -> λ`.
    Erase,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RightLinearRule {
    pub label: String,
    pub lhs: Symbol,
    pub body: RightLinearBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightLinearGrammar {
    pub nonterminals: Vec<Symbol>,
    pub terminals: Vec<Symbol>,
    pub start: Symbol,
    pub rules: Vec<RightLinearRule>,
}

impl RightLinearGrammar {
    pub fn validate(&self) -> Result<(), String> {
        let nt: HashSet<&Symbol> = self.nonterminals.iter().collect();
        let t: HashSet<&Symbol> = self.terminals.iter().collect();
        if let Some(s) = self.nonterminals.iter().find(|s| t.contains(s)) {
            return Err(format!("{s} is both a nonterminal and a terminal"));
        }
        if let Some(s) = self.nonterminals.iter().chain(&self.terminals).find(|s| s.is_marker_name()) {
            return Err(format!("symbol {s} uses the reserved marker namespace `#`"));
        }
        if !nt.contains(&self.start) {
            return Err(format!("start symbol {} is not a nonterminal", self.start));
        }
        let mut labels = HashSet::new();
        for r in &self.rules {
            if !is_valid_label(&r.label) || !labels.insert(r.label.as_str()) {
                return Err(format!("invalid or duplicate label {}", r.label));
            }
            if !nt.contains(&r.lhs) {
                return Err(format!("rule {}: left-hand side {} is not a nonterminal", r.label, r.lhs));
            }
            if let RightLinearBody::Step(a, b) = &r.body {
                if !t.contains(a) || !nt.contains(b) {
                    return Err(format!("rule {}: right-hand side must be a terminal then a nonterminal", r.label));
                }
            }
        }
        Ok(())
    }
}

/// What an erasing rule `A -> λ` inserts before `A`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ErasingInsert {
    /// `(λ, $, A)_I`.
    #[default]
    Marker,
    /// `(λ, a $, A)_I` for the given terminal `a`.
    TerminalMarker(Symbol),
}

/// Name of the shared marker of the regular construction.
pub const REGULAR_MARKER: &str = "$#0";

/// Label of the C2 rule erasing `$ A` for the `index`-th nonterminal.
pub fn regular_cleanup_label(index: usize) -> String {
    format!("d{}_2.1", index + 1)
}

/// Two-component simulation of a right-linear grammar, size `(2;3,0,1;2,0,0)`.
pub fn compile_regular(g: &RightLinearGrammar) -> Result<CompileOutput, CompileError> {
    compile_regular_with(g, &ErasingInsert::Marker)
}

pub fn compile_regular_with(g: &RightLinearGrammar, erase: &ErasingInsert) -> Result<CompileOutput, CompileError> {
    g.validate().map_err(CompileError::InvalidGrammar)?;
    if let ErasingInsert::TerminalMarker(a) = erase {
        if !g.terminals.contains(a) {
            return Err(CompileError::InvalidGrammar(format!("{a} is not a terminal")));
        }
    }
    let dollar = sym(REGULAR_MARKER);
    let mut rules = Vec::new();
    let mut label_map = Vec::new();
    for r in &g.rules {
        let body: SymbolString = match (&r.body, erase) {
            (RightLinearBody::Step(a, b), _) => SymbolString(vec![a.clone(), b.clone(), dollar.clone()]),
            (RightLinearBody::Erase, ErasingInsert::Marker) => SymbolString(vec![dollar.clone()]),
            (RightLinearBody::Erase, ErasingInsert::TerminalMarker(a)) => SymbolString(vec![a.clone(), dollar.clone()]),
        };
        let l = emitted_label(&r.label, "1.1");
        let action = InsDelAction::insertion(SymbolString::empty(), body, SymbolString(vec![r.lhs.clone()]));
        rules.push(ControlledRule::new(l.clone(), 1, action, 2));
        label_map.push((r.label.clone(), vec![l]));
    }
    for (i, nt) in g.nonterminals.iter().enumerate() {
        let action = InsDelAction::deletion(
            SymbolString::empty(),
            SymbolString(vec![dollar.clone(), nt.clone()]),
            SymbolString::empty(),
        );
        rules.push(ControlledRule::new(regular_cleanup_label(i), 2, action, 1));
    }
    let mut seen = HashSet::new();
    for r in &rules {
        if !seen.insert(r.label.clone()) {
            return Err(CompileError::LabelClash(r.label.clone()));
        }
    }
    let mut alphabet = g.nonterminals.clone();
    alphabet.extend(g.terminals.iter().cloned());
    alphabet.push(dollar);
    let deviations = match erase {
        ErasingInsert::Marker => vec!["erasing rules insert `$` alone (the displayed derivation), not `a $`".to_string()],
        ErasingInsert::TerminalMarker(a) => vec![format!("erasing rules insert `{a} $` before the nonterminal")],
    };
    let system = GcidSystem {
        components: 2,
        alphabet,
        terminals: g.terminals.clone(),
        axioms: vec![SymbolString(vec![g.start.clone()])],
        initial: 1,
        finals: vec![1],
        rules,
    };
    Ok(CompileOutput { system, label_map, deviations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{compute_size, star_check, validate_system, SizeMeasure};

    #[test]
    fn rule_counts() {
        assert_eq!(compile_t6(&fixtures::g1()).unwrap().system.rules.len(), 8);
        assert_eq!(compile_t4(&fixtures::g2()).unwrap().system.rules.len(), 26);
        assert_eq!(compile_t6(&fixtures::g2()).unwrap().system.rules.len(), 12 + 6 + 2 + 4);
    }

    #[test]
    fn sizes_and_star_shape() {
        for (name, g) in fixtures::sgnf_fixtures() {
            let t6 = compile_t6(&g).unwrap().system;
            let t4 = compile_t4(&g).unwrap().system;
            assert!(validate_system(&t6).is_ok(), "{name}");
            assert!(validate_system(&t4).is_ok(), "{name}");
            assert_eq!(compute_size(&t6), SizeMeasure::new(6, (1, 1, 0), (2, 0, 0)), "{name}");
            assert_eq!(compute_size(&t4), SizeMeasure::new(4, (2, 1, 1), (1, 0, 0)), "{name}");
            assert!(star_check(&t6) && star_check(&t4), "{name}");
        }
    }

    #[test]
    fn markers_are_fresh() {
        let out = compile_t6(&fixtures::g5()).unwrap();
        let g = fixtures::g5();
        let grammar: HashSet<Symbol> = g.symbols().into_iter().collect();
        let markers: Vec<&Symbol> = out.system.alphabet.iter().filter(|s| !grammar.contains(*s)).collect();
        assert!(markers.iter().all(|s| s.is_marker_name()));
        let unique: HashSet<&&Symbol> = markers.iter().collect();
        assert_eq!(unique.len(), markers.len());
    }

    #[test]
    fn compilation_is_deterministic() {
        let g = fixtures::g5();
        assert_eq!(compile_t4(&g).unwrap(), compile_t4(&g).unwrap());
    }

    #[test]
    fn label_suffixes() {
        assert_eq!(emitted_label("p", "1.1"), "p1.1");
        assert_eq!(emitted_label("r1", "1.1"), "r1_1.1");
    }

    #[test]
    fn invalid_grammar_is_rejected() {
        let mut g = fixtures::g1();
        g.rules[0].rhs = crate::symbol::word("S a");
        assert!(matches!(compile_t6(&g), Err(CompileError::InvalidGrammar(_))));
    }

    #[test]
    fn empty_grammar() {
        let mut g = fixtures::g1();
        g.rules.clear();
        let out = compile_t6(&g).unwrap();
        assert!(out.system.rules.is_empty());
        assert_eq!(out.system.axioms, vec![crate::symbol::word("S")]);
    }

    #[test]
    fn regular_size() {
        for (name, g) in fixtures::regular_fixtures() {
            let sys = compile_regular(&g).unwrap().system;
            assert_eq!(compute_size(&sys).to_string(), "(2;3,0,1;2,0,0)", "{name}");
            assert!(star_check(&sys));
        }
    }
}
