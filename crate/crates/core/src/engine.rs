//! Bounded derivation semantics.
//!
//! `(w)_i => (w')_j` whenever a rule `l: (i, r, j)` applies to `w` and yields
//! `w'`. The search here is breadth-first over configurations with a
//! canonical successor order (rule label, then site position), so witness
//! traces and enumeration results are reproducible. Frontier expansion runs
//! on rayon when the `parallel` feature is enabled; each level is merged
//! back sequentially in frontier order, so parallel and sequential runs
//! produce identical results.

use std::collections::HashMap;
use std::fmt;

use indexmap::map::Entry;
use indexmap::IndexMap;
use thiserror::Error;

use crate::model::{ActionKind, Configuration, GcidSystem, InsDelAction};
use crate::prune::{DeadCheck, RuleView};
use crate::symbol::{shortlex, Symbol, SymbolString};

/// Extra room for intermediate strings when only a word bound is given.
pub const DEFAULT_CONFIG_SLACK: usize = 8;
pub const DEFAULT_MAX_STEPS: usize = 200;
pub const DEFAULT_MAX_STATES: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchLimits {
    /// Longest collected word.
    pub max_word_len: usize,
    /// Longest intermediate string; longer configurations are pruned.
    pub max_config_len: usize,
    /// Derivation depth cap.
    pub max_steps: usize,
    /// Visited-configuration cap.
    pub max_states: usize,
    /// Skip configurations that can no longer yield a word (word searches only).
    pub prune_dead: bool,
}

impl SearchLimits {
    /// Word bound `max_word_len` with the default intermediate slack and caps.
    pub fn new(max_word_len: usize) -> Self {
        SearchLimits {
            max_word_len,
            max_config_len: max_word_len + DEFAULT_CONFIG_SLACK,
            max_steps: DEFAULT_MAX_STEPS,
            max_states: DEFAULT_MAX_STATES,
            prune_dead: true,
        }
    }

    pub fn with_config_len(mut self, n: usize) -> Self {
        self.max_config_len = n;
        self
    }

    pub fn with_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }

    pub fn with_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }

    pub fn with_prune(mut self, on: bool) -> Self {
        self.prune_dead = on;
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.max_config_len < self.max_word_len {
            return Err(EngineError::InvalidLimits(format!(
                "max-config-len ({}) is below max-len ({})",
                self.max_config_len, self.max_word_len
            )));
        }
        if self.max_config_len == 0 || self.max_steps == 0 || self.max_states == 0 {
            return Err(EngineError::InvalidLimits("all caps must be positive".into()));
        }
        Ok(())
    }
}

impl fmt::Display for SearchLimits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max-len={} max-config-len={} max-steps={} max-states={} prune={}",
            self.max_word_len,
            self.max_config_len,
            self.max_steps,
            self.max_states,
            if self.prune_dead { "on" } else { "off" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid limits: {0}")]
    InvalidLimits(String),
    #[error("no rule labelled `{0}`")]
    UnknownRule(String),
    #[error("rule {label} resides in C{resident}, not in C{component}")]
    WrongComponent { label: String, resident: usize, component: usize },
    #[error("rule {label} is not applicable at position {position}")]
    NotApplicable { label: String, position: usize },
    #[error("component {0} out of range")]
    ComponentOutOfRange(usize),
    #[error("symbol `{0}` is not a terminal")]
    NonTerminalInWord(Symbol),
    #[error("too many distinct symbols for the search index")]
    AlphabetTooLarge,
}

/// A rule together with the position it applies at.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub rule_label: String,
    pub position: usize,
}

/// `label @ position`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceStep {
    pub label: String,
    pub position: usize,
}

impl TraceStep {
    pub fn new(label: impl Into<String>, position: usize) -> Self {
        TraceStep { label: label.into(), position }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.label, self.position)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub start: Configuration,
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn labels(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.label.as_str()).collect()
    }
}

/// Execution strategy for frontier expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is on; sequential otherwise.
    #[default]
    Parallel,
}

// ---------------------------------------------------------------------------
// Site matching, shared by the symbol-level API and the indexed search.

fn window_is<T: PartialEq>(w: &[T], start: usize, pat: &[T]) -> bool {
    w.get(start..start + pat.len()).is_some_and(|s| s == pat)
}

fn is_site<T: PartialEq>(kind: ActionKind, u: &[T], body: &[T], v: &[T], w: &[T], p: usize) -> bool {
    if p < u.len() || !window_is(w, p - u.len(), u) {
        return false;
    }
    match kind {
        ActionKind::Insertion => window_is(w, p, v),
        ActionKind::Deletion => window_is(w, p, body) && window_is(w, p + body.len(), v),
    }
}

fn site_positions<T: PartialEq>(kind: ActionKind, u: &[T], body: &[T], v: &[T], w: &[T]) -> Vec<usize> {
    (0..=w.len()).filter(|&p| is_site(kind, u, body, v, w, p)).collect()
}

fn splice<T: Clone>(kind: ActionKind, body: &[T], w: &[T], p: usize) -> Vec<T> {
    let out: Vec<T> = match kind {
        ActionKind::Insertion => {
            let mut out = Vec::with_capacity(w.len() + body.len());
            out.extend_from_slice(&w[..p]);
            out.extend_from_slice(body);
            out.extend_from_slice(&w[p..]);
            out
        }
        ActionKind::Deletion => {
            let mut out = Vec::with_capacity(w.len() - body.len());
            out.extend_from_slice(&w[..p]);
            out.extend_from_slice(&w[p + body.len()..]);
            out
        }
    };
    debug_assert_eq!(
        out.len(),
        match kind {
            ActionKind::Insertion => w.len() + body.len(),
            ActionKind::Deletion => w.len() - body.len(),
        }
    );
    out
}

/// Positions where `action` applies to `w`, ascending.
pub fn action_sites(action: &InsDelAction, w: &SymbolString) -> Vec<usize> {
    site_positions(action.kind, action.left.symbols(), action.body.symbols(), action.right.symbols(), w.symbols())
}

/// Applies `action` to `w` at `position`, if that is a site.
pub fn apply_action(action: &InsDelAction, w: &SymbolString, position: usize) -> Option<SymbolString> {
    let (u, b, v) = (action.left.symbols(), action.body.symbols(), action.right.symbols());
    if position > w.len() || !is_site(action.kind, u, b, v, w.symbols(), position) {
        return None;
    }
    Some(SymbolString(splice(action.kind, b, w.symbols(), position)))
}

// ---------------------------------------------------------------------------
// Symbol-level single steps.

pub fn applicable_sites(sys: &GcidSystem, cfg: &Configuration) -> Vec<Site> {
    let mut out = Vec::new();
    for r in sys.rules_in(cfg.component) {
        for p in action_sites(&r.action, &cfg.string) {
            out.push(Site { rule_label: r.label.clone(), position: p });
        }
    }
    out
}

pub fn apply_at(sys: &GcidSystem, cfg: &Configuration, site: &Site) -> Result<Configuration, EngineError> {
    let rule = sys.rule(&site.rule_label).ok_or_else(|| EngineError::UnknownRule(site.rule_label.clone()))?;
    if rule.source != cfg.component {
        return Err(EngineError::WrongComponent {
            label: rule.label.clone(),
            resident: rule.source,
            component: cfg.component,
        });
    }
    let string = apply_action(&rule.action, &cfg.string, site.position).ok_or_else(|| EngineError::NotApplicable {
        label: rule.label.clone(),
        position: site.position,
    })?;
    Ok(Configuration::new(string, rule.target))
}

/// One successor per applicable site, in site order (duplicates kept).
pub fn successors(sys: &GcidSystem, cfg: &Configuration) -> Vec<(Site, Configuration)> {
    applicable_sites(sys, cfg)
        .into_iter()
        .map(|site| {
            let next = apply_at(sys, cfg, &site).expect("enumerated site applies");
            (site, next)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {} ({}): {reason}", .index + 1, .step)]
pub struct ReplayError {
    /// 0-based index of the failing step.
    pub index: usize,
    pub step: TraceStep,
    pub reason: EngineError,
}

/// Folds the steps over the start configuration, failing at the first
/// inapplicable one.
pub fn replay_trace(sys: &GcidSystem, trace: &DerivationTrace) -> Result<Configuration, ReplayError> {
    replay_with_history(sys, trace).map(|mut h| h.pop().expect("history holds the start"))
}

/// Like [`replay_trace`] but returns every visited configuration, start first.
pub fn replay_with_history(sys: &GcidSystem, trace: &DerivationTrace) -> Result<Vec<Configuration>, ReplayError> {
    let mut history = vec![trace.start.clone()];
    for (index, step) in trace.steps.iter().enumerate() {
        let cur = history.last().expect("non-empty");
        let site = Site { rule_label: step.label.clone(), position: step.position };
        let next = apply_at(sys, cur, &site).map_err(|reason| ReplayError { index, step: step.clone(), reason })?;
        history.push(next);
    }
    Ok(history)
}

// ---------------------------------------------------------------------------
// Indexed representation for search.

type Tok = u16;
type Key = (Box<[Tok]>, u16);

struct IndexedRule {
    kind: ActionKind,
    left: Vec<Tok>,
    body: Vec<Tok>,
    right: Vec<Tok>,
    target: u16,
    rule: usize,
}

struct Index<'a> {
    sys: &'a GcidSystem,
    symbols: Vec<Symbol>,
    ids: HashMap<Symbol, Tok>,
    /// `by_component[c]` lists rules resident in `c`, sorted by label.
    by_component: Vec<Vec<IndexedRule>>,
    terminal: Vec<bool>,
    finals: Vec<bool>,
    dead: Option<DeadCheck>,
}

impl<'a> Index<'a> {
    fn new(sys: &'a GcidSystem) -> Result<Self, EngineError> {
        let mut idx = Index {
            sys,
            symbols: Vec::new(),
            ids: HashMap::new(),
            by_component: (0..=sys.components).map(|_| Vec::new()).collect(),
            terminal: Vec::new(),
            finals: vec![false; sys.components + 1],
            dead: None,
        };
        for s in &sys.alphabet {
            idx.intern(s)?;
        }
        for f in &sys.finals {
            if let Some(slot) = idx.finals.get_mut(*f) {
                *slot = true;
            }
        }
        let mut order: Vec<usize> = (0..sys.rules.len()).collect();
        order.sort_by(|&a, &b| sys.rules[a].label.cmp(&sys.rules[b].label));
        for ri in order {
            let r = &sys.rules[ri];
            if r.source == 0 || r.source > sys.components {
                continue;
            }
            let indexed = IndexedRule {
                kind: r.action.kind,
                left: idx.encode(&r.action.left)?,
                body: idx.encode(&r.action.body)?,
                right: idx.encode(&r.action.right)?,
                target: u16::try_from(r.target).map_err(|_| EngineError::ComponentOutOfRange(r.target))?,
                rule: ri,
            };
            idx.by_component[r.source].push(indexed);
        }
        Ok(idx)
    }

    /// Turns on dead-configuration pruning for word searches.
    fn prune_for(&mut self, limits: &SearchLimits, longest_word: usize) {
        if !limits.prune_dead {
            return;
        }
        let rules = self.by_component.iter().flatten().map(|r| RuleView {
            kind: r.kind,
            left: &r.left,
            body: &r.body,
            right: &r.right,
        });
        self.dead = Some(DeadCheck::new(self.terminal.clone(), rules, longest_word));
    }

    fn is_dead(&self, w: &[Tok]) -> bool {
        self.dead.as_ref().is_some_and(|d| d.is_dead(w))
    }

    fn intern(&mut self, s: &Symbol) -> Result<Tok, EngineError> {
        if let Some(&t) = self.ids.get(s) {
            return Ok(t);
        }
        let t = Tok::try_from(self.symbols.len()).map_err(|_| EngineError::AlphabetTooLarge)?;
        self.ids.insert(s.clone(), t);
        self.symbols.push(s.clone());
        self.terminal.push(self.sys.terminals.contains(s));
        Ok(t)
    }

    fn encode(&mut self, w: &SymbolString) -> Result<Vec<Tok>, EngineError> {
        w.iter().map(|s| self.intern(s)).collect()
    }

    fn decode(&self, w: &[Tok]) -> SymbolString {
        w.iter().map(|&t| self.symbols[t as usize].clone()).collect()
    }

    fn key(&mut self, cfg: &Configuration) -> Result<Key, EngineError> {
        if cfg.component == 0 || cfg.component > self.sys.components {
            return Err(EngineError::ComponentOutOfRange(cfg.component));
        }
        Ok((self.encode(&cfg.string)?.into_boxed_slice(), cfg.component as u16))
    }

    fn is_final(&self, comp: u16) -> bool {
        self.finals[comp as usize]
    }

    fn is_terminal(&self, w: &[Tok]) -> bool {
        w.iter().all(|&t| self.terminal[t as usize])
    }

    /// Successors within the length cap, in canonical order.
    fn expand(&self, key: &Key, cap: usize) -> Vec<(u32, u32, Key)> {
        let (w, comp) = key;
        let mut out = Vec::new();
        for r in &self.by_component[*comp as usize] {
            if r.kind == ActionKind::Insertion && w.len() + r.body.len() > cap {
                continue;
            }
            for p in site_positions(r.kind, &r.left, &r.body, &r.right, w) {
                let next = splice(r.kind, &r.body, w, p);
                if next.len() <= cap && !self.is_dead(&next) {
                    out.push((r.rule as u32, p as u32, (next.into_boxed_slice(), r.target)));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
struct Node {
    parent: u32,
    rule: u32,
    position: u32,
}

const ROOT: u32 = u32::MAX;
const CHUNK: usize = 8192;

struct Exploration {
    states: IndexMap<Key, Node>,
    exhausted: bool,
    hit: Option<usize>,
}

fn expand_chunk(idx: &Index<'_>, chunk: &[(usize, Key)], cap: usize, exec: Exec) -> Vec<Vec<(u32, u32, Key)>> {
    #[cfg(feature = "parallel")]
    {
        if exec == Exec::Parallel && chunk.len() > 1 {
            use rayon::prelude::*;
            return chunk.par_iter().map(|(_, k)| idx.expand(k, cap)).collect();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = exec;
    chunk.iter().map(|(_, k)| idx.expand(k, cap)).collect()
}

/// Level-synchronous BFS. `stop` is consulted on every newly discovered
/// configuration; returning true ends the search with that state as `hit`.
fn explore(
    idx: &Index<'_>,
    starts: Vec<Key>,
    limits: &SearchLimits,
    exec: Exec,
    mut stop: impl FnMut(&Key) -> bool,
) -> Exploration {
    let cap = limits.max_config_len;
    let mut states: IndexMap<Key, Node> = IndexMap::new();
    let mut truncated = false;
    let mut frontier = Vec::new();
    for k in starts {
        if k.0.len() > cap || idx.is_dead(&k.0) {
            continue;
        }
        if let Entry::Vacant(e) = states.entry(k) {
            if e.index() >= limits.max_states {
                truncated = true;
                continue;
            }
            let id = e.index();
            let hit = stop(e.key());
            e.insert(Node { parent: ROOT, rule: 0, position: 0 });
            if hit {
                return Exploration { states, exhausted: false, hit: Some(id) };
            }
            frontier.push(id);
        }
    }
    let mut depth = 0usize;
    loop {
        if frontier.is_empty() {
            return Exploration { states, exhausted: !truncated, hit: None };
        }
        if depth >= limits.max_steps {
            // Exhausted only if the cut-off level has nowhere new to go.
            let frontier_keys: Vec<(usize, Key)> =
                frontier.iter().map(|&id| (id, states.get_index(id).unwrap().0.clone())).collect();
            let mut grows = false;
            for chunk in frontier_keys.chunks(CHUNK) {
                let succ = expand_chunk(idx, chunk, cap, exec);
                if succ.iter().flatten().any(|(_, _, k)| !states.contains_key(k)) {
                    grows = true;
                    break;
                }
            }
            return Exploration { states, exhausted: !grows && !truncated, hit: None };
        }
        let mut next = Vec::new();
        for ids in frontier.chunks(CHUNK) {
            let chunk: Vec<(usize, Key)> =
                ids.iter().map(|&id| (id, states.get_index(id).unwrap().0.clone())).collect();
            let succ = expand_chunk(idx, &chunk, cap, exec);
            for ((parent, _), list) in chunk.iter().zip(succ) {
                for (rule, position, key) in list {
                    if let Entry::Vacant(e) = states.entry(key) {
                        if e.index() >= limits.max_states {
                            truncated = true;
                            continue;
                        }
                        let id = e.index();
                        let hit = stop(e.key());
                        e.insert(Node { parent: *parent as u32, rule, position });
                        if hit {
                            return Exploration { states, exhausted: false, hit: Some(id) };
                        }
                        next.push(id);
                    }
                }
            }
        }
        frontier = next;
        depth += 1;
    }
}

fn trace_to(idx: &Index<'_>, exp: &Exploration, mut id: usize) -> DerivationTrace {
    let mut steps = Vec::new();
    loop {
        let (key, node) = exp.states.get_index(id).unwrap();
        if node.parent == ROOT {
            steps.reverse();
            return DerivationTrace {
                start: Configuration::new(idx.decode(&key.0), key.1 as usize),
                steps,
            };
        }
        steps.push(TraceStep::new(idx.sys.rules[node.rule as usize].label.clone(), node.position as usize));
        id = node.parent as usize;
    }
}

fn axiom_keys(idx: &mut Index<'_>) -> Result<Vec<Key>, EngineError> {
    let sys = idx.sys;
    sys.axioms
        .iter()
        .map(|a| idx.key(&Configuration::new(a.clone(), sys.initial)))
        .collect()
}

// ---------------------------------------------------------------------------
// Search entry points.

/// Words collected by a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSample {
    /// Shortlex-ordered, duplicate-free.
    pub words: Vec<SymbolString>,
    /// The search space within the length cap was fully explored.
    pub exhausted: bool,
    pub states_visited: usize,
    pub limits: SearchLimits,
}

pub fn enumerate_language(sys: &GcidSystem, limits: &SearchLimits) -> Result<LanguageSample, EngineError> {
    enumerate_language_with(sys, limits, Exec::default())
}

pub fn enumerate_language_with(
    sys: &GcidSystem,
    limits: &SearchLimits,
    exec: Exec,
) -> Result<LanguageSample, EngineError> {
    limits.validate()?;
    let mut idx = Index::new(sys)?;
    let starts = axiom_keys(&mut idx)?;
    idx.prune_for(limits, limits.max_word_len);
    let exp = explore(&idx, starts, limits, exec, |_| false);
    let mut words: Vec<SymbolString> = exp
        .states
        .keys()
        .filter(|(w, c)| w.len() <= limits.max_word_len && idx.is_final(*c) && idx.is_terminal(w))
        .map(|(w, _)| idx.decode(w))
        .collect();
    words.sort_by(shortlex);
    words.dedup();
    Ok(LanguageSample { words, exhausted: exp.exhausted, states_visited: exp.states.len(), limits: *limits })
}

/// Every configuration reached by a bounded search, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachable {
    pub configurations: Vec<Configuration>,
    pub exhausted: bool,
}

pub fn reachable_configurations(sys: &GcidSystem, limits: &SearchLimits) -> Result<Reachable, EngineError> {
    reachable_configurations_with(sys, limits, Exec::default())
}

pub fn reachable_configurations_with(
    sys: &GcidSystem,
    limits: &SearchLimits,
    exec: Exec,
) -> Result<Reachable, EngineError> {
    limits.validate()?;
    let mut idx = Index::new(sys)?;
    let starts = axiom_keys(&mut idx)?;
    let exp = explore(&idx, starts, limits, exec, |_| false);
    let configurations = exp
        .states
        .keys()
        .map(|(w, c)| Configuration::new(idx.decode(w), *c as usize))
        .collect();
    Ok(Reachable { configurations, exhausted: exp.exhausted })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Yes(DerivationTrace),
    /// Not found within the limits; says nothing about the unbounded language.
    NoWithinBounds { exhausted: bool },
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }

    pub fn trace(&self) -> Option<&DerivationTrace> {
        match self {
            Membership::Yes(t) => Some(t),
            Membership::NoWithinBounds { .. } => None,
        }
    }
}

/// Searches for `w` in a final component; returns the first witness in BFS order.
pub fn membership(sys: &GcidSystem, w: &SymbolString, limits: &SearchLimits) -> Result<Membership, EngineError> {
    membership_with(sys, w, limits, Exec::default())
}

pub fn membership_with(
    sys: &GcidSystem,
    w: &SymbolString,
    limits: &SearchLimits,
    exec: Exec,
) -> Result<Membership, EngineError> {
    limits.validate()?;
    if let Some(bad) = w.iter().find(|s| !sys.terminals.contains(s)) {
        return Err(EngineError::NonTerminalInWord(bad.clone()));
    }
    let mut idx = Index::new(sys)?;
    let starts = axiom_keys(&mut idx)?;
    let target = idx.encode(w)?;
    idx.prune_for(limits, target.len());
    let finals = idx.finals.clone();
    let exp = explore(&idx, starts, limits, exec, |(s, c)| finals[*c as usize] && **s == *target);
    Ok(match exp.hit {
        Some(id) => Membership::Yes(trace_to(&idx, &exp, id)),
        None => Membership::NoWithinBounds { exhausted: exp.exhausted },
    })
}

/// A witness trace for reaching `cfg` from an axiom, if one exists within limits.
pub fn find_configuration(
    sys: &GcidSystem,
    cfg: &Configuration,
    limits: &SearchLimits,
) -> Result<Option<DerivationTrace>, EngineError> {
    limits.validate()?;
    let mut idx = Index::new(sys)?;
    let starts = axiom_keys(&mut idx)?;
    let target = idx.key(cfg)?;
    let exp = explore(&idx, starts, limits, Exec::default(), |k| *k == target);
    Ok(exp.hit.map(|id| trace_to(&idx, &exp, id)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::ControlledRule;
    use crate::symbol::{sym, word};

    fn cfg(w: &str, c: usize) -> Configuration {
        Configuration::new(word(w), c)
    }

    fn site(l: &str, p: usize) -> Site {
        Site { rule_label: l.into(), position: p }
    }

    fn one_rule(action: InsDelAction) -> GcidSystem {
        GcidSystem {
            components: 2,
            alphabet: vec![sym("a"), sym("b")],
            terminals: vec![sym("a"), sym("b")],
            axioms: vec![word("")],
            initial: 1,
            finals: vec![1],
            rules: vec![ControlledRule::new("r", 1, action, 2)],
        }
    }

    #[test]
    fn copy_sites_on_axiom() {
        let sites = applicable_sites(&fixtures::copy_system(), &cfg("A B", 1));
        assert_eq!(sites, vec![site("r1.1", 0), site("r1.2", 0), site("r1.3", 1)]);
    }

    #[test]
    fn left_context_insertion_has_two_sites_on_aa() {
        let sys = one_rule(InsDelAction::insertion(word("a"), word("b"), word("")));
        let sites = applicable_sites(&sys, &cfg("a a", 1));
        assert_eq!(sites, vec![site("r", 1), site("r", 2)]);
        assert!(applicable_sites(&sys, &cfg("a a", 2)).is_empty());
    }

    #[test]
    fn context_free_insertion_into_empty() {
        let sys = one_rule(InsDelAction::insertion(word(""), word("a"), word("")));
        assert_eq!(apply_at(&sys, &cfg("", 1), &site("r", 0)).unwrap(), cfg("a", 2));
    }

    #[test]
    fn apply_rejects_inapplicable_site() {
        let sys = fixtures::copy_system();
        let err = apply_at(&sys, &cfg("A B", 1), &site("r1.3", 0)).unwrap_err();
        assert!(matches!(err, EngineError::NotApplicable { .. }));
        let err = apply_at(&sys, &cfg("A B", 1), &site("r2.1", 1)).unwrap_err();
        assert!(matches!(err, EngineError::WrongComponent { .. }));
    }

    #[test]
    fn copy_first_step() {
        let sys = fixtures::copy_system();
        assert_eq!(apply_at(&sys, &cfg("A B", 1), &site("r1.1", 0)).unwrap(), cfg("a A B", 2));
    }

    #[test]
    fn overlapping_deletions_are_distinct_sites() {
        let mut sys = one_rule(InsDelAction::deletion(word(""), word("a a"), word("")));
        sys.axioms = vec![word("a a a")];
        assert_eq!(applicable_sites(&sys, &cfg("a a a", 1)), vec![site("r", 0), site("r", 1)]);
    }

    #[test]
    fn anbn_successors() {
        let succ: Vec<_> = successors(&fixtures::anbn_system(), &cfg("A a B b", 1));
        let got: Vec<_> = succ.iter().map(|(s, c)| (s.rule_label.as_str(), c.clone())).collect();
        assert_eq!(got, vec![("r1.1", cfg("A a a B b", 2)), ("r1.2", cfg("a B b", 2))]);
        assert!(successors(&fixtures::anbn_system(), &cfg("a b", 1)).is_empty());
    }

    #[test]
    fn trivial_language() {
        let mut sys = one_rule(InsDelAction::insertion(word(""), word("a"), word("")));
        sys.rules.clear();
        sys.axioms = vec![word("a")];
        let got = enumerate_language(&sys, &SearchLimits::new(3)).unwrap();
        assert_eq!(got.words, vec![word("a")]);
        assert!(got.exhausted);
    }

    #[test]
    fn limits_are_validated() {
        let sys = fixtures::anbn_system();
        let bad = SearchLimits::new(4).with_config_len(3);
        assert!(matches!(enumerate_language(&sys, &bad), Err(EngineError::InvalidLimits(_))));
        assert!(enumerate_language(&sys, &SearchLimits::new(4).with_steps(0)).is_err());
    }

    #[test]
    fn membership_rejects_nonterminal_words() {
        let err = membership(&fixtures::copy_system(), &word("a A"), &SearchLimits::new(4)).unwrap_err();
        assert_eq!(err, EngineError::NonTerminalInWord(sym("A")));
    }

    #[test]
    fn empty_trace_replays_to_start() {
        let t = DerivationTrace { start: cfg("A B", 1), steps: vec![] };
        assert_eq!(replay_trace(&fixtures::copy_system(), &t).unwrap(), cfg("A B", 1));
    }

    #[test]
    fn replay_reports_failing_index() {
        let t = DerivationTrace {
            start: cfg("A B", 1),
            steps: vec![TraceStep::new("r1.1", 0), TraceStep::new("r2.1", 0)],
        };
        let err = replay_trace(&fixtures::copy_system(), &t).unwrap_err();
        assert_eq!(err.index, 1);
        assert!(err.to_string().starts_with("step 2 (r2.1 @ 0)"));
    }

    #[test]
    fn step_cap_flags_non_exhaustion() {
        let limits = SearchLimits::new(4).with_config_len(8).with_steps(3);
        let got = enumerate_language(&fixtures::anbn_system(), &limits).unwrap();
        assert!(!got.exhausted);
        let limits = SearchLimits::new(4).with_config_len(8).with_states(3);
        assert!(!enumerate_language(&fixtures::anbn_system(), &limits).unwrap().exhausted);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let limits = SearchLimits::new(6).with_config_len(10);
        let sys = fixtures::copy_system();
        let a = enumerate_language_with(&sys, &limits, Exec::Sequential).unwrap();
        let b = enumerate_language_with(&sys, &limits, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let w = word("a b a b");
        assert_eq!(
            membership_with(&sys, &w, &limits, Exec::Sequential).unwrap(),
            membership_with(&sys, &w, &limits, Exec::Parallel).unwrap()
        );
    }
}
