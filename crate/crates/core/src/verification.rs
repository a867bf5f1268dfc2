//! Bounded differential and property checks.

use std::collections::HashSet;
use std::fmt;

use crate::constructions::{compile, marker_name, CompileError, Construction};
use crate::engine::{enumerate_language, reachable_configurations, EngineError, SearchLimits};
use crate::model::{lift_to_star, mirror_system, GcidSystem, InsDelSystem};
use crate::sgnf::{classify, enumerate_grammar_language, sentential_forms_up_to, RuleKind, SgnfGrammar};
use crate::symbol::{sym, Symbol, SymbolString};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub construction: Construction,
    pub grammar_words: Vec<SymbolString>,
    pub system_words: Vec<SymbolString>,
    pub missing: Vec<SymbolString>,
    pub extra: Vec<SymbolString>,
    pub limits: SearchLimits,
    pub grammar_exhausted: bool,
    pub system_exhausted: bool,
    /// Reached grammar forms outside the center shape.
    pub shape_violations: Vec<SymbolString>,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.grammar_exhausted && self.system_exhausted
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LIMITS {}", self.limits)?;
        writeln!(f, "EXHAUSTED g={} s={}", self.grammar_exhausted, self.system_exhausted)?;
        for w in &self.missing {
            writeln!(f, "MISSING {}", w.render())?;
        }
        for w in &self.extra {
            writeln!(f, "EXTRA {}", w.render())?;
        }
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn difference(a: &[SymbolString], b: &[SymbolString]) -> Vec<SymbolString> {
    let b: HashSet<&SymbolString> = b.iter().collect();
    a.iter().filter(|w| !b.contains(w)).cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Compiles `g` and compares both bounded languages.
pub fn difftest(g: &SgnfGrammar, construction: Construction, limits: &SearchLimits) -> Result<DiffReport, CheckError> {
    let out = compile(g, construction)?;
    diff_against(g, &out.system, construction, limits)
}

/// Compares `g` with an already compiled system.
pub fn diff_against(
    g: &SgnfGrammar,
    sys: &GcidSystem,
    construction: Construction,
    limits: &SearchLimits,
) -> Result<DiffReport, CheckError> {
    let system = enumerate_language(sys, limits)?;
    let grammar = enumerate_grammar_language(g, limits);
    Ok(DiffReport {
        construction,
        missing: difference(&grammar.words, &system.words),
        extra: difference(&system.words, &grammar.words),
        grammar_words: grammar.words,
        system_words: system.words,
        limits: *limits,
        grammar_exhausted: grammar.exhausted,
        system_exhausted: system.exhausted,
        shape_violations: grammar.shape_violations,
    })
}

/// String homomorphism erasing a fixed symbol set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MarkerErasure {
    pub erased: HashSet<Symbol>,
    /// When set, only strings with as many symbols from the first set as from
    /// the second are checked.
    pub balance: Option<(HashSet<Symbol>, HashSet<Symbol>)>,
}

impl MarkerErasure {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(erased: impl IntoIterator<Item = Symbol>) -> Self {
        MarkerErasure { erased: erased.into_iter().collect(), balance: None }
    }

    fn erasing_rule_markers(g: &SgnfGrammar, index: u8) -> HashSet<Symbol> {
        g.rules
            .iter()
            .filter(|r| matches!(classify(g, r), Ok(RuleKind::F | RuleKind::G)))
            .map(|r| sym(&marker_name(&r.label, index)))
            .collect()
    }

    /// `{f, f', g, g'}` of the six-component construction.
    pub fn for_t6(g: &SgnfGrammar) -> Self {
        Self::new(Self::erasing_rule_markers(g, 0).into_iter().chain(Self::erasing_rule_markers(g, 1)))
    }

    /// `{f', f^4, g', g^4}` of the four-component construction, checked only
    /// where `f'`/`g'` and `f^4`/`g^4` occur equally often.
    pub fn for_t4(g: &SgnfGrammar) -> Self {
        let (primed, fourth) = (Self::erasing_rule_markers(g, 1), Self::erasing_rule_markers(g, 6));
        MarkerErasure { erased: primed.union(&fourth).cloned().collect(), balance: Some((primed, fourth)) }
    }

    pub fn for_construction(g: &SgnfGrammar, c: Construction) -> Self {
        match c {
            Construction::T6 => Self::for_t6(g),
            Construction::T4 => Self::for_t4(g),
        }
    }

    pub fn is_balanced(&self, w: &SymbolString) -> bool {
        match &self.balance {
            None => true,
            Some((a, b)) => {
                w.iter().filter(|s| a.contains(*s)).count() == w.iter().filter(|s| b.contains(*s)).count()
            }
        }
    }

    pub fn apply(&self, w: &SymbolString) -> SymbolString {
        w.iter().filter(|s| !self.erased.contains(*s)).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessReport {
    /// Checked C1 strings whose image is not a reachable grammar form.
    pub violations: Vec<SymbolString>,
    /// Number of C1 strings that were checked.
    pub checked: usize,
    pub system_exhausted: bool,
    pub grammar_exhausted: bool,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CHECKED {}", self.checked)?;
        writeln!(f, "EXHAUSTED g={} s={}", self.grammar_exhausted, self.system_exhausted)?;
        for v in &self.violations {
            writeln!(f, "VIOLATION {}", v.render())?;
        }
        writeln!(f, "{}", if self.is_sound() { "PASS" } else { "FAIL" })
    }
}

/// Symbols of `sys` that are not grammar symbols.
pub fn system_markers(g: &SgnfGrammar, sys: &GcidSystem) -> HashSet<Symbol> {
    let grammar: HashSet<Symbol> = g.symbols().into_iter().collect();
    sys.alphabet.iter().filter(|s| !grammar.contains(*s)).cloned().collect()
}

/// Every reachable C1 string carrying only erasable markers, balanced where
/// the erasure asks for it, must map to a reachable grammar form.
pub fn soundness_check(
    g: &SgnfGrammar,
    sys: &GcidSystem,
    erasure: &MarkerErasure,
    limits: &SearchLimits,
) -> Result<SoundnessReport, EngineError> {
    let markers = system_markers(g, sys);
    let reach = reachable_configurations(sys, limits)?;
    let forms = sentential_forms_up_to(g, limits);
    let form_set = forms.form_set();
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    let mut checked = 0;
    for cfg in &reach.configurations {
        if cfg.component != 1 {
            continue;
        }
        if cfg.string.iter().any(|s| markers.contains(s) && !erasure.erased.contains(s))
            || !erasure.is_balanced(&cfg.string)
        {
            continue;
        }
        checked += 1;
        let image = erasure.apply(&cfg.string);
        if !form_set.contains(&image) && seen.insert(cfg.string.clone()) {
            violations.push(cfg.string.clone());
        }
    }
    Ok(SoundnessReport {
        violations,
        checked,
        system_exhausted: reach.exhausted,
        grammar_exhausted: forms.exhausted,
    })
}

/// C1 strings where the `f`/`g` counts differ from the `f'`/`g'` counts
/// (markers with indices 0 and 1 of the erasing rules).
pub fn balance_violations(
    g: &SgnfGrammar,
    sys: &GcidSystem,
    limits: &SearchLimits,
) -> Result<Vec<SymbolString>, EngineError> {
    let mut plain = HashSet::new();
    let mut primed = HashSet::new();
    for r in &g.rules {
        if matches!(classify(g, r), Ok(RuleKind::F | RuleKind::G)) {
            plain.insert(sym(&marker_name(&r.label, 0)));
            primed.insert(sym(&marker_name(&r.label, 1)));
        }
    }
    let reach = reachable_configurations(sys, limits)?;
    Ok(reach
        .configurations
        .into_iter()
        .filter(|c| c.component == 1)
        .filter(|c| {
            let a = c.string.iter().filter(|s| plain.contains(*s)).count();
            let b = c.string.iter().filter(|s| primed.contains(*s)).count();
            a != b
        })
        .map(|c| c.string)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub left: Vec<SymbolString>,
    pub right: Vec<SymbolString>,
    pub left_exhausted: bool,
    pub right_exhausted: bool,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.left == self.right && self.left_exhausted == self.right_exhausted
    }
}

/// `enumerate(mirror(sys))` against the reversals of `enumerate(sys)`.
pub fn mirror_property_check(sys: &GcidSystem, limits: &SearchLimits) -> Result<EquivalenceReport, EngineError> {
    let base = enumerate_language(sys, limits)?;
    let mirrored = enumerate_language(&mirror_system(sys), limits)?;
    let mut reversed: Vec<SymbolString> = base.words.iter().map(SymbolString::reversed).collect();
    reversed.sort_by(crate::symbol::shortlex);
    Ok(EquivalenceReport {
        left: reversed,
        right: mirrored.words,
        left_exhausted: base.exhausted,
        right_exhausted: mirrored.exhausted,
    })
}

/// The one-component system against its two-component lift.
pub fn lift_equivalence_check(input: &InsDelSystem, limits: &SearchLimits) -> Result<EquivalenceReport, EngineError> {
    let plain = enumerate_language(&input.as_gcid(), limits)?;
    let lifted = enumerate_language(&lift_to_star(input), limits)?;
    Ok(EquivalenceReport {
        left: plain.words,
        right: lifted.words,
        left_exhausted: plain.exhausted,
        right_exhausted: lifted.exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symbol::word;

    fn words(ws: &[&str]) -> Vec<SymbolString> {
        ws.iter().map(|w| word(w)).collect()
    }

    #[test]
    fn small_difftests() {
        let r = difftest(&fixtures::g1(), Construction::T6, &SearchLimits::new(3)).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.system_words, words(&["a"]));
        // The compiled G4 space is not exhaustible, so only the bounded sets are compared.
        let r = difftest(&fixtures::g4(), Construction::T4, &SearchLimits::new(2).with_states(200_000)).unwrap();
        assert!(r.missing.is_empty() && r.extra.is_empty(), "{r}");
        assert!(r.grammar_exhausted);
        assert_eq!(r.grammar_words, words(&["<empty>"]));
        assert_eq!(r.system_words, words(&["<empty>"]));
    }

    #[test]
    fn report_format() {
        let r = difftest(&fixtures::g1(), Construction::T6, &SearchLimits::new(3)).unwrap();
        let text = r.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("LIMITS max-len=3 "));
        assert_eq!(&lines[1..], &["EXHAUSTED g=true s=true", "PASS"]);
    }

    #[test]
    fn erasure_is_a_homomorphism() {
        let mu = MarkerErasure::for_t6(&fixtures::g2());
        assert_eq!(mu.apply(&word("A f#0 B f#1")), word("A B"));
        assert_eq!(mu.apply(&SymbolString::empty()), SymbolString::empty());
        let (x, y) = (word("A f#0"), word("f#1 B"));
        assert_eq!(mu.apply(&x.concat(&y)), mu.apply(&x).concat(&mu.apply(&y)));
    }

    #[test]
    fn t4_erasure_requires_balance() {
        let mu = MarkerErasure::for_t4(&fixtures::g2());
        assert!(!mu.is_balanced(&word("f#1 A")));
        assert!(mu.is_balanced(&word("f#1 A B f#6")));
        assert!(MarkerErasure::for_t6(&fixtures::g2()).is_balanced(&word("f#0 A")));
    }

    #[test]
    fn mirror_of_anbn() {
        let r = mirror_property_check(&fixtures::anbn_system(), &SearchLimits::new(4)).unwrap();
        assert!(r.holds());
        assert_eq!(r.right, words(&["<empty>", "b a", "b b a a"]));
    }

    #[test]
    fn lift_of_free_insertion() {
        let input = InsDelSystem::from_gcid(&fixtures::free_a_system()).unwrap();
        let r = lift_equivalence_check(&input, &SearchLimits::new(3)).unwrap();
        assert!(r.holds());
        assert_eq!(r.right, words(&["<empty>", "a", "a a", "a a a"]));
    }
}
