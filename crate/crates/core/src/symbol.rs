//! Symbols and token strings.
//!
//! A symbol is a whitespace-free token, so names such as `p''`, `f^4` or `S'`
//! are single symbols. Strings are token sequences; the empty sequence is the
//! empty word.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Rendering of the empty word in line-oriented outputs.
pub const EMPTY_WORD: &str = "<empty>";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("empty symbol name")]
    Empty,
    #[error("symbol `{0}` contains whitespace")]
    Whitespace(String),
    #[error("symbol `{0}` uses reserved punctuation")]
    Reserved(String),
}

/// A single alphabet symbol.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    /// Builds a symbol, rejecting whitespace, `|`, `->`, a lone `.`, and a
    /// leading `#` (which starts a comment in the text formats).
    pub fn new(name: &str) -> Result<Self, SymbolError> {
        if name.is_empty() {
            return Err(SymbolError::Empty);
        }
        if name.chars().any(char::is_whitespace) {
            return Err(SymbolError::Whitespace(name.to_string()));
        }
        if name == "." || name == EMPTY_WORD || name.contains('|') || name.contains("->") || name.starts_with('#') {
            return Err(SymbolError::Reserved(name.to_string()));
        }
        Ok(Symbol(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for names in the compiler marker namespace (`<label>#<n>`).
    pub fn is_marker_name(&self) -> bool {
        self.0.contains('#')
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Builds a symbol from a literal known to be valid.
///
/// Panics on invalid names; meant for fixtures and tests.
pub fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap_or_else(|e| panic!("invalid symbol literal: {e}"))
}

/// An ordered sequence of symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SymbolString(pub Vec<Symbol>);

impl SymbolString {
    pub fn empty() -> Self {
        SymbolString(Vec::new())
    }

    /// Splits on whitespace. `<empty>` alone denotes the empty word.
    pub fn parse(text: &str) -> Result<Self, SymbolError> {
        let trimmed = text.trim();
        if trimmed == EMPTY_WORD {
            return Ok(Self::empty());
        }
        trimmed
            .split_whitespace()
            .map(Symbol::new)
            .collect::<Result<Vec<_>, _>>()
            .map(SymbolString)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn reversed(&self) -> Self {
        SymbolString(self.0.iter().rev().cloned().collect())
    }

    pub fn concat(&self, other: &SymbolString) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        SymbolString(v)
    }

    /// Space-separated tokens, with the empty word rendered as `<empty>`.
    pub fn render(&self) -> String {
        if self.is_empty() {
            EMPTY_WORD.to_string()
        } else {
            self.to_string()
        }
    }
}

/// Parses a whitespace-separated literal; panics on invalid tokens.
pub fn word(text: &str) -> SymbolString {
    SymbolString::parse(text).unwrap_or_else(|e| panic!("invalid word literal: {e}"))
}

impl fmt::Display for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(s.as_str())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self.render())
    }
}

impl FromIterator<Symbol> for SymbolString {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        SymbolString(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a SymbolString {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Orders words by length, then token-wise lexicographically.
pub fn shortlex(a: &SymbolString, b: &SymbolString) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}
