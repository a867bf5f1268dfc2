//! Star-controlled graph-controlled insertion-deletion systems.
//!
//! * [`model`]: systems, size measure, control graphs, mirror and lift.
//! * [`engine`]: single steps, bounded breadth-first search, trace replay.
//! * [`sgnf`]: normal-form grammars and their bounded languages.
//! * [`constructions`]: grammar to star-controlled system compilers.
//! * [`verification`]: differential and soundness checks.
//! * [`format`]: the line-oriented text formats.

pub mod constructions;
pub mod engine;
pub mod fixtures;
pub mod format;
pub mod model;
mod prune;
pub mod sgnf;
pub mod symbol;
pub mod verification;

pub use engine::{Exec, SearchLimits};
pub use model::{Configuration, ControlledRule, GcidSystem, InsDelAction};
pub use symbol::{Symbol, SymbolString};
