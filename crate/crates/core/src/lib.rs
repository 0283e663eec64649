//! Group presentations as 2-polygraphs.
//!
//! The crate covers free-groupoid words, polygraphs and their derivations,
//! a text format for presentations, Tietze transformations with checked
//! witnesses, Knuth-Bendix completion over shortlex, Cayley graphs and
//! complexes with integral homology, and a brute-force oracle used to
//! cross-check the rewriting engine.

pub mod cayley;
pub mod derivation;
pub mod oracle;
pub mod parser;
pub mod polygraph;
pub mod rewriting;
pub mod snf;
pub mod syntax;
pub mod tietze;
pub mod words;

pub use derivation::{boundary, Derivation, DerivationError};
pub use parser::{parse, render, ParseError};
pub use polygraph::{EulerData, ModelError, Polygraph, Sphere, ValidationReport};
pub use words::{CellId, Sign, SignedLetter, ZigzagWord};
