//! Craig interpolation for classical propositional logic.
//!
//! The crate computes Craig(-Lyndon) interpolants and separators, uniform
//! interpolants (forgetting), Beth explicit definitions, parallel
//! interpolants and finest theory splittings. Four independent engines are
//! provided — quantifier elimination, DNF literal dropping, annotated
//! resolution refutations (Huang and McMillan styles) and biased analytic
//! tableaux — all cross-checkable against a brute-force truth-table oracle.
//!
//! Engines implement the [`engine::InterpolantEngine`] /
//! [`engine::UniformEngine`] traits and are looked up by name in an
//! [`engine::EngineRegistry`], which is also how the `itp` CLI selects its
//! `--method`.

pub mod atom;
pub mod definability;
pub mod dimacs;
pub mod dnf;
pub mod engine;
pub mod error;
pub mod formula;
pub mod limits;
pub mod nf;
pub mod oracle;
pub mod parser;
pub mod qbf;
pub mod resolution;
pub mod tableau;

pub use atom::{Atom, Polarity, PolaritySignature, Signature, Valuation};
pub use error::{Error, Result};
pub use formula::{Formula, FormulaKind};
pub use limits::Limits;
pub use parser::{parse_formula, parse_qbf};
