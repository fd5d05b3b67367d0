use thiserror::Error;

use crate::atom::{Atom, Valuation};
use crate::nf::ConjClause;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { message: String, offset: usize },

    #[error("DIMACS error on line {line}: {message}")]
    Dimacs { message: String, line: usize },

    #[error("valuation does not assign atom {0}")]
    MissingAtom(Atom),

    #[error("signature of {atoms} atoms exceeds the oracle limit of {limit}")]
    OracleLimit { atoms: usize, limit: usize },

    #[error("clause or formula size cap of {cap} exceeded")]
    ClauseCap { cap: usize },

    #[error("resolution step limit of {limit} exceeded")]
    StepLimit { limit: usize },

    #[error("tableau node limit of {limit} exceeded")]
    NodeLimit { limit: usize },

    #[error("not entailed; countermodel: {countermodel}")]
    NotEntailed { countermodel: Valuation },

    #[error("conjunction is satisfiable; model: {model}")]
    Satisfiable { model: Valuation },

    /// DNF separator construction found a pair of jointly satisfiable
    /// conjunctive clauses, witnessing satisfiability of the whole pair.
    #[error("clauses ({left}) and ({right}) share no complementary pair; model: {model}")]
    NoComplementaryPair {
        left: ConjClause,
        right: ConjClause,
        model: Valuation,
    },

    #[error("atom {atom} is not implicitly definable; {left} and {right} agree on the kept signature but differ on it")]
    NotDefinable {
        atom: Atom,
        left: Valuation,
        right: Valuation,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed proof: {0}")]
    MalformedProof(String),

    #[error("malformed tableau: {0}")]
    MalformedTableau(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by a configurable resource guard.
    pub fn is_resource_guard(&self) -> bool {
        matches!(
            self,
            Error::OracleLimit { .. }
                | Error::ClauseCap { .. }
                | Error::StepLimit { .. }
                | Error::NodeLimit { .. }
        )
    }
}
