/// Resource guards for the operations that can blow up.
///
/// All algorithms are exact; the limits only bound how much work they are
/// allowed to attempt before giving up with a resource-guard error.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Maximum joint signature size for truth-table work (default 20).
    pub oracle_atoms: usize,
    /// Cap on clause counts in CNF/DNF conversion and on intermediate
    /// formula size during quantifier elimination (default 10^6).
    pub clause_cap: usize,
    /// Maximum number of resolvents generated by a refutation (default 10^5).
    pub resolution_steps: usize,
    /// Maximum number of tableau nodes (default 10^5).
    pub tableau_nodes: usize,
}

pub const DEFAULT_ORACLE_ATOMS: usize = 20;
pub const DEFAULT_CLAUSE_CAP: usize = 1_000_000;
pub const DEFAULT_RESOLUTION_STEPS: usize = 100_000;
pub const DEFAULT_TABLEAU_NODES: usize = 100_000;

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            oracle_atoms: DEFAULT_ORACLE_ATOMS,
            clause_cap: DEFAULT_CLAUSE_CAP,
            resolution_steps: DEFAULT_RESOLUTION_STEPS,
            tableau_nodes: DEFAULT_TABLEAU_NODES,
        }
    }
}
