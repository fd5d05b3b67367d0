//! Clauses, CNF/DNF conversion and the structural (Tseitin) CNF encoding.
//!
//! Clause sets use set semantics throughout: no duplicate literals, no
//! duplicate clauses, and no clause containing an atom together with its
//! negation (such clauses are dropped during conversion — they are
//! tautologies in CNF and contradictions in DNF).

use std::collections::HashMap;
use std::fmt;

use crate::atom::{Atom, FreshAtoms, Signature};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind};
use crate::limits::Limits;
use crate::oracle;
use crate::qbf;

/// An atom or its negation.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn complement(self) -> Literal {
        Literal {
            atom: self.atom,
            positive: !self.positive,
        }
    }

    pub fn to_formula(self) -> Formula {
        let a = Formula::atom(self.atom);
        if self.positive {
            a
        } else {
            Formula::not(&a)
        }
    }

    /// Parses `p` or `~p`.
    pub fn parse(text: &str) -> Result<Literal> {
        let (positive, name) = match text.strip_prefix('~') {
            Some(rest) => (false, rest),
            None => (true, text),
        };
        Ok(Literal {
            atom: Atom::try_new(name.trim())?,
            positive,
        })
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Literal) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Literal) -> std::cmp::Ordering {
        // Positive before negative on the same atom.
        self.atom
            .cmp(&other.atom)
            .then(other.positive.cmp(&self.positive))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! literal_set {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default, Debug)]
        pub struct $name(std::collections::BTreeSet<Literal>);

        impl $name {
            pub fn new() -> $name {
                $name(Default::default())
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn contains(&self, l: Literal) -> bool {
                self.0.contains(&l)
            }

            pub fn insert(&mut self, l: Literal) {
                self.0.insert(l);
            }

            pub fn remove(&mut self, l: Literal) {
                self.0.remove(&l);
            }

            pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
                self.0.iter().copied()
            }

            /// Contains an atom together with its negation.
            pub fn has_complementary_pair(&self) -> bool {
                self.0.iter().any(|l| self.0.contains(&l.complement()))
            }

            pub fn atoms(&self) -> Signature {
                self.0.iter().map(|l| l.atom).collect()
            }

            pub fn union(&self, other: &$name) -> $name {
                $name(self.0.union(&other.0).copied().collect())
            }
        }

        impl FromIterator<Literal> for $name {
            fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> $name {
                $name(iter.into_iter().collect())
            }
        }
    };
}

literal_set!(
    Clause,
    "A disjunction of literals; the empty clause denotes `false`."
);
literal_set!(
    ConjClause,
    "A conjunction of literals; the empty conjunction denotes `true`."
);

impl Clause {
    /// The clause as a formula: the (possibly empty) disjunction.
    pub fn to_formula(&self) -> Formula {
        Formula::disj(self.iter().map(Literal::to_formula))
    }
}

impl ConjClause {
    /// The conjunctive clause as a formula.
    pub fn to_formula(&self) -> Formula {
        Formula::conj(self.iter().map(Literal::to_formula))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "false");
        }
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ConjClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "true");
        }
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A formula in CNF: a set of clauses.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ClauseSet(std::collections::BTreeSet<Clause>);

impl ClauseSet {
    pub fn new() -> ClauseSet {
        ClauseSet::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.0.contains(c)
    }

    pub fn contains_empty_clause(&self) -> bool {
        self.0.iter().any(|c| c.is_empty())
    }

    pub fn insert(&mut self, c: Clause) {
        self.0.insert(c);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.0.iter()
    }

    pub fn atoms(&self) -> Signature {
        self.0
            .iter()
            .flat_map(|c| c.iter().map(|l| l.atom))
            .collect()
    }

    /// Conjunction of the member clauses; the empty set denotes `true`.
    pub fn to_formula(&self) -> Formula {
        Formula::conj(self.0.iter().map(Clause::to_formula))
    }
}

impl FromIterator<Clause> for ClauseSet {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> ClauseSet {
        ClauseSet(iter.into_iter().collect())
    }
}

impl fmt::Display for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "true");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            if c.len() > 1 {
                write!(f, "({c})")?;
            } else {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

/// A formula in DNF: an ordered, duplicate-free list of conjunctive clauses.
/// The order makes clause indices stable, which the DNF separator
/// construction relies on.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct DnfFormula(Vec<ConjClause>);

impl DnfFormula {
    /// Builds a DNF from clauses, deduplicating and sorting them.
    pub fn new<I: IntoIterator<Item = ConjClause>>(clauses: I) -> DnfFormula {
        let set: std::collections::BTreeSet<ConjClause> = clauses.into_iter().collect();
        DnfFormula(set.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn clauses(&self) -> &[ConjClause] {
        &self.0
    }

    pub fn atoms(&self) -> Signature {
        self.0
            .iter()
            .flat_map(|c| c.iter().map(|l| l.atom))
            .collect()
    }

    /// Disjunction of the member clauses; the empty DNF denotes `false`.
    pub fn to_formula(&self) -> Formula {
        Formula::disj(self.0.iter().map(ConjClause::to_formula))
    }
}

impl fmt::Display for DnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "false");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            if c.len() > 1 {
                write!(f, "({c})")?;
            } else {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

enum NnfLeaf {
    Lit(Literal),
    Const(bool),
}

fn nnf_leaf(f: &Formula) -> Option<NnfLeaf> {
    match f.kind() {
        FormulaKind::Atom(a) => Some(NnfLeaf::Lit(Literal::pos(*a))),
        FormulaKind::Top => Some(NnfLeaf::Const(true)),
        FormulaKind::Bottom => Some(NnfLeaf::Const(false)),
        FormulaKind::Not(g) => g.as_atom().map(|a| NnfLeaf::Lit(Literal::neg(a))),
        _ => None,
    }
}

fn cap_check(count: usize, limits: &Limits) -> Result<()> {
    if count > limits.clause_cap {
        Err(Error::ClauseCap {
            cap: limits.clause_cap,
        })
    } else {
        Ok(())
    }
}

/// CNF of `phi` by negation normal form and distribution. Tautological
/// clauses and duplicate literals are removed. May be exponential; bounded
/// by the clause cap.
pub fn to_cnf(phi: &Formula, limits: &Limits) -> Result<ClauseSet> {
    fn go(f: &Formula, limits: &Limits) -> Result<Vec<Clause>> {
        if let Some(leaf) = nnf_leaf(f) {
            return Ok(match leaf {
                NnfLeaf::Lit(l) => vec![std::iter::once(l).collect()],
                NnfLeaf::Const(true) => vec![],
                NnfLeaf::Const(false) => vec![Clause::new()],
            });
        }
        match f.kind() {
            FormulaKind::And(a, b) => {
                let mut out = go(a, limits)?;
                out.extend(go(b, limits)?);
                Ok(out)
            }
            FormulaKind::Or(a, b) => {
                let left = go(a, limits)?;
                let right = go(b, limits)?;
                if left.len().saturating_mul(right.len()) > limits.clause_cap {
                    return Err(Error::ClauseCap {
                        cap: limits.clause_cap,
                    });
                }
                let mut out = Vec::new();
                for c in &left {
                    for d in &right {
                        let joined = c.union(d);
                        if !joined.has_complementary_pair() {
                            out.push(joined);
                        }
                    }
                }
                Ok(out)
            }
            _ => unreachable!("formula is in NNF"),
        }
    }
    let clauses = go(&phi.nnf(), limits)?;
    let set: ClauseSet = clauses
        .into_iter()
        .filter(|c| !c.has_complementary_pair())
        .collect();
    cap_check(set.len(), limits)?;
    Ok(set)
}

/// DNF of `phi`, dually to [`to_cnf`]. Contradictory conjunctive clauses are
/// removed.
pub fn to_dnf(phi: &Formula, limits: &Limits) -> Result<DnfFormula> {
    fn go(f: &Formula, limits: &Limits) -> Result<Vec<ConjClause>> {
        if let Some(leaf) = nnf_leaf(f) {
            return Ok(match leaf {
                NnfLeaf::Lit(l) => vec![std::iter::once(l).collect()],
                NnfLeaf::Const(true) => vec![ConjClause::new()],
                NnfLeaf::Const(false) => vec![],
            });
        }
        match f.kind() {
            FormulaKind::Or(a, b) => {
                let mut out = go(a, limits)?;
                out.extend(go(b, limits)?);
                Ok(out)
            }
            FormulaKind::And(a, b) => {
                let left = go(a, limits)?;
                let right = go(b, limits)?;
                if left.len().saturating_mul(right.len()) > limits.clause_cap {
                    return Err(Error::ClauseCap {
                        cap: limits.clause_cap,
                    });
                }
                let mut out = Vec::new();
                for c in &left {
                    for d in &right {
                        let joined = c.union(d);
                        if !joined.has_complementary_pair() {
                            out.push(joined);
                        }
                    }
                }
                Ok(out)
            }
            _ => unreachable!("formula is in NNF"),
        }
    }
    let clauses = go(&phi.nnf(), limits)?;
    cap_check(clauses.len(), limits)?;
    Ok(DnfFormula::new(
        clauses
            .into_iter()
            .filter(|c| !c.has_complementary_pair()),
    ))
}

/// Result of the Tseitin encoding: the clause set, the definitional atoms in
/// creation order (innermost subformula first), and the defined subformulas.
pub struct TseitinCnf {
    pub clauses: ClauseSet,
    /// Pairs of (defined subformula, definitional atom), innermost first.
    pub definitions: Vec<(Formula, Atom)>,
}

impl TseitinCnf {
    pub fn definitional_atoms(&self) -> Vec<Atom> {
        self.definitions.iter().map(|&(_, a)| a).collect()
    }
}

/// Structural CNF of `phi`: one fresh atom per distinct compound subformula,
/// each defined by a full biconditional, plus a unit clause asserting the
/// root. The result is a conservative extension of `phi` with at most
/// `3 * dag_size(phi) + 1` clauses. Fresh atoms are drawn from `fresh`,
/// which lets two encodings share one generator and stay atom-disjoint.
pub fn tseitin_cnf_with(phi: &Formula, fresh: &mut FreshAtoms) -> TseitinCnf {
    for a in phi.sig().iter() {
        fresh.reserve(a);
    }
    let mut clauses = ClauseSet::new();
    let mut definitions = Vec::new();
    let mut memo: HashMap<u64, Literal> = HashMap::new();

    fn rep(
        f: &Formula,
        fresh: &mut FreshAtoms,
        clauses: &mut ClauseSet,
        definitions: &mut Vec<(Formula, Atom)>,
        memo: &mut HashMap<u64, Literal>,
    ) -> Literal {
        if let Some(&l) = memo.get(&f.id()) {
            return l;
        }
        let lit = match f.kind() {
            FormulaKind::Atom(a) => Literal::pos(*a),
            FormulaKind::Not(g) => rep(g, fresh, clauses, definitions, memo).complement(),
            FormulaKind::Top => {
                let x = fresh.numbered("def");
                definitions.push((f.clone(), x));
                clauses.insert(std::iter::once(Literal::pos(x)).collect());
                Literal::pos(x)
            }
            FormulaKind::Bottom => {
                let x = fresh.numbered("def");
                definitions.push((f.clone(), x));
                clauses.insert(std::iter::once(Literal::neg(x)).collect());
                Literal::pos(x)
            }
            FormulaKind::And(a, b) => {
                let ra = rep(a, fresh, clauses, definitions, memo);
                let rb = rep(b, fresh, clauses, definitions, memo);
                let x = fresh.numbered("def");
                definitions.push((f.clone(), x));
                clauses.insert([Literal::neg(x), ra].into_iter().collect());
                clauses.insert([Literal::neg(x), rb].into_iter().collect());
                clauses.insert(
                    [ra.complement(), rb.complement(), Literal::pos(x)]
                        .into_iter()
                        .collect(),
                );
                Literal::pos(x)
            }
            FormulaKind::Or(a, b) => {
                let ra = rep(a, fresh, clauses, definitions, memo);
                let rb = rep(b, fresh, clauses, definitions, memo);
                let x = fresh.numbered("def");
                definitions.push((f.clone(), x));
                clauses.insert([Literal::neg(x), ra, rb].into_iter().collect());
                clauses.insert([ra.complement(), Literal::pos(x)].into_iter().collect());
                clauses.insert([rb.complement(), Literal::pos(x)].into_iter().collect());
                Literal::pos(x)
            }
        };
        memo.insert(f.id(), lit);
        lit
    }

    let root = rep(phi, fresh, &mut clauses, &mut definitions, &mut memo);
    clauses.insert(std::iter::once(root).collect());
    TseitinCnf {
        clauses,
        definitions,
    }
}

/// [`tseitin_cnf_with`] with a generator avoiding only `sig(phi)`.
pub fn tseitin_cnf(phi: &Formula) -> TseitinCnf {
    let mut fresh = FreshAtoms::avoiding(&phi.sig());
    tseitin_cnf_with(phi, &mut fresh)
}

/// Decides whether `psi` is a conservative extension of `phi`:
/// `psi |= phi`, `sig(phi) ⊆ sig(psi)`, and the uniform `sig(phi)`-
/// interpolant of `psi` is equivalent to `phi`.
pub fn is_conservative_extension(psi: &Formula, phi: &Formula, limits: &Limits) -> Result<bool> {
    let sig_phi = phi.sig();
    if !sig_phi.is_subset(&psi.sig()) {
        return Ok(false);
    }
    if !oracle::entails(psi, phi, limits)? {
        return Ok(false);
    }
    let uniform = qbf::uniform_keep_qe(psi, &sig_phi, limits)?;
    oracle::equivalent(&uniform, phi, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::equivalent;
    use crate::parser::parse_formula;

    fn lims() -> Limits {
        Limits::default()
    }

    fn lit(s: &str) -> Literal {
        Literal::parse(s).unwrap()
    }

    fn clause(ls: &[&str]) -> Clause {
        ls.iter().map(|s| lit(s)).collect()
    }

    #[test]
    fn literal_complement_involution() {
        let l = lit("~p");
        assert_eq!(l.complement().complement(), l);
    }

    #[test]
    fn to_dnf_examples() {
        let l = lims();
        let phi = parse_formula("p & q & r").unwrap();
        let d = to_dnf(&phi, &l).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.clauses()[0], ["p", "q", "r"].iter().map(|s| lit(s)).collect());

        // 2^n conjunctive clauses for the n-fold conjunction of disjunctions.
        let phi = parse_formula("(p1 | q1) & (p2 | q2) & (p3 | q3)").unwrap();
        assert_eq!(to_dnf(&phi, &l).unwrap().len(), 8);
    }

    #[test]
    fn to_cnf_example() {
        let l = lims();
        let phi = parse_formula("~((b -> c) & (d -> f))").unwrap();
        let cnf = to_cnf(&phi, &l).unwrap();
        let expected: ClauseSet = [
            clause(&["b", "d"]),
            clause(&["b", "~f"]),
            clause(&["~c", "d"]),
            clause(&["~c", "~f"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(cnf, expected);
    }

    #[test]
    fn conversion_preserves_equivalence_and_drops_tautologies() {
        let l = lims();
        for src in ["(p | ~p) & q", "p <-> (q | r)", "~(p & (q -> p))"] {
            let f = parse_formula(src).unwrap();
            assert!(equivalent(&f, &to_cnf(&f, &l).unwrap().to_formula(), &l).unwrap());
            assert!(equivalent(&f, &to_dnf(&f, &l).unwrap().to_formula(), &l).unwrap());
        }
        let taut = parse_formula("p | ~p").unwrap();
        assert!(to_cnf(&taut, &l).unwrap().is_empty());
        let contradiction = parse_formula("p & ~p").unwrap();
        assert!(to_dnf(&contradiction, &l).unwrap().is_empty());
    }

    #[test]
    fn clause_cap_guard() {
        let mut l = lims();
        l.clause_cap = 4;
        let phi =
            parse_formula("(p1 | q1) & (p2 | q2) & (p3 | q3) & (p4 | q4)").unwrap();
        assert!(matches!(to_dnf(&phi, &l), Err(Error::ClauseCap { cap: 4 })));
    }

    #[test]
    fn tseitin_atom_needs_no_definition() {
        let enc = tseitin_cnf(&Formula::var("p"));
        assert!(enc.definitions.is_empty());
        let expected: ClauseSet = [clause(&["p"])].into_iter().collect();
        assert_eq!(enc.clauses, expected);
    }

    #[test]
    fn tseitin_or_clauses() {
        let enc = tseitin_cnf(&parse_formula("p | q").unwrap());
        assert_eq!(enc.definitions.len(), 1);
        let x = enc.definitions[0].1;
        let expected: ClauseSet = [
            [Literal::neg(x), lit("p"), lit("q")].into_iter().collect(),
            [lit("~p"), Literal::pos(x)].into_iter().collect(),
            [lit("~q"), Literal::pos(x)].into_iter().collect(),
            std::iter::once(Literal::pos(x)).collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(enc.clauses, expected);
    }

    #[test]
    fn tseitin_is_conservative_extension() {
        let l = lims();
        for src in ["(p -> q) & p", "(p | q) & ~p", "~(d & e) & (a -> d)"] {
            let phi = parse_formula(src).unwrap();
            let enc = tseitin_cnf(&phi);
            assert!(is_conservative_extension(&enc.clauses.to_formula(), &phi, &l).unwrap());
            assert!(enc.clauses.len() <= 3 * phi.dag_size() + 1);
            assert!(enc.definitions.len() <= phi.dag_size());
        }
    }

    #[test]
    fn tseitin_models_project_to_original() {
        let l = lims();
        let phi = parse_formula("(p | q) & ~p").unwrap();
        let enc = tseitin_cnf(&phi).clauses.to_formula();
        // Models of the encoding restricted to {p, q} are exactly models of phi.
        let keep = phi.sig();
        let projected = qbf::uniform_keep_qe(&enc, &keep, &l).unwrap();
        assert!(equivalent(&projected, &phi, &l).unwrap());
    }

    #[test]
    fn conservative_extension_examples() {
        let l = lims();
        assert!(is_conservative_extension(
            &parse_formula("p & q").unwrap(),
            &Formula::var("p"),
            &l
        )
        .unwrap());
        assert!(!is_conservative_extension(
            &parse_formula("p & ~p").unwrap(),
            &Formula::var("p"),
            &l
        )
        .unwrap());
    }
}
