//! Syntactic interpolation on DNF: uniform interpolants by literal dropping
//! and Craig-Lyndon separators from collections of complementary pairs.

use crate::atom::{Signature, Valuation};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::nf::{ConjClause, DnfFormula, Literal};

/// One complementary pair per (left clause, right clause) index pair: a
/// literal from the left clause together with its complement from the right
/// clause. Such a collection is a proof that the conjunction of the two DNFs
/// is unsatisfiable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCollection {
    pairs: Vec<ChosenPair>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChosenPair {
    pub left_clause: usize,
    pub right_clause: usize,
    pub left: Literal,
}

impl PairCollection {
    /// Validates that `pairs` has exactly one entry per clause index pair of
    /// `(phi, psi)`, that each chosen literal occurs in its left clause and
    /// its complement in the right clause.
    pub fn new(phi: &DnfFormula, psi: &DnfFormula, pairs: Vec<ChosenPair>) -> Result<PairCollection> {
        let mut seen = std::collections::BTreeSet::new();
        for p in &pairs {
            let left = phi.clauses().get(p.left_clause).ok_or_else(|| {
                Error::Precondition(format!("left clause index {} out of range", p.left_clause))
            })?;
            let right = psi.clauses().get(p.right_clause).ok_or_else(|| {
                Error::Precondition(format!(
                    "right clause index {} out of range",
                    p.right_clause
                ))
            })?;
            if !left.contains(p.left) || !right.contains(p.left.complement()) {
                return Err(Error::Precondition(format!(
                    "pair ({}, {}) does not join clauses {} and {}",
                    p.left,
                    p.left.complement(),
                    p.left_clause,
                    p.right_clause
                )));
            }
            if !seen.insert((p.left_clause, p.right_clause)) {
                return Err(Error::Precondition(format!(
                    "duplicate pair for clause indices ({}, {})",
                    p.left_clause, p.right_clause
                )));
            }
        }
        if seen.len() != phi.len() * psi.len() {
            return Err(Error::Precondition(format!(
                "expected one pair per clause index pair ({} needed, {} given)",
                phi.len() * psi.len(),
                seen.len()
            )));
        }
        Ok(PairCollection { pairs })
    }

    pub fn pairs(&self) -> &[ChosenPair] {
        &self.pairs
    }

    /// The separator: the disjunction of the distinct left literals.
    pub fn separator(&self) -> Formula {
        let lits: std::collections::BTreeSet<Literal> =
            self.pairs.iter().map(|p| p.left).collect();
        Formula::disj(lits.into_iter().map(Literal::to_formula))
    }
}

fn reject_tautological(d: &DnfFormula, who: &str) -> Result<()> {
    for (i, c) in d.clauses().iter().enumerate() {
        if c.has_complementary_pair() {
            return Err(Error::Precondition(format!(
                "{who} clause {i} ({c}) contains an atom and its negation"
            )));
        }
    }
    Ok(())
}

/// Uniform interpolation by literal dropping: keeps in every conjunctive
/// clause only the literals whose atom is in `keep`. Equivalent to
/// existentially quantifying away the dropped atoms.
pub fn drop_atoms_dnf(phi: &DnfFormula, keep: &Signature) -> Result<DnfFormula> {
    reject_tautological(phi, "input")?;
    if !keep.is_subset(&phi.atoms()) {
        return Err(Error::Precondition(format!(
            "kept signature {keep} is not a subset of sig = {}",
            phi.atoms()
        )));
    }
    Ok(DnfFormula::new(phi.clauses().iter().map(|c| {
        c.iter()
            .filter(|l| keep.contains(l.atom))
            .collect::<ConjClause>()
    })))
}

/// Chooses, for every clause index pair, the complementary pair with the
/// lexicographically smallest (atom name, left-literal sign). Errors with
/// the witnessing clause pair — and a model built from it — when some index
/// pair admits no complementary pair, i.e. when `phi & psi` is satisfiable.
pub fn choose_pairs(phi: &DnfFormula, psi: &DnfFormula) -> Result<PairCollection> {
    reject_tautological(phi, "left")?;
    reject_tautological(psi, "right")?;
    let mut pairs = Vec::new();
    for (i, left) in phi.clauses().iter().enumerate() {
        for (j, right) in psi.clauses().iter().enumerate() {
            // Literals iterate in (atom name, positive-first) order, so the
            // first hit is the lexicographic minimum.
            let choice = left.iter().find(|l| right.contains(l.complement()));
            match choice {
                Some(l) => pairs.push(ChosenPair {
                    left_clause: i,
                    right_clause: j,
                    left: l,
                }),
                None => {
                    // No complementary pair: the union of the two clauses is
                    // consistent and yields a model of phi & psi.
                    let model: Valuation = left
                        .iter()
                        .chain(right.iter())
                        .map(|l| (l.atom, l.positive))
                        .collect();
                    let mut full = model;
                    for a in phi.atoms().union(&psi.atoms()).iter() {
                        if full.get(a).is_none() {
                            full.set(a, false);
                        }
                    }
                    return Err(Error::NoComplementaryPair {
                        left: left.clone(),
                        right: right.clone(),
                        model: full,
                    });
                }
            }
        }
    }
    PairCollection::new(phi, psi, pairs)
}

/// Craig-Lyndon separator for two DNFs whose conjunction is unsatisfiable.
///
/// With an empty right-hand DNF (`psi ≡ false`) every formula separates;
/// `true` is returned. An empty left-hand DNF yields `false`.
pub fn dnf_separator(phi: &DnfFormula, psi: &DnfFormula) -> Result<Formula> {
    reject_tautological(phi, "left")?;
    reject_tautological(psi, "right")?;
    if phi.is_empty() {
        return Ok(Formula::bottom());
    }
    if psi.is_empty() {
        return Ok(Formula::top());
    }
    Ok(choose_pairs(phi, psi)?.separator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::Atom;
    use crate::limits::Limits;
    use crate::nf::to_dnf;
    use crate::oracle;
    use crate::parser::parse_formula;

    fn lims() -> Limits {
        Limits::default()
    }

    fn dnf(src: &str) -> DnfFormula {
        to_dnf(&parse_formula(src).unwrap(), &lims()).unwrap()
    }

    fn sig(names: &[&str]) -> Signature {
        names.iter().map(|n| Atom::new(n)).collect()
    }

    #[test]
    fn drop_atoms_example() {
        let d = dnf("p & q & r");
        let dropped = drop_atoms_dnf(&d, &sig(&["p", "q"])).unwrap();
        assert_eq!(dropped, dnf("p & q"));
    }

    #[test]
    fn drop_atoms_full_signature_is_identity() {
        let d = dnf("p & ~q");
        let dropped = drop_atoms_dnf(&d, &sig(&["p", "q"])).unwrap();
        assert_eq!(dropped, d);
    }

    #[test]
    fn drop_atoms_can_produce_top() {
        let d = dnf("p | q");
        let dropped = drop_atoms_dnf(&d, &sig(&["p"])).unwrap();
        // {{p}, {}} — the empty conjunctive clause makes the result valid.
        assert_eq!(dropped.len(), 2);
        assert!(dropped.clauses().iter().any(|c| c.is_empty()));
        assert!(oracle::equivalent(&dropped.to_formula(), &Formula::top(), &lims()).unwrap());
    }

    #[test]
    fn drop_atoms_rejects_tautological_clause() {
        let taut: ConjClause = [
            Literal::pos(Atom::new("p")),
            Literal::neg(Atom::new("p")),
        ]
        .into_iter()
        .collect();
        let d = DnfFormula::new([taut]);
        assert!(matches!(
            drop_atoms_dnf(&d, &Signature::new()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn separator_example_prefers_smallest_atom() {
        let phi = dnf("p & q & r");
        let psi = dnf("s & ~p & ~q");
        let chi = dnf_separator(&phi, &psi).unwrap();
        assert_eq!(chi, Formula::var("p"));
        assert!(oracle::check_lyndon_separator(
            &phi.to_formula(),
            &psi.to_formula(),
            &chi,
            &lims()
        )
        .unwrap());
    }

    #[test]
    fn separator_with_explicit_pair_choice() {
        let phi = dnf("p & q & r");
        let psi = dnf("s & ~p & ~q");
        let q = Literal::pos(Atom::new("q"));
        let pc = PairCollection::new(
            &phi,
            &psi,
            vec![ChosenPair {
                left_clause: 0,
                right_clause: 0,
                left: q,
            }],
        )
        .unwrap();
        assert_eq!(pc.separator(), Formula::var("q"));
    }

    #[test]
    fn separator_single_pair() {
        let phi = dnf("p");
        let psi = dnf("~p");
        assert_eq!(dnf_separator(&phi, &psi).unwrap(), Formula::var("p"));
    }

    #[test]
    fn satisfiable_pair_reports_witness() {
        let phi = dnf("p & q");
        let psi = dnf("p & r");
        match dnf_separator(&phi, &psi) {
            Err(Error::NoComplementaryPair { model, .. }) => {
                let joint = Formula::and(&phi.to_formula(), &psi.to_formula());
                assert!(joint.eval(&model).unwrap());
            }
            other => panic!("expected NoComplementaryPair, got {other:?}"),
        }
    }

    #[test]
    fn empty_sides() {
        // phi = p & ~p has the empty DNF; bottom separates it from anything.
        let phi = dnf("p & ~p");
        let psi = dnf("~q");
        assert_eq!(dnf_separator(&phi, &psi).unwrap(), Formula::bottom());
        let psi_empty = dnf("q & ~q");
        assert_eq!(dnf_separator(&dnf("p"), &psi_empty).unwrap(), Formula::top());
    }
}
