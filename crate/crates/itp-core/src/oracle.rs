//! Brute-force semantic ground truth.
//!
//! Everything here works by explicit truth tables over an ordered signature,
//! packed 64 rows to a word and computed bottom-up over the shared-subterm
//! dag. Row `i` is the valuation that assigns the j-th atom of the order the
//! (n-1-j)-th bit of `i`, so rows enumerate valuations lexicographically with
//! 0 before 1. The oracle is deliberately dumb and independent of every
//! engine it is used to check.

use std::collections::HashMap;
use std::fmt;

use crate::atom::{Atom, Signature, Valuation};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind};
use crate::limits::Limits;

/// Canonical representation of a Boolean function over an ordered signature:
/// two formulas over the same atom order are equivalent iff their tables are
/// equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthTable {
    atoms: Vec<Atom>,
    bits: Vec<u64>,
}

impl TruthTable {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn rows(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn bit(&self, row: usize) -> bool {
        self.bits[row / 64] >> (row % 64) & 1 == 1
    }

    /// Row-major bit string, e.g. `"0001"` for `p & q` over `[p, q]`.
    pub fn bit_string(&self) -> String {
        (0..self.rows()).map(|r| if self.bit(r) { '1' } else { '0' }).collect()
    }

    /// The valuation of row `row`.
    pub fn valuation(&self, row: usize) -> Valuation {
        let n = self.atoms.len();
        self.atoms
            .iter()
            .enumerate()
            .map(|(j, &a)| (a, row >> (n - 1 - j) & 1 == 1))
            .collect()
    }

    /// Pointwise conjunction; both tables must share the atom order.
    pub fn and(&self, other: &TruthTable) -> TruthTable {
        assert_eq!(self.atoms, other.atoms);
        TruthTable {
            atoms: self.atoms.clone(),
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Pointwise disjunction; both tables must share the atom order.
    pub fn or(&self, other: &TruthTable) -> TruthTable {
        assert_eq!(self.atoms, other.atoms);
        TruthTable {
            atoms: self.atoms.clone(),
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// True if every satisfying row of `self` satisfies `other`.
    pub fn entails(&self, other: &TruthTable) -> bool {
        assert_eq!(self.atoms, other.atoms);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit_string())
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable[{:?}] {}", self.atoms, self.bit_string())
    }
}

fn words_for(rows: usize) -> usize {
    rows.div_ceil(64)
}

/// Bit pattern of atom position `j` among `n` ordered atoms.
fn atom_bits(j: usize, n: usize) -> Vec<u64> {
    let rows = 1usize << n;
    let shift = n - 1 - j;
    let mut bits = vec![0u64; words_for(rows)];
    if shift >= 6 {
        // Period is a multiple of 64: whole words are constant.
        for (w, word) in bits.iter_mut().enumerate() {
            if (w * 64) >> shift & 1 == 1 {
                *word = u64::MAX;
            }
        }
    } else {
        let mut pattern = 0u64;
        for r in 0..64 {
            if r >> shift & 1 == 1 {
                pattern |= 1 << r;
            }
        }
        bits.fill(pattern);
    }
    bits
}

fn tail_mask(rows: usize) -> u64 {
    if rows % 64 == 0 {
        u64::MAX
    } else {
        (1u64 << (rows % 64)) - 1
    }
}

fn check_limit(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.oracle_atoms {
        Err(Error::OracleLimit {
            atoms: n,
            limit: limits.oracle_atoms,
        })
    } else {
        Ok(())
    }
}

/// The truth table of `phi` over `atom_order`, which must cover `sig(phi)`.
pub fn truth_table(phi: &Formula, atom_order: &[Atom], limits: &Limits) -> Result<TruthTable> {
    check_limit(atom_order.len(), limits)?;
    let sig = phi.sig();
    let order_sig: Signature = atom_order.iter().copied().collect();
    if !sig.is_subset(&order_sig) {
        return Err(Error::Precondition(format!(
            "atom order {order_sig} does not cover sig = {sig}"
        )));
    }
    let n = atom_order.len();
    let rows = 1usize << n;
    let words = words_for(rows);
    let position: HashMap<Atom, usize> = atom_order
        .iter()
        .enumerate()
        .map(|(j, &a)| (a, j))
        .collect();

    fn go(
        f: &Formula,
        n: usize,
        words: usize,
        position: &HashMap<Atom, usize>,
        memo: &mut HashMap<u64, Vec<u64>>,
    ) -> Vec<u64> {
        if let Some(bits) = memo.get(&f.id()) {
            return bits.clone();
        }
        let bits = match f.kind() {
            FormulaKind::Atom(a) => atom_bits(position[a], n),
            FormulaKind::Top => vec![u64::MAX; words],
            FormulaKind::Bottom => vec![0u64; words],
            FormulaKind::Not(g) => go(g, n, words, position, memo)
                .iter()
                .map(|w| !w)
                .collect(),
            FormulaKind::And(x, y) => {
                let a = go(x, n, words, position, memo);
                let b = go(y, n, words, position, memo);
                a.iter().zip(&b).map(|(x, y)| x & y).collect()
            }
            FormulaKind::Or(x, y) => {
                let a = go(x, n, words, position, memo);
                let b = go(y, n, words, position, memo);
                a.iter().zip(&b).map(|(x, y)| x | y).collect()
            }
        };
        memo.insert(f.id(), bits.clone());
        bits
    }

    let mut bits = go(phi, n, words, &position, &mut HashMap::new());
    let mask = tail_mask(rows);
    if let Some(last) = bits.last_mut() {
        *last &= mask;
    }
    Ok(TruthTable {
        atoms: atom_order.to_vec(),
        bits,
    })
}

fn joint_order(phi: &Formula, psi: &Formula) -> Vec<Atom> {
    phi.sig().union(&psi.sig()).iter().collect()
}

/// First satisfying valuation of `phi & ~psi`, if any.
pub fn entailment_countermodel(
    phi: &Formula,
    psi: &Formula,
    limits: &Limits,
) -> Result<Option<Valuation>> {
    let order = joint_order(phi, psi);
    let a = truth_table(phi, &order, limits)?;
    let b = truth_table(psi, &order, limits)?;
    let last = a.bits.len().wrapping_sub(1);
    for (w, (x, y)) in a.bits.iter().zip(&b.bits).enumerate() {
        let mut bad = x & !y;
        if w == last {
            bad &= tail_mask(a.rows());
        }
        if bad != 0 {
            let row = w * 64 + bad.trailing_zeros() as usize;
            return Ok(Some(a.valuation(row)));
        }
    }
    Ok(None)
}

/// `phi |= psi`, decided by truth tables over the joint signature.
pub fn entails(phi: &Formula, psi: &Formula, limits: &Limits) -> Result<bool> {
    Ok(entailment_countermodel(phi, psi, limits)?.is_none())
}

pub fn equivalent(phi: &Formula, psi: &Formula, limits: &Limits) -> Result<bool> {
    Ok(entails(phi, psi, limits)? && entails(psi, phi, limits)?)
}

/// A model of `phi`, if one exists.
pub fn satisfying_model(phi: &Formula, limits: &Limits) -> Result<Option<Valuation>> {
    let order: Vec<Atom> = phi.sig().iter().collect();
    let t = truth_table(phi, &order, limits)?;
    for (w, word) in t.bits.iter().enumerate() {
        let word = if w + 1 == t.bits.len() {
            word & tail_mask(t.rows())
        } else {
            *word
        };
        if word != 0 {
            let row = w * 64 + word.trailing_zeros() as usize;
            return Ok(Some(t.valuation(row)));
        }
    }
    Ok(None)
}

/// Verifies the two clauses of the Craig interpolant definition:
/// `phi |= chi`, `chi |= psi`, and `sig(chi) ⊆ sig(phi) ∩ sig(psi)`.
pub fn check_interpolant(
    phi: &Formula,
    psi: &Formula,
    chi: &Formula,
    limits: &Limits,
) -> Result<bool> {
    let shared = phi.sig().intersection(&psi.sig());
    Ok(chi.sig().is_subset(&shared)
        && entails(phi, chi, limits)?
        && entails(chi, psi, limits)?)
}

/// Verifies the Craig separator definition: `phi |= chi`,
/// `chi & psi |= false`, and `sig(chi) ⊆ sig(phi) ∩ sig(psi)`.
pub fn check_separator(
    phi: &Formula,
    psi: &Formula,
    chi: &Formula,
    limits: &Limits,
) -> Result<bool> {
    let shared = phi.sig().intersection(&psi.sig());
    Ok(chi.sig().is_subset(&shared)
        && entails(phi, chi, limits)?
        && entails(&Formula::and(chi, psi), &Formula::bottom(), limits)?)
}

/// Verifies the Craig-Lyndon interpolant definition: the entailments of
/// [`check_interpolant`] plus polarity containment
/// `sig±(chi) ⊆ sig±(phi) ∩ sig±(psi)`.
pub fn check_lyndon(phi: &Formula, psi: &Formula, chi: &Formula, limits: &Limits) -> Result<bool> {
    let allowed = phi.polarity_sig().intersection(&psi.polarity_sig());
    Ok(chi.polarity_sig().is_subset(&allowed)
        && entails(phi, chi, limits)?
        && entails(chi, psi, limits)?)
}

/// Verifies the Craig-Lyndon separator definition: the entailments of
/// [`check_separator`] plus `sig±(chi) ⊆ sig±(phi) ∩ sig±(~psi)`.
pub fn check_lyndon_separator(
    phi: &Formula,
    psi: &Formula,
    chi: &Formula,
    limits: &Limits,
) -> Result<bool> {
    let allowed = phi
        .polarity_sig()
        .intersection(&Formula::not(psi).polarity_sig());
    Ok(chi.polarity_sig().is_subset(&allowed)
        && entails(phi, chi, limits)?
        && entails(&Formula::and(chi, psi), &Formula::bottom(), limits)?)
}

/// Maximum shared-signature size accepted by [`enumerate_interpolants`].
pub const ENUMERATION_LIMIT: usize = 4;

/// All Craig interpolants for `phi |= psi` as canonical truth tables over the
/// shared signature, one entry per Boolean function. Iterates every function
/// over the shared atoms directly, so the shared signature is capped at
/// [`ENUMERATION_LIMIT`] atoms.
pub fn enumerate_interpolants(
    phi: &Formula,
    psi: &Formula,
    limits: &Limits,
) -> Result<Vec<TruthTable>> {
    let shared: Vec<Atom> = phi.sig().intersection(&psi.sig()).iter().collect();
    let k = shared.len();
    if k > ENUMERATION_LIMIT {
        return Err(Error::OracleLimit {
            atoms: k,
            limit: ENUMERATION_LIMIT,
        });
    }
    let order = joint_order(phi, psi);
    let phi_t = truth_table(phi, &order, limits)?;
    let psi_t = truth_table(psi, &order, limits)?;
    let n = order.len();
    let rows = 1usize << n;

    // Index of each joint row's restriction to the shared atoms.
    let positions: Vec<usize> = shared
        .iter()
        .map(|a| order.iter().position(|b| b == a).unwrap())
        .collect();
    let shared_row: Vec<usize> = (0..rows)
        .map(|row| {
            positions.iter().fold(0usize, |acc, &j| {
                acc << 1 | (row >> (n - 1 - j) & 1)
            })
        })
        .collect();

    let fun_rows = 1usize << k;
    let mut out = Vec::new();
    for fun in 0u64..1u64 << fun_rows {
        let mut ok = true;
        for row in 0..rows {
            let f_val = fun >> shared_row[row] & 1 == 1;
            if phi_t.bit(row) && !f_val {
                ok = false;
                break;
            }
            if f_val && !psi_t.bit(row) {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(TruthTable {
                atoms: shared.clone(),
                bits: vec![fun],
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn lims() -> Limits {
        Limits::default()
    }

    #[test]
    fn truth_table_examples() {
        let p = Atom::new("p");
        let q = Atom::new("q");
        let t = truth_table(&Formula::var("p"), &[p], &lims()).unwrap();
        assert_eq!(t.bit_string(), "01");
        let t = truth_table(&Formula::top(), &[], &lims()).unwrap();
        assert_eq!(t.bit_string(), "1");
        let t = truth_table(&parse_formula("p & q").unwrap(), &[p, q], &lims()).unwrap();
        assert_eq!(t.bit_string(), "0001");
    }

    #[test]
    fn entailment_examples() {
        let l = lims();
        assert!(entails(
            &parse_formula("p & q1").unwrap(),
            &parse_formula("q2 -> p").unwrap(),
            &l
        )
        .unwrap());
        assert!(entails(
            &parse_formula("p & ~p").unwrap(),
            &Formula::var("q"),
            &l
        )
        .unwrap());
        assert!(!entails(
            &Formula::var("p"),
            &parse_formula("p & q").unwrap(),
            &l
        )
        .unwrap());
    }

    #[test]
    fn oracle_limit_guard() {
        let mut limits = lims();
        limits.oracle_atoms = 2;
        let f = parse_formula("a & b & c").unwrap();
        assert!(matches!(
            entails(&f, &f, &limits),
            Err(Error::OracleLimit { atoms: 3, limit: 2 })
        ));
    }

    #[test]
    fn check_examples() {
        let l = lims();
        let phi = parse_formula("p & q1").unwrap();
        let psi = parse_formula("q2 -> p").unwrap();
        assert!(check_interpolant(&phi, &psi, &Formula::var("p"), &l).unwrap());
        assert!(!check_interpolant(&phi, &psi, &parse_formula("~p").unwrap(), &l).unwrap());
    }

    #[test]
    fn lyndon_rejects_wrong_polarity() {
        let l = lims();
        let phi = parse_formula("(p -> q) & (r -> (p | q)) & t").unwrap();
        let psi = parse_formula("(p -> (q & t)) & ((q & s) -> t)").unwrap();
        let good = parse_formula("(p -> q) & t").unwrap();
        assert!(check_lyndon(&phi, &psi, &good, &l).unwrap());
        // A Craig interpolant with a negative occurrence of q is not Lyndon.
        let bad = parse_formula("(p -> (q & t)) & (q -> t)").unwrap();
        assert!(check_interpolant(&phi, &psi, &bad, &l).unwrap());
        assert!(!check_lyndon(&phi, &psi, &bad, &l).unwrap());
    }

    #[test]
    fn enumerate_examples() {
        let l = lims();
        let phi = parse_formula("p & q & r").unwrap();
        let psi = parse_formula("s -> (p | q)").unwrap();
        let all = enumerate_interpolants(&phi, &psi, &l).unwrap();
        assert_eq!(all.len(), 4);
        let expected: Vec<String> = ["p & q", "p", "q", "p | q"]
            .iter()
            .map(|s| {
                let f = parse_formula(s).unwrap();
                truth_table(&f, &[Atom::new("p"), Atom::new("q")], &l)
                    .unwrap()
                    .bit_string()
            })
            .collect();
        for t in &all {
            assert!(expected.contains(&t.bit_string()));
        }

        let phi = parse_formula("p & q1").unwrap();
        let psi = parse_formula("q2 -> p").unwrap();
        let all = enumerate_interpolants(&phi, &psi, &l).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].bit_string(), "01"); // exactly p

        let phi = parse_formula("(p1 & ~p1) & (p2 & ~p2)").unwrap();
        let psi = parse_formula("(p1 | ~p1) | (p2 | ~p2)").unwrap();
        let all = enumerate_interpolants(&phi, &psi, &l).unwrap();
        assert_eq!(all.len(), 16); // every function over {p1, p2}
    }

    #[test]
    fn tables_are_canonical() {
        let l = lims();
        let p = Atom::new("p");
        let q = Atom::new("q");
        let a = truth_table(&parse_formula("p | q").unwrap(), &[p, q], &l).unwrap();
        let b = truth_table(&parse_formula("~(~p & ~q)").unwrap(), &[p, q], &l).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wide_tables_use_word_patterns() {
        let l = lims();
        // 8 atoms exercises both the sub-word and whole-word pattern paths.
        let atoms: Vec<Atom> = (0..8).map(|i| Atom::new(&format!("w{i}"))).collect();
        let f = Formula::conj(atoms.iter().map(|&a| Formula::atom(a)));
        let t = truth_table(&f, &atoms, &l).unwrap();
        assert_eq!(t.rows(), 256);
        assert!((0..255).all(|r| !t.bit(r)));
        assert!(t.bit(255));
    }
}
