//! Hash-consed propositional formulas.
//!
//! The grammar is atoms, `true`, `false`, negation, conjunction and
//! disjunction; implication and biconditional are expanded into this core at
//! construction time. Structurally identical subformulas share one node in a
//! global store, so equality is a pointer comparison and the dag-size of a
//! formula (its number of distinct subformulas) is computed in time linear in
//! the number of nodes.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, Weak};

use once_cell::sync::Lazy;

use crate::atom::{Atom, FreshAtoms, Polarity, PolaritySignature, Signature, Valuation};
use crate::error::{Error, Result};

/// Shape of a formula node. Obtained from [`Formula::kind`].
#[derive(Clone)]
pub enum FormulaKind {
    Atom(Atom),
    Top,
    Bottom,
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
}

struct FormulaNode {
    id: u64,
    kind: FormulaKind,
}

/// An immutable, shared propositional formula.
///
/// Cloning is cheap (reference count bump). Two formulas compare equal iff
/// they are structurally identical.
#[derive(Clone)]
pub struct Formula(Arc<FormulaNode>);

#[derive(PartialEq, Eq, Hash)]
enum InternKey {
    Atom(Atom),
    Top,
    Bottom,
    Not(u64),
    And(u64, u64),
    Or(u64, u64),
}

static NEXT_ID: AtomicU64 = AtomicU64::new(0);
static STORE: Lazy<Mutex<HashMap<InternKey, Weak<FormulaNode>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn intern(key: InternKey, kind: FormulaKind) -> Formula {
    let mut store = STORE.lock().unwrap();
    if let Some(weak) = store.get(&key) {
        if let Some(node) = weak.upgrade() {
            return Formula(node);
        }
    }
    let node = Arc::new(FormulaNode {
        id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
        kind,
    });
    store.insert(key, Arc::downgrade(&node));
    if store.len() > 1 << 20 {
        store.retain(|_, w| w.strong_count() > 0);
    }
    Formula(node)
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        intern(InternKey::Atom(a), FormulaKind::Atom(a))
    }

    /// Convenience constructor interning the atom name on the fly.
    pub fn var(name: &str) -> Formula {
        Formula::atom(Atom::new(name))
    }

    pub fn top() -> Formula {
        intern(InternKey::Top, FormulaKind::Top)
    }

    pub fn bottom() -> Formula {
        intern(InternKey::Bottom, FormulaKind::Bottom)
    }

    pub fn not(f: &Formula) -> Formula {
        intern(InternKey::Not(f.id()), FormulaKind::Not(f.clone()))
    }

    pub fn and(a: &Formula, b: &Formula) -> Formula {
        intern(
            InternKey::And(a.id(), b.id()),
            FormulaKind::And(a.clone(), b.clone()),
        )
    }

    pub fn or(a: &Formula, b: &Formula) -> Formula {
        intern(
            InternKey::Or(a.id(), b.id()),
            FormulaKind::Or(a.clone(), b.clone()),
        )
    }

    /// `a -> b`, expanded to `~a | b`.
    pub fn implies(a: &Formula, b: &Formula) -> Formula {
        Formula::or(&Formula::not(a), b)
    }

    /// `a <-> b`, expanded to `(a -> b) & (b -> a)`.
    pub fn iff(a: &Formula, b: &Formula) -> Formula {
        Formula::and(&Formula::implies(a, b), &Formula::implies(b, a))
    }

    /// Conjunction of `items`; the empty conjunction is `true`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        match items.split_last() {
            None => Formula::top(),
            Some((last, rest)) => rest
                .iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::and(f, &acc)),
        }
    }

    /// Disjunction of `items`; the empty disjunction is `false`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        match items.split_last() {
            None => Formula::bottom(),
            Some((last, rest)) => rest
                .iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::or(f, &acc)),
        }
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    /// Stable node identifier; equal formulas have equal ids.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn is_top(&self) -> bool {
        matches!(self.kind(), FormulaKind::Top)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self.kind(), FormulaKind::Bottom)
    }

    pub fn as_atom(&self) -> Option<Atom> {
        match self.kind() {
            FormulaKind::Atom(a) => Some(*a),
            _ => None,
        }
    }

    /// The set of atoms occurring in the formula.
    pub fn sig(&self) -> Signature {
        let mut seen = HashSet::new();
        let mut out = Signature::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if !seen.insert(f.id()) {
                continue;
            }
            match f.kind() {
                FormulaKind::Atom(a) => out.insert(*a),
                FormulaKind::Top | FormulaKind::Bottom => {}
                FormulaKind::Not(g) => stack.push(g.clone()),
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
            }
        }
        out
    }

    /// Atom occurrences with their polarity (parity of enclosing negations).
    pub fn polarity_sig(&self) -> PolaritySignature {
        let mut seen = HashSet::new();
        let mut out = PolaritySignature::new();
        let mut stack = vec![(self.clone(), Polarity::Pos)];
        while let Some((f, pol)) = stack.pop() {
            if !seen.insert((f.id(), pol)) {
                continue;
            }
            match f.kind() {
                FormulaKind::Atom(a) => out.insert(*a, pol),
                FormulaKind::Top | FormulaKind::Bottom => {}
                FormulaKind::Not(g) => stack.push((g.clone(), pol.flip())),
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
                    stack.push((a.clone(), pol));
                    stack.push((b.clone(), pol));
                }
            }
        }
        out
    }

    /// Number of distinct subformulas.
    pub fn dag_size(&self) -> usize {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if !seen.insert(f.id()) {
                continue;
            }
            match f.kind() {
                FormulaKind::Not(g) => stack.push(g.clone()),
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                _ => {}
            }
        }
        seen.len()
    }

    /// Occurrence-counted size: s(atom) = s(true) = s(false) = 1,
    /// s(~f) = s(f) + 1, s(f & g) = s(f | g) = s(f) + s(g) + 1.
    ///
    /// Saturates at `u64::MAX` instead of overflowing.
    pub fn tree_size(&self) -> u64 {
        fn go(f: &Formula, memo: &mut HashMap<u64, u64>) -> u64 {
            if let Some(&s) = memo.get(&f.id()) {
                return s;
            }
            let s = match f.kind() {
                FormulaKind::Atom(_) | FormulaKind::Top | FormulaKind::Bottom => 1,
                FormulaKind::Not(g) => go(g, memo).saturating_add(1),
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) => go(a, memo)
                    .saturating_add(go(b, memo))
                    .saturating_add(1),
            };
            memo.insert(f.id(), s);
            s
        }
        go(self, &mut HashMap::new())
    }

    /// Truth value under `v`; errors if `v` misses an occurring atom.
    pub fn eval(&self, v: &Valuation) -> Result<bool> {
        fn go(f: &Formula, v: &Valuation, memo: &mut HashMap<u64, bool>) -> Result<bool> {
            if let Some(&b) = memo.get(&f.id()) {
                return Ok(b);
            }
            let b = match f.kind() {
                FormulaKind::Atom(a) => v.get(*a).ok_or(Error::MissingAtom(*a))?,
                FormulaKind::Top => true,
                FormulaKind::Bottom => false,
                FormulaKind::Not(g) => !go(g, v, memo)?,
                FormulaKind::And(x, y) => go(x, v, memo)? && go(y, v, memo)?,
                FormulaKind::Or(x, y) => go(x, v, memo)? || go(y, v, memo)?,
            };
            memo.insert(f.id(), b);
            Ok(b)
        }
        go(self, v, &mut HashMap::new())
    }

    /// Negation normal form: negations pushed down to atoms, `~true` and
    /// `~false` rewritten to the opposite constant. Equivalent to `self`
    /// with at most a twofold tree-size increase.
    pub fn nnf(&self) -> Formula {
        fn go(f: &Formula, negated: bool, memo: &mut HashMap<(u64, bool), Formula>) -> Formula {
            if let Some(g) = memo.get(&(f.id(), negated)) {
                return g.clone();
            }
            let out = match (f.kind(), negated) {
                (FormulaKind::Atom(_), false) => f.clone(),
                (FormulaKind::Atom(_), true) => Formula::not(f),
                (FormulaKind::Top, false) | (FormulaKind::Bottom, true) => Formula::top(),
                (FormulaKind::Top, true) | (FormulaKind::Bottom, false) => Formula::bottom(),
                (FormulaKind::Not(g), _) => go(g, !negated, memo),
                (FormulaKind::And(a, b), false) => {
                    Formula::and(&go(a, false, memo), &go(b, false, memo))
                }
                (FormulaKind::And(a, b), true) => {
                    Formula::or(&go(a, true, memo), &go(b, true, memo))
                }
                (FormulaKind::Or(a, b), false) => {
                    Formula::or(&go(a, false, memo), &go(b, false, memo))
                }
                (FormulaKind::Or(a, b), true) => {
                    Formula::and(&go(a, true, memo), &go(b, true, memo))
                }
            };
            memo.insert((f.id(), negated), out.clone());
            out
        }
        go(self, false, &mut HashMap::new())
    }

    /// True if the formula is built from literals, constants, `&` and `|`.
    pub fn is_nnf(&self) -> bool {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if !seen.insert(f.id()) {
                continue;
            }
            match f.kind() {
                FormulaKind::Not(g) => {
                    if g.as_atom().is_none() {
                        return false;
                    }
                }
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                _ => {}
            }
        }
        true
    }

    /// Simultaneous substitution of formulas for atoms.
    pub fn substitute(&self, map: &BTreeMap<Atom, Formula>) -> Formula {
        fn go(
            f: &Formula,
            map: &BTreeMap<Atom, Formula>,
            memo: &mut HashMap<u64, Formula>,
        ) -> Formula {
            if let Some(g) = memo.get(&f.id()) {
                return g.clone();
            }
            let out = match f.kind() {
                FormulaKind::Atom(a) => map.get(a).cloned().unwrap_or_else(|| f.clone()),
                FormulaKind::Top | FormulaKind::Bottom => f.clone(),
                FormulaKind::Not(g) => Formula::not(&go(g, map, memo)),
                FormulaKind::And(a, b) => Formula::and(&go(a, map, memo), &go(b, map, memo)),
                FormulaKind::Or(a, b) => Formula::or(&go(a, map, memo), &go(b, map, memo)),
            };
            memo.insert(f.id(), out.clone());
            out
        }
        go(self, map, &mut HashMap::new())
    }

    /// Substitution of a single atom.
    pub fn substitute_atom(&self, a: Atom, by: &Formula) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(a, by.clone());
        self.substitute(&map)
    }

    /// Replaces every atom of the formula that is *not* in `keep` by a fresh
    /// primed atom. Returns the renamed formula and the renaming.
    pub fn rename_fresh(&self, keep: &Signature) -> (Formula, BTreeMap<Atom, Atom>) {
        let sig = self.sig();
        let mut gen = FreshAtoms::avoiding(&sig.union(keep));
        let mut renaming = BTreeMap::new();
        let mut map = BTreeMap::new();
        for a in sig.difference(keep).iter() {
            let fresh = gen.primed(a);
            renaming.insert(a, fresh);
            map.insert(a, Formula::atom(fresh));
        }
        (self.substitute(&map), renaming)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

// Printing uses the CLI grammar: `~` binds tightest, then `&`, then `|`.
// Parentheses are emitted only where precedence requires them.
fn fmt_prec(f: &Formula, prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f.kind() {
        FormulaKind::Atom(a) => write!(out, "{a}"),
        FormulaKind::Top => write!(out, "true"),
        FormulaKind::Bottom => write!(out, "false"),
        FormulaKind::Not(g) => {
            write!(out, "~")?;
            fmt_prec(g, 3, out)
        }
        FormulaKind::And(a, b) => {
            let need = prec > 2;
            if need {
                write!(out, "(")?;
            }
            fmt_prec(a, 2, out)?;
            write!(out, " & ")?;
            fmt_prec(b, 2, out)?;
            if need {
                write!(out, ")")?;
            }
            Ok(())
        }
        FormulaKind::Or(a, b) => {
            let need = prec > 1;
            if need {
                write!(out, "(")?;
            }
            fmt_prec(a, 1, out)?;
            write!(out, " | ")?;
            fmt_prec(b, 1, out)?;
            if need {
                write!(out, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn p() -> Formula {
        Formula::var("p")
    }

    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn hash_consing_shares_nodes() {
        let a = Formula::and(&p(), &q());
        let b = Formula::and(&p(), &q());
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
    }

    #[test]
    fn eval_examples() {
        let mut v = Valuation::new();
        v.set(Atom::new("p"), true);
        v.set(Atom::new("q1"), true);
        let f = Formula::and(&p(), &Formula::var("q1"));
        assert!(f.eval(&v).unwrap());
        assert!(!Formula::bottom().eval(&Valuation::new()).unwrap());
        // ((p -> q) -> p) -> p is valid.
        let peirce = parse_formula("((p -> q) -> p) -> p").unwrap();
        for bits in 0..4u8 {
            let mut v = Valuation::new();
            v.set(Atom::new("p"), bits & 1 != 0);
            v.set(Atom::new("q"), bits & 2 != 0);
            assert!(peirce.eval(&v).unwrap());
        }
    }

    #[test]
    fn eval_missing_atom_errors() {
        let err = p().eval(&Valuation::new()).unwrap_err();
        assert!(matches!(err, Error::MissingAtom(a) if a.name() == "p"));
    }

    #[test]
    fn sig_and_polarity() {
        let f = parse_formula("(p -> q) & (r -> (p | q)) & t").unwrap();
        let expected: PolaritySignature = [
            (Atom::new("p"), Polarity::Pos),
            (Atom::new("p"), Polarity::Neg),
            (Atom::new("q"), Polarity::Pos),
            (Atom::new("r"), Polarity::Neg),
            (Atom::new("t"), Polarity::Pos),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.polarity_sig(), expected);

        let nn = Formula::not(&Formula::not(&p()));
        let pos: PolaritySignature = [(Atom::new("p"), Polarity::Pos)].into_iter().collect();
        assert_eq!(nn.polarity_sig(), pos);
    }

    #[test]
    fn sizes() {
        assert_eq!(p().dag_size(), 1);
        assert_eq!(p().tree_size(), 1);
        let pp = Formula::and(&p(), &p());
        assert_eq!(pp.tree_size(), 3);
        assert_eq!(pp.dag_size(), 2);
        assert_eq!(Formula::not(&p()).tree_size(), 2);
    }

    #[test]
    fn nnf_examples() {
        let d = Formula::var("d");
        let e = Formula::var("e");
        let f = Formula::not(&Formula::and(&d, &e));
        assert_eq!(f.nnf(), Formula::or(&Formula::not(&d), &Formula::not(&e)));
        assert_eq!(p().nnf(), p());
        let g = parse_formula("~((b -> c) & (d -> f))").unwrap();
        assert_eq!(g.nnf(), parse_formula("(b & ~c) | (d & ~f)").unwrap());
    }

    #[test]
    fn substitute_examples() {
        let f = parse_formula("(p -> q) & (q -> r)").unwrap();
        let g = f.substitute_atom(Atom::new("q"), &Formula::top());
        assert_eq!(g, parse_formula("(p -> true) & (true -> r)").unwrap());
        assert_eq!(p().substitute(&BTreeMap::new()), p());
    }

    #[test]
    fn rename_fresh_example() {
        let f = parse_formula("(p <-> q) & p").unwrap();
        let keep = Signature::singleton(Atom::new("q"));
        let (renamed, map) = f.rename_fresh(&keep);
        assert_eq!(map.len(), 1);
        let p1 = map[&Atom::new("p")];
        assert_eq!(p1.name(), "p'");
        let expected = Formula::and(
            &Formula::iff(&Formula::atom(p1), &q()),
            &Formula::atom(p1),
        );
        assert_eq!(renamed, expected);
        // Substituting the inverse renaming gives back the identical formula.
        let inverse: BTreeMap<Atom, Formula> =
            map.iter().map(|(&a, &b)| (b, Formula::atom(a))).collect();
        assert_eq!(renamed.substitute(&inverse), f);
    }

    #[test]
    fn display_minimal_parens() {
        let f = Formula::and(&Formula::or(&p(), &q()), &Formula::not(&p()));
        assert_eq!(f.to_string(), "(p | q) & ~p");
        let g = Formula::or(&Formula::and(&p(), &q()), &p());
        assert_eq!(g.to_string(), "p & q | p");
    }
}
