//! Atoms, signatures, polarities and valuations.
//!
//! Atom names are interned in a global pool: equal names share one identity,
//! so atoms are `Copy` and cheap to compare. Ordering is by name, which keeps
//! every signature- or clause-ordered output independent of creation order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::error::Error;

static POOL: Lazy<Mutex<AtomPool>> = Lazy::new(|| Mutex::new(AtomPool::default()));

#[derive(Default)]
struct AtomPool {
    by_name: HashMap<&'static str, u32>,
    names: Vec<&'static str>,
}

/// A propositional variable. Interned: two atoms with the same name are equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom(u32);

impl Atom {
    /// Interns `name` and returns the atom for it.
    ///
    /// Panics if the name is not a valid identifier of the formula grammar
    /// (`[A-Za-z_][A-Za-z0-9_']*`); use [`Atom::try_new`] for fallible
    /// construction from untrusted input.
    pub fn new(name: &str) -> Atom {
        Atom::try_new(name).expect("invalid atom name")
    }

    pub fn try_new(name: &str) -> Result<Atom, Error> {
        if !is_valid_name(name) {
            return Err(Error::Precondition(format!(
                "invalid atom name {name:?}: expected [A-Za-z_][A-Za-z0-9_']*"
            )));
        }
        let mut pool = POOL.lock().unwrap();
        if let Some(&id) = pool.by_name.get(name) {
            return Ok(Atom(id));
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = pool.names.len() as u32;
        pool.by_name.insert(leaked, id);
        pool.names.push(leaked);
        Ok(Atom(id))
    }

    pub fn name(self) -> &'static str {
        POOL.lock().unwrap().names[self.0 as usize]
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Atom) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Atom) -> Ordering {
        if self.0 == other.0 {
            Ordering::Equal
        } else {
            self.name().cmp(other.name())
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite set of atoms, ordered by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default, Debug)]
pub struct Signature(BTreeSet<Atom>);

impl Signature {
    pub fn new() -> Signature {
        Signature(BTreeSet::new())
    }

    pub fn singleton(a: Atom) -> Signature {
        Signature(std::iter::once(a).collect())
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: Atom) {
        self.0.insert(a);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &Signature) -> Signature {
        Signature(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &Signature) -> Signature {
        Signature(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Signature) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl FromIterator<Atom> for Signature {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Signature {
        Signature(iter.into_iter().collect())
    }
}

impl IntoIterator for Signature {
    type Item = Atom;
    type IntoIter = std::collections::btree_set::IntoIter<Atom>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a Signature {
    type Item = &'a Atom;
    type IntoIter = std::collections::btree_set::Iter<'a, Atom>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Polarity of an atom occurrence: under an even (`Pos`) or odd (`Neg`)
/// number of negations.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Polarity {
    Pos,
    Neg,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Pos => write!(f, "+"),
            Polarity::Neg => write!(f, "-"),
        }
    }
}

/// The set of (atom, polarity) pairs occurring in a formula.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct PolaritySignature(BTreeSet<(Atom, Polarity)>);

impl PolaritySignature {
    pub fn new() -> PolaritySignature {
        PolaritySignature(BTreeSet::new())
    }

    pub fn insert(&mut self, a: Atom, p: Polarity) {
        self.0.insert((a, p));
    }

    pub fn contains(&self, a: Atom, p: Polarity) -> bool {
        self.0.contains(&(a, p))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, Polarity)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &PolaritySignature) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection(&self, other: &PolaritySignature) -> PolaritySignature {
        PolaritySignature(self.0.intersection(&other.0).copied().collect())
    }

    /// Atoms of the entries, forgetting polarity.
    pub fn atoms(&self) -> Signature {
        self.0.iter().map(|&(a, _)| a).collect()
    }
}

impl FromIterator<(Atom, Polarity)> for PolaritySignature {
    fn from_iter<I: IntoIterator<Item = (Atom, Polarity)>>(iter: I) -> PolaritySignature {
        PolaritySignature(iter.into_iter().collect())
    }
}

impl fmt::Display for PolaritySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, p)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{p})")?;
        }
        write!(f, "}}")
    }
}

/// A finite assignment of truth values to atoms.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Valuation(BTreeMap<Atom, bool>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation(BTreeMap::new())
    }

    pub fn set(&mut self, a: Atom, value: bool) {
        self.0.insert(a, value);
    }

    pub fn get(&self, a: Atom) -> Option<bool> {
        self.0.get(&a).copied()
    }

    pub fn atoms(&self) -> Signature {
        self.0.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, bool)> + '_ {
        self.0.iter().map(|(&a, &v)| (a, v))
    }

    /// Restriction of the assignment to the atoms in `sig`.
    pub fn restrict(&self, sig: &Signature) -> Valuation {
        Valuation(
            self.0
                .iter()
                .filter(|(a, _)| sig.contains(**a))
                .map(|(&a, &v)| (a, v))
                .collect(),
        )
    }
}

impl FromIterator<(Atom, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Atom, bool)>>(iter: I) -> Valuation {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", a, if *v { 1 } else { 0 })?;
        }
        Ok(())
    }
}

/// Generator of fresh atoms that avoids a growing set of used names.
///
/// Follows the primed-atom convention: the first candidate for `p` is `p'`,
/// then `p'1`, `p'2`, ... on collision.
pub struct FreshAtoms {
    used: BTreeSet<&'static str>,
}

impl FreshAtoms {
    pub fn avoiding(sig: &Signature) -> FreshAtoms {
        FreshAtoms {
            used: sig.iter().map(|a| a.name()).collect(),
        }
    }

    pub fn reserve(&mut self, a: Atom) {
        self.used.insert(a.name());
    }

    /// A primed variant of `base` not seen before.
    pub fn primed(&mut self, base: Atom) -> Atom {
        let stem = format!("{}'", base.name());
        if !self.used.contains(stem.as_str()) {
            let a = Atom::new(&stem);
            self.used.insert(a.name());
            return a;
        }
        for k in 1u64.. {
            let candidate = format!("{stem}{k}");
            if !self.used.contains(candidate.as_str()) {
                let a = Atom::new(&candidate);
                self.used.insert(a.name());
                return a;
            }
        }
        unreachable!()
    }

    /// A fresh atom `<stem><k>` with no relation to an existing name.
    pub fn numbered(&mut self, stem: &str) -> Atom {
        for k in 1u64.. {
            let candidate = format!("{stem}{k}");
            if !self.used.contains(candidate.as_str()) {
                let a = Atom::new(&candidate);
                self.used.insert(a.name());
                return a;
            }
        }
        unreachable!()
    }
}
