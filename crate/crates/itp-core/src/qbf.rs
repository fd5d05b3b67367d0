//! Quantified Boolean formulas, quantifier elimination, and the
//! elimination-based route to uniform, strongest and weakest interpolants.

use std::collections::HashMap;
use std::fmt;

use crate::atom::{Atom, Signature, Valuation};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind};
use crate::limits::Limits;
use crate::oracle;

/// A propositional formula extended with existential quantification over
/// atoms. Universal quantification is the derived form `~exists p. ~f`.
#[derive(Clone, PartialEq, Eq)]
pub enum Qbf {
    Prop(Formula),
    Not(Box<Qbf>),
    And(Box<Qbf>, Box<Qbf>),
    Or(Box<Qbf>, Box<Qbf>),
    Exists(Atom, Box<Qbf>),
}

impl Qbf {
    pub fn prop(f: &Formula) -> Qbf {
        Qbf::Prop(f.clone())
    }

    pub fn not(f: &Qbf) -> Qbf {
        match f {
            Qbf::Prop(g) => Qbf::Prop(Formula::not(g)),
            _ => Qbf::Not(Box::new(f.clone())),
        }
    }

    pub fn and(a: &Qbf, b: &Qbf) -> Qbf {
        match (a, b) {
            (Qbf::Prop(x), Qbf::Prop(y)) => Qbf::Prop(Formula::and(x, y)),
            _ => Qbf::And(Box::new(a.clone()), Box::new(b.clone())),
        }
    }

    pub fn or(a: &Qbf, b: &Qbf) -> Qbf {
        match (a, b) {
            (Qbf::Prop(x), Qbf::Prop(y)) => Qbf::Prop(Formula::or(x, y)),
            _ => Qbf::Or(Box::new(a.clone()), Box::new(b.clone())),
        }
    }

    pub fn implies(a: &Qbf, b: &Qbf) -> Qbf {
        Qbf::or(&Qbf::not(a), b)
    }

    pub fn iff(a: &Qbf, b: &Qbf) -> Qbf {
        Qbf::and(&Qbf::implies(a, b), &Qbf::implies(b, a))
    }

    pub fn exists(p: Atom, body: &Qbf) -> Qbf {
        Qbf::Exists(p, Box::new(body.clone()))
    }

    /// `forall p. f`, derived as `~exists p. ~f`.
    pub fn forall(p: Atom, body: &Qbf) -> Qbf {
        Qbf::not(&Qbf::exists(p, &Qbf::not(body)))
    }

    /// The formula, if no quantifier occurs.
    pub fn as_propositional(&self) -> Option<Formula> {
        match self {
            Qbf::Prop(f) => Some(f.clone()),
            Qbf::Not(g) => Some(Formula::not(&g.as_propositional()?)),
            Qbf::And(a, b) => Some(Formula::and(&a.as_propositional()?, &b.as_propositional()?)),
            Qbf::Or(a, b) => Some(Formula::or(&a.as_propositional()?, &b.as_propositional()?)),
            Qbf::Exists(..) => None,
        }
    }

    /// Free atoms: `sig(exists p. f) = sig(f) \ {p}`.
    pub fn sig(&self) -> Signature {
        match self {
            Qbf::Prop(f) => f.sig(),
            Qbf::Not(g) => g.sig(),
            Qbf::And(a, b) | Qbf::Or(a, b) => a.sig().union(&b.sig()),
            Qbf::Exists(p, body) => body.sig().difference(&Signature::singleton(*p)),
        }
    }

    /// Truth value under `v`, which must assign every free atom.
    pub fn eval(&self, v: &Valuation) -> Result<bool> {
        match self {
            Qbf::Prop(f) => f.eval(v),
            Qbf::Not(g) => Ok(!g.eval(v)?),
            Qbf::And(a, b) => Ok(a.eval(v)? && b.eval(v)?),
            Qbf::Or(a, b) => Ok(a.eval(v)? || b.eval(v)?),
            Qbf::Exists(p, body) => {
                let mut v0 = v.clone();
                v0.set(*p, false);
                let mut v1 = v.clone();
                v1.set(*p, true);
                Ok(body.eval(&v0)? || body.eval(&v1)?)
            }
        }
    }
}

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Qbf::Prop(g) => write!(f, "{g}"),
            Qbf::Not(g) => write!(f, "~({g})"),
            Qbf::And(a, b) => write!(f, "({a}) & ({b})"),
            Qbf::Or(a, b) => write!(f, "({a}) | ({b})"),
            Qbf::Exists(p, body) => write!(f, "exists {p}. {body}"),
        }
    }
}

impl fmt::Debug for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exhaustively rewrites with `~false = true`, `~true = false`,
/// `true & f = f`, `false & f = false`, `true | f = true`, `false | f = f`
/// and the symmetric variants. The result contains a constant only if it
/// *is* that constant.
pub fn simplify_constants(f: &Formula) -> Formula {
    fn go(f: &Formula, memo: &mut HashMap<u64, Formula>) -> Formula {
        if let Some(g) = memo.get(&f.id()) {
            return g.clone();
        }
        let out = match f.kind() {
            FormulaKind::Atom(_) | FormulaKind::Top | FormulaKind::Bottom => f.clone(),
            FormulaKind::Not(g) => {
                let g = go(g, memo);
                match g.kind() {
                    FormulaKind::Top => Formula::bottom(),
                    FormulaKind::Bottom => Formula::top(),
                    _ => Formula::not(&g),
                }
            }
            FormulaKind::And(a, b) => {
                let a = go(a, memo);
                let b = go(b, memo);
                if a.is_bottom() || b.is_bottom() {
                    Formula::bottom()
                } else if a.is_top() {
                    b
                } else if b.is_top() {
                    a
                } else {
                    Formula::and(&a, &b)
                }
            }
            FormulaKind::Or(a, b) => {
                let a = go(a, memo);
                let b = go(b, memo);
                if a.is_top() || b.is_top() {
                    Formula::top()
                } else if a.is_bottom() {
                    b
                } else if b.is_bottom() {
                    a
                } else {
                    Formula::or(&a, &b)
                }
            }
        };
        memo.insert(f.id(), out.clone());
        out
    }
    go(f, &mut HashMap::new())
}

/// Eliminates a single existential quantifier:
/// `exists p. f  =  f[p/false] | f[p/true]`, followed by constant
/// simplification.
fn eliminate_one(f: &Formula, p: Atom, limits: &Limits) -> Result<Formula> {
    let lo = f.substitute_atom(p, &Formula::bottom());
    let hi = f.substitute_atom(p, &Formula::top());
    let expanded = simplify_constants(&Formula::or(&lo, &hi));
    if expanded.dag_size() > limits.clause_cap {
        return Err(Error::ClauseCap {
            cap: limits.clause_cap,
        });
    }
    Ok(expanded)
}

/// Quantifier elimination: returns a quantifier-free formula equivalent to
/// `q`. Quantifiers are expanded innermost-out; constants are simplified
/// after every single-atom expansion.
pub fn eliminate(q: &Qbf, limits: &Limits) -> Result<Formula> {
    match q {
        Qbf::Prop(f) => Ok(f.clone()),
        Qbf::Not(g) => Ok(simplify_constants(&Formula::not(&eliminate(g, limits)?))),
        Qbf::And(a, b) => Ok(simplify_constants(&Formula::and(
            &eliminate(a, limits)?,
            &eliminate(b, limits)?,
        ))),
        Qbf::Or(a, b) => Ok(simplify_constants(&Formula::or(
            &eliminate(a, limits)?,
            &eliminate(b, limits)?,
        ))),
        Qbf::Exists(p, body) => {
            let inner = eliminate(body, limits)?;
            eliminate_one(&inner, *p, limits)
        }
    }
}

/// The uniform interpolant of `phi` that keeps exactly the atoms in `keep`:
/// the strongest consequence of `phi` over `keep`, computed by eliminating
/// the atoms of `sig(phi) \ keep` in ascending name order.
pub fn uniform_keep_qe(phi: &Formula, keep: &Signature, limits: &Limits) -> Result<Formula> {
    let sig = phi.sig();
    if !keep.is_subset(&sig) {
        return Err(Error::Precondition(format!(
            "kept signature {keep} is not a subset of sig = {sig}"
        )));
    }
    let mut f = phi.clone();
    for p in sig.difference(keep).iter() {
        f = eliminate_one(&f, p, limits)?;
    }
    Ok(f)
}

/// The logically strongest Craig interpolant for `phi |= psi`:
/// `exists (sig(phi) \ sig(psi)). phi`, eliminated.
pub fn strongest_interpolant(phi: &Formula, psi: &Formula, limits: &Limits) -> Result<Formula> {
    if let Some(countermodel) = oracle::entailment_countermodel(phi, psi, limits)? {
        return Err(Error::NotEntailed { countermodel });
    }
    let mut f = phi.clone();
    for p in phi.sig().difference(&psi.sig()).iter() {
        f = eliminate_one(&f, p, limits)?;
    }
    Ok(f)
}

/// The logically weakest Craig interpolant for `phi |= psi`:
/// `forall (sig(psi) \ sig(phi)). psi`, with `forall` the derived
/// quantifier, eliminated.
pub fn weakest_interpolant(phi: &Formula, psi: &Formula, limits: &Limits) -> Result<Formula> {
    if let Some(countermodel) = oracle::entailment_countermodel(phi, psi, limits)? {
        return Err(Error::NotEntailed { countermodel });
    }
    let mut q = Qbf::prop(psi);
    // Innermost quantifier first: fold in reverse name order so elimination
    // proceeds in ascending name order.
    let outside: Vec<Atom> = psi.sig().difference(&phi.sig()).iter().collect();
    for &p in outside.iter().rev() {
        q = Qbf::forall(p, &q);
    }
    eliminate(&q, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::equivalent;
    use crate::parser::{parse_formula, parse_qbf};

    fn lims() -> Limits {
        Limits::default()
    }

    #[test]
    fn qbf_eval_examples() {
        let f = parse_qbf("exists p. p").unwrap();
        assert!(f.eval(&Valuation::new()).unwrap());

        let g = parse_qbf("exists q. (p -> q) & (q -> r)").unwrap();
        let mut v = Valuation::new();
        v.set(Atom::new("p"), true);
        v.set(Atom::new("r"), false);
        assert!(!g.eval(&v).unwrap());
        let mut v = Valuation::new();
        v.set(Atom::new("p"), false);
        v.set(Atom::new("r"), false);
        assert!(g.eval(&v).unwrap());
    }

    #[test]
    fn qbf_sig_removes_bound_atoms() {
        let g = parse_qbf("exists q. (p -> q) & (q -> r)").unwrap();
        let expected: Signature = [Atom::new("p"), Atom::new("r")].into_iter().collect();
        assert_eq!(g.sig(), expected);
    }

    #[test]
    fn eliminate_examples() {
        let g = parse_qbf("exists q. (p -> q) & (q -> r)").unwrap();
        let f = eliminate(&g, &lims()).unwrap();
        assert_eq!(f, parse_formula("~p | r").unwrap());
        assert!(equivalent(&f, &parse_formula("p -> r").unwrap(), &lims()).unwrap());

        let h = parse_qbf("exists p. p & ~p").unwrap();
        assert_eq!(eliminate(&h, &lims()).unwrap(), Formula::bottom());

        let k = parse_qbf("exists p1. exists p2. p1 | p2").unwrap();
        assert_eq!(eliminate(&k, &lims()).unwrap(), Formula::top());
    }

    #[test]
    fn simplify_examples() {
        let f = parse_formula("false | ((true & a) & (b | c))").unwrap();
        assert_eq!(simplify_constants(&f), parse_formula("a & (b | c)").unwrap());

        let g = parse_formula("(p -> false) & (false -> r) | (p -> true) & (true -> r)").unwrap();
        assert_eq!(simplify_constants(&g), parse_formula("~p | r").unwrap());

        let p = Formula::var("p");
        assert_eq!(simplify_constants(&p), p);
    }

    #[test]
    fn uniform_keep_examples() {
        let phi = parse_formula("p & q1").unwrap();
        let keep = Signature::singleton(Atom::new("p"));
        let u = uniform_keep_qe(&phi, &keep, &lims()).unwrap();
        assert_eq!(u, Formula::var("p"));

        let phi = parse_formula("p & q & r").unwrap();
        let keep: Signature = [Atom::new("p"), Atom::new("q")].into_iter().collect();
        let u = uniform_keep_qe(&phi, &keep, &lims()).unwrap();
        assert!(equivalent(&u, &parse_formula("p & q").unwrap(), &lims()).unwrap());

        // Naive literal dropping would give p & ~p here; elimination is exact.
        let phi = parse_formula("(p | q) & ~p").unwrap();
        let keep = Signature::singleton(Atom::new("p"));
        let u = uniform_keep_qe(&phi, &keep, &lims()).unwrap();
        assert!(equivalent(&u, &parse_formula("~p").unwrap(), &lims()).unwrap());
    }

    #[test]
    fn uniform_keep_requires_subset() {
        let phi = parse_formula("p & q").unwrap();
        let keep = Signature::singleton(Atom::new("z_unseen"));
        assert!(matches!(
            uniform_keep_qe(&phi, &keep, &lims()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn strongest_weakest_examples() {
        let phi = parse_formula("p & q & r").unwrap();
        let psi = parse_formula("s -> (p | q)").unwrap();
        let s = strongest_interpolant(&phi, &psi, &lims()).unwrap();
        assert!(equivalent(&s, &parse_formula("p & q").unwrap(), &lims()).unwrap());
        let w = weakest_interpolant(&phi, &psi, &lims()).unwrap();
        assert!(equivalent(&w, &parse_formula("p | q").unwrap(), &lims()).unwrap());

        let s = strongest_interpolant(
            &parse_formula("p & ~p").unwrap(),
            &Formula::var("q"),
            &lims(),
        )
        .unwrap();
        assert_eq!(s, Formula::bottom());

        let w = weakest_interpolant(
            &parse_formula("p & q1").unwrap(),
            &parse_formula("q2 -> p").unwrap(),
            &lims(),
        )
        .unwrap();
        assert!(equivalent(&w, &Formula::var("p"), &lims()).unwrap());
    }

    #[test]
    fn not_entailed_reports_countermodel() {
        let err = strongest_interpolant(&Formula::var("p"), &Formula::var("q"), &lims());
        match err {
            Err(Error::NotEntailed { countermodel }) => {
                assert_eq!(countermodel.get(Atom::new("p")), Some(true));
                assert_eq!(countermodel.get(Atom::new("q")), Some(false));
            }
            other => panic!("expected NotEntailed, got {other:?}"),
        }
    }
}
