//! DIMACS CNF reading and writing.
//!
//! The standard `p cnf <vars> <clauses>` header with 0-terminated clause
//! lines. Atom names travel in comment lines of the form `c var <n> <name>`;
//! variables without such a comment are named `x<n>` on input.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::nf::{Clause, ClauseSet, Literal};

fn derr(message: impl Into<String>, line: usize) -> Error {
    Error::Dimacs {
        message: message.into(),
        line,
    }
}

/// Parses DIMACS text into a clause set.
pub fn read(text: &str) -> Result<ClauseSet> {
    let mut names: HashMap<usize, Atom> = HashMap::new();
    let mut clause_count: Option<usize> = None;
    let mut var_count = 0usize;
    let mut clauses = ClauseSet::new();
    let mut current = Clause::new();
    let mut seen_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() == 3 && fields[0] == "var" {
                let idx: usize = fields[1]
                    .parse()
                    .map_err(|_| derr("bad index in 'c var' comment", lineno))?;
                names.insert(idx, Atom::try_new(fields[2])?);
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(derr("expected 'p cnf <vars> <clauses>'", lineno));
            }
            var_count = fields[1]
                .parse()
                .map_err(|_| derr("bad variable count", lineno))?;
            clause_count = Some(
                fields[2]
                    .parse()
                    .map_err(|_| derr("bad clause count", lineno))?,
            );
            seen_header = true;
            continue;
        }
        if !seen_header {
            return Err(derr("clause before 'p cnf' header", lineno));
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| derr(format!("bad literal {tok:?}"), lineno))?;
            if v == 0 {
                clauses.insert(std::mem::take(&mut current));
                continue;
            }
            let idx = v.unsigned_abs() as usize;
            if idx > var_count {
                return Err(derr(format!("variable {idx} beyond header count"), lineno));
            }
            let atom = *names
                .entry(idx)
                .or_insert_with(|| Atom::new(&format!("x{idx}")));
            current.insert(Literal {
                atom,
                positive: v > 0,
            });
        }
    }
    if !current.is_empty() {
        return Err(derr("last clause not 0-terminated", text.lines().count()));
    }
    if let Some(expected) = clause_count {
        // Duplicate clauses collapse under set semantics; only complain when
        // the file contains more clauses than the header promises.
        if clauses.len() > expected {
            return Err(derr(
                format!("{} clauses found, header says {expected}", clauses.len()),
                text.lines().count(),
            ));
        }
    }
    Ok(clauses)
}

/// Serializes a clause set to DIMACS with `c var` name comments. Variables
/// are numbered in ascending atom-name order.
pub fn write(clauses: &ClauseSet) -> String {
    let atoms: Vec<Atom> = clauses.atoms().iter().collect();
    let index: HashMap<Atom, usize> = atoms.iter().enumerate().map(|(i, &a)| (a, i + 1)).collect();
    let mut out = String::new();
    for (i, a) in atoms.iter().enumerate() {
        let _ = writeln!(out, "c var {} {}", i + 1, a);
    }
    let _ = writeln!(out, "p cnf {} {}", atoms.len(), clauses.len());
    for clause in clauses.iter() {
        for lit in clause.iter() {
            let idx = index[&lit.atom] as i64;
            let _ = write!(out, "{} ", if lit.positive { idx } else { -idx });
        }
        let _ = writeln!(out, "0");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_clauses() {
        let input: ClauseSet = [
            [Literal::pos(Atom::new("a")), Literal::neg(Atom::new("b"))]
                .into_iter()
                .collect::<Clause>(),
            std::iter::once(Literal::pos(Atom::new("b"))).collect(),
        ]
        .into_iter()
        .collect();
        let text = write(&input);
        let back = read(&text).unwrap();
        assert_eq!(input, back);
    }

    #[test]
    fn reads_unnamed_variables() {
        let text = "p cnf 2 2\n1 -2 0\n2 0\n";
        let cnf = read(text).unwrap();
        assert_eq!(cnf.len(), 2);
        assert!(cnf.atoms().contains(Atom::new("x1")));
    }

    #[test]
    fn rejects_malformed() {
        assert!(read("1 2 0").is_err());
        assert!(read("p cnf 1 1\n2 0\n").is_err());
        assert!(read("p cnf 1 1\n1\n").is_err());
    }
}
