use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::relations::{Pattern, Variable};
use crate::tuples::{Domain, Index};
use crate::{Error, Result};

use super::builtin::builtin;
use super::scheme::{Indexing, Scheme};
use super::syntax::{Args, BodyAtom, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    /// A stored relation with a finite extent.
    Finite,
    /// A built-in relation decided per tuple.
    Intensional,
}

/// A body atom resolved against the scheme: `relation : pattern`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledAtom {
    pub relation: String,
    pub pattern: Pattern,
    pub kind: AtomKind,
    pub source: BodyAtom,
}

impl CompiledAtom {
    pub fn variables(&self) -> BTreeSet<Variable> {
        self.pattern.variables()
    }
}

/// The algebraic form of a rule: filterings, joined by a left fold, then projected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Filter {
        relation: String,
        pattern: Pattern,
    },
    Join(Box<Expr>, Box<Expr>),
    Project {
        onto: Vec<Variable>,
        input: Box<Expr>,
    },
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Filter { relation, pattern } => write!(f, "{relation}:{pattern}"),
            Expr::Join(l, r) => match r.as_ref() {
                Expr::Join(..) => write!(f, "{l} ⋈ ({r})"),
                _ => write!(f, "{l} ⋈ {r}"),
            },
            Expr::Project { onto, input } => {
                f.write_str("π[")?;
                for (i, v) in onto.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]({input})")
            }
        }
    }
}

/// A rule resolved against a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub rule: Rule,
    pub atoms: Vec<CompiledAtom>,
    /// Domains of the variables whose domain is fixed by some atom.
    pub domains: BTreeMap<Variable, Domain>,
    pub expr: Expr,
}

impl Query {
    pub fn head(&self) -> &[Variable] {
        &self.rule.head
    }

    /// Variables occurring in some stored-relation atom.
    pub fn finitely_bound(&self) -> BTreeSet<Variable> {
        self.atoms
            .iter()
            .filter(|a| a.kind == AtomKind::Finite)
            .flat_map(|a| a.variables())
            .collect()
    }
}

fn bind(domains: &mut BTreeMap<Variable, Domain>, v: &Variable, d: &Domain) -> Result<()> {
    match domains.get(v) {
        Some(existing) if existing != d => Err(Error::VariableDomainConflict {
            variable: v.to_string(),
            first: existing.to_string(),
            second: d.to_string(),
        }),
        Some(_) => Ok(()),
        None => {
            domains.insert(v.clone(), d.clone());
            Ok(())
        }
    }
}

fn bad(relation: &str, message: String) -> Error {
    Error::BadAtom {
        relation: relation.to_string(),
        message,
    }
}

fn resolve(
    atom: &BodyAtom,
    scheme: &Scheme,
    domains: &mut BTreeMap<Variable, Domain>,
) -> Result<CompiledAtom> {
    let name = atom.relation.as_str();
    if let Some(rs) = scheme.relation(name) {
        let sig = rs.signature();
        let entries: Vec<(Index, Variable)> = match (&atom.args, rs.indexing()) {
            (Args::Named(args), Indexing::Named) => {
                let mut seen = BTreeSet::new();
                for (attr, _) in args {
                    let i = Index::name(attr.as_str());
                    if sig.get(&i).is_none() {
                        return Err(Error::UnknownAttribute {
                            relation: name.to_string(),
                            attribute: attr.clone(),
                        });
                    }
                    if !seen.insert(i) {
                        return Err(bad(name, format!("attribute {attr} listed twice")));
                    }
                }
                let missing: Vec<String> = sig
                    .index_set()
                    .difference(&seen)
                    .map(|i| i.to_string())
                    .collect();
                if !missing.is_empty() {
                    return Err(bad(
                        name,
                        format!("missing attributes {}", missing.join(", ")),
                    ));
                }
                args.iter()
                    .map(|(a, v)| (Index::name(a.as_str()), v.clone()))
                    .collect()
            }
            (Args::Positional(vs), Indexing::Positional) => {
                if vs.len() != sig.len() {
                    return Err(bad(
                        name,
                        format!("expects {} arguments, got {}", sig.len(), vs.len()),
                    ));
                }
                vs.iter()
                    .enumerate()
                    .map(|(i, v)| (Index::Pos(i as u64), v.clone()))
                    .collect()
            }
            (Args::Positional(_), Indexing::Named) => {
                return Err(bad(name, "takes named arguments `attr: var`".into()))
            }
            (Args::Named(_), Indexing::Positional) => {
                return Err(bad(name, "takes positional arguments".into()))
            }
        };
        for (i, v) in &entries {
            bind(domains, v, sig.get(i).expect("checked above"))?;
        }
        return Ok(CompiledAtom {
            relation: name.to_string(),
            pattern: Pattern::new(entries)?,
            kind: AtomKind::Finite,
            source: atom.clone(),
        });
    }

    let ir = builtin(name).ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
    let vars: Vec<Variable> = match &atom.args {
        Args::Positional(vs) => vs.clone(),
        Args::Named(args) => {
            // Named use: each attribute contributes its global domain.
            for (attr, v) in args {
                let d = scheme
                    .attribute(attr)
                    .ok_or_else(|| Error::UnknownAttribute {
                        relation: name.to_string(),
                        attribute: attr.clone(),
                    })?;
                bind(domains, v, d)?;
            }
            args.iter().map(|(_, v)| v.clone()).collect()
        }
    };
    if vars.len() != ir.arity() {
        return Err(bad(
            name,
            format!("expects {} arguments, got {}", ir.arity(), vars.len()),
        ));
    }
    Ok(CompiledAtom {
        relation: name.to_string(),
        pattern: Pattern::seq(vars.iter().map(|v| v.0.clone())),
        kind: AtomKind::Intensional,
        source: atom.clone(),
    })
}

/// Each atom becomes a filtering, the body the left-fold join of those
/// filterings, and the head a projection onto its variables.
pub fn compile_rule(rule: &Rule, scheme: &Scheme) -> Result<Query> {
    let mut domains = BTreeMap::new();
    let mut atoms = Vec::with_capacity(rule.body.len());
    for atom in &rule.body {
        atoms.push(resolve(atom, scheme, &mut domains).map_err(|e| e.at(atom.line, atom.column))?);
    }
    for a in atoms.iter().filter(|a| a.kind == AtomKind::Intensional) {
        let ds: Option<Vec<Domain>> = a
            .pattern
            .entries()
            .values()
            .map(|v| domains.get(v).cloned())
            .collect();
        // Atoms with an unbound variable are rejected as unsafe by the planner.
        if let Some(ds) = ds {
            builtin(&a.relation)
                .expect("resolved as builtin")
                .signature_at(&ds)
                .map_err(|e| e.at(a.source.line, a.source.column))?;
        }
    }
    let mut filters = atoms.iter().map(|a| Expr::Filter {
        relation: a.relation.clone(),
        pattern: a.pattern.clone(),
    });
    let first = filters.next().ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "empty body".into(),
    })?;
    let body = filters.fold(first, |acc, e| Expr::Join(Box::new(acc), Box::new(e)));
    Ok(Query {
        rule: rule.clone(),
        expr: Expr::Project {
            onto: rule.head.clone(),
            input: Box::new(body),
        },
        atoms,
        domains,
    })
}
