use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::relations::{Relation, Variable};
use crate::tuples::{Index, IndexSet, Signature, Tuple};
use crate::{Error, Limits, Result};

use super::builtin::builtin;
use super::compile::{AtomKind, Query};
use super::scheme::Instance;

/// One step of a plan; the `usize` is an index into `Query::atoms`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Filter a stored relation and join it into the running result.
    Join(usize),
    /// Keep the running tuples that satisfy an intensional atom.
    Test(usize),
}

/// An execution order for a query. The order affects cost only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    query: Query,
    steps: Vec<Step>,
    /// Filtered extent size per atom, when planned against an instance.
    sizes: Vec<Option<usize>>,
}

impl Plan {
    pub fn query(&self) -> &Query {
        &self.query
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Indexes of the stored-relation atoms in join order.
    pub fn join_order(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Join(i) => Some(*i),
                Step::Test(_) => None,
            })
            .collect()
    }
}

fn check_safety(query: &Query) -> Result<()> {
    let bound = query.finitely_bound();
    for v in query.head() {
        if !bound.contains(v) {
            return Err(Error::Unsafe(format!(
                "head variable {v} is not bound by any stored relation"
            )));
        }
    }
    for a in query
        .atoms
        .iter()
        .filter(|a| a.kind == AtomKind::Intensional)
    {
        if let Some(v) = a.variables().iter().find(|v| !bound.contains(v)) {
            return Err(Error::Unsafe(format!(
                "variable {v} of {} is not bound by any stored relation",
                a.source
            ))
            .at(a.source.line, a.source.column));
        }
    }
    Ok(())
}

/// Interleaves intensional tests into a join order, each as soon as its
/// variables are bound.
fn schedule(query: &Query, order: &[usize]) -> Vec<Step> {
    let mut pending: Vec<usize> = (0..query.atoms.len())
        .filter(|&i| query.atoms[i].kind == AtomKind::Intensional)
        .collect();
    let mut bound = BTreeSet::new();
    let mut steps = Vec::with_capacity(query.atoms.len());
    for &i in order {
        steps.push(Step::Join(i));
        bound.extend(query.atoms[i].variables());
        pending.retain(|&t| {
            let ready = query.atoms[t].variables().is_subset(&bound);
            if ready {
                steps.push(Step::Test(t));
            }
            !ready
        });
    }
    steps
}

fn filtered(query: &Query, i: usize, instance: &Instance) -> Result<Relation> {
    let a = &query.atoms[i];
    instance
        .relation(&a.relation)
        .ok_or_else(|| Error::UnknownRelation(a.relation.clone()))?
        .filter(&a.pattern)
}

/// Greedy order: repeatedly take the smallest filtered extent among the
/// atoms sharing a variable with those already joined (any atom when none
/// does), ties broken by atom order.
pub fn plan(query: &Query, instance: &Instance) -> Result<Plan> {
    check_safety(query)?;
    let mut sizes = vec![None; query.atoms.len()];
    let mut remaining = Vec::new();
    for (i, a) in query.atoms.iter().enumerate() {
        if a.kind == AtomKind::Finite {
            sizes[i] = Some(filtered(query, i, instance)?.len());
            remaining.push(i);
        }
    }
    let mut bound: BTreeSet<Variable> = BTreeSet::new();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let connected: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !query.atoms[i].variables().is_disjoint(&bound))
            .collect();
        let pool = if connected.is_empty() {
            &remaining
        } else {
            &connected
        };
        let next = *pool
            .iter()
            .min_by_key(|&&i| (sizes[i], i))
            .expect("pool is nonempty");
        remaining.retain(|&i| i != next);
        bound.extend(query.atoms[next].variables());
        order.push(next);
    }
    Ok(Plan {
        steps: schedule(query, &order),
        query: query.clone(),
        sizes,
    })
}

/// A plan with a caller-chosen join order over the stored-relation atoms.
pub fn plan_with_order(query: &Query, order: &[usize]) -> Result<Plan> {
    check_safety(query)?;
    let finite: BTreeSet<usize> = (0..query.atoms.len())
        .filter(|&i| query.atoms[i].kind == AtomKind::Finite)
        .collect();
    let given: BTreeSet<usize> = order.iter().copied().collect();
    if given != finite || order.len() != finite.len() {
        return Err(Error::Scheme(format!(
            "join order {order:?} is not a permutation of the stored atoms {finite:?}"
        )));
    }
    Ok(Plan {
        steps: schedule(query, order),
        query: query.clone(),
        sizes: vec![None; query.atoms.len()],
    })
}

/// The relation the plan's query denotes over `instance`, with one index per head variable.
pub fn evaluate(plan: &Plan, instance: &Instance) -> Result<Relation> {
    evaluate_with_limits(plan, instance, &Limits::default())
}

/// As [`evaluate`], failing once an intermediate result exceeds `limits.materialize_max`.
pub fn evaluate_with_limits(plan: &Plan, instance: &Instance, limits: &Limits) -> Result<Relation> {
    let query = &plan.query;
    let mut acc: Option<Relation> = None;
    for step in &plan.steps {
        match *step {
            Step::Join(i) => {
                let r = filtered(query, i, instance)?;
                let joined = match acc {
                    None => r,
                    Some(a) => a.join(&r)?,
                };
                Limits::check(
                    "intermediate result",
                    joined.len() as u128,
                    limits.materialize_max,
                )?;
                acc = Some(joined);
            }
            Step::Test(i) => {
                let a = &query.atoms[i];
                let ir = builtin(&a.relation)
                    .ok_or_else(|| Error::UnknownRelation(a.relation.clone()))?;
                let current = acc.take().expect("tests follow the joins binding them");
                let kept = current
                    .extent()
                    .iter()
                    .filter(|t| {
                        let args = a.pattern.entries().iter().map(|(pos, v)| {
                            (pos.clone(), t.get(&v.index()).expect("bound").clone())
                        });
                        ir.holds(&Tuple::new(args).expect("pattern indexes are distinct"))
                    })
                    .cloned()
                    .collect();
                acc = Some(Relation::from_parts(current.signature().clone(), kept));
            }
        }
    }
    let body = acc.ok_or_else(|| Error::Unsafe("the body has no stored relation".into()))?;
    let onto: IndexSet = query.head().iter().map(Variable::index).collect();
    body.project(&onto)
}

/// The result signature of a safe query: one index per head variable.
pub fn head_signature(query: &Query) -> Result<Signature> {
    Signature::new(query.head().iter().map(|v| {
        (
            v.index(),
            query
                .domains
                .get(v)
                .cloned()
                .expect("head variables are bound"),
        )
    }))
}

fn vars(vs: impl IntoIterator<Item = Variable>) -> String {
    let names: Vec<String> = vs
        .into_iter()
        .filter(|v| !v.0.starts_with("_$"))
        .map(|v| v.0)
        .collect();
    names.join(", ")
}

/// A stable, human-readable account of a plan.
pub fn explain(plan: &Plan) -> String {
    let q = &plan.query;
    let mut out = String::new();
    let _ = writeln!(out, "rule:       {}", q.rule);
    let _ = writeln!(out, "expression: {}", q.expr);
    let _ = writeln!(out, "plan:");
    let mut bound: BTreeSet<Variable> = BTreeSet::new();
    let mut n = 0;
    for step in &plan.steps {
        n += 1;
        match *step {
            Step::Join(i) => {
                let a = &q.atoms[i];
                let size = plan.sizes[i]
                    .map(|s| format!(" [{s} tuples]"))
                    .unwrap_or_default();
                let shared: BTreeSet<Variable> =
                    a.variables().intersection(&bound).cloned().collect();
                let how = if n == 1 {
                    "scan".to_string()
                } else if shared.is_empty() {
                    "join (product)".to_string()
                } else {
                    format!("join on {}", vars(shared))
                };
                let _ = writeln!(out, "  {n}. {how}: {}{size}", a.source);
                bound.extend(a.variables());
            }
            Step::Test(i) => {
                let a = &q.atoms[i];
                let _ = writeln!(
                    out,
                    "  {n}. test {} per tuple, once {} are bound",
                    a.source,
                    vars(a.variables())
                );
            }
        }
    }
    let _ = writeln!(
        out,
        "  {}. project onto {}",
        n + 1,
        vars(q.head().iter().cloned())
    );
    out
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&explain(self))
    }
}

/// Result columns in head order.
pub fn head_columns(query: &Query) -> Vec<Index> {
    query.head().iter().map(Variable::index).collect()
}
