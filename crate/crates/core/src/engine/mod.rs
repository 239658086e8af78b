//! Schemes, instances and single conjunctive rules.
//!
//! A rule is parsed, resolved against a [`Scheme`] into a [`Query`] whose
//! expression is `π_head(r0:p0 ⋈ r1:p1 ⋈ …)`, ordered by the planner and
//! evaluated against an [`Instance`]. Built-in relations such as `leq` have
//! no finite extent and are applied as per-tuple tests once their variables
//! are bound.

mod builtin;
mod compile;
mod plan;
mod scheme;
mod syntax;

pub use builtin::{builtin, builtin_relations, is_builtin, IntensionalRelation, Predicate, Typing};
pub use compile::{compile_rule, AtomKind, CompiledAtom, Expr, Query};
pub use plan::{
    evaluate, evaluate_with_limits, explain, head_columns, head_signature, plan, plan_with_order,
    Plan, Step,
};
pub use scheme::{Indexing, Instance, RelationSchema, Scheme};
pub use syntax::{parse_rule, Args, BodyAtom, Rule};

use crate::relations::Relation;
use crate::{Limits, Result};

/// Parses, compiles, plans and evaluates one rule.
pub fn run(src: &str, instance: &Instance) -> Result<(Query, Relation)> {
    run_with_limits(src, instance, &Limits::default())
}

pub fn run_with_limits(
    src: &str,
    instance: &Instance,
    limits: &Limits,
) -> Result<(Query, Relation)> {
    let rule = parse_rule(src)?;
    let query = compile_rule(&rule, instance.scheme())?;
    let p = plan(&query, instance)?;
    let r = evaluate_with_limits(&p, instance, limits)?;
    Ok((query, r))
}
