use std::fmt;
use std::sync::Arc;

use crate::tuples::{Domain, Index, IndexSet, Signature, Tuple};
use crate::{Error, Result};

pub type Predicate = Arc<dyn Fn(&Tuple) -> bool + Send + Sync>;

/// Which signatures an intensional relation accepts at a use site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Typing {
    /// Every position bound to a numeric domain.
    Numeric,
    /// All positions bound to one domain.
    SameDomain,
}

/// A relation given by a decidable predicate over positions `0..arity`
/// rather than by a stored extent. Its domains are fixed per use site.
#[derive(Clone)]
pub struct IntensionalRelation {
    name: String,
    arity: usize,
    typing: Typing,
    predicate: Predicate,
}

impl IntensionalRelation {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        typing: Typing,
        predicate: impl Fn(&Tuple) -> bool + Send + Sync + 'static,
    ) -> Self {
        IntensionalRelation {
            name: name.into(),
            arity,
            typing,
            predicate: Arc::new(predicate),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn typing(&self) -> Typing {
        self.typing
    }

    pub fn index_set(&self) -> IndexSet {
        (0..self.arity as u64).map(Index::Pos).collect()
    }

    /// The signature at a use site where position `i` is bound to `domains[i]`.
    pub fn signature_at(&self, domains: &[Domain]) -> Result<Signature> {
        let bad = |message: String| Error::BadAtom {
            relation: self.name.clone(),
            message,
        };
        if domains.len() != self.arity {
            return Err(bad(format!(
                "expects {} arguments, got {}",
                self.arity,
                domains.len()
            )));
        }
        match self.typing {
            Typing::Numeric => {
                if let Some(d) = domains.iter().find(|d| !d.is_numeric()) {
                    return Err(bad(format!("domain {d} is not numeric")));
                }
            }
            Typing::SameDomain => {
                if let Some(d) = domains.iter().find(|d| *d != &domains[0]) {
                    return Err(bad(format!("domains {} and {d} differ", domains[0])));
                }
            }
        }
        Ok(Signature::seq(domains.iter().cloned()))
    }

    /// Decides membership of a tuple over positions `0..arity`.
    pub fn holds(&self, t: &Tuple) -> bool {
        (self.predicate)(t)
    }
}

impl fmt::Debug for IntensionalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntensionalRelation")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("typing", &self.typing)
            .finish_non_exhaustive()
    }
}

fn int_at(t: &Tuple, i: u64) -> Option<i64> {
    t.get(&Index::Pos(i))?.payload.as_int()
}

/// `leq`: integer `≤` between positions 0 and 1. `eq`: equality of atoms.
pub fn builtin_relations() -> Vec<IntensionalRelation> {
    vec![
        IntensionalRelation::new("eq", 2, Typing::SameDomain, |t| {
            t.get(&Index::Pos(0)) == t.get(&Index::Pos(1))
        }),
        IntensionalRelation::new(
            "leq",
            2,
            Typing::Numeric,
            |t| matches!((int_at(t, 0), int_at(t, 1)), (Some(a), Some(b)) if a <= b),
        ),
    ]
}

pub fn builtin(name: &str) -> Option<IntensionalRelation> {
    builtin_relations().into_iter().find(|r| r.name == name)
}

pub fn is_builtin(name: &str) -> bool {
    matches!(name, "eq" | "leq")
}
