//! Finite set operations, covers and partitions, and the set encodings of
//! ordered pairs (Kuratowski) and natural numbers (von Neumann).

use std::collections::BTreeSet;

use crate::limits::Limits;
use crate::value::{FinSet, Value};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

pub fn set_op(a: &FinSet, b: &FinSet, kind: SetOp) -> FinSet {
    match kind {
        SetOp::Union => a.union(b),
        SetOp::Intersection => a.intersection(b),
        SetOp::Difference => a.difference(b),
    }
}

/// All subsets of `s`, each as a `Value::Set`.
pub fn powerset(s: &FinSet, limits: &Limits) -> Result<FinSet> {
    if s.len() > limits.powerset_max {
        return Err(Error::LimitExceeded {
            what: "powerset",
            size: 1u128 << s.len().min(127),
            limit: 1u128 << limits.powerset_max.min(127),
        });
    }
    let elems: Vec<&Value> = s.iter().collect();
    let subsets = (0u64..1 << elems.len()).map(|mask| {
        let subset: FinSet = elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| (*v).clone())
            .collect();
        Value::Set(subset)
    });
    Ok(subsets.collect())
}

fn members_as_sets(family: &FinSet) -> Result<Vec<&FinSet>> {
    family
        .iter()
        .map(|v| v.as_set().ok_or_else(|| Error::NotASet(v.clone())))
        .collect()
}

/// `{x | ∃ S' ∈ family. x ∈ S'}`
pub fn big_union(family: &FinSet) -> Result<FinSet> {
    let sets = members_as_sets(family)?;
    Ok(sets.into_iter().flat_map(|s| s.iter().cloned()).collect())
}

/// `{x | ∀ S' ∈ family. x ∈ S'}`; undefined for the empty family.
pub fn big_intersection(family: &FinSet) -> Result<FinSet> {
    let sets = members_as_sets(family)?;
    let (first, rest) = sets.split_first().ok_or(Error::EmptyFamily)?;
    Ok(rest
        .iter()
        .fold((*first).clone(), |acc, s| acc.intersection(s)))
}

/// Nonempty cells whose union is exactly `s`.
pub fn is_cover(cells: &BTreeSet<FinSet>, s: &FinSet) -> bool {
    if cells.iter().any(FinSet::is_empty) {
        return false;
    }
    let union: FinSet = cells.iter().flat_map(|c| c.iter().cloned()).collect();
    &union == s
}

/// A cover with pairwise-disjoint cells.
pub fn is_partition(cells: &BTreeSet<FinSet>, s: &FinSet) -> bool {
    if !is_cover(cells, s) {
        return false;
    }
    // Disjoint iff the cell sizes add up to |s|.
    cells.iter().map(FinSet::len).sum::<usize>() == s.len()
}

/// A validated partition of a ground set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    ground: FinSet,
    cells: BTreeSet<FinSet>,
}

impl Partition {
    pub fn new(cells: BTreeSet<FinSet>, ground: FinSet) -> Result<Self> {
        if let Some(cell) = cells.iter().find(|c| c.is_empty()) {
            return Err(Error::InvalidPartition {
                ground,
                reason: format!("cell {cell} is empty"),
            });
        }
        if !is_cover(&cells, &ground) {
            return Err(Error::InvalidPartition {
                ground,
                reason: "cells do not cover exactly the ground set".into(),
            });
        }
        if !is_partition(&cells, &ground) {
            return Err(Error::InvalidPartition {
                ground,
                reason: "cells overlap".into(),
            });
        }
        Ok(Partition { ground, cells })
    }

    /// `{{x} | x ∈ s}`
    pub fn finest(s: &FinSet) -> Self {
        Partition {
            ground: s.clone(),
            cells: s.iter().map(|x| FinSet::singleton(x.clone())).collect(),
        }
    }

    /// The one-cell partition `{s}` (no cells at all when `s` is empty).
    pub fn coarsest(s: &FinSet) -> Self {
        let cells = if s.is_empty() {
            BTreeSet::new()
        } else {
            BTreeSet::from([s.clone()])
        };
        Partition {
            ground: s.clone(),
            cells,
        }
    }

    pub fn ground(&self) -> &FinSet {
        &self.ground
    }

    pub fn cells(&self) -> &BTreeSet<FinSet> {
        &self.cells
    }

    /// Every cell of `self` lies inside some cell of `coarser`.
    pub fn is_finer_than(&self, coarser: &Partition) -> Result<bool> {
        finer(self, coarser)
    }
}

pub fn finer(p1: &Partition, p0: &Partition) -> Result<bool> {
    if p1.ground != p0.ground {
        return Err(Error::GroundMismatch);
    }
    Ok(p1
        .cells
        .iter()
        .all(|c1| p0.cells.iter().any(|c0| c1.is_subset(c0))))
}

/// `⟨a, b⟩ = {{a}, {a, b}}`
pub fn kuratowski_pair(a: Value, b: Value) -> FinSet {
    let left = FinSet::singleton(a.clone());
    let both: FinSet = [a, b].into_iter().collect();
    [Value::Set(left), Value::Set(both)].into_iter().collect()
}

/// Inverse of [`kuratowski_pair`]; accepts `{{a},{a,b}}` and `{{a}}`.
pub fn kuratowski_unpair(s: &FinSet) -> Result<(Value, Value)> {
    let malformed = || Error::MalformedPair(s.clone());
    let members: Vec<&FinSet> = s
        .iter()
        .map(|v| v.as_set().ok_or_else(malformed))
        .collect::<Result<_>>()?;
    match members.as_slice() {
        [only] if only.len() == 1 => {
            let a = only.first().expect("singleton").clone();
            Ok((a.clone(), a))
        }
        [x, y] => {
            let (single, double) = match (x.len(), y.len()) {
                (1, 2) => (x, y),
                (2, 1) => (y, x),
                _ => return Err(malformed()),
            };
            let a = single.first().expect("singleton");
            if !double.contains(a) {
                return Err(malformed());
            }
            let b = double.iter().find(|v| *v != a).expect("two elements");
            Ok((a.clone(), b.clone()))
        }
        _ => Err(malformed()),
    }
}

/// `s⁺ = s ∪ {s}`
pub fn successor(s: &FinSet) -> FinSet {
    let mut next = s.clone();
    next.insert(Value::Set(s.clone()));
    next
}

/// The numeral for `n`: `0 = ∅`, `n + 1 = n⁺`.
pub fn von_neumann(n: u64, limits: &Limits) -> Result<FinSet> {
    Limits::check("von Neumann numeral", n as u128, limits.ordinal_max as u128)?;
    Ok((0..n).fold(FinSet::new(), |acc, _| successor(&acc)))
}

/// Recovers `n` from its numeral; every numeral is the set of its predecessors.
pub fn von_neumann_decode(s: &FinSet) -> Result<u64> {
    let mut numeral = FinSet::new();
    for _ in 0..s.len() {
        numeral = successor(&numeral);
    }
    if &numeral == s {
        Ok(s.len() as u64)
    } else {
        Err(Error::NotANumeral(s.clone()))
    }
}
