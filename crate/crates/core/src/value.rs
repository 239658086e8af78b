//! Atoms, hereditarily finite sets, and the canonical order over both.
//!
//! Every atom carries the name of the domain it belongs to. Two atoms with the
//! same payload but different domain tags are different values, so distinct
//! domains are disjoint by construction.

use std::collections::btree_set;
use std::collections::BTreeSet;
use std::fmt;

/// Raw content of an atom. Integers sort before text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Int(i64),
    Text(String),
}

impl Payload {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Payload::Int(n) => Some(*n),
            Payload::Text(_) => None,
        }
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Int(n) => write!(f, "{n}"),
            Payload::Text(s) => f.write_str(s),
        }
    }
}

/// A domain-tagged atom. Ordered by domain name, then payload.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub domain: String,
    pub payload: Payload,
}

impl Atom {
    pub fn new(domain: impl Into<String>, payload: Payload) -> Self {
        Atom {
            domain: domain.into(),
            payload,
        }
    }

    pub fn int(domain: impl Into<String>, n: i64) -> Self {
        Atom::new(domain, Payload::Int(n))
    }

    pub fn text(domain: impl Into<String>, s: impl Into<String>) -> Self {
        Atom::new(domain, Payload::Text(s.into()))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.payload.fmt(f)
    }
}

/// An element: either an atom or a finite set of elements.
///
/// Atoms sort before sets; sets compare by their sorted element sequences.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Atom(Atom),
    Set(FinSet),
}

impl Value {
    pub fn int(domain: impl Into<String>, n: i64) -> Self {
        Value::Atom(Atom::int(domain, n))
    }

    pub fn text(domain: impl Into<String>, s: impl Into<String>) -> Self {
        Value::Atom(Atom::text(domain, s))
    }

    pub fn empty_set() -> Self {
        Value::Set(FinSet::new())
    }

    pub fn as_set(&self) -> Option<&FinSet> {
        match self {
            Value::Set(s) => Some(s),
            Value::Atom(_) => None,
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Value::Atom(a) => Some(a),
            Value::Set(_) => None,
        }
    }
}

impl From<Atom> for Value {
    fn from(a: Atom) -> Self {
        Value::Atom(a)
    }
}

impl From<FinSet> for Value {
    fn from(s: FinSet) -> Self {
        Value::Set(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(a) => a.fmt(f),
            Value::Set(s) => s.fmt(f),
        }
    }
}

/// A finite set of values. Structural equality; no duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSet(BTreeSet<Value>);

impl FinSet {
    pub fn new() -> Self {
        FinSet(BTreeSet::new())
    }

    pub fn singleton(v: impl Into<Value>) -> Self {
        std::iter::once(v.into()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.0.contains(v)
    }

    /// Adds `v`; returns false if it was already present.
    pub fn insert(&mut self, v: impl Into<Value>) -> bool {
        self.0.insert(v.into())
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Value> {
        self.0.iter()
    }

    /// Smallest element in the canonical order.
    pub fn first(&self) -> Option<&Value> {
        self.0.first()
    }

    pub fn as_btree(&self) -> &BTreeSet<Value> {
        &self.0
    }

    pub fn into_btree(self) -> BTreeSet<Value> {
        self.0
    }

    pub fn union(&self, other: &FinSet) -> FinSet {
        FinSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &FinSet) -> FinSet {
        FinSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &FinSet) -> FinSet {
        FinSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_superset(&self, other: &FinSet) -> bool {
        self.0.is_superset(&other.0)
    }

    pub fn is_disjoint(&self, other: &FinSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl From<BTreeSet<Value>> for FinSet {
    fn from(s: BTreeSet<Value>) -> Self {
        FinSet(s)
    }
}

impl<V: Into<Value>> FromIterator<V> for FinSet {
    fn from_iter<I: IntoIterator<Item = V>>(iter: I) -> Self {
        FinSet(iter.into_iter().map(Into::into).collect())
    }
}

impl IntoIterator for FinSet {
    type Item = Value;
    type IntoIter = btree_set::IntoIter<Value>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = &'a Value;
    type IntoIter = btree_set::Iter<'a, Value>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}
