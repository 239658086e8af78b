//! Tuples over arbitrary index sets and the signatures that type them.
//!
//! A tuple is a function from its index set to atoms; a signature is a tuple
//! of domains. Both keep their entries in canonical index order, and both
//! expose the function view (`as_function`) so the laws of
//! [`crate::functions`] apply to them directly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::functions::Function;
use crate::limits::Limits;
use crate::value::{Atom, FinSet, Payload, Value};
use crate::{Error, Result};

/// Domain tag used when an index is viewed as a [`Value`].
pub const INDEX_DOMAIN: &str = "index";
/// Domain tag used when a domain is viewed as a [`Value`].
pub const DOMAIN_DOMAIN: &str = "domain";

/// Positions sort before names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Pos(u64),
    Name(String),
}

impl Index {
    pub fn name(s: impl Into<String>) -> Self {
        Index::Name(s.into())
    }

    pub fn to_value(&self) -> Value {
        match self {
            Index::Pos(n) => Value::int(INDEX_DOMAIN, *n as i64),
            Index::Name(s) => Value::text(INDEX_DOMAIN, s.clone()),
        }
    }

    pub fn from_value(v: &Value) -> Option<Index> {
        let atom = v.as_atom().filter(|a| a.domain == INDEX_DOMAIN)?;
        Some(match &atom.payload {
            Payload::Int(n) => Index::Pos(u64::try_from(*n).ok()?),
            Payload::Text(s) => Index::Name(s.clone()),
        })
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Pos(n) => write!(f, "{n}"),
            Index::Name(s) => f.write_str(s),
        }
    }
}

impl From<u64> for Index {
    fn from(n: u64) -> Self {
        Index::Pos(n)
    }
}

impl From<&str> for Index {
    fn from(s: &str) -> Self {
        Index::Name(s.to_string())
    }
}

pub type IndexSet = BTreeSet<Index>;

pub fn index_set<I: Into<Index>>(items: impl IntoIterator<Item = I>) -> IndexSet {
    items.into_iter().map(Into::into).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BuiltinKind {
    /// Non-negative integers.
    Natural,
    /// Any text.
    Text,
}

impl BuiltinKind {
    pub fn admits(self, payload: &Payload) -> bool {
        match (self, payload) {
            (BuiltinKind::Natural, Payload::Int(n)) => *n >= 0,
            (BuiltinKind::Text, Payload::Text(_)) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Membership {
    Enumerated(FinSet),
    Builtin(BuiltinKind),
}

/// A named set of admissible values. Members are atoms tagged with the
/// domain's name, so distinct domains never share a member.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Domain {
    name: String,
    membership: Membership,
}

impl Domain {
    /// An enumerated domain; every member must be an atom carrying `name` as tag.
    pub fn enumerated(name: impl Into<String>, members: FinSet) -> Result<Self> {
        let name = name.into();
        for m in members.iter() {
            match m {
                Value::Atom(a) if a.domain == name => {}
                Value::Atom(a) => {
                    return Err(Error::ForeignMember {
                        atom: a.to_string(),
                        tag: a.domain.clone(),
                        domain: name,
                    })
                }
                Value::Set(s) => {
                    return Err(Error::ForeignMember {
                        atom: s.to_string(),
                        tag: "set".into(),
                        domain: name,
                    })
                }
            }
        }
        Ok(Domain {
            name,
            membership: Membership::Enumerated(members),
        })
    }

    /// Convenience: an enumerated domain of text atoms.
    pub fn of_texts<'a>(
        name: impl Into<String>,
        members: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        let name = name.into();
        let set = members
            .into_iter()
            .map(|m| Value::text(name.clone(), m))
            .collect();
        Domain {
            name,
            membership: Membership::Enumerated(set),
        }
    }

    /// Convenience: an enumerated domain of integer atoms.
    pub fn of_ints(name: impl Into<String>, members: impl IntoIterator<Item = i64>) -> Self {
        let name = name.into();
        let set = members
            .into_iter()
            .map(|m| Value::int(name.clone(), m))
            .collect();
        Domain {
            name,
            membership: Membership::Enumerated(set),
        }
    }

    pub fn builtin(name: impl Into<String>, kind: BuiltinKind) -> Self {
        Domain {
            name: name.into(),
            membership: Membership::Builtin(kind),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn membership(&self) -> &Membership {
        &self.membership
    }

    /// Members, when the domain is enumerated.
    pub fn members(&self) -> Option<&FinSet> {
        match &self.membership {
            Membership::Enumerated(m) => Some(m),
            Membership::Builtin(_) => None,
        }
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        if atom.domain != self.name {
            return false;
        }
        match &self.membership {
            Membership::Enumerated(m) => m.contains(&Value::Atom(atom.clone())),
            Membership::Builtin(kind) => kind.admits(&atom.payload),
        }
    }

    /// True when every member has an integer payload.
    pub fn is_numeric(&self) -> bool {
        match &self.membership {
            Membership::Builtin(kind) => *kind == BuiltinKind::Natural,
            Membership::Enumerated(m) => m
                .iter()
                .all(|v| v.as_atom().is_some_and(|a| a.payload.as_int().is_some())),
        }
    }

    pub fn to_value(&self) -> Value {
        Value::text(DOMAIN_DOMAIN, self.name.clone())
    }

    /// Builds a member of this domain from a payload, checking membership.
    pub fn atom(&self, payload: Payload) -> Option<Atom> {
        let atom = Atom::new(self.name.clone(), payload);
        self.contains(&atom).then_some(atom)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A finite map from indexes to atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple {
    entries: BTreeMap<Index, Atom>,
}

impl Tuple {
    pub fn new(entries: impl IntoIterator<Item = (Index, Atom)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, a) in entries {
            if map.contains_key(&i) {
                return Err(Error::DuplicateIndex(i));
            }
            map.insert(i, a);
        }
        Ok(Tuple { entries: map })
    }

    pub fn empty() -> Self {
        Tuple::default()
    }

    /// `⟨v0, …, v(n-1)⟩`, indexed by positions `0..n`.
    pub fn seq(values: impl IntoIterator<Item = Atom>) -> Self {
        Tuple {
            entries: values
                .into_iter()
                .enumerate()
                .map(|(i, a)| (Index::Pos(i as u64), a))
                .collect(),
        }
    }

    pub(crate) fn from_map(entries: BTreeMap<Index, Atom>) -> Self {
        Tuple { entries }
    }

    pub fn get(&self, i: &Index) -> Option<&Atom> {
        self.entries.get(i)
    }

    pub fn entries(&self) -> &BTreeMap<Index, Atom> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_set(&self) -> IndexSet {
        self.entries.keys().cloned().collect()
    }

    /// Length, if the index set is exactly `0..n`.
    pub fn seq_len(&self) -> Option<usize> {
        self.entries
            .keys()
            .enumerate()
            .all(|(i, k)| *k == Index::Pos(i as u64))
            .then_some(self.entries.len())
    }

    /// `t ↓ J`, restricted to `J ∩ I`.
    pub fn restrict(&self, indexes: &IndexSet) -> Tuple {
        Tuple {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| indexes.contains(*i))
                .map(|(i, a)| (i.clone(), a.clone()))
                .collect(),
        }
    }

    /// `π_J(t)`; same as [`Tuple::restrict`].
    pub fn project(&self, indexes: &IndexSet) -> Tuple {
        self.restrict(indexes)
    }

    /// Sum of two tuples that agree on shared indexes.
    pub fn merge(&self, other: &Tuple) -> Option<Tuple> {
        let mut entries = self.entries.clone();
        for (i, a) in &other.entries {
            match entries.get(i) {
                Some(existing) if existing != a => return None,
                Some(_) => {}
                None => {
                    entries.insert(i.clone(), a.clone());
                }
            }
        }
        Some(Tuple { entries })
    }

    /// True iff the index sets agree and every component lies in its domain.
    pub fn is_typed_by(&self, signature: &Signature) -> bool {
        self.entries.len() == signature.entries.len()
            && self.entries.iter().all(|(i, a)| {
                signature
                    .entries
                    .get(i)
                    .is_some_and(|domain| domain.contains(a))
            })
    }

    /// The tuple as a function from its index set into the set of its components.
    pub fn as_function(&self) -> Function {
        self.as_function_into(
            &self
                .entries
                .values()
                .map(|a| Value::Atom(a.clone()))
                .collect(),
        )
        .expect("components lie in their own image")
    }

    /// The tuple as a function into a chosen target.
    pub fn as_function_into(&self, target: &FinSet) -> Result<Function> {
        let source = self.entries.keys().map(Index::to_value).collect();
        Function::from_table(
            source,
            target.clone(),
            self.entries
                .iter()
                .map(|(i, a)| (i.to_value(), Value::Atom(a.clone()))),
        )
    }
}

/// `α · β` for sequences: `γ(i) = α(i)` below `m`, `β(i - m)` from `m` on.
pub fn seq_concat(alpha: &Tuple, beta: &Tuple) -> Result<Tuple> {
    let m = alpha.seq_len().ok_or(Error::NotASequence)?;
    beta.seq_len().ok_or(Error::NotASequence)?;
    Ok(Tuple::seq(
        (0..m)
            .map(|i| alpha.entries[&Index::Pos(i as u64)].clone())
            .chain(beta.entries.values().cloned()),
    ))
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.seq_len().is_some() {
            f.write_str("⟨")?;
            for (i, a) in self.entries.values().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            return f.write_str("⟩");
        }
        f.write_str("(")?;
        for (i, (k, a)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {a}")?;
        }
        f.write_str(")")
    }
}

/// A tuple of domains: the type of a relation.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    entries: BTreeMap<Index, Domain>,
}

impl Signature {
    pub fn new(entries: impl IntoIterator<Item = (Index, Domain)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, d) in entries {
            if map.contains_key(&i) {
                return Err(Error::DuplicateIndex(i));
            }
            map.insert(i, d);
        }
        Ok(Signature { entries: map })
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    /// `⟨d0, …, d(n-1)⟩`
    pub fn seq(domains: impl IntoIterator<Item = Domain>) -> Self {
        Signature {
            entries: domains
                .into_iter()
                .enumerate()
                .map(|(i, d)| (Index::Pos(i as u64), d))
                .collect(),
        }
    }

    pub fn get(&self, i: &Index) -> Option<&Domain> {
        self.entries.get(i)
    }

    pub fn entries(&self) -> &BTreeMap<Index, Domain> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_set(&self) -> IndexSet {
        self.entries.keys().cloned().collect()
    }

    /// `τ ↓ J`, the subtype determined by `J` (intersected with the index set).
    pub fn subtype(&self, indexes: &IndexSet) -> Signature {
        Signature {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| indexes.contains(*i))
                .map(|(i, d)| (i.clone(), d.clone()))
                .collect(),
        }
    }

    /// The first shared index where the two signatures disagree, if any.
    pub fn conflict(&self, other: &Signature) -> Option<&Index> {
        self.entries
            .iter()
            .find(|(i, d)| other.entries.get(*i).is_some_and(|e| e != *d))
            .map(|(i, _)| i)
    }

    pub fn is_summable(&self, other: &Signature) -> bool {
        self.conflict(other).is_none()
    }

    /// `τ0 + τ1`
    pub fn sum(&self, other: &Signature) -> Result<Signature> {
        if let Some(i) = self.conflict(other) {
            return Err(Error::SignaturesNotSummable(i.clone()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(i, d)| (i.clone(), d.clone())));
        Ok(Signature { entries })
    }

    /// Number of tuples typed by this signature, when every domain is enumerated.
    pub fn cart_size(&self) -> Result<u128> {
        self.entries.values().try_fold(1u128, |acc, d| {
            let n = d
                .members()
                .ok_or_else(|| Error::IntensionalDomain(d.name.clone()))?
                .len() as u128;
            Ok(acc.saturating_mul(n))
        })
    }

    /// The signature as a function from indexes to domains.
    pub fn as_function(&self) -> Function {
        let source = self.entries.keys().map(Index::to_value).collect();
        let target = self.entries.values().map(Domain::to_value).collect();
        Function::from_table(
            source,
            target,
            self.entries
                .iter()
                .map(|(i, d)| (i.to_value(), d.to_value())),
        )
        .expect("signature is a total map")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (k, d)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {d}")?;
        }
        f.write_str(")")
    }
}

/// `cart(τ)`, listed under `limits.materialize_max`.
pub fn cart_enumerate(signature: &Signature, limits: &Limits) -> Result<BTreeSet<Tuple>> {
    let size = signature.cart_size()?;
    Limits::check("Cartesian product", size, limits.materialize_max)?;
    let mut tuples = vec![BTreeMap::new()];
    for (i, domain) in &signature.entries {
        let members = domain.members().expect("checked by cart_size");
        tuples = tuples
            .into_iter()
            .flat_map(|partial| {
                members.iter().map(move |m| {
                    let mut t = partial.clone();
                    t.insert(
                        i.clone(),
                        m.as_atom().expect("domain members are atoms").clone(),
                    );
                    t
                })
            })
            .collect();
    }
    Ok(tuples.into_iter().map(Tuple::from_map).collect())
}

/// `t ∈ cart(τ)`
pub fn cart_contains(signature: &Signature, t: &Tuple) -> bool {
    t.is_typed_by(signature)
}
