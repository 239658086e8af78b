//! Relations `⟨τ, E⟩` and their algebra.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::foundations::SetOp;
use crate::limits::Limits;
use crate::tuples::{cart_enumerate, Domain, Index, IndexSet, Signature, Tuple};
use crate::{Error, Result};

/// A signature together with an extent of tuples typed by it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    signature: Signature,
    extent: BTreeSet<Tuple>,
}

/// A placeholder symbol. Nothing linguistic: just an element of a set of names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(pub String);

impl Variable {
    pub fn new(s: impl Into<String>) -> Self {
        Variable(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The index a filtering result uses for this variable.
    pub fn index(&self) -> Index {
        Index::Name(self.0.clone())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A tuple of variables, `p ∈ I → V`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    entries: BTreeMap<Index, Variable>,
}

impl Pattern {
    pub fn new(entries: impl IntoIterator<Item = (Index, Variable)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, v) in entries {
            if map.contains_key(&i) {
                return Err(Error::DuplicateIndex(i));
            }
            map.insert(i, v);
        }
        Ok(Pattern { entries: map })
    }

    /// `⟨x, y, …⟩` over positions `0..n`.
    pub fn seq<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Self {
        Pattern {
            entries: vars
                .into_iter()
                .enumerate()
                .map(|(i, v)| (Index::Pos(i as u64), Variable::new(v)))
                .collect(),
        }
    }

    pub fn entries(&self) -> &BTreeMap<Index, Variable> {
        &self.entries
    }

    pub fn index_set(&self) -> IndexSet {
        self.entries.keys().cloned().collect()
    }

    /// `p(I)`
    pub fn variables(&self) -> BTreeSet<Variable> {
        self.entries.values().cloned().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.variables().len() == self.entries.len()
    }

    /// For an injective pattern over named indexes: the pattern sending each
    /// variable's index back to a variable named after the original index.
    pub fn inverse(&self) -> Option<Pattern> {
        if !self.is_injective() {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .map(|(i, v)| match i {
                Index::Name(name) => Some((v.index(), Variable::new(name.clone()))),
                Index::Pos(_) => None,
            })
            .collect::<Option<_>>()?;
        Some(Pattern { entries })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let positional = self
            .entries
            .keys()
            .enumerate()
            .all(|(i, k)| *k == Index::Pos(i as u64));
        if positional {
            f.write_str("⟨")?;
            for (i, v) in self.entries.values().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            return f.write_str("⟩");
        }
        f.write_str("(")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str(")")
    }
}

impl Relation {
    /// Validates every tuple against the signature; duplicate tuples collapse.
    pub fn new(signature: Signature, tuples: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        let mut extent = BTreeSet::new();
        for t in tuples {
            if !t.is_typed_by(&signature) {
                return Err(Error::Untyped(t.to_string()));
            }
            extent.insert(t);
        }
        Ok(Relation { signature, extent })
    }

    pub fn empty(signature: Signature) -> Self {
        Relation {
            signature,
            extent: BTreeSet::new(),
        }
    }

    pub(crate) fn from_parts(signature: Signature, extent: BTreeSet<Tuple>) -> Self {
        debug_assert!(extent.iter().all(|t| t.is_typed_by(&signature)));
        Relation { signature, extent }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn extent(&self) -> &BTreeSet<Tuple> {
        &self.extent
    }

    pub fn into_extent(self) -> BTreeSet<Tuple> {
        self.extent
    }

    pub fn len(&self) -> usize {
        self.extent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extent.is_empty()
    }

    pub fn contains(&self, t: &Tuple) -> bool {
        self.extent.contains(t)
    }

    pub fn index_set(&self) -> IndexSet {
        self.signature.index_set()
    }

    /// Every tuple typed and (trivially, being a set) distinct.
    pub fn is_well_formed(&self) -> bool {
        self.extent.iter().all(|t| t.is_typed_by(&self.signature))
    }

    pub fn set_op(&self, other: &Relation, kind: SetOp) -> Result<Relation> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch);
        }
        let extent = match kind {
            SetOp::Union => self.extent.union(&other.extent).cloned().collect(),
            SetOp::Intersection => self.extent.intersection(&other.extent).cloned().collect(),
            SetOp::Difference => self.extent.difference(&other.extent).cloned().collect(),
        };
        Ok(Relation::from_parts(self.signature.clone(), extent))
    }

    fn check_indexes(&self, indexes: &IndexSet) -> Result<()> {
        match indexes.iter().find(|i| self.signature.get(i).is_none()) {
            Some(i) => Err(Error::UnknownIndex(i.clone())),
            None => Ok(()),
        }
    }

    /// `π_J(⟨τ, E⟩) = ⟨τ↓J, {t↓J | t ∈ E}⟩`
    pub fn project(&self, indexes: &IndexSet) -> Result<Relation> {
        self.check_indexes(indexes)?;
        Ok(Relation::from_parts(
            self.signature.subtype(indexes),
            self.extent.iter().map(|t| t.restrict(indexes)).collect(),
        ))
    }

    /// The cylinder in `I0 ∪ I1` on `self`:
    /// `⟨τ0 + τ1, {t ∈ cart(τ0 + τ1) | t↓I0 ∈ E0}⟩`.
    pub fn cylinder(&self, other: &Signature, limits: &Limits) -> Result<Relation> {
        let signature = self.signature.sum(other)?;
        let fresh = other.subtype(
            &other
                .index_set()
                .difference(&self.index_set())
                .cloned()
                .collect(),
        );
        let fillers = cart_enumerate(&fresh, limits)?;
        let size = (self.extent.len() as u128).saturating_mul(fillers.len() as u128);
        Limits::check("cylinder", size, limits.materialize_max)?;
        let extent = self
            .extent
            .iter()
            .flat_map(|t| {
                fillers
                    .iter()
                    .map(move |f| t.merge(f).expect("disjoint index sets"))
            })
            .collect();
        Ok(Relation::from_parts(signature, extent))
    }

    /// `⟨τ0, E0⟩ ⋈ ⟨τ1, E1⟩`, computed as a hash equi-join on the shared
    /// indexes: the smaller extent is bucketed by its shared-index projection
    /// and the larger one probes the buckets.
    pub fn join(&self, other: &Relation) -> Result<Relation> {
        let signature = self.signature.sum(&other.signature)?;
        let shared: IndexSet = self
            .index_set()
            .intersection(&other.index_set())
            .cloned()
            .collect();
        let (build, probe) = if self.extent.len() <= other.extent.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut buckets: HashMap<Tuple, Vec<&Tuple>> = HashMap::new();
        for t in &build.extent {
            buckets.entry(t.restrict(&shared)).or_default().push(t);
        }
        let mut extent = BTreeSet::new();
        for t in &probe.extent {
            if let Some(matches) = buckets.get(&t.restrict(&shared)) {
                for m in matches {
                    extent.insert(t.merge(m).expect("agree on shared indexes"));
                }
            }
        }
        Ok(Relation::from_parts(signature, extent))
    }

    /// Filtering `⟨τ, E⟩ : p`. Each tuple `t` contributes the assignment
    /// `s` with `t = s ∘ p`, if one exists; repeated variables force equal
    /// components. The result is indexed by the variables `p(I)`.
    pub fn filter(&self, pattern: &Pattern) -> Result<Relation> {
        if pattern.index_set() != self.index_set() {
            return Err(Error::PatternMismatch);
        }
        let signature = filter_signature(&self.signature, pattern)?;
        let extent = self
            .extent
            .iter()
            .filter_map(|t| {
                let mut s = BTreeMap::new();
                for (i, v) in pattern.entries() {
                    let a = t.get(i).expect("same index set");
                    match s.get(&v.index()) {
                        Some(existing) if existing != a => return None,
                        Some(_) => {}
                        None => {
                            s.insert(v.index(), a.clone());
                        }
                    }
                }
                Some(Tuple::from_map(s))
            })
            .collect();
        Ok(Relation::from_parts(signature, extent))
    }

    /// True iff `t0↓I' = t1↓I'` implies `t0 = t1` across the extent.
    pub fn is_key(&self, indexes: &IndexSet) -> Result<bool> {
        self.check_indexes(indexes)?;
        let projected: BTreeSet<Tuple> = self.extent.iter().map(|t| t.restrict(indexes)).collect();
        Ok(projected.len() == self.extent.len())
    }
}

/// `φ ↓ p(I)` with `φ(p(i)) = τ(i)`; fails when a variable would need two domains.
pub fn filter_signature(signature: &Signature, pattern: &Pattern) -> Result<Signature> {
    let mut phi: BTreeMap<Index, Domain> = BTreeMap::new();
    for (i, v) in pattern.entries() {
        let domain = signature
            .get(i)
            .ok_or_else(|| Error::UnknownIndex(i.clone()))?;
        match phi.get(&v.index()) {
            Some(d) if d != domain => return Err(Error::InconsistentPattern(v.0.clone())),
            Some(_) => {}
            None => {
                phi.insert(v.index(), domain.clone());
            }
        }
    }
    Signature::new(phi)
}

/// `π⁻¹_J(S) = {t ∈ cart(τ) | π_J(t) ∈ S}` for a set `S` of tuples over `J ⊂ I`.
pub fn inverse_project(
    tuples: &BTreeSet<Tuple>,
    indexes: &IndexSet,
    signature: &Signature,
    limits: &Limits,
) -> Result<Relation> {
    if let Some(i) = indexes.iter().find(|i| signature.get(i).is_none()) {
        return Err(Error::UnknownIndex(i.clone()));
    }
    let kept = signature.subtype(indexes);
    let base: BTreeSet<Tuple> = tuples
        .iter()
        .filter(|t| t.is_typed_by(&kept))
        .cloned()
        .collect();
    Relation::from_parts(kept, base).cylinder(signature, limits)
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {{", self.signature)?;
        for (i, t) in self.extent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}⟩")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuples::index_set;
    use crate::value::Atom;

    fn ab() -> Domain {
        Domain::of_texts("ab", ["a", "b"])
    }

    fn seq(s: &str) -> Tuple {
        Tuple::seq(s.chars().map(|c| Atom::text("ab", c.to_string())))
    }

    fn at(pairs: &[(u64, &str)]) -> Tuple {
        Tuple::new(
            pairs
                .iter()
                .map(|(i, c)| (Index::Pos(*i), Atom::text("ab", *c))),
        )
        .unwrap()
    }

    fn aabb() -> Relation {
        Relation::new(
            Signature::seq([ab(), ab(), ab()]),
            ["aaa", "aab", "bab"].map(seq),
        )
        .unwrap()
    }

    #[test]
    fn make_examples() {
        let r = aabb();
        assert_eq!(r.len(), 3);
        let empty_sig = Signature::empty();
        let none = Relation::new(empty_sig.clone(), []).unwrap();
        let one = Relation::new(empty_sig, [Tuple::empty(), Tuple::empty()]).unwrap();
        assert_eq!(none.len(), 0);
        assert_eq!(one.len(), 1);
        let wrong = Tuple::seq([
            Atom::text("cd", "c"),
            Atom::text("ab", "a"),
            Atom::text("ab", "a"),
        ]);
        assert!(matches!(
            Relation::new(Signature::seq([ab(), ab(), ab()]), [wrong]),
            Err(Error::Untyped(_))
        ));
    }

    #[test]
    fn set_like_examples() {
        let r = aabb();
        assert_eq!(r.set_op(&r, SetOp::Union).unwrap(), r);
        let d = r.set_op(&r, SetOp::Difference).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.signature(), r.signature());
        let other = Relation::empty(Signature::seq([ab(), ab()]));
        assert_eq!(
            r.set_op(&other, SetOp::Union),
            Err(Error::SignatureMismatch)
        );
    }

    #[test]
    fn complement_within_cart_is_disjoint() {
        let r = aabb();
        let cart = cart_enumerate(r.signature(), &Limits::default()).unwrap();
        assert_eq!(cart.len(), 8);
        let all = Relation::new(r.signature().clone(), cart).unwrap();
        let complement = all.set_op(&r, SetOp::Difference).unwrap();
        assert_eq!(complement.len(), 5);
        assert!(r
            .set_op(&complement, SetOp::Intersection)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn projections() {
        let r = aabb();
        let p01 = r.project(&index_set([0u64, 1])).unwrap();
        assert_eq!(p01.extent(), &BTreeSet::from([seq("aa"), seq("ba")]));
        assert_eq!(p01.signature(), &Signature::seq([ab(), ab()]));
        let p02 = r.project(&index_set([0u64, 2])).unwrap();
        assert_eq!(
            p02.extent(),
            &BTreeSet::from([
                at(&[(0, "a"), (2, "a")]),
                at(&[(0, "a"), (2, "b")]),
                at(&[(0, "b"), (2, "b")]),
            ])
        );
        assert_eq!(r.project(&r.index_set()).unwrap(), r);
        assert_eq!(
            r.project(&index_set([5u64])),
            Err(Error::UnknownIndex(Index::Pos(5)))
        );
    }

    #[test]
    fn inverse_projections() {
        let limits = Limits::default();
        let r = aabb();
        let tau = r.signature().clone();
        let j01 = index_set([0u64, 1]);
        let back = inverse_project(r.project(&j01).unwrap().extent(), &j01, &tau, &limits).unwrap();
        assert_eq!(
            back.extent(),
            &["aaa", "aab", "baa", "bab"].map(seq).into_iter().collect()
        );
        let j02 = index_set([0u64, 2]);
        let p02 = r.project(&j02).unwrap();
        let back = inverse_project(p02.extent(), &j02, &tau, &limits).unwrap();
        assert_eq!(
            back.extent(),
            &["aaa", "aba", "aab", "abb", "bab", "bbb"]
                .map(seq)
                .into_iter()
                .collect()
        );
        assert_eq!(back.project(&j02).unwrap(), p02);

        let builtin = Signature::seq([
            ab(),
            Domain::builtin("n", crate::tuples::BuiltinKind::Natural),
        ]);
        let j0 = index_set([0u64]);
        assert!(matches!(
            inverse_project(&BTreeSet::new(), &j0, &builtin, &limits),
            Err(Error::IntensionalDomain(_))
        ));
    }

    #[test]
    fn cylinders() {
        let limits = Limits::default();
        let r = aabb();
        let narrower = r.signature().subtype(&index_set([0u64, 2]));
        assert_eq!(r.cylinder(&narrower, &limits).unwrap(), r);

        let j01 = index_set([0u64, 1]);
        let p01 = r.project(&j01).unwrap();
        let cyl = p01.cylinder(r.signature(), &limits).unwrap();
        let via_inverse = inverse_project(p01.extent(), &j01, r.signature(), &limits).unwrap();
        assert_eq!(cyl, via_inverse);

        let cd = Domain::of_texts("cd", ["c", "d"]);
        let clash = Signature::new([(Index::Pos(0), cd)]).unwrap();
        assert!(matches!(
            r.cylinder(&clash, &limits),
            Err(Error::SignaturesNotSummable(_))
        ));
        let tight = Limits::default().with_materialize_max(4);
        assert!(p01.cylinder(r.signature(), &tight).is_ok());
        let tighter = Limits::default().with_materialize_max(3);
        assert!(p01.cylinder(r.signature(), &tighter).is_err());
    }

    #[test]
    fn join_of_disjoint_index_sets_is_a_product() {
        let left = Relation::new(
            Signature::new([(Index::name("x"), ab())]).unwrap(),
            ["a", "b"].map(|c| Tuple::new([(Index::name("x"), Atom::text("ab", c))]).unwrap()),
        )
        .unwrap();
        let right = Relation::new(
            Signature::new([(Index::name("y"), ab())]).unwrap(),
            ["a", "b"].map(|c| Tuple::new([(Index::name("y"), Atom::text("ab", c))]).unwrap()),
        )
        .unwrap();
        let j = left.join(&right).unwrap();
        // oracle: every pairing of one tuple from each side
        let mut expected = BTreeSet::new();
        for l in left.extent() {
            for r in right.extent() {
                let mut m = l.entries().clone();
                m.extend(r.entries().iter().map(|(i, a)| (i.clone(), a.clone())));
                expected.insert(Tuple::from_map(m));
            }
        }
        assert_eq!(j.extent(), &expected);
        assert_eq!(j.len(), 4);
    }

    #[test]
    fn join_with_identical_signature_is_intersection() {
        let r = aabb();
        let s = Relation::new(r.signature().clone(), ["aaa", "bbb", "bab"].map(seq)).unwrap();
        assert_eq!(
            r.join(&s).unwrap(),
            r.set_op(&s, SetOp::Intersection).unwrap()
        );
    }

    #[test]
    fn join_rejects_non_summable() {
        let r = aabb();
        let cd = Domain::of_texts("cd", ["c"]);
        let other = Relation::empty(Signature::new([(Index::Pos(0), cd)]).unwrap());
        assert!(matches!(
            r.join(&other),
            Err(Error::SignaturesNotSummable(_))
        ));
    }

    #[test]
    fn filtering() {
        let r = aabb();
        // ⟨x, x, z⟩ keeps tuples whose first two components agree
        let f = r.filter(&Pattern::seq(["x", "x", "z"])).unwrap();
        let xz = |x: &str, z: &str| {
            Tuple::new([
                (Index::name("x"), Atom::text("ab", x)),
                (Index::name("z"), Atom::text("ab", z)),
            ])
            .unwrap()
        };
        assert_eq!(f.extent(), &BTreeSet::from([xz("a", "a"), xz("a", "b")]));
        assert_eq!(f.index_set(), index_set(["x", "z"]));

        assert_eq!(
            r.filter(&Pattern::seq(["x", "y"])),
            Err(Error::PatternMismatch)
        );

        let mixed = Relation::empty(Signature::seq([ab(), Domain::of_texts("cd", ["c"])]));
        assert_eq!(
            mixed.filter(&Pattern::seq(["x", "x"])),
            Err(Error::InconsistentPattern("x".into()))
        );
    }

    #[test]
    fn injective_filter_inverts() {
        let sig = Signature::new([(Index::name("p"), ab()), (Index::name("q"), ab())]).unwrap();
        let r = Relation::new(
            sig,
            [("a", "b"), ("b", "b")].map(|(p, q)| {
                Tuple::new([
                    (Index::name("p"), Atom::text("ab", p)),
                    (Index::name("q"), Atom::text("ab", q)),
                ])
                .unwrap()
            }),
        )
        .unwrap();
        let pat = Pattern::new([
            (Index::name("p"), Variable::new("u")),
            (Index::name("q"), Variable::new("v")),
        ])
        .unwrap();
        let renamed = r.filter(&pat).unwrap();
        assert_eq!(renamed.len(), r.len());
        assert_eq!(renamed.filter(&pat.inverse().unwrap()).unwrap(), r);
        assert!(Pattern::seq(["x", "x"]).inverse().is_none());
    }

    #[test]
    fn keys() {
        let r = aabb();
        assert!(r.is_key(&r.index_set()).unwrap());
        assert!(!r.is_key(&index_set([1u64])).unwrap());
        assert!(r.is_key(&index_set([0u64, 2])).unwrap());
        assert!(r.is_key(&index_set([7u64])).is_err());
    }
}
