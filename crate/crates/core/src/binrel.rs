//! Binary relations as `(source, target, extent)` triples.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::foundations::{Partition, SetOp};
use crate::limits::Limits;
use crate::value::{FinSet, Value};
use crate::{Error, Result};

pub type Pair = (Value, Value);

/// A triple `(S, T, E)` with `E ⊂ S × T`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryRelation {
    source: FinSet,
    target: FinSet,
    extent: BTreeSet<Pair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Total,
    SingleValued,
    Surjective,
    Injective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EndoProperty {
    Reflexive,
    Symmetric,
    Transitive,
    Antisymmetric,
    OrderTotal,
    Equivalence,
    Preorder,
    PartialOrder,
    TotalOrder,
}

impl BinaryRelation {
    pub fn new(
        source: FinSet,
        target: FinSet,
        extent: impl IntoIterator<Item = Pair>,
    ) -> Result<Self> {
        let extent: BTreeSet<Pair> = extent.into_iter().collect();
        if let Some((x, y)) = extent
            .iter()
            .find(|(x, y)| !source.contains(x) || !target.contains(y))
        {
            return Err(Error::PairOutOfRange(x.clone(), y.clone()));
        }
        Ok(BinaryRelation {
            source,
            target,
            extent,
        })
    }

    pub fn empty(source: FinSet, target: FinSet) -> Self {
        BinaryRelation {
            source,
            target,
            extent: BTreeSet::new(),
        }
    }

    /// `U(S, T)`, whose extent is the binary Cartesian product `S × T`.
    pub fn universal(source: FinSet, target: FinSet, limits: &Limits) -> Result<Self> {
        let size = source.len() as u128 * target.len() as u128;
        Limits::check("universal binary relation", size, limits.materialize_max)?;
        let extent = source
            .iter()
            .flat_map(|x| target.iter().map(move |y| (x.clone(), y.clone())))
            .collect();
        Ok(BinaryRelation {
            source,
            target,
            extent,
        })
    }

    /// `id_S`
    pub fn identity(s: &FinSet) -> Self {
        BinaryRelation {
            source: s.clone(),
            target: s.clone(),
            extent: s.iter().map(|x| (x.clone(), x.clone())).collect(),
        }
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn extent(&self) -> &BTreeSet<Pair> {
        &self.extent
    }

    pub fn contains(&self, x: &Value, y: &Value) -> bool {
        self.extent.contains(&(x.clone(), y.clone()))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch(
                "binary relations have different sources or targets".into(),
            ));
        }
        Ok(())
    }

    pub fn set_op(&self, other: &Self, kind: SetOp) -> Result<Self> {
        self.same_shape(other)?;
        let extent = match kind {
            SetOp::Union => self.extent.union(&other.extent).cloned().collect(),
            SetOp::Intersection => self.extent.intersection(&other.extent).cloned().collect(),
            SetOp::Difference => self.extent.difference(&other.extent).cloned().collect(),
        };
        Ok(BinaryRelation {
            source: self.source.clone(),
            target: self.target.clone(),
            extent,
        })
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.extent.is_subset(&other.extent))
    }

    pub fn inverse(&self) -> Self {
        BinaryRelation {
            source: self.target.clone(),
            target: self.source.clone(),
            extent: self
                .extent
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
        }
    }

    /// `self ; other`, defined when the target of `self` is the source of `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch(
                "target of the first relation is not the source of the second".into(),
            ));
        }
        let mut successors: BTreeMap<&Value, Vec<&Value>> = BTreeMap::new();
        for (y, z) in &other.extent {
            successors.entry(y).or_default().push(z);
        }
        let extent = self
            .extent
            .iter()
            .flat_map(|(x, y)| {
                successors
                    .get(y)
                    .into_iter()
                    .flatten()
                    .map(move |z| (x.clone(), (*z).clone()))
            })
            .collect();
        Ok(BinaryRelation {
            source: self.source.clone(),
            target: other.target.clone(),
            extent,
        })
    }

    /// Decides one of the four basic properties by enumeration.
    pub fn has(&self, property: Property) -> bool {
        match property {
            Property::Total => self
                .source
                .iter()
                .all(|x| self.target.iter().any(|y| self.contains(x, y))),
            Property::SingleValued => self
                .source
                .iter()
                .all(|x| self.target.iter().filter(|y| self.contains(x, y)).count() <= 1),
            Property::Surjective => self
                .target
                .iter()
                .all(|y| self.source.iter().any(|x| self.contains(x, y))),
            Property::Injective => self
                .target
                .iter()
                .all(|y| self.source.iter().filter(|x| self.contains(x, y)).count() <= 1),
        }
    }

    /// Single-valued.
    pub fn is_partial_function(&self) -> bool {
        self.has(Property::SingleValued)
    }

    /// Single-valued and total.
    pub fn is_functional(&self) -> bool {
        self.has(Property::SingleValued) && self.has(Property::Total)
    }

    pub fn is_endo(&self) -> bool {
        self.source == self.target
    }

    /// Classifies an endo-relation. Each base property is decided through the
    /// identity/inverse/composition characterization.
    pub fn endo_class(&self) -> Result<BTreeSet<EndoProperty>> {
        use EndoProperty::*;
        if !self.is_endo() {
            return Err(Error::NotEndo);
        }
        let s = &self.source;
        let id = Self::identity(s);
        let inv = self.inverse();
        let mut class = BTreeSet::new();

        let reflexive = id.is_subset(self)?;
        let symmetric = *self == inv;
        let transitive = self.compose(self)?.is_subset(self)?;
        let antisymmetric = self.set_op(&inv, SetOp::Intersection)?.is_subset(&id)?;
        // r ∪ r⁻¹ = U(S,S), checked without materializing U
        let order_total = s
            .iter()
            .all(|x| s.iter().all(|y| self.contains(x, y) || self.contains(y, x)));

        for (holds, p) in [
            (reflexive, Reflexive),
            (symmetric, Symmetric),
            (transitive, Transitive),
            (antisymmetric, Antisymmetric),
            (order_total, OrderTotal),
        ] {
            if holds {
                class.insert(p);
            }
        }
        let preorder = reflexive && transitive;
        if preorder {
            class.insert(Preorder);
        }
        if preorder && symmetric {
            class.insert(Equivalence);
        }
        if preorder && antisymmetric {
            class.insert(PartialOrder);
            if order_total {
                class.insert(TotalOrder);
            }
        }
        Ok(class)
    }

    /// `{{y | (x,y) ∈ E} | x ∈ S}`; a cover whenever `self` is reflexive.
    pub fn image_sets(&self) -> std::collections::BTreeSet<FinSet> {
        self.source
            .iter()
            .map(|x| {
                self.extent
                    .iter()
                    .filter(|(a, _)| a == x)
                    .map(|(_, y)| y.clone())
                    .collect()
            })
            .collect()
    }

    pub fn equivalence_classes(&self) -> Result<Partition> {
        let class = self.endo_class()?;
        if !class.contains(&EndoProperty::Equivalence) {
            return Err(Error::NotEquivalence);
        }
        Partition::new(self.image_sets(), self.source.clone())
    }
}

impl fmt::Display for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {{", self.source, self.target)?;
        for (i, (x, y)) in self.extent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        f.write_str("})")
    }
}
