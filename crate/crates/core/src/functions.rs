//! Functions as `(source, target, map)`.
//!
//! A map is either a finite table or an opaque deterministic rule. Rules are
//! evaluated on demand; operations that build a new function tabulate them
//! over the (finite) source. Property classification and the inverse
//! constructions accept tabulated maps only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::binrel::BinaryRelation;
use crate::limits::Limits;
use crate::value::{FinSet, Value};
use crate::{Error, Result};

/// Domain tag of the two values of a characteristic function.
pub const BIT_DOMAIN: &str = "nat";

pub type RuleFn = Arc<dyn Fn(&Value) -> Value + Send + Sync>;

#[derive(Clone)]
pub enum Map {
    Table(BTreeMap<Value, Value>),
    Rule(RuleFn),
}

#[derive(Clone)]
pub struct Function {
    source: FinSet,
    target: FinSet,
    map: Map,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FnProperty {
    Injective,
    Surjective,
    Bijective,
}

/// Number of rule evaluations checked against the target at construction.
const RULE_SAMPLE: usize = 64;

impl Function {
    /// Builds a tabulated function: one entry per source element, values in the target.
    pub fn from_table(
        source: FinSet,
        target: FinSet,
        entries: impl IntoIterator<Item = (Value, Value)>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (x, y) in entries {
            if !source.contains(&x) {
                return Err(Error::StrayEntry(x));
            }
            if !target.contains(&y) {
                return Err(Error::ValueOutsideTarget(y));
            }
            if table.insert(x.clone(), y).is_some() {
                return Err(Error::DuplicateEntry(x));
            }
        }
        if let Some(x) = source.iter().find(|x| !table.contains_key(*x)) {
            return Err(Error::MissingEntry(x.clone()));
        }
        Ok(Function {
            source,
            target,
            map: Map::Table(table),
        })
    }

    /// Wraps a host procedure. A sample of the source is evaluated to check
    /// that the rule lands in the target.
    pub fn from_rule(
        source: FinSet,
        target: FinSet,
        rule: impl Fn(&Value) -> Value + Send + Sync + 'static,
    ) -> Result<Self> {
        for x in source.iter().take(RULE_SAMPLE) {
            let y = rule(x);
            if !target.contains(&y) {
                return Err(Error::ValueOutsideTarget(y));
            }
        }
        Ok(Function {
            source,
            target,
            map: Map::Rule(Arc::new(rule)),
        })
    }

    pub fn identity(s: &FinSet) -> Self {
        Function {
            source: s.clone(),
            target: s.clone(),
            map: Map::Table(s.iter().map(|x| (x.clone(), x.clone())).collect()),
        }
    }

    /// The function in `S' → S` with map `x ↦ x`; requires `S' ⊂ S`.
    pub fn insertion(sub: &FinSet, sup: &FinSet) -> Result<Self> {
        if !sub.is_subset(sup) {
            return Err(Error::NotSubset(sub.clone(), sup.clone()));
        }
        Ok(Function::identity(sup).restrict(sub))
    }

    /// The function in `S → {0, 1}` sending members of `sub` to 1.
    pub fn characteristic(sub: &FinSet, s: &FinSet) -> Self {
        let zero = Value::int(BIT_DOMAIN, 0);
        let one = Value::int(BIT_DOMAIN, 1);
        let table = s
            .iter()
            .map(|x| {
                let bit = if sub.contains(x) { &one } else { &zero };
                (x.clone(), bit.clone())
            })
            .collect();
        Function {
            source: s.clone(),
            target: [zero, one].into_iter().collect(),
            map: Map::Table(table),
        }
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn is_table(&self) -> bool {
        matches!(self.map, Map::Table(_))
    }

    pub fn apply(&self, x: &Value) -> Result<Value> {
        if !self.source.contains(x) {
            return Err(Error::ArgumentOutsideSource(x.clone()));
        }
        match &self.map {
            Map::Table(t) => Ok(t[x].clone()),
            Map::Rule(rule) => {
                let y = rule(x);
                if self.target.contains(&y) {
                    Ok(y)
                } else {
                    Err(Error::ValueOutsideTarget(y))
                }
            }
        }
    }

    /// Source–value pairs in canonical source order.
    pub fn entries(&self) -> Result<BTreeMap<Value, Value>> {
        match &self.map {
            Map::Table(t) => Ok(t.clone()),
            Map::Rule(_) => self
                .source
                .iter()
                .map(|x| Ok((x.clone(), self.apply(x)?)))
                .collect(),
        }
    }

    /// Tabulates a rule-form map over the source.
    pub fn to_table(&self) -> Result<Function> {
        Ok(Function {
            source: self.source.clone(),
            target: self.target.clone(),
            map: Map::Table(self.entries()?),
        })
    }

    fn table(&self) -> Result<&BTreeMap<Value, Value>> {
        match &self.map {
            Map::Table(t) => Ok(t),
            Map::Rule(_) => Err(Error::RuleForm),
        }
    }

    /// `(S, T, {(x, f(x)) | x ∈ S})`
    pub fn to_binrel(&self) -> Result<BinaryRelation> {
        BinaryRelation::new(self.source.clone(), self.target.clone(), self.entries()?)
    }

    pub fn from_binrel(r: &BinaryRelation) -> Result<Self> {
        if !r.is_functional() {
            return Err(Error::NotFunctional);
        }
        Function::from_table(
            r.source().clone(),
            r.target().clone(),
            r.extent().iter().cloned(),
        )
    }

    /// `f ↓ S'`, the function in `S ∩ S' → T`. `S'` need not be inside `S`.
    pub fn restrict(&self, s: &FinSet) -> Self {
        let source = self.source.intersection(s);
        let map = match &self.map {
            Map::Table(t) => Map::Table(
                t.iter()
                    .filter(|(x, _)| source.contains(x))
                    .map(|(x, y)| (x.clone(), y.clone()))
                    .collect(),
            ),
            Map::Rule(rule) => Map::Rule(rule.clone()),
        };
        Function {
            source,
            target: self.target.clone(),
            map,
        }
    }

    pub fn is_summable(&self, other: &Function) -> Result<bool> {
        Ok(self.first_disagreement(other)?.is_none())
    }

    fn first_disagreement(&self, other: &Function) -> Result<Option<Value>> {
        for x in self.source.intersection(&other.source).iter() {
            if self.apply(x)? != other.apply(x)? {
                return Ok(Some(x.clone()));
            }
        }
        Ok(None)
    }

    /// `f0 + f1` in `(S0 ∪ S1) → (T0 ∪ T1)`.
    pub fn sum(&self, other: &Function) -> Result<Function> {
        if let Some(x) = self.first_disagreement(other)? {
            return Err(Error::NotSummable(x));
        }
        let mut table = other.entries()?;
        table.extend(self.entries()?);
        Ok(Function {
            source: self.source.union(&other.source),
            target: self.target.union(&other.target),
            map: Map::Table(table),
        })
    }

    /// `self ∘ f`: first `f`, then `self`. Requires `target(f) = source(self)`.
    pub fn after(&self, f: &Function) -> Result<Function> {
        compose(self, f)
    }

    pub fn is_injective(&self) -> Result<bool> {
        let t = self.table()?;
        let image: BTreeSet<&Value> = t.values().collect();
        Ok(image.len() == t.len())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let t = self.table()?;
        let image: BTreeSet<&Value> = t.values().collect();
        Ok(self.target.iter().all(|y| image.contains(y)))
    }

    pub fn classify(&self) -> Result<BTreeSet<FnProperty>> {
        let mut props = BTreeSet::new();
        let injective = self.is_injective()?;
        let surjective = self.is_surjective()?;
        if injective {
            props.insert(FnProperty::Injective);
        }
        if surjective {
            props.insert(FnProperty::Surjective);
        }
        if injective && surjective {
            props.insert(FnProperty::Bijective);
        }
        Ok(props)
    }

    /// The unique `g` with `g ∘ f = id_S` and `f ∘ g = id_T`.
    pub fn inverse(&self) -> Result<Function> {
        if !(self.is_injective()? && self.is_surjective()?) {
            return Err(Error::PropertyRequired("bijective"));
        }
        let table = self.table()?;
        Ok(Function {
            source: self.target.clone(),
            target: self.source.clone(),
            map: Map::Table(table.iter().map(|(x, y)| (y.clone(), x.clone())).collect()),
        })
    }

    /// Some `g` with `g ∘ f = id_S`. Targets outside the image go to the
    /// smallest source element.
    pub fn left_inverse(&self) -> Result<Function> {
        if !self.is_injective()? {
            return Err(Error::PropertyRequired("injective"));
        }
        let fallback = self.source.first().ok_or(Error::EmptySource)?;
        let preimage: BTreeMap<&Value, &Value> =
            self.table()?.iter().map(|(x, y)| (y, x)).collect();
        let table = self
            .target
            .iter()
            .map(|y| (y.clone(), (*preimage.get(y).unwrap_or(&fallback)).clone()))
            .collect();
        Ok(Function {
            source: self.target.clone(),
            target: self.source.clone(),
            map: Map::Table(table),
        })
    }

    /// Some `g` with `f ∘ g = id_T`. Each target picks its smallest preimage.
    pub fn right_inverse(&self) -> Result<Function> {
        if !self.is_surjective()? {
            return Err(Error::PropertyRequired("surjective"));
        }
        if self.source.is_empty() {
            return Err(Error::EmptySource);
        }
        let mut preimage: BTreeMap<&Value, &Value> = BTreeMap::new();
        // table iterates in canonical order, so the first hit is the smallest
        for (x, y) in self.table()? {
            preimage.entry(y).or_insert(x);
        }
        let table = preimage
            .into_iter()
            .map(|(y, x)| (y.clone(), x.clone()))
            .collect();
        Ok(Function {
            source: self.target.clone(),
            target: self.source.clone(),
            map: Map::Table(table),
        })
    }

    /// Canonical set extension: `{f(x) | x ∈ S' ∩ S}`.
    pub fn image(&self, subset: &FinSet) -> Result<FinSet> {
        subset
            .iter()
            .filter(|x| self.source.contains(x))
            .map(|x| self.apply(x))
            .collect()
    }

    /// Inverse set extension: `{x ∈ S | f(x) ∈ T'}`.
    pub fn preimage(&self, subset: &FinSet) -> Result<FinSet> {
        let mut out = FinSet::new();
        for x in self.source.iter() {
            if subset.contains(&self.apply(x)?) {
                out.insert(x.clone());
            }
        }
        Ok(out)
    }
}

/// `g ∘ f`, with map `x ↦ g(f(x))`.
pub fn compose(g: &Function, f: &Function) -> Result<Function> {
    if f.target != g.source {
        return Err(Error::ShapeMismatch(
            "target of the inner function is not the source of the outer".into(),
        ));
    }
    let table = f
        .source
        .iter()
        .map(|x| Ok((x.clone(), g.apply(&f.apply(x)?)?)))
        .collect::<Result<_>>()?;
    Ok(Function {
        source: f.source.clone(),
        target: g.target.clone(),
        map: Map::Table(table),
    })
}

/// `|S → T| = |T|^|S|`
pub fn count_functions(source: &FinSet, target: &FinSet) -> Result<u128> {
    let exp = u32::try_from(source.len()).map_err(|_| Error::Overflow)?;
    (target.len() as u128)
        .checked_pow(exp)
        .ok_or(Error::Overflow)
}

/// Every function in `S → T`, in odometer order over the canonical source order.
pub fn enumerate_functions(
    source: &FinSet,
    target: &FinSet,
    limits: &Limits,
) -> Result<Vec<Function>> {
    let count = count_functions(source, target).unwrap_or(u128::MAX);
    Limits::check("function space", count, limits.function_space_max)?;
    let xs: Vec<&Value> = source.iter().collect();
    let ys: Vec<&Value> = target.iter().collect();
    let mut out = Vec::with_capacity(count as usize);
    if count == 0 {
        return Ok(out);
    }
    let mut digits = vec![0usize; xs.len()];
    loop {
        let table = xs
            .iter()
            .zip(&digits)
            .map(|(x, &d)| ((*x).clone(), ys[d].clone()))
            .collect();
        out.push(Function {
            source: source.clone(),
            target: target.clone(),
            map: Map::Table(table),
        });
        // increment the odometer; done when it wraps
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] < ys.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

impl PartialEq for Function {
    fn eq(&self, other: &Self) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        match (&self.map, &other.map) {
            (Map::Table(a), Map::Table(b)) => a == b,
            (Map::Rule(a), Map::Rule(b)) if Arc::ptr_eq(a, b) => true,
            _ => match (self.entries(), other.entries()) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            },
        }
    }
}

impl Eq for Function {}

impl fmt::Debug for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Function");
        d.field("source", &self.source)
            .field("target", &self.target);
        match &self.map {
            Map::Table(t) => d.field("table", t),
            Map::Rule(_) => d.field("rule", &"<opaque>"),
        };
        d.finish()
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.entries() {
            Ok(t) => {
                f.write_str("{")?;
                for (i, (x, y)) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x} ↦ {y}")?;
                }
                f.write_str("}")
            }
            Err(_) => f.write_str("<rule>"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Value {
        Value::text("sym", s)
    }
    fn nat(n: i64) -> Value {
        Value::int("nat", n)
    }
    fn syms(items: &[&str]) -> FinSet {
        items.iter().map(|s| sym(s)).collect()
    }
    fn nats(items: &[i64]) -> FinSet {
        items.iter().map(|n| nat(*n)).collect()
    }
    fn f_ab() -> Function {
        Function::from_table(
            syms(&["a", "b"]),
            nats(&[0, 1]),
            [(sym("a"), nat(0)), (sym("b"), nat(1))],
        )
        .unwrap()
    }

    #[test]
    fn make_and_apply() {
        let f = f_ab();
        assert_eq!(f.apply(&sym("a")).unwrap(), nat(0));
        assert_eq!(
            f.apply(&sym("z")),
            Err(Error::ArgumentOutsideSource(sym("z")))
        );
        let empty = Function::from_table(FinSet::new(), nats(&[0]), []).unwrap();
        assert!(empty.source().is_empty());
        assert_eq!(
            Function::from_table(syms(&["a", "b"]), nats(&[0]), [(sym("a"), nat(0))]),
            Err(Error::MissingEntry(sym("b")))
        );
        assert_eq!(
            Function::from_table(
                syms(&["a"]),
                nats(&[0, 1]),
                [(sym("a"), nat(0)), (sym("a"), nat(1))]
            ),
            Err(Error::DuplicateEntry(sym("a")))
        );
        assert_eq!(
            Function::from_table(syms(&["a"]), nats(&[0]), [(sym("a"), nat(7))]),
            Err(Error::ValueOutsideTarget(nat(7)))
        );
    }

    #[test]
    fn rule_form() {
        let s = nats(&[0, 1, 2]);
        let double = Function::from_rule(s.clone(), nats(&[0, 2, 4]), |v| {
            nat(v.as_atom().unwrap().payload.as_int().unwrap() * 2)
        })
        .unwrap();
        assert_eq!(double.apply(&nat(2)).unwrap(), nat(4));
        assert!(!double.is_table());
        assert_eq!(double.classify(), Err(Error::RuleForm));
        let table = double.to_table().unwrap();
        assert!(table.is_table());
        assert_eq!(table, double);
        assert!(table.classify().unwrap().contains(&FnProperty::Bijective));
        assert!(Function::from_rule(s, nats(&[0]), |v| v.clone()).is_err());
    }

    #[test]
    fn binrel_roundtrip() {
        let f = f_ab();
        let r = f.to_binrel().unwrap();
        assert_eq!(
            r.extent(),
            &BTreeSet::from([(sym("a"), nat(0)), (sym("b"), nat(1))])
        );
        assert_eq!(Function::from_binrel(&r).unwrap(), f);
        let bad = BinaryRelation::new(
            syms(&["a"]),
            nats(&[0, 1]),
            [(sym("a"), nat(0)), (sym("a"), nat(1))],
        )
        .unwrap();
        assert_eq!(Function::from_binrel(&bad), Err(Error::NotFunctional));
    }

    #[test]
    fn restriction() {
        let f = f_ab();
        let r = f.restrict(&syms(&["a"]));
        assert_eq!(r.source(), &syms(&["a"]));
        assert_eq!(r.apply(&sym("a")).unwrap(), nat(0));
        assert!(f.restrict(&FinSet::new()).source().is_empty());
        assert_eq!(f.restrict(&syms(&["a", "z"])), r);
    }

    #[test]
    fn insertion_and_characteristic() {
        let (sub, sup) = (syms(&["a"]), syms(&["a", "b"]));
        let i = Function::insertion(&sub, &sup).unwrap();
        assert_eq!(i.apply(&sym("a")).unwrap(), sym("a"));
        assert_eq!(i.target(), &sup);
        assert!(Function::insertion(&sup, &sub).is_err());

        let chi = Function::characteristic(&sub, &sup);
        assert_eq!(chi.apply(&sym("a")).unwrap(), nat(1));
        assert_eq!(chi.apply(&sym("b")).unwrap(), nat(0));

        let f = f_ab();
        assert_eq!(f.after(&i).unwrap(), f.restrict(&sub));
    }

    #[test]
    fn insertion_of_proper_subset_is_injective_only() {
        let i = Function::insertion(&syms(&["a"]), &syms(&["a", "b"])).unwrap();
        // oracle: the image {a} misses b
        let image = i.image(i.source()).unwrap();
        assert!(!image.contains(&sym("b")));
        assert_eq!(
            i.classify().unwrap(),
            BTreeSet::from([FnProperty::Injective])
        );
    }

    #[test]
    fn function_sum() {
        let f0 = f_ab();
        let f1 = Function::from_table(
            syms(&["b", "c"]),
            nats(&[0, 1]),
            [(sym("b"), nat(1)), (sym("c"), nat(0))],
        )
        .unwrap();
        let sum = f0.sum(&f1).unwrap();
        let expected = Function::from_table(
            syms(&["a", "b", "c"]),
            nats(&[0, 1]),
            [(sym("a"), nat(0)), (sym("b"), nat(1)), (sym("c"), nat(0))],
        )
        .unwrap();
        assert_eq!(sum, expected);

        let disjoint =
            Function::from_table(syms(&["z"]), nats(&[5]), [(sym("z"), nat(5))]).unwrap();
        assert!(f0.is_summable(&disjoint).unwrap());

        let clash = Function::from_table(syms(&["b"]), nats(&[0]), [(sym("b"), nat(0))]).unwrap();
        assert_eq!(f0.sum(&clash), Err(Error::NotSummable(sym("b"))));
    }

    #[test]
    fn composition() {
        let f = f_ab();
        let id_s = Function::identity(f.source());
        let id_t = Function::identity(f.target());
        assert_eq!(compose(&f, &id_s).unwrap(), f);
        assert_eq!(compose(&id_t, &f).unwrap(), f);

        let f = Function::from_table(syms(&["a"]), nats(&[1]), [(sym("a"), nat(1))]).unwrap();
        let g = Function::from_table(nats(&[1]), syms(&["x"]), [(nat(1), sym("x"))]).unwrap();
        assert_eq!(compose(&g, &f).unwrap().apply(&sym("a")).unwrap(), sym("x"));
        assert!(compose(&f, &f).is_err());
    }

    #[test]
    fn classification() {
        let id = Function::identity(&syms(&["a", "b"]));
        assert_eq!(id.classify().unwrap().len(), 3);
        let collapse = Function::from_table(
            syms(&["a", "b"]),
            nats(&[0]),
            [(sym("a"), nat(0)), (sym("b"), nat(0))],
        )
        .unwrap();
        assert_eq!(
            collapse.classify().unwrap(),
            BTreeSet::from([FnProperty::Surjective])
        );
    }

    #[test]
    fn inverses() {
        let f = f_ab();
        let inv = f.inverse().unwrap();
        assert_eq!(inv.apply(&nat(0)).unwrap(), sym("a"));
        assert_eq!(inv.apply(&nat(1)).unwrap(), sym("b"));
        assert_eq!(inv.inverse().unwrap(), f);

        let g = Function::from_table(syms(&["a"]), nats(&[0, 1]), [(sym("a"), nat(0))]).unwrap();
        let left = g.left_inverse().unwrap();
        assert_eq!(left.apply(&nat(0)).unwrap(), sym("a"));
        assert_eq!(compose(&left, &g).unwrap(), Function::identity(g.source()));
        assert_eq!(g.inverse(), Err(Error::PropertyRequired("bijective")));
        assert_eq!(
            g.right_inverse(),
            Err(Error::PropertyRequired("surjective"))
        );

        let collapse = Function::from_table(
            syms(&["a", "b"]),
            nats(&[0]),
            [(sym("a"), nat(0)), (sym("b"), nat(0))],
        )
        .unwrap();
        assert_eq!(
            collapse.inverse(),
            Err(Error::PropertyRequired("bijective"))
        );
        let right = collapse.right_inverse().unwrap();
        assert_eq!(right.apply(&nat(0)).unwrap(), sym("a"));
        assert_eq!(
            compose(&collapse, &right).unwrap(),
            Function::identity(collapse.target())
        );

        let empty = Function::from_table(FinSet::new(), nats(&[0]), []).unwrap();
        assert_eq!(empty.left_inverse(), Err(Error::EmptySource));
    }

    #[test]
    fn counting_examples() {
        let limits = Limits::default();
        let t3 = nats(&[0, 1, 2]);
        assert_eq!(count_functions(&FinSet::new(), &t3).unwrap(), 1);
        assert_eq!(
            enumerate_functions(&FinSet::new(), &t3, &limits)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(count_functions(&syms(&["x"]), &t3).unwrap(), 3);
        assert_eq!(count_functions(&syms(&["x"]), &FinSet::new()).unwrap(), 0);
        assert!(enumerate_functions(&syms(&["x"]), &FinSet::new(), &limits)
            .unwrap()
            .is_empty());
        let tight = Limits {
            function_space_max: 8,
            ..Limits::default()
        };
        assert!(enumerate_functions(&syms(&["x", "y"]), &t3, &tight).is_err());
    }

    #[test]
    fn set_extension_examples() {
        let f = f_ab();
        assert_eq!(f.image(&syms(&["a", "b"])).unwrap(), nats(&[0, 1]));
        assert_eq!(f.preimage(&nats(&[0])).unwrap(), syms(&["a"]));

        let g = Function::from_table(
            syms(&["a", "b"]),
            nats(&[0]),
            [(sym("a"), nat(0)), (sym("b"), nat(0))],
        )
        .unwrap();
        let (s1, s2) = (syms(&["a"]), syms(&["b"]));
        let meet_of_images = g.image(&s1).unwrap().intersection(&g.image(&s2).unwrap());
        assert_eq!(meet_of_images, nats(&[0]));
        assert_eq!(g.image(&s1.intersection(&s2)).unwrap(), FinSet::new());
    }
}
