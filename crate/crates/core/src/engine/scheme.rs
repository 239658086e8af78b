use std::collections::BTreeMap;

use crate::relations::Relation;
use crate::tuples::{Domain, Index, IndexSet, Signature};
use crate::{Error, Result};

use super::builtin::is_builtin;

/// How a stored relation is indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indexing {
    /// Attribute names drawn from the scheme's global attributes.
    Named,
    /// Positions `0..n`.
    Positional,
}

/// One `I_k` of the scheme: its signature and optional declared key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSchema {
    name: String,
    indexing: Indexing,
    signature: Signature,
    /// Declaration order of the attributes, used for display only.
    order: Vec<Index>,
    key: Option<IndexSet>,
}

impl RelationSchema {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn indexing(&self) -> Indexing {
        self.indexing
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn declared_order(&self) -> &[Index] {
        &self.order
    }

    pub fn key(&self) -> Option<&IndexSet> {
        self.key.as_ref()
    }
}

/// Domains, the global attribute typing `A → T`, and the relation schemas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scheme {
    domains: BTreeMap<String, Domain>,
    attributes: BTreeMap<Index, Domain>,
    relations: BTreeMap<String, RelationSchema>,
}

impl Scheme {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_domain(&mut self, domain: Domain) -> Result<()> {
        if self.domains.contains_key(domain.name()) {
            return Err(Error::Scheme(format!(
                "domain {} declared twice",
                domain.name()
            )));
        }
        self.domains.insert(domain.name().to_string(), domain);
        Ok(())
    }

    pub fn add_attribute(&mut self, name: &str, domain: &str) -> Result<()> {
        let d = self
            .domains
            .get(domain)
            .ok_or_else(|| Error::Scheme(format!("unknown domain {domain}")))?;
        let i = Index::name(name);
        if self.attributes.contains_key(&i) {
            return Err(Error::Scheme(format!("attribute {name} declared twice")));
        }
        self.attributes.insert(i, d.clone());
        Ok(())
    }

    fn check_new_relation(&self, name: &str) -> Result<()> {
        if is_builtin(name) {
            return Err(Error::Scheme(format!("{name} is a built-in relation")));
        }
        if self.relations.contains_key(name) {
            return Err(Error::Scheme(format!("relation {name} declared twice")));
        }
        Ok(())
    }

    /// A relation over a subset of the global attributes, with `τ↓I_k` as signature.
    pub fn add_relation(
        &mut self,
        name: &str,
        attributes: &[&str],
        key: Option<&[&str]>,
    ) -> Result<()> {
        self.check_new_relation(name)?;
        let mut order = Vec::with_capacity(attributes.len());
        for a in attributes {
            let i = Index::name(*a);
            if !self.attributes.contains_key(&i) {
                return Err(Error::UnknownAttribute {
                    relation: name.to_string(),
                    attribute: a.to_string(),
                });
            }
            if order.contains(&i) {
                return Err(Error::Scheme(format!("{name} lists attribute {a} twice")));
            }
            order.push(i);
        }
        let indexes: IndexSet = order.iter().cloned().collect();
        let key = match key {
            None => None,
            Some(k) => {
                let k: IndexSet = k.iter().map(|a| Index::name(*a)).collect();
                if let Some(stray) = k.difference(&indexes).next() {
                    return Err(Error::UnknownAttribute {
                        relation: name.to_string(),
                        attribute: stray.to_string(),
                    });
                }
                Some(k)
            }
        };
        let signature = Signature::new(
            order
                .iter()
                .map(|i| (i.clone(), self.attributes[i].clone())),
        )?;
        self.relations.insert(
            name.to_string(),
            RelationSchema {
                name: name.to_string(),
                indexing: Indexing::Named,
                signature,
                order,
                key,
            },
        );
        Ok(())
    }

    /// A relation indexed by positions `0..n` with the given domains.
    pub fn add_positional_relation(&mut self, name: &str, domains: &[&str]) -> Result<()> {
        self.check_new_relation(name)?;
        let ds = domains
            .iter()
            .map(|d| {
                self.domains
                    .get(*d)
                    .cloned()
                    .ok_or_else(|| Error::Scheme(format!("unknown domain {d}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let signature = Signature::seq(ds);
        self.relations.insert(
            name.to_string(),
            RelationSchema {
                name: name.to_string(),
                indexing: Indexing::Positional,
                order: signature.index_set().into_iter().collect(),
                signature,
                key: None,
            },
        );
        Ok(())
    }

    pub fn domain(&self, name: &str) -> Option<&Domain> {
        self.domains.get(name)
    }

    pub fn domains(&self) -> impl Iterator<Item = &Domain> {
        self.domains.values()
    }

    /// The global attribute typing `τ ∈ A → T`.
    pub fn attribute(&self, name: &str) -> Option<&Domain> {
        self.attributes.get(&Index::name(name))
    }

    pub fn attributes(&self) -> Signature {
        Signature::new(self.attributes.clone()).expect("map keys are distinct")
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSchema> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = &RelationSchema> {
        self.relations.values()
    }
}

/// A scheme together with one extent per relation schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    scheme: Scheme,
    extents: BTreeMap<String, Relation>,
}

impl Instance {
    /// Relations absent from `extents` are stored empty. Each supplied
    /// relation must carry exactly its schema's signature and satisfy its key.
    pub fn new(scheme: Scheme, mut extents: BTreeMap<String, Relation>) -> Result<Self> {
        if let Some(stray) = extents.keys().find(|k| scheme.relation(k).is_none()) {
            return Err(Error::UnknownRelation(stray.clone()));
        }
        for rs in scheme.relations() {
            let r = extents
                .entry(rs.name.clone())
                .or_insert_with(|| Relation::empty(rs.signature.clone()));
            if r.signature() != &rs.signature {
                return Err(Error::Scheme(format!(
                    "extent of {} has signature {}, expected {}",
                    rs.name,
                    r.signature(),
                    rs.signature
                )));
            }
            if let Some(key) = &rs.key {
                if !r.is_key(key)? {
                    return Err(Error::KeyViolation {
                        relation: rs.name.clone(),
                        key: key.iter().map(|i| i.to_string()).collect(),
                    });
                }
            }
        }
        Ok(Instance { scheme, extents })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.extents.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.extents.iter().map(|(k, v)| (k.as_str(), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuples::{BuiltinKind, Tuple};
    use crate::value::Atom;

    fn scheme() -> Scheme {
        let mut s = Scheme::new();
        s.add_domain(Domain::builtin("id", BuiltinKind::Natural))
            .unwrap();
        s.add_domain(Domain::builtin("name", BuiltinKind::Text))
            .unwrap();
        s.add_attribute("sid", "id").unwrap();
        s.add_attribute("city", "name").unwrap();
        s.add_relation("suppliers", &["sid", "city"], Some(&["sid"]))
            .unwrap();
        s
    }

    fn supplier(sid: i64, city: &str) -> Tuple {
        Tuple::new([
            (Index::name("sid"), Atom::int("id", sid)),
            (Index::name("city"), Atom::text("name", city)),
        ])
        .unwrap()
    }

    #[test]
    fn scheme_validation() {
        let mut s = scheme();
        assert!(matches!(
            s.add_attribute("x", "nope"),
            Err(Error::Scheme(_))
        ));
        assert!(matches!(
            s.add_relation("r", &["nope"], None),
            Err(Error::UnknownAttribute { .. })
        ));
        assert!(matches!(
            s.add_relation("r", &["sid"], Some(&["city"])),
            Err(Error::UnknownAttribute { .. })
        ));
        assert!(matches!(
            s.add_relation("leq", &["sid"], None),
            Err(Error::Scheme(_))
        ));
        assert!(matches!(
            s.add_relation("suppliers", &["sid"], None),
            Err(Error::Scheme(_))
        ));
        s.add_positional_relation("pair", &["id", "id"]).unwrap();
        assert_eq!(s.relation("pair").unwrap().signature().len(), 2);
    }

    #[test]
    fn instance_checks_keys() {
        let s = scheme();
        let sig = s.relation("suppliers").unwrap().signature().clone();
        let good =
            Relation::new(sig.clone(), [supplier(1, "tulsa"), supplier(2, "tulsa")]).unwrap();
        let inst = Instance::new(s.clone(), BTreeMap::from([("suppliers".into(), good)])).unwrap();
        assert_eq!(inst.relation("suppliers").unwrap().len(), 2);

        let bad = Relation::new(sig, [supplier(1, "tulsa"), supplier(1, "taos")]).unwrap();
        assert!(matches!(
            Instance::new(s.clone(), BTreeMap::from([("suppliers".into(), bad)])),
            Err(Error::KeyViolation { .. })
        ));
        let empty = Instance::new(s, BTreeMap::new()).unwrap();
        assert!(empty.relation("suppliers").unwrap().is_empty());
    }
}
