//! One CSV file per relation, `<datadir>/<relation>.csv`. The header row
//! names the columns, so column order in the file does not matter.
//! Positional relations use the headers `0, 1, …`.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use relkit_core::engine::{Indexing, Instance, RelationSchema, Scheme};
use relkit_core::relations::Relation;
use relkit_core::tuples::{BuiltinKind, Domain, Index, Membership, Tuple};
use relkit_core::{Atom, Payload};

use crate::error::CliError;
use crate::schema::payload;

/// Reads a CSV field as a member of `domain`.
pub fn parse_field(domain: &Domain, field: &str) -> Result<Atom, String> {
    match domain.membership() {
        Membership::Builtin(BuiltinKind::Natural) => field
            .parse::<u64>()
            .ok()
            .and_then(|n| i64::try_from(n).ok())
            .map(|n| Atom::int(domain.name(), n))
            .ok_or_else(|| format!("{field:?} is not a natural number (domain {domain})")),
        Membership::Builtin(BuiltinKind::Text) => {
            Ok(Atom::new(domain.name(), Payload::Text(field.to_string())))
        }
        Membership::Enumerated(_) => domain
            .atom(payload(field))
            .ok_or_else(|| format!("{field:?} is not a member of domain {domain}")),
    }
}

fn header_index(rs: &RelationSchema, h: &str) -> Option<Index> {
    let i = match rs.indexing() {
        Indexing::Named => Index::name(h),
        Indexing::Positional => Index::Pos(h.parse().ok()?),
    };
    rs.signature().get(&i).is_some().then_some(i)
}

/// Reads one relation's extent from CSV text.
pub fn read_relation(
    rs: &RelationSchema,
    reader: impl std::io::Read,
    path: &Path,
) -> Result<Relation, CliError> {
    let data_err = |line: u64, message: String| CliError::Data {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| data_err(1, e.to_string()))?
        .clone();
    let mut columns = Vec::with_capacity(headers.len());
    for h in headers.iter() {
        let i = header_index(rs, h).ok_or_else(|| {
            data_err(
                1,
                format!("column {h:?} is not an attribute of {}", rs.name()),
            )
        })?;
        if columns.contains(&i) {
            return Err(data_err(1, format!("column {h:?} appears twice")));
        }
        columns.push(i);
    }
    if let Some(missing) = rs.declared_order().iter().find(|i| !columns.contains(i)) {
        return Err(data_err(1, format!("missing column {missing}")));
    }

    let mut seen_keys: HashMap<Tuple, (Tuple, u64)> = HashMap::new();
    let mut tuples = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            data_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let mut entries = BTreeMap::new();
        for (i, field) in columns.iter().zip(record.iter()) {
            let domain = rs.signature().get(i).expect("checked against the header");
            let atom =
                parse_field(domain, field).map_err(|m| data_err(line, format!("{i}: {m}")))?;
            entries.insert(i.clone(), atom);
        }
        let t = Tuple::new(entries).expect("columns are distinct");
        if let Some(key) = rs.key() {
            let k = t.restrict(key);
            match seen_keys.get(&k) {
                Some((first, first_line)) if *first != t => {
                    return Err(data_err(
                        line,
                        format!("key {k} of {} already used on line {first_line}", rs.name()),
                    ))
                }
                Some(_) => {}
                None => {
                    seen_keys.insert(k, (t.clone(), line));
                }
            }
        }
        tuples.push(t);
    }
    Relation::new(rs.signature().clone(), tuples).map_err(CliError::Instance)
}

/// Loads every relation of `scheme` from `dir`.
pub fn load_instance(scheme: Scheme, dir: &Path) -> Result<Instance, CliError> {
    let mut extents = BTreeMap::new();
    for rs in scheme.relations() {
        let path = dir.join(format!("{}.csv", rs.name()));
        let file = std::fs::File::open(&path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        extents.insert(rs.name().to_string(), read_relation(rs, file, &path)?);
    }
    Instance::new(scheme, extents).map_err(CliError::Instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_schema;

    fn scheme() -> Scheme {
        parse_schema(
            "domain id = natural\ndomain name = text\ndomain c = {x, 2}\n\
             attribute sid : id\nattribute sname : name\nattribute tag : c\n\
             relation s(sid, sname, tag) key(sid)\nrelation p[id, c]",
            Path::new("schema"),
        )
        .unwrap()
    }

    fn read(name: &str, csv: &str) -> Result<Relation, CliError> {
        let s = scheme();
        read_relation(
            s.relation(name).unwrap(),
            csv.as_bytes(),
            Path::new("f.csv"),
        )
    }

    #[test]
    fn header_binding_ignores_column_order() {
        let a = read("s", "sid,sname,tag\n1,lee,x\n2,poe,2\n").unwrap();
        let b = read("s", "tag, sname, sid\nx, lee, 1\n2, poe, 2\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        let p = read("p", "1,0\nx,3\n2,4\n").unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn duplicate_rows_collapse() {
        assert_eq!(
            read("s", "sid,sname,tag\n1,lee,x\n1,lee,x\n")
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn bad_rows_cite_their_line() {
        let line = |r: Result<Relation, CliError>| match r {
            Err(CliError::Data { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line(read("s", "sid,sname,tag\n1,lee,x\nseven,poe,x\n")), 3);
        assert_eq!(line(read("s", "sid,sname,tag\n1,lee,y\n")), 2);
        assert_eq!(line(read("s", "sid,sname,tag\n1,lee,x\n1,poe,x\n")), 3);
        assert_eq!(line(read("s", "sid,sname\n1,lee\n")), 1);
        assert_eq!(line(read("s", "sid,sname,tag,city\n")), 1);
        assert_eq!(line(read("s", "sid,sname,tag\n1,lee\n")), 2);
    }
}
