use std::fmt::Write as _;
use std::path::Path;

use relkit_core::engine::{
    builtin_relations, compile_rule, evaluate_with_limits, explain, head_columns, parse_rule, plan,
    Indexing, Instance, Query, RelationSchema, Typing,
};
use relkit_core::relations::Relation;
use relkit_core::Limits;

use crate::error::CliError;
use crate::format::{render, Format};
use crate::load::load_instance;
use crate::schema::read_schema;

/// Name of the environment variable overriding `Limits::materialize_max`.
pub const LIMIT_VAR: &str = "RELKIT_LIMIT";

/// Limits from `RELKIT_LIMIT`, or the defaults when it is unset.
pub fn limits_from_env() -> Result<Limits, CliError> {
    match std::env::var(LIMIT_VAR) {
        Err(_) => Ok(Limits::default()),
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(|n| Limits::default().with_materialize_max(n))
            .map_err(|_| CliError::Usage(format!("{LIMIT_VAR}={v:?} is not a number"))),
    }
}

/// A loaded instance plus output settings. The instance only changes by a full reload.
#[derive(Debug, Clone)]
pub struct Session {
    instance: Instance,
    pub format: Format,
    pub limits: Limits,
}

impl Session {
    pub fn new(instance: Instance, limits: Limits) -> Self {
        Session {
            instance,
            format: Format::default(),
            limits,
        }
    }

    pub fn load(schema: &Path, data: &Path, limits: Limits) -> Result<Self, CliError> {
        let scheme = read_schema(schema)?;
        Ok(Session::new(load_instance(scheme, data)?, limits))
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn evaluate(&self, src: &str) -> Result<(Query, Relation), CliError> {
        let q = self.compile(src)?;
        let p = plan(&q, &self.instance).map_err(CliError::Query)?;
        let r = evaluate_with_limits(&p, &self.instance, &self.limits).map_err(CliError::Query)?;
        Ok((q, r))
    }

    fn compile(&self, src: &str) -> Result<Query, CliError> {
        let rule = parse_rule(src).map_err(CliError::Query)?;
        compile_rule(&rule, self.instance.scheme()).map_err(CliError::Query)
    }

    /// The result of a rule, rendered with its columns in head order.
    pub fn query(&self, src: &str) -> Result<String, CliError> {
        let (q, r) = self.evaluate(src)?;
        Ok(render(&r, &head_columns(&q), self.format))
    }

    pub fn explain(&self, src: &str) -> Result<String, CliError> {
        let q = self.compile(src)?;
        let p = plan(&q, &self.instance).map_err(CliError::Query)?;
        Ok(explain(&p))
    }

    /// One line per stored relation with its size, then the built-ins.
    pub fn relations(&self) -> String {
        let mut out = String::new();
        for rs in self.instance.scheme().relations() {
            let n = self.instance.relation(rs.name()).map_or(0, Relation::len);
            let _ = writeln!(out, "{}  {n} tuples", heading(rs));
        }
        for b in builtin_relations() {
            let _ = writeln!(out, "{}/{}  built-in", b.name(), b.arity());
        }
        out
    }

    pub fn schema(&self, name: &str) -> Result<String, CliError> {
        let scheme = self.instance.scheme();
        let mut out = String::new();
        if let Some(rs) = scheme.relation(name) {
            let _ = write!(out, "relation {}", heading(rs));
            if let Some(key) = rs.key() {
                let k: Vec<String> = key.iter().map(|i| i.to_string()).collect();
                let _ = write!(out, " key({})", k.join(", "));
            }
            out.push('\n');
            for i in rs.declared_order() {
                let d = rs.signature().get(i).expect("declared index");
                let _ = writeln!(out, "  {i} : {d} ({})", describe(d));
            }
            return Ok(out);
        }
        if let Some(b) = builtin_relations().into_iter().find(|b| b.name() == name) {
            let typing = match b.typing() {
                Typing::Numeric => "numeric domains",
                Typing::SameDomain => "one domain for all positions",
            };
            let _ = writeln!(
                out,
                "built-in {}/{}: {typing}, domains fixed per use",
                b.name(),
                b.arity()
            );
            return Ok(out);
        }
        Err(CliError::Query(relkit_core::Error::UnknownRelation(
            name.to_string(),
        )))
    }

    /// A short account of the loaded instance.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (name, r) in self.instance.relations() {
            let _ = writeln!(out, "{name}: {} tuples", r.len());
        }
        out
    }
}

fn heading(rs: &RelationSchema) -> String {
    let parts: Vec<String> = match rs.indexing() {
        Indexing::Named => rs.declared_order().iter().map(|i| i.to_string()).collect(),
        Indexing::Positional => rs
            .signature()
            .entries()
            .values()
            .map(|d| d.name().to_string())
            .collect(),
    };
    match rs.indexing() {
        Indexing::Named => format!("{}({})", rs.name(), parts.join(", ")),
        Indexing::Positional => format!("{}[{}]", rs.name(), parts.join(", ")),
    }
}

fn describe(d: &relkit_core::tuples::Domain) -> String {
    use relkit_core::tuples::{BuiltinKind, Membership};
    match d.membership() {
        Membership::Builtin(BuiltinKind::Natural) => "natural".into(),
        Membership::Builtin(BuiltinKind::Text) => "text".into(),
        Membership::Enumerated(m) => format!("{} members", m.len()),
    }
}
