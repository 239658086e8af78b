//! The schema file: one declaration per line, `#` starts a comment.
//!
//! ```text
//! domain city = text
//! domain qty = natural
//! domain color = {red, green, "sky blue"}
//! attribute pqty : qty
//! relation parts(pid, pname, sid, pqty) key(pid)
//! relation pc[person, person]
//! ```

use std::path::Path;

use relkit_core::engine::Scheme;
use relkit_core::tuples::{BuiltinKind, Domain};
use relkit_core::{Atom, FinSet, Payload};

use crate::error::CliError;

/// Reads a payload the way both schema members and data fields are read:
/// an integer when the text is one, otherwise the text itself.
pub fn payload(text: &str) -> Payload {
    match text.parse::<i64>() {
        Ok(n) => Payload::Int(n),
        Err(_) => Payload::Text(text.to_string()),
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn name(s: &str, what: &str) -> Result<String, String> {
    let s = s.trim();
    if is_name(s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected {what}, found {s:?}"))
    }
}

fn list(s: &str, what: &str) -> Result<Vec<String>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| name(p, what)).collect()
}

/// `inner` of a `head(inner)`-style suffix, with what follows it.
fn delimited(s: &str, open: char, close: char) -> Result<(&str, &str), String> {
    let s = s.trim_start();
    let rest = s
        .strip_prefix(open)
        .ok_or_else(|| format!("expected `{open}`"))?;
    let end = rest
        .find(close)
        .ok_or_else(|| format!("missing `{close}`"))?;
    Ok((&rest[..end], &rest[end + close.len_utf8()..]))
}

fn members(domain: &str, body: &str) -> Result<FinSet, String> {
    let mut out = FinSet::new();
    if body.trim().is_empty() {
        return Ok(out);
    }
    for m in body.split(',') {
        let m = m.trim();
        let text = match m.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
            Some(inner) => inner,
            None if m.is_empty() => return Err("empty member".into()),
            None => m,
        };
        out.insert(Atom::new(domain, payload(text)));
    }
    Ok(out)
}

fn declaration(scheme: &mut Scheme, line: &str) -> Result<(), String> {
    let (keyword, rest) = line
        .split_once(char::is_whitespace)
        .ok_or_else(|| format!("incomplete declaration {line:?}"))?;
    match keyword {
        "domain" => {
            let (n, def) = rest.split_once('=').ok_or("expected `=` in domain")?;
            let n = name(n, "a domain name")?;
            let def = def.trim();
            let domain = match def {
                "natural" => Domain::builtin(&n, BuiltinKind::Natural),
                "text" => Domain::builtin(&n, BuiltinKind::Text),
                _ => {
                    let (body, tail) = delimited(def, '{', '}')
                        .map_err(|_| format!("expected natural, text or {{…}}, found {def:?}"))?;
                    if !tail.trim().is_empty() {
                        return Err(format!("unexpected {:?} after members", tail.trim()));
                    }
                    Domain::enumerated(&n, members(&n, body)?).map_err(|e| e.to_string())?
                }
            };
            scheme.add_domain(domain).map_err(|e| e.to_string())
        }
        "attribute" => {
            let (n, d) = rest.split_once(':').ok_or("expected `:` in attribute")?;
            scheme
                .add_attribute(&name(n, "an attribute name")?, &name(d, "a domain name")?)
                .map_err(|e| e.to_string())
        }
        "relation" => {
            let rest = rest.trim();
            let split = rest
                .find(['(', '['])
                .ok_or("expected `(` or `[` after the relation name")?;
            let rname = name(&rest[..split], "a relation name")?;
            if rest[split..].starts_with('[') {
                let (body, tail) = delimited(&rest[split..], '[', ']')?;
                if !tail.trim().is_empty() {
                    return Err(format!("unexpected {:?}", tail.trim()));
                }
                let ds = list(body, "a domain name")?;
                let ds: Vec<&str> = ds.iter().map(String::as_str).collect();
                return scheme
                    .add_positional_relation(&rname, &ds)
                    .map_err(|e| e.to_string());
            }
            let (body, tail) = delimited(&rest[split..], '(', ')')?;
            let attrs = list(body, "an attribute name")?;
            let tail = tail.trim();
            let key = if tail.is_empty() {
                None
            } else {
                let k = tail
                    .strip_prefix("key")
                    .ok_or_else(|| format!("unexpected {tail:?}"))?;
                let (kb, after) = delimited(k, '(', ')')?;
                if !after.trim().is_empty() {
                    return Err(format!("unexpected {:?}", after.trim()));
                }
                Some(list(kb, "an attribute name")?)
            };
            let attrs: Vec<&str> = attrs.iter().map(String::as_str).collect();
            let key: Option<Vec<&str>> =
                key.as_ref().map(|k| k.iter().map(String::as_str).collect());
            scheme
                .add_relation(&rname, &attrs, key.as_deref())
                .map_err(|e| e.to_string())
        }
        other => Err(format!("unknown declaration {other:?}")),
    }
}

pub fn parse_schema(src: &str, path: &Path) -> Result<Scheme, CliError> {
    let mut scheme = Scheme::new();
    for (n, raw) in src.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        declaration(&mut scheme, line).map_err(|message| CliError::Schema {
            path: path.to_path_buf(),
            line: n + 1,
            message,
        })?;
    }
    Ok(scheme)
}

pub fn read_schema(path: &Path) -> Result<Scheme, CliError> {
    let src = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_schema(&src, path)
}
