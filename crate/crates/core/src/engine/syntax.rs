//! Rule syntax: `name(v, …) :- atom, … .` where an atom is either
//! `rel(attr: v, …)` or `rel(v, …)`. `_` is a fresh variable per occurrence;
//! `←` may replace `:-` and the final `.` is optional.

use std::fmt;

use crate::relations::Variable;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Args {
    Named(Vec<(String, Variable)>),
    Positional(Vec<Variable>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BodyAtom {
    pub relation: String,
    pub args: Args,
    /// 1-based source position of the relation name; `(0, 0)` when built in code.
    pub line: usize,
    pub column: usize,
}

impl BodyAtom {
    pub fn named<'a>(relation: &str, args: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        BodyAtom {
            relation: relation.to_string(),
            args: Args::Named(
                args.into_iter()
                    .map(|(a, v)| (a.to_string(), Variable::new(v)))
                    .collect(),
            ),
            line: 0,
            column: 0,
        }
    }

    pub fn positional<'a>(relation: &str, vars: impl IntoIterator<Item = &'a str>) -> Self {
        BodyAtom {
            relation: relation.to_string(),
            args: Args::Positional(vars.into_iter().map(Variable::new).collect()),
            line: 0,
            column: 0,
        }
    }

    pub fn variables(&self) -> Vec<&Variable> {
        match &self.args {
            Args::Named(a) => a.iter().map(|(_, v)| v).collect(),
            Args::Positional(v) => v.iter().collect(),
        }
    }
}

/// `head ← body`: one conjunctive rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub head: Vec<Variable>,
    pub body: Vec<BodyAtom>,
}

impl Rule {
    pub fn new<'a>(
        name: &str,
        head: impl IntoIterator<Item = &'a str>,
        body: impl IntoIterator<Item = BodyAtom>,
    ) -> Self {
        Rule {
            name: name.to_string(),
            head: head.into_iter().map(Variable::new).collect(),
            body: body.into_iter().collect(),
        }
    }
}

/// Anonymous variables print as `_`.
fn shown(v: &Variable) -> &str {
    if v.0.starts_with("_$") {
        "_"
    } else {
        &v.0
    }
}

impl fmt::Display for BodyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        match &self.args {
            Args::Named(a) => {
                for (i, (attr, v)) in a.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{attr}: {}", shown(v))?;
                }
            }
            Args::Positional(vs) => {
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(shown(v))?;
                }
            }
        }
        f.write_str(")")
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, v) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(") :- ")?;
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Turnstile,
    Dot,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Turnstile => f.write_str("`:-`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, col) = (line, column);
        let mut push = |tok, width: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            });
            *i += width;
            *column += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            ',' => push(Tok::Comma, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            '←' => push(Tok::Turnstile, 1, &mut i, &mut column),
            ':' if chars.get(i + 1) == Some(&'-') => push(Tok::Turnstile, 2, &mut i, &mut column),
            ':' => push(Tok::Colon, 1, &mut i, &mut column),
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                column += i - start;
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: l,
                    column: col,
                });
            }
            c => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    fresh: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn error_here(&self, message: String) -> Error {
        let t = self.peek();
        Error::Parse {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek().tok == tok {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(format!("expected {tok}, found {}", self.peek().tok)))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            t => Err(self.error_here(format!("expected {what}, found {t}"))),
        }
    }

    fn variable(&mut self) -> Result<Variable> {
        let v = self.ident("a variable")?;
        if v == "_" {
            self.fresh += 1;
            Ok(Variable(format!("_${}", self.fresh)))
        } else {
            Ok(Variable(v))
        }
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn rule(&mut self) -> Result<Rule> {
        let name = self.ident("a rule name")?;
        self.expect(Tok::LParen)?;
        let mut head = Vec::new();
        loop {
            let here = (self.peek().line, self.peek().column);
            let v = self.ident("a head variable")?;
            if v == "_" {
                return Err(Error::Parse {
                    line: here.0,
                    column: here.1,
                    message: "anonymous variable in head".into(),
                });
            }
            let v = Variable(v);
            if head.contains(&v) {
                return Err(Error::Parse {
                    line: here.0,
                    column: here.1,
                    message: format!("head variable {v} repeated"),
                });
            }
            head.push(v);
            if self.at(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Turnstile)?;
        let mut body = vec![self.atom()?];
        while self.at(&Tok::Comma) {
            self.pos += 1;
            body.push(self.atom()?);
        }
        if self.at(&Tok::Dot) {
            self.pos += 1;
        }
        if !self.at(&Tok::End) {
            return Err(self.error_here(format!("expected `,` or `.`, found {}", self.peek().tok)));
        }
        Ok(Rule { name, head, body })
    }

    fn atom(&mut self) -> Result<BodyAtom> {
        let (line, column) = (self.peek().line, self.peek().column);
        let relation = self.ident("a relation name")?;
        self.expect(Tok::LParen)?;
        let named = self
            .toks
            .get(self.pos + 1)
            .is_some_and(|t| t.tok == Tok::Colon);
        let args = if self.at(&Tok::RParen) {
            Args::Positional(Vec::new())
        } else if named {
            let mut args = Vec::new();
            loop {
                let attr = self.ident("an attribute name")?;
                self.expect(Tok::Colon)?;
                args.push((attr, self.variable()?));
                if !self.at(&Tok::Comma) {
                    break;
                }
                self.pos += 1;
            }
            Args::Named(args)
        } else {
            let mut vars = Vec::new();
            loop {
                vars.push(self.variable()?);
                if self.at(&Tok::Colon) {
                    return Err(self.error_here("named and positional arguments mixed".into()));
                }
                if !self.at(&Tok::Comma) {
                    break;
                }
                self.pos += 1;
            }
            Args::Positional(vars)
        };
        self.expect(Tok::RParen)?;
        Ok(BodyAtom {
            relation,
            args,
            line,
            column,
        })
    }
}

pub fn parse_rule(src: &str) -> Result<Rule> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        fresh: 0,
    };
    p.rule()
}
