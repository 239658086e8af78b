//! The interactive loop. Rule results go to `out` exactly as the batch
//! `query` command prints them; diagnostics go to `err`.

use std::io::{self, BufRead, Write};
use std::path::Path;

use relkit_core::Limits;

use crate::format::Format;
use crate::session::Session;

const HELP: &str = "\
.load SCHEMA DATADIR   load a schema file and its CSV directory
.relations             list relations
.schema NAME           show one relation
.format table|csv|tsv  set the output format
.explain RULE          show the plan for a rule
.quit                  leave
Anything else is read as a rule, e.g. answer(x, z) :- pc(x, y), pc(y, z).
";

pub struct Repl {
    pub session: Option<Session>,
    pub format: Format,
    pub limits: Limits,
}

impl Repl {
    pub fn new(session: Option<Session>, format: Format, limits: Limits) -> Self {
        let mut repl = Repl {
            session,
            format,
            limits,
        };
        if let Some(s) = repl.session.as_mut() {
            s.format = format;
        }
        repl
    }

    fn session(&self) -> Result<&Session, String> {
        self.session
            .as_ref()
            .ok_or_else(|| "nothing loaded; use .load SCHEMA DATADIR".to_string())
    }

    /// Handles one input line. Returns `false` when the loop should stop.
    pub fn line(
        &mut self,
        line: &str,
        out: &mut impl Write,
        err: &mut impl Write,
    ) -> io::Result<bool> {
        let line = line.trim();
        if line.is_empty() {
            return Ok(true);
        }
        let result: Result<String, String> = match line.split_once(char::is_whitespace) {
            _ if line == ".quit" || line == ".exit" => return Ok(false),
            _ if line == ".help" => Ok(HELP.to_string()),
            _ if line == ".relations" => self.session().map(Session::relations),
            Some((".load", rest)) => {
                let args: Vec<&str> = rest.split_whitespace().collect();
                match args.as_slice() {
                    [schema, data] => {
                        Session::load(Path::new(schema), Path::new(data), self.limits)
                            .map(|mut s| {
                                s.format = self.format;
                                let summary = s.summary();
                                self.session = Some(s);
                                summary
                            })
                            .map_err(|e| e.to_string())
                    }
                    _ => Err("usage: .load SCHEMA DATADIR".into()),
                }
            }
            Some((".schema", name)) => self
                .session()
                .and_then(|s| s.schema(name.trim()).map_err(|e| e.to_string())),
            Some((".format", f)) => f.trim().parse::<Format>().map(|f| {
                self.format = f;
                if let Some(s) = self.session.as_mut() {
                    s.format = f;
                }
                String::new()
            }),
            Some((".explain", rule)) => self
                .session()
                .and_then(|s| s.explain(rule).map_err(|e| e.to_string())),
            _ if line.starts_with('.') => Err(format!("unknown command {line:?}; try .help")),
            _ => self
                .session()
                .and_then(|s| s.query(line).map_err(|e| e.to_string())),
        };
        match result {
            Ok(text) => out.write_all(text.as_bytes())?,
            Err(e) => writeln!(err, "error: {e}")?,
        }
        Ok(true)
    }

    /// Reads lines until `.quit` or end of input. `prompt` is written before each line.
    pub fn run(
        &mut self,
        input: impl BufRead,
        out: &mut impl Write,
        err: &mut impl Write,
        prompt: Option<&str>,
    ) -> io::Result<()> {
        let mut lines = input.lines();
        loop {
            if let Some(p) = prompt {
                out.write_all(p.as_bytes())?;
                out.flush()?;
            }
            let Some(line) = lines.next() else { break };
            if !self.line(&line?, out, err)? {
                break;
            }
            out.flush()?;
        }
        Ok(())
    }
}
