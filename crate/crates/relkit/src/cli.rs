use std::io::{BufRead, IsTerminal, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::format::Format;
use crate::repl::Repl;
use crate::session::{limits_from_env, Session};

#[derive(Debug, Parser)]
#[command(
    name = "relkit",
    version,
    about = "Query CSV relations with conjunctive rules"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Database {
    /// Schema file
    #[arg(short, long)]
    pub schema: PathBuf,
    /// Directory holding one CSV file per relation
    #[arg(short, long)]
    pub data: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a database, printing relation sizes
    Load {
        #[command(flatten)]
        db: Database,
        /// Validate only; print nothing on success
        #[arg(long)]
        check: bool,
    },
    /// Evaluate one rule and print the result
    Query {
        #[command(flatten)]
        db: Database,
        /// The rule, e.g. 'answer(x, z) :- pc(x, y), pc(y, z).'
        #[arg(short = 'e', long = "rule")]
        rule: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Show how a rule would be evaluated
    Explain {
        #[command(flatten)]
        db: Database,
        #[arg(short = 'e', long = "rule")]
        rule: String,
    },
    /// Read commands and rules interactively
    Repl {
        #[arg(short, long, requires = "data")]
        schema: Option<PathBuf>,
        #[arg(short, long, requires = "schema")]
        data: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn execute(
    cli: Cli,
    input: impl BufRead,
    interactive: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> Result<(), CliError> {
    let limits = limits_from_env()?;
    let io_err = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match cli.command {
        Command::Load { db, check } => {
            let s = Session::load(&db.schema, &db.data, limits)?;
            if !check {
                out.write_all(s.summary().as_bytes()).map_err(io_err)?;
            }
        }
        Command::Query { db, rule, format } => {
            let mut s = Session::load(&db.schema, &db.data, limits)?;
            s.format = format;
            out.write_all(s.query(&rule)?.as_bytes()).map_err(io_err)?;
        }
        Command::Explain { db, rule } => {
            let s = Session::load(&db.schema, &db.data, limits)?;
            out.write_all(s.explain(&rule)?.as_bytes())
                .map_err(io_err)?;
        }
        Command::Repl {
            schema,
            data,
            format,
        } => {
            let session = match (schema, data) {
                (Some(s), Some(d)) => Some(Session::load(&s, &d, limits)?),
                _ => None,
            };
            let prompt = interactive.then_some("relkit> ");
            Repl::new(session, format, limits)
                .run(input, out, err, prompt)
                .map_err(io_err)?;
        }
    }
    Ok(())
}

/// Runs one command; the return value is the process exit code.
pub fn run(
    cli: Cli,
    input: impl BufRead,
    interactive: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> u8 {
    match execute(cli, input, interactive, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point of the `relkit` binary.
pub fn main_with_std() -> u8 {
    let cli = Cli::parse();
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    run(
        cli,
        stdin.lock(),
        interactive,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
