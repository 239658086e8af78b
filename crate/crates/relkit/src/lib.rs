//! Command-line front end for `relkit-core`: a schema file and one CSV per
//! relation make an instance, which is then queried with single rules in
//! batch or from a REPL.

pub mod cli;
mod error;
pub mod format;
pub mod load;
pub mod repl;
pub mod schema;
pub mod session;

pub use error::CliError;
pub use format::Format;
pub use session::Session;
