//! The SNePSLOG-style command language: parser, sessions, persistence,
//! the REPL and serve mode.

pub mod persist;
pub mod repl;
pub mod serve;
pub mod session;
pub mod syntax;
pub mod terms;

pub use persist::{dump, load, load_str, save, FormatError, FORMAT_HEADER};
pub use session::{
    AnswerView, EventView, Response, RunOutcome, Session, SessionError, SessionOptions, WffView,
};
pub use syntax::{parse, parse_script, parse_wff, Command, Statement, SyntaxError, Wff};
