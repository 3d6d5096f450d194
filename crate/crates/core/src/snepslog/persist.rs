//! Saving and loading networks.
//!
//! A dump is a script: a `%format sneng-1` header followed by one assertion
//! per context hypothesis, in term-id order. Derived beliefs are not stored;
//! inference recovers them on demand.

use std::io;
use std::path::Path;

use thiserror::Error;

use crate::engine::Engine;

use super::session::{Session, SessionError, SessionOptions};
use super::syntax::{parse_script, Command};
use super::terms::{build, Reading};

pub const FORMAT_VERSION: &str = "sneng-1";
pub const FORMAT_HEADER: &str = "%format sneng-1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("unsupported format `{0}` (expected {FORMAT_VERSION})")]
    Version(String),
    #[error("missing `{FORMAT_HEADER}` header")]
    MissingHeader,
    #[error("line {line}: a saved network may only contain assertions")]
    NotAnAssertion { line: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub(crate) fn check_format(version: &str) -> Result<(), FormatError> {
    if version.trim() == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version(version.trim().to_string()))
    }
}

/// The context hypotheses of `engine` as a script.
pub fn dump(engine: &Engine) -> String {
    let mut out = String::from(FORMAT_HEADER);
    out.push('\n');
    for h in &engine.context().hyps {
        out.push_str(&engine.display(*h));
        out.push_str(".\n");
    }
    out
}

pub fn save(engine: &Engine, path: &Path) -> io::Result<()> {
    std::fs::write(path, dump(engine))
}

/// Builds a fresh session from a dump.
pub fn load_str(text: &str, options: SessionOptions) -> Result<Session, SessionError> {
    let mut s = Session::new(options);
    replay(&mut s, text)?;
    Ok(s)
}

pub fn load(path: &Path, options: SessionOptions) -> Result<Session, SessionError> {
    let text = std::fs::read_to_string(path).map_err(FormatError::from)?;
    load_str(&text, options)
}

/// Replays a dump into `session` with acting and revision suspended.
/// Returns the number of hypotheses read.
pub(crate) fn replay(session: &mut Session, text: &str) -> Result<usize, SessionError> {
    let first = text.lines().find(|l| !l.trim().is_empty());
    match first.map(str::trim) {
        Some(line) => match line.strip_prefix("%format") {
            Some(v) => check_format(v)?,
            None => return Err(FormatError::MissingHeader.into()),
        },
        None => return Err(FormatError::MissingHeader.into()),
    }
    let statements = parse_script(text)?;
    let engine = session.engine_mut();
    engine.suspend_hooks(true);
    engine.suspend_revision(true);
    let mut count = 0;
    let mut result = Ok(());
    for s in statements.iter().skip(1) {
        let Command::Assert(w) = &s.command else {
            result = Err(FormatError::NotAnAssertion { line: s.line }.into());
            break;
        };
        let step = build(engine.store_mut(), w, Reading::Assertion)
            .map_err(SessionError::from)
            .and_then(|(t, _)| engine.assert_hyp(t).map_err(SessionError::from));
        if let Err(e) = step {
            result = Err(e);
            break;
        }
        count += 1;
    }
    engine.suspend_hooks(false);
    engine.suspend_revision(false);
    engine.take_events();
    result.map(|_| count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut s = Session::default();
        s.run_script("a.\nall(x)(p(x) => q(x)).\np(b).\n");
        let text = dump(s.engine());
        assert!(text.starts_with("%format sneng-1\n"));
        let mut t = load_str(&text, SessionOptions::default()).unwrap();
        assert_eq!(t.ask("q(b)").unwrap().len(), 1);
        assert_eq!(dump(t.engine()), text);
    }

    #[test]
    fn bad_header() {
        let e = load_str("%format sneng-9\na.\n", SessionOptions::default()).err().unwrap();
        assert!(matches!(e, SessionError::Format(FormatError::Version(_))));
        let e = load_str("a.\n", SessionOptions::default()).err().unwrap();
        assert!(matches!(e, SessionError::Format(FormatError::MissingHeader)));
    }

    #[test]
    fn retracted_hypotheses_are_not_saved() {
        let mut s = Session::default();
        s.run_script("a.\nb.\n");
        let before = dump(s.engine());
        s.run_script("%retract b\n");
        let after = dump(s.engine());
        assert_eq!(before, "%format sneng-1\na.\nb.\n");
        assert_eq!(after, "%format sneng-1\na.\n");
    }

    #[test]
    fn queries_are_rejected() {
        let e = load_str("%format sneng-1\na?\n", SessionOptions::default()).err().unwrap();
        assert!(matches!(e, SessionError::Format(FormatError::NotAnAssertion { line: 2 })));
    }
}
