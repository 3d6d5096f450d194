//! The demonstration corpus: `*.snlog` scripts paired with `*.golden`
//! transcripts, and a generator for the synthetic scale knowledge base.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::snepslog::{Session, SessionOptions};

/// A check run against the session after the script, beyond the transcript.
pub type Oracle = fn(&mut Session) -> Result<(), String>;

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: String,
    pub script: PathBuf,
    pub golden: PathBuf,
    pub oracle: Option<Oracle>,
}

impl CorpusCase {
    pub fn new(script: impl Into<PathBuf>) -> Self {
        let script = script.into();
        let name = script
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        CorpusCase {
            name,
            golden: script.with_extension("golden"),
            script,
            oracle: None,
        }
    }

    pub fn with_oracle(mut self, oracle: Oracle) -> Self {
        self.oracle = Some(oracle);
        self
    }
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    /// Transcript mismatch or oracle failure.
    pub diff: Option<String>,
    pub elapsed: Duration,
    pub transcript: String,
}

/// The corpus shipped with this crate.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Every `*.snlog` file in `dir`, by name.
pub fn discover(dir: &Path) -> io::Result<Vec<CorpusCase>> {
    let mut scripts: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "snlog"))
        .collect();
    scripts.sort();
    Ok(scripts.into_iter().map(CorpusCase::new).collect())
}

/// Runs `text` in a fresh batch session and returns the transcript text.
pub fn transcript_of(text: &str, options: SessionOptions) -> (Session, String, bool) {
    let mut s = Session::new(options);
    let out = s.run_script(text);
    let mut t = out.transcript.join("\n");
    if !t.is_empty() {
        t.push('\n');
    }
    (s, t, out.ok)
}

/// A line-by-line diff, empty when equal.
pub fn line_diff(expected: &str, actual: &str) -> String {
    let e: Vec<&str> = expected.lines().collect();
    let a: Vec<&str> = actual.lines().collect();
    let mut out = String::new();
    for k in 0..e.len().max(a.len()) {
        match (e.get(k), a.get(k)) {
            (Some(x), Some(y)) if x == y => {}
            (x, y) => {
                let _ = writeln!(out, "line {}:", k + 1);
                if let Some(x) = x {
                    let _ = writeln!(out, "- {x}");
                }
                if let Some(y) = y {
                    let _ = writeln!(out, "+ {y}");
                }
            }
        }
    }
    out
}

/// Runs one case. With `bless`, the golden file is (re)written instead of
/// compared.
pub fn run_case(case: &CorpusCase, bless: bool) -> io::Result<CaseResult> {
    let text = std::fs::read_to_string(&case.script)?;
    let start = Instant::now();
    let (mut session, transcript, _) = transcript_of(&text, SessionOptions::default());
    let mut problems = String::new();
    if let Some(oracle) = case.oracle {
        if let Err(e) = oracle(&mut session) {
            let _ = writeln!(problems, "oracle: {e}");
        }
    }
    let elapsed = start.elapsed();
    if bless {
        std::fs::write(&case.golden, &transcript)?;
    } else {
        match std::fs::read_to_string(&case.golden) {
            Ok(golden) => problems.push_str(&line_diff(&golden, &transcript)),
            Err(e) => {
                let _ = writeln!(problems, "cannot read {}: {e}", case.golden.display());
            }
        }
    }
    Ok(CaseResult {
        name: case.name.clone(),
        passed: problems.is_empty(),
        diff: (!problems.is_empty()).then_some(problems),
        elapsed,
        transcript,
    })
}

/// A knowledge base of `chains` independent chains of `links`
/// implications each: `p(c{i}, n0)`, `p(c{i}, n0) => p(c{i}, n1)`, ...
/// Each chain interns `2 * links + 2` terms; the `n{k}` atoms are shared.
pub fn generate_chain_kb(chains: usize, links: usize) -> String {
    let mut out = String::new();
    for c in 0..chains {
        let _ = writeln!(out, "p(c{c}, n0).");
        for k in 0..links {
            let _ = writeln!(out, "p(c{c}, n{k}) => p(c{c}, n{}).", k + 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_reports_changed_lines() {
        assert_eq!(line_diff("a\nb\n", "a\nb\n"), "");
        assert_eq!(line_diff("a\nb\n", "a\nc\nd\n"), "line 2:\n- b\n+ c\nline 3:\n+ d\n");
    }

    #[test]
    fn generated_kb_is_chained() {
        let kb = generate_chain_kb(2, 3);
        let (mut s, _, ok) = transcript_of(&kb, SessionOptions::default());
        assert!(ok);
        assert_eq!(s.ask("p(c1, n3)").unwrap().len(), 1);
        assert!(s.ask("p(c1, n4)").unwrap().is_empty());
    }
}
