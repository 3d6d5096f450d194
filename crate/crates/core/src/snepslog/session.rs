//! A session: one engine, its mode flags and its transcript.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::atms::SupportRecord;
use crate::engine::{Engine, EngineConfig, EngineError, Event, RevisionMode};
use crate::revision::{ResolutionMode, UserDialog};
use crate::term::{TermError, TermId};

use super::persist::{self, FormatError};
use super::syntax::{parse_script, parse_wff, Command, Statement, SyntaxError};
use super::terms::{build, Reading};

#[derive(Clone, Debug)]
pub struct SessionOptions {
    pub mode: RevisionMode,
    pub expert: bool,
    pub depth_cap: usize,
}

impl Default for SessionOptions {
    fn default() -> Self {
        SessionOptions {
            mode: RevisionMode::Auto,
            expert: false,
            depth_cap: EngineConfig::default().depth_cap,
        }
    }
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Command(String),
}

/// A believed (or formerly believed) proposition, as shown to users.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WffView {
    pub wff: usize,
    pub display: String,
    pub asserted: bool,
    pub supports: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnswerView {
    pub wff: usize,
    pub display: String,
    pub bindings: BTreeMap<String, String>,
    pub supports: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventView {
    pub kind: String,
    pub text: String,
}

/// What one command produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Response {
    /// Transcript lines, without the echoed command.
    pub lines: Vec<String>,
    pub wffs: Vec<WffView>,
    /// Present for queries.
    pub answers: Option<Vec<AnswerView>>,
    pub events: Vec<EventView>,
    pub error: Option<String>,
    pub quit: bool,
}

impl Response {
    fn event(&mut self, kind: &str, text: String) {
        self.lines.push(text.clone());
        self.events.push(EventView {
            kind: kind.to_string(),
            text,
        });
    }

    fn fail(&mut self, message: String) {
        self.lines.push(format!("ERROR: {message}"));
        if self.error.is_none() {
            self.error = Some(message);
        }
    }
}

/// Result of running a script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub transcript: Vec<String>,
    pub ok: bool,
}

pub struct Session {
    engine: Engine,
    options: SessionOptions,
    transcript: Vec<String>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(SessionOptions::default())
    }
}

impl Session {
    pub fn new(options: SessionOptions) -> Self {
        let mut engine = Engine::new(EngineConfig {
            depth_cap: options.depth_cap,
            mode: options.mode,
        });
        engine.register_default_acts();
        Session {
            engine,
            options,
            transcript: Vec::new(),
        }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn engine_mut(&mut self) -> &mut Engine {
        &mut self.engine
    }

    pub fn options(&self) -> &SessionOptions {
        &self.options
    }

    pub fn set_expert(&mut self, on: bool) {
        self.options.expert = on;
    }

    pub fn set_mode(&mut self, mode: RevisionMode) {
        self.options.mode = mode;
        self.engine.set_mode(mode);
    }

    pub fn set_dialog(&mut self, dialog: Option<Box<dyn UserDialog>>) {
        self.engine.set_dialog(dialog);
    }

    pub fn transcript(&self) -> &[String] {
        &self.transcript
    }

    /// Evaluates every statement of `text`, stopping at the first error.
    pub fn tell(&mut self, text: &str) -> Result<Vec<Response>, SessionError> {
        let mut out = Vec::new();
        for s in parse_script(text)? {
            let r = self.run_statement(&s);
            if let Some(e) = &r.error {
                return Err(SessionError::Command(e.clone()));
            }
            out.push(r);
        }
        Ok(out)
    }

    /// Answers a single query such as `fun(x)?` (the `?` is optional).
    pub fn ask(&mut self, text: &str) -> Result<Vec<AnswerView>, SessionError> {
        let body = text.trim().trim_end_matches('?');
        let wff = parse_wff(body)?;
        let r = self.eval(&Command::Query(wff));
        match r.error {
            Some(e) => Err(SessionError::Command(e)),
            None => Ok(r.answers.unwrap_or_default()),
        }
    }

    /// Evaluates one statement, echoing it into the transcript.
    pub fn run_statement(&mut self, s: &Statement) -> Response {
        self.transcript.push(format!(": {}", s.source));
        let r = self.eval(&s.command);
        self.transcript.extend(r.lines.iter().cloned());
        r
    }

    /// Runs a script in batch mode. A syntax error stops the run before
    /// anything is evaluated; other errors are reported and the run goes on.
    pub fn run_script(&mut self, text: &str) -> RunOutcome {
        let start = self.transcript.len();
        let statements = match parse_script(text) {
            Ok(s) => s,
            Err(e) => {
                self.transcript.push(format!("ERROR: {e}"));
                return RunOutcome {
                    transcript: self.transcript[start..].to_vec(),
                    ok: false,
                };
            }
        };
        let mut ok = true;
        for s in &statements {
            let r = self.run_statement(s);
            ok &= r.error.is_none();
            if r.quit {
                break;
            }
        }
        RunOutcome {
            transcript: self.transcript[start..].to_vec(),
            ok,
        }
    }

    pub fn eval(&mut self, cmd: &Command) -> Response {
        let mut r = Response::default();
        let result = match cmd {
            Command::Assert(w) => self.eval_assert(w, false, &mut r),
            Command::AssertForward(w) => self.eval_assert(w, true, &mut r),
            Command::Query(w) => self.eval_query(w, &mut r),
            Command::Directive { name, rest } => self.eval_directive(name, rest, &mut r),
        };
        if let Err(e) = result {
            self.flush_events(&mut r);
            r.fail(e.to_string());
        }
        r
    }

    fn eval_assert(&mut self, w: &super::syntax::Wff, forward: bool, r: &mut Response) -> Result<(), SessionError> {
        let (t, _) = build(self.engine.store_mut(), w, Reading::Assertion)?;
        self.engine.assert_hyp(t)?;
        let derived = if forward && self.engine.is_asserted(t) {
            self.engine.tell_forward(t)
        } else {
            Vec::new()
        };
        self.flush_events(r);
        for p in std::iter::once(t).chain(derived) {
            let view = self.wff_view(p);
            r.lines.push(self.wff_line(&view, self.options.expert));
            r.wffs.push(view);
        }
        Ok(())
    }

    fn eval_query(&mut self, w: &super::syntax::Wff, r: &mut Response) -> Result<(), SessionError> {
        let (t, vars) = build(self.engine.store_mut(), w, Reading::Query)?;
        let answers = self.engine.ask(t);
        self.flush_events(r);
        let mut views = Vec::new();
        for a in answers {
            let view = self.wff_view(a.proposition);
            r.lines.push(self.wff_line(&view, self.options.expert));
            let bindings = vars
                .iter()
                .filter_map(|v| {
                    a.bindings
                        .get(*v)
                        .map(|val| (self.engine.display(*v), self.engine.display(val)))
                })
                .collect();
            views.push(AnswerView {
                wff: view.wff,
                display: view.display,
                bindings,
                supports: view.supports,
            });
        }
        if views.is_empty() {
            r.lines.push("no answers".to_string());
        }
        r.answers = Some(views);
        Ok(())
    }

    fn eval_directive(&mut self, name: &str, rest: &str, r: &mut Response) -> Result<(), SessionError> {
        let arg = rest.trim();
        match name {
            "list" => {
                let mut beliefs = self.engine.beliefs();
                beliefs.sort_by_key(|p| self.engine.existing_wff_number(*p));
                for p in beliefs {
                    let view = self.wff_view(p);
                    r.lines.push(self.wff_line(&view, self.options.expert));
                    r.wffs.push(view);
                }
            }
            "supports" => {
                let p = self.resolve_ref(arg)?;
                let view = self.wff_view(p);
                r.lines.push(self.wff_line(&view, true));
                r.wffs.push(view);
            }
            "retract" => {
                let p = self.resolve_ref(arg)?;
                let report = self.engine.retract_hyp(p)?;
                self.engine.take_events();
                self.push_event(&Event::Retracted(report), r);
            }
            "mode" => match arg {
                "auto" => self.set_mode(RevisionMode::Auto),
                "interactive" => self.set_mode(RevisionMode::Interactive),
                _ => return Err(SessionError::Command(format!("unknown mode `{arg}`, use auto or interactive"))),
            },
            "expert" => match arg {
                "on" => self.options.expert = true,
                "off" => self.options.expert = false,
                _ => return Err(SessionError::Command(format!("expected on or off, found `{arg}`"))),
            },
            "format" => persist::check_format(arg)?,
            "save" => {
                let path = unquote(arg)?;
                persist::save(&self.engine, Path::new(&path)).map_err(FormatError::from)?;
                r.lines.push(format!("saved {} hypotheses to {path}", self.engine.context().hyps.len()));
            }
            "load" => {
                let path = unquote(arg)?;
                let text = std::fs::read_to_string(&path).map_err(FormatError::from)?;
                let mut fresh = Session::new(self.options.clone());
                let n = persist::replay(&mut fresh, &text)?;
                let dialog = self.engine.dialog.take();
                self.engine = fresh.engine;
                self.engine.set_dialog(dialog);
                r.lines.push(format!("loaded {n} hypotheses from {path}"));
            }
            "quit" => r.quit = true,
            _ => return Err(SessionError::Command(format!("unknown directive %{name}"))),
        }
        Ok(())
    }

    /// Resolves `wffN` or a wff written out in full.
    pub fn resolve_ref(&mut self, text: &str) -> Result<TermId, SessionError> {
        if let Some(n) = text.strip_prefix("wff").and_then(|d| d.parse::<usize>().ok()) {
            if let Some(p) = self.engine.wff_by_number(n) {
                return Ok(p);
            }
        }
        if text.is_empty() {
            return Err(SessionError::Command("expected a wff".into()));
        }
        let w = parse_wff(text)?;
        Ok(build(self.engine.store_mut(), &w, Reading::Assertion)?.0)
    }

    fn wff_view(&mut self, p: TermId) -> WffView {
        let status = self.engine.status(p);
        let supports = status
            .supports
            .iter()
            .map(|s| self.format_support(s))
            .collect();
        WffView {
            wff: self.engine.wff_number(p),
            display: self.engine.display(p),
            asserted: status.asserted,
            supports,
        }
    }

    fn format_support(&mut self, s: &SupportRecord) -> String {
        let hyps: Vec<String> = s
            .origin
            .iter()
            .map(|h| format!("wff{}", self.engine.wff_number(h)))
            .collect();
        format!("<{},{{{}}}>", s.tag, hyps.join(","))
    }

    fn wff_line(&self, v: &WffView, with_supports: bool) -> String {
        let bang = if v.asserted { "!" } else { "" };
        let mut line = format!("wff{}{bang}: {}", v.wff, v.display);
        if with_supports && !v.supports.is_empty() {
            line.push_str(&format!(" {{{}}}", v.supports.join(", ")));
        }
        line
    }

    fn label(&mut self, p: TermId) -> String {
        format!("wff{}: {}", self.engine.wff_number(p), self.engine.display(p))
    }

    fn flush_events(&mut self, r: &mut Response) {
        for ev in self.engine.take_events() {
            self.push_event(&ev, r);
        }
    }

    fn push_event(&mut self, ev: &Event, r: &mut Response) {
        match ev {
            Event::Contradiction(c) => {
                let text = format!("CONTRADICTION: {} and {}", self.label(c.p), self.label(c.not_p));
                r.event("contradiction", text);
            }
            Event::Revision(report) => {
                let tag = match report.mode {
                    ResolutionMode::Automatic => "AUTO-REVISION",
                    ResolutionMode::Interactive => "REVISION",
                };
                for h in &report.retracted {
                    let text = format!("{tag}: removed hypothesis {}", self.label(*h));
                    r.event("revision", text);
                }
                self.push_dropped(tag, &report.dropped, r);
            }
            Event::Unresolved(c) => {
                let text = format!("unresolved contradiction: {} and {}", self.label(c.p), self.label(c.not_p));
                r.events.push(EventView {
                    kind: "unresolved".into(),
                    text: format!("ERROR: {text}"),
                });
                r.fail(text);
            }
            Event::Retracted(report) => {
                let text = format!("RETRACTED: {}", self.label(report.removed));
                r.event("retracted", text);
                self.push_dropped("RETRACTED", &report.dropped, r);
            }
            Event::Act(a) => {
                let text = format!("ACT: {}", self.engine.display(*a));
                r.event("act", text);
            }
            Event::ActFailed { message, .. } => {
                r.events.push(EventView {
                    kind: "act_failed".into(),
                    text: format!("ERROR: {message}"),
                });
                r.fail(message.clone());
            }
            Event::Warning(w) => r.event("warning", format!("WARNING: {w}")),
        }
    }

    fn push_dropped(&mut self, tag: &str, dropped: &[TermId], r: &mut Response) {
        if dropped.is_empty() {
            r.event("drop", format!("{tag}: no other beliefs lost"));
        }
        for p in dropped {
            let text = format!("{tag}: no longer believed {}", self.label(*p));
            r.event("drop", text);
        }
    }
}

fn unquote(arg: &str) -> Result<String, SessionError> {
    let a = arg.trim();
    let inner = a
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(a);
    if inner.is_empty() {
        return Err(SessionError::Command("expected a file name".into()));
    }
    Ok(inner.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIMPSONS: &str = "fun(learning).
~fun(spitting).
Source(Lisa, fun(learning)).
Source(Lisa, ~fun(spitting)).
Source(Bart, fun(spitting)).
Sgreater(Lisa,Marge).
Sgreater(Marge, Bart).
Sgreater(Bart,Homer).
Greater(fun(learning),~fun(spitting)).
";

    #[test]
    fn script_is_consistent_and_interns_sixteen_terms() {
        let mut s = Session::default();
        let out = s.run_script(SIMPSONS);
        assert!(out.ok);
        assert_eq!(s.engine().store().len(), 16);
        assert!(s.engine().unresolved_contradictions().is_empty());
        assert!(!out.transcript.iter().any(|l| l.starts_with("CONTRADICTION")));
    }

    #[test]
    fn automatic_revision_in_transcript() {
        let mut s = Session::default();
        s.run_script(SIMPSONS);
        let out = s.run_script("fun(spitting).");
        assert!(out.ok);
        assert_eq!(
            out.transcript,
            vec![
                ": fun(spitting).",
                "CONTRADICTION: wff10: fun(spitting) and wff2: ~fun(spitting)",
                "AUTO-REVISION: removed hypothesis wff10: fun(spitting)",
                "AUTO-REVISION: no other beliefs lost",
                "wff10: fun(spitting)",
            ]
        );
    }

    #[test]
    fn query_with_free_variable() {
        let mut s = Session::default();
        s.run_script(SIMPSONS);
        let answers = s.ask("fun(x)?").unwrap();
        assert_eq!(answers.len(), 1);
        assert_eq!(answers[0].bindings.get("x").map(String::as_str), Some("learning"));
    }

    #[test]
    fn expert_mode_shows_supports() {
        let mut s = Session::default();
        let out = s.run_script("%expert on\na.\na => b.\nb?\n");
        assert_eq!(out.transcript.last().unwrap(), "wff3!: b {<der,{wff1,wff2}>}");
    }

    #[test]
    fn empty_script() {
        let mut s = Session::default();
        assert_eq!(
            s.run_script(""),
            RunOutcome {
                transcript: vec![],
                ok: true
            }
        );
    }

    #[test]
    fn syntax_error_stops_batch() {
        let mut s = Session::default();
        let out = s.run_script("a.\nfun(\n");
        assert!(!out.ok);
        assert_eq!(out.transcript.len(), 1);
        assert!(out.transcript[0].starts_with("ERROR: syntax error at line 3"));
        assert!(s.engine().beliefs().is_empty());
    }

    #[test]
    fn batch_needs_user_is_an_error() {
        let mut s = Session::default();
        let out = s.run_script("q.\n~q.\nr.\nr?\n");
        assert!(!out.ok);
        assert!(out
            .transcript
            .contains(&"ERROR: unresolved contradiction: wff1: q and wff2: ~q".to_string()));
        assert_eq!(out.transcript.last().unwrap(), "wff3!: r");
    }

    #[test]
    fn retract_directive() {
        let mut s = Session::default();
        let out = s.run_script("a.\na => b.\nb?\n%retract wff1\nb?\n");
        assert!(out.ok, "{:?}", out.transcript);
        assert!(out.transcript.contains(&"RETRACTED: no longer believed wff3: b".to_string()));
        assert_eq!(out.transcript.last().unwrap(), "no answers");
    }

    #[test]
    fn unknown_directive() {
        let mut s = Session::default();
        let out = s.run_script("%frobnicate\n");
        assert!(!out.ok);
        assert_eq!(out.transcript[1], "ERROR: unknown directive %frobnicate");
    }
}
