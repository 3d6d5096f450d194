//! The read-eval-print loop and its console revision dialog.

use std::cell::RefCell;
use std::io::{self, BufRead, Write};
use std::rc::Rc;

use crate::revision::{RevisionRequest, UserDialog};
use crate::term::TermId;

use super::session::Session;
use super::syntax::parse_script;

pub const PROMPT: &str = ": ";

/// Asks on a text console which hypotheses to retract.
pub struct ConsoleDialog<R, W> {
    input: Rc<RefCell<R>>,
    output: Rc<RefCell<W>>,
}

impl<R, W> ConsoleDialog<R, W> {
    pub fn new(input: Rc<RefCell<R>>, output: Rc<RefCell<W>>) -> Self {
        ConsoleDialog { input, output }
    }
}

/// Renders a revision request for a human.
pub fn describe_request(req: &RevisionRequest) -> Vec<String> {
    let mut lines = vec![format!(
        "Contradiction between {} and {}.",
        req.p_display, req.not_p_display
    )];
    lines.push("Hypotheses it rests on:".to_string());
    for (k, c) in req.candidates.iter().enumerate() {
        let sides: Vec<&str> = c
            .supports
            .iter()
            .map(|s| {
                if *s == req.contradiction.p {
                    req.p_display.as_str()
                } else {
                    req.not_p_display.as_str()
                }
            })
            .collect();
        let mut line = format!("  [{}] wff{}: {}  supports {}", k + 1, c.wff, c.display, sides.join(" and "));
        if !c.sources.is_empty() {
            line.push_str(&format!("  source {}", c.sources.join(", ")));
        }
        lines.push(line);
    }
    lines.push("Retract which? (numbers separated by spaces, empty line to leave both)".to_string());
    lines
}

impl<R: BufRead, W: Write> UserDialog for ConsoleDialog<R, W> {
    fn choose(&mut self, req: &RevisionRequest) -> Option<Vec<TermId>> {
        {
            let mut out = self.output.borrow_mut();
            for l in describe_request(req) {
                writeln!(out, "{l}").ok()?;
            }
            write!(out, "> ").ok()?;
            out.flush().ok()?;
        }
        let mut line = String::new();
        if self.input.borrow_mut().read_line(&mut line).ok()? == 0 || line.trim().is_empty() {
            return None;
        }
        let mut chosen = Vec::new();
        for word in line.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()) {
            match word.parse::<usize>().ok().and_then(|k| req.candidates.get(k.wrapping_sub(1))) {
                Some(c) => chosen.push(c.hypothesis),
                None => return Some(Vec::new()),
            }
        }
        Some(chosen)
    }
}

/// Runs the loop until `%quit` or end of input. A statement may span
/// several lines.
pub fn run_repl<R, W>(session: &mut Session, input: Rc<RefCell<R>>, output: Rc<RefCell<W>>) -> io::Result<()>
where
    R: BufRead + 'static,
    W: Write + 'static,
{
    session.set_dialog(Some(Box::new(ConsoleDialog::new(input.clone(), output.clone()))));
    let mut buffer = String::new();
    loop {
        {
            let mut out = output.borrow_mut();
            write!(out, "{}", if buffer.is_empty() { PROMPT } else { "  " })?;
            out.flush()?;
        }
        let mut line = String::new();
        if input.borrow_mut().read_line(&mut line)? == 0 {
            break;
        }
        buffer.push_str(&line);
        let statements = match parse_script(&buffer) {
            Ok(s) => s,
            Err(e) if e.at_end => continue,
            Err(e) => {
                writeln!(output.borrow_mut(), "ERROR: {e}")?;
                buffer.clear();
                continue;
            }
        };
        buffer.clear();
        for s in statements {
            let r = session.eval(&s.command);
            let mut out = output.borrow_mut();
            for l in &r.lines {
                writeln!(out, "{l}")?;
            }
            if r.quit {
                return Ok(());
            }
        }
    }
    Ok(())
}
