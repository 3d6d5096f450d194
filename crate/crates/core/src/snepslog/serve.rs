//! Serve mode: newline-delimited JSON over TCP, one session per connection.
//! Message shapes are documented in `PROTOCOL.md`.

use std::cell::{Cell, RefCell};
use std::collections::BTreeSet;
use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::rc::Rc;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::engine::Engine;
use crate::revision::{RevisionRequest, UserDialog};
use crate::term::{TermId, TermKind};

use super::session::{AnswerView, EventView, Response, Session, SessionOptions, WffView};
use super::syntax::{parse_script, Command};

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ClientMessage {
    Tell { text: String },
    Ask { text: String },
    Directive { text: String },
    RevisionChoice { retract: Vec<String> },
    Graph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateView {
    pub wff: usize,
    pub display: String,
    pub sources: Vec<String>,
    /// Contradictands (as displayed) this hypothesis supports.
    pub supports: Vec<String>,
    /// In-context origin sets containing it, each as a list of `wffN`.
    pub origins: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub functor: String,
    pub display: String,
    pub asserted: bool,
    pub hypothesis: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// 1-based argument position.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ServerMessage {
    Ok {
        wffs: Vec<WffView>,
        transcript: Vec<String>,
    },
    Answers {
        answers: Vec<AnswerView>,
        transcript: Vec<String>,
    },
    Error {
        message: String,
    },
    RevisionRequest {
        p: String,
        not_p: String,
        candidates: Vec<CandidateView>,
    },
    Event {
        kind: String,
        text: String,
    },
    Graph {
        nodes: Vec<GraphNode>,
        edges: Vec<GraphEdge>,
    },
}

/// The network reachable from every proposition that has a support.
pub fn graph(engine: &Engine) -> (Vec<GraphNode>, Vec<GraphEdge>) {
    let store = engine.store();
    let mut seen: BTreeSet<TermId> = BTreeSet::new();
    let mut stack: Vec<TermId> = engine.supports().known();
    while let Some(t) = stack.pop() {
        if store.get(t).is_internal() || !seen.insert(t) {
            continue;
        }
        stack.extend(store.get(t).args().iter().copied());
    }
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for &t in &seen {
        let term = store.get(t);
        nodes.push(GraphNode {
            id: t.index(),
            functor: term.functor().to_string(),
            display: engine.display(t),
            asserted: engine.is_asserted(t),
            hypothesis: engine.is_hypothesis(t),
        });
        if term.kind() == TermKind::Application {
            for (k, a) in term.args().iter().enumerate() {
                if seen.contains(a) {
                    edges.push(GraphEdge {
                        from: t.index(),
                        to: a.index(),
                        position: k + 1,
                    });
                }
            }
        }
    }
    (nodes, edges)
}

struct Wire {
    reader: RefCell<BufReader<TcpStream>>,
    writer: RefCell<TcpStream>,
    broken: Cell<bool>,
}

impl Wire {
    fn send(&self, msg: &ServerMessage) -> io::Result<()> {
        let mut line = serde_json::to_string(msg).map_err(io::Error::other)?;
        line.push('\n');
        let mut w = self.writer.borrow_mut();
        w.write_all(line.as_bytes())?;
        w.flush()
    }

    fn error(&self, message: impl Into<String>) -> io::Result<()> {
        self.send(&ServerMessage::Error {
            message: message.into(),
        })
    }

    /// Next message, or `None` at end of stream. Malformed input is answered
    /// with an error and marks the connection broken.
    fn receive(&self) -> io::Result<Option<ClientMessage>> {
        loop {
            let mut line = String::new();
            if self.reader.borrow_mut().read_line(&mut line)? == 0 {
                return Ok(None);
            }
            if line.trim().is_empty() {
                continue;
            }
            return match serde_json::from_str::<ClientMessage>(&line) {
                Ok(m) => Ok(Some(m)),
                Err(e) => {
                    self.error(format!("protocol violation: {e}"))?;
                    self.broken.set(true);
                    Ok(None)
                }
            };
        }
    }
}

struct ProtocolDialog {
    wire: Rc<Wire>,
}

impl ProtocolDialog {
    fn request_message(req: &RevisionRequest) -> ServerMessage {
        let wffs = |ids: &mut dyn Iterator<Item = TermId>| -> Vec<String> {
            ids.map(|t| {
                req.candidates
                    .iter()
                    .find(|c| c.hypothesis == t)
                    .map(|c| format!("wff{}", c.wff))
                    .unwrap_or_else(|| format!("#{}", t.index()))
            })
            .collect()
        };
        let side = |t: TermId| if t == req.contradiction.p { req.p_display.clone() } else { req.not_p_display.clone() };
        let candidates = req
            .candidates
            .iter()
            .map(|c| CandidateView {
                wff: c.wff,
                display: c.display.clone(),
                sources: c.sources.clone(),
                supports: c.supports.iter().map(|s| side(*s)).collect(),
                origins: req.contradiction.supports_view[&c.hypothesis]
                    .iter()
                    .map(|s| wffs(&mut s.origin.iter()))
                    .collect(),
            })
            .collect();
        ServerMessage::RevisionRequest {
            p: req.p_display.clone(),
            not_p: req.not_p_display.clone(),
            candidates,
        }
    }
}

impl UserDialog for ProtocolDialog {
    fn choose(&mut self, req: &RevisionRequest) -> Option<Vec<TermId>> {
        self.wire.send(&Self::request_message(req)).ok()?;
        loop {
            match self.wire.receive().ok()?? {
                ClientMessage::RevisionChoice { retract } => {
                    let mut chosen = Vec::new();
                    for name in &retract {
                        let hit = req
                            .candidates
                            .iter()
                            .find(|c| format!("wff{}", c.wff) == *name || c.display == *name);
                        match hit {
                            Some(c) => chosen.push(c.hypothesis),
                            None => {
                                self.wire.error(format!("{name} is not a candidate")).ok()?;
                                return Some(Vec::new());
                            }
                        }
                    }
                    if chosen.is_empty() {
                        self.wire.error("choose at least one candidate").ok()?;
                    }
                    return Some(chosen);
                }
                _ => {
                    self.wire
                        .error("a revision is pending; answer the revision_request first")
                        .ok()?;
                }
            }
        }
    }
}

fn reply(wire: &Wire, r: Response, query: bool) -> io::Result<()> {
    for EventView { kind, text } in r.events {
        wire.send(&ServerMessage::Event { kind, text })?;
    }
    if let Some(message) = r.error {
        return wire.error(message);
    }
    if query {
        wire.send(&ServerMessage::Answers {
            answers: r.answers.unwrap_or_default(),
            transcript: r.lines,
        })
    } else {
        wire.send(&ServerMessage::Ok {
            wffs: r.wffs,
            transcript: r.lines,
        })
    }
}

fn merge(acc: &mut Response, r: Response) {
    acc.lines.extend(r.lines);
    acc.wffs.extend(r.wffs);
    acc.events.extend(r.events);
    if acc.error.is_none() {
        acc.error = r.error;
    }
    if let Some(a) = r.answers {
        acc.answers.get_or_insert_with(Vec::new).extend(a);
    }
    acc.quit |= r.quit;
}

/// Serves one connection until it closes or violates the protocol.
pub fn handle_connection(stream: TcpStream, options: SessionOptions) -> io::Result<()> {
    let wire = Rc::new(Wire {
        reader: RefCell::new(BufReader::new(stream.try_clone()?)),
        writer: RefCell::new(stream),
        broken: Cell::new(false),
    });
    let mut session = Session::new(options);
    session.set_dialog(Some(Box::new(ProtocolDialog { wire: wire.clone() })));
    while let Some(msg) = wire.receive()? {
        let (text, query) = match msg {
            ClientMessage::Graph => {
                let (nodes, edges) = graph(session.engine());
                wire.send(&ServerMessage::Graph { nodes, edges })?;
                continue;
            }
            ClientMessage::RevisionChoice { .. } => {
                wire.error("no revision is pending")?;
                continue;
            }
            ClientMessage::Tell { text } | ClientMessage::Directive { text } => (text, false),
            ClientMessage::Ask { text } => (text, true),
        };
        let statements = match parse_script(&text) {
            Ok(s) => s,
            Err(e) => {
                wire.error(e.to_string())?;
                continue;
            }
        };
        let is_query = |c: &Command| matches!(c, Command::Query(_));
        if statements.is_empty() || statements.iter().any(|s| is_query(&s.command) != query) {
            let want = if query { "a query ending in `?`" } else { "assertions or directives" };
            wire.error(format!("expected {want}"))?;
            continue;
        }
        let mut acc = Response::default();
        for s in &statements {
            let r = session.run_statement(s);
            let stop = r.error.is_some() || r.quit;
            merge(&mut acc, r);
            if stop || wire.broken.get() {
                break;
            }
        }
        if wire.broken.get() {
            break;
        }
        let quit = acc.quit;
        reply(&wire, acc, query)?;
        if quit {
            break;
        }
    }
    Ok(())
}

/// Accepts connections forever, one thread and one session per connection.
pub fn serve(listener: TcpListener, options: SessionOptions) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let options = options.clone();
        thread::spawn(move || {
            let _ = handle_connection(stream, options);
        });
    }
    Ok(())
}
