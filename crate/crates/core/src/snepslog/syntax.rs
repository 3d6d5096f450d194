//! Lexer and parser for the command language.
//!
//! ```text
//! script    := (statement | directive | comment)*
//! statement := wff ("." | "!" | "?")
//! directive := "%" name rest-of-line
//! wff       := unary ("=>" wff)?
//! unary     := "~" unary | primary
//! primary   := "(" wff ")"
//!            | "{" wffs "}" ("&=>" | "v=>") "{" wffs "}"
//!            | ("andor" | "thresh") "(" int "," int ")" "{" wffs "}"
//!            | ("and" | "or") "{" wffs "}"
//!            | "all" "(" idents ")" "(" wff ")"
//!            | ident "(" wffs ")"
//!            | ident | int
//! ```
//!
//! Comments run from `;` to the end of the line.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Wff {
    /// An atom, or a variable when bound by `all` (or free in a query).
    Ident(String),
    App(String, Vec<Wff>),
    Not(Box<Wff>),
    Implies(Box<Wff>, Box<Wff>),
    Entail {
        all_required: bool,
        antecedents: Vec<Wff>,
        consequents: Vec<Wff>,
    },
    AndOr(u32, u32, Vec<Wff>),
    Thresh(u32, u32, Vec<Wff>),
    And(Vec<Wff>),
    Or(Vec<Wff>),
    All(Vec<String>, Box<Wff>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Assert(Wff),
    AssertForward(Wff),
    Query(Wff),
    Directive { name: String, rest: String },
}

/// A command with its location and source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    /// Source text with whitespace runs collapsed.
    pub source: String,
    pub command: Command,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at line {line}, column {column}: expected {expected}, found {found}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
    /// True when the input ended before the statement was complete.
    pub at_end: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Tilde,
    Implies,
    AndEntails,
    Dot,
    Bang,
    Question,
    Directive(String, String),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Implies => f.write_str("`=>`"),
            Tok::AndEntails => f.write_str("`&=>`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Question => f.write_str("`?`"),
            Tok::Directive(n, _) => write!(f, "`%{n}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let (mut line, mut line_start) = (1usize, 0usize);
    let mut i = 0;
    let column_of = |idx: usize, line_start: usize| text[line_start..idx].chars().count() + 1;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c == '\n' {
            line += 1;
            line_start = pos + 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == ';' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let column = column_of(pos, line_start);
        let single = |tok| Spanned {
            tok,
            line,
            column,
            start: pos,
            end: pos + c.len_utf8(),
        };
        let rest = &text[pos..];
        if c == '%' {
            let len = rest.find('\n').unwrap_or(rest.len());
            let body = rest[1..len].trim();
            let (name, args) = match body.find(char::is_whitespace) {
                Some(k) => (&body[..k], body[k..].trim()),
                None => (body, ""),
            };
            out.push(Spanned {
                tok: Tok::Directive(name.to_string(), args.to_string()),
                line,
                column,
                start: pos,
                end: pos + len,
            });
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        if rest.starts_with("&=>") || rest.starts_with("=>") {
            let (tok, len) = if c == '&' {
                (Tok::AndEntails, 3)
            } else {
                (Tok::Implies, 2)
            };
            out.push(Spanned {
                tok,
                line,
                column,
                start: pos,
                end: pos + len,
            });
            i += len;
            continue;
        }
        let tok = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '~' => Some(Tok::Tilde),
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Bang),
            '?' => Some(Tok::Question),
            _ => None,
        };
        if let Some(tok) = tok {
            out.push(single(tok));
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map(|(p, _)| *p).unwrap_or(text.len());
            let word = &text[pos..end];
            let tok = if c.is_ascii_digit() {
                match word.parse::<u32>() {
                    Ok(n) if word.chars().all(|c| c.is_ascii_digit()) => Tok::Int(n),
                    _ => {
                        return Err(SyntaxError {
                            line,
                            column,
                            expected: "a number or an identifier".into(),
                            found: format!("`{word}`"),
                            at_end: false,
                        })
                    }
                }
            } else {
                Tok::Ident(word.to_string())
            };
            out.push(Spanned {
                tok,
                line,
                column,
                start: pos,
                end,
            });
            i = j;
            continue;
        }
        return Err(SyntaxError {
            line,
            column,
            expected: "a wff".into(),
            found: format!("`{c}`"),
            at_end: false,
        });
    }
    let column = column_of(text.len(), line_start);
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
        start: text.len(),
        end: text.len(),
    });
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> SyntaxError {
        let s = &self.toks[self.pos];
        SyntaxError {
            line: s.line,
            column: s.column,
            expected: expected.to_string(),
            found: s.tok.to_string(),
            at_end: s.tok == Tok::End,
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn int(&mut self) -> Result<u32, SyntaxError> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => Err(self.error("a number")),
        }
    }

    fn wff(&mut self) -> Result<Wff, SyntaxError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.wff()?;
            return Ok(Wff::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Wff, SyntaxError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Wff::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn list(&mut self, close: Tok, what: &str) -> Result<Vec<Wff>, SyntaxError> {
        let mut items = vec![self.wff()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.wff()?);
        }
        self.expect(close, what)?;
        Ok(items)
    }

    fn braced(&mut self) -> Result<Vec<Wff>, SyntaxError> {
        self.expect(Tok::LBrace, "`{`")?;
        self.list(Tok::RBrace, "`,` or `}`")
    }

    fn primary(&mut self) -> Result<Wff, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let w = self.wff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(w)
            }
            Tok::LBrace => {
                let antecedents = self.braced()?;
                let all_required = match (self.peek().clone(), self.peek_at(1).clone()) {
                    (Tok::AndEntails, _) => {
                        self.bump();
                        true
                    }
                    (Tok::Ident(v), Tok::Implies) if v == "v" => {
                        self.bump();
                        self.bump();
                        false
                    }
                    _ => return Err(self.error("`&=>` or `v=>`")),
                };
                let consequents = self.braced()?;
                Ok(Wff::Entail {
                    all_required,
                    antecedents,
                    consequents,
                })
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Wff::Ident(n.to_string()))
            }
            Tok::Ident(name) => {
                self.bump();
                let next = self.peek().clone();
                match (name.as_str(), next) {
                    ("andor" | "thresh", Tok::LParen) => {
                        self.bump();
                        let i = self.int()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let j = self.int()?;
                        self.expect(Tok::RParen, "`)`")?;
                        let members = self.braced()?;
                        Ok(if name == "andor" {
                            Wff::AndOr(i, j, members)
                        } else {
                            Wff::Thresh(i, j, members)
                        })
                    }
                    ("and", Tok::LBrace) => Ok(Wff::And(self.braced()?)),
                    ("or", Tok::LBrace) => Ok(Wff::Or(self.braced()?)),
                    ("all", Tok::LParen) => {
                        self.bump();
                        let mut vars = Vec::new();
                        loop {
                            match self.bump() {
                                Tok::Ident(v) => vars.push(v),
                                _ => {
                                    self.pos -= 1;
                                    return Err(self.error("a variable name"));
                                }
                            }
                            match self.peek() {
                                Tok::Comma => {
                                    self.bump();
                                }
                                Tok::RParen => {
                                    self.bump();
                                    break;
                                }
                                _ => return Err(self.error("`,` or `)`")),
                            }
                        }
                        self.expect(Tok::LParen, "`(`")?;
                        let body = self.wff()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Wff::All(vars, Box::new(body)))
                    }
                    (_, Tok::LParen) => {
                        self.bump();
                        let args = self.list(Tok::RParen, "`,` or `)`")?;
                        Ok(Wff::App(name, args))
                    }
                    _ => Ok(Wff::Ident(name)),
                }
            }
            _ => Err(self.error("a wff")),
        }
    }

    fn statement(&mut self) -> Result<Statement, SyntaxError> {
        let first = self.toks[self.pos].clone();
        if let Tok::Directive(name, rest) = &first.tok {
            self.bump();
            return Ok(Statement {
                line: first.line,
                source: self.text[first.start..first.end].trim().to_string(),
                command: Command::Directive {
                    name: name.clone(),
                    rest: rest.clone(),
                },
            });
        }
        let wff = self.wff()?;
        let command = match self.peek() {
            Tok::Dot => Command::Assert(wff),
            Tok::Bang => Command::AssertForward(wff),
            Tok::Question => Command::Query(wff),
            _ => return Err(self.error("`.`, `!` or `?`")),
        };
        let last = self.toks[self.pos].end;
        self.bump();
        let source = self.text[first.start..last]
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        Ok(Statement {
            line: first.line,
            source,
            command,
        })
    }
}

/// Parses a whole script.
pub fn parse_script(text: &str) -> Result<Vec<Statement>, SyntaxError> {
    let mut p = Parser {
        text,
        toks: lex(text)?,
        pos: 0,
    };
    let mut out = Vec::new();
    while *p.peek() != Tok::End {
        out.push(p.statement()?);
    }
    Ok(out)
}

/// Parses exactly one command.
pub fn parse(text: &str) -> Result<Command, SyntaxError> {
    let mut p = Parser {
        text,
        toks: lex(text)?,
        pos: 0,
    };
    let s = p.statement()?;
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(s.command)
}

/// Parses a wff with no terminator.
pub fn parse_wff(text: &str) -> Result<Wff, SyntaxError> {
    let mut p = Parser {
        text,
        toks: lex(text)?,
        pos: 0,
    };
    let w = p.wff()?;
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(w)
}
