//! Turning parsed wffs into interned terms.
//!
//! Identifiers bound by an enclosing `all` are variables; every other
//! identifier is an atom. In a query, a single-letter argument that does not
//! name an existing atom is read as a free query variable.

use crate::term::{TermError, TermId, TermStore};

use super::syntax::Wff;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    Assertion,
    Query,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Position {
    Proposition,
    Argument,
}

/// True for `x`, `y`, `P` and the like.
pub fn looks_like_variable(name: &str) -> bool {
    name.len() == 1 && name.chars().all(|c| c.is_ascii_alphabetic())
}

/// Interns `wff`. Returns the term and, for queries, its free variables.
pub fn build(store: &mut TermStore, wff: &Wff, reading: Reading) -> Result<(TermId, Vec<TermId>), TermError> {
    let mut free = Vec::new();
    let t = Builder {
        store,
        reading,
        scope: Vec::new(),
        free: &mut free,
    }
    .term(wff, Position::Proposition)?;
    Ok((t, free))
}

struct Builder<'a> {
    store: &'a mut TermStore,
    reading: Reading,
    scope: Vec<String>,
    free: &'a mut Vec<TermId>,
}

impl Builder<'_> {
    fn list(&mut self, ws: &[Wff], pos: Position) -> Result<Vec<TermId>, TermError> {
        ws.iter().map(|w| self.term(w, pos)).collect()
    }

    fn term(&mut self, wff: &Wff, pos: Position) -> Result<TermId, TermError> {
        Ok(match wff {
            Wff::Ident(name) => {
                if self.scope.iter().any(|s| s == name) {
                    self.store.var(name)
                } else if self.reading == Reading::Query
                    && pos == Position::Argument
                    && looks_like_variable(name)
                    && self.store.lookup_atom(name).is_none()
                {
                    let v = self.store.var(name);
                    if !self.free.contains(&v) {
                        self.free.push(v);
                    }
                    v
                } else {
                    self.store.atom(name)
                }
            }
            Wff::App(f, args) => {
                let args = self.list(args, Position::Argument)?;
                self.store.app(f, args)
            }
            Wff::Not(w) => {
                let p = self.term(w, Position::Proposition)?;
                self.store.negation_of(p)?
            }
            Wff::Implies(a, c) => {
                let a = self.term(a, Position::Proposition)?;
                let c = self.term(c, Position::Proposition)?;
                self.store.implies(a, c)
            }
            Wff::Entail {
                all_required,
                antecedents,
                consequents,
            } => {
                let a = self.list(antecedents, Position::Proposition)?;
                let c = self.list(consequents, Position::Proposition)?;
                self.store.entail(*all_required, a, c)?
            }
            Wff::AndOr(i, j, ms) => {
                let ms = self.list(ms, Position::Proposition)?;
                self.store.andor(*i, *j, ms)?
            }
            Wff::Thresh(i, j, ms) => {
                let ms = self.list(ms, Position::Proposition)?;
                self.store.thresh(*i, *j, ms)?
            }
            Wff::And(ms) | Wff::Or(ms) => {
                let mut ms = self.list(ms, Position::Proposition)?;
                ms.sort_unstable();
                ms.dedup();
                let n = ms.len() as u32;
                let min = if matches!(wff, Wff::And(_)) { n } else { 1 };
                self.store.andor(min, n, ms)?
            }
            Wff::All(vars, body) => {
                let mark = self.scope.len();
                self.scope.extend(vars.iter().cloned());
                let body = self.term(body, Position::Proposition);
                self.scope.truncate(mark);
                let vs: Vec<TermId> = vars.iter().map(|v| self.store.var(v)).collect();
                self.store.forall(vs, body?)?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snepslog::syntax::parse_wff;

    fn b(store: &mut TermStore, text: &str, r: Reading) -> (TermId, Vec<TermId>) {
        build(store, &parse_wff(text).unwrap(), r).unwrap()
    }

    #[test]
    fn assertions_use_atoms() {
        let mut s = TermStore::new();
        let (t, free) = b(&mut s, "fun(x)", Reading::Assertion);
        assert!(free.is_empty());
        assert!(s.get(t).is_ground());
    }

    #[test]
    fn query_variables() {
        let mut s = TermStore::new();
        b(&mut s, "fun(learning)", Reading::Assertion);
        let (t, free) = b(&mut s, "fun(x)", Reading::Query);
        assert_eq!(free.len(), 1);
        assert!(!s.get(t).is_ground());
        let (t, free) = b(&mut s, "fun(learning)", Reading::Query);
        assert!(free.is_empty());
        assert!(s.get(t).is_ground());
        // a long unknown name stays a constant
        let (_, free) = b(&mut s, "fun(swimming)", Reading::Query);
        assert!(free.is_empty());
    }

    #[test]
    fn existing_atom_is_not_a_variable() {
        let mut s = TermStore::new();
        b(&mut s, "parent(a, b)", Reading::Assertion);
        let (_, free) = b(&mut s, "anc(a, z)", Reading::Query);
        assert_eq!(free, vec![s.var("z")]);
    }

    #[test]
    fn quantified_variables() {
        let mut s = TermStore::new();
        let (t, _) = b(&mut s, "all(x)(man(x) => mortal(x))", Reading::Assertion);
        assert!(s.is_closed(t));
        assert!(!s.get(t).is_ground());
        assert_eq!(s.display(t), "all(x)(man(x) => mortal(x))");
    }

    #[test]
    fn sugar() {
        let mut s = TermStore::new();
        let (t, _) = b(&mut s, "and{a, b}", Reading::Assertion);
        assert_eq!(s.display(t), "andor(2,2){a, b}");
        let (t, _) = b(&mut s, "or{a, b, a}", Reading::Assertion);
        assert_eq!(s.display(t), "andor(1,2){a, b}");
    }

    #[test]
    fn negated_variable_is_rejected() {
        let mut s = TermStore::new();
        let w = parse_wff("all(p)(~p)").unwrap();
        assert!(matches!(build(&mut s, &w, Reading::Assertion), Err(TermError::NegatedVariable(_))));
    }
}
