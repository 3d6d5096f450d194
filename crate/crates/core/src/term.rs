//! The interned term network.
//!
//! Every well-formed expression is a node in one store, and building a node
//! that looks exactly like an existing one (same functor, same arguments)
//! returns the existing node. Propositions, rules and acts are all terms.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Identifier of an interned term. Assigned densely in creation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        TermId(index as u32)
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The head of a term.
///
/// Connective parameters live in the functor so that `andor(0,0){P}` has
/// exactly one argument, P itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Functor {
    /// Atom names, variable names and user predicate/function symbols.
    Sym(String),
    /// At least `min` and at most `max` of the members are true.
    AndOr(u32, u32),
    /// Fewer than `min` or more than `max` of the members are true.
    Thresh(u32, u32),
    /// All antecedents entail every consequent. Holds the antecedent count.
    AndEntail(u32),
    /// Any antecedent entails every consequent. Holds the antecedent count.
    OrEntail(u32),
    /// Universal quantification; holds the number of bound variables, which
    /// precede the body in the argument list.
    All(u32),
}

impl Functor {
    pub fn sym(name: impl Into<String>) -> Self {
        Functor::Sym(name.into())
    }

    pub fn is_connective(&self) -> bool {
        !matches!(self, Functor::Sym(_))
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functor::Sym(s) => f.write_str(s),
            Functor::AndOr(i, j) => write!(f, "andor({i},{j})"),
            Functor::Thresh(i, j) => write!(f, "thresh({i},{j})"),
            Functor::AndEntail(_) => f.write_str("&=>"),
            Functor::OrEntail(_) => f.write_str("v=>"),
            Functor::All(_) => f.write_str("all"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Atom,
    Variable,
    Application,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    kind: TermKind,
    functor: Functor,
    args: Vec<TermId>,
}

/// A node of the network.
#[derive(Clone, Debug)]
pub struct Term {
    functor: Functor,
    args: Vec<TermId>,
    kind: TermKind,
    // cached structural facts
    ground: bool,
    internal: bool,
    depth: u32,
}

impl Term {
    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn args(&self) -> &[TermId] {
        &self.args
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn is_variable(&self) -> bool {
        self.kind == TermKind::Variable
    }

    pub fn is_atom(&self) -> bool {
        self.kind == TermKind::Atom
    }

    /// True when no variable occurs anywhere in the term (bound or free).
    pub fn is_ground(&self) -> bool {
        self.ground
    }

    /// True when the term mentions an engine-generated variable.
    pub fn is_internal(&self) -> bool {
        self.internal
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn name(&self) -> Option<&str> {
        match &self.functor {
            Functor::Sym(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("cannot negate variable {0}")]
    NegatedVariable(String),
    #[error("{connective} bounds {min},{max} invalid for {members} member(s)")]
    BadBounds {
        connective: &'static str,
        min: u32,
        max: u32,
        members: usize,
    },
    #[error("{0} needs at least one member")]
    Empty(&'static str),
    #[error("all() binds a non-variable")]
    BindsNonVariable,
}

/// Prefix reserved for engine-generated variables; the surface grammar
/// cannot produce identifiers starting with it.
pub const INTERNAL_VAR_PREFIX: char = '_';

/// Interned store of terms.
#[derive(Debug, Default, Clone)]
pub struct TermStore {
    terms: Vec<Term>,
    index: HashMap<Key, TermId>,
}

impl TermStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, id: TermId) -> &Term {
        &self.terms[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = TermId> + '_ {
        (0..self.terms.len()).map(TermId::from_index)
    }

    pub fn atom(&mut self, name: &str) -> TermId {
        self.insert(TermKind::Atom, Functor::sym(name), Vec::new())
    }

    pub fn var(&mut self, name: &str) -> TermId {
        self.insert(TermKind::Variable, Functor::sym(name), Vec::new())
    }

    /// Interns `functor(args)`. A symbol with no arguments is an atom.
    ///
    /// Member collections of `andor`/`thresh` are sorted and deduplicated,
    /// as are both sides of an entailment, so that argument order does not
    /// matter for the set-oriented connectives.
    pub fn intern(&mut self, functor: Functor, args: Vec<TermId>) -> TermId {
        match functor {
            Functor::Sym(_) if args.is_empty() => self.insert(TermKind::Atom, functor, args),
            Functor::Sym(_) | Functor::All(_) => {
                self.insert(TermKind::Application, functor, args)
            }
            Functor::AndOr(..) | Functor::Thresh(..) => {
                let args = sorted_set(args);
                self.insert(TermKind::Application, functor, args)
            }
            Functor::AndEntail(n) | Functor::OrEntail(n) => {
                let n = (n as usize).min(args.len());
                let (ants, cons) = args.split_at(n);
                let ants = sorted_set(ants.to_vec());
                let cons = sorted_set(cons.to_vec());
                let count = ants.len() as u32;
                let functor = match functor {
                    Functor::AndEntail(_) => Functor::AndEntail(count),
                    _ => Functor::OrEntail(count),
                };
                let mut all = ants;
                all.extend(cons);
                self.insert(TermKind::Application, functor, all)
            }
        }
    }

    pub fn app(&mut self, name: &str, args: Vec<TermId>) -> TermId {
        self.intern(Functor::sym(name), args)
    }

    /// Looks up `functor(args)` without creating it.
    pub fn lookup(&self, functor: &Functor, args: &[TermId]) -> Option<TermId> {
        let kind = if args.is_empty() {
            TermKind::Atom
        } else {
            TermKind::Application
        };
        let key = Key {
            kind,
            functor: functor.clone(),
            args: args.to_vec(),
        };
        self.index.get(&key).copied()
    }

    pub fn lookup_atom(&self, name: &str) -> Option<TermId> {
        self.lookup(&Functor::sym(name), &[])
    }

    /// The canonical negation `andor(0,0){p}`.
    pub fn negation_of(&mut self, p: TermId) -> Result<TermId, TermError> {
        let t = self.get(p);
        if t.is_variable() {
            return Err(TermError::NegatedVariable(self.display(p)));
        }
        Ok(self.intern(Functor::AndOr(0, 0), vec![p]))
    }

    /// The negation of `p` if it has already been interned.
    pub fn existing_negation(&self, p: TermId) -> Option<TermId> {
        self.lookup(&Functor::AndOr(0, 0), &[p])
    }

    /// If `t` is a negation, the negated term.
    pub fn negated(&self, t: TermId) -> Option<TermId> {
        let term = self.get(t);
        match (term.functor(), term.args()) {
            (Functor::AndOr(0, 0), [p]) => Some(*p),
            _ => None,
        }
    }

    pub fn andor(&mut self, min: u32, max: u32, members: Vec<TermId>) -> Result<TermId, TermError> {
        let members = sorted_set(members);
        check_bounds("andor", min, max, members.len())?;
        Ok(self.intern(Functor::AndOr(min, max), members))
    }

    pub fn thresh(&mut self, min: u32, max: u32, members: Vec<TermId>) -> Result<TermId, TermError> {
        let members = sorted_set(members);
        check_bounds("thresh", min, max, members.len())?;
        Ok(self.intern(Functor::Thresh(min, max), members))
    }

    pub fn entail(
        &mut self,
        all_required: bool,
        antecedents: Vec<TermId>,
        consequents: Vec<TermId>,
    ) -> Result<TermId, TermError> {
        if antecedents.is_empty() || consequents.is_empty() {
            return Err(TermError::Empty("entailment"));
        }
        let n = antecedents.len() as u32;
        let mut args = antecedents;
        args.extend(consequents);
        let functor = if all_required {
            Functor::AndEntail(n)
        } else {
            Functor::OrEntail(n)
        };
        Ok(self.intern(functor, args))
    }

    pub fn implies(&mut self, antecedent: TermId, consequent: TermId) -> TermId {
        self.intern(Functor::OrEntail(1), vec![antecedent, consequent])
    }

    pub fn forall(&mut self, vars: Vec<TermId>, body: TermId) -> Result<TermId, TermError> {
        if vars.is_empty() {
            return Err(TermError::Empty("all"));
        }
        if vars.iter().any(|v| !self.get(*v).is_variable()) {
            return Err(TermError::BindsNonVariable);
        }
        let n = vars.len() as u32;
        let mut args = vars;
        args.push(body);
        Ok(self.intern(Functor::All(n), args))
    }

    /// Exactly the interned terms matching `pattern`.
    pub fn find(&self, pattern: &Pattern) -> Vec<TermId> {
        self.ids().filter(|id| pattern.matches(self, *id)).collect()
    }

    /// Free variables of `t` in first-occurrence order.
    pub fn free_vars(&self, t: TermId) -> Vec<TermId> {
        let mut out = Vec::new();
        self.collect_free(t, &mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, t: TermId, bound: &mut Vec<TermId>, out: &mut Vec<TermId>) {
        let term = self.get(t);
        if term.ground {
            return;
        }
        match term.kind {
            TermKind::Variable => {
                if !bound.contains(&t) && !out.contains(&t) {
                    out.push(t);
                }
            }
            TermKind::Atom => {}
            TermKind::Application => {
                if let Functor::All(n) = term.functor {
                    let n = n as usize;
                    let mark = bound.len();
                    bound.extend_from_slice(&term.args[..n]);
                    self.collect_free(term.args[n], bound, out);
                    bound.truncate(mark);
                } else {
                    for &a in &term.args {
                        self.collect_free(a, bound, out);
                    }
                }
            }
        }
    }

    pub fn is_closed(&self, t: TermId) -> bool {
        self.free_vars(t).is_empty()
    }

    /// Renders a term in the surface syntax.
    pub fn display(&self, t: TermId) -> String {
        let mut s = String::new();
        self.write_term(&mut s, t);
        s
    }

    fn write_list(&self, out: &mut String, items: &[TermId]) {
        for (k, a) in items.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            self.write_term(out, *a);
        }
    }

    /// Set members in display order, so that the rendering does not depend
    /// on interning order.
    fn write_set(&self, out: &mut String, items: &[TermId]) {
        let mut shown: Vec<String> = items.iter().map(|t| self.display(*t)).collect();
        shown.sort();
        out.push_str(&shown.join(", "));
    }

    fn is_infix_implication(&self, t: TermId) -> bool {
        let term = self.get(t);
        matches!(term.functor, Functor::OrEntail(1)) && term.args.len() == 2
    }

    fn write_term(&self, out: &mut String, t: TermId) {
        let term = self.get(t);
        match (&term.functor, term.kind) {
            (Functor::Sym(name), TermKind::Atom | TermKind::Variable) => out.push_str(name),
            (Functor::Sym(name), TermKind::Application) => {
                out.push_str(name);
                out.push('(');
                self.write_list(out, &term.args);
                out.push(')');
            }
            (Functor::AndOr(0, 0), _) if term.args.len() == 1 => {
                out.push('~');
                let inner = term.args[0];
                if self.is_infix_implication(inner) {
                    out.push('(');
                    self.write_term(out, inner);
                    out.push(')');
                } else {
                    self.write_term(out, inner);
                }
            }
            (Functor::AndOr(i, j), _) | (Functor::Thresh(i, j), _) => {
                let word = if matches!(term.functor, Functor::AndOr(..)) {
                    "andor"
                } else {
                    "thresh"
                };
                out.push_str(&format!("{word}({i},{j}){{"));
                self.write_set(out, &term.args);
                out.push('}');
            }
            (Functor::OrEntail(1), _) if term.args.len() == 2 => {
                let (lhs, rhs) = (term.args[0], term.args[1]);
                if self.is_infix_implication(lhs) {
                    out.push('(');
                    self.write_term(out, lhs);
                    out.push(')');
                } else {
                    self.write_term(out, lhs);
                }
                out.push_str(" => ");
                self.write_term(out, rhs);
            }
            (Functor::AndEntail(n), _) | (Functor::OrEntail(n), _) => {
                let (ants, cons) = term.args.split_at(*n as usize);
                out.push('{');
                self.write_set(out, ants);
                out.push_str(if matches!(term.functor, Functor::AndEntail(_)) {
                    "} &=> {"
                } else {
                    "} v=> {"
                });
                self.write_set(out, cons);
                out.push('}');
            }
            (Functor::All(n), _) => {
                let n = *n as usize;
                out.push_str("all(");
                self.write_list(out, &term.args[..n]);
                out.push_str(")(");
                self.write_term(out, term.args[n]);
                out.push(')');
            }
        }
    }

    fn insert(&mut self, kind: TermKind, functor: Functor, args: Vec<TermId>) -> TermId {
        let key = Key {
            kind,
            functor,
            args,
        };
        if let Some(id) = self.index.get(&key) {
            return *id;
        }
        let (ground, internal, depth) = match kind {
            TermKind::Atom => (true, false, 0),
            TermKind::Variable => {
                let internal = matches!(&key.functor, Functor::Sym(s) if s.starts_with(INTERNAL_VAR_PREFIX));
                (false, internal, 0)
            }
            TermKind::Application => key.args.iter().fold((true, false, 0), |acc, a| {
                let t = &self.terms[a.index()];
                (acc.0 && t.ground, acc.1 || t.internal, acc.2.max(t.depth + 1))
            }),
        };
        let id = TermId::from_index(self.terms.len());
        self.terms.push(Term {
            functor: key.functor.clone(),
            args: key.args.clone(),
            kind,
            ground,
            internal,
            depth,
        });
        self.index.insert(key, id);
        id
    }
}

fn sorted_set(mut v: Vec<TermId>) -> Vec<TermId> {
    v.sort_unstable();
    v.dedup();
    v
}

fn check_bounds(connective: &'static str, min: u32, max: u32, n: usize) -> Result<(), TermError> {
    if n == 0 {
        return Err(TermError::Empty(connective));
    }
    if min > max || max as usize > n {
        return Err(TermError::BadBounds {
            connective,
            min,
            max,
            members: n,
        });
    }
    Ok(())
}

/// One argument position of a [`Pattern`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternArg {
    Term(TermId),
    Wildcard,
    /// Matches anything; repeated occurrences of one name must match the
    /// same node.
    Var(String),
}

/// A structural retrieval query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    /// `None` matches any functor.
    pub functor: Option<Functor>,
    /// `None` matches any argument list.
    pub args: Option<Vec<PatternArg>>,
}

impl Pattern {
    pub fn new(functor: Functor, args: Vec<PatternArg>) -> Self {
        Pattern {
            functor: Some(functor),
            args: Some(args),
        }
    }

    pub fn any() -> Self {
        Pattern {
            functor: None,
            args: None,
        }
    }

    pub fn matches(&self, store: &TermStore, id: TermId) -> bool {
        let term = store.get(id);
        if let Some(f) = &self.functor {
            if f != term.functor() || term.is_variable() {
                return false;
            }
        }
        let Some(args) = &self.args else {
            return true;
        };
        if args.len() != term.args().len() {
            return false;
        }
        let mut seen: Vec<(&str, TermId)> = Vec::new();
        for (p, a) in args.iter().zip(term.args()) {
            match p {
                PatternArg::Term(t) if t != a => return false,
                PatternArg::Var(name) => match seen.iter().find(|(n, _)| n == name) {
                    Some((_, bound)) if bound != a => return false,
                    Some(_) => {}
                    None => seen.push((name, *a)),
                },
                _ => {}
            }
        }
        true
    }
}
