//! The knowledge base: term store, supports, the default context, compiled
//! rules and the pipeline every new belief goes through (contradiction
//! detection, revision, acting).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::rc::Rc;

use thiserror::Error;

use crate::acting::{ActRegistry, ActRule};
use crate::atms::{
    AssertionStatus, AtmsError, Context, OriginSet, OriginTag, RetractionReport, Supports,
};
use crate::connective::{compile, RuleSchemas};
use crate::revision::{Contradiction, RevisionReport, UserDialog};
use crate::term::{Functor, TermError, TermId, TermStore};

/// How contradictions are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RevisionMode {
    /// Retract the culprit when the choice is obvious, otherwise ask.
    #[default]
    Auto,
    /// Always ask.
    Interactive,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Bound on goal nesting in backward chaining and on the nesting depth
    /// of forward-derived terms.
    pub depth_cap: usize,
    pub mode: RevisionMode,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            depth_cap: 50,
            mode: RevisionMode::Auto,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub depth_cap_hits: usize,
    pub tables_created: usize,
    pub forward_firings: usize,
}

/// Something observable that happened while processing a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Contradiction(Contradiction),
    Revision(RevisionReport),
    Unresolved(Contradiction),
    Retracted(RetractionReport),
    Act(TermId),
    ActFailed { act: TermId, message: String },
    Warning(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("{0} has free variables")]
    OpenFormula(String),
    #[error("{0} is not a hypothesis")]
    NotAHypothesis(String),
    #[error("unknown act {0}")]
    UnknownAct(String),
    #[error("act {0} is already registered")]
    DuplicateAct(String),
    #[error("act {name} takes {expected} argument(s), got {found}")]
    ActArity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("act {0} is not ground")]
    NonGroundAct(String),
    #[error("act {act} failed: {message}")]
    ActFailed { act: String, message: String },
    #[error("unresolved contradiction: {0}")]
    UnresolvedContradiction(String),
    #[error("invalid revision choice: {0}")]
    InvalidChoice(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

type HeadKey = (Functor, usize);

#[derive(Default)]
pub(crate) struct RuleBase {
    pub(crate) compiled: HashMap<TermId, Rc<RuleSchemas>>,
    // premise head -> (rule, schema index, premise index)
    pub(crate) by_premise: HashMap<HeadKey, Vec<(TermId, usize, usize)>>,
    pub(crate) any_premise: Vec<(TermId, usize, usize)>,
    // conclusion head -> (rule, schema index)
    pub(crate) by_conclusion: HashMap<HeadKey, Vec<(TermId, usize)>>,
    pub(crate) any_conclusion: Vec<(TermId, usize)>,
}

pub struct Engine {
    pub(crate) store: TermStore,
    pub(crate) supports: Supports,
    pub(crate) ctx: Context,
    pub(crate) config: EngineConfig,
    pub(crate) rules: RuleBase,
    pub(crate) facts: HashMap<HeadKey, Vec<TermId>>,
    pub(crate) acts: ActRegistry,
    pub(crate) act_rules: Vec<ActRule>,
    pub(crate) performed: HashSet<(TermId, TermId)>,
    pub(crate) dialog: Option<Box<dyn UserDialog>>,
    pub(crate) events: Vec<Event>,
    pub(crate) pending: VecDeque<TermId>,
    pub(crate) processing: bool,
    pub(crate) hooks_suspended: bool,
    pub(crate) revision_suspended: bool,
    pub(crate) unresolved: BTreeSet<(TermId, TermId)>,
    pub(crate) stats: Stats,
    wff_numbers: HashMap<TermId, usize>,
    wff_order: Vec<TermId>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(EngineConfig::default())
    }
}

pub(crate) fn head_key(store: &TermStore, t: TermId) -> Option<HeadKey> {
    let term = store.get(t);
    if term.is_variable() {
        None
    } else {
        Some((term.functor().clone(), term.args().len()))
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Engine {
            store: TermStore::new(),
            supports: Supports::new(),
            ctx: Context::default(),
            config,
            rules: RuleBase::default(),
            facts: HashMap::new(),
            acts: ActRegistry::default(),
            act_rules: Vec::new(),
            performed: HashSet::new(),
            dialog: None,
            events: Vec::new(),
            pending: VecDeque::new(),
            processing: false,
            hooks_suspended: false,
            revision_suspended: false,
            unresolved: BTreeSet::new(),
            stats: Stats::default(),
            wff_numbers: HashMap::new(),
            wff_order: Vec::new(),
        }
    }

    pub fn store(&self) -> &TermStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut TermStore {
        &mut self.store
    }

    pub fn supports(&self) -> &Supports {
        &self.supports
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn set_mode(&mut self, mode: RevisionMode) {
        self.config.mode = mode;
    }

    pub fn set_depth_cap(&mut self, cap: usize) {
        self.config.depth_cap = cap;
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn set_dialog(&mut self, dialog: Option<Box<dyn UserDialog>>) {
        self.dialog = dialog;
    }

    /// Suspends acting hooks (used while replaying a saved network).
    pub fn suspend_hooks(&mut self, on: bool) {
        self.hooks_suspended = on;
    }

    /// Suspends contradiction resolution; contradictions are still reported.
    pub fn suspend_revision(&mut self, on: bool) {
        self.revision_suspended = on;
    }

    pub fn take_events(&mut self) -> Vec<Event> {
        std::mem::take(&mut self.events)
    }

    pub fn display(&self, t: TermId) -> String {
        self.store.display(t)
    }

    pub fn is_asserted(&self, p: TermId) -> bool {
        self.supports.is_asserted(p, &self.ctx)
    }

    pub fn status(&self, p: TermId) -> AssertionStatus {
        self.supports.status(p, &self.ctx)
    }

    pub fn is_hypothesis(&self, p: TermId) -> bool {
        self.ctx.contains(p)
    }

    /// The stable display number of `p` (`wffN`), assigned on first use.
    pub fn wff_number(&mut self, p: TermId) -> usize {
        if let Some(n) = self.wff_numbers.get(&p) {
            return *n;
        }
        self.wff_order.push(p);
        let n = self.wff_order.len();
        self.wff_numbers.insert(p, n);
        n
    }

    pub fn existing_wff_number(&self, p: TermId) -> Option<usize> {
        self.wff_numbers.get(&p).copied()
    }

    pub fn wff_by_number(&self, n: usize) -> Option<TermId> {
        n.checked_sub(1).and_then(|i| self.wff_order.get(i)).copied()
    }

    /// All currently believed propositions, in id order.
    pub fn beliefs(&self) -> Vec<TermId> {
        self.supports
            .known()
            .into_iter()
            .filter(|p| self.is_asserted(*p))
            .collect()
    }

    /// Known propositions with the given functor and arity.
    pub fn facts_with_head(&self, functor: &Functor, arity: usize) -> &[TermId] {
        self.facts
            .get(&(functor.clone(), arity))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub(crate) fn fact_candidates(&self, pattern: TermId) -> Vec<TermId> {
        match head_key(&self.store, pattern) {
            Some(k) => self.facts.get(&k).cloned().unwrap_or_default(),
            None => self.supports.known(),
        }
    }

    /// Records a support and keeps the indexes and the pending-belief queue
    /// up to date. Returns true if the label changed.
    pub(crate) fn record_support(&mut self, p: TermId, tag: OriginTag, origin: OriginSet) -> bool {
        let first = !self.supports.has_support(p);
        let was = self.is_asserted(p);
        let changed = match tag {
            OriginTag::Der => self.supports.add_derived_support(p, origin),
            OriginTag::Hyp => self.supports.add_hypothesis_record(p),
        };
        if first {
            self.index_new(p);
        }
        if !was && self.is_asserted(p) {
            self.wff_number(p);
            self.pending.push_back(p);
        }
        changed
    }

    fn index_new(&mut self, p: TermId) {
        if let Some(k) = head_key(&self.store, p) {
            self.facts.entry(k).or_default().push(p);
        }
        if let Some(rule) = ActRule::read(&self.store, p) {
            self.act_rules.push(rule);
        }
        if self.store.get(p).functor().is_connective() {
            match compile(&mut self.store, p) {
                Ok(rs) => self.register_rule(p, rs),
                Err(e) => self
                    .events
                    .push(Event::Warning(format!("{} is inert: {e}", self.store.display(p)))),
            }
        }
    }

    fn register_rule(&mut self, rule: TermId, rs: RuleSchemas) {
        if rs.schemas.is_empty() {
            return;
        }
        for (si, schema) in rs.schemas.iter().enumerate() {
            for (pi, prem) in schema.premises.iter().enumerate() {
                match head_key(&self.store, *prem) {
                    Some(k) => self.rules.by_premise.entry(k).or_default().push((rule, si, pi)),
                    None => self.rules.any_premise.push((rule, si, pi)),
                }
            }
            match head_key(&self.store, schema.conclusion) {
                Some(k) => self.rules.by_conclusion.entry(k).or_default().push((rule, si)),
                None => self.rules.any_conclusion.push((rule, si)),
            }
        }
        self.rules.compiled.insert(rule, Rc::new(rs));
    }

    /// Asserts `p` as a hypothesis of the context and runs the belief
    /// pipeline. Asserting an existing hypothesis is a no-op.
    pub fn assert_hyp(&mut self, p: TermId) -> Result<AssertionStatus, EngineError> {
        if !self.store.is_closed(p) {
            return Err(EngineError::OpenFormula(self.store.display(p)));
        }
        if self.ctx.contains(p) {
            return Ok(self.status(p));
        }
        // re-adding a retracted hypothesis can revive its dependents
        let affected = self.supports.dependents(p);
        let before: HashSet<TermId> = affected
            .iter()
            .copied()
            .filter(|q| self.is_asserted(*q))
            .collect();
        self.record_support(p, OriginTag::Hyp, OriginSet::singleton(p));
        self.ctx.hyps.insert(p);
        if !self.pending.contains(&p) && !before.contains(&p) && self.is_asserted(p) {
            self.wff_number(p);
            self.pending.push_back(p);
        }
        for q in affected {
            if q != p && !before.contains(&q) && self.is_asserted(q) && !self.pending.contains(&q) {
                self.wff_number(q);
                self.pending.push_back(q);
            }
        }
        self.process_pending();
        Ok(self.status(p))
    }

    /// Adds an origin set for a derived proposition and runs the pipeline.
    pub fn add_derived_support(&mut self, p: TermId, origin: OriginSet) -> AssertionStatus {
        self.record_support(p, OriginTag::Der, origin);
        self.process_pending();
        self.status(p)
    }

    /// Removes hypothesis `h` from the context.
    pub fn retract_hyp(&mut self, h: TermId) -> Result<RetractionReport, EngineError> {
        let report = self
            .supports
            .retract_hyp(h, &mut self.ctx)
            .map_err(|AtmsError::NotAHypothesis(t)| {
                EngineError::NotAHypothesis(self.store.display(t))
            })?;
        for p in &report.dropped {
            self.wff_number(*p);
        }
        let live: Vec<(TermId, TermId)> = self.unresolved.iter().copied().collect();
        for (p, np) in live {
            if !(self.is_asserted(p) && self.is_asserted(np)) {
                self.unresolved.remove(&(p, np));
            }
        }
        Ok(report)
    }

    /// Drains the pending-belief queue: each newly believed proposition is
    /// checked for contradiction and offered to the acting rules.
    pub(crate) fn process_pending(&mut self) {
        if self.processing {
            return;
        }
        self.processing = true;
        while let Some(p) = self.pending.pop_front() {
            if !self.is_asserted(p) {
                continue;
            }
            if let Some(c) = self.detect_contradiction(p) {
                self.handle_contradiction(c);
            }
            if !self.is_asserted(p) || self.hooks_suspended {
                continue;
            }
            self.on_belief_added(p);
        }
        self.processing = false;
    }

    fn handle_contradiction(&mut self, c: Contradiction) {
        let key = (c.p, c.not_p);
        if self.unresolved.contains(&key) {
            return;
        }
        self.events.push(Event::Contradiction(c.clone()));
        if self.revision_suspended {
            self.unresolved.insert(key);
            self.events.push(Event::Unresolved(c));
            return;
        }
        let mut dialog = self.dialog.take();
        let result = self.resolve(&c, dialog.as_deref_mut());
        if self.dialog.is_none() {
            self.dialog = dialog;
        }
        match result {
            Ok(report) => self.events.push(Event::Revision(report)),
            Err(_) => {
                if let Some(live) = self.live_contradiction(c.p, c.not_p) {
                    self.unresolved.insert(key);
                    self.events.push(Event::Unresolved(live));
                }
            }
        }
    }

    /// Contradictions currently left standing.
    pub fn unresolved_contradictions(&self) -> Vec<(TermId, TermId)> {
        self.unresolved.iter().copied().collect()
    }

    /// Interns an atom. Convenience for programmatic use.
    pub fn atom(&mut self, name: &str) -> TermId {
        self.store.atom(name)
    }

    pub fn app(&mut self, name: &str, args: Vec<TermId>) -> TermId {
        self.store.app(name, args)
    }

    pub fn negation_of(&mut self, p: TermId) -> Result<TermId, EngineError> {
        Ok(self.store.negation_of(p)?)
    }
}
