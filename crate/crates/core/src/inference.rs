//! Bi-directional inference over compiled rule schemas.
//!
//! Forward inference propagates new origin sets through every schema whose
//! premise matches, to quiescence. Backward inference answers a goal with a
//! goal table: each distinct goal (up to variable renaming) is evaluated once
//! per pass, recursive goals read the partial answers of their ancestors, and
//! passes repeat until no table grows. Both directions record full
//! ⊆-minimal origin sets, so contraction is exact.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::atms::{insert_minimal, OriginSet, OriginTag, SupportRecord};
use crate::connective::{compile, Schema};
use crate::engine::{head_key, Engine};
use crate::term::{TermId, INTERNAL_VAR_PREFIX};
use crate::unify::{match_into, unify_into, Substitution};

/// One answer to a query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    /// The believed instance of the goal.
    pub proposition: TermId,
    /// Bindings for the goal's free variables.
    pub bindings: Substitution,
    /// Support records of `proposition` inside the context.
    pub supports: Vec<SupportRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoalStatus {
    Open,
    Answered,
    Exhausted,
}

#[derive(Debug, Default)]
struct TableEntry {
    depth: usize,
    answers: BTreeMap<TermId, Vec<OriginSet>>,
    complete: bool,
}

/// Per-episode goal table. Goals are keyed by their canonical variant.
#[derive(Debug, Default)]
pub struct GoalTable {
    entries: HashMap<TermId, TableEntry>,
    order: Vec<TermId>,
    changed: bool,
}

impl GoalTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn status(&self, canonical_goal: TermId) -> Option<GoalStatus> {
        self.entries.get(&canonical_goal).map(|e| {
            if !e.complete {
                GoalStatus::Open
            } else if e.answers.is_empty() {
                GoalStatus::Exhausted
            } else {
                GoalStatus::Answered
            }
        })
    }

    pub fn goals(&self) -> &[TermId] {
        &self.order
    }
}

type Combos = Vec<(Substitution, Vec<OriginSet>)>;

fn product(envs: &[OriginSet], more: &[OriginSet]) -> Vec<OriginSet> {
    let mut out = Vec::new();
    for e in envs {
        for m in more {
            insert_minimal(&mut out, e.union(m));
        }
    }
    out
}

impl Engine {
    /// Renames free variables of `goal` to `_0, _1, ...` in first-occurrence
    /// order, so that variants share one table entry.
    pub fn canonical_goal(&mut self, goal: TermId) -> TermId {
        let vars = self.store.free_vars(goal);
        if vars.is_empty() {
            return goal;
        }
        let mut sub = Substitution::new();
        for (k, v) in vars.into_iter().enumerate() {
            let c = self.store.var(&format!("{INTERNAL_VAR_PREFIX}{k}"));
            if c != v {
                sub.bind(v, c);
            }
        }
        // two-phase to avoid capture when names overlap
        let mut tmp = Substitution::new();
        let mut back = Substitution::new();
        for (v, c) in sub.iter() {
            let t = self.store.var(&format!("{INTERNAL_VAR_PREFIX}{INTERNAL_VAR_PREFIX}{}", v.index()));
            tmp.bind(v, t);
            back.bind(t, c);
        }
        let once = tmp.apply(&mut self.store, goal);
        back.apply(&mut self.store, once)
    }

    fn in_context(&self, p: TermId) -> Vec<OriginSet> {
        self.supports
            .origins(p)
            .filter(|o| o.is_within(&self.ctx.hyps))
            .cloned()
            .collect()
    }

    fn all_origins(&self, p: TermId) -> Vec<OriginSet> {
        self.supports.origins(p).cloned().collect()
    }

    fn schema(&self, rule: TermId, index: usize) -> Schema {
        self.rules.compiled[&rule].schemas[index].clone()
    }

    // ---------------------------------------------------------------- forward

    /// Joins `premises` against known propositions, starting from `sub`.
    /// Premise `skip` is taken as already satisfied.
    fn join_known(
        &mut self,
        premises: &[TermId],
        sub: Substitution,
        skip: Option<usize>,
        envs: Vec<OriginSet>,
        in_context_only: bool,
    ) -> Combos {
        let mut out = Vec::new();
        self.join_known_rec(premises, 0, sub, skip, envs, in_context_only, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn join_known_rec(
        &mut self,
        premises: &[TermId],
        k: usize,
        sub: Substitution,
        skip: Option<usize>,
        envs: Vec<OriginSet>,
        in_context_only: bool,
        out: &mut Combos,
    ) {
        if envs.is_empty() {
            return;
        }
        if k == premises.len() {
            out.push((sub, envs));
            return;
        }
        if skip == Some(k) {
            return self.join_known_rec(premises, k + 1, sub, skip, envs, in_context_only, out);
        }
        let pattern = sub.apply(&mut self.store, premises[k]);
        let origins = |e: &Engine, p: TermId| {
            if in_context_only {
                e.in_context(p)
            } else {
                e.all_origins(p)
            }
        };
        if self.store.get(pattern).is_ground() {
            let label = origins(self, pattern);
            if !label.is_empty() {
                let next = product(&envs, &label);
                self.join_known_rec(premises, k + 1, sub, skip, next, in_context_only, out);
            }
            return;
        }
        for fact in self.fact_candidates(pattern) {
            let mut s = sub.clone();
            if !match_into(&self.store, pattern, fact, &mut s) {
                continue;
            }
            let label = origins(self, fact);
            if label.is_empty() {
                continue;
            }
            let next = product(&envs, &label);
            self.join_known_rec(premises, k + 1, s, skip, next, in_context_only, out);
        }
    }

    fn accept_conclusion(&mut self, concl: TermId) -> bool {
        let term = self.store.get(concl);
        if !term.is_ground() && !self.store.is_closed(concl) {
            return false;
        }
        if term.depth() as usize > self.config.depth_cap {
            self.stats.depth_cap_hits += 1;
            return false;
        }
        true
    }

    /// Propagates new origin sets to quiescence. Returns the propositions
    /// that became believed along the way, in order.
    pub(crate) fn propagate(&mut self, seeds: Vec<(TermId, OriginSet)>) -> Vec<TermId> {
        let start = self.pending.len();
        let mut queue: VecDeque<(TermId, OriginSet)> = seeds.into();
        while let Some((p, env)) = queue.pop_front() {
            let mut derived: Vec<(TermId, OriginSet)> = Vec::new();
            // p as a rule
            if let Some(rs) = self.rules.compiled.get(&p).cloned() {
                for schema in &rs.schemas {
                    let combos = self.join_known(
                        &schema.premises,
                        Substitution::new(),
                        None,
                        vec![env.clone()],
                        false,
                    );
                    for (sub, envs) in combos {
                        let concl = sub.apply(&mut self.store, schema.conclusion);
                        derived.extend(envs.into_iter().map(|e| (concl, e)));
                    }
                }
            }
            // p as a premise
            let mut uses = self.rules.any_premise.clone();
            if let Some(k) = head_key(&self.store, p) {
                if let Some(v) = self.rules.by_premise.get(&k) {
                    uses.extend(v.iter().copied());
                }
            }
            for (rule, si, pi) in uses {
                let rule_envs = self.all_origins(rule);
                if rule_envs.is_empty() {
                    continue;
                }
                let schema = self.schema(rule, si);
                let mut sub = Substitution::new();
                if !match_into(&self.store, schema.premises[pi], p, &mut sub) {
                    continue;
                }
                let start_envs = product(&rule_envs, std::slice::from_ref(&env));
                let combos = self.join_known(&schema.premises, sub, Some(pi), start_envs, false);
                for (sub, envs) in combos {
                    let concl = sub.apply(&mut self.store, schema.conclusion);
                    derived.extend(envs.into_iter().map(|e| (concl, e)));
                }
            }
            for (concl, e) in derived {
                if !self.accept_conclusion(concl) {
                    continue;
                }
                self.stats.forward_firings += 1;
                if self.record_support(concl, OriginTag::Der, e.clone()) {
                    queue.push_back((concl, e));
                }
            }
        }
        self.pending.iter().skip(start).copied().collect()
    }

    /// Forward inference from `p`: fires every applicable rule to
    /// quiescence and returns the propositions newly believed as a result.
    pub fn tell_forward(&mut self, p: TermId) -> Vec<TermId> {
        let seeds: Vec<(TermId, OriginSet)> =
            self.all_origins(p).into_iter().map(|o| (p, o)).collect();
        let mut fresh = self.propagate(seeds);
        fresh.retain(|q| *q != p);
        self.process_pending();
        fresh.retain(|q| self.is_asserted(*q));
        fresh
    }

    /// Applies the elimination rules of a ground `rule` to a snapshot of
    /// known origin sets. Pure with respect to beliefs.
    pub fn eliminate_connective(
        &mut self,
        rule: TermId,
        known: &dyn Fn(TermId) -> Vec<OriginSet>,
    ) -> Vec<(TermId, OriginSet)> {
        let Ok(rs) = compile(&mut self.store, rule) else {
            return Vec::new();
        };
        let rule_envs = known(rule);
        let mut out: Vec<(TermId, OriginSet)> = Vec::new();
        for schema in &rs.schemas {
            let mut envs = rule_envs.clone();
            for p in &schema.premises {
                envs = product(&envs, &known(*p));
            }
            for e in envs {
                if !out.contains(&(schema.conclusion, e.clone())) {
                    out.push((schema.conclusion, e));
                }
            }
        }
        out
    }

    // --------------------------------------------------------------- backward

    /// Backward inference. Every answer is believed in the context under its
    /// bindings. Falls back to `ifdo` acting rules once when a ground goal has
    /// no answers.
    pub fn ask(&mut self, goal: TermId) -> Vec<Answer> {
        let answers = self.ask_deductive(goal);
        if !answers.is_empty() || !self.store.get(goal).is_ground() {
            return answers;
        }
        if self.on_query_stuck(goal) {
            self.ask_deductive(goal)
        } else {
            answers
        }
    }

    /// Backward inference without the acting fallback.
    pub fn ask_deductive(&mut self, goal: TermId) -> Vec<Answer> {
        let mut table = GoalTable::default();
        let canonical = self.solve_goal(&mut table, goal);
        self.record_table(&table);
        self.process_pending();
        let vars = self.store.free_vars(goal);
        let found: Vec<TermId> = table.entries[&canonical].answers.keys().copied().collect();
        let mut out = Vec::new();
        for prop in found {
            if !self.is_asserted(prop) {
                continue;
            }
            let mut sub = Substitution::new();
            if !match_into(&self.store, goal, prop, &mut sub) {
                continue;
            }
            let bindings = sub.restrict(&mut self.store, &vars);
            out.push(Answer {
                proposition: prop,
                bindings,
                supports: self.status(prop).supports,
            });
        }
        out
    }

    /// Runs the table to a fixpoint for `goal` and returns its canonical key.
    pub fn solve_goal(&mut self, table: &mut GoalTable, goal: TermId) -> TermId {
        let canonical = self.canonical_goal(goal);
        self.solve(table, canonical, 0);
        loop {
            table.changed = false;
            let mut i = 0;
            while i < table.order.len() {
                let g = table.order[i];
                self.evaluate(table, g);
                i += 1;
            }
            if !table.changed {
                break;
            }
        }
        for e in table.entries.values_mut() {
            e.complete = true;
        }
        canonical
    }

    fn solve(&mut self, table: &mut GoalTable, pattern: TermId, depth: usize) -> Vec<(TermId, Vec<OriginSet>)> {
        let canonical = self.canonical_goal(pattern);
        if let Entry::Vacant(slot) = table.entries.entry(canonical) {
            if depth > self.config.depth_cap {
                self.stats.depth_cap_hits += 1;
                return Vec::new();
            }
            self.stats.tables_created += 1;
            slot.insert(TableEntry {
                depth,
                ..Default::default()
            });
            table.order.push(canonical);
            self.evaluate(table, canonical);
        }
        table.entries[&canonical]
            .answers
            .iter()
            .map(|(k, v)| (*k, v.clone()))
            .collect()
    }

    fn evaluate(&mut self, table: &mut GoalTable, goal: TermId) {
        let depth = table.entries[&goal].depth;
        let mut found: Vec<(TermId, OriginSet)> = Vec::new();
        // believed propositions
        for fact in self.fact_candidates(goal) {
            let mut sub = Substitution::new();
            if match_into(&self.store, goal, fact, &mut sub) {
                for e in self.in_context(fact) {
                    found.push((fact, e));
                }
            }
        }
        // rules concluding something that unifies with the goal
        let mut uses = self.rules.any_conclusion.clone();
        if let Some(k) = head_key(&self.store, goal) {
            if let Some(v) = self.rules.by_conclusion.get(&k) {
                uses.extend(v.iter().copied());
            }
        }
        for (rule, si) in uses {
            let rule_envs = self.in_context(rule);
            if rule_envs.is_empty() {
                continue;
            }
            let schema = self.schema(rule, si);
            let mut sub = Substitution::new();
            if !unify_into(&self.store, goal, schema.conclusion, &mut sub) {
                continue;
            }
            let mut combos = Vec::new();
            self.join_goals(table, &schema.premises, 0, sub, rule_envs, depth + 1, &mut combos);
            for (sub, envs) in combos {
                let concl = sub.apply(&mut self.store, goal);
                if !self.store.get(concl).is_ground() && !self.store.is_closed(concl) {
                    continue;
                }
                found.extend(envs.into_iter().map(|e| (concl, e)));
            }
        }
        let entry = table.entries.get_mut(&goal).expect("goal is tabled");
        for (p, e) in found {
            if insert_minimal(entry.answers.entry(p).or_default(), e) {
                table.changed = true;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn join_goals(
        &mut self,
        table: &mut GoalTable,
        premises: &[TermId],
        k: usize,
        sub: Substitution,
        envs: Vec<OriginSet>,
        depth: usize,
        out: &mut Combos,
    ) {
        if envs.is_empty() {
            return;
        }
        if k == premises.len() {
            out.push((sub, envs));
            return;
        }
        let pattern = sub.apply(&mut self.store, premises[k]);
        for (answer, label) in self.solve(table, pattern, depth) {
            let mut s = sub.clone();
            if !match_into(&self.store, pattern, answer, &mut s) {
                continue;
            }
            let next = product(&envs, &label);
            self.join_goals(table, premises, k + 1, s, next, depth, out);
        }
    }

    /// Stores every tabled answer as a derived belief.
    fn record_table(&mut self, table: &GoalTable) {
        for g in &table.order {
            let entry = &table.entries[g];
            for (p, envs) in &entry.answers {
                if !self.store.get(*p).is_ground() {
                    continue;
                }
                for e in envs {
                    self.record_support(*p, OriginTag::Der, e.clone());
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kb() -> Engine {
        Engine::default()
    }

    #[test]
    fn modus_ponens_by_backward_chaining() {
        let mut e = kb();
        let x = e.store_mut().var("x");
        let man_x = e.app("man", vec![x]);
        let mortal_x = e.app("mortal", vec![x]);
        let imp = e.store_mut().implies(man_x, mortal_x);
        let rule = e.store_mut().forall(vec![x], imp).unwrap();
        let soc = e.atom("socrates");
        let man_s = e.app("man", vec![soc]);
        e.assert_hyp(rule).unwrap();
        e.assert_hyp(man_s).unwrap();
        let mortal_s = e.app("mortal", vec![soc]);
        let answers = e.ask(mortal_s);
        assert_eq!(answers.len(), 1);
        let origin: OriginSet = [rule, man_s].into_iter().collect();
        assert_eq!(
            answers[0].supports,
            vec![SupportRecord {
                tag: OriginTag::Der,
                origin
            }]
        );
    }

    #[test]
    fn absent_atom_has_no_answers() {
        let mut e = kb();
        let a = e.atom("a");
        assert!(e.ask(a).is_empty());
    }

    #[test]
    fn forward_implication() {
        let mut e = kb();
        let a = e.atom("a");
        let c = e.atom("c");
        let r = e.store_mut().implies(a, c);
        e.assert_hyp(r).unwrap();
        e.assert_hyp(a).unwrap();
        assert_eq!(e.tell_forward(a), vec![c]);
        assert!(e.is_asserted(c));
    }

    #[test]
    fn forward_xor_derives_negation() {
        let mut e = kb();
        let a = e.atom("a");
        let b = e.atom("b");
        let xor = e.store_mut().andor(1, 1, vec![a, b]).unwrap();
        e.assert_hyp(xor).unwrap();
        e.assert_hyp(a).unwrap();
        let nb = e.negation_of(b).unwrap();
        assert_eq!(e.tell_forward(a), vec![nb]);
    }

    #[test]
    fn forward_from_unrelated_fact_derives_nothing() {
        let mut e = kb();
        let a = e.atom("a");
        let b = e.atom("b");
        let c = e.atom("c");
        let r = e.store_mut().implies(a, c);
        e.assert_hyp(r).unwrap();
        e.assert_hyp(b).unwrap();
        assert!(e.tell_forward(b).is_empty());
    }

    #[test]
    fn negation_rule_with_its_argument_derives_nothing_but_contradicts() {
        let mut e = kb();
        let p = e.atom("p");
        let np = e.negation_of(p).unwrap();
        e.suspend_revision(true);
        e.assert_hyp(np).unwrap();
        e.assert_hyp(p).unwrap();
        assert!(e.tell_forward(np).is_empty());
        assert_eq!(e.unresolved_contradictions(), vec![(p, np)]);
    }

    #[test]
    fn conjunction_yields_members() {
        let mut e = kb();
        let a = e.atom("a");
        let b = e.atom("b");
        let both = e.store_mut().andor(2, 2, vec![a, b]).unwrap();
        e.assert_hyp(both).unwrap();
        assert_eq!(e.tell_forward(both), vec![a, b]);
    }

    #[test]
    fn iff_derives_partner() {
        let mut e = kb();
        let a = e.atom("a");
        let b = e.atom("b");
        let iff = e.store_mut().thresh(1, 1, vec![a, b]).unwrap();
        e.assert_hyp(iff).unwrap();
        e.assert_hyp(a).unwrap();
        assert_eq!(e.tell_forward(a), vec![b]);
        // and backward
        let mut e2 = kb();
        let a = e2.atom("a");
        let b = e2.atom("b");
        let iff = e2.store_mut().thresh(1, 1, vec![a, b]).unwrap();
        e2.assert_hyp(iff).unwrap();
        e2.assert_hyp(a).unwrap();
        assert_eq!(e2.ask(b).len(), 1);
    }

    #[test]
    fn eliminate_on_snapshot() {
        let mut e = kb();
        let a = e.atom("a");
        let b = e.atom("b");
        let xor = e.store_mut().andor(1, 1, vec![a, b]).unwrap();
        let nb = e.negation_of(b).unwrap();
        let known = move |t: TermId| {
            if t == xor || t == a {
                vec![OriginSet::singleton(t)]
            } else {
                vec![]
            }
        };
        let out = e.eliminate_connective(xor, &known);
        assert_eq!(out, vec![(nb, [xor, a].into_iter().collect())]);
    }

    #[test]
    fn canonical_goals_share_variants() {
        let mut e = kb();
        let x = e.store_mut().var("x");
        let y = e.store_mut().var("y");
        let a = e.atom("a");
        let g1 = e.app("p", vec![x, a, y]);
        let g2 = e.app("p", vec![y, a, x]);
        assert_eq!(e.canonical_goal(g1), e.canonical_goal(g2));
        let z0 = e.store_mut().var("_0");
        let z1 = e.store_mut().var("_1");
        let g3 = e.app("p", vec![z1, a, z0]);
        assert_eq!(e.canonical_goal(g3), e.canonical_goal(g1));
    }

    #[test]
    fn free_query_variables_are_bound() {
        let mut e = kb();
        let learning = e.atom("learning");
        let fl = e.app("fun", vec![learning]);
        e.assert_hyp(fl).unwrap();
        let x = e.store_mut().var("x");
        let fx = e.app("fun", vec![x]);
        let answers = e.ask(fx);
        assert_eq!(answers.len(), 1);
        assert_eq!(answers[0].bindings.get(x), Some(learning));
    }
}
