//! Acting: primitive act handlers, `whendo`/`ifdo` rules and the built-in
//! mental acts.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::engine::{Engine, EngineError, Event};
use crate::term::{Functor, TermId, TermStore};
use crate::unify::match_into;

/// Effect of a primitive act. Receives the engine and the ground arguments.
pub type ActHandler = Rc<dyn Fn(&mut Engine, &[TermId]) -> Result<(), String>>;

/// Names the engine performs itself.
pub const RESERVED_ACTS: [&str; 3] = ["sequence", "believe", "disbelieve"];

#[derive(Clone, Default)]
pub struct ActRegistry {
    handlers: HashMap<String, (usize, ActHandler)>,
}

impl fmt::Debug for ActRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<&String> = self.handlers.keys().collect();
        names.sort();
        f.debug_struct("ActRegistry").field("acts", &names).finish()
    }
}

impl ActRegistry {
    pub fn contains(&self, name: &str) -> bool {
        RESERVED_ACTS.contains(&name) || self.handlers.contains_key(name)
    }

    pub fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.handlers.keys().cloned().collect();
        v.sort();
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActRuleKind {
    Whendo,
    Ifdo,
}

/// `whendo(trigger, act)` or `ifdo(trigger, act)`, possibly under `all`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActRule {
    pub kind: ActRuleKind,
    /// The proposition the rule is stored as.
    pub rule: TermId,
    pub trigger: TermId,
    pub act: TermId,
    pub vars: Vec<TermId>,
}

impl ActRule {
    pub fn read(store: &TermStore, p: TermId) -> Option<ActRule> {
        let mut vars = Vec::new();
        let mut body = p;
        while let Functor::All(n) = *store.get(body).functor() {
            let args = store.get(body).args();
            vars.extend_from_slice(&args[..n as usize]);
            body = args[n as usize];
        }
        let term = store.get(body);
        let kind = match (term.name(), term.args().len()) {
            (Some("whendo"), 2) => ActRuleKind::Whendo,
            (Some("ifdo"), 2) => ActRuleKind::Ifdo,
            _ => return None,
        };
        Some(ActRule {
            kind,
            rule: p,
            trigger: term.args()[0],
            act: term.args()[1],
            vars,
        })
    }
}

impl Engine {
    /// Makes acts named `name` performable.
    pub fn register_primitive(
        &mut self,
        name: &str,
        arity: usize,
        handler: ActHandler,
    ) -> Result<(), EngineError> {
        if self.acts.contains(name) {
            return Err(EngineError::DuplicateAct(name.to_string()));
        }
        self.acts.handlers.insert(name.to_string(), (arity, handler));
        Ok(())
    }

    /// Registers `cross`, `lookat` and `say`, which only log themselves.
    pub fn register_default_acts(&mut self) {
        for name in ["cross", "lookat", "say"] {
            if !self.acts.contains(name) {
                let noop: ActHandler = Rc::new(|_, _| Ok(()));
                self.acts.handlers.insert(name.to_string(), (1, noop));
            }
        }
    }

    pub fn acts(&self) -> &ActRegistry {
        &self.acts
    }

    /// Performs a ground act.
    pub fn perform(&mut self, act: TermId) -> Result<(), EngineError> {
        if !self.store.get(act).is_ground() {
            return Err(EngineError::NonGroundAct(self.display(act)));
        }
        let term = self.store.get(act);
        let args = term.args().to_vec();
        let Some(name) = term.name().map(str::to_string) else {
            return Err(EngineError::UnknownAct(self.display(act)));
        };
        match name.as_str() {
            "sequence" => {
                for a in args {
                    self.perform(a)?;
                }
                Ok(())
            }
            "believe" | "disbelieve" => {
                if args.len() != 1 {
                    return Err(EngineError::ActArity {
                        name,
                        expected: 1,
                        found: args.len(),
                    });
                }
                self.events.push(Event::Act(act));
                if name == "believe" {
                    self.assert_hyp(args[0]).map(|_| ())
                } else if self.ctx.contains(args[0]) {
                    let report = self.retract_hyp(args[0])?;
                    self.events.push(Event::Retracted(report));
                    Ok(())
                } else {
                    Err(EngineError::NotAHypothesis(self.display(args[0])))
                }
            }
            _ => {
                let Some((arity, handler)) = self.acts.handlers.get(&name).cloned() else {
                    return Err(EngineError::UnknownAct(name));
                };
                if arity != args.len() {
                    return Err(EngineError::ActArity {
                        name,
                        expected: arity,
                        found: args.len(),
                    });
                }
                self.events.push(Event::Act(act));
                handler(self, &args).map_err(|message| EngineError::ActFailed {
                    act: self.display(act),
                    message,
                })
            }
        }
    }

    fn perform_logged(&mut self, act: TermId) -> bool {
        match self.perform(act) {
            Ok(()) => true,
            Err(e) => {
                self.events.push(Event::ActFailed {
                    act,
                    message: e.to_string(),
                });
                false
            }
        }
    }

    fn matching_rules(&mut self, kind: ActRuleKind, p: TermId) -> Vec<(TermId, TermId)> {
        let mut rules: Vec<ActRule> = self
            .act_rules
            .iter()
            .filter(|r| r.kind == kind && self.is_asserted(r.rule))
            .cloned()
            .collect();
        rules.sort_by_key(|r| r.rule);
        let mut out = Vec::new();
        for r in rules {
            let mut sub = crate::unify::Substitution::new();
            if match_into(&self.store, r.trigger, p, &mut sub) {
                let act = sub.apply(&mut self.store, r.act);
                out.push((r.rule, act));
            }
        }
        out
    }

    /// Fires `whendo` rules triggered by the new belief `p`. Each rule fires
    /// at most once per triggering belief, and only for beliefs that arrived
    /// after the rule.
    pub fn on_belief_added(&mut self, p: TermId) -> Vec<TermId> {
        let mut performed = Vec::new();
        let Some(seq) = self.existing_wff_number(p) else {
            return performed;
        };
        for (rule, act) in self.matching_rules(ActRuleKind::Whendo, p) {
            let rule_seq = self.existing_wff_number(rule).unwrap_or(usize::MAX);
            if rule_seq >= seq || !self.performed.insert((rule, p)) {
                continue;
            }
            if self.perform_logged(act) {
                performed.push(act);
            }
        }
        performed
    }

    /// Performs the acts of `ifdo` rules whose trigger matches the ground
    /// `goal`. Returns whether any act ran.
    pub fn on_query_stuck(&mut self, goal: TermId) -> bool {
        if !self.store.get(goal).is_ground() {
            return false;
        }
        let mut any = false;
        for (_, act) in self.matching_rules(ActRuleKind::Ifdo, goal) {
            any |= self.perform_logged(act);
        }
        any
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;

    fn acts_of(e: &mut Engine) -> Vec<String> {
        e.take_events()
            .into_iter()
            .filter_map(|ev| match ev {
                Event::Act(a) => Some(e.display(a)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn whendo_fires_on_forward_belief() {
        let mut e = Engine::default();
        e.register_default_acts();
        let light = e.atom("light1");
        let street = e.atom("street1");
        let green = e.app("green", vec![light]);
        let cross = e.app("cross", vec![street]);
        let rule = e.app("whendo", vec![green, cross]);
        e.assert_hyp(rule).unwrap();
        e.assert_hyp(green).unwrap();
        e.tell_forward(green);
        assert_eq!(acts_of(&mut e), vec!["cross(street1)"]);
        // replay performs nothing
        e.assert_hyp(green).unwrap();
        e.tell_forward(green);
        assert!(acts_of(&mut e).is_empty());
    }

    #[test]
    fn no_rules_no_acts() {
        let mut e = Engine::default();
        let a = e.atom("a");
        e.assert_hyp(a).unwrap();
        assert!(acts_of(&mut e).is_empty());
    }

    #[test]
    fn earlier_beliefs_do_not_trigger() {
        let mut e = Engine::default();
        e.register_default_acts();
        let light = e.atom("light1");
        let green = e.app("green", vec![light]);
        let look = e.app("lookat", vec![light]);
        e.assert_hyp(green).unwrap();
        let rule = e.app("whendo", vec![green, look]);
        e.assert_hyp(rule).unwrap();
        assert!(acts_of(&mut e).is_empty());
    }

    #[test]
    fn two_rules_fire_in_id_order() {
        let mut e = Engine::default();
        e.register_default_acts();
        let light = e.atom("light1");
        let green = e.app("green", vec![light]);
        let look = e.app("lookat", vec![light]);
        let say = e.app("say", vec![light]);
        let r1 = e.app("whendo", vec![green, say]);
        let r2 = e.app("whendo", vec![green, look]);
        e.assert_hyp(r2).unwrap();
        e.assert_hyp(r1).unwrap();
        e.assert_hyp(green).unwrap();
        assert_eq!(acts_of(&mut e), vec!["say(light1)", "lookat(light1)"]);
    }

    #[test]
    fn quantified_whendo() {
        let mut e = Engine::default();
        e.register_default_acts();
        let x = e.store_mut().var("x");
        let gx = e.app("green", vec![x]);
        let cx = e.app("cross", vec![x]);
        let body = e.app("whendo", vec![gx, cx]);
        let rule = e.store_mut().forall(vec![x], body).unwrap();
        e.assert_hyp(rule).unwrap();
        let s = e.atom("s");
        let gs = e.app("green", vec![s]);
        e.assert_hyp(gs).unwrap();
        assert_eq!(acts_of(&mut e), vec!["cross(s)"]);
    }

    #[test]
    fn ifdo_then_reask() {
        let mut e = Engine::default();
        let light = e.atom("light1");
        let green = e.app("green", vec![light]);
        let calls = Rc::new(RefCell::new(0));
        let c2 = calls.clone();
        e.register_primitive(
            "lookat",
            1,
            Rc::new(move |eng: &mut Engine, args: &[TermId]| {
                *c2.borrow_mut() += 1;
                let g = eng.app("green", vec![args[0]]);
                eng.perform(eng.store().lookup(&Functor::sym("believe"), &[g]).unwrap())
                    .map_err(|e| e.to_string())
            }),
        )
        .unwrap();
        let look = e.app("lookat", vec![light]);
        e.app("believe", vec![green]);
        let rule = e.app("ifdo", vec![green, look]);
        e.assert_hyp(rule).unwrap();
        assert_eq!(e.ask(green).len(), 1);
        assert_eq!(*calls.borrow(), 1);
    }

    #[test]
    fn no_ifdo_rule() {
        let mut e = Engine::default();
        let g = e.atom("g");
        assert!(!e.on_query_stuck(g));
        assert!(e.ask(g).is_empty());
    }

    #[test]
    fn registry_errors() {
        let mut e = Engine::default();
        let noop: ActHandler = Rc::new(|_, _| Ok(()));
        e.register_primitive("lookat", 1, noop.clone()).unwrap();
        assert_eq!(
            e.register_primitive("lookat", 1, noop.clone()),
            Err(EngineError::DuplicateAct("lookat".into()))
        );
        assert!(e.register_primitive("believe", 1, noop).is_err());
        let x = e.atom("x");
        let jump = e.app("jump", vec![x]);
        assert_eq!(e.perform(jump), Err(EngineError::UnknownAct("jump".into())));
    }

    #[test]
    fn disbelieve_needs_a_hypothesis() {
        let mut e = Engine::default();
        let a = e.atom("a");
        let c = e.atom("c");
        let r = e.store_mut().implies(a, c);
        e.assert_hyp(r).unwrap();
        e.assert_hyp(a).unwrap();
        e.ask(c);
        let d = e.app("disbelieve", vec![c]);
        assert!(matches!(e.perform(d), Err(EngineError::NotAHypothesis(_))));
        let d = e.app("disbelieve", vec![a]);
        e.perform(d).unwrap();
        assert!(!e.is_asserted(c));
    }
}
