//! Unification and matching over interned terms.

use std::collections::BTreeMap;

use crate::term::{Functor, TermId, TermStore};

/// A finite map from variables to terms.
///
/// Bindings may be chained while a unification or join is in progress;
/// [`Substitution::apply`] follows chains, and [`Substitution::resolved`]
/// produces the idempotent form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    bindings: BTreeMap<TermId, TermId>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, var: TermId) -> Option<TermId> {
        self.bindings.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, TermId)> + '_ {
        self.bindings.iter().map(|(k, v)| (*k, *v))
    }

    pub fn bind(&mut self, var: TermId, value: TermId) {
        self.bindings.insert(var, value);
    }

    fn walk(&self, store: &TermStore, mut t: TermId) -> TermId {
        while store.get(t).is_variable() {
            match self.bindings.get(&t) {
                Some(next) if *next != t => t = *next,
                _ => break,
            }
        }
        t
    }

    /// Applies the substitution, interning the result. Variables bound by an
    /// `all` inside `t` are left alone.
    pub fn apply(&self, store: &mut TermStore, t: TermId) -> TermId {
        if self.bindings.is_empty() {
            return t;
        }
        self.apply_scoped(store, t, &mut Vec::new())
    }

    fn apply_scoped(&self, store: &mut TermStore, t: TermId, bound: &mut Vec<TermId>) -> TermId {
        let term = store.get(t);
        if term.is_ground() {
            return t;
        }
        if term.is_variable() {
            if bound.contains(&t) {
                return t;
            }
            let w = self.walk(store, t);
            if w == t {
                return t;
            }
            return self.apply_scoped(store, w, bound);
        }
        let functor = term.functor().clone();
        let args = term.args().to_vec();
        let mark = bound.len();
        if let Functor::All(n) = functor {
            bound.extend_from_slice(&args[..n as usize]);
        }
        let new_args: Vec<TermId> = args
            .iter()
            .map(|a| self.apply_scoped(store, *a, bound))
            .collect();
        bound.truncate(mark);
        if new_args == args {
            t
        } else {
            store.intern(functor, new_args)
        }
    }

    /// The idempotent equivalent of this substitution.
    pub fn resolved(&self, store: &mut TermStore) -> Substitution {
        let keys: Vec<TermId> = self.bindings.keys().copied().collect();
        let mut out = Substitution::new();
        for k in keys {
            let v = self.apply(store, k);
            if v != k {
                out.bind(k, v);
            }
        }
        out
    }

    /// Restricts the substitution to `vars`, resolving each binding.
    pub fn restrict(&self, store: &mut TermStore, vars: &[TermId]) -> Substitution {
        let mut out = Substitution::new();
        for v in vars {
            let value = self.apply(store, *v);
            if value != *v {
                out.bind(*v, value);
            }
        }
        out
    }
}

fn occurs(store: &TermStore, sub: &Substitution, var: TermId, t: TermId) -> bool {
    let t = sub.walk(store, t);
    if t == var {
        return true;
    }
    let term = store.get(t);
    if term.is_ground() || term.is_variable() {
        return false;
    }
    term.args().iter().any(|a| occurs(store, sub, var, *a))
}

/// Most general unifier of `a` and `b` with occurs check.
pub fn unify(store: &mut TermStore, a: TermId, b: TermId) -> Option<Substitution> {
    let mut sub = Substitution::new();
    if unify_into(store, a, b, &mut sub) {
        Some(sub.resolved(store))
    } else {
        None
    }
}

/// Extends `sub` so that it unifies `a` and `b`. On failure `sub` may hold
/// partial bindings and should be discarded.
pub fn unify_into(store: &TermStore, a: TermId, b: TermId, sub: &mut Substitution) -> bool {
    let a = sub.walk(store, a);
    let b = sub.walk(store, b);
    if a == b {
        return true;
    }
    let (ta, tb) = (store.get(a), store.get(b));
    if ta.is_variable() {
        if occurs(store, sub, a, b) {
            return false;
        }
        sub.bind(a, b);
        return true;
    }
    if tb.is_variable() {
        if occurs(store, sub, b, a) {
            return false;
        }
        sub.bind(b, a);
        return true;
    }
    if ta.is_ground() && tb.is_ground() {
        return false;
    }
    if ta.kind() != tb.kind() || ta.functor() != tb.functor() || ta.args().len() != tb.args().len() {
        return false;
    }
    // quantified terms only unify when identical
    if matches!(ta.functor(), Functor::All(_)) {
        return false;
    }
    let pairs: Vec<(TermId, TermId)> = ta
        .args()
        .iter()
        .copied()
        .zip(tb.args().iter().copied())
        .collect();
    pairs.into_iter().all(|(x, y)| unify_into(store, x, y, sub))
}

/// One-sided matching: binds variables of `pattern` so that it becomes
/// `target`. Variables inside `target` are treated as constants.
pub fn match_into(store: &TermStore, pattern: TermId, target: TermId, sub: &mut Substitution) -> bool {
    let p = store.get(pattern);
    if p.is_variable() {
        return match sub.get(pattern) {
            Some(bound) => bound == target,
            None => {
                sub.bind(pattern, target);
                true
            }
        };
    }
    if pattern == target {
        return true;
    }
    if p.is_ground() {
        return false;
    }
    let t = store.get(target);
    if t.kind() != p.kind() || t.functor() != p.functor() || t.args().len() != p.args().len() {
        return false;
    }
    if matches!(p.functor(), Functor::All(_)) {
        return false;
    }
    p.args()
        .iter()
        .zip(t.args())
        .all(|(x, y)| match_into(store, *x, *y, sub))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binds_variable_to_constant() {
        let mut s = TermStore::new();
        let x = s.var("x");
        let soc = s.atom("socrates");
        let mx = s.app("man", vec![x]);
        let ms = s.app("man", vec![soc]);
        let sub = unify(&mut s, mx, ms).unwrap();
        assert_eq!(sub.get(x), Some(soc));
        assert_eq!(sub.len(), 1);
    }

    #[test]
    fn clash_on_repeated_variable() {
        let mut s = TermStore::new();
        let x = s.var("x");
        let a = s.atom("a");
        let b = s.atom("b");
        let fxx = s.app("f", vec![x, x]);
        let fab = s.app("f", vec![a, b]);
        assert!(unify(&mut s, fxx, fab).is_none());
    }

    #[test]
    fn occurs_check_rejects_cycles() {
        let mut s = TermStore::new();
        let x = s.var("x");
        let gx = s.app("g", vec![x]);
        assert!(unify(&mut s, x, gx).is_none());
    }

    #[test]
    fn general_unifier_equalises_both_sides() {
        // f(x, g(y)) vs f(g(z), x)
        let mut s = TermStore::new();
        let x = s.var("x");
        let y = s.var("y");
        let z = s.var("z");
        let gy = s.app("g", vec![y]);
        let gz = s.app("g", vec![z]);
        let lhs = s.app("f", vec![x, gy]);
        let rhs = s.app("f", vec![gz, x]);
        let sub = unify(&mut s, lhs, rhs).unwrap();
        let l = sub.apply(&mut s, lhs);
        let r = sub.apply(&mut s, rhs);
        assert_eq!(l, r);
        // x ↦ g(z), y ↦ z up to renaming of z/y
        let xv = sub.apply(&mut s, x);
        assert_eq!(s.get(xv).name(), Some("g"));
        let yv = sub.apply(&mut s, y);
        let zv = sub.apply(&mut s, z);
        assert_eq!(yv, zv);
        // idempotent
        let twice = {
            let once = sub.apply(&mut s, lhs);
            sub.apply(&mut s, once)
        };
        assert_eq!(twice, l);
    }

    #[test]
    fn bound_variables_are_not_substituted() {
        let mut s = TermStore::new();
        let x = s.var("x");
        let a = s.atom("a");
        let px = s.app("p", vec![x]);
        let all = s.forall(vec![x], px).unwrap();
        let mut sub = Substitution::new();
        sub.bind(x, a);
        assert_eq!(sub.apply(&mut s, all), all);
        let pa = s.app("p", vec![a]);
        assert_eq!(sub.apply(&mut s, px), pa);
    }

    #[test]
    fn matching_treats_target_variables_as_constants() {
        let mut s = TermStore::new();
        let x = s.var("x");
        let y = s.var("y");
        let px = s.app("p", vec![x]);
        let py = s.app("p", vec![y]);
        let mut sub = Substitution::new();
        assert!(match_into(&s, px, py, &mut sub));
        assert_eq!(sub.get(x), Some(y));
        // the target's variable is not rebound
        assert!(!match_into(&s, px, py, &mut {
            let mut sub = Substitution::new();
            sub.bind(x, x);
            sub
        }));
    }
}
