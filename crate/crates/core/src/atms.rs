//! Assumption-based support tracking.
//!
//! Each proposition carries a label: the ⊆-minimal origin sets (sets of
//! hypotheses) from which it has been obtained. A proposition is believed in
//! a context when one of its origin sets lies inside the context. Retracting
//! a hypothesis only shrinks the context; labels are kept, so re-asserting
//! the hypothesis restores everything that depended on it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::term::TermId;

/// A sorted, duplicate-free set of hypotheses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OriginSet(Vec<TermId>);

impl OriginSet {
    pub fn empty() -> Self {
        OriginSet(Vec::new())
    }

    pub fn singleton(h: TermId) -> Self {
        OriginSet(vec![h])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = TermId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[TermId] {
        &self.0
    }

    pub fn contains(&self, h: TermId) -> bool {
        self.0.binary_search(&h).is_ok()
    }

    pub fn is_subset(&self, other: &OriginSet) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut rest = other.0.iter();
        'outer: for x in &self.0 {
            for y in rest.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_within(&self, hyps: &BTreeSet<TermId>) -> bool {
        self.0.iter().all(|h| hyps.contains(h))
    }

    pub fn union(&self, other: &OriginSet) -> OriginSet {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        OriginSet(out)
    }
}

impl FromIterator<TermId> for OriginSet {
    fn from_iter<I: IntoIterator<Item = TermId>>(iter: I) -> Self {
        let mut v: Vec<TermId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        OriginSet(v)
    }
}

/// Keeps `sets` ⊆-minimal after inserting `new`. Returns false if `new` was
/// subsumed by an existing member.
pub fn insert_minimal(sets: &mut Vec<OriginSet>, new: OriginSet) -> bool {
    if sets.iter().any(|s| s.is_subset(&new)) {
        return false;
    }
    sets.retain(|s| !new.is_subset(s));
    sets.push(new);
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OriginTag {
    Hyp,
    Der,
}

impl fmt::Display for OriginTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OriginTag::Hyp => "hyp",
            OriginTag::Der => "der",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportRecord {
    pub tag: OriginTag,
    pub origin: OriginSet,
}

/// A named set of hypotheses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub name: String,
    pub hyps: BTreeSet<TermId>,
}

impl Context {
    pub fn new(name: impl Into<String>) -> Self {
        Context {
            name: name.into(),
            hyps: BTreeSet::new(),
        }
    }

    pub fn contains(&self, h: TermId) -> bool {
        self.hyps.contains(&h)
    }
}

impl Default for Context {
    fn default() -> Self {
        Context::new("default")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssertionStatus {
    pub asserted: bool,
    /// Support records whose origin set lies inside the context.
    pub supports: Vec<SupportRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionReport {
    pub removed: TermId,
    /// Propositions (other than `removed`) that were believed before the
    /// retraction and are not believed after it, in id order.
    pub dropped: Vec<TermId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtmsError {
    #[error("{0} is not a hypothesis of the context")]
    NotAHypothesis(TermId),
}

/// Label store shared by all contexts.
#[derive(Clone, Debug, Default)]
pub struct Supports {
    labels: HashMap<TermId, Vec<SupportRecord>>,
    // hypothesis -> propositions whose label mentions it
    mentions: HashMap<TermId, BTreeSet<TermId>>,
}

impl Supports {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self, p: TermId) -> &[SupportRecord] {
        self.labels.get(&p).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Every proposition that has ever received support, in id order.
    pub fn known(&self) -> Vec<TermId> {
        let mut v: Vec<TermId> = self.labels.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn has_support(&self, p: TermId) -> bool {
        self.labels.contains_key(&p)
    }

    pub fn is_hypothesis_record(&self, p: TermId) -> bool {
        self.records(p).iter().any(|r| r.tag == OriginTag::Hyp)
    }

    /// Origin sets of `p` (all tags).
    pub fn origins(&self, p: TermId) -> impl Iterator<Item = &OriginSet> {
        self.records(p).iter().map(|r| &r.origin)
    }

    pub fn is_asserted(&self, p: TermId, ctx: &Context) -> bool {
        self.origins(p).any(|o| o.is_within(&ctx.hyps))
    }

    pub fn status(&self, p: TermId, ctx: &Context) -> AssertionStatus {
        let supports: Vec<SupportRecord> = self
            .records(p)
            .iter()
            .filter(|r| r.origin.is_within(&ctx.hyps))
            .cloned()
            .collect();
        AssertionStatus {
            asserted: !supports.is_empty(),
            supports,
        }
    }

    /// Propositions whose label mentions hypothesis `h`.
    pub fn dependents(&self, h: TermId) -> Vec<TermId> {
        self.mentions
            .get(&h)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default()
    }

    /// Records `p` as a hypothesis and adds it to `ctx`. Idempotent.
    pub fn assert_hyp(&mut self, p: TermId, ctx: &mut Context) -> AssertionStatus {
        self.add(p, OriginTag::Hyp, OriginSet::singleton(p));
        ctx.hyps.insert(p);
        self.status(p, ctx)
    }

    /// Records `⟨hyp, {p}⟩` without touching any context.
    pub fn add_hypothesis_record(&mut self, p: TermId) -> bool {
        self.add(p, OriginTag::Hyp, OriginSet::singleton(p))
    }

    /// Records a derived origin set for `p`, keeping the label ⊆-minimal.
    /// Returns true if the label changed.
    pub fn add_derived_support(&mut self, p: TermId, origin: OriginSet) -> bool {
        self.add(p, OriginTag::Der, origin)
    }

    fn add(&mut self, p: TermId, tag: OriginTag, origin: OriginSet) -> bool {
        let label = self.labels.entry(p).or_default();
        if label.iter().any(|r| r.origin.is_subset(&origin)) {
            return false;
        }
        label.retain(|r| !origin.is_subset(&r.origin));
        for h in origin.iter() {
            self.mentions.entry(h).or_default().insert(p);
        }
        label.push(SupportRecord { tag, origin });
        label.sort();
        true
    }

    /// Removes `h` from `ctx`; labels are retained.
    pub fn retract_hyp(
        &mut self,
        h: TermId,
        ctx: &mut Context,
    ) -> Result<RetractionReport, AtmsError> {
        if !ctx.hyps.contains(&h) {
            return Err(AtmsError::NotAHypothesis(h));
        }
        let affected = self.dependents(h);
        let before: Vec<TermId> = affected
            .iter()
            .copied()
            .filter(|p| self.is_asserted(*p, ctx))
            .collect();
        ctx.hyps.remove(&h);
        let dropped = before
            .into_iter()
            .filter(|p| *p != h && !self.is_asserted(*p, ctx))
            .collect();
        Ok(RetractionReport { removed: h, dropped })
    }

    /// Checks that every label is an antichain under ⊆.
    pub fn is_minimal(&self) -> bool {
        self.labels.values().all(|label| {
            label.iter().enumerate().all(|(i, a)| {
                label
                    .iter()
                    .enumerate()
                    .all(|(j, b)| i == j || !a.origin.is_subset(&b.origin))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<TermId> {
        (0..n).map(TermId::from_index).collect()
    }

    #[test]
    fn hypothesis_support_is_itself() {
        let t = ids(1);
        let mut s = Supports::new();
        let mut ctx = Context::default();
        let st = s.assert_hyp(t[0], &mut ctx);
        assert!(st.asserted);
        assert_eq!(
            st.supports,
            vec![SupportRecord {
                tag: OriginTag::Hyp,
                origin: OriginSet::singleton(t[0])
            }]
        );
        let again = s.assert_hyp(t[0], &mut ctx);
        assert_eq!(st, again);
        assert_eq!(s.records(t[0]).len(), 1);
    }

    #[test]
    fn derived_support_on_three_term_kb() {
        let t = ids(3);
        let (a, r, c) = (t[0], t[1], t[2]);
        let mut s = Supports::new();
        let mut ctx = Context::default();
        s.assert_hyp(a, &mut ctx);
        s.assert_hyp(r, &mut ctx);
        s.add_derived_support(c, [a, r].into_iter().collect());
        assert_eq!(
            s.records(c),
            &[SupportRecord {
                tag: OriginTag::Der,
                origin: [a, r].into_iter().collect()
            }]
        );
    }

    #[test]
    fn subset_discards_superset() {
        let t = ids(3);
        let (a, r, c) = (t[0], t[1], t[2]);
        let mut s = Supports::new();
        assert!(s.add_derived_support(c, [a, r].into_iter().collect()));
        assert!(s.add_derived_support(c, [a].into_iter().collect()));
        assert_eq!(s.origins(c).cloned().collect::<Vec<_>>(), vec![OriginSet::singleton(a)]);
        assert!(!s.add_derived_support(c, [a, r].into_iter().collect()));
    }

    #[test]
    fn incomparable_sets_are_kept() {
        let t = ids(4);
        let (a, b, r, c) = (t[0], t[1], t[2], t[3]);
        let mut s = Supports::new();
        s.add_derived_support(c, [a, r].into_iter().collect());
        s.add_derived_support(c, [b, r].into_iter().collect());
        assert_eq!(s.records(c).len(), 2);
        assert!(s.is_minimal());
    }

    #[test]
    fn is_asserted_needs_whole_origin() {
        let t = ids(3);
        let (h1, h2, c) = (t[0], t[1], t[2]);
        let mut s = Supports::new();
        let mut ctx = Context::default();
        s.assert_hyp(h1, &mut ctx);
        s.add_derived_support(c, [h1, h2].into_iter().collect());
        assert!(s.is_asserted(h1, &ctx));
        assert!(!s.is_asserted(c, &ctx));
    }

    #[test]
    fn retraction_drops_sole_dependents() {
        let t = ids(2);
        let (h, c) = (t[0], t[1]);
        let mut s = Supports::new();
        let mut ctx = Context::default();
        s.assert_hyp(h, &mut ctx);
        s.add_derived_support(c, OriginSet::singleton(h));
        let rep = s.retract_hyp(h, &mut ctx).unwrap();
        assert_eq!(rep, RetractionReport { removed: h, dropped: vec![c] });
        assert!(!s.is_asserted(c, &ctx));
        // supports survive; re-assertion restores the belief
        s.assert_hyp(h, &mut ctx);
        assert!(s.is_asserted(c, &ctx));
    }

    #[test]
    fn redundant_support_survives_retraction() {
        let t = ids(3);
        let (h1, h2, c) = (t[0], t[1], t[2]);
        let mut s = Supports::new();
        let mut ctx = Context::default();
        s.assert_hyp(h1, &mut ctx);
        s.assert_hyp(h2, &mut ctx);
        s.add_derived_support(c, OriginSet::singleton(h1));
        s.add_derived_support(c, OriginSet::singleton(h2));
        let rep = s.retract_hyp(h1, &mut ctx).unwrap();
        assert!(rep.dropped.is_empty());
        assert!(s.is_asserted(c, &ctx));
    }

    #[test]
    fn retracting_a_non_hypothesis_fails() {
        let t = ids(1);
        let mut s = Supports::new();
        let mut ctx = Context::default();
        assert_eq!(
            s.retract_hyp(t[0], &mut ctx),
            Err(AtmsError::NotAHypothesis(t[0]))
        );
    }

    #[test]
    fn subset_and_union() {
        let t = ids(5);
        let a: OriginSet = [t[0], t[2]].into_iter().collect();
        let b: OriginSet = [t[0], t[1], t[2]].into_iter().collect();
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(OriginSet::empty().is_subset(&a));
        assert_eq!(a.union(&b), b);
        let c: OriginSet = [t[4]].into_iter().collect();
        assert!(!c.is_subset(&b));
        assert_eq!(a.union(&c).len(), 3);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn labels_are_minimal_elements(sets in proptest::collection::vec(
            proptest::collection::btree_set(0usize..6, 1..4), 1..12)) {
            let p = TermId::from_index(100);
            let mut s = Supports::new();
            let all: Vec<OriginSet> = sets.iter()
                .map(|set| set.iter().map(|i| TermId::from_index(*i)).collect())
                .collect();
            for o in &all {
                s.add_derived_support(p, o.clone());
            }
            // brute force: minimal elements of everything added
            let mut expected: Vec<OriginSet> = all.iter()
                .filter(|o| !all.iter().any(|q| q.is_subset(o) && q != *o))
                .cloned()
                .collect();
            expected.sort();
            expected.dedup();
            let mut got: Vec<OriginSet> = s.origins(p).cloned().collect();
            got.sort();
            prop_assert_eq!(got, expected);
            prop_assert!(s.is_minimal());
        }
    }
}
