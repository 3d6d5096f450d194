//! Contradiction detection and belief revision.
//!
//! A contradiction is a believed proposition together with its believed
//! negation. The candidates for retraction are the context hypotheses in
//! the origin sets of either side. Credibility comes from ordinary beliefs:
//! `Greater(p, q)` orders propositions directly, and `Source(s, p)` with
//! `Sgreater(s1, s2)` orders them through their sources.

use std::collections::{BTreeMap, BTreeSet};

use crate::atms::OriginSet;
use crate::engine::{Engine, EngineError, RevisionMode};
use crate::term::{Functor, TermId};

const MAX_PROMPTS: usize = 5;

/// One origin set a candidate appears in, and the contradictand it supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSupport {
    pub contradictand: TermId,
    pub origin: OriginSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contradiction {
    /// The positive side.
    pub p: TermId,
    /// `~p`.
    pub not_p: TermId,
    /// Context hypotheses in any in-context origin set of either side.
    pub candidates: Vec<TermId>,
    pub supports_view: BTreeMap<TermId, Vec<CandidateSupport>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Credibility {
    Greater,
    Less,
    Equal,
    Incomparable,
}

/// Strict partial order over propositions, recomputed from the current
/// beliefs.
#[derive(Clone, Debug, Default)]
pub struct CredibilityOrdering {
    above: BTreeSet<(TermId, TermId)>,
    sources: BTreeMap<TermId, Vec<TermId>>,
}

fn closure(pairs: &BTreeSet<(TermId, TermId)>) -> BTreeSet<(TermId, TermId)> {
    let mut out = pairs.clone();
    loop {
        let mut added = Vec::new();
        for &(a, b) in &out {
            for &(c, d) in out.range((b, TermId::from_index(0))..) {
                if c != b {
                    break;
                }
                if !out.contains(&(a, d)) {
                    added.push((a, d));
                }
            }
        }
        if added.is_empty() {
            return out;
        }
        out.extend(added);
    }
}

fn acyclic_part(pairs: BTreeSet<(TermId, TermId)>) -> BTreeSet<(TermId, TermId)> {
    pairs
        .iter()
        .copied()
        .filter(|(a, b)| a != b && !pairs.contains(&(*b, *a)))
        .collect()
}

impl CredibilityOrdering {
    pub fn build(engine: &Engine) -> Self {
        let binary = |name: &str| -> Vec<(TermId, TermId)> {
            engine
                .facts_with_head(&Functor::sym(name), 2)
                .iter()
                .filter(|t| engine.is_asserted(**t))
                .map(|t| {
                    let args = engine.store().get(*t).args();
                    (args[0], args[1])
                })
                .collect()
        };
        let direct = acyclic_part(closure(&binary("Greater").into_iter().collect()));
        let sgreater = acyclic_part(closure(&binary("Sgreater").into_iter().collect()));
        let mut sources: BTreeMap<TermId, Vec<TermId>> = BTreeMap::new();
        for (s, p) in binary("Source") {
            sources.entry(p).or_default().push(s);
        }
        let mut above = direct;
        for (&p, sp) in &sources {
            for (&q, sq) in &sources {
                if p == q || above.contains(&(q, p)) || above.contains(&(p, q)) {
                    continue;
                }
                let wins = sp
                    .iter()
                    .any(|s1| sq.iter().all(|s2| sgreater.contains(&(*s1, *s2))));
                if wins {
                    above.insert((p, q));
                    above = closure(&above);
                }
            }
        }
        CredibilityOrdering { above, sources }
    }

    pub fn compare(&self, a: TermId, b: TermId) -> Credibility {
        if a == b {
            Credibility::Equal
        } else if self.above.contains(&(a, b)) {
            Credibility::Greater
        } else if self.above.contains(&(b, a)) {
            Credibility::Less
        } else {
            Credibility::Incomparable
        }
    }

    pub fn sources(&self, p: TermId) -> &[TermId] {
        self.sources.get(&p).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Every `(more, less)` pair.
    pub fn pairs(&self) -> impl Iterator<Item = (TermId, TermId)> + '_ {
        self.above.iter().copied()
    }
}

/// What a human needs to pick a culprit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateInfo {
    pub hypothesis: TermId,
    pub display: String,
    pub wff: usize,
    /// Sources of the hypothesis, displayed.
    pub sources: Vec<String>,
    /// Which sides of the contradiction it supports.
    pub supports: Vec<TermId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevisionRequest {
    pub contradiction: Contradiction,
    pub p_display: String,
    pub not_p_display: String,
    pub candidates: Vec<CandidateInfo>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CulpritChoice {
    Unique(TermId),
    NeedsUser(RevisionRequest),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionMode {
    Automatic,
    Interactive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevisionReport {
    pub contradiction: (TermId, TermId),
    pub mode: ResolutionMode,
    pub retracted: Vec<TermId>,
    /// Beliefs no longer held, other than the retracted hypotheses.
    pub dropped: Vec<TermId>,
}

/// Asks a human which hypotheses to give up. Returning `None` aborts the
/// revision and leaves the contradiction standing.
pub trait UserDialog {
    fn choose(&mut self, request: &RevisionRequest) -> Option<Vec<TermId>>;
}

impl<F> UserDialog for F
where
    F: FnMut(&RevisionRequest) -> Option<Vec<TermId>>,
{
    fn choose(&mut self, request: &RevisionRequest) -> Option<Vec<TermId>> {
        self(request)
    }
}

impl Engine {
    /// The contradiction `p` takes part in, if its complement is believed.
    pub fn detect_contradiction(&self, p: TermId) -> Option<Contradiction> {
        let (pos, neg) = match self.store.negated(p) {
            Some(q) => (q, p),
            None => (p, self.store.existing_negation(p)?),
        };
        self.live_contradiction(pos, neg)
    }

    /// Rebuilds the contradiction between `p` and `not_p` if both are still
    /// believed.
    pub fn live_contradiction(&self, p: TermId, not_p: TermId) -> Option<Contradiction> {
        if !(self.is_asserted(p) && self.is_asserted(not_p)) {
            return None;
        }
        let mut view: BTreeMap<TermId, Vec<CandidateSupport>> = BTreeMap::new();
        for side in [p, not_p] {
            for rec in self.status(side).supports {
                for h in rec.origin.iter() {
                    view.entry(h).or_default().push(CandidateSupport {
                        contradictand: side,
                        origin: rec.origin.clone(),
                    });
                }
            }
        }
        Some(Contradiction {
            p,
            not_p,
            candidates: view.keys().copied().collect(),
            supports_view: view,
        })
    }

    pub fn credibility_compare(&self, a: TermId, b: TermId) -> Credibility {
        CredibilityOrdering::build(self).compare(a, b)
    }

    /// `Unique(h)` when every other candidate is strictly more credible
    /// than `h`.
    pub fn select_culprit(&mut self, c: &Contradiction) -> CulpritChoice {
        let order = CredibilityOrdering::build(self);
        for &h in &c.candidates {
            let minimum = c
                .candidates
                .iter()
                .all(|&o| o == h || order.compare(o, h) == Credibility::Greater);
            if minimum {
                return CulpritChoice::Unique(h);
            }
        }
        CulpritChoice::NeedsUser(self.revision_request(c, &order))
    }

    fn revision_request(&mut self, c: &Contradiction, order: &CredibilityOrdering) -> RevisionRequest {
        let candidates = c
            .candidates
            .iter()
            .map(|&h| {
                let mut supports: Vec<TermId> =
                    c.supports_view[&h].iter().map(|s| s.contradictand).collect();
                supports.dedup();
                CandidateInfo {
                    hypothesis: h,
                    display: self.display(h),
                    wff: self.wff_number(h),
                    sources: order.sources(h).iter().map(|s| self.display(*s)).collect(),
                    supports,
                }
            })
            .collect();
        RevisionRequest {
            contradiction: c.clone(),
            p_display: self.display(c.p),
            not_p_display: self.display(c.not_p),
            candidates,
        }
    }

    /// Resolves `c`: automatically when the revision mode allows it and the
    /// culprit is unique, otherwise through `dialog`.
    pub fn resolve(
        &mut self,
        c: &Contradiction,
        mut dialog: Option<&mut (dyn UserDialog + '_)>,
    ) -> Result<RevisionReport, EngineError> {
        let mut report = RevisionReport {
            contradiction: (c.p, c.not_p),
            mode: ResolutionMode::Automatic,
            retracted: Vec::new(),
            dropped: Vec::new(),
        };
        let mut current = self.live_contradiction(c.p, c.not_p);
        if self.config.mode == RevisionMode::Auto {
            if let Some(live) = &current {
                if let CulpritChoice::Unique(h) = self.select_culprit(live) {
                    self.retract_into(h, &mut report)?;
                    current = self.live_contradiction(c.p, c.not_p);
                }
            }
        }
        let mut prompts = 0;
        while let Some(live) = current {
            let order = CredibilityOrdering::build(self);
            let request = self.revision_request(&live, &order);
            let Some(d) = dialog.as_deref_mut() else {
                return self.unresolved(&live, report);
            };
            prompts += 1;
            if prompts > MAX_PROMPTS {
                return self.unresolved(&live, report);
            }
            let Some(choice) = d.choose(&request) else {
                return self.unresolved(&live, report);
            };
            if choice.is_empty() || choice.iter().any(|h| !live.candidates.contains(h)) {
                self.events.push(crate::engine::Event::Warning(
                    "choose one or more of the listed hypotheses".into(),
                ));
                current = Some(live);
                continue;
            }
            report.mode = ResolutionMode::Interactive;
            for h in choice {
                if self.ctx.contains(h) {
                    self.retract_into(h, &mut report)?;
                }
            }
            current = self.live_contradiction(c.p, c.not_p);
        }
        report.dropped.retain(|p| !report.retracted.contains(p));
        report.dropped.sort();
        report.dropped.dedup();
        Ok(report)
    }

    fn retract_into(&mut self, h: TermId, report: &mut RevisionReport) -> Result<(), EngineError> {
        let r = self.retract_hyp(h)?;
        report.retracted.push(h);
        report.dropped.extend(r.dropped);
        Ok(())
    }

    fn unresolved(
        &mut self,
        live: &Contradiction,
        mut report: RevisionReport,
    ) -> Result<RevisionReport, EngineError> {
        if !report.retracted.is_empty() {
            report.dropped.retain(|p| !report.retracted.contains(p));
            report.dropped.sort();
            report.dropped.dedup();
            self.events.push(crate::engine::Event::Revision(report));
        }
        Err(EngineError::UnresolvedContradiction(format!(
            "{} and {}",
            self.display(live.p),
            self.display(live.not_p)
        )))
    }
}
