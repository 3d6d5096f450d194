//! A propositional semantic network engine.
//!
//! Every term is interned once in a [`TermStore`]; propositions are believed
//! in a context according to their assumption-based supports; rules built
//! from set-oriented connectives drive backward and forward inference;
//! contradictions are resolved by a credibility ordering or a user dialog;
//! `whendo`/`ifdo` rules connect beliefs to acts. The [`snepslog`] module
//! provides the command language on top.

pub mod acting;
pub mod atms;
pub mod connective;
pub mod corpus;
pub mod engine;
pub mod inference;
pub mod revision;
pub mod snepslog;
pub mod term;
pub mod unify;

pub use acting::{ActHandler, ActRule, ActRuleKind};
pub use atms::{AssertionStatus, Context, OriginSet, OriginTag, RetractionReport, SupportRecord};
pub use engine::{Engine, EngineConfig, EngineError, Event, RevisionMode, Stats};
pub use inference::Answer;
pub use revision::{
    Contradiction, Credibility, CredibilityOrdering, CulpritChoice, ResolutionMode,
    RevisionReport, RevisionRequest, UserDialog,
};
pub use term::{Functor, Pattern, PatternArg, Term, TermError, TermId, TermStore};
pub use unify::{unify, Substitution};
