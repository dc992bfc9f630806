//! A semantic wiki whose knowledge is written in a small controlled English.
//!
//! Sentences are composed with a predictive editor ([`grammar::complete`]),
//! parsed into trees, compiled to description-logic axioms
//! ([`semantics::translate`]), gated for consistency and reasoned over by a
//! tableau ([`reasoner`]), and inferred facts are rendered back into the
//! same language ([`verbalizer`]).

pub mod corpus;
pub mod grammar;
pub mod lexicon;
pub mod reasoner;
pub mod semantics;
pub mod verbalizer;
pub mod wiki;

pub use lexicon::{EntityId, FormSlot, Lexicon, LexiconEntry, LexiconError, WordCategory};
pub use wiki::{Wiki, WikiError, WikiState};
