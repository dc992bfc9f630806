//! The controlled language: tokens, sentence trees, and the fixed grammar
//! with exact parsing and next-token prediction.
//!
//! The grammar is a small context-free grammar over function words and
//! lexicon categories (see [`cfg`]). Prediction runs an Earley recognizer
//! over the grammar restricted to the categories the lexicon can actually
//! fill, so every offered token extends to at least one complete sentence.

mod ast;
pub(crate) mod cfg;
mod complete;
mod earley;
mod enumerate;
mod parse;
mod render;
mod token;
mod tokenize;

pub use ast::{Indefinite, NounPhrase, Quantifier, QuestionAst, RuleAtom, SentenceAst, Vp};
pub use complete::{complete, CompletionGroup, CompletionSet};
pub use earley::Prefix;
pub use enumerate::{enumerate_sentences, vocabulary, Sentences};
pub use parse::parse;
pub use render::{render, render_text, tokens_to_text};
pub use token::{resolve_tokens, ContentRef, FunctionWord, Terminator, Token, TokenRef, Variable};
pub use tokenize::tokenize;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    /// Position is 1-based.
    #[error("unknown word `{surface}` at position {position}")]
    UnknownWord { position: usize, surface: String },
    /// Position is 1-based; `position == len + 1` means the sentence ended early.
    #[error("syntax error at position {position}, expected one of: {}", expected.join(", "))]
    SyntaxError { position: usize, expected: Vec<String> },
    #[error("sentence has more than one reading")]
    AmbiguityError,
    #[error("no sentence starts with this prefix")]
    DeadPrefix,
}
