use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::{EntityId, FormSlot, Lexicon, WordCategory};

use super::GrammarError;

/// The reserved function words. Variables `X`, `Y`, `Z` are reserved too
/// but are tokenized as [`Variable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionWord {
    A,
    An,
    Every,
    No,
    If,
    Then,
    And,
    Or,
    Not,
    Is,
    Does,
    That,
    Of,
    What,
    Which,
}

impl FunctionWord {
    pub const ALL: [FunctionWord; 15] = [
        FunctionWord::A,
        FunctionWord::An,
        FunctionWord::Every,
        FunctionWord::No,
        FunctionWord::If,
        FunctionWord::Then,
        FunctionWord::And,
        FunctionWord::Or,
        FunctionWord::Not,
        FunctionWord::Is,
        FunctionWord::Does,
        FunctionWord::That,
        FunctionWord::Of,
        FunctionWord::What,
        FunctionWord::Which,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionWord::A => "a",
            FunctionWord::An => "an",
            FunctionWord::Every => "every",
            FunctionWord::No => "no",
            FunctionWord::If => "if",
            FunctionWord::Then => "then",
            FunctionWord::And => "and",
            FunctionWord::Or => "or",
            FunctionWord::Not => "not",
            FunctionWord::Is => "is",
            FunctionWord::Does => "does",
            FunctionWord::That => "that",
            FunctionWord::Of => "of",
            FunctionWord::What => "what",
            FunctionWord::Which => "which",
        }
    }

    /// Case-insensitive match.
    pub fn from_word(word: &str) -> Option<Self> {
        let lower = word.to_lowercase();
        Self::ALL.into_iter().find(|fw| fw.as_str() == lower)
    }

    /// True for any function word or variable letter, in any case.
    pub fn is_reserved(word: &str) -> bool {
        Self::from_word(word).is_some() || Variable::from_word(&word.to_uppercase()).is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variable {
    X,
    Y,
    Z,
}

impl Variable {
    pub const ALL: [Variable; 3] = [Variable::X, Variable::Y, Variable::Z];

    pub fn as_str(self) -> &'static str {
        match self {
            Variable::X => "X",
            Variable::Y => "Y",
            Variable::Z => "Z",
        }
    }

    pub fn from_word(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == word)
    }

    pub(crate) fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Terminator {
    #[serde(rename = ".")]
    Period,
    #[serde(rename = "?")]
    QuestionMark,
}

impl Terminator {
    pub fn as_str(self) -> &'static str {
        match self {
            Terminator::Period => ".",
            Terminator::QuestionMark => "?",
        }
    }

    pub fn from_word(word: &str) -> Option<Self> {
        match word {
            "." => Some(Terminator::Period),
            "?" => Some(Terminator::QuestionMark),
            _ => None,
        }
    }
}

/// A content word occurrence: which entity, and in which inflected form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentRef {
    pub entity: EntityId,
    pub category: WordCategory,
    pub slot: FormSlot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Function(FunctionWord),
    Content(ContentRef),
    Variable(Variable),
    Terminator(Terminator),
}

impl Token {
    pub fn content(entity: EntityId, category: WordCategory, slot: FormSlot) -> Self {
        Token::Content(ContentRef { entity, category, slot })
    }

    pub fn entity(&self) -> Option<EntityId> {
        match self {
            Token::Content(c) => Some(c.entity),
            _ => None,
        }
    }
}

impl From<FunctionWord> for Token {
    fn from(fw: FunctionWord) -> Self {
        Token::Function(fw)
    }
}

impl From<Variable> for Token {
    fn from(v: Variable) -> Self {
        Token::Variable(v)
    }
}

impl From<Terminator> for Token {
    fn from(t: Terminator) -> Self {
        Token::Terminator(t)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Function(fw) => f.write_str(fw.as_str()),
            Token::Content(c) => write!(f, "#{}:{}", c.entity, c.slot),
            Token::Variable(v) => f.write_str(v.as_str()),
            Token::Terminator(t) => f.write_str(t.as_str()),
        }
    }
}

impl Serialize for Token {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TokenRef::from(*self).serialize(serializer)
    }
}

/// A token as exchanged with clients: `{"fw": "every"}`,
/// `{"cw": "<entity id>", "slot": "singular"}`, `{"var": "X"}` or
/// `{"term": "."}`. Content references are resolved against a lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum TokenRef {
    Function { fw: FunctionWord },
    Content { cw: EntityId, slot: FormSlot },
    Variable { var: Variable },
    Terminator { term: Terminator },
}

impl From<Token> for TokenRef {
    fn from(t: Token) -> Self {
        match t {
            Token::Function(fw) => TokenRef::Function { fw },
            Token::Content(c) => TokenRef::Content { cw: c.entity, slot: c.slot },
            Token::Variable(var) => TokenRef::Variable { var },
            Token::Terminator(term) => TokenRef::Terminator { term },
        }
    }
}

impl TokenRef {
    /// The token, if the referenced word exists and has the given form.
    pub fn resolve(self, lexicon: &Lexicon) -> Option<Token> {
        Some(match self {
            TokenRef::Function { fw } => fw.into(),
            TokenRef::Variable { var } => var.into(),
            TokenRef::Terminator { term } => term.into(),
            TokenRef::Content { cw, slot } => {
                let entry = lexicon.get(cw)?;
                entry.form(slot)?;
                Token::content(cw, entry.category, slot)
            }
        })
    }
}

/// Resolves a whole sequence; an unresolvable reference is reported as an
/// unknown word at its 1-based position.
pub fn resolve_tokens(refs: &[TokenRef], lexicon: &Lexicon) -> Result<Vec<Token>, GrammarError> {
    refs.iter()
        .enumerate()
        .map(|(i, r)| {
            r.resolve(lexicon).ok_or_else(|| GrammarError::UnknownWord {
                position: i + 1,
                surface: match r {
                    TokenRef::Content { cw, slot } => format!("#{cw}:{slot}"),
                    _ => unreachable!("only content references can fail"),
                },
            })
        })
        .collect()
}
