use std::collections::BTreeMap;

use serde::Serialize;

use crate::lexicon::Lexicon;

use super::cfg::Terminal;
use super::earley::Prefix;
use super::render::token_text;
use super::token::{Terminator, Token, Variable};
use super::GrammarError;

/// Menu sections of the predictive editor, in display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletionGroup {
    FunctionWords,
    ProperNames,
    Nouns,
    Verbs,
    OfConstructs,
    Adjectives,
    Variables,
    Terminators,
}

impl CompletionGroup {
    fn of(terminal: Terminal) -> Self {
        match terminal {
            Terminal::Fw(_) => CompletionGroup::FunctionWords,
            Terminal::ProperName => CompletionGroup::ProperNames,
            Terminal::NounSg | Terminal::NounPl => CompletionGroup::Nouns,
            Terminal::Verb3 | Terminal::VerbBare => CompletionGroup::Verbs,
            Terminal::OfNoun => CompletionGroup::OfConstructs,
            Terminal::Adjective => CompletionGroup::Adjectives,
            Terminal::Var => CompletionGroup::Variables,
            Terminal::Period | Terminal::QMark => CompletionGroup::Terminators,
        }
    }
}

/// All tokens that can continue a prefix, grouped and sorted by display text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompletionSet {
    pub groups: BTreeMap<CompletionGroup, Vec<(Token, String)>>,
}

#[derive(Serialize)]
struct GroupOut<'a> {
    group: CompletionGroup,
    entries: Vec<EntryOut<'a>>,
}

#[derive(Serialize)]
struct EntryOut<'a> {
    token: &'a Token,
    text: &'a str,
}

/// Serialized as an ordered list of non-empty groups.
impl Serialize for CompletionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let groups: Vec<GroupOut> = self
            .groups
            .iter()
            .map(|(group, entries)| GroupOut {
                group: *group,
                entries: entries.iter().map(|(token, text)| EntryOut { token, text }).collect(),
            })
            .collect();
        serializer.collect_seq(groups)
    }
}

impl CompletionSet {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.groups.values().flatten().map(|(t, _)| t)
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.groups.values().flatten().map(|(_, s)| s.as_str())
    }

    pub fn contains_text(&self, text: &str) -> bool {
        self.texts().any(|s| s == text)
    }

    pub fn contains(&self, token: &Token) -> bool {
        self.tokens().any(|t| t == token)
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }
}

impl Prefix {
    /// The completion menu for this prefix.
    pub fn completions(&self, lexicon: &Lexicon) -> CompletionSet {
        let position = self.len();
        let mut groups: BTreeMap<CompletionGroup, Vec<(Token, String)>> = BTreeMap::new();
        for terminal in self.expected_terminals() {
            let tokens: Vec<Token> = match terminal {
                Terminal::Fw(fw) => vec![fw.into()],
                Terminal::Var => Variable::ALL
                    .into_iter()
                    .filter(|v| self.allows_variable(*v))
                    .map(Token::from)
                    .collect(),
                Terminal::Period => vec![Terminator::Period.into()],
                Terminal::QMark => vec![Terminator::QuestionMark.into()],
                content => {
                    let (category, slot) = content.content_slot().expect("content terminal");
                    lexicon
                        .of_category(category)
                        .map(|e| Token::content(e.entity_id, category, slot))
                        .collect()
                }
            };
            let group = groups.entry(CompletionGroup::of(terminal)).or_default();
            for token in tokens {
                let text = token_text(&token, position, lexicon);
                group.push((token, text));
            }
        }
        for list in groups.values_mut() {
            list.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        }
        groups.retain(|_, v| !v.is_empty());
        CompletionSet { groups }
    }
}

/// Exactly the tokens `t` for which `prefix · t` is the prefix of some
/// sentence of the language.
pub fn complete(prefix: &[Token], lexicon: &Lexicon) -> Result<CompletionSet, GrammarError> {
    let mut state = Prefix::new(lexicon);
    if !state.is_live() {
        return Err(GrammarError::DeadPrefix);
    }
    for token in prefix {
        if !state.push(*token) {
            return Err(GrammarError::DeadPrefix);
        }
    }
    Ok(state.completions(lexicon))
}
