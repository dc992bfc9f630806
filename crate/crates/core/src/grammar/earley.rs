//! Incremental Earley recognition of sentence prefixes.

use std::collections::{BTreeSet, HashSet};

use crate::lexicon::Lexicon;

use super::cfg::{ActiveGrammar, Nt, Sym, Terminal, RULES};
use super::token::{FunctionWord, Token, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Item {
    rule: u16,
    dot: u8,
    origin: u32,
}

impl Item {
    fn next(&self) -> Option<&'static Sym> {
        RULES[self.rule as usize].rhs.get(self.dot as usize)
    }
}

/// Rule sentences may only use head variables that occur in the body; this
/// tracks the variables seen so far at each prefix length.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct VarScope {
    in_rule: bool,
    in_head: bool,
    body: u8,
}

impl VarScope {
    pub(crate) fn step(self, position: usize, token: &Token) -> Option<VarScope> {
        let mut next = self;
        match token {
            Token::Function(FunctionWord::If) if position == 0 => next.in_rule = true,
            Token::Function(FunctionWord::Then) if self.in_rule => next.in_head = true,
            Token::Variable(v) if self.in_head => {
                if self.body & v.bit() == 0 {
                    return None;
                }
            }
            Token::Variable(v) => next.body |= v.bit(),
            _ => {}
        }
        Some(next)
    }

    pub(crate) fn allows(&self, v: Variable) -> bool {
        !self.in_head || self.body & v.bit() != 0
    }
}

/// A viable sentence prefix together with its Earley chart.
///
/// Tokens are pushed one at a time; a push that would make the prefix
/// unextendable is refused and leaves the state untouched.
#[derive(Debug, Clone)]
pub struct Prefix {
    grammar: ActiveGrammar,
    sets: Vec<Vec<Item>>,
    tokens: Vec<Token>,
    scopes: Vec<VarScope>,
}

impl Prefix {
    /// An empty prefix over the rules the lexicon can fill.
    pub fn new(lexicon: &Lexicon) -> Self {
        Self::with_grammar(ActiveGrammar::for_lexicon(lexicon))
    }

    pub(crate) fn with_grammar(grammar: ActiveGrammar) -> Self {
        let mut set = Vec::new();
        let mut seen = HashSet::new();
        for &r in grammar.rules_for(Nt::Sentence) {
            let item = Item { rule: r, dot: 0, origin: 0 };
            if seen.insert(item) {
                set.push(item);
            }
        }
        let mut prefix = Prefix { grammar, sets: vec![set], tokens: Vec::new(), scopes: vec![VarScope::default()] };
        prefix.close(0, seen);
        prefix
    }

    fn close(&mut self, i: usize, mut seen: HashSet<Item>) {
        let mut k = 0;
        while k < self.sets[i].len() {
            let item = self.sets[i][k];
            k += 1;
            match item.next() {
                Some(Sym::N(nt)) => {
                    for &r in self.grammar.rules_for(*nt) {
                        let new = Item { rule: r, dot: 0, origin: i as u32 };
                        if seen.insert(new) {
                            self.sets[i].push(new);
                        }
                    }
                }
                Some(Sym::T(_)) => {}
                None => {
                    let lhs = RULES[item.rule as usize].lhs;
                    let origin = item.origin as usize;
                    // no empty rules, so origin < i and that set is final
                    let advanced: Vec<Item> = self.sets[origin]
                        .iter()
                        .filter(|w| matches!(w.next(), Some(Sym::N(n)) if *n == lhs))
                        .map(|w| Item { dot: w.dot + 1, ..*w })
                        .collect();
                    for new in advanced {
                        if seen.insert(new) {
                            self.sets[i].push(new);
                        }
                    }
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Whether any sentence at all can be formed from this lexicon.
    pub fn is_live(&self) -> bool {
        !self.sets[0].is_empty()
    }

    /// Appends `token` if the result is still a viable prefix.
    pub fn push(&mut self, token: Token) -> bool {
        let Some(terminal) = Terminal::of_token(&token) else {
            return false;
        };
        let i = self.tokens.len();
        let Some(scope) = self.scopes[i].step(i, &token) else {
            return false;
        };
        let mut seen = HashSet::new();
        let mut set = Vec::new();
        for item in &self.sets[i] {
            if item.next() == Some(&Sym::T(terminal)) {
                let new = Item { dot: item.dot + 1, ..*item };
                if seen.insert(new) {
                    set.push(new);
                }
            }
        }
        if set.is_empty() {
            return false;
        }
        self.sets.push(set);
        self.tokens.push(token);
        self.scopes.push(scope);
        self.close(i + 1, seen);
        true
    }

    /// Drops tokens beyond `len`.
    pub fn truncate(&mut self, len: usize) {
        self.sets.truncate(len + 1);
        self.tokens.truncate(len);
        self.scopes.truncate(len + 1);
    }

    pub fn pop(&mut self) -> Option<Token> {
        let t = *self.tokens.last()?;
        self.truncate(self.tokens.len() - 1);
        Some(t)
    }

    /// True when the prefix is itself a complete sentence.
    pub fn is_complete(&self) -> bool {
        let last = self.sets.last().expect("chart has a set per position");
        last.iter().any(|item| {
            item.origin == 0 && item.next().is_none() && RULES[item.rule as usize].lhs == Nt::Sentence
        })
    }

    pub(crate) fn expected_terminals(&self) -> BTreeSet<Terminal> {
        let last = self.sets.last().expect("chart has a set per position");
        last.iter()
            .filter_map(|item| match item.next() {
                Some(Sym::T(t)) => Some(*t),
                _ => None,
            })
            .collect()
    }

    pub(crate) fn allows_variable(&self, v: Variable) -> bool {
        self.scopes.last().copied().unwrap_or_default().allows(v)
    }
}
