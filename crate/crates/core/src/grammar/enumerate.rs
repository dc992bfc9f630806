use crate::lexicon::Lexicon;

use super::cfg::{ActiveGrammar, Nt, Sym, Terminal, RULES};
use super::earley::VarScope;
use super::token::{FunctionWord, Terminator, Token, Variable};

/// Every token the lexicon and the fixed vocabulary can produce.
pub fn vocabulary(lexicon: &Lexicon) -> Vec<Token> {
    let mut out: Vec<Token> = FunctionWord::ALL.into_iter().map(Token::from).collect();
    out.extend(Variable::ALL.into_iter().map(Token::from));
    out.push(Terminator::Period.into());
    out.push(Terminator::QuestionMark.into());
    for entry in lexicon.entries() {
        for slot in entry.forms.keys() {
            out.push(Token::content(entry.entity_id, entry.category, *slot));
        }
    }
    out
}

struct State {
    /// symbols still to derive, next one last
    pending: Vec<Sym>,
    tokens: Vec<Token>,
    scope: VarScope,
    min_remaining: usize,
}

/// Lazy stream of all sentences up to a length bound, produced by
/// leftmost expansion of the grammar.
pub struct Sentences {
    grammar: ActiveGrammar,
    fillers: Vec<(Terminal, Vec<Token>)>,
    max_len: usize,
    stack: Vec<State>,
}

/// Every sentence of at most `max_len` tokens, each exactly once (the
/// grammar is unambiguous, so derivations and sentences correspond).
pub fn enumerate_sentences(lexicon: &Lexicon, max_len: usize) -> Sentences {
    let grammar = ActiveGrammar::for_lexicon(lexicon);
    let mut fillers = Vec::new();
    for terminal in [
        Terminal::ProperName,
        Terminal::NounSg,
        Terminal::NounPl,
        Terminal::Verb3,
        Terminal::VerbBare,
        Terminal::OfNoun,
        Terminal::Adjective,
    ] {
        let (category, slot) = terminal.content_slot().expect("content terminal");
        let tokens = lexicon
            .of_category(category)
            .map(|e| Token::content(e.entity_id, category, slot))
            .collect();
        fillers.push((terminal, tokens));
    }
    let mut stack = Vec::new();
    if let Some(min) = grammar.min_len(Nt::Sentence) {
        if min <= max_len {
            stack.push(State {
                pending: vec![Sym::N(Nt::Sentence)],
                tokens: Vec::new(),
                scope: VarScope::default(),
                min_remaining: min,
            });
        }
    }
    Sentences { grammar, fillers, max_len, stack }
}

impl Sentences {
    fn concrete(&self, terminal: Terminal) -> Vec<Token> {
        match terminal {
            Terminal::Fw(fw) => vec![fw.into()],
            Terminal::Var => Variable::ALL.into_iter().map(Token::from).collect(),
            Terminal::Period => vec![Terminator::Period.into()],
            Terminal::QMark => vec![Terminator::QuestionMark.into()],
            other => self
                .fillers
                .iter()
                .find(|(t, _)| *t == other)
                .map(|(_, v)| v.clone())
                .unwrap_or_default(),
        }
    }
}

impl Iterator for Sentences {
    type Item = Vec<Token>;

    fn next(&mut self) -> Option<Vec<Token>> {
        while let Some(mut state) = self.stack.pop() {
            let Some(sym) = state.pending.pop() else {
                return Some(state.tokens);
            };
            match sym {
                Sym::N(nt) => {
                    let base = state.min_remaining - self.grammar.sym_min_len(&sym);
                    for &r in self.grammar.rules_for(nt).iter().rev() {
                        let rhs = RULES[r as usize].rhs;
                        let min = base + rhs.iter().map(|s| self.grammar.sym_min_len(s)).sum::<usize>();
                        if state.tokens.len() + min > self.max_len {
                            continue;
                        }
                        let mut pending = state.pending.clone();
                        pending.extend(rhs.iter().rev().copied());
                        self.stack.push(State {
                            pending,
                            tokens: state.tokens.clone(),
                            scope: state.scope,
                            min_remaining: min,
                        });
                    }
                }
                Sym::T(terminal) => {
                    let position = state.tokens.len();
                    for token in self.concrete(terminal).into_iter().rev() {
                        let Some(scope) = state.scope.step(position, &token) else {
                            continue;
                        };
                        let mut tokens = state.tokens.clone();
                        tokens.push(token);
                        self.stack.push(State {
                            pending: state.pending.clone(),
                            tokens,
                            scope,
                            min_remaining: state.min_remaining - 1,
                        });
                    }
                }
            }
        }
        None
    }
}
