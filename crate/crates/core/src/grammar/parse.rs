use std::collections::HashMap;
use std::rc::Rc;

use crate::lexicon::EntityId;

use super::ast::{Indefinite, NounPhrase, Quantifier, QuestionAst, RuleAtom, SentenceAst, Vp};
use super::cfg::{ActiveGrammar, Nt, Sym, Tag, Terminal, RULES};
use super::earley::Prefix;
use super::token::{Token, Variable};
use super::GrammarError;

/// Parses a complete sentence into its unique tree.
pub fn parse(tokens: &[Token]) -> Result<SentenceAst, GrammarError> {
    let grammar = ActiveGrammar::full();
    let mut prefix = Prefix::with_grammar(grammar.clone());
    for (i, token) in tokens.iter().enumerate() {
        if !prefix.push(*token) {
            return Err(syntax_error(&prefix, i));
        }
    }
    if !prefix.is_complete() {
        return Err(syntax_error(&prefix, tokens.len()));
    }
    let terms: Vec<Terminal> = tokens
        .iter()
        .map(|t| Terminal::of_token(t).expect("accepted tokens map to terminals"))
        .collect();
    let mut parser = SpanParser { terms: &terms, grammar: &grammar, memo: HashMap::new() };
    let trees = parser.nt(Nt::Sentence, 0, terms.len());
    match trees.len() {
        1 => Ok(Builder { tokens }.sentence(&trees[0])),
        0 => unreachable!("recognized sentence without a derivation"),
        _ => Err(GrammarError::AmbiguityError),
    }
}

fn syntax_error(prefix: &Prefix, index: usize) -> GrammarError {
    let mut expected: Vec<String> = prefix
        .expected_terminals()
        .into_iter()
        .map(|t| match t {
            Terminal::Var => {
                let allowed: Vec<&str> = Variable::ALL
                    .into_iter()
                    .filter(|v| prefix.allows_variable(*v))
                    .map(Variable::as_str)
                    .collect();
                format!("variable ({})", allowed.join("/"))
            }
            other => other.describe(),
        })
        .collect();
    expected.dedup();
    GrammarError::SyntaxError { position: index + 1, expected }
}

enum Child {
    Leaf(usize),
    Node(Rc<Tree>),
}

struct Tree {
    rule: u16,
    children: Vec<Child>,
}

type Trees = Rc<Vec<Rc<Tree>>>;

/// Enumerates derivations of a span, keeping at most two per cell: one is
/// the parse, two means ambiguity.
struct SpanParser<'a> {
    terms: &'a [Terminal],
    grammar: &'a ActiveGrammar,
    memo: HashMap<(Nt, usize, usize), Trees>,
}

const CAP: usize = 2;

impl SpanParser<'_> {
    fn nt(&mut self, nt: Nt, i: usize, j: usize) -> Trees {
        if let Some(hit) = self.memo.get(&(nt, i, j)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        let rules = self.grammar.rules_for(nt).to_vec();
        'rules: for r in rules {
            for children in self.seq(r as usize, 0, i, j) {
                out.push(Rc::new(Tree { rule: r, children }));
                if out.len() >= CAP {
                    break 'rules;
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert((nt, i, j), out.clone());
        out
    }

    fn seq(&mut self, rule: usize, k: usize, i: usize, j: usize) -> Vec<Vec<Child>> {
        let rhs = RULES[rule].rhs;
        if k == rhs.len() {
            return if i == j { vec![Vec::new()] } else { Vec::new() };
        }
        let rest_min: usize = rhs[k + 1..].iter().map(|s| self.grammar.sym_min_len(s)).sum();
        let mut out = Vec::new();
        match &rhs[k] {
            Sym::T(t) => {
                if i < j && self.terms[i] == *t {
                    for mut rest in self.seq(rule, k + 1, i + 1, j) {
                        rest.insert(0, Child::Leaf(i));
                        out.push(rest);
                    }
                }
            }
            Sym::N(n) => {
                let Some(min) = self.grammar.min_len(*n) else {
                    return out;
                };
                let mut mid = i + min;
                while mid + rest_min <= j && out.len() < CAP {
                    let trees = self.nt(*n, i, mid);
                    if !trees.is_empty() {
                        let rests = self.seq(rule, k + 1, mid, j);
                        'combine: for tree in trees.iter() {
                            for rest in &rests {
                                let mut children = vec![Child::Node(tree.clone())];
                                children.extend(rest.iter().map(|c| match c {
                                    Child::Leaf(x) => Child::Leaf(*x),
                                    Child::Node(t) => Child::Node(t.clone()),
                                }));
                                out.push(children);
                                if out.len() >= CAP {
                                    break 'combine;
                                }
                            }
                        }
                    }
                    mid += 1;
                }
            }
        }
        out.truncate(CAP);
        out
    }
}

struct Builder<'a> {
    tokens: &'a [Token],
}

impl Builder<'_> {
    fn tag(tree: &Tree) -> Tag {
        RULES[tree.rule as usize].tag
    }

    fn node<'t>(tree: &'t Tree, k: usize) -> &'t Tree {
        match &tree.children[k] {
            Child::Node(t) => t,
            Child::Leaf(_) => unreachable!("expected a subtree at child {k}"),
        }
    }

    fn leaf(&self, tree: &Tree, k: usize) -> &Token {
        match &tree.children[k] {
            Child::Leaf(i) => &self.tokens[*i],
            Child::Node(_) => unreachable!("expected a token at child {k}"),
        }
    }

    fn entity(&self, tree: &Tree, k: usize) -> EntityId {
        self.leaf(tree, k).entity().expect("content token")
    }

    fn var(&self, tree: &Tree, k: usize) -> Variable {
        match self.leaf(tree, k) {
            Token::Variable(v) => *v,
            _ => unreachable!("expected a variable"),
        }
    }

    fn sentence(&self, t: &Tree) -> SentenceAst {
        match Self::tag(t) {
            Tag::SentEvery | Tag::SentNo => SentenceAst::Quantified {
                quantifier: if Self::tag(t) == Tag::SentEvery { Quantifier::Every } else { Quantifier::No },
                subject: self.entity(t, 1),
                vp: self.vp(Self::node(t, 2)),
            },
            Tag::SentInst => SentenceAst::Instance { subject: self.entity(t, 0), vp: self.vp(Self::node(t, 1)) },
            Tag::SentRule => {
                let mut body = Vec::new();
                let mut atoms = Self::node(t, 1);
                loop {
                    body.push(self.atom(Self::node(atoms, 0)));
                    if Self::tag(atoms) == Tag::AtomsMore {
                        atoms = Self::node(atoms, 2);
                    } else {
                        break;
                    }
                }
                SentenceAst::Rule { body, head: self.atom(Self::node(t, 3)) }
            }
            Tag::SentQuestion => SentenceAst::Question(self.question(Self::node(t, 0))),
            other => unreachable!("not a sentence production: {other:?}"),
        }
    }

    fn atom(&self, t: &Tree) -> RuleAtom {
        match Self::tag(t) {
            Tag::AtomClass => RuleAtom::Class(self.var(t, 0), self.entity(t, 3)),
            Tag::AtomVerb => RuleAtom::Role(self.var(t, 0), self.entity(t, 1), self.var(t, 2)),
            Tag::AtomOf => RuleAtom::Role(self.var(t, 0), self.entity(t, 3), self.var(t, 5)),
            Tag::AtomAdj => RuleAtom::Role(self.var(t, 0), self.entity(t, 2), self.var(t, 3)),
            other => unreachable!("not an atom production: {other:?}"),
        }
    }

    fn question(&self, t: &Tree) -> QuestionAst {
        match Self::tag(t) {
            Tag::QWhatIs => QuestionAst::WhatIs(self.entity(t, 2)),
            Tag::QWhat => QuestionAst::WhatVp(self.vp(Self::node(t, 1))),
            Tag::QWhich => QuestionAst::WhichVp(self.entity(t, 1), self.vp(Self::node(t, 2))),
            other => unreachable!("not a question production: {other:?}"),
        }
    }

    fn vp(&self, t: &Tree) -> Vp {
        match Self::tag(t) {
            Tag::Pass => self.vp(Self::node(t, 0)),
            Tag::VpAnd => Vp::and(self.vp(Self::node(t, 0)), self.vp(Self::node(t, 2))),
            Tag::VpOr => Vp::or(self.vp(Self::node(t, 0)), self.vp(Self::node(t, 2))),
            Tag::IsA => Vp::IsA(Indefinite::bare(self.entity(t, 2))),
            Tag::IsNotA => Vp::IsNotA(Indefinite::bare(self.entity(t, 3))),
            Tag::IsARel => Vp::IsA(Indefinite::with(self.entity(t, 2), self.vp(Self::node(t, 4)))),
            Tag::IsNotARel => Vp::IsNotA(Indefinite::with(self.entity(t, 3), self.vp(Self::node(t, 5)))),
            Tag::Verb => Vp::Verb(self.entity(t, 0), self.np(Self::node(t, 1))),
            Tag::DoesNot => Vp::DoesNotVerb(self.entity(t, 2), self.np(Self::node(t, 3))),
            Tag::IsOf => Vp::IsOf(self.entity(t, 2), self.np(Self::node(t, 4))),
            Tag::IsAdj => Vp::IsAdj(self.entity(t, 1), self.np(Self::node(t, 2))),
            other => unreachable!("not a verb phrase production: {other:?}"),
        }
    }

    fn np(&self, t: &Tree) -> NounPhrase {
        match Self::tag(t) {
            Tag::Pass => self.np(Self::node(t, 0)),
            Tag::NpNamed => NounPhrase::Named(self.entity(t, 0)),
            Tag::NpIndef => NounPhrase::Indef(Indefinite::bare(self.entity(t, 1))),
            Tag::NpIndefRel => NounPhrase::Indef(Indefinite::with(self.entity(t, 1), self.vp(Self::node(t, 3)))),
            other => unreachable!("not a noun phrase production: {other:?}"),
        }
    }
}
