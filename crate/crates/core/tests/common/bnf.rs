//! The sentence grammar transcribed directly from its BNF (ambiguity and
//! all) and recognized by brute-force leftmost derivation. It shares no
//! code with the library's grammar.

use std::collections::{HashMap, HashSet};

use cnlwiki::grammar::{FunctionWord, Token, Variable};
use cnlwiki::{FormSlot, Lexicon, WordCategory};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    W(&'static str),
    ProperName,
    NounSg,
    NounPl,
    Verb3,
    VerbBare,
    OfNoun,
    Adj,
    Var,
    Period,
    QMark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    T(Term),
    N(&'static str),
}

fn sym(word: &'static str) -> Sym {
    use Term::*;
    match word {
        "PN" => Sym::T(ProperName),
        "Noun_sg" => Sym::T(NounSg),
        "Noun_pl" => Sym::T(NounPl),
        "Verb_3sg" => Sym::T(Verb3),
        "Verb_bare" => Sym::T(VerbBare),
        "OfNoun" => Sym::T(OfNoun),
        "Adj" => Sym::T(Adj),
        "Var" => Sym::T(Var),
        "." => Sym::T(Period),
        "?" => Sym::T(QMark),
        w if w.chars().next().unwrap().is_lowercase() => Sym::T(W(w)),
        n => Sym::N(n),
    }
}

/// Repetitions `{...}` are written as right recursion.
const BNF: &[(&str, &str)] = &[
    ("S", "every Noun_sg VP_sg ."),
    ("S", "no Noun_sg VP_sg ."),
    ("S", "PN VP_sg ."),
    ("S", "if Atoms then Atom ."),
    ("S", "Q ?"),
    ("Atoms", "Atom"),
    ("Atoms", "Atom and Atoms"),
    ("VP_sg", "V1"),
    ("VP_sg", "V1 and AndRest"),
    ("VP_sg", "V1 or OrRest"),
    ("AndRest", "V1"),
    ("AndRest", "V1 and AndRest"),
    ("OrRest", "V1"),
    ("OrRest", "V1 or OrRest"),
    ("V1", "is Art NP_n"),
    ("V1", "is not Art NP_n"),
    ("V1", "Verb_3sg NP"),
    ("V1", "does not Verb_bare NP"),
    ("V1", "is Art OfNoun of NP"),
    ("V1", "is Adj NP"),
    ("NP_n", "Noun_sg"),
    ("NP_n", "Noun_sg that VP_sg"),
    ("NP", "PN"),
    ("NP", "Art NP_n"),
    ("Art", "a"),
    ("Art", "an"),
    ("Atom", "Var is Art Noun_sg"),
    ("Atom", "Var Verb_3sg Var"),
    ("Atom", "Var is Art OfNoun of Var"),
    ("Atom", "Var is Adj Var"),
    ("Q", "what is PN"),
    ("Q", "what VP_q"),
    ("Q", "which Noun_pl VP_pl"),
    ("VP_q", "Verb_3sg NP"),
    ("VP_q", "is Art NP_n"),
    ("VP_q", "is Art OfNoun of NP"),
    ("VP_q", "is Adj NP"),
    ("VP_pl", "Verb_bare NP"),
    ("VP_pl", "is Art NP_n"),
    ("VP_pl", "is Art OfNoun of NP"),
    ("VP_pl", "is Adj NP"),
];

pub fn term_of(token: &Token) -> Term {
    match token {
        Token::Function(fw) => Term::W(fw.as_str()),
        Token::Variable(_) => Term::Var,
        Token::Terminator(t) => {
            if t.as_str() == "." {
                Term::Period
            } else {
                Term::QMark
            }
        }
        Token::Content(c) => match (c.category, c.slot) {
            (WordCategory::ProperName, _) => Term::ProperName,
            (WordCategory::Noun, FormSlot::Singular) => Term::NounSg,
            (WordCategory::Noun, _) => Term::NounPl,
            (WordCategory::TransitiveVerb, FormSlot::ThirdSg) => Term::Verb3,
            (WordCategory::TransitiveVerb, _) => Term::VerbBare,
            (WordCategory::OfConstruct, _) => Term::OfNoun,
            (WordCategory::TransitiveAdjective, _) => Term::Adj,
        },
    }
}

/// Remaining symbols of a sentential form, leftmost last.
type Form = Vec<Sym>;

pub struct SpecGrammar {
    rules: HashMap<&'static str, Vec<Vec<Sym>>>,
    productive: HashSet<&'static str>,
    available: HashSet<Term>,
    /// Every token the lexicon allows, for brute-force candidate search.
    pub candidates: Vec<Token>,
    terminals: HashMap<Term, Vec<Token>>,
}

/// Set of leftmost derivations consistent with a prefix, plus the prefix's
/// variables for the head-variable restriction.
#[derive(Clone)]
pub struct State {
    forms: HashSet<Form>,
    body_vars: HashSet<Variable>,
    in_head: bool,
    head_ok: bool,
}

impl SpecGrammar {
    pub fn new(lex: &Lexicon) -> Self {
        let mut rules: HashMap<&'static str, Vec<Vec<Sym>>> = HashMap::new();
        for (lhs, rhs) in BNF {
            rules.entry(lhs).or_default().push(rhs.split(' ').map(sym).collect());
        }
        let mut candidates: Vec<Token> = FunctionWord::ALL.into_iter().map(Token::from).collect();
        candidates.extend(Variable::ALL.map(Token::from));
        candidates.extend([".", "?"].map(|t| Token::Terminator(cnlwiki::grammar::Terminator::from_word(t).unwrap())));
        for e in lex.entries() {
            for &slot in e.category.required_slots() {
                candidates.push(Token::content(e.entity_id, e.category, slot));
            }
        }
        let mut terminals: HashMap<Term, Vec<Token>> = HashMap::new();
        for t in &candidates {
            terminals.entry(term_of(t)).or_default().push(*t);
        }
        let available: HashSet<Term> = terminals.keys().copied().collect();
        let mut productive = HashSet::new();
        loop {
            let before = productive.len();
            for (lhs, alts) in &rules {
                let ok = alts.iter().any(|rhs| {
                    rhs.iter().all(|s| match s {
                        Sym::T(t) => available.contains(t),
                        Sym::N(n) => productive.contains(n),
                    })
                });
                if ok {
                    productive.insert(*lhs);
                }
            }
            if productive.len() == before {
                break;
            }
        }
        SpecGrammar { rules, productive, available, candidates, terminals }
    }

    fn viable(&self, s: &Sym) -> bool {
        match s {
            Sym::T(t) => self.available.contains(t),
            Sym::N(n) => self.productive.contains(n),
        }
    }

    pub fn start(&self) -> State {
        let mut forms = HashSet::new();
        if self.productive.contains("S") {
            forms.insert(vec![Sym::N("S")]);
        }
        State { forms, body_vars: HashSet::new(), in_head: false, head_ok: true }
    }

    /// Expands the leftmost nonterminal until a terminal leads.
    fn leading(&self, form: &Form, out: &mut Vec<Form>) {
        match form.last() {
            None | Some(Sym::T(_)) => out.push(form.clone()),
            Some(Sym::N(n)) => {
                for rhs in &self.rules[n] {
                    if !rhs.iter().all(|s| self.viable(s)) {
                        continue;
                    }
                    let mut next = form[..form.len() - 1].to_vec();
                    next.extend(rhs.iter().rev());
                    self.leading(&next, out);
                }
            }
        }
    }

    pub fn step(&self, state: &State, token: &Token) -> State {
        let term = term_of(token);
        let mut forms = HashSet::new();
        for form in &state.forms {
            let mut expanded = Vec::new();
            self.leading(form, &mut expanded);
            for mut f in expanded {
                if f.last() == Some(&Sym::T(term)) {
                    f.pop();
                    forms.insert(f);
                }
            }
        }
        let mut next = State { forms, ..state.clone() };
        match token {
            Token::Function(fw) if fw.as_str() == "then" => next.in_head = true,
            Token::Variable(v) if next.in_head => next.head_ok &= state.body_vars.contains(v),
            Token::Variable(v) => {
                next.body_vars.insert(*v);
            }
            _ => {}
        }
        next
    }

    /// Some continuation (possibly empty) completes a sentence.
    pub fn extendable(&self, state: &State) -> bool {
        state.head_ok && !state.forms.is_empty()
    }

    pub fn accepts(&self, state: &State) -> bool {
        state.head_ok && state.forms.iter().any(|f| f.is_empty())
    }

    pub fn recognizes(&self, tokens: &[Token]) -> bool {
        let state = tokens.iter().fold(self.start(), |s, t| self.step(&s, t));
        self.accepts(&state)
    }

    /// Tokens `t` such that `state·t` still extends to a sentence.
    pub fn continuations(&self, state: &State) -> HashSet<Token> {
        self.candidates.iter().filter(|t| self.extendable(&self.step(state, t))).copied().collect()
    }

    /// Same set as [`Self::continuations`], expanding the state once instead
    /// of once per candidate: `state·t` is non-empty exactly when some
    /// expansion leads with `t`'s terminal.
    pub fn continuations_fast(&self, state: &State) -> HashSet<Token> {
        if !state.head_ok {
            return HashSet::new();
        }
        let mut leading = HashSet::new();
        for form in &state.forms {
            let mut expanded = Vec::new();
            self.leading(form, &mut expanded);
            leading.extend(expanded.iter().filter_map(|f| match f.last() {
                Some(Sym::T(t)) => Some(*t),
                _ => None,
            }));
        }
        leading
            .iter()
            .flat_map(|t| self.terminals[t].iter().copied())
            .filter(|t| match t {
                Token::Variable(v) if state.in_head => state.body_vars.contains(v),
                _ => true,
            })
            .collect()
    }

    /// A random sentence derived from the BNF, with every recursion cut
    /// off after `depth` levels by taking the shortest alternative.
    pub fn generate<R: Rng>(&self, rng: &mut R, depth: usize) -> Vec<Token> {
        let mut out = Vec::new();
        self.derive(rng, Sym::N("S"), depth, &mut out);
        // head variables must occur in the body
        if let Some(then) = out.iter().position(|t| matches!(t, Token::Function(f) if f.as_str() == "then")) {
            let body: Vec<Token> = out[..then].iter().filter(|t| matches!(t, Token::Variable(_))).copied().collect();
            for t in &mut out[then..] {
                if matches!(t, Token::Variable(_)) {
                    *t = *body.choose(rng).unwrap();
                }
            }
        }
        out
    }

    fn derive<R: Rng>(&self, rng: &mut R, s: Sym, depth: usize, out: &mut Vec<Token>) {
        match s {
            Sym::T(t) => out.push(*self.terminals[&t].choose(rng).unwrap()),
            Sym::N(n) => {
                let alts: Vec<&Vec<Sym>> =
                    self.rules[n].iter().filter(|rhs| rhs.iter().all(|s| self.viable(s))).collect();
                let rhs = if depth == 0 {
                    alts.iter().min_by_key(|rhs| rhs.iter().filter(|s| matches!(s, Sym::N(_))).count()).unwrap()
                } else {
                    alts.choose(rng).unwrap()
                };
                for s in rhs.iter() {
                    self.derive(rng, *s, depth.saturating_sub(1), out);
                }
            }
        }
    }
}
