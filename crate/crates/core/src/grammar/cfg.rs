//! The normative grammar as a rule table.
//!
//! Beyond the surface productions, verb phrases carry which coordinators
//! they would absorb: a phrase ending in a relative clause ("is a city that
//! borders Zurich") lets a following "and" or "or" continue that clause. A
//! coordinator always continues the innermost clause that can take it (a
//! clause with one member takes either kind, a chain only its own kind),
//! which keeps the grammar unambiguous without rejecting any sentence.

use crate::lexicon::{FormSlot, WordCategory};

use super::token::{FunctionWord as F, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Terminal {
    Fw(F),
    ProperName,
    NounSg,
    NounPl,
    Verb3,
    VerbBare,
    OfNoun,
    Adjective,
    Var,
    Period,
    QMark,
}

impl Terminal {
    pub(crate) fn of_token(token: &Token) -> Option<Terminal> {
        use FormSlot::*;
        use WordCategory::*;
        Some(match token {
            Token::Function(fw) => Terminal::Fw(*fw),
            Token::Variable(_) => Terminal::Var,
            Token::Terminator(super::Terminator::Period) => Terminal::Period,
            Token::Terminator(super::Terminator::QuestionMark) => Terminal::QMark,
            Token::Content(c) => match (c.category, c.slot) {
                (ProperName, Base) => Terminal::ProperName,
                (Noun, Singular) => Terminal::NounSg,
                (Noun, Plural) => Terminal::NounPl,
                (TransitiveVerb, ThirdSg) => Terminal::Verb3,
                (TransitiveVerb, Bare) => Terminal::VerbBare,
                (OfConstruct, Base) => Terminal::OfNoun,
                (TransitiveAdjective, Base) => Terminal::Adjective,
                _ => return None,
            },
        })
    }

    /// The lexicon category and slot that fill a content terminal.
    pub(crate) fn content_slot(self) -> Option<(WordCategory, FormSlot)> {
        use FormSlot::*;
        use WordCategory::*;
        Some(match self {
            Terminal::ProperName => (ProperName, Base),
            Terminal::NounSg => (Noun, Singular),
            Terminal::NounPl => (Noun, Plural),
            Terminal::Verb3 => (TransitiveVerb, ThirdSg),
            Terminal::VerbBare => (TransitiveVerb, Bare),
            Terminal::OfNoun => (OfConstruct, Base),
            Terminal::Adjective => (TransitiveAdjective, Base),
            _ => return None,
        })
    }

    pub(crate) fn describe(self) -> String {
        match self {
            Terminal::Fw(fw) => format!("\"{}\"", fw.as_str()),
            Terminal::ProperName => "proper name".into(),
            Terminal::NounSg => "noun".into(),
            Terminal::NounPl => "plural noun".into(),
            Terminal::Verb3 => "verb".into(),
            Terminal::VerbBare => "verb (bare form)".into(),
            Terminal::OfNoun => "of-construct".into(),
            Terminal::Adjective => "adjective".into(),
            Terminal::Var => "variable".into(),
            Terminal::Period => "\".\"".into(),
            Terminal::QMark => "\"?\"".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Nt {
    Sentence,
    /// any verb phrase
    Vp,
    /// Verb phrases by which coordinators a following word would still
    /// continue inside them: both, only "and", only "or".
    VpBoth,
    VpAnd,
    VpOr,
    /// non-final member of an "and" / "or" chain
    MAnd,
    MOr,
    /// rest of an "and" chain whose last member absorbs both coordinators,
    /// or only "and"; likewise for "or" chains
    AndTailB,
    AndTailA,
    OrTailB,
    OrTailO,
    V1Any,
    V1Closed,
    /// open verb phrases, by what their final relative clause absorbs
    V1OpenA,
    V1OpenO,
    V1OpenB,
    NpClosed,
    NpOpenA,
    NpOpenO,
    NpOpenB,
    Np,
    Art,
    Atoms,
    Atom,
    Question,
    VpQ,
    VpPl,
}

impl Nt {
    pub(crate) const COUNT: usize = 29;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Sym {
    T(Terminal),
    N(Nt),
}

/// Semantic label of a production; productions sharing a label share the
/// positions of their meaningful children.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tag {
    SentEvery,
    SentNo,
    SentInst,
    SentRule,
    SentQuestion,
    /// single child at index 0
    Pass,
    /// V1 coord Tail
    VpAnd,
    VpOr,
    /// is Art Noun
    IsA,
    /// is not Art Noun
    IsNotA,
    /// is Art Noun that Vp
    IsARel,
    /// is not Art Noun that Vp
    IsNotARel,
    /// Verb Np
    Verb,
    /// does not Verb Np
    DoesNot,
    /// is Art Of of Np
    IsOf,
    /// is Adj Np
    IsAdj,
    NpNamed,
    /// Art Noun
    NpIndef,
    /// Art Noun that Vp
    NpIndefRel,
    Article,
    AtomsOne,
    AtomsMore,
    AtomClass,
    AtomVerb,
    AtomOf,
    AtomAdj,
    QWhatIs,
    QWhat,
    QWhich,
}

pub(crate) struct Rule {
    pub lhs: Nt,
    pub rhs: &'static [Sym],
    pub tag: Tag,
}

use Nt::*;
use Sym::{N, T};
use Terminal::*;

const IS: Sym = T(Fw(F::Is));
const NOT: Sym = T(Fw(F::Not));
const THAT: Sym = T(Fw(F::That));
const OF: Sym = T(Fw(F::Of));
const ART: Sym = N(Art);

macro_rules! rule {
    ($lhs:expr, $tag:ident, [$($s:expr),* $(,)?]) => {
        Rule { lhs: $lhs, rhs: &[$($s),*], tag: Tag::$tag }
    };
}

pub(crate) static RULES: &[Rule] = &[
    rule!(Sentence, SentEvery, [T(Fw(F::Every)), T(NounSg), N(Vp), T(Period)]),
    rule!(Sentence, SentNo, [T(Fw(F::No)), T(NounSg), N(Vp), T(Period)]),
    rule!(Sentence, SentInst, [T(ProperName), N(Vp), T(Period)]),
    rule!(Sentence, SentRule, [T(Fw(F::If)), N(Atoms), T(Fw(F::Then)), N(Atom), T(Period)]),
    rule!(Sentence, SentQuestion, [N(Question), T(QMark)]),
    rule!(Vp, Pass, [N(VpBoth)]),
    rule!(Vp, Pass, [N(VpAnd)]),
    rule!(Vp, Pass, [N(VpOr)]),
    // A single verb phrase still accepts either coordinator. A chain
    // accepts its own kind, plus whatever its last member absorbs.
    rule!(VpBoth, Pass, [N(V1Any)]),
    rule!(VpBoth, VpAnd, [N(MAnd), T(Fw(F::And)), N(AndTailB)]),
    rule!(VpBoth, VpOr, [N(MOr), T(Fw(F::Or)), N(OrTailB)]),
    rule!(VpAnd, VpAnd, [N(MAnd), T(Fw(F::And)), N(AndTailA)]),
    rule!(VpOr, VpOr, [N(MOr), T(Fw(F::Or)), N(OrTailO)]),
    // a member followed by "and" must not absorb "and" itself
    rule!(MAnd, Pass, [N(V1Closed)]),
    rule!(MAnd, Pass, [N(V1OpenO)]),
    rule!(MOr, Pass, [N(V1Closed)]),
    rule!(MOr, Pass, [N(V1OpenA)]),
    rule!(AndTailB, Pass, [N(V1OpenO)]),
    rule!(AndTailB, Pass, [N(V1OpenB)]),
    rule!(AndTailB, VpAnd, [N(MAnd), T(Fw(F::And)), N(AndTailB)]),
    rule!(AndTailA, Pass, [N(V1Closed)]),
    rule!(AndTailA, Pass, [N(V1OpenA)]),
    rule!(AndTailA, VpAnd, [N(MAnd), T(Fw(F::And)), N(AndTailA)]),
    rule!(OrTailB, Pass, [N(V1OpenA)]),
    rule!(OrTailB, Pass, [N(V1OpenB)]),
    rule!(OrTailB, VpOr, [N(MOr), T(Fw(F::Or)), N(OrTailB)]),
    rule!(OrTailO, Pass, [N(V1Closed)]),
    rule!(OrTailO, Pass, [N(V1OpenO)]),
    rule!(OrTailO, VpOr, [N(MOr), T(Fw(F::Or)), N(OrTailO)]),
    rule!(V1Any, Pass, [N(V1Closed)]),
    rule!(V1Any, Pass, [N(V1OpenA)]),
    rule!(V1Any, Pass, [N(V1OpenO)]),
    rule!(V1Any, Pass, [N(V1OpenB)]),
    // simple verb phrases
    rule!(V1Closed, IsA, [IS, ART, T(NounSg)]),
    rule!(V1Closed, IsNotA, [IS, NOT, ART, T(NounSg)]),
    rule!(V1Closed, Verb, [T(Verb3), N(NpClosed)]),
    rule!(V1Closed, DoesNot, [T(Fw(F::Does)), NOT, T(VerbBare), N(NpClosed)]),
    rule!(V1Closed, IsOf, [IS, ART, T(OfNoun), OF, N(NpClosed)]),
    rule!(V1Closed, IsAdj, [IS, T(Adjective), N(NpClosed)]),
    rule!(V1OpenA, IsARel, [IS, ART, T(NounSg), THAT, N(VpAnd)]),
    rule!(V1OpenA, IsNotARel, [IS, NOT, ART, T(NounSg), THAT, N(VpAnd)]),
    rule!(V1OpenA, Verb, [T(Verb3), N(NpOpenA)]),
    rule!(V1OpenA, DoesNot, [T(Fw(F::Does)), NOT, T(VerbBare), N(NpOpenA)]),
    rule!(V1OpenA, IsOf, [IS, ART, T(OfNoun), OF, N(NpOpenA)]),
    rule!(V1OpenA, IsAdj, [IS, T(Adjective), N(NpOpenA)]),
    rule!(V1OpenO, IsARel, [IS, ART, T(NounSg), THAT, N(VpOr)]),
    rule!(V1OpenO, IsNotARel, [IS, NOT, ART, T(NounSg), THAT, N(VpOr)]),
    rule!(V1OpenO, Verb, [T(Verb3), N(NpOpenO)]),
    rule!(V1OpenO, DoesNot, [T(Fw(F::Does)), NOT, T(VerbBare), N(NpOpenO)]),
    rule!(V1OpenO, IsOf, [IS, ART, T(OfNoun), OF, N(NpOpenO)]),
    rule!(V1OpenO, IsAdj, [IS, T(Adjective), N(NpOpenO)]),
    rule!(V1OpenB, IsARel, [IS, ART, T(NounSg), THAT, N(VpBoth)]),
    rule!(V1OpenB, IsNotARel, [IS, NOT, ART, T(NounSg), THAT, N(VpBoth)]),
    rule!(V1OpenB, Verb, [T(Verb3), N(NpOpenB)]),
    rule!(V1OpenB, DoesNot, [T(Fw(F::Does)), NOT, T(VerbBare), N(NpOpenB)]),
    rule!(V1OpenB, IsOf, [IS, ART, T(OfNoun), OF, N(NpOpenB)]),
    rule!(V1OpenB, IsAdj, [IS, T(Adjective), N(NpOpenB)]),
    // noun phrases
    rule!(NpClosed, NpNamed, [T(ProperName)]),
    rule!(NpClosed, NpIndef, [ART, T(NounSg)]),
    rule!(NpOpenA, NpIndefRel, [ART, T(NounSg), THAT, N(VpAnd)]),
    rule!(NpOpenO, NpIndefRel, [ART, T(NounSg), THAT, N(VpOr)]),
    rule!(NpOpenB, NpIndefRel, [ART, T(NounSg), THAT, N(VpBoth)]),
    rule!(Np, Pass, [N(NpClosed)]),
    rule!(Np, Pass, [N(NpOpenA)]),
    rule!(Np, Pass, [N(NpOpenO)]),
    rule!(Np, Pass, [N(NpOpenB)]),
    rule!(Art, Article, [T(Fw(F::A))]),
    rule!(Art, Article, [T(Fw(F::An))]),
    // rules
    rule!(Atoms, AtomsOne, [N(Atom)]),
    rule!(Atoms, AtomsMore, [N(Atom), T(Fw(F::And)), N(Atoms)]),
    rule!(Atom, AtomClass, [T(Var), IS, ART, T(NounSg)]),
    rule!(Atom, AtomVerb, [T(Var), T(Verb3), T(Var)]),
    rule!(Atom, AtomOf, [T(Var), IS, ART, T(OfNoun), OF, T(Var)]),
    rule!(Atom, AtomAdj, [T(Var), IS, T(Adjective), T(Var)]),
    // questions
    rule!(Question, QWhatIs, [T(Fw(F::What)), IS, T(ProperName)]),
    rule!(Question, QWhat, [T(Fw(F::What)), N(VpQ)]),
    rule!(Question, QWhich, [T(Fw(F::Which)), T(NounPl), N(VpPl)]),
    rule!(VpQ, Verb, [T(Verb3), N(Np)]),
    rule!(VpQ, IsA, [IS, ART, T(NounSg)]),
    rule!(VpQ, IsARel, [IS, ART, T(NounSg), THAT, N(Vp)]),
    rule!(VpQ, IsOf, [IS, ART, T(OfNoun), OF, N(Np)]),
    rule!(VpQ, IsAdj, [IS, T(Adjective), N(Np)]),
    rule!(VpPl, Verb, [T(VerbBare), N(Np)]),
    rule!(VpPl, IsA, [IS, ART, T(NounSg)]),
    rule!(VpPl, IsARel, [IS, ART, T(NounSg), THAT, N(Vp)]),
    rule!(VpPl, IsOf, [IS, ART, T(OfNoun), OF, N(Np)]),
    rule!(VpPl, IsAdj, [IS, T(Adjective), N(Np)]),
];

/// The grammar restricted to rules whose symbols can all derive a terminal
/// string given which content terminals the lexicon can supply.
#[derive(Debug, Clone)]
pub(crate) struct ActiveGrammar {
    by_lhs: Vec<Vec<u16>>,
    min_len: [Option<usize>; Nt::COUNT],
}

impl ActiveGrammar {
    pub(crate) fn new(available: impl Fn(Terminal) -> bool) -> Self {
        let mut min_len: [Option<usize>; Nt::COUNT] = [None; Nt::COUNT];
        let sym_len = |s: &Sym, min_len: &[Option<usize>; Nt::COUNT]| match s {
            T(t) => available(*t).then_some(1),
            N(n) => min_len[*n as usize],
        };
        loop {
            let mut changed = false;
            for rule in RULES {
                let len: Option<usize> = rule.rhs.iter().map(|s| sym_len(s, &min_len)).sum();
                if let Some(len) = len {
                    let slot = &mut min_len[rule.lhs as usize];
                    if slot.is_none_or(|old| len < old) {
                        *slot = Some(len);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut by_lhs = vec![Vec::new(); Nt::COUNT];
        for (i, rule) in RULES.iter().enumerate() {
            if rule.rhs.iter().all(|s| sym_len(s, &min_len).is_some()) {
                by_lhs[rule.lhs as usize].push(i as u16);
            }
        }
        ActiveGrammar { by_lhs, min_len }
    }

    /// Every rule, regardless of lexicon.
    pub(crate) fn full() -> Self {
        Self::new(|_| true)
    }

    pub(crate) fn for_lexicon(lexicon: &crate::lexicon::Lexicon) -> Self {
        let mut present = std::collections::HashSet::new();
        for entry in lexicon.entries() {
            present.insert(entry.category);
        }
        Self::new(|t| match t.content_slot() {
            Some((cat, _)) => present.contains(&cat),
            None => true,
        })
    }

    pub(crate) fn rules_for(&self, nt: Nt) -> &[u16] {
        &self.by_lhs[nt as usize]
    }

    pub(crate) fn min_len(&self, nt: Nt) -> Option<usize> {
        self.min_len[nt as usize]
    }

    pub(crate) fn sym_min_len(&self, sym: &Sym) -> usize {
        match sym {
            T(_) => 1,
            N(n) => self.min_len(*n).unwrap_or(usize::MAX / 4),
        }
    }
}
