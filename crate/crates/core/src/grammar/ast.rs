use crate::lexicon::EntityId;

use super::Variable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Every,
    No,
}

/// A parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SentenceAst {
    /// "Every/No <noun> <vp>."
    Quantified { quantifier: Quantifier, subject: EntityId, vp: Vp },
    /// "<ProperName> <vp>."
    Instance { subject: EntityId, vp: Vp },
    /// "If <atom> and ... then <atom>."
    Rule { body: Vec<RuleAtom>, head: RuleAtom },
    Question(QuestionAst),
}

/// Verb phrase. Coordinations are right-nested and never mix `And` with `Or`
/// within one chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Vp {
    IsA(Indefinite),
    IsNotA(Indefinite),
    Verb(EntityId, NounPhrase),
    DoesNotVerb(EntityId, NounPhrase),
    IsOf(EntityId, NounPhrase),
    IsAdj(EntityId, NounPhrase),
    And(Box<Vp>, Box<Vp>),
    Or(Box<Vp>, Box<Vp>),
}

/// "a/an <noun> [that <vp>]"
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Indefinite {
    pub noun: EntityId,
    pub relative: Option<Box<Vp>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NounPhrase {
    Named(EntityId),
    Indef(Indefinite),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleAtom {
    /// "X is a <noun>"
    Class(Variable, EntityId),
    /// "X <relation> Y"
    Role(Variable, EntityId, Variable),
}

/// Questions. The verb phrase of `WhatVp`/`WhichVp` has a gap in subject
/// position and is one of `Verb`, `IsA`, `IsOf`, `IsAdj`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuestionAst {
    WhatIs(EntityId),
    WhatVp(Vp),
    WhichVp(EntityId, Vp),
}

impl Indefinite {
    pub fn bare(noun: EntityId) -> Self {
        Indefinite { noun, relative: None }
    }

    pub fn with(noun: EntityId, relative: Vp) -> Self {
        Indefinite { noun, relative: Some(Box::new(relative)) }
    }
}

impl Vp {
    pub fn and(a: Vp, b: Vp) -> Vp {
        Vp::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Vp, b: Vp) -> Vp {
        Vp::Or(Box::new(a), Box::new(b))
    }
}

impl RuleAtom {
    pub fn variables(&self) -> Vec<Variable> {
        match self {
            RuleAtom::Class(v, _) => vec![*v],
            RuleAtom::Role(a, _, b) => vec![*a, *b],
        }
    }
}
