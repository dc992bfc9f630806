//! Compilation of sentence trees into logic.
//!
//! Declarative sentences become description-logic axioms, rule sentences
//! are kept as inert [`Rule`]s, and questions become [`Query`]s.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{Indefinite, NounPhrase, Quantifier, QuestionAst, RuleAtom, SentenceAst, Vp};
use crate::lexicon::EntityId;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassExpr {
    Thing,
    Atom(EntityId),
    Not(Box<ClassExpr>),
    And(Box<ClassExpr>, Box<ClassExpr>),
    Or(Box<ClassExpr>, Box<ClassExpr>),
    /// Some related individual (via the relation) belongs to the class.
    Exists(EntityId, Box<ClassExpr>),
}

impl ClassExpr {
    pub fn atom(id: EntityId) -> Self {
        ClassExpr::Atom(id)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: ClassExpr) -> Self {
        ClassExpr::Not(Box::new(e))
    }

    pub fn and(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(rel: EntityId, e: ClassExpr) -> Self {
        ClassExpr::Exists(rel, Box::new(e))
    }

    /// Rebuilds every `And`/`Or` chain right-nested.
    pub fn reassociated(&self) -> ClassExpr {
        fn chain(e: &ClassExpr, and: bool, out: &mut Vec<ClassExpr>) {
            match (e, and) {
                (ClassExpr::And(a, b), true) | (ClassExpr::Or(a, b), false) => {
                    chain(a, and, out);
                    chain(b, and, out);
                }
                _ => out.push(e.reassociated()),
            }
        }
        let rebuild = |e: &ClassExpr, and: bool| {
            let mut parts = Vec::new();
            chain(e, and, &mut parts);
            let mut parts = parts.into_iter().rev();
            let last = parts.next().expect("chain has members");
            parts.fold(last, |acc, p| if and { ClassExpr::and(p, acc) } else { ClassExpr::or(p, acc) })
        };
        match self {
            ClassExpr::Thing | ClassExpr::Atom(_) => self.clone(),
            ClassExpr::Not(e) => ClassExpr::not(e.reassociated()),
            ClassExpr::And(..) => rebuild(self, true),
            ClassExpr::Or(..) => rebuild(self, false),
            ClassExpr::Exists(r, e) => ClassExpr::exists(*r, e.reassociated()),
        }
    }

    fn collect_entities(&self, out: &mut BTreeSet<EntityId>) {
        match self {
            ClassExpr::Thing => {}
            ClassExpr::Atom(id) => {
                out.insert(*id);
            }
            ClassExpr::Not(e) => e.collect_entities(out),
            ClassExpr::And(a, b) | ClassExpr::Or(a, b) => {
                a.collect_entities(out);
                b.collect_entities(out);
            }
            ClassExpr::Exists(r, e) => {
                out.insert(*r);
                e.collect_entities(out);
            }
        }
    }

    /// Atomic classes (not relations) mentioned in the expression.
    pub fn atoms(&self, out: &mut BTreeSet<EntityId>) {
        match self {
            ClassExpr::Thing => {}
            ClassExpr::Atom(id) => {
                out.insert(*id);
            }
            ClassExpr::Not(e) | ClassExpr::Exists(_, e) => e.atoms(out),
            ClassExpr::And(a, b) | ClassExpr::Or(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    pub fn relations(&self, out: &mut BTreeSet<EntityId>) {
        match self {
            ClassExpr::Thing | ClassExpr::Atom(_) => {}
            ClassExpr::Not(e) => e.relations(out),
            ClassExpr::Exists(r, e) => {
                out.insert(*r);
                e.relations(out);
            }
            ClassExpr::And(a, b) | ClassExpr::Or(a, b) => {
                a.relations(out);
                b.relations(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ClassExpr::Thing | ClassExpr::Atom(_) => 0,
            ClassExpr::Not(e) | ClassExpr::Exists(_, e) => 1 + e.depth(),
            ClassExpr::And(a, b) | ClassExpr::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Class expression in negation normal form; negation only occurs on atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NnfExpr {
    Thing,
    Nothing,
    Atom(EntityId),
    NotAtom(EntityId),
    And(Box<NnfExpr>, Box<NnfExpr>),
    Or(Box<NnfExpr>, Box<NnfExpr>),
    Exists(EntityId, Box<NnfExpr>),
    /// Every related individual belongs to the class.
    Forall(EntityId, Box<NnfExpr>),
}

impl NnfExpr {
    /// The negation normal form of the complement.
    pub fn negate(&self) -> NnfExpr {
        match self {
            NnfExpr::Thing => NnfExpr::Nothing,
            NnfExpr::Nothing => NnfExpr::Thing,
            NnfExpr::Atom(a) => NnfExpr::NotAtom(*a),
            NnfExpr::NotAtom(a) => NnfExpr::Atom(*a),
            NnfExpr::And(a, b) => NnfExpr::Or(Box::new(a.negate()), Box::new(b.negate())),
            NnfExpr::Or(a, b) => NnfExpr::And(Box::new(a.negate()), Box::new(b.negate())),
            NnfExpr::Exists(r, e) => NnfExpr::Forall(*r, Box::new(e.negate())),
            NnfExpr::Forall(r, e) => NnfExpr::Exists(*r, Box::new(e.negate())),
        }
    }

    /// Re-expresses the form with the public constructors (`Forall` as
    /// not-exists-not, `Nothing` as not-thing).
    pub fn to_class_expr(&self) -> ClassExpr {
        match self {
            NnfExpr::Thing => ClassExpr::Thing,
            NnfExpr::Nothing => ClassExpr::not(ClassExpr::Thing),
            NnfExpr::Atom(a) => ClassExpr::Atom(*a),
            NnfExpr::NotAtom(a) => ClassExpr::not(ClassExpr::Atom(*a)),
            NnfExpr::And(a, b) => ClassExpr::and(a.to_class_expr(), b.to_class_expr()),
            NnfExpr::Or(a, b) => ClassExpr::or(a.to_class_expr(), b.to_class_expr()),
            NnfExpr::Exists(r, e) => ClassExpr::exists(*r, e.to_class_expr()),
            NnfExpr::Forall(r, e) => ClassExpr::not(ClassExpr::exists(*r, e.negate().to_class_expr())),
        }
    }
}

/// Negation normal form.
pub fn nnf(e: &ClassExpr) -> NnfExpr {
    match e {
        ClassExpr::Thing => NnfExpr::Thing,
        ClassExpr::Atom(a) => NnfExpr::Atom(*a),
        ClassExpr::Not(inner) => nnf(inner).negate(),
        ClassExpr::And(a, b) => NnfExpr::And(Box::new(nnf(a)), Box::new(nnf(b))),
        ClassExpr::Or(a, b) => NnfExpr::Or(Box::new(nnf(a)), Box::new(nnf(b))),
        ClassExpr::Exists(r, inner) => NnfExpr::Exists(*r, Box::new(nnf(inner))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    SubClassOf(ClassExpr, ClassExpr),
    ClassAssertion(ClassExpr, EntityId),
    /// relation, subject, object
    PropertyAssertion(EntityId, EntityId, EntityId),
}

impl Axiom {
    pub fn entities(&self) -> BTreeSet<EntityId> {
        let mut out = BTreeSet::new();
        match self {
            Axiom::SubClassOf(a, b) => {
                a.collect_entities(&mut out);
                b.collect_entities(&mut out);
            }
            Axiom::ClassAssertion(c, i) => {
                c.collect_entities(&mut out);
                out.insert(*i);
            }
            Axiom::PropertyAssertion(r, a, b) => {
                out.extend([*r, *a, *b]);
            }
        }
        out
    }

    pub fn reassociated(&self) -> Axiom {
        match self {
            Axiom::SubClassOf(a, b) => Axiom::SubClassOf(a.reassociated(), b.reassociated()),
            Axiom::ClassAssertion(c, i) => Axiom::ClassAssertion(c.reassociated(), *i),
            Axiom::PropertyAssertion(..) => self.clone(),
        }
    }
}

/// A rule sentence, stored as parsed and never interpreted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub body: Vec<RuleAtom>,
    pub head: RuleAtom,
}

/// What a question asks of the subject gap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    /// "... <relation> <ProperName>"
    Related { relation: EntityId, object: EntityId },
    /// "... is a <noun>" and other class-valued conditions
    Member(ClassExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Query {
    /// "What is <ProperName>?"
    ClassesOf(EntityId),
    /// "What/Which <noun> <vp>?"; `pattern` keeps the verb phrase for rendering answers.
    SubjectsSuchThat { restriction: Option<EntityId>, condition: Condition, pattern: Vp },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LogicForm {
    Axioms(Vec<Axiom>),
    BeyondFragment(Rule),
    Question(Query),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FragmentLimit {
    /// A proper name inside a class description would need nominals.
    NamedObjectInClass,
    /// "<Name> is ... or ..." would be a disjunctive assertion.
    DisjunctiveAssertion,
    /// "<Name> does not <verb> <Name>" would be a negative relation assertion.
    NegatedRelationAssertion,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("sentence cannot be expressed in the reasoner's logic: {}", describe(.0))]
    OutOfFragment(FragmentLimit),
}

fn describe(limit: &FragmentLimit) -> &'static str {
    match limit {
        FragmentLimit::NamedObjectInClass => "a proper name is used inside a class description",
        FragmentLimit::DisjunctiveAssertion => "an individual is described with \"or\"",
        FragmentLimit::NegatedRelationAssertion => "a relation between two named individuals is negated",
    }
}

type Result<T> = std::result::Result<T, TranslateError>;

fn out_of_fragment<T>(limit: FragmentLimit) -> Result<T> {
    Err(TranslateError::OutOfFragment(limit))
}

/// Class of the individuals described by an indefinite noun phrase.
fn indef_class(indef: &Indefinite) -> Result<ClassExpr> {
    let noun = ClassExpr::Atom(indef.noun);
    match &indef.relative {
        None => Ok(noun),
        Some(vp) => Ok(ClassExpr::and(noun, vp_class(vp)?)),
    }
}

fn np_class(np: &NounPhrase) -> Result<ClassExpr> {
    match np {
        NounPhrase::Named(_) => out_of_fragment(FragmentLimit::NamedObjectInClass),
        NounPhrase::Indef(indef) => indef_class(indef),
    }
}

/// Class of the subjects a verb phrase is true of.
pub fn vp_class(vp: &Vp) -> Result<ClassExpr> {
    Ok(match vp {
        Vp::IsA(indef) => indef_class(indef)?,
        Vp::IsNotA(indef) => ClassExpr::not(indef_class(indef)?),
        Vp::Verb(r, np) | Vp::IsOf(r, np) | Vp::IsAdj(r, np) => ClassExpr::exists(*r, np_class(np)?),
        Vp::DoesNotVerb(r, np) => ClassExpr::not(ClassExpr::exists(*r, np_class(np)?)),
        Vp::And(a, b) => ClassExpr::and(vp_class(a)?, vp_class(b)?),
        Vp::Or(a, b) => ClassExpr::or(vp_class(a)?, vp_class(b)?),
    })
}

fn instance_axioms(subject: EntityId, vp: &Vp, out: &mut Vec<Axiom>) -> Result<()> {
    match vp {
        Vp::And(a, b) => {
            instance_axioms(subject, a, out)?;
            instance_axioms(subject, b, out)?;
        }
        Vp::Or(..) => return out_of_fragment(FragmentLimit::DisjunctiveAssertion),
        Vp::Verb(r, NounPhrase::Named(q)) | Vp::IsOf(r, NounPhrase::Named(q)) | Vp::IsAdj(r, NounPhrase::Named(q)) => {
            out.push(Axiom::PropertyAssertion(*r, subject, *q));
        }
        Vp::DoesNotVerb(_, NounPhrase::Named(_)) => {
            return out_of_fragment(FragmentLimit::NegatedRelationAssertion);
        }
        other => out.push(Axiom::ClassAssertion(vp_class(other)?, subject)),
    }
    Ok(())
}

fn condition(vp: &Vp) -> Result<Condition> {
    match vp {
        Vp::Verb(r, NounPhrase::Named(q)) | Vp::IsOf(r, NounPhrase::Named(q)) | Vp::IsAdj(r, NounPhrase::Named(q)) => {
            Ok(Condition::Related { relation: *r, object: *q })
        }
        other => Ok(Condition::Member(vp_class(other)?)),
    }
}

/// Compiles a sentence tree.
pub fn translate(ast: &SentenceAst) -> Result<LogicForm> {
    Ok(match ast {
        SentenceAst::Quantified { quantifier, subject, vp } => {
            let class = vp_class(vp)?;
            let rhs = match quantifier {
                Quantifier::Every => class,
                Quantifier::No => ClassExpr::not(class),
            };
            LogicForm::Axioms(vec![Axiom::SubClassOf(ClassExpr::Atom(*subject), rhs)])
        }
        SentenceAst::Instance { subject, vp } => {
            let mut axioms = Vec::new();
            instance_axioms(*subject, vp, &mut axioms)?;
            LogicForm::Axioms(axioms)
        }
        SentenceAst::Rule { body, head } => LogicForm::BeyondFragment(Rule { body: body.clone(), head: head.clone() }),
        SentenceAst::Question(q) => LogicForm::Question(match q {
            QuestionAst::WhatIs(p) => Query::ClassesOf(*p),
            QuestionAst::WhatVp(vp) => {
                Query::SubjectsSuchThat { restriction: None, condition: condition(vp)?, pattern: vp.clone() }
            }
            QuestionAst::WhichVp(noun, vp) => {
                Query::SubjectsSuchThat { restriction: Some(*noun), condition: condition(vp)?, pattern: vp.clone() }
            }
        }),
    })
}

fn vp_entities(vp: &Vp, out: &mut BTreeSet<EntityId>) {
    let indef = |i: &Indefinite, out: &mut BTreeSet<EntityId>| {
        out.insert(i.noun);
        if let Some(rel) = &i.relative {
            vp_entities(rel, out);
        }
    };
    match vp {
        Vp::IsA(i) | Vp::IsNotA(i) => indef(i, out),
        Vp::Verb(r, np) | Vp::DoesNotVerb(r, np) | Vp::IsOf(r, np) | Vp::IsAdj(r, np) => {
            out.insert(*r);
            match np {
                NounPhrase::Named(p) => {
                    out.insert(*p);
                }
                NounPhrase::Indef(i) => indef(i, out),
            }
        }
        Vp::And(a, b) | Vp::Or(a, b) => {
            vp_entities(a, out);
            vp_entities(b, out);
        }
    }
}

/// Every entity the logic form mentions.
pub fn entities_of(form: &LogicForm) -> BTreeSet<EntityId> {
    let mut out = BTreeSet::new();
    match form {
        LogicForm::Axioms(axioms) => {
            for a in axioms {
                out.extend(a.entities());
            }
        }
        LogicForm::BeyondFragment(rule) => {
            for atom in rule.body.iter().chain(std::iter::once(&rule.head)) {
                match atom {
                    RuleAtom::Class(_, n) => out.insert(*n),
                    RuleAtom::Role(_, r, _) => out.insert(*r),
                };
            }
        }
        LogicForm::Question(Query::ClassesOf(p)) => {
            out.insert(*p);
        }
        LogicForm::Question(Query::SubjectsSuchThat { restriction, pattern, .. }) => {
            out.extend(*restriction);
            vp_entities(pattern, &mut out);
        }
    }
    out
}
