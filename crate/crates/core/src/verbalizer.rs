//! Rendering of axioms, inferred facts and answers as sentences.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::grammar::{render, tokens_to_text, Indefinite, NounPhrase, Quantifier, SentenceAst, Token, Vp};
use crate::lexicon::{EntityId, Lexicon, WordCategory};
use crate::semantics::{Axiom, ClassExpr, Query};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RenderedSentence {
    pub tokens: Vec<Token>,
    pub text: String,
}

impl RenderedSentence {
    pub fn from_ast(ast: &SentenceAst, lexicon: &Lexicon) -> Self {
        let tokens = render(ast, lexicon);
        let text = tokens_to_text(&tokens, lexicon);
        RenderedSentence { tokens, text }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerbalizeError {
    #[error("no sentence expresses this axiom")]
    NotVerbalizable,
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
    #[error("a class is never rendered as its own superclass")]
    ReflexiveEdge,
}

type Result<T> = std::result::Result<T, VerbalizeError>;

struct Verbalizer<'a> {
    lexicon: &'a Lexicon,
}

fn flatten(e: &ClassExpr, and: bool, out: &mut Vec<ClassExpr>) {
    match (e, and) {
        (ClassExpr::And(a, b), true) | (ClassExpr::Or(a, b), false) => {
            flatten(a, and, out);
            flatten(b, and, out);
        }
        _ => out.push(e.clone()),
    }
}

fn join_and(members: &[ClassExpr]) -> ClassExpr {
    let (last, rest) = members.split_last().expect("non-empty chain");
    rest.iter().rev().fold(last.clone(), |acc, m| ClassExpr::and(m.clone(), acc))
}

fn coordinate(parts: Vec<Vp>, and: bool) -> Vp {
    let mut parts = parts.into_iter().rev();
    let last = parts.next().expect("non-empty coordination");
    parts.fold(last, |acc, p| if and { Vp::and(p, acc) } else { Vp::or(p, acc) })
}

/// Whether a coordinator following the simple phrase `v1` would continue
/// inside its relative clause rather than the enclosing coordination.
fn absorbs(v1: &Vp, and: bool) -> bool {
    let relative = match v1 {
        Vp::IsA(i) | Vp::IsNotA(i) => i.relative.as_deref(),
        Vp::Verb(_, np) | Vp::DoesNotVerb(_, np) | Vp::IsOf(_, np) | Vp::IsAdj(_, np) => match np {
            NounPhrase::Indef(i) => i.relative.as_deref(),
            NounPhrase::Named(_) => None,
        },
        Vp::And(..) | Vp::Or(..) => unreachable!("called on simple phrases only"),
    };
    let Some(mut chain) = relative else {
        return false;
    };
    // a lone phrase takes either coordinator, a chain only its own kind
    let accepts = match chain {
        Vp::And(..) => and,
        Vp::Or(..) => !and,
        _ => true,
    };
    while let Vp::And(_, rest) | Vp::Or(_, rest) = chain {
        chain = rest;
    }
    accepts || absorbs(chain, and)
}

impl Verbalizer<'_> {
    fn category(&self, id: EntityId) -> Result<WordCategory> {
        self.lexicon.category(id).ok_or(VerbalizeError::UnknownEntity(id))
    }

    fn expect(&self, id: EntityId, category: WordCategory) -> Result<()> {
        if self.category(id)? == category {
            Ok(())
        } else {
            Err(VerbalizeError::NotVerbalizable)
        }
    }

    fn noun(&self, e: &ClassExpr) -> Result<Option<EntityId>> {
        match e {
            ClassExpr::Atom(n) => self.expect(*n, WordCategory::Noun).map(|_| Some(*n)),
            _ => Ok(None),
        }
    }

    /// "a <noun> [that <vp>]" for `Atom(noun)` or `And(Atom(noun), rest)`.
    fn indefinite(&self, e: &ClassExpr) -> Result<Indefinite> {
        let mut members = Vec::new();
        flatten(e, true, &mut members);
        let Some(noun) = self.noun(&members[0])? else {
            return Err(VerbalizeError::NotVerbalizable);
        };
        if members.len() == 1 {
            return Ok(Indefinite::bare(noun));
        }
        Ok(Indefinite::with(noun, self.vp(&join_and(&members[1..]))?))
    }

    /// A simple (uncoordinated) verb phrase with class `e`.
    fn v1(&self, e: &ClassExpr) -> Result<Vp> {
        match e {
            ClassExpr::Atom(_) | ClassExpr::And(..) => Ok(Vp::IsA(self.indefinite(e)?)),
            ClassExpr::Exists(r, d) => {
                let np = NounPhrase::Indef(self.indefinite(d)?);
                Ok(match self.category(*r)? {
                    WordCategory::TransitiveVerb => Vp::Verb(*r, np),
                    WordCategory::OfConstruct => Vp::IsOf(*r, np),
                    WordCategory::TransitiveAdjective => Vp::IsAdj(*r, np),
                    _ => return Err(VerbalizeError::NotVerbalizable),
                })
            }
            ClassExpr::Not(inner) => match inner.as_ref() {
                ClassExpr::Atom(_) | ClassExpr::And(..) => Ok(Vp::IsNotA(self.indefinite(inner)?)),
                ClassExpr::Exists(r, d) => {
                    self.expect(*r, WordCategory::TransitiveVerb)?;
                    Ok(Vp::DoesNotVerb(*r, NounPhrase::Indef(self.indefinite(d)?)))
                }
                _ => Err(VerbalizeError::NotVerbalizable),
            },
            ClassExpr::Or(..) | ClassExpr::Thing => Err(VerbalizeError::NotVerbalizable),
        }
    }

    /// A verb phrase, possibly coordinated, with class `e`.
    fn vp(&self, e: &ClassExpr) -> Result<Vp> {
        match e {
            ClassExpr::Or(..) => {
                let mut members = Vec::new();
                flatten(e, false, &mut members);
                let parts = members.iter().map(|m| self.v1(m)).collect::<Result<Vec<_>>>()?;
                if parts[..parts.len() - 1].iter().any(|p| absorbs(p, false)) {
                    return Err(VerbalizeError::NotVerbalizable);
                }
                Ok(coordinate(parts, false))
            }
            ClassExpr::And(..) => {
                let mut members = Vec::new();
                flatten(e, true, &mut members);
                let k = members.len();
                // members[..j] become separate conjuncts; members[j..] the last one
                'split: for j in (0..k).rev() {
                    let mut parts = Vec::with_capacity(j + 1);
                    for m in &members[..j] {
                        match self.v1(m) {
                            Ok(vp) if !absorbs(&vp, true) => parts.push(vp),
                            Ok(_) | Err(VerbalizeError::NotVerbalizable) => continue 'split,
                            Err(other) => return Err(other),
                        }
                    }
                    match self.v1(&join_and(&members[j..])) {
                        Ok(vp) => parts.push(vp),
                        Err(VerbalizeError::NotVerbalizable) => continue,
                        Err(other) => return Err(other),
                    }
                    return Ok(coordinate(parts, true));
                }
                Err(VerbalizeError::NotVerbalizable)
            }
            _ => self.v1(e),
        }
    }

    fn axiom(&self, a: &Axiom) -> Result<SentenceAst> {
        match a {
            Axiom::SubClassOf(sub, sup) => {
                let Some(subject) = self.noun(sub)? else {
                    return Err(VerbalizeError::NotVerbalizable);
                };
                if let ClassExpr::Not(inner) = sup {
                    if let Ok(vp) = self.vp(inner) {
                        return Ok(SentenceAst::Quantified { quantifier: Quantifier::No, subject, vp });
                    }
                }
                Ok(SentenceAst::Quantified { quantifier: Quantifier::Every, subject, vp: self.vp(sup)? })
            }
            Axiom::ClassAssertion(class, ind) => {
                self.expect(*ind, WordCategory::ProperName)?;
                Ok(SentenceAst::Instance { subject: *ind, vp: self.v1(class)? })
            }
            Axiom::PropertyAssertion(r, a, b) => {
                self.expect(*a, WordCategory::ProperName)?;
                self.expect(*b, WordCategory::ProperName)?;
                let np = NounPhrase::Named(*b);
                let vp = match self.category(*r)? {
                    WordCategory::TransitiveVerb => Vp::Verb(*r, np),
                    WordCategory::OfConstruct => Vp::IsOf(*r, np),
                    WordCategory::TransitiveAdjective => Vp::IsAdj(*r, np),
                    _ => return Err(VerbalizeError::NotVerbalizable),
                };
                Ok(SentenceAst::Instance { subject: *a, vp })
            }
        }
    }
}

/// The canonical sentence for an axiom.
pub fn verbalize_axiom(a: &Axiom, lexicon: &Lexicon) -> Result<RenderedSentence> {
    let ast = Verbalizer { lexicon }.axiom(a)?;
    Ok(RenderedSentence::from_ast(&ast, lexicon))
}

/// "Every <sub> is a/an <sup>."
pub fn verbalize_hierarchy_edge(sub: EntityId, sup: EntityId, lexicon: &Lexicon) -> Result<RenderedSentence> {
    if sub == sup {
        return Err(VerbalizeError::ReflexiveEdge);
    }
    verbalize_axiom(&Axiom::SubClassOf(ClassExpr::Atom(sub), ClassExpr::Atom(sup)), lexicon)
}

/// "<Ind> is a/an <noun>."
pub fn verbalize_membership(ind: EntityId, noun: EntityId, lexicon: &Lexicon) -> Result<RenderedSentence> {
    verbalize_axiom(&Axiom::ClassAssertion(ClassExpr::Atom(noun), ind), lexicon)
}

/// One sentence per answer, sorted by text.
pub fn verbalize_answer(q: &Query, answers: &BTreeSet<EntityId>, lexicon: &Lexicon) -> Result<Vec<RenderedSentence>> {
    let mut out = answers
        .iter()
        .map(|&id| match q {
            Query::ClassesOf(ind) => verbalize_membership(*ind, id, lexicon),
            Query::SubjectsSuchThat { pattern, .. } => {
                lexicon.category(id).ok_or(VerbalizeError::UnknownEntity(id))?;
                Ok(RenderedSentence::from_ast(&SentenceAst::Instance { subject: id, vp: pattern.clone() }, lexicon))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.text.cmp(&b.text));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse, tokenize};
    use crate::lexicon::{forms, FormSlot};
    use crate::semantics::{translate, Condition, LogicForm};

    struct Geo {
        lex: Lexicon,
        zurich: EntityId,
        switzerland: EntityId,
        germany: EntityId,
        city: EntityId,
        country: EntityId,
        area: EntityId,
        borders: EntityId,
        part: EntityId,
    }

    fn geo() -> Geo {
        use WordCategory::*;
        let mut lex = Lexicon::new();
        let mut add = |cat, f| lex.add_word(cat, f).unwrap().entity_id;
        let zurich = add(ProperName, forms([(FormSlot::Base, "Zurich")]));
        let switzerland = add(ProperName, forms([(FormSlot::Base, "Switzerland")]));
        let germany = add(ProperName, forms([(FormSlot::Base, "Germany")]));
        let city = add(Noun, forms([(FormSlot::Singular, "city"), (FormSlot::Plural, "cities")]));
        let country = add(Noun, forms([(FormSlot::Singular, "country"), (FormSlot::Plural, "countries")]));
        let area = add(Noun, forms([(FormSlot::Singular, "area"), (FormSlot::Plural, "areas")]));
        let borders = add(TransitiveVerb, forms([(FormSlot::ThirdSg, "borders"), (FormSlot::Bare, "border")]));
        let part = add(OfConstruct, forms([(FormSlot::Base, "part")]));
        Geo { lex, zurich, switzerland, germany, city, country, area, borders, part }
    }

    fn text(a: &Axiom, lex: &Lexicon) -> String {
        verbalize_axiom(a, lex).unwrap().text
    }

    fn round_trip(a: &Axiom, lex: &Lexicon) {
        let r = verbalize_axiom(a, lex).unwrap();
        let back = translate(&parse(&r.tokens).unwrap()).unwrap();
        assert_eq!(back, LogicForm::Axioms(vec![a.reassociated()]), "{}", r.text);
        assert_eq!(tokenize(&r.text, lex).unwrap(), r.tokens);
    }

    #[test]
    fn spec_examples() {
        let g = geo();
        let at = ClassExpr::Atom;
        assert_eq!(text(&Axiom::ClassAssertion(at(g.country), g.switzerland), &g.lex), "Switzerland is a country.");
        assert_eq!(text(&Axiom::SubClassOf(at(g.city), at(g.area)), &g.lex), "Every city is an area.");
        assert_eq!(
            verbalize_axiom(&Axiom::SubClassOf(ClassExpr::exists(g.borders, at(g.city)), at(g.area)), &g.lex),
            Err(VerbalizeError::NotVerbalizable)
        );
        assert_eq!(verbalize_hierarchy_edge(g.city, g.area, &g.lex).unwrap().text, "Every city is an area.");
        assert_eq!(verbalize_membership(g.zurich, g.city, &g.lex).unwrap().text, "Zurich is a city.");
        assert_eq!(verbalize_hierarchy_edge(g.country, g.country, &g.lex), Err(VerbalizeError::ReflexiveEdge));
    }

    #[test]
    fn answers() {
        let g = geo();
        let q = Query::ClassesOf(g.switzerland);
        let out = verbalize_answer(&q, &BTreeSet::from([g.country]), &g.lex).unwrap();
        assert_eq!(out.iter().map(|r| r.text.as_str()).collect::<Vec<_>>(), ["Switzerland is a country."]);
        let q = Query::SubjectsSuchThat {
            restriction: Some(g.country),
            condition: Condition::Related { relation: g.borders, object: g.switzerland },
            pattern: Vp::Verb(g.borders, NounPhrase::Named(g.switzerland)),
        };
        let out = verbalize_answer(&q, &BTreeSet::from([g.germany]), &g.lex).unwrap();
        assert_eq!(out[0].text, "Germany borders Switzerland.");
        assert!(verbalize_answer(&q, &BTreeSet::new(), &g.lex).unwrap().is_empty());
        let out = verbalize_answer(&Query::ClassesOf(g.zurich), &BTreeSet::from([g.area, g.city]), &g.lex).unwrap();
        assert_eq!(out.iter().map(|r| r.text.as_str()).collect::<Vec<_>>(), ["Zurich is a city.", "Zurich is an area."]);
    }

    #[test]
    fn complex_shapes_round_trip() {
        let g = geo();
        let at = ClassExpr::Atom;
        let part_of_country = ClassExpr::exists(g.part, at(g.country));
        let shapes = [
            Axiom::SubClassOf(at(g.city), ClassExpr::not(at(g.country))),
            Axiom::SubClassOf(at(g.city), ClassExpr::and(at(g.area), part_of_country.clone())),
            Axiom::SubClassOf(
                at(g.country),
                ClassExpr::and(at(g.area), ClassExpr::and(at(g.city), ClassExpr::or(at(g.area), part_of_country.clone()))),
            ),
            Axiom::SubClassOf(at(g.city), ClassExpr::not(ClassExpr::exists(g.part, at(g.country)))),
            Axiom::SubClassOf(at(g.city), ClassExpr::or(at(g.area), ClassExpr::not(at(g.country)))),
            Axiom::ClassAssertion(ClassExpr::and(at(g.city), ClassExpr::not(at(g.country))), g.zurich),
            Axiom::ClassAssertion(ClassExpr::not(ClassExpr::exists(g.borders, at(g.country))), g.zurich),
            Axiom::ClassAssertion(ClassExpr::exists(g.borders, ClassExpr::and(at(g.country), part_of_country)), g.zurich),
            Axiom::PropertyAssertion(g.part, g.switzerland, g.zurich),
            Axiom::SubClassOf(
                at(g.city),
                ClassExpr::and(ClassExpr::and(at(g.area), at(g.country)), at(g.city)),
            ),
        ];
        for a in &shapes {
            round_trip(a, &g.lex);
        }
    }

    #[test]
    fn no_form_for_negations() {
        let g = geo();
        let at = ClassExpr::Atom;
        let a = Axiom::SubClassOf(at(g.city), ClassExpr::not(at(g.country)));
        assert_eq!(text(&a, &g.lex), "No city is a country.");
        let a = Axiom::SubClassOf(at(g.city), ClassExpr::not(ClassExpr::exists(g.part, at(g.country))));
        assert_eq!(text(&a, &g.lex), "No city is a part of a country.");
    }

    #[test]
    fn out_of_image() {
        let g = geo();
        let at = ClassExpr::Atom;
        for a in [
            Axiom::ClassAssertion(ClassExpr::or(at(g.city), at(g.area)), g.zurich),
            Axiom::ClassAssertion(ClassExpr::Thing, g.zurich),
            Axiom::SubClassOf(at(g.city), ClassExpr::not(ClassExpr::exists(g.part, ClassExpr::Thing))),
            Axiom::ClassAssertion(at(g.city), g.city),
        ] {
            assert_eq!(verbalize_axiom(&a, &g.lex), Err(VerbalizeError::NotVerbalizable), "{a:?}");
        }
    }
}
