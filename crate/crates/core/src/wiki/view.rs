use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::lexicon::{EntityId, LexiconEntry, WordCategory};
use crate::semantics::{Axiom, ClassExpr, LogicForm};
use crate::verbalizer::{
    verbalize_answer, verbalize_hierarchy_edge, verbalize_membership, RenderedSentence, VerbalizeError,
};

use super::{Result, SentenceId, SentenceStatus, WikiError, WikiSentence, WikiState};

/// Inferred knowledge about one entity, excluding what is asserted directly.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Inferred {
    pub memberships: Vec<RenderedSentence>,
    pub superclasses: Vec<RenderedSentence>,
    pub subclasses: Vec<RenderedSentence>,
    pub instances: Vec<RenderedSentence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuestionAnswers {
    pub sentence_id: SentenceId,
    pub answers: Vec<RenderedSentence>,
}

/// Everything an article page shows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArticleView {
    pub entity: LexiconEntry,
    pub kb_version: u64,
    pub asserted: Vec<WikiSentence>,
    pub answers: Vec<QuestionAnswers>,
    pub inferred_memberships: Vec<RenderedSentence>,
    pub inferred_superclasses: Vec<RenderedSentence>,
    pub inferred_subclasses: Vec<RenderedSentence>,
    pub inferred_instances: Vec<RenderedSentence>,
}

fn sorted(mut v: Vec<RenderedSentence>) -> Vec<RenderedSentence> {
    v.sort_by(|a, b| a.text.cmp(&b.text));
    v
}

fn render_all<I, F>(ids: I, f: F) -> std::result::Result<Vec<RenderedSentence>, VerbalizeError>
where
    I: IntoIterator<Item = EntityId>,
    F: Fn(EntityId) -> std::result::Result<RenderedSentence, VerbalizeError>,
{
    ids.into_iter().map(f).collect::<std::result::Result<Vec<_>, _>>().map(sorted)
}

impl WikiState {
    fn asserted_axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.sentences.values().filter(|s| s.status == SentenceStatus::Accepted).flat_map(|s| s.axioms())
    }

    fn is_asserted(&self, axiom: &Axiom) -> bool {
        self.asserted_axioms().any(|a| a == axiom)
    }

    fn compute_inferred(&self, entity: EntityId, category: WordCategory) -> Result<Inferred> {
        let lex = &self.lexicon;
        let mut out = Inferred::default();
        match category {
            WordCategory::ProperName => {
                let classes = self.reasoner.classes_of(&self.kb, entity)?;
                let inferred = classes
                    .into_iter()
                    .filter(|c| !self.is_asserted(&Axiom::ClassAssertion(ClassExpr::Atom(*c), entity)));
                out.memberships = render_all(inferred, |c| verbalize_membership(entity, c, lex))?;
            }
            WordCategory::Noun => {
                let h = self.hierarchy()?;
                let atom = |c| ClassExpr::Atom(c);
                let equivalents: BTreeSet<EntityId> = h.equivalents(entity).into_iter().collect();
                let supers = h.superclasses(entity).into_iter().chain(equivalents.iter().copied());
                let supers = supers.filter(|c| !self.is_asserted(&Axiom::SubClassOf(atom(entity), atom(*c))));
                out.superclasses = render_all(supers, |c| verbalize_hierarchy_edge(entity, c, lex))?;
                let subs = h.subclasses(entity).into_iter().chain(equivalents.iter().copied());
                let subs = subs.filter(|c| !self.is_asserted(&Axiom::SubClassOf(atom(*c), atom(entity))));
                out.subclasses = render_all(subs, |c| verbalize_hierarchy_edge(c, entity, lex))?;
                let instances = self.reasoner.instances_of(&self.kb, &atom(entity))?;
                let instances =
                    instances.into_iter().filter(|i| !self.is_asserted(&Axiom::ClassAssertion(atom(entity), *i)));
                out.instances = render_all(instances, |i| verbalize_membership(i, entity, lex))?;
            }
            _ => {}
        }
        Ok(out)
    }

    fn inferred(&self, entity: EntityId, category: WordCategory) -> Result<Arc<Inferred>> {
        if let Some(hit) = self.cache.inferred.lock().expect("cache lock").get(&entity) {
            return Ok(hit.clone());
        }
        let fresh = Arc::new(self.compute_inferred(entity, category)?);
        self.cache.inferred.lock().expect("cache lock").insert(entity, fresh.clone());
        Ok(fresh)
    }

    /// Answers to a stored question, computed against the current knowledge base.
    pub fn answers(&self, sentence: &WikiSentence) -> Result<Vec<RenderedSentence>> {
        let LogicForm::Question(query) = &sentence.logic else {
            return Err(WikiError::NotAQuestion);
        };
        let answer = self.reasoner.answer(&self.kb, query)?;
        Ok(verbalize_answer(query, answer.ids(), &self.lexicon)?)
    }

    /// The article page for an entity: its sentences in insertion order,
    /// answers to its questions, and inferred facts not asserted directly.
    pub fn views(&self, entity: EntityId) -> Result<ArticleView> {
        let entry = self.lexicon.get(entity).ok_or(WikiError::UnknownEntity(entity))?.clone();
        let article = self.articles.get(&entity).ok_or(WikiError::UnknownEntity(entity))?;
        let asserted: Vec<WikiSentence> = article.sentence_ids.iter().map(|id| self.sentences[id].clone()).collect();
        let answers = asserted
            .iter()
            .filter(|s| s.status == SentenceStatus::Question)
            .map(|s| Ok(QuestionAnswers { sentence_id: s.id, answers: self.answers(s)? }))
            .collect::<Result<Vec<_>>>()?;
        let inferred = self.inferred(entity, entry.category)?;
        Ok(ArticleView {
            entity: entry,
            kb_version: self.kb_version,
            asserted,
            answers,
            inferred_memberships: inferred.memberships.clone(),
            inferred_superclasses: inferred.superclasses.clone(),
            inferred_subclasses: inferred.subclasses.clone(),
            inferred_instances: inferred.instances.clone(),
        })
    }
}
