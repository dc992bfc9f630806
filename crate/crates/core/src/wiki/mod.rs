//! Articles, the sentence pipeline and the knowledge base they feed.
//!
//! A [`WikiState`] is a plain value: mutations take `&mut self`, and
//! [`Wiki`] turns that into single-writer, snapshot-reading access.
//! Reasoning results for a state are cached inside it and dropped whenever
//! the state is cloned for the next mutation.

mod handle;
mod store;
mod view;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{parse, tokens_to_text, GrammarError, Token, TokenRef};
use crate::lexicon::{EntityId, Forms, Lexicon, LexiconEntry, LexiconError, WordCategory};
use crate::reasoner::{Hierarchy, KnowledgeBase, Reasoner, ReasonerError};
use crate::semantics::{entities_of, translate, Axiom, LogicForm, TranslateError};
use crate::verbalizer::{verbalize_answer, RenderedSentence, VerbalizeError};

pub use handle::Wiki;
pub use store::{StoreDocument, FORMAT_VERSION};
pub use view::{ArticleView, QuestionAnswers};

#[derive(Debug, Error)]
pub enum WikiError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Verbalize(#[from] VerbalizeError),
    #[error("the sentence does not mention entity {0}")]
    HomeEntityNotMentioned(EntityId),
    #[error("unknown sentence {0}")]
    UnknownSentence(SentenceId),
    #[error("sentence {0} is not rejected")]
    NotRejected(SentenceId),
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
    #[error("entity {0} is used by {1} sentence(s)")]
    EntityInUse(EntityId, usize),
    #[error("not a question")]
    NotAQuestion,
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad store file: {0}")]
    Format(String),
}

impl WikiError {
    /// Stable name of the error kind, as used on the wire.
    pub fn code(&self) -> &'static str {
        match self {
            WikiError::Grammar(GrammarError::UnknownWord { .. }) => "UnknownWord",
            WikiError::Grammar(GrammarError::SyntaxError { .. }) => "SyntaxError",
            WikiError::Grammar(GrammarError::AmbiguityError) => "AmbiguityError",
            WikiError::Grammar(GrammarError::DeadPrefix) => "DeadPrefix",
            WikiError::Translate(TranslateError::OutOfFragment(_)) => "OutOfFragment",
            WikiError::Lexicon(e) => match e {
                LexiconError::MissingForm { .. } => "MissingForm",
                LexiconError::UnexpectedForm { .. } => "UnexpectedForm",
                LexiconError::MalformedSurface(_) => "MalformedSurface",
                LexiconError::DuplicateSurface(_) => "DuplicateSurface",
                LexiconError::ReservedWord(_) => "ReservedWord",
                LexiconError::UnknownEntity(_) => "UnknownEntity",
            },
            WikiError::Reasoner(ReasonerError::ResourceLimit { .. }) => "ResourceLimit",
            WikiError::Verbalize(_) => "NotVerbalizable",
            WikiError::HomeEntityNotMentioned(_) => "HomeEntityNotMentioned",
            WikiError::UnknownSentence(_) => "UnknownSentence",
            WikiError::NotRejected(_) => "NotRejected",
            WikiError::UnknownEntity(_) => "UnknownEntity",
            WikiError::EntityInUse(..) => "EntityInUse",
            WikiError::NotAQuestion => "NotAQuestion",
            WikiError::Io { .. } => "IoError",
            WikiError::Format(_) => "FormatError",
        }
    }

    /// 1-based token position, for errors that have one.
    pub fn position(&self) -> Option<usize> {
        match self {
            WikiError::Grammar(GrammarError::UnknownWord { position, .. })
            | WikiError::Grammar(GrammarError::SyntaxError { position, .. }) => Some(*position),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, WikiError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SentenceId(pub u64);

impl std::fmt::Display for SentenceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentenceStatus {
    Accepted,
    BeyondFragment,
    RejectedInconsistent,
    Question,
}

impl SentenceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SentenceStatus::Accepted => "accepted",
            SentenceStatus::BeyondFragment => "beyond-fragment",
            SentenceStatus::RejectedInconsistent => "rejected",
            SentenceStatus::Question => "question",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WikiSentence {
    pub id: SentenceId,
    /// The article the sentence was written on.
    pub home: EntityId,
    pub tokens: Vec<Token>,
    pub text: String,
    pub logic: LogicForm,
    pub status: SentenceStatus,
    /// Milliseconds since the Unix epoch.
    pub created_at: u64,
}

impl WikiSentence {
    pub fn axioms(&self) -> &[Axiom] {
        match &self.logic {
            LogicForm::Axioms(a) => a,
            _ => &[],
        }
    }

    pub fn mentions(&self) -> BTreeSet<EntityId> {
        entities_of(&self.logic)
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum LogicOut<'a> {
    Axioms { axioms: &'a [Axiom] },
    Rule,
    Question,
}

impl Serialize for WikiSentence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            id: SentenceId,
            home: EntityId,
            text: &'a str,
            tokens: Vec<TokenRef>,
            status: SentenceStatus,
            logic: LogicOut<'a>,
            created_at: u64,
        }
        let logic = match &self.logic {
            LogicForm::Axioms(axioms) => LogicOut::Axioms { axioms },
            LogicForm::BeyondFragment(_) => LogicOut::Rule,
            LogicForm::Question(_) => LogicOut::Question,
        };
        Out {
            id: self.id,
            home: self.home,
            text: &self.text,
            tokens: self.tokens.iter().map(|t| TokenRef::from(*t)).collect(),
            status: self.status,
            logic,
            created_at: self.created_at,
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Article {
    pub entity_id: EntityId,
    /// In insertion order.
    pub sentence_ids: Vec<SentenceId>,
}

/// Source of sentence timestamps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Clock {
    #[default]
    System,
    /// Always the given time; makes replays reproducible.
    Fixed(u64),
}

impl Clock {
    pub fn now_millis(self) -> u64 {
        match self {
            Clock::System => SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64),
            Clock::Fixed(t) => t,
        }
    }
}

/// Reasoning results for one state.
#[derive(Default)]
struct Cache {
    hierarchy: OnceLock<std::result::Result<Arc<Hierarchy>, ReasonerError>>,
    inferred: Mutex<HashMap<EntityId, Arc<view::Inferred>>>,
}

pub struct WikiState {
    lexicon: Lexicon,
    sentences: BTreeMap<SentenceId, WikiSentence>,
    articles: BTreeMap<EntityId, Article>,
    kb: KnowledgeBase,
    kb_version: u64,
    next_sentence_id: u64,
    reasoner: Reasoner,
    clock: Clock,
    cache: Cache,
}

impl Clone for WikiState {
    fn clone(&self) -> Self {
        WikiState {
            lexicon: self.lexicon.clone(),
            sentences: self.sentences.clone(),
            articles: self.articles.clone(),
            kb: self.kb.clone(),
            kb_version: self.kb_version,
            next_sentence_id: self.next_sentence_id,
            reasoner: self.reasoner,
            clock: self.clock,
            cache: Cache::default(),
        }
    }
}

impl std::fmt::Debug for WikiState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WikiState")
            .field("words", &self.lexicon.len())
            .field("sentences", &self.sentences.len())
            .field("kb_version", &self.kb_version)
            .finish()
    }
}

impl Default for WikiState {
    fn default() -> Self {
        Self::new()
    }
}

/// Content equality: lexicon, sentences, statuses, article order and
/// version. Caches and settings are ignored.
impl PartialEq for WikiState {
    fn eq(&self, other: &Self) -> bool {
        self.lexicon == other.lexicon
            && self.sentences == other.sentences
            && self.articles == other.articles
            && self.kb_version == other.kb_version
            && self.next_sentence_id == other.next_sentence_id
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub words: usize,
    pub sentences: usize,
    pub accepted: usize,
    pub beyond_fragment: usize,
    pub rejected: usize,
    pub questions: usize,
    pub axioms: usize,
}

impl WikiState {
    pub fn new() -> Self {
        WikiState {
            lexicon: Lexicon::new(),
            sentences: BTreeMap::new(),
            articles: BTreeMap::new(),
            kb: KnowledgeBase::new(),
            kb_version: 0,
            next_sentence_id: 1,
            reasoner: Reasoner::default(),
            clock: Clock::default(),
            cache: Cache::default(),
        }
    }

    pub fn with_reasoner(mut self, reasoner: Reasoner) -> Self {
        self.reasoner = reasoner;
        self.cache = Cache::default();
        self
    }

    pub fn with_clock(mut self, clock: Clock) -> Self {
        self.clock = clock;
        self
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn kb_version(&self) -> u64 {
        self.kb_version
    }

    pub fn reasoner(&self) -> Reasoner {
        self.reasoner
    }

    pub fn sentence(&self, id: SentenceId) -> Option<&WikiSentence> {
        self.sentences.get(&id)
    }

    pub fn sentences(&self) -> impl Iterator<Item = &WikiSentence> {
        self.sentences.values()
    }

    pub fn article(&self, entity: EntityId) -> Option<&Article> {
        self.articles.get(&entity)
    }

    pub fn articles(&self) -> impl Iterator<Item = &Article> {
        self.articles.values()
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts { words: self.lexicon.len(), sentences: self.sentences.len(), ..Counts::default() };
        for s in self.sentences.values() {
            match s.status {
                SentenceStatus::Accepted => c.accepted += 1,
                SentenceStatus::BeyondFragment => c.beyond_fragment += 1,
                SentenceStatus::RejectedInconsistent => c.rejected += 1,
                SentenceStatus::Question => c.questions += 1,
            }
        }
        c.axioms = self.kb.len();
        c
    }

    fn touch(&mut self) {
        self.kb_version += 1;
        self.cache = Cache::default();
    }

    fn rebuild_kb(&mut self) {
        let accepted = self.sentences.values().filter(|s| s.status == SentenceStatus::Accepted);
        self.kb = KnowledgeBase::from_axioms(accepted.flat_map(|s| s.axioms().iter().cloned()));
    }

    pub fn add_word(&mut self, category: WordCategory, forms: Forms) -> Result<LexiconEntry> {
        let entry = self.lexicon.add_word(category, forms)?;
        self.articles.insert(entry.entity_id, Article { entity_id: entry.entity_id, sentence_ids: Vec::new() });
        self.touch();
        Ok(entry)
    }

    /// Refused while any sentence mentions the word.
    pub fn remove_word(&mut self, id: EntityId) -> Result<LexiconEntry> {
        if !self.lexicon.contains(id) {
            return Err(WikiError::UnknownEntity(id));
        }
        let users = self.articles.get(&id).map_or(0, |a| a.sentence_ids.len());
        if users > 0 {
            return Err(WikiError::EntityInUse(id, users));
        }
        let entry = self.lexicon.remove_word(id)?;
        self.articles.remove(&id);
        self.touch();
        Ok(entry)
    }

    fn gate(&self, axioms: &[Axiom]) -> Result<bool> {
        let candidate = self.kb.extended(axioms.iter().cloned());
        Ok(self.reasoner.is_consistent(&candidate)?.0)
    }

    /// Parses, translates and stores a sentence written on `home`'s article.
    /// Statements whose axioms would make the knowledge base inconsistent
    /// are stored as rejected and change nothing else.
    pub fn submit_sentence(&mut self, home: EntityId, tokens: &[Token]) -> Result<WikiSentence> {
        if !self.lexicon.contains(home) {
            return Err(WikiError::UnknownEntity(home));
        }
        let ast = parse(tokens)?;
        let logic = translate(&ast)?;
        let mentions = entities_of(&logic);
        if !mentions.contains(&home) {
            return Err(WikiError::HomeEntityNotMentioned(home));
        }
        let status = match &logic {
            LogicForm::Axioms(axioms) => {
                if self.gate(axioms)? {
                    SentenceStatus::Accepted
                } else {
                    SentenceStatus::RejectedInconsistent
                }
            }
            LogicForm::BeyondFragment(_) => SentenceStatus::BeyondFragment,
            LogicForm::Question(_) => SentenceStatus::Question,
        };
        let id = SentenceId(self.next_sentence_id);
        self.next_sentence_id += 1;
        let sentence = WikiSentence {
            id,
            home,
            tokens: tokens.to_vec(),
            text: tokens_to_text(tokens, &self.lexicon),
            logic,
            status,
            created_at: self.clock.now_millis(),
        };
        for entity in mentions {
            if let Some(article) = self.articles.get_mut(&entity) {
                article.sentence_ids.push(id);
            }
        }
        if status == SentenceStatus::Accepted {
            for a in sentence.axioms() {
                self.kb.insert(a.clone());
            }
            self.touch();
        }
        self.sentences.insert(id, sentence.clone());
        Ok(sentence)
    }

    /// Deletes a sentence; other sentences keep their status.
    pub fn retract_sentence(&mut self, id: SentenceId) -> Result<WikiSentence> {
        let sentence = self.sentences.remove(&id).ok_or(WikiError::UnknownSentence(id))?;
        for article in self.articles.values_mut() {
            article.sentence_ids.retain(|s| *s != id);
        }
        if sentence.status == SentenceStatus::Accepted {
            self.rebuild_kb();
            self.touch();
        }
        Ok(sentence)
    }

    /// Runs the consistency check again for a rejected sentence.
    pub fn recheck_sentence(&mut self, id: SentenceId) -> Result<WikiSentence> {
        let sentence = self.sentences.get(&id).ok_or(WikiError::UnknownSentence(id))?;
        if sentence.status != SentenceStatus::RejectedInconsistent {
            return Err(WikiError::NotRejected(id));
        }
        let axioms = sentence.axioms().to_vec();
        if self.gate(&axioms)? {
            let s = self.sentences.get_mut(&id).expect("checked above");
            s.status = SentenceStatus::Accepted;
            for a in axioms {
                self.kb.insert(a);
            }
            self.touch();
        }
        Ok(self.sentences[&id].clone())
    }

    /// Classification of the current knowledge base, computed once per state.
    pub fn hierarchy(&self) -> Result<Arc<Hierarchy>> {
        self.cache.hierarchy.get_or_init(|| self.reasoner.classify(&self.kb).map(Arc::new)).clone().map_err(Into::into)
    }

    /// Answers a question against the current knowledge base.
    pub fn ask(&self, tokens: &[Token]) -> Result<Vec<RenderedSentence>> {
        let ast = parse(tokens)?;
        let LogicForm::Question(query) = translate(&ast)? else {
            return Err(WikiError::NotAQuestion);
        };
        let answer = self.reasoner.answer(&self.kb, &query)?;
        Ok(verbalize_answer(&query, answer.ids(), &self.lexicon)?)
    }
}
