//! The store file: one versioned JSON document. Logic forms are not
//! stored; they are derived again from the tokens on load, and statuses
//! are taken as written.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::grammar::{parse, resolve_tokens, tokens_to_text, TokenRef};
use crate::lexicon::{EntityId, LexiconEntry};
use crate::semantics::{entities_of, translate, LogicForm};

use super::{Article, Result, SentenceId, SentenceStatus, WikiError, WikiSentence, WikiState};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoreDocument {
    pub format_version: u32,
    pub next_entity_id: u64,
    pub next_sentence_id: u64,
    pub kb_version: u64,
    pub lexicon: Vec<LexiconEntry>,
    pub sentences: Vec<StoredSentence>,
    pub articles: Vec<StoredArticle>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoredSentence {
    pub id: SentenceId,
    pub home: EntityId,
    /// For people reading the file; `tokens` is authoritative.
    pub text: String,
    pub tokens: Vec<TokenRef>,
    pub status: SentenceStatus,
    pub created_at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoredArticle {
    pub entity_id: EntityId,
    pub sentence_ids: Vec<SentenceId>,
}

fn format_err(msg: impl Into<String>) -> WikiError {
    WikiError::Format(msg.into())
}

fn status_fits(status: SentenceStatus, logic: &LogicForm) -> bool {
    matches!(
        (status, logic),
        (SentenceStatus::Accepted | SentenceStatus::RejectedInconsistent, LogicForm::Axioms(_))
            | (SentenceStatus::BeyondFragment, LogicForm::BeyondFragment(_))
            | (SentenceStatus::Question, LogicForm::Question(_))
    )
}

impl WikiState {
    pub fn to_document(&self) -> StoreDocument {
        StoreDocument {
            format_version: FORMAT_VERSION,
            next_entity_id: self.lexicon.next_id(),
            next_sentence_id: self.next_sentence_id,
            kb_version: self.kb_version,
            lexicon: self.lexicon.entries().cloned().collect(),
            sentences: self
                .sentences
                .values()
                .map(|s| StoredSentence {
                    id: s.id,
                    home: s.home,
                    text: s.text.clone(),
                    tokens: s.tokens.iter().map(|t| TokenRef::from(*t)).collect(),
                    status: s.status,
                    created_at: s.created_at,
                })
                .collect(),
            articles: self
                .articles
                .values()
                .map(|a| StoredArticle { entity_id: a.entity_id, sentence_ids: a.sentence_ids.clone() })
                .collect(),
        }
    }

    /// Rebuilds a state, checking that the document is self-consistent.
    pub fn from_document(doc: StoreDocument) -> Result<Self> {
        if doc.format_version != FORMAT_VERSION {
            return Err(format_err(format!("unsupported format_version {}", doc.format_version)));
        }
        let mut state = WikiState::new();
        for entry in doc.lexicon {
            let id = entry.entity_id;
            state.lexicon.restore(entry).map_err(|e| format_err(format!("word {id}: {e}")))?;
        }
        if doc.next_entity_id < state.lexicon.next_id() {
            return Err(format_err("next_entity_id is below an existing entity id"));
        }
        state.lexicon.set_next_id(doc.next_entity_id);

        for stored in doc.sentences {
            let id = stored.id;
            let bad = |e: &dyn std::fmt::Display| format_err(format!("sentence {id}: {e}"));
            if id.0 >= doc.next_sentence_id {
                return Err(bad(&"id is not below next_sentence_id"));
            }
            let tokens = resolve_tokens(&stored.tokens, &state.lexicon).map_err(|e| bad(&e))?;
            let logic = parse(&tokens).map_err(|e| bad(&e)).and_then(|ast| translate(&ast).map_err(|e| bad(&e)))?;
            if !status_fits(stored.status, &logic) {
                return Err(bad(&"status does not match the sentence kind"));
            }
            if !entities_of(&logic).contains(&stored.home) {
                return Err(bad(&"home entity is not mentioned"));
            }
            let sentence = WikiSentence {
                id,
                home: stored.home,
                text: tokens_to_text(&tokens, &state.lexicon),
                tokens,
                logic,
                status: stored.status,
                created_at: stored.created_at,
            };
            if state.sentences.insert(id, sentence).is_some() {
                return Err(bad(&"duplicate id"));
            }
        }

        for stored in doc.articles {
            let id = stored.entity_id;
            if !state.lexicon.contains(id) {
                return Err(format_err(format!("article for unknown entity {id}")));
            }
            let article = Article { entity_id: id, sentence_ids: stored.sentence_ids };
            if state.articles.insert(id, article).is_some() {
                return Err(format_err(format!("duplicate article {id}")));
            }
        }
        // every word has an article, and articles list exactly the sentences
        // mentioning their entity
        let mut expected: BTreeMap<EntityId, BTreeSet<SentenceId>> =
            state.lexicon.entries().map(|e| (e.entity_id, BTreeSet::new())).collect();
        for s in state.sentences.values() {
            for e in s.mentions() {
                expected.entry(e).or_default().insert(s.id);
            }
        }
        for (entity, ids) in &expected {
            let listed = state.articles.get(entity).ok_or_else(|| format_err(format!("no article for {entity}")))?;
            let set: BTreeSet<SentenceId> = listed.sentence_ids.iter().copied().collect();
            if set != *ids || set.len() != listed.sentence_ids.len() {
                return Err(format_err(format!("article {entity} does not list exactly its sentences")));
            }
        }

        state.next_sentence_id = doc.next_sentence_id;
        state.kb_version = doc.kb_version;
        state.rebuild_kb();
        Ok(state)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("store document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let doc: StoreDocument = serde_json::from_str(json).map_err(|e| format_err(e.to_string()))?;
        Self::from_document(doc)
    }

    /// Writes the store atomically: a temporary file in the same directory
    /// is renamed over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |source| WikiError::Io { path: path.display().to_string(), source };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(self.to_json().as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(path).map_err(|e| io(e.error))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let json = std::fs::read_to_string(path)
            .map_err(|source| WikiError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&json)
    }

    /// Loads `path`, or starts empty when it does not exist yet.
    pub fn open(path: &Path) -> Result<Self> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::new())
        }
    }
}
