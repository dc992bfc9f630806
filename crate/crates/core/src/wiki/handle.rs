use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use crate::grammar::Token;
use crate::lexicon::{EntityId, Forms, LexiconEntry, WordCategory};
use crate::reasoner::Reasoner;

use super::{Result, SentenceId, WikiSentence, WikiState};

/// Shared wiki: one writer at a time, readers work on immutable snapshots.
///
/// A mutation runs on a private copy of the current state; the copy is
/// saved (when a store path is set) and then published. A failed mutation
/// or a failed save publishes nothing.
#[derive(Debug)]
pub struct Wiki {
    writer: Mutex<()>,
    current: RwLock<Arc<WikiState>>,
    store: Option<PathBuf>,
}

impl Wiki {
    pub fn new(state: WikiState) -> Self {
        Wiki { writer: Mutex::new(()), current: RwLock::new(Arc::new(state)), store: None }
    }

    /// Opens (or starts) the store at `path` and saves after every mutation.
    pub fn open(path: &Path, reasoner: Reasoner) -> Result<Self> {
        let state = WikiState::open(path)?.with_reasoner(reasoner);
        Ok(Wiki { store: Some(path.to_path_buf()), ..Wiki::new(state) })
    }

    pub fn store_path(&self) -> Option<&Path> {
        self.store.as_deref()
    }

    pub fn snapshot(&self) -> Arc<WikiState> {
        self.current.read().expect("snapshot lock").clone()
    }

    pub fn mutate<T>(&self, f: impl FnOnce(&mut WikiState) -> Result<T>) -> Result<T> {
        let _writer = self.writer.lock().expect("writer lock");
        let before = self.snapshot();
        let mut next = (*before).clone();
        let out = f(&mut next)?;
        if next != *before {
            if let Some(path) = &self.store {
                next.save(path)?;
            }
        }
        *self.current.write().expect("snapshot lock") = Arc::new(next);
        Ok(out)
    }

    pub fn add_word(&self, category: WordCategory, forms: Forms) -> Result<LexiconEntry> {
        self.mutate(|s| s.add_word(category, forms))
    }

    pub fn remove_word(&self, id: EntityId) -> Result<LexiconEntry> {
        self.mutate(|s| s.remove_word(id))
    }

    pub fn submit_sentence(&self, home: EntityId, tokens: &[Token]) -> Result<WikiSentence> {
        self.mutate(|s| s.submit_sentence(home, tokens))
    }

    pub fn retract_sentence(&self, id: SentenceId) -> Result<WikiSentence> {
        self.mutate(|s| s.retract_sentence(id))
    }

    pub fn recheck_sentence(&self, id: SentenceId) -> Result<WikiSentence> {
        self.mutate(|s| s.recheck_sentence(id))
    }
}
