//! Content words and the ontology entities they denote.
//!
//! Every proper name, noun, transitive verb, of-construct and transitive
//! adjective of the wiki lives here together with its explicitly entered
//! surface forms. The grammar draws all of its non-function terminals from
//! this table.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::FunctionWord;

/// Stable identifier of an ontology entity, assigned by the lexicon as an
/// increasing integer and exchanged as a decimal string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct EntityId(pub u64);

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<EntityId> for String {
    fn from(id: EntityId) -> Self {
        id.to_string()
    }
}

impl TryFrom<String> for EntityId {
    type Error = std::num::ParseIntError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for EntityId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(EntityId)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordCategory {
    /// Individuals, e.g. "Zurich".
    ProperName,
    /// Classes, e.g. "city".
    Noun,
    /// Relations used as "borders".
    TransitiveVerb,
    /// Relations used as "is a part of".
    OfConstruct,
    /// Relations used as "is located-in".
    TransitiveAdjective,
}

impl WordCategory {
    pub const ALL: [WordCategory; 5] = [
        WordCategory::ProperName,
        WordCategory::Noun,
        WordCategory::TransitiveVerb,
        WordCategory::OfConstruct,
        WordCategory::TransitiveAdjective,
    ];

    /// The form slots a word of this category must provide.
    pub fn required_slots(self) -> &'static [FormSlot] {
        match self {
            WordCategory::ProperName | WordCategory::OfConstruct | WordCategory::TransitiveAdjective => {
                &[FormSlot::Base]
            }
            WordCategory::Noun => &[FormSlot::Singular, FormSlot::Plural],
            WordCategory::TransitiveVerb => &[FormSlot::ThirdSg, FormSlot::Bare],
        }
    }

    /// Whether words of this category denote binary relations.
    pub fn is_relation(self) -> bool {
        matches!(
            self,
            WordCategory::TransitiveVerb | WordCategory::OfConstruct | WordCategory::TransitiveAdjective
        )
    }

    /// The slot used as the word's display name (article title).
    pub fn title_slot(self) -> FormSlot {
        self.required_slots()[0]
    }
}

impl fmt::Display for WordCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordCategory::ProperName => "proper-name",
            WordCategory::Noun => "noun",
            WordCategory::TransitiveVerb => "verb",
            WordCategory::OfConstruct => "of-construct",
            WordCategory::TransitiveAdjective => "adjective",
        })
    }
}

impl FromStr for WordCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "proper-name" | "proper_name" | "pn" => Ok(WordCategory::ProperName),
            "noun" => Ok(WordCategory::Noun),
            "verb" | "transitive-verb" | "transitive_verb" => Ok(WordCategory::TransitiveVerb),
            "of-construct" | "of_construct" | "of" => Ok(WordCategory::OfConstruct),
            "adjective" | "transitive-adjective" | "transitive_adjective" | "adj" => {
                Ok(WordCategory::TransitiveAdjective)
            }
            other => Err(format!("unknown word category `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormSlot {
    Base,
    Singular,
    Plural,
    ThirdSg,
    Bare,
}

impl fmt::Display for FormSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormSlot::Base => "base",
            FormSlot::Singular => "singular",
            FormSlot::Plural => "plural",
            FormSlot::ThirdSg => "third_sg",
            FormSlot::Bare => "bare",
        })
    }
}

pub type Forms = BTreeMap<FormSlot, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub entity_id: EntityId,
    pub category: WordCategory,
    pub forms: Forms,
}

impl LexiconEntry {
    pub fn form(&self, slot: FormSlot) -> Option<&str> {
        self.forms.get(&slot).map(String::as_str)
    }

    /// Display name: base form, singular noun or third person verb form.
    pub fn title(&self) -> &str {
        self.form(self.category.title_slot()).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("missing form `{slot}` for a {category}")]
    MissingForm { category: WordCategory, slot: FormSlot },
    #[error("form `{slot}` is not used by a {category}")]
    UnexpectedForm { category: WordCategory, slot: FormSlot },
    #[error("malformed surface string `{0}`")]
    MalformedSurface(String),
    #[error("surface `{0}` is already used by another word of the same category")]
    DuplicateSurface(String),
    #[error("`{0}` is a reserved function word")]
    ReservedWord(String),
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
}

/// Ordered collection of lexicon entries with a surface-form index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<EntityId, LexiconEntry>,
    /// ProperName surfaces, matched exactly.
    names: HashMap<String, Vec<(EntityId, FormSlot)>>,
    /// All other surfaces, keyed with a lowercased first letter.
    words: HashMap<String, Vec<(EntityId, FormSlot)>>,
    next_id: u64,
}

fn fold_initial(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn validate_surface(category: WordCategory, surface: &str) -> Result<(), LexiconError> {
    let malformed = || LexiconError::MalformedSurface(surface.to_string());
    if surface.is_empty() {
        return Err(malformed());
    }
    if surface.chars().any(|c| c == '.' || c == '?') {
        return Err(malformed());
    }
    if category == WordCategory::OfConstruct {
        // internal single spaces only
        if surface.starts_with(' ')
            || surface.ends_with(' ')
            || surface.contains("  ")
            || surface.chars().any(|c| c.is_whitespace() && c != ' ')
        {
            return Err(malformed());
        }
    } else if surface.chars().any(char::is_whitespace) {
        return Err(malformed());
    }
    for word in surface.split(' ') {
        if FunctionWord::is_reserved(word) {
            return Err(LexiconError::ReservedWord(word.to_string()));
        }
    }
    Ok(())
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates `forms` for `category` and stores a new entry under a fresh id.
    pub fn add_word(&mut self, category: WordCategory, forms: Forms) -> Result<LexiconEntry, LexiconError> {
        let id = EntityId(self.next_id);
        let entry = self.validate(id, category, forms)?;
        self.insert_unchecked(entry.clone());
        self.next_id = id.0 + 1;
        Ok(entry)
    }

    /// Re-inserts an entry with a known id (used when loading a store).
    pub(crate) fn restore(&mut self, entry: LexiconEntry) -> Result<(), LexiconError> {
        if self.entries.contains_key(&entry.entity_id) {
            return Err(LexiconError::DuplicateSurface(format!("entity {}", entry.entity_id)));
        }
        let entry = self.validate(entry.entity_id, entry.category, entry.forms)?;
        self.next_id = self.next_id.max(entry.entity_id.0 + 1);
        self.insert_unchecked(entry);
        Ok(())
    }

    pub(crate) fn next_id(&self) -> u64 {
        self.next_id
    }

    pub(crate) fn set_next_id(&mut self, next: u64) {
        self.next_id = self.next_id.max(next);
    }

    fn validate(&self, id: EntityId, category: WordCategory, forms: Forms) -> Result<LexiconEntry, LexiconError> {
        let required = category.required_slots();
        for slot in required {
            match forms.get(slot) {
                Some(s) if !s.is_empty() => {}
                _ => return Err(LexiconError::MissingForm { category, slot: *slot }),
            }
        }
        if let Some(extra) = forms.keys().find(|s| !required.contains(s)) {
            return Err(LexiconError::UnexpectedForm { category, slot: *extra });
        }
        let mut seen = BTreeSet::new();
        for surface in forms.values() {
            validate_surface(category, surface)?;
            // two slots of one entry sharing a surface would make the token ambiguous
            if !seen.insert(self.key(category, surface)) {
                return Err(LexiconError::DuplicateSurface(surface.clone()));
            }
            let clash = self
                .index(category)
                .get(&self.key(category, surface))
                .into_iter()
                .flatten()
                .any(|(other, _)| self.entries[other].category == category);
            if clash {
                return Err(LexiconError::DuplicateSurface(surface.clone()));
            }
        }
        Ok(LexiconEntry { entity_id: id, category, forms })
    }

    fn key(&self, category: WordCategory, surface: &str) -> String {
        if category == WordCategory::ProperName {
            surface.to_string()
        } else {
            fold_initial(surface)
        }
    }

    fn index(&self, category: WordCategory) -> &HashMap<String, Vec<(EntityId, FormSlot)>> {
        if category == WordCategory::ProperName {
            &self.names
        } else {
            &self.words
        }
    }

    fn insert_unchecked(&mut self, entry: LexiconEntry) {
        for (slot, surface) in &entry.forms {
            let key = self.key(entry.category, surface);
            let index = if entry.category == WordCategory::ProperName {
                &mut self.names
            } else {
                &mut self.words
            };
            index.entry(key).or_default().push((entry.entity_id, *slot));
        }
        self.entries.insert(entry.entity_id, entry);
    }

    /// Removes an entry and its index rows. Whether the entity is still
    /// referenced is the caller's concern.
    pub fn remove_word(&mut self, id: EntityId) -> Result<LexiconEntry, LexiconError> {
        let entry = self.entries.remove(&id).ok_or(LexiconError::UnknownEntity(id))?;
        for index in [&mut self.names, &mut self.words] {
            index.retain(|_, rows| {
                rows.retain(|(e, _)| *e != id);
                !rows.is_empty()
            });
        }
        Ok(entry)
    }

    /// All (entry, slot) pairs whose surface matches. Proper names match
    /// case-sensitively, other words with a case-folded first letter.
    pub fn lookup(&self, surface: &str) -> Vec<(&LexiconEntry, FormSlot)> {
        let exact = self.names.get(surface).into_iter().flatten();
        let folded = self.words.get(&fold_initial(surface)).into_iter().flatten();
        let mut out: Vec<_> = exact
            .chain(folded)
            .map(|(id, slot)| (&self.entries[id], *slot))
            .collect();
        out.sort_by_key(|(e, slot)| (e.entity_id, *slot));
        out
    }

    pub fn get(&self, id: EntityId) -> Option<&LexiconEntry> {
        self.entries.get(&id)
    }

    pub fn contains(&self, id: EntityId) -> bool {
        self.entries.contains_key(&id)
    }

    pub fn category(&self, id: EntityId) -> Option<WordCategory> {
        self.entries.get(&id).map(|e| e.category)
    }

    /// Surface form of `id` in `slot`, or `?<id>` for unknown entities.
    pub fn surface(&self, id: EntityId, slot: FormSlot) -> String {
        self.get(id)
            .and_then(|e| e.form(slot))
            .map(str::to_string)
            .unwrap_or_else(|| format!("?{id}"))
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    pub fn of_category(&self, category: WordCategory) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values().filter(move |e| e.category == category)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multi-word of-construct surfaces, longest (in words) first.
    pub(crate) fn multiword_surfaces(&self) -> Vec<(usize, &LexiconEntry)> {
        let mut out: Vec<_> = self
            .of_category(WordCategory::OfConstruct)
            .filter_map(|e| {
                let n = e.form(FormSlot::Base)?.split(' ').count();
                (n > 1).then_some((n, e))
            })
            .collect();
        out.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.entity_id.cmp(&b.1.entity_id)));
        out
    }
}

/// Convenience constructor for form maps.
pub fn forms<const N: usize>(pairs: [(FormSlot, &str); N]) -> Forms {
    pairs.into_iter().map(|(s, v)| (s, v.to_string())).collect()
}
