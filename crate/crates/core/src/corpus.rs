//! Plain-text corpora: import, export, and the batch report.
//!
//! One directive per line, `#` starts a comment line:
//!
//! ```text
//! word proper-name Zurich
//! word noun city cities
//! word of-construct capital_city      # `_` stands for a space
//! sentence Zurich Zurich is a city.
//! ask What is Zurich?
//! ```
//!
//! Forms are given in the order of [`WordCategory::required_slots`]. The
//! first argument of `sentence` names the home article by title (with `_`
//! for spaces) or as `#<entity id>`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::grammar::tokenize;
use crate::lexicon::{EntityId, Forms, LexiconEntry, WordCategory};
use crate::verbalizer::{verbalize_hierarchy_edge, verbalize_membership, RenderedSentence};
use crate::wiki::{SentenceStatus, WikiError, WikiSentence, WikiState};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {}: {source}", source.code())]
    Wiki { line: usize, source: WikiError },
}

impl CorpusError {
    pub fn line(&self) -> usize {
        match self {
            CorpusError::Format { line, .. } | CorpusError::Wiki { line, .. } => *line,
        }
    }
}

#[derive(Debug)]
pub enum Outcome {
    Word(LexiconEntry),
    Sentence(WikiSentence),
    Answers { question: String, answers: Vec<RenderedSentence> },
    Error(CorpusError),
}

#[derive(Debug)]
pub struct LineReport {
    /// 1-based.
    pub line: usize,
    pub outcome: Outcome,
}

#[derive(Debug, Default)]
pub struct ImportReport {
    pub lines: Vec<LineReport>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ImportSummary {
    pub words: usize,
    pub accepted: usize,
    pub beyond_fragment: usize,
    pub rejected: usize,
    pub questions: usize,
    pub asks: usize,
    pub errors: usize,
}

impl ImportReport {
    pub fn summary(&self) -> ImportSummary {
        let mut s = ImportSummary::default();
        for l in &self.lines {
            match &l.outcome {
                Outcome::Word(_) => s.words += 1,
                Outcome::Sentence(x) => match x.status {
                    SentenceStatus::Accepted => s.accepted += 1,
                    SentenceStatus::BeyondFragment => s.beyond_fragment += 1,
                    SentenceStatus::RejectedInconsistent => s.rejected += 1,
                    SentenceStatus::Question => s.questions += 1,
                },
                Outcome::Answers { .. } => s.asks += 1,
                Outcome::Error(_) => s.errors += 1,
            }
        }
        s
    }

    pub fn errors(&self) -> impl Iterator<Item = &CorpusError> {
        self.lines.iter().filter_map(|l| match &l.outcome {
            Outcome::Error(e) => Some(e),
            _ => None,
        })
    }

    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }
}

fn quoted(sentences: &[RenderedSentence]) -> String {
    sentences.iter().map(|s| format!("{:?}", s.text)).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for ImportReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            match &l.outcome {
                Outcome::Word(e) => writeln!(f, "{}: word {} {:?} #{}", l.line, e.category, e.title(), e.entity_id)?,
                Outcome::Sentence(s) => writeln!(f, "{}: {} #{} {:?}", l.line, s.status.as_str(), s.id, s.text)?,
                Outcome::Answers { question, answers } => {
                    writeln!(f, "{}: ask {:?} -> [{}]", l.line, question, quoted(answers))?
                }
                Outcome::Error(e) => writeln!(f, "error {e}")?,
            }
        }
        let s = self.summary();
        writeln!(
            f,
            "summary: {} words, {} accepted, {} beyond-fragment, {} rejected, {} questions, {} asks, {} errors",
            s.words, s.accepted, s.beyond_fragment, s.rejected, s.questions, s.asks, s.errors
        )
    }
}

fn unescape(arg: &str) -> String {
    arg.replace('_', " ")
}

fn escape(surface: &str) -> String {
    surface.replace(' ', "_")
}

/// The entity an article argument names.
pub fn resolve_title(state: &WikiState, arg: &str) -> Result<EntityId, String> {
    if let Some(id) = arg.strip_prefix('#') {
        let id = EntityId(id.parse().map_err(|_| format!("bad entity reference `{arg}`"))?);
        return if state.lexicon().contains(id) { Ok(id) } else { Err(format!("unknown entity {id}")) };
    }
    let title = unescape(arg);
    let hits: Vec<EntityId> =
        state.lexicon().entries().filter(|e| e.title() == title).map(|e| e.entity_id).collect();
    match hits.as_slice() {
        [id] => Ok(*id),
        [] => Err(format!("no article titled `{title}`")),
        _ => Err(format!("several articles are titled `{title}`; use #<id>")),
    }
}

fn word(state: &mut WikiState, line: usize, args: &str) -> Outcome {
    let fail = |message: String| Outcome::Error(CorpusError::Format { line, message });
    let mut parts = args.split_whitespace();
    let Some(category) = parts.next() else {
        return fail("word needs a category".into());
    };
    let category: WordCategory = match category.parse() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let values: Vec<&str> = parts.collect();
    let slots = category.required_slots();
    if values.len() != slots.len() {
        return fail(format!("{category} takes {} form(s), got {}", slots.len(), values.len()));
    }
    let forms: Forms = slots.iter().zip(values).map(|(s, v)| (*s, unescape(v))).collect();
    match state.add_word(category, forms) {
        Ok(e) => Outcome::Word(e),
        Err(source) => Outcome::Error(CorpusError::Wiki { line, source }),
    }
}

fn sentence(state: &mut WikiState, line: usize, args: &str) -> Outcome {
    let Some((home, text)) = args.trim().split_once(char::is_whitespace) else {
        return Outcome::Error(CorpusError::Format { line, message: "sentence needs an article and a text".into() });
    };
    let home = match resolve_title(state, home) {
        Ok(h) => h,
        Err(message) => return Outcome::Error(CorpusError::Format { line, message }),
    };
    let result = tokenize(text, state.lexicon())
        .map_err(WikiError::from)
        .and_then(|tokens| state.submit_sentence(home, &tokens));
    match result {
        Ok(s) => Outcome::Sentence(s),
        Err(source) => Outcome::Error(CorpusError::Wiki { line, source }),
    }
}

fn ask(state: &WikiState, line: usize, text: &str) -> Outcome {
    let result = tokenize(text, state.lexicon()).map_err(WikiError::from).and_then(|t| state.ask(&t));
    match result {
        Ok(answers) => Outcome::Answers { question: text.trim().to_string(), answers },
        Err(source) => Outcome::Error(CorpusError::Wiki { line, source }),
    }
}

/// Applies a corpus line by line. Lines that fail are reported and skipped.
pub fn import(state: &mut WikiState, corpus: &str) -> ImportReport {
    let mut report = ImportReport::default();
    for (i, raw) in corpus.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (directive, args) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let outcome = match directive {
            "word" => word(state, line, args),
            "sentence" => sentence(state, line, args),
            "ask" => ask(state, line, args),
            other => Outcome::Error(CorpusError::Format { line, message: format!("unknown directive `{other}`") }),
        };
        report.lines.push(LineReport { line, outcome });
    }
    report
}

/// The state as a corpus: words in id order, then sentences in id order.
///
/// Replaying the result rebuilds the lexicon, sentences and articles. A
/// sentence that was rejected, and whose conflict was retracted later
/// without a recheck, comes back accepted.
pub fn export(state: &WikiState) -> String {
    let mut out = String::new();
    for e in state.lexicon().entries() {
        let forms: Vec<String> =
            e.category.required_slots().iter().map(|s| escape(e.form(*s).unwrap_or_default())).collect();
        writeln!(out, "word {} {}", e.category, forms.join(" ")).unwrap();
    }
    for s in state.sentences() {
        let home = state.lexicon().get(s.home).map(|e| e.title().to_string()).unwrap_or_default();
        let unique = state.lexicon().entries().filter(|e| e.title() == home).count() == 1;
        let home = if unique && !home.contains('_') { escape(&home) } else { format!("#{}", s.home) };
        writeln!(out, "sentence {home} {}", s.text).unwrap();
    }
    out
}

/// Consistency, the class hierarchy, all memberships of named individuals,
/// and counts, as deterministic text.
pub fn report(state: &WikiState) -> Result<String, WikiError> {
    let lex = state.lexicon();
    let mut out = String::new();
    let (consistent, _) = state.reasoner().is_consistent(state.kb())?;
    writeln!(out, "consistency: {}", if consistent { "OK" } else { "INCONSISTENT" }).unwrap();

    let h = state.hierarchy()?;
    let mut hierarchy: BTreeSet<String> = BTreeSet::new();
    for &(sub, sup) in &h.edges {
        hierarchy.insert(verbalize_hierarchy_edge(sub, sup, lex)?.text);
    }
    for group in &h.equivalences {
        for &a in group {
            for &b in group.iter().filter(|b| **b != a) {
                hierarchy.insert(verbalize_hierarchy_edge(a, b, lex)?.text);
            }
        }
    }
    writeln!(out, "hierarchy:").unwrap();
    for s in &hierarchy {
        writeln!(out, "  {s}").unwrap();
    }

    let mut memberships: BTreeSet<String> = BTreeSet::new();
    for ind in lex.of_category(WordCategory::ProperName) {
        for class in state.reasoner().classes_of(state.kb(), ind.entity_id)? {
            memberships.insert(verbalize_membership(ind.entity_id, class, lex)?.text);
        }
    }
    writeln!(out, "memberships:").unwrap();
    for s in &memberships {
        writeln!(out, "  {s}").unwrap();
    }

    let c = state.counts();
    writeln!(
        out,
        "counts: {} words, {} sentences, {} accepted, {} beyond-fragment, {} rejected, {} questions, {} axioms",
        c.words, c.sentences, c.accepted, c.beyond_fragment, c.rejected, c.questions, c.axioms
    )
    .unwrap();
    Ok(out)
}
