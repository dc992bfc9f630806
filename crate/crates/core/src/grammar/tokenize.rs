use crate::lexicon::Lexicon;

use super::earley::Prefix;
use super::token::{FunctionWord, Terminator, Token, Variable};
use super::GrammarError;

fn split_words(text: &str) -> Vec<&str> {
    let mut words = Vec::new();
    for raw in text.split_whitespace() {
        let mut word = raw;
        let mut trailing = Vec::new();
        while word.len() > 1 && (word.ends_with('.') || word.ends_with('?')) {
            trailing.push(&word[word.len() - 1..]);
            word = &word[..word.len() - 1];
        }
        words.push(word);
        words.extend(trailing.into_iter().rev());
    }
    words
}

/// Candidate tokens starting at word `i`, each with the number of words it
/// consumes. Longer of-construct matches come first.
fn candidates(words: &[&str], i: usize, lexicon: &Lexicon, max_span: usize) -> Vec<(Token, usize)> {
    let mut out = Vec::new();
    for n in (2..=max_span.min(words.len() - i)).rev() {
        let joined = words[i..i + n].join(" ");
        for (entry, slot) in lexicon.lookup(&joined) {
            out.push((Token::content(entry.entity_id, entry.category, slot), n));
        }
    }
    let word = words[i];
    if let Some(t) = Terminator::from_word(word) {
        out.push((t.into(), 1));
    } else if let Some(v) = Variable::from_word(word) {
        out.push((v.into(), 1));
    } else if let Some(fw) = FunctionWord::from_word(word) {
        out.push((fw.into(), 1));
    } else {
        for (entry, slot) in lexicon.lookup(word) {
            out.push((Token::content(entry.entity_id, entry.category, slot), 1));
        }
    }
    out
}

struct Search<'a> {
    words: &'a [&'a str],
    cands: Vec<Vec<(Token, usize)>>,
    wants_complete: bool,
    deepest: (usize, Vec<Token>),
}

impl Search<'_> {
    fn dfs(&mut self, i: usize, prefix: &mut Prefix) -> bool {
        if i == self.words.len() {
            return !self.wants_complete || prefix.is_complete();
        }
        if i > self.deepest.0 || self.deepest.1.is_empty() {
            self.deepest = (i, prefix.tokens().to_vec());
        }
        let len = prefix.len();
        for k in 0..self.cands[i].len() {
            let (token, span) = self.cands[i][k];
            if prefix.push(token) {
                if self.dfs(i + span, prefix) {
                    return true;
                }
                prefix.truncate(len);
            }
        }
        false
    }
}

/// Splits `text` into tokens. Function words match case-insensitively,
/// multi-word of-constructs as one token, and words with several lexicon
/// readings are resolved by what the grammar allows at that point.
pub fn tokenize(text: &str, lexicon: &Lexicon) -> Result<Vec<Token>, GrammarError> {
    let words = split_words(text);
    let max_span = lexicon.multiword_surfaces().first().map_or(1, |(n, _)| *n);
    let cands: Vec<_> = (0..words.len()).map(|i| candidates(&words, i, lexicon, max_span)).collect();

    // greedy pass: report unknown words at their token position
    let mut i = 0;
    let mut position = 1;
    while i < words.len() {
        match cands[i].first() {
            Some((_, span)) => i += span,
            None => {
                return Err(GrammarError::UnknownWord { position, surface: words[i].to_string() });
            }
        }
        position += 1;
    }

    let wants_complete = words.last().is_some_and(|w| Terminator::from_word(w).is_some());
    let mut search = Search { words: &words, cands, wants_complete, deepest: (0, Vec::new()) };
    let mut prefix = Prefix::new(lexicon);
    if search.dfs(0, &mut prefix) {
        return Ok(prefix.tokens().to_vec());
    }
    // no reading parses; keep the longest viable reading and continue
    // greedily so the parser reports the error where it occurs
    let (mut i, mut tokens) = std::mem::take(&mut search.deepest);
    while i < words.len() {
        let (token, span) = search.cands[i][0];
        tokens.push(token);
        i += span;
    }
    Ok(tokens)
}
