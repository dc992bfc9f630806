use crate::lexicon::{EntityId, FormSlot, Lexicon, WordCategory};

use super::ast::{Indefinite, NounPhrase, Quantifier, QuestionAst, RuleAtom, SentenceAst, Vp};
use super::token::{FunctionWord as F, Terminator, Token};

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Display text of one token at `position` (0 = sentence start).
pub(crate) fn token_text(token: &Token, position: usize, lexicon: &Lexicon) -> String {
    match token {
        Token::Function(fw) if position == 0 => capitalize(fw.as_str()),
        Token::Function(fw) => fw.as_str().to_string(),
        Token::Content(c) => lexicon.surface(c.entity, c.slot),
        Token::Variable(v) => v.as_str().to_string(),
        Token::Terminator(t) => t.as_str().to_string(),
    }
}

/// Space-separated display text; terminators attach to the preceding word.
pub fn tokens_to_text(tokens: &[Token], lexicon: &Lexicon) -> String {
    let mut out = String::new();
    for (i, token) in tokens.iter().enumerate() {
        if i > 0 && !matches!(token, Token::Terminator(_)) {
            out.push(' ');
        }
        out.push_str(&token_text(token, i, lexicon));
    }
    out
}

/// Canonical token sequence for a sentence tree.
pub fn render(ast: &SentenceAst, lexicon: &Lexicon) -> Vec<Token> {
    let mut r = Renderer { lexicon, out: Vec::new() };
    r.sentence(ast);
    r.out
}

pub fn render_text(ast: &SentenceAst, lexicon: &Lexicon) -> String {
    tokens_to_text(&render(ast, lexicon), lexicon)
}

pub(crate) fn article_for(surface: &str) -> F {
    match surface.chars().next().map(|c| c.to_ascii_lowercase()) {
        Some('a' | 'e' | 'i' | 'o' | 'u') => F::An,
        _ => F::A,
    }
}

struct Renderer<'a> {
    lexicon: &'a Lexicon,
    out: Vec<Token>,
}

impl Renderer<'_> {
    fn fw(&mut self, fw: F) {
        self.out.push(Token::Function(fw));
    }

    fn word(&mut self, id: EntityId, slot: FormSlot) {
        let category = self.lexicon.category(id).unwrap_or(WordCategory::ProperName);
        self.out.push(Token::content(id, category, slot));
    }

    fn article(&mut self, id: EntityId, slot: FormSlot) {
        let surface = self.lexicon.surface(id, slot);
        self.fw(article_for(&surface));
    }

    fn sentence(&mut self, ast: &SentenceAst) {
        match ast {
            SentenceAst::Quantified { quantifier, subject, vp } => {
                self.fw(match quantifier {
                    Quantifier::Every => F::Every,
                    Quantifier::No => F::No,
                });
                self.word(*subject, FormSlot::Singular);
                self.vp(vp, false);
                self.out.push(Terminator::Period.into());
            }
            SentenceAst::Instance { subject, vp } => {
                self.word(*subject, FormSlot::Base);
                self.vp(vp, false);
                self.out.push(Terminator::Period.into());
            }
            SentenceAst::Rule { body, head } => {
                self.fw(F::If);
                for (i, atom) in body.iter().enumerate() {
                    if i > 0 {
                        self.fw(F::And);
                    }
                    self.atom(atom);
                }
                self.fw(F::Then);
                self.atom(head);
                self.out.push(Terminator::Period.into());
            }
            SentenceAst::Question(q) => {
                match q {
                    QuestionAst::WhatIs(p) => {
                        self.fw(F::What);
                        self.fw(F::Is);
                        self.word(*p, FormSlot::Base);
                    }
                    QuestionAst::WhatVp(vp) => {
                        self.fw(F::What);
                        self.vp(vp, false);
                    }
                    QuestionAst::WhichVp(noun, vp) => {
                        self.fw(F::Which);
                        self.word(*noun, FormSlot::Plural);
                        self.vp(vp, true);
                    }
                }
                self.out.push(Terminator::QuestionMark.into());
            }
        }
    }

    fn atom(&mut self, atom: &RuleAtom) {
        match atom {
            RuleAtom::Class(v, noun) => {
                self.out.push((*v).into());
                self.fw(F::Is);
                self.article(*noun, FormSlot::Singular);
                self.word(*noun, FormSlot::Singular);
            }
            RuleAtom::Role(a, rel, b) => {
                self.out.push((*a).into());
                match self.lexicon.category(*rel) {
                    Some(WordCategory::OfConstruct) => {
                        self.fw(F::Is);
                        self.article(*rel, FormSlot::Base);
                        self.word(*rel, FormSlot::Base);
                        self.fw(F::Of);
                    }
                    Some(WordCategory::TransitiveAdjective) => {
                        self.fw(F::Is);
                        self.word(*rel, FormSlot::Base);
                    }
                    _ => self.word(*rel, FormSlot::ThirdSg),
                }
                self.out.push((*b).into());
            }
        }
    }

    fn indefinite(&mut self, indef: &Indefinite) {
        self.article(indef.noun, FormSlot::Singular);
        self.word(indef.noun, FormSlot::Singular);
        if let Some(rel) = &indef.relative {
            self.fw(F::That);
            self.vp(rel, false);
        }
    }

    fn np(&mut self, np: &NounPhrase) {
        match np {
            NounPhrase::Named(p) => self.word(*p, FormSlot::Base),
            NounPhrase::Indef(indef) => self.indefinite(indef),
        }
    }

    fn vp(&mut self, vp: &Vp, plural: bool) {
        match vp {
            Vp::IsA(indef) => {
                self.fw(F::Is);
                self.indefinite(indef);
            }
            Vp::IsNotA(indef) => {
                self.fw(F::Is);
                self.fw(F::Not);
                self.indefinite(indef);
            }
            Vp::Verb(v, np) => {
                self.word(*v, if plural { FormSlot::Bare } else { FormSlot::ThirdSg });
                self.np(np);
            }
            Vp::DoesNotVerb(v, np) => {
                self.fw(F::Does);
                self.fw(F::Not);
                self.word(*v, FormSlot::Bare);
                self.np(np);
            }
            Vp::IsOf(o, np) => {
                self.fw(F::Is);
                self.article(*o, FormSlot::Base);
                self.word(*o, FormSlot::Base);
                self.fw(F::Of);
                self.np(np);
            }
            Vp::IsAdj(a, np) => {
                self.fw(F::Is);
                self.word(*a, FormSlot::Base);
                self.np(np);
            }
            Vp::And(a, b) => {
                self.vp(a, plural);
                self.fw(F::And);
                self.vp(b, plural);
            }
            Vp::Or(a, b) => {
                self.vp(a, plural);
                self.fw(F::Or);
                self.vp(b, plural);
            }
        }
    }
}
