//! End-to-end acceptance checks. Runs without the libtest harness and
//! prints one PASS/FAIL line per criterion; exits non-zero on any failure.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use cnlwiki::corpus::{self, resolve_title};
use cnlwiki::grammar::{complete, enumerate_sentences, parse, tokenize, tokens_to_text, GrammarError, Token};
use cnlwiki::reasoner::{check_model, enumerate_models, KnowledgeBase, Reasoner};
use cnlwiki::semantics::{translate, Axiom, ClassExpr, LogicForm};
use cnlwiki::verbalizer::verbalize_axiom;
use cnlwiki::wiki::{Clock, SentenceStatus};
use cnlwiki::{EntityId, WikiState, WordCategory};
use common::bnf::{SpecGrammar, State};
use common::{geo_lexicon, random_kb, GEOGRAPHY};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAX_LEN: usize = 12;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { passed: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { passed: false, detail: detail.into() }
}

fn within(limit: Duration, started: Instant, out: Outcome) -> Outcome {
    let took = started.elapsed();
    if out.passed && took > limit {
        return fail(format!("{}; took {took:.1?}, limit {limit:?}", out.detail));
    }
    Outcome { detail: format!("{} in {took:.1?}", out.detail), ..out }
}

/// Every prefix of every sentence, each compared with the brute-force
/// extendability oracle. Sentences are walked in sorted order so each
/// oracle state is one step from its parent's.
fn prediction(sentences: &[Vec<Token>]) -> Outcome {
    let geo = geo_lexicon();
    let lex = &geo.lex;
    let oracle = SpecGrammar::new(lex);
    let mut sorted: Vec<&Vec<Token>> = sentences.iter().collect();
    sorted.sort();
    let mut stack = vec![oracle.start()];
    let mut path: Vec<Token> = Vec::new();
    let mut checked = 0usize;
    let mut check = |prefix: &[Token], state: &State| -> Result<(), String> {
        let expected = oracle.continuations_fast(state);
        let got: HashSet<Token> = complete(prefix, lex)
            .map_err(|e| format!("complete({:?}) failed: {e}", tokens_to_text(prefix, lex)))?
            .tokens()
            .copied()
            .collect();
        if got != expected {
            let text = tokens_to_text(prefix, lex);
            return Err(format!("after {text:?}: got {} tokens, oracle {}", got.len(), expected.len()));
        }
        checked += 1;
        Ok(())
    };
    if let Err(e) = check(&[], &stack[0]) {
        return fail(e);
    }
    for s in sorted {
        // prefixes up to the shared part were checked with earlier sentences
        let common = path.iter().zip(s.iter()).take_while(|(a, b)| a == b).count();
        path.truncate(common);
        stack.truncate(common + 1);
        for (i, token) in s.iter().enumerate().skip(common) {
            let next = oracle.step(stack.last().expect("start state"), token);
            stack.push(next);
            path.push(*token);
            if let Err(e) = check(&s[..=i], stack.last().expect("state")) {
                return fail(e);
            }
        }
        if !oracle.accepts(stack.last().expect("state")) {
            return fail(format!("oracle rejects enumerated sentence {:?}", tokens_to_text(s, lex)));
        }
    }
    pass(format!("{checked} prefixes of {} sentences agree", sentences.len()))
}

fn unambiguity(sentences: &[Vec<Token>]) -> Outcome {
    let lex = geo_lexicon().lex;
    for s in sentences {
        match parse(s) {
            Ok(_) => {}
            Err(GrammarError::AmbiguityError) => return fail(format!("ambiguous: {:?}", tokens_to_text(s, &lex))),
            Err(e) => return fail(format!("{:?} does not parse: {e}", tokens_to_text(s, &lex))),
        }
    }
    pass(format!("{} sentences, one tree each", sentences.len()))
}

fn reasoner_vs_oracle() -> Outcome {
    const KBS: u64 = 2000;
    let reasoner = Reasoner::default();
    let (mut sat, mut unsat) = (0, 0);
    for seed in 0..KBS {
        let kb = random_kb(&mut ChaCha8Rng::seed_from_u64(seed));
        match reasoner.is_consistent(&kb) {
            Ok((true, Some(model))) => {
                if !check_model(&model, &kb) {
                    return fail(format!("seed {seed}: witness violates the knowledge base"));
                }
                sat += 1;
            }
            Ok((true, None)) => return fail(format!("seed {seed}: consistent without a witness")),
            Ok((false, _)) => {
                if enumerate_models(&kb, 4).next().is_some() {
                    return fail(format!("seed {seed}: reported inconsistent but a model exists"));
                }
                unsat += 1;
            }
            Err(e) => return fail(format!("seed {seed}: {e}")),
        }
    }
    pass(format!("{KBS} knowledge bases ({sat} consistent, {unsat} inconsistent)"))
}

fn round_trip(sentences: &[Vec<Token>]) -> Outcome {
    let lex = geo_lexicon().lex;
    let mut axioms: BTreeSet<Axiom> = BTreeSet::new();
    for s in sentences {
        if let Ok(LogicForm::Axioms(a)) = parse(s).map_err(|_| ()).and_then(|t| translate(&t).map_err(|_| ())) {
            axioms.extend(a);
        }
    }
    for a in &axioms {
        let rendered = match verbalize_axiom(a, &lex) {
            Ok(r) => r,
            Err(e) => return fail(format!("{a:?}: {e}")),
        };
        if tokenize(&rendered.text, &lex).as_ref() != Ok(&rendered.tokens) {
            return fail(format!("{:?} does not tokenize back", rendered.text));
        }
        let back = parse(&rendered.tokens).map_err(|e| e.to_string()).and_then(|t| translate(&t).map_err(|e| e.to_string()));
        if back != Ok(LogicForm::Axioms(vec![a.clone()])) {
            return fail(format!("{:?} translates to {back:?}", rendered.text));
        }
    }
    pass(format!("{} distinct axioms", axioms.len()))
}

const FRESH_ELEMENT: EntityId = EntityId(1_000_001);
const FRESH_CLASS: EntityId = EntityId(1_000_002);
/// Enough for the scenario: its knowledge base has no existential
/// restrictions, so named individuals plus one witness element suffice.
const MODEL_BOUND: usize = 6;

fn oracle_entails(kb: &KnowledgeBase, goal: &Axiom) -> bool {
    let refutation = match goal {
        Axiom::SubClassOf(a, b) => {
            Axiom::ClassAssertion(ClassExpr::and(a.clone(), ClassExpr::not(b.clone())), FRESH_ELEMENT)
        }
        Axiom::ClassAssertion(c, i) => Axiom::ClassAssertion(ClassExpr::not(c.clone()), *i),
        // no model has the pair: x only reaches elements outside a class y is in
        Axiom::PropertyAssertion(r, x, y) => {
            let marked = kb.extended([Axiom::ClassAssertion(ClassExpr::Atom(FRESH_CLASS), *y)]);
            let cut = Axiom::ClassAssertion(ClassExpr::not(ClassExpr::exists(*r, ClassExpr::Atom(FRESH_CLASS))), *x);
            return enumerate_models(&marked.extended([cut]), MODEL_BOUND).next().is_none();
        }
    };
    enumerate_models(&kb.extended([refutation]), MODEL_BOUND).next().is_none()
}

fn texts(v: &[cnlwiki::verbalizer::RenderedSentence]) -> BTreeSet<String> {
    v.iter().map(|s| s.text.clone()).collect()
}

fn geography() -> Outcome {
    let mut state = WikiState::new().with_clock(Clock::Fixed(0));
    let mut statuses = Vec::new();
    let mut kb_around_rejection = None;
    for line in GEOGRAPHY.lines().filter(|l| !l.starts_with("ask")) {
        let before = state.kb().clone();
        let report = corpus::import(&mut state, line);
        if !report.is_ok() {
            return fail(format!("corpus line failed: {report}"));
        }
        for l in &report.lines {
            if let corpus::Outcome::Sentence(s) = &l.outcome {
                statuses.push((s.text.clone(), s.status));
                if s.text == "Zurich is not a city." {
                    kb_around_rejection = Some((before.clone(), state.kb().clone()));
                }
            }
        }
    }
    let status_of = |text: &str| statuses.iter().find(|(t, _)| t == text).map(|(_, s)| *s);
    let accepted = statuses.iter().filter(|(_, s)| *s == SentenceStatus::Accepted).count();
    if accepted != 8 {
        return fail(format!("{accepted} accepted sentences, expected 8"));
    }
    if status_of("If X borders Y then Y borders X.") != Some(SentenceStatus::BeyondFragment) {
        return fail("the rule is not marked beyond the fragment");
    }
    if status_of("Zurich is not a city.") != Some(SentenceStatus::RejectedInconsistent) {
        return fail("the contradiction was not rejected");
    }
    match kb_around_rejection {
        Some((before, after)) if before == after => {}
        _ => return fail("the rejected sentence changed the knowledge base"),
    }

    let ask = |text: &str| -> Result<BTreeSet<String>, String> {
        let tokens = tokenize(text, state.lexicon()).map_err(|e| e.to_string())?;
        state.ask(&tokens).map(|a| texts(&a)).map_err(|e| e.to_string())
    };
    let id = |title: &str| resolve_title(&state, title).expect("scenario word");
    let kb = state.kb();
    let lex = state.lexicon();

    // "What is Zurich?": the nouns Zurich provably belongs to
    let what = match ask("What is Zurich?") {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let expected: BTreeSet<String> = ["Zurich is a city.", "Zurich is an area."].map(String::from).into();
    if what != expected {
        return fail(format!("What is Zurich? -> {what:?}"));
    }
    let derived: BTreeSet<String> = lex
        .of_category(WordCategory::Noun)
        .filter(|c| oracle_entails(kb, &Axiom::ClassAssertion(ClassExpr::Atom(c.entity_id), id("Zurich"))))
        .map(|c| cnlwiki::verbalizer::verbalize_membership(id("Zurich"), c.entity_id, lex).unwrap().text)
        .collect();
    if derived != expected {
        return fail(format!("model oracle derives {derived:?} for Zurich"));
    }

    // "Which countries border Switzerland?": individuals that are certainly
    // countries and certainly border Switzerland
    let which = match ask("Which countries border Switzerland?") {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let expected: BTreeSet<String> = ["Germany borders Switzerland.".to_string()].into();
    if which != expected {
        return fail(format!("Which countries border Switzerland? -> {which:?}"));
    }
    let certain: BTreeSet<&str> = lex
        .of_category(WordCategory::ProperName)
        .filter(|x| {
            oracle_entails(kb, &Axiom::ClassAssertion(ClassExpr::Atom(id("country")), x.entity_id))
                && oracle_entails(kb, &Axiom::PropertyAssertion(id("borders"), x.entity_id, id("Switzerland")))
        })
        .map(|x| x.title())
        .collect();
    if certain != BTreeSet::from(["Germany"]) {
        return fail(format!("model oracle derives {certain:?} as bordering countries"));
    }

    let hierarchy = match state.hierarchy() {
        Ok(h) => h,
        Err(e) => return fail(e.to_string()),
    };
    for (sub, sup) in [("city", "area"), ("country", "area")] {
        if !hierarchy.edges.contains(&(id(sub), id(sup))) {
            return fail(format!("hierarchy lacks ({sub}, {sup}): {:?}", hierarchy.edges));
        }
        let goal = Axiom::SubClassOf(ClassExpr::Atom(id(sub)), ClassExpr::Atom(id(sup)));
        if !oracle_entails(kb, &goal) {
            return fail(format!("model oracle does not confirm ({sub}, {sup})"));
        }
    }
    if hierarchy.edges.len() != 2 {
        return fail(format!("unexpected extra edges: {:?}", hierarchy.edges));
    }
    pass("statuses, answers and hierarchy as expected, confirmed by model enumeration")
}

fn persistence() -> Outcome {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return fail(e.to_string()),
    };
    let path = dir.path().join("geography.json");
    let state = common::geography_state();
    if let Err(e) = state.save(&path) {
        return fail(e.to_string());
    }
    let loaded = match WikiState::load(&path) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string()),
    };
    if loaded != state || loaded.kb() != state.kb() {
        return fail("loaded state differs");
    }
    for e in state.lexicon().entries() {
        if loaded.views(e.entity_id).ok() != state.views(e.entity_id).ok() {
            return fail(format!("views of {} differ after loading", e.title()));
        }
    }
    let first = corpus::report(&state).map_err(|e| e.to_string());
    let replayed = corpus::report(&common::geography_state()).map_err(|e| e.to_string());
    let from_disk = corpus::report(&loaded).map_err(|e| e.to_string());
    let mut reimported = WikiState::new();
    let ok = corpus::import(&mut reimported, &corpus::export(&state)).is_ok();
    let from_export = corpus::report(&reimported).map_err(|e| e.to_string());
    if first.is_err() || !ok || first != replayed || first != from_disk || first != from_export {
        return fail("reports differ between replays");
    }
    if !first.as_ref().is_ok_and(|r| r.contains("\n  Every city is an area.\n")) {
        return fail("report lacks the hierarchy sentence");
    }
    pass("save/load equal; report byte-identical across replay, reload and export")
}

fn main() {
    let started = Instant::now();
    let lex = geo_lexicon().lex;
    let sentences: Vec<Vec<Token>> = enumerate_sentences(&lex, MAX_LEN).collect();
    let enumerated = started.elapsed();

    let criteria: [(&str, Box<dyn Fn() -> Outcome>); 6] = [
        ("prediction matches the extendability oracle", {
            let s = &sentences;
            // the clock includes enumerating the sentences
            Box::new(move || within(Duration::from_secs(120), Instant::now() - enumerated, prediction(s)))
        }),
        ("every sentence has exactly one parse", Box::new(|| unambiguity(&sentences))),
        ("reasoner agrees with the model oracle", Box::new(|| {
            let t = Instant::now();
            within(Duration::from_secs(300), t, reasoner_vs_oracle())
        })),
        ("verbalized axioms translate back", Box::new(|| round_trip(&sentences))),
        ("geography scenario", Box::new(|| {
            let t = Instant::now();
            within(Duration::from_secs(10), t, geography())
        })),
        ("persistence and reproducible reports", Box::new(persistence)),
    ];

    let mut failures = 0;
    for (name, run) in &criteria {
        let out = run();
        println!("{} {name}: {}", if out.passed { "PASS" } else { "FAIL" }, out.detail);
        failures += usize::from(!out.passed);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
