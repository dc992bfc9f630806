#![allow(dead_code)]

pub mod bnf;

use std::collections::BTreeMap;

use cnlwiki::lexicon::forms;
use cnlwiki::reasoner::{KnowledgeBase, Model};
use cnlwiki::semantics::{Axiom, ClassExpr};
use cnlwiki::{EntityId, FormSlot, Lexicon, WordCategory};
use rand::seq::SliceRandom;
use rand::Rng;

/// The geography lexicon; `ids` maps each title to its entity.
pub struct Geo {
    pub lex: Lexicon,
    pub ids: BTreeMap<&'static str, EntityId>,
}

impl Geo {
    pub fn id(&self, title: &str) -> EntityId {
        self.ids[title]
    }
}

/// Zurich, Switzerland, Europe; city, country, area, continent; borders;
/// part (of); located-in.
pub fn geo_lexicon() -> Geo {
    use FormSlot::*;
    use WordCategory::*;
    let mut lex = Lexicon::new();
    let mut ids = BTreeMap::new();
    for pn in ["Zurich", "Switzerland", "Europe"] {
        ids.insert(pn, lex.add_word(ProperName, forms([(Base, pn)])).unwrap().entity_id);
    }
    for (sg, pl) in [("city", "cities"), ("country", "countries"), ("area", "areas"), ("continent", "continents")] {
        ids.insert(sg, lex.add_word(Noun, forms([(Singular, sg), (Plural, pl)])).unwrap().entity_id);
    }
    ids.insert("borders", lex.add_word(TransitiveVerb, forms([(ThirdSg, "borders"), (Bare, "border")])).unwrap().entity_id);
    ids.insert("part", lex.add_word(OfConstruct, forms([(Base, "part")])).unwrap().entity_id);
    ids.insert("located-in", lex.add_word(TransitiveAdjective, forms([(Base, "located-in")])).unwrap().entity_id);
    Geo { lex, ids }
}

pub const CLASSES: [EntityId; 3] = [EntityId(1), EntityId(2), EntityId(3)];
pub const RELATIONS: [EntityId; 2] = [EntityId(4), EntityId(5)];
pub const INDIVIDUALS: [EntityId; 2] = [EntityId(6), EntityId(7)];

pub fn random_expr<R: Rng>(rng: &mut R, depth: usize) -> ClassExpr {
    let leaf = |rng: &mut R| {
        if rng.gen_ratio(1, 8) {
            ClassExpr::Thing
        } else {
            ClassExpr::Atom(CLASSES[rng.gen_range(0..CLASSES.len())])
        }
    };
    if depth == 0 || rng.gen_ratio(1, 3) {
        return leaf(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => ClassExpr::not(random_expr(rng, d)),
        1 => ClassExpr::and(random_expr(rng, d), random_expr(rng, d)),
        2 => ClassExpr::or(random_expr(rng, d), random_expr(rng, d)),
        _ => ClassExpr::exists(RELATIONS[rng.gen_range(0..RELATIONS.len())], random_expr(rng, d)),
    }
}

pub fn random_axiom<R: Rng>(rng: &mut R) -> Axiom {
    let ind = |rng: &mut R| INDIVIDUALS[rng.gen_range(0..INDIVIDUALS.len())];
    match rng.gen_range(0..10) {
        0..=2 => Axiom::SubClassOf(ClassExpr::Atom(CLASSES[rng.gen_range(0..3)]), random_expr(rng, 2)),
        3..=4 => Axiom::SubClassOf(random_expr(rng, 2), random_expr(rng, 2)),
        5..=7 => Axiom::ClassAssertion(random_expr(rng, 2), ind(rng)),
        _ => Axiom::PropertyAssertion(RELATIONS[rng.gen_range(0..2)], ind(rng), ind(rng)),
    }
}

/// At most six axioms over three classes, two relations and two individuals.
pub fn random_kb<R: Rng>(rng: &mut R) -> KnowledgeBase {
    let n = rng.gen_range(0..=6);
    KnowledgeBase::from_axioms((0..n).map(|_| random_axiom(rng)))
}

/// A random interpretation of the test signature over `1..=max_domain`
/// elements, individuals mapped injectively.
pub fn random_model<R: Rng>(rng: &mut R, max_domain: usize) -> Model {
    let n = rng.gen_range(INDIVIDUALS.len().min(max_domain).max(1)..=max_domain);
    let mut m = Model { domain: n, ..Model::default() };
    for c in CLASSES {
        m.class_ext.insert(c, (0..n).filter(|_| rng.gen_bool(0.5)).collect());
    }
    for r in RELATIONS {
        let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));
        m.rel_ext.insert(r, pairs.filter(|_| rng.gen_bool(0.4)).collect());
    }
    let mut elements: Vec<usize> = (0..n).collect();
    elements.shuffle(rng);
    for (i, d) in INDIVIDUALS.iter().zip(elements) {
        m.ind_map.insert(*i, d);
    }
    m
}

pub const GEOGRAPHY: &str = include_str!("../fixtures/geography.corpus");

/// The geography fixture imported into a fresh state with a fixed clock.
pub fn geography_state() -> cnlwiki::WikiState {
    let mut state = cnlwiki::WikiState::new().with_clock(cnlwiki::wiki::Clock::Fixed(0));
    let report = cnlwiki::corpus::import(&mut state, GEOGRAPHY);
    assert!(report.is_ok(), "{report}");
    state
}
