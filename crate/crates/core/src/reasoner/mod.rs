//! Consistency, entailment, classification and query answering.

mod model;
mod oracle;
mod tableau;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::EntityId;
use crate::semantics::{Axiom, ClassExpr, Condition, Query};

pub use model::{check_model, Model};
pub use oracle::{enumerate_models, ModelStream};

use tableau::{Seed, Tableau};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("reasoning exceeded the budget of {budget} tableau nodes")]
    ResourceLimit { budget: usize },
}

pub type Result<T> = std::result::Result<T, ReasonerError>;

/// The axioms of the accepted sentences, grouped by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct KnowledgeBase {
    tbox: BTreeSet<(ClassExpr, ClassExpr)>,
    abox_c: BTreeSet<(ClassExpr, EntityId)>,
    abox_r: BTreeSet<(EntityId, EntityId, EntityId)>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        let mut kb = Self::new();
        for a in axioms {
            kb.insert(a);
        }
        kb
    }

    /// Returns false if the axiom was already present.
    pub fn insert(&mut self, axiom: Axiom) -> bool {
        match axiom {
            Axiom::SubClassOf(a, b) => self.tbox.insert((a, b)),
            Axiom::ClassAssertion(c, i) => self.abox_c.insert((c, i)),
            Axiom::PropertyAssertion(r, a, b) => self.abox_r.insert((r, a, b)),
        }
    }

    pub fn remove(&mut self, axiom: &Axiom) -> bool {
        match axiom {
            Axiom::SubClassOf(a, b) => self.tbox.remove(&(a.clone(), b.clone())),
            Axiom::ClassAssertion(c, i) => self.abox_c.remove(&(c.clone(), *i)),
            Axiom::PropertyAssertion(r, a, b) => self.abox_r.remove(&(*r, *a, *b)),
        }
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        match axiom {
            Axiom::SubClassOf(a, b) => self.tbox.contains(&(a.clone(), b.clone())),
            Axiom::ClassAssertion(c, i) => self.abox_c.contains(&(c.clone(), *i)),
            Axiom::PropertyAssertion(r, a, b) => self.abox_r.contains(&(*r, *a, *b)),
        }
    }

    /// A copy with `extra` added.
    pub fn extended(&self, extra: impl IntoIterator<Item = Axiom>) -> Self {
        let mut kb = self.clone();
        for a in extra {
            kb.insert(a);
        }
        kb
    }

    pub fn tbox(&self) -> impl Iterator<Item = &(ClassExpr, ClassExpr)> {
        self.tbox.iter()
    }

    pub fn class_assertions(&self) -> impl Iterator<Item = &(ClassExpr, EntityId)> {
        self.abox_c.iter()
    }

    pub fn property_assertions(&self) -> impl Iterator<Item = &(EntityId, EntityId, EntityId)> {
        self.abox_r.iter()
    }

    pub fn axioms(&self) -> impl Iterator<Item = Axiom> + '_ {
        let t = self.tbox.iter().map(|(a, b)| Axiom::SubClassOf(a.clone(), b.clone()));
        let c = self.abox_c.iter().map(|(c, i)| Axiom::ClassAssertion(c.clone(), *i));
        let r = self.abox_r.iter().map(|&(r, a, b)| Axiom::PropertyAssertion(r, a, b));
        t.chain(c).chain(r)
    }

    pub fn len(&self) -> usize {
        self.tbox.len() + self.abox_c.len() + self.abox_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn class_exprs(&self) -> impl Iterator<Item = &ClassExpr> {
        self.tbox.iter().flat_map(|(a, b)| [a, b]).chain(self.abox_c.iter().map(|(c, _)| c))
    }

    /// Atomic classes in the signature.
    pub fn classes(&self) -> impl Iterator<Item = EntityId> {
        let mut out = BTreeSet::new();
        for e in self.class_exprs() {
            e.atoms(&mut out);
        }
        out.into_iter()
    }

    pub fn relations(&self) -> impl Iterator<Item = EntityId> {
        let mut out = BTreeSet::new();
        for e in self.class_exprs() {
            e.relations(&mut out);
        }
        out.extend(self.abox_r.iter().map(|(r, _, _)| *r));
        out.into_iter()
    }

    pub fn individuals(&self) -> impl Iterator<Item = EntityId> {
        let mut out: BTreeSet<EntityId> = self.abox_c.iter().map(|(_, i)| *i).collect();
        for (_, a, b) in &self.abox_r {
            out.insert(*a);
            out.insert(*b);
        }
        out.into_iter()
    }
}

/// Classification result over the atomic classes of a knowledge base.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Hierarchy {
    /// Direct (sub, super) pairs between equivalence-class representatives.
    pub edges: Vec<(EntityId, EntityId)>,
    /// Partition of the classes into equivalence classes; each group is
    /// sorted and its first member is the representative.
    pub equivalences: Vec<Vec<EntityId>>,
}

impl Hierarchy {
    fn representative(&self, class: EntityId) -> EntityId {
        self.equivalences.iter().find(|g| g.contains(&class)).map_or(class, |g| g[0])
    }

    fn group(&self, rep: EntityId) -> &[EntityId] {
        self.equivalences.iter().find(|g| g[0] == rep).map_or(&[], |g| g.as_slice())
    }

    /// Classes equivalent to `class`, excluding itself.
    pub fn equivalents(&self, class: EntityId) -> Vec<EntityId> {
        let rep = self.representative(class);
        self.group(rep).iter().copied().filter(|c| *c != class).collect()
    }

    fn closure(&self, class: EntityId, upward: bool) -> BTreeSet<EntityId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.representative(class)];
        while let Some(c) = stack.pop() {
            for &(sub, sup) in &self.edges {
                let (from, to) = if upward { (sub, sup) } else { (sup, sub) };
                if from == c && seen.insert(to) {
                    stack.push(to);
                }
            }
        }
        seen.iter().flat_map(|rep| self.group(*rep).iter().copied()).collect()
    }

    /// All strict superclasses (transitively), equivalents excluded.
    pub fn superclasses(&self, class: EntityId) -> BTreeSet<EntityId> {
        self.closure(class, true)
    }

    pub fn subclasses(&self, class: EntityId) -> BTreeSet<EntityId> {
        self.closure(class, false)
    }

    /// Whether the hierarchy records `sub` as subsumed by `sup`.
    pub fn subsumes(&self, sup: EntityId, sub: EntityId) -> bool {
        self.representative(sub) == self.representative(sup) || self.superclasses(sub).contains(&sup)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Individuals(BTreeSet<EntityId>),
    Classes(BTreeSet<EntityId>),
}

impl Answer {
    pub fn ids(&self) -> &BTreeSet<EntityId> {
        match self {
            Answer::Individuals(s) | Answer::Classes(s) => s,
        }
    }
}

pub const DEFAULT_NODE_BUDGET: usize = 100_000;

/// Reasoning entry point; holds the per-call node budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reasoner {
    pub node_budget: usize,
}

impl Default for Reasoner {
    fn default() -> Self {
        Reasoner { node_budget: DEFAULT_NODE_BUDGET }
    }
}

impl Reasoner {
    pub fn new(node_budget: usize) -> Self {
        Reasoner { node_budget }
    }

    fn run(&self, kb: &KnowledgeBase, seeds: &[Seed]) -> Result<Option<Model>> {
        Tableau::new(kb, self.node_budget).run(kb, seeds)
    }

    /// Satisfiability, with a witness model when satisfiable.
    pub fn is_consistent(&self, kb: &KnowledgeBase) -> Result<(bool, Option<Model>)> {
        let witness = self.run(kb, &[])?;
        Ok((witness.is_some(), witness))
    }

    pub fn entails(&self, kb: &KnowledgeBase, goal: &Axiom) -> Result<bool> {
        match goal {
            Axiom::SubClassOf(sub, sup) => {
                let counter = ClassExpr::and(sub.clone(), ClassExpr::not(sup.clone()));
                Ok(self.run(kb, &[Seed::Fresh(counter)])?.is_none())
            }
            Axiom::ClassAssertion(class, ind) => {
                let seed = Seed::Individual(*ind, ClassExpr::not(class.clone()));
                Ok(self.run(kb, &[seed])?.is_none())
            }
            Axiom::PropertyAssertion(..) => Ok(kb.contains(goal)),
        }
    }

    pub fn classify(&self, kb: &KnowledgeBase) -> Result<Hierarchy> {
        let classes: Vec<EntityId> = kb.classes().collect();
        let n = classes.len();
        let mut sub = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                sub[i][j] = i == j
                    || self.entails(kb, &Axiom::SubClassOf(ClassExpr::Atom(classes[i]), ClassExpr::Atom(classes[j])))?;
            }
        }
        let mut rep_of = vec![usize::MAX; n];
        let mut equivalences = Vec::new();
        for i in 0..n {
            if rep_of[i] != usize::MAX {
                continue;
            }
            let group: Vec<usize> = (i..n).filter(|&j| rep_of[j] == usize::MAX && sub[i][j] && sub[j][i]).collect();
            for &j in &group {
                rep_of[j] = i;
            }
            equivalences.push(group.iter().map(|&j| classes[j]).collect::<Vec<_>>());
        }
        let reps: Vec<usize> = (0..n).filter(|&i| rep_of[i] == i).collect();
        let mut edges = Vec::new();
        for &a in &reps {
            for &b in &reps {
                if a == b || !sub[a][b] {
                    continue;
                }
                let implied = reps.iter().any(|&c| c != a && c != b && sub[a][c] && sub[c][b]);
                if !implied {
                    edges.push((classes[a], classes[b]));
                }
            }
        }
        Ok(Hierarchy { edges, equivalences })
    }

    /// Named individuals of the knowledge base certainly in `class`.
    pub fn instances_of(&self, kb: &KnowledgeBase, class: &ClassExpr) -> Result<BTreeSet<EntityId>> {
        let mut out = BTreeSet::new();
        for ind in kb.individuals() {
            if self.entails(kb, &Axiom::ClassAssertion(class.clone(), ind))? {
                out.insert(ind);
            }
        }
        Ok(out)
    }

    /// Atomic classes the individual certainly belongs to.
    pub fn classes_of(&self, kb: &KnowledgeBase, ind: EntityId) -> Result<BTreeSet<EntityId>> {
        let mut out = BTreeSet::new();
        for class in kb.classes() {
            if self.entails(kb, &Axiom::ClassAssertion(ClassExpr::Atom(class), ind))? {
                out.insert(class);
            }
        }
        Ok(out)
    }

    /// Certain answers to a question.
    pub fn answer(&self, kb: &KnowledgeBase, query: &Query) -> Result<Answer> {
        match query {
            Query::ClassesOf(ind) => Ok(Answer::Classes(self.classes_of(kb, *ind)?)),
            Query::SubjectsSuchThat { restriction, condition, .. } => {
                let restrict = restriction.map(ClassExpr::Atom);
                let found = match condition {
                    Condition::Related { relation, object } => {
                        let mut out = BTreeSet::new();
                        let subjects: BTreeSet<EntityId> = kb
                            .property_assertions()
                            .filter(|(r, _, b)| r == relation && b == object)
                            .map(|(_, a, _)| *a)
                            .collect();
                        for x in subjects {
                            let ok = match &restrict {
                                None => true,
                                Some(c) => self.entails(kb, &Axiom::ClassAssertion(c.clone(), x))?,
                            };
                            if ok {
                                out.insert(x);
                            }
                        }
                        out
                    }
                    Condition::Member(class) => {
                        let target = match restrict {
                            Some(r) => ClassExpr::and(r, class.clone()),
                            None => class.clone(),
                        };
                        self.instances_of(kb, &target)?
                    }
                };
                Ok(Answer::Individuals(found))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: EntityId = EntityId(1);
    const B: EntityId = EntityId(2);
    const C: EntityId = EntityId(3);
    const R: EntityId = EntityId(4);
    const P: EntityId = EntityId(5);
    const CITY: EntityId = EntityId(10);
    const AREA: EntityId = EntityId(11);
    const COUNTRY: EntityId = EntityId(12);
    const THING: EntityId = EntityId(13);
    const BORDERS: EntityId = EntityId(14);
    const ZURICH: EntityId = EntityId(20);
    const GERMANY: EntityId = EntityId(21);
    const SWITZERLAND: EntityId = EntityId(22);

    fn at(id: EntityId) -> ClassExpr {
        ClassExpr::Atom(id)
    }

    fn sub(a: ClassExpr, b: ClassExpr) -> Axiom {
        Axiom::SubClassOf(a, b)
    }

    fn consistent(kb: &KnowledgeBase) -> bool {
        let (ok, witness) = Reasoner::default().is_consistent(kb).unwrap();
        if let Some(m) = &witness {
            assert!(check_model(m, kb), "witness fails: {m:?}");
        }
        ok
    }

    #[test]
    fn direct_clash() {
        let kb = KnowledgeBase::from_axioms([
            sub(at(A), ClassExpr::not(at(B))),
            Axiom::ClassAssertion(at(A), P),
            Axiom::ClassAssertion(at(B), P),
        ]);
        assert!(!consistent(&kb));
    }

    #[test]
    fn empty_kb_one_element_witness() {
        let (ok, witness) = Reasoner::default().is_consistent(&KnowledgeBase::new()).unwrap();
        assert!(ok);
        assert_eq!(witness.unwrap().domain, 1);
    }

    #[test]
    fn cyclic_existential_terminates() {
        let kb = KnowledgeBase::from_axioms([sub(at(A), ClassExpr::exists(R, at(A))), Axiom::ClassAssertion(at(A), P)]);
        assert!(consistent(&kb));
    }

    #[test]
    fn general_axiom_cycle_terminates() {
        // every element has an r-successor in A
        let kb = KnowledgeBase::from_axioms([sub(ClassExpr::Thing, ClassExpr::exists(R, at(A)))]);
        assert!(consistent(&kb));
    }

    #[test]
    fn modus_ponens() {
        let kb = KnowledgeBase::from_axioms([sub(at(CITY), at(AREA)), Axiom::ClassAssertion(at(CITY), ZURICH)]);
        assert!(Reasoner::default().entails(&kb, &Axiom::ClassAssertion(at(AREA), ZURICH)).unwrap());
    }

    #[test]
    fn existential_subsumption() {
        let kb = KnowledgeBase::from_axioms([sub(at(A), ClassExpr::exists(R, at(B))), sub(at(B), at(C))]);
        let goal = sub(at(A), ClassExpr::exists(R, at(C)));
        assert!(Reasoner::default().entails(&kb, &goal).unwrap());
        let oracle_counterexample = KnowledgeBase::from_axioms([
            sub(at(A), ClassExpr::exists(R, at(B))),
            sub(at(B), at(C)),
            Axiom::ClassAssertion(ClassExpr::and(at(A), ClassExpr::not(ClassExpr::exists(R, at(C)))), P),
        ]);
        assert_eq!(enumerate_models(&oracle_counterexample, 4).next(), None);
    }

    #[test]
    fn independent_atoms_not_subsumed() {
        assert!(!Reasoner::default().entails(&KnowledgeBase::new(), &sub(at(A), at(B))).unwrap());
    }

    #[test]
    fn classify_reduces_transitive_edges() {
        let kb = KnowledgeBase::from_axioms([sub(at(CITY), at(AREA)), sub(at(AREA), at(THING))]);
        let h = Reasoner::default().classify(&kb).unwrap();
        assert_eq!(h.edges, vec![(CITY, AREA), (AREA, THING)]);
        assert!(h.subsumes(THING, CITY));
    }

    #[test]
    fn classify_equivalence() {
        let kb = KnowledgeBase::from_axioms([sub(at(A), at(B)), sub(at(B), at(A))]);
        let h = Reasoner::default().classify(&kb).unwrap();
        assert_eq!(h.equivalences, vec![vec![A, B]]);
        assert!(h.edges.is_empty());
        assert_eq!(h.equivalents(B), vec![A]);
    }

    #[test]
    fn classify_independent() {
        let kb = KnowledgeBase::from_axioms([Axiom::ClassAssertion(ClassExpr::or(at(A), at(B)), P)]);
        let h = Reasoner::default().classify(&kb).unwrap();
        assert!(h.edges.is_empty());
        assert_eq!(h.equivalences, vec![vec![A], vec![B]]);
    }

    #[test]
    fn open_world_instances() {
        let kb = KnowledgeBase::from_axioms([Axiom::ClassAssertion(at(CITY), ZURICH), sub(at(CITY), at(AREA))]);
        let r = Reasoner::default();
        assert_eq!(r.instances_of(&kb, &at(AREA)).unwrap(), BTreeSet::from([ZURICH]));
        let not_country = ClassExpr::not(at(COUNTRY));
        assert!(r.instances_of(&kb, &not_country).unwrap().is_empty());
        // the oracle finds a model where Zurich is a country
        let with_country = kb.extended([Axiom::ClassAssertion(at(COUNTRY), ZURICH)]);
        assert!(enumerate_models(&with_country, 2).next().is_some());
        assert!(r.instances_of(&KnowledgeBase::new(), &at(AREA)).unwrap().is_empty());
    }

    #[test]
    fn answers() {
        let r = Reasoner::default();
        let kb = KnowledgeBase::from_axioms([Axiom::ClassAssertion(at(CITY), ZURICH), sub(at(CITY), at(AREA))]);
        assert_eq!(r.answer(&kb, &Query::ClassesOf(ZURICH)).unwrap(), Answer::Classes(BTreeSet::from([CITY, AREA])));
        let kb = KnowledgeBase::from_axioms([
            Axiom::ClassAssertion(at(COUNTRY), GERMANY),
            Axiom::PropertyAssertion(BORDERS, GERMANY, SWITZERLAND),
        ]);
        let q = Query::SubjectsSuchThat {
            restriction: Some(COUNTRY),
            condition: Condition::Related { relation: BORDERS, object: SWITZERLAND },
            pattern: crate::grammar::Vp::Verb(BORDERS, crate::grammar::NounPhrase::Named(SWITZERLAND)),
        };
        assert_eq!(r.answer(&kb, &q).unwrap(), Answer::Individuals(BTreeSet::from([GERMANY])));
        assert!(r.answer(&KnowledgeBase::new(), &q).unwrap().ids().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let kb = KnowledgeBase::from_axioms([sub(at(A), ClassExpr::exists(R, at(B))), Axiom::ClassAssertion(at(A), P)]);
        assert_eq!(Reasoner::new(1).is_consistent(&kb), Err(ReasonerError::ResourceLimit { budget: 1 }));
    }

    #[test]
    fn signature() {
        let kb = KnowledgeBase::from_axioms([
            sub(at(A), ClassExpr::exists(R, at(B))),
            Axiom::PropertyAssertion(BORDERS, GERMANY, SWITZERLAND),
        ]);
        assert_eq!(kb.classes().collect::<Vec<_>>(), vec![A, B]);
        assert_eq!(kb.relations().collect::<Vec<_>>(), vec![R, BORDERS]);
        assert_eq!(kb.individuals().collect::<Vec<_>>(), vec![GERMANY, SWITZERLAND]);
    }
}
