use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::lexicon::EntityId;
use crate::semantics::ClassExpr;

use super::KnowledgeBase;

/// A finite interpretation with domain `0..domain`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Model {
    pub domain: usize,
    pub class_ext: BTreeMap<EntityId, BTreeSet<usize>>,
    pub rel_ext: BTreeMap<EntityId, BTreeSet<(usize, usize)>>,
    pub ind_map: BTreeMap<EntityId, usize>,
}

impl Model {
    /// Extension of `expr` as a membership vector over the domain.
    pub fn extension(&self, expr: &ClassExpr) -> Vec<bool> {
        let n = self.domain;
        match expr {
            ClassExpr::Thing => vec![true; n],
            ClassExpr::Atom(a) => {
                let mut v = vec![false; n];
                for &d in self.class_ext.get(a).into_iter().flatten() {
                    if d < n {
                        v[d] = true;
                    }
                }
                v
            }
            ClassExpr::Not(e) => self.extension(e).into_iter().map(|b| !b).collect(),
            ClassExpr::And(a, b) => {
                self.extension(a).into_iter().zip(self.extension(b)).map(|(x, y)| x && y).collect()
            }
            ClassExpr::Or(a, b) => {
                self.extension(a).into_iter().zip(self.extension(b)).map(|(x, y)| x || y).collect()
            }
            ClassExpr::Exists(r, e) => {
                let inner = self.extension(e);
                let mut v = vec![false; n];
                for &(x, y) in self.rel_ext.get(r).into_iter().flatten() {
                    if x < n && y < n && inner[y] {
                        v[x] = true;
                    }
                }
                v
            }
        }
    }

    fn element(&self, ind: EntityId) -> Option<usize> {
        self.ind_map.get(&ind).copied()
    }
}

/// Whether `m` satisfies every axiom of `kb`, with individuals mapped
/// injectively into a non-empty domain.
pub fn check_model(m: &Model, kb: &KnowledgeBase) -> bool {
    if m.domain == 0 {
        return false;
    }
    let mut used = BTreeSet::new();
    for ind in kb.individuals() {
        match m.element(ind) {
            Some(d) if d < m.domain && used.insert(d) => {}
            _ => return false,
        }
    }
    let in_range = |&(x, y): &(usize, usize)| x < m.domain && y < m.domain;
    if !m.rel_ext.values().flatten().all(in_range) || !m.class_ext.values().flatten().all(|&d| d < m.domain) {
        return false;
    }
    for (sub, sup) in kb.tbox() {
        let (a, b) = (m.extension(sub), m.extension(sup));
        if a.iter().zip(&b).any(|(x, y)| *x && !*y) {
            return false;
        }
    }
    for (class, ind) in kb.class_assertions() {
        let d = m.element(*ind).expect("checked above");
        if !m.extension(class)[d] {
            return false;
        }
    }
    for (rel, a, b) in kb.property_assertions() {
        let pair = (m.element(*a).expect("checked above"), m.element(*b).expect("checked above"));
        if !m.rel_ext.get(rel).is_some_and(|s| s.contains(&pair)) {
            return false;
        }
    }
    true
}
