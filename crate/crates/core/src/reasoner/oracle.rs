//! Exhaustive model enumeration over small domains.
//!
//! Every interpretation of the signature over domains of size up to the
//! bound is a candidate. Candidates are not listed one by one; the axioms
//! are grounded into a propositional formula whose satisfying assignments
//! are exactly the models, which are then produced one at a time.

use std::collections::{BTreeMap, HashMap};

use varisat::{ExtendFormula, Lit, Solver, Var};

use crate::lexicon::EntityId;
use crate::semantics::ClassExpr;

use super::{KnowledgeBase, Model};

struct Grounding {
    solver: Solver<'static>,
    n: usize,
    classes: BTreeMap<EntityId, Vec<Var>>,
    rels: BTreeMap<EntityId, Vec<Var>>,
    inds: BTreeMap<EntityId, Vec<Var>>,
    memo: HashMap<(ClassExpr, usize), Lit>,
    primary: Vec<Var>,
}

impl Grounding {
    fn new(kb: &KnowledgeBase, n: usize) -> Self {
        let mut g = Grounding {
            solver: Solver::new(),
            n,
            classes: BTreeMap::new(),
            rels: BTreeMap::new(),
            inds: BTreeMap::new(),
            memo: HashMap::new(),
            primary: Vec::new(),
        };
        for c in kb.classes() {
            let vars = g.fresh_primary(n);
            g.classes.insert(c, vars);
        }
        for r in kb.relations() {
            let vars = g.fresh_primary(n * n);
            g.rels.insert(r, vars);
        }
        for i in kb.individuals() {
            let vars = g.fresh_primary(n);
            g.solver.add_clause(&vars.iter().map(|v| v.positive()).collect::<Vec<_>>());
            for x in 0..n {
                for y in x + 1..n {
                    g.solver.add_clause(&[vars[x].negative(), vars[y].negative()]);
                }
            }
            g.inds.insert(i, vars);
        }
        let inds: Vec<Vec<Var>> = g.inds.values().cloned().collect();
        for d in 0..n {
            for (k, a) in inds.iter().enumerate() {
                for b in &inds[k + 1..] {
                    g.solver.add_clause(&[a[d].negative(), b[d].negative()]);
                }
            }
        }
        g
    }

    fn fresh_primary(&mut self, count: usize) -> Vec<Var> {
        let vars: Vec<Var> = (0..count).map(|_| self.solver.new_var()).collect();
        self.primary.extend(&vars);
        vars
    }

    fn define_and(&mut self, parts: &[Lit]) -> Lit {
        let v = self.solver.new_lit();
        for &p in parts {
            self.solver.add_clause(&[!v, p]);
        }
        let mut back: Vec<Lit> = parts.iter().map(|&p| !p).collect();
        back.push(v);
        self.solver.add_clause(&back);
        v
    }

    fn define_or(&mut self, parts: &[Lit]) -> Lit {
        let v = self.solver.new_lit();
        for &p in parts {
            self.solver.add_clause(&[!p, v]);
        }
        let mut fwd: Vec<Lit> = parts.to_vec();
        fwd.push(!v);
        self.solver.add_clause(&fwd);
        v
    }

    /// Literal true exactly when element `d` belongs to `e`.
    fn lit(&mut self, e: &ClassExpr, d: usize) -> Lit {
        match e {
            ClassExpr::Atom(a) => self.classes[a][d].positive(),
            ClassExpr::Not(inner) => !self.lit(inner, d),
            _ => {
                if let Some(&l) = self.memo.get(&(e.clone(), d)) {
                    return l;
                }
                let l = match e {
                    ClassExpr::Thing => {
                        let v = self.solver.new_lit();
                        self.solver.add_clause(&[v]);
                        v
                    }
                    ClassExpr::And(a, b) => {
                        let parts = [self.lit(a, d), self.lit(b, d)];
                        self.define_and(&parts)
                    }
                    ClassExpr::Or(a, b) => {
                        let parts = [self.lit(a, d), self.lit(b, d)];
                        self.define_or(&parts)
                    }
                    ClassExpr::Exists(r, inner) => {
                        let mut witnesses = Vec::with_capacity(self.n);
                        for y in 0..self.n {
                            let edge = self.rels[r][d * self.n + y].positive();
                            let member = self.lit(inner, y);
                            witnesses.push(self.define_and(&[edge, member]));
                        }
                        self.define_or(&witnesses)
                    }
                    ClassExpr::Atom(_) | ClassExpr::Not(_) => unreachable!(),
                };
                self.memo.insert((e.clone(), d), l);
                l
            }
        }
    }

    fn assert_axioms(&mut self, kb: &KnowledgeBase) {
        let n = self.n;
        for (sub, sup) in kb.tbox() {
            for d in 0..n {
                let clause = [!self.lit(sub, d), self.lit(sup, d)];
                self.solver.add_clause(&clause);
            }
        }
        for (class, ind) in kb.class_assertions() {
            for d in 0..n {
                let clause = [self.inds[ind][d].negative(), self.lit(class, d)];
                self.solver.add_clause(&clause);
            }
        }
        for (rel, a, b) in kb.property_assertions() {
            for x in 0..n {
                for y in 0..n {
                    let clause =
                        [self.inds[a][x].negative(), self.inds[b][y].negative(), self.rels[rel][x * n + y].positive()];
                    self.solver.add_clause(&clause);
                }
            }
        }
    }

    fn decode(&self, assignment: &[bool]) -> Model {
        let n = self.n;
        let mut m = Model { domain: n, ..Model::default() };
        for (c, vars) in &self.classes {
            m.class_ext.insert(*c, (0..n).filter(|&d| assignment[vars[d].index()]).collect());
        }
        for (r, vars) in &self.rels {
            let pairs = (0..n * n).filter(|&k| assignment[vars[k].index()]).map(|k| (k / n, k % n));
            m.rel_ext.insert(*r, pairs.collect());
        }
        for (i, vars) in &self.inds {
            let d = (0..n).find(|&d| assignment[vars[d].index()]).expect("exactly one element");
            m.ind_map.insert(*i, d);
        }
        m
    }

    fn block(&mut self, assignment: &[bool]) {
        let clause: Vec<Lit> = self.primary.iter().map(|&v| v.lit(!assignment[v.index()])).collect();
        self.solver.add_clause(&clause);
    }
}

/// Lazily yields every model of a knowledge base with at most
/// `max_domain` elements, smallest domains first.
pub struct ModelStream {
    kb: KnowledgeBase,
    size: usize,
    max: usize,
    current: Option<Grounding>,
}

impl Iterator for ModelStream {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        loop {
            if self.current.is_none() {
                if self.size > self.max {
                    return None;
                }
                let mut g = Grounding::new(&self.kb, self.size);
                g.assert_axioms(&self.kb);
                self.current = Some(g);
                self.size += 1;
            }
            let g = self.current.as_mut().expect("set above");
            let sat = g.solver.solve().expect("no assumptions or proofs are used");
            match g.solver.model().filter(|_| sat) {
                Some(lits) => {
                    let mut assignment = vec![false; lits.len()];
                    for l in lits {
                        assignment[l.index()] = l.is_positive();
                    }
                    let model = g.decode(&assignment);
                    g.block(&assignment);
                    return Some(model);
                }
                None => self.current = None,
            }
        }
    }
}

pub fn enumerate_models(kb: &KnowledgeBase, max_domain: usize) -> ModelStream {
    let start = kb.individuals().count().max(1);
    ModelStream { kb: kb.clone(), size: start, max: max_domain, current: None }
}
