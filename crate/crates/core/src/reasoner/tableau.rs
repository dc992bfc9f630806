//! Tableau procedure for ALC with an ABox under unique names.
//!
//! Axioms whose left side is a class name are unfolded lazily (the right
//! side is added to a node once the name appears in its label); every
//! other axiom is internalized and added to every node. Generated nodes
//! are blocked when their label is a subset of an ancestor's label.
//!
//! Each label entry remembers the branching decisions it depends on, so a
//! clash backtracks straight to the latest decision involved in it instead
//! of retrying unrelated ones.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::lexicon::EntityId;
use crate::semantics::{nnf, ClassExpr, NnfExpr};

use super::{KnowledgeBase, Model, ReasonerError};

type Cid = u32;

/// Sorted indices of the branching decisions a fact depends on.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Deps(Rc<[u32]>);

impl Deps {
    fn union(&self, other: &Deps) -> Deps {
        if other.0.is_empty() {
            return self.clone();
        }
        if self.0.is_empty() {
            return other.clone();
        }
        let mut v: Vec<u32> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Deps(v.into())
    }

    fn with(&self, level: u32) -> Deps {
        self.union(&Deps(Rc::new([level])))
    }

    fn without(&self, level: u32) -> Deps {
        Deps(self.0.iter().copied().filter(|&l| l != level).collect())
    }

    fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Concept {
    Top,
    Bottom,
    Atom(EntityId),
    NegAtom(EntityId),
    And(Cid, Cid),
    Or(Cid, Cid),
    Exists(EntityId, Cid),
    Forall(EntityId, Cid),
}

#[derive(Default)]
struct Interner {
    concepts: Vec<Concept>,
    ids: HashMap<Concept, Cid>,
}

impl Interner {
    fn add(&mut self, c: Concept) -> Cid {
        *self.ids.entry(c).or_insert_with(|| {
            self.concepts.push(c);
            (self.concepts.len() - 1) as Cid
        })
    }

    fn intern(&mut self, e: &NnfExpr) -> Cid {
        let c = match e {
            NnfExpr::Thing => Concept::Top,
            NnfExpr::Nothing => Concept::Bottom,
            NnfExpr::Atom(a) => Concept::Atom(*a),
            NnfExpr::NotAtom(a) => Concept::NegAtom(*a),
            NnfExpr::And(a, b) => Concept::And(self.intern(a), self.intern(b)),
            NnfExpr::Or(a, b) => Concept::Or(self.intern(a), self.intern(b)),
            NnfExpr::Exists(r, e) => Concept::Exists(*r, self.intern(e)),
            NnfExpr::Forall(r, e) => Concept::Forall(*r, self.intern(e)),
        };
        self.add(c)
    }
}

#[derive(Debug, Clone)]
struct Node {
    /// sorted
    label: Vec<Cid>,
    /// parallel to `label`
    deps: Vec<Deps>,
    parent: Option<u32>,
    edges: Vec<(EntityId, u32, Deps)>,
    individual: Option<EntityId>,
}

impl Node {
    fn has(&self, c: Cid) -> bool {
        self.label.binary_search(&c).is_ok()
    }

    fn deps_of(&self, c: Cid) -> Deps {
        let i = self.label.binary_search(&c).expect("concept in label");
        self.deps[i].clone()
    }

    fn is_root(&self) -> bool {
        self.parent.is_none()
    }
}

#[derive(Debug, Clone, Default)]
struct Graph {
    nodes: Vec<Node>,
}

impl Graph {
    fn is_subset(small: &[Cid], large: &[Cid]) -> bool {
        let mut it = large.iter();
        small.iter().all(|c| it.by_ref().any(|l| l == c))
    }

    /// Topmost ancestor whose label contains the node's label.
    fn blocker(&self, x: u32) -> Option<u32> {
        let node = &self.nodes[x as usize];
        if node.is_root() {
            return None;
        }
        let mut found = None;
        let mut cur = node.parent;
        while let Some(y) = cur {
            if Self::is_subset(&node.label, &self.nodes[y as usize].label) {
                found = Some(y);
            }
            cur = self.nodes[y as usize].parent;
        }
        found
    }

    /// Directly blocked, or below a directly blocked node.
    fn is_blocked(&self, x: u32) -> bool {
        let mut cur = Some(x);
        while let Some(n) = cur {
            if self.blocker(n).is_some() {
                return true;
            }
            cur = self.nodes[n as usize].parent;
        }
        false
    }
}

/// Label additions for one satisfiability test.
pub(crate) enum Seed {
    Individual(EntityId, ClassExpr),
    Fresh(ClassExpr),
}

pub(crate) struct Tableau {
    interner: Interner,
    unfold: HashMap<EntityId, Vec<Cid>>,
    global: Vec<Cid>,
    budget: usize,
    created: usize,
    queue: Vec<(u32, Cid)>,
}

enum Step {
    Clash(Deps),
    Done,
}

struct Choice {
    saved: Graph,
    node: u32,
    or: Cid,
    alternative: Cid,
}

impl Tableau {
    pub(crate) fn new(kb: &KnowledgeBase, budget: usize) -> Self {
        let mut t = Tableau {
            interner: Interner::default(),
            unfold: HashMap::new(),
            global: Vec::new(),
            budget,
            created: 0,
            queue: Vec::new(),
        };
        for (sub, sup) in kb.tbox() {
            match sub {
                ClassExpr::Atom(a) => {
                    let c = t.interner.intern(&nnf(sup));
                    t.unfold.entry(*a).or_default().push(c);
                }
                _ => {
                    let gci = NnfExpr::Or(Box::new(nnf(sub).negate()), Box::new(nnf(sup)));
                    let c = t.interner.intern(&gci);
                    t.global.push(c);
                }
            }
        }
        t
    }

    fn new_node(&mut self, g: &mut Graph, parent: Option<u32>, individual: Option<EntityId>) -> Result<u32, ReasonerError> {
        if self.created >= self.budget {
            return Err(ReasonerError::ResourceLimit { budget: self.budget });
        }
        self.created += 1;
        let id = g.nodes.len() as u32;
        g.nodes.push(Node { label: Vec::new(), deps: Vec::new(), parent, edges: Vec::new(), individual });
        for k in 0..self.global.len() {
            self.add(g, id, self.global[k], Deps::default());
        }
        Ok(id)
    }

    fn add(&mut self, g: &mut Graph, x: u32, c: Cid, deps: Deps) {
        let node = &mut g.nodes[x as usize];
        if let Err(pos) = node.label.binary_search(&c) {
            node.label.insert(pos, c);
            node.deps.insert(pos, deps);
            self.queue.push((x, c));
        }
    }

    fn add_edge(&mut self, g: &mut Graph, x: u32, r: EntityId, y: u32, deps: Deps) {
        if g.nodes[x as usize].edges.iter().any(|(s, z, _)| *s == r && *z == y) {
            return;
        }
        g.nodes[x as usize].edges.push((r, y, deps.clone()));
        let (label, label_deps) = (g.nodes[x as usize].label.clone(), g.nodes[x as usize].deps.clone());
        for (c, c_deps) in label.into_iter().zip(label_deps) {
            if let Concept::Forall(s, d) = self.interner.concepts[c as usize] {
                if s == r {
                    self.add(g, y, d, c_deps.union(&deps));
                }
            }
        }
    }

    /// Dependencies of `c` in the label of `x`, if present.
    fn present(&self, g: &Graph, x: u32, c: Concept) -> Option<Deps> {
        let node = &g.nodes[x as usize];
        self.interner.ids.get(&c).filter(|id| node.has(**id)).map(|id| node.deps_of(*id))
    }

    /// Applies the deterministic rules until nothing changes.
    fn saturate(&mut self, g: &mut Graph) -> Step {
        while let Some((x, c)) = self.queue.pop() {
            let deps = g.nodes[x as usize].deps_of(c);
            match self.interner.concepts[c as usize] {
                Concept::Top | Concept::Or(..) | Concept::Exists(..) => {}
                Concept::Bottom => return Step::Clash(deps),
                Concept::Atom(a) => {
                    if let Some(other) = self.present(g, x, Concept::NegAtom(a)) {
                        return Step::Clash(deps.union(&other));
                    }
                    if let Some(parts) = self.unfold.get(&a) {
                        for d in parts.clone() {
                            self.add(g, x, d, deps.clone());
                        }
                    }
                }
                Concept::NegAtom(a) => {
                    if let Some(other) = self.present(g, x, Concept::Atom(a)) {
                        return Step::Clash(deps.union(&other));
                    }
                }
                Concept::And(a, b) => {
                    self.add(g, x, a, deps.clone());
                    self.add(g, x, b, deps);
                }
                Concept::Forall(r, d) => {
                    let targets: Vec<(u32, Deps)> = g.nodes[x as usize]
                        .edges
                        .iter()
                        .filter(|(s, _, _)| *s == r)
                        .map(|(_, y, e)| (*y, e.clone()))
                        .collect();
                    for (y, e) in targets {
                        self.add(g, y, d, deps.union(&e));
                    }
                }
            }
        }
        Step::Done
    }

    /// First unresolved disjunction in node order.
    fn open_disjunction(&self, g: &Graph) -> Option<(u32, Cid, Cid, Cid)> {
        for (x, node) in g.nodes.iter().enumerate() {
            for &c in &node.label {
                if let Concept::Or(a, b) = self.interner.concepts[c as usize] {
                    if !node.has(a) && !node.has(b) {
                        return Some((x as u32, c, a, b));
                    }
                }
            }
        }
        None
    }

    /// First unsatisfied existential on a node that is not blocked.
    fn open_existential(&self, g: &Graph) -> Option<(u32, Cid, EntityId, Cid)> {
        for (x, node) in g.nodes.iter().enumerate() {
            let mut pending = node.label.iter().filter_map(|&c| match self.interner.concepts[c as usize] {
                Concept::Exists(r, d) => {
                    let met = node.edges.iter().any(|(s, y, _)| *s == r && g.nodes[*y as usize].has(d));
                    (!met).then_some((c, r, d))
                }
                _ => None,
            });
            if let Some((c, r, d)) = pending.next() {
                if !g.is_blocked(x as u32) {
                    return Some((x as u32, c, r, d));
                }
            }
        }
        None
    }

    fn initial(&mut self, kb: &KnowledgeBase, seeds: &[Seed]) -> Result<Graph, ReasonerError> {
        let mut g = Graph::default();
        let mut roots: BTreeMap<EntityId, u32> = BTreeMap::new();
        let seeded = seeds.iter().filter_map(|s| match s {
            Seed::Individual(i, _) => Some(*i),
            Seed::Fresh(_) => None,
        });
        for ind in kb.individuals().chain(seeded) {
            if !roots.contains_key(&ind) {
                let id = self.new_node(&mut g, None, Some(ind))?;
                roots.insert(ind, id);
            }
        }
        let mut extra = Vec::new();
        for (class, ind) in kb.class_assertions() {
            extra.push((roots[ind], class.clone()));
        }
        for seed in seeds {
            match seed {
                Seed::Individual(i, c) => extra.push((roots[i], c.clone())),
                Seed::Fresh(c) => {
                    let id = self.new_node(&mut g, None, None)?;
                    extra.push((id, c.clone()));
                }
            }
        }
        if g.nodes.is_empty() {
            self.new_node(&mut g, None, None)?;
        }
        for (x, class) in extra {
            let c = self.interner.intern(&nnf(&class));
            self.add(&mut g, x, c, Deps::default());
        }
        for (rel, a, b) in kb.property_assertions() {
            self.add_edge(&mut g, roots[a], *rel, roots[b], Deps::default());
        }
        Ok(g)
    }

    /// Runs the tableau; `Some` holds the witness of an open branch.
    pub(crate) fn run(&mut self, kb: &KnowledgeBase, seeds: &[Seed]) -> Result<Option<Model>, ReasonerError> {
        let mut g = self.initial(kb, seeds)?;
        let mut choices: Vec<Choice> = Vec::new();
        loop {
            if let Step::Clash(deps) = self.saturate(&mut g) {
                self.queue.clear();
                // later decisions played no part in the clash
                let Some(level) = deps.max() else {
                    return Ok(None);
                };
                choices.truncate(level as usize + 1);
                let choice = choices.pop().expect("clash depends on a live decision");
                g = choice.saved;
                let or_deps = g.nodes[choice.node as usize].deps_of(choice.or);
                self.add(&mut g, choice.node, choice.alternative, or_deps.union(&deps.without(level)));
                continue;
            }
            if let Some((x, or, left, right)) = self.open_disjunction(&g) {
                let deps = g.nodes[x as usize].deps_of(or).with(choices.len() as u32);
                choices.push(Choice { saved: g.clone(), node: x, or, alternative: right });
                self.add(&mut g, x, left, deps);
                continue;
            }
            if let Some((x, c, r, d)) = self.open_existential(&g) {
                let deps = g.nodes[x as usize].deps_of(c);
                let y = self.new_node(&mut g, Some(x), None)?;
                self.add(&mut g, y, d, deps.clone());
                self.add_edge(&mut g, x, r, y, deps);
                continue;
            }
            return Ok(Some(self.extract(&g)));
        }
    }

    fn extract(&self, g: &Graph) -> Model {
        let mut index: HashMap<u32, usize> = HashMap::new();
        for x in 0..g.nodes.len() as u32 {
            if !g.is_blocked(x) {
                let next = index.len();
                index.insert(x, next);
            }
        }
        let mut m = Model { domain: index.len(), ..Model::default() };
        for (&x, &d) in &index {
            let node = &g.nodes[x as usize];
            if let Some(ind) = node.individual {
                m.ind_map.insert(ind, d);
            }
            for &c in &node.label {
                if let Concept::Atom(a) = self.interner.concepts[c as usize] {
                    m.class_ext.entry(a).or_default().insert(d);
                }
            }
            for &(r, y, _) in &node.edges {
                let target = match index.get(&y) {
                    Some(&t) => t,
                    None => index[&g.blocker(y).expect("an excluded child of a kept node is directly blocked")],
                };
                m.rel_ext.entry(r).or_default().insert((d, target));
            }
        }
        m
    }
}
