//! Congruence closure over curried applications, with λ-abstractions as
//! opaque constants and free variables frozen.

use std::collections::HashMap;

use crate::clause::{Clause, Literal};
use crate::sat::{self, SatProblem};
use crate::signature::logic;
use crate::term::{Term, TermNode};

#[derive(Clone, PartialEq, Eq, Hash)]
enum NodeKey {
    /// Constant, frozen variable or opaque λ-abstraction.
    Leaf(Term),
    App(usize, usize),
}

/// Single-use congruence closure context.
#[derive(Default)]
pub struct CongruenceClosure {
    nodes: Vec<NodeKey>,
    index: HashMap<NodeKey, usize>,
    parent: Vec<usize>,
    diseqs: Vec<(usize, usize)>,
}

impl CongruenceClosure {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, key: NodeKey) -> usize {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(key.clone());
        self.parent.push(id);
        self.index.insert(key, id);
        id
    }

    pub fn add_term(&mut self, t: &Term) -> usize {
        match t.node() {
            TermNode::App(f, a) => {
                let f = self.add_term(f);
                let a = self.add_term(a);
                self.intern(NodeKey::App(f, a))
            }
            _ => self.intern(NodeKey::Leaf(t.clone())),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn assert_eq(&mut self, s: &Term, t: &Term) {
        let (a, b) = (self.add_term(s), self.add_term(t));
        self.union(a, b);
    }

    pub fn assert_neq(&mut self, s: &Term, t: &Term) {
        let (a, b) = (self.add_term(s), self.add_term(t));
        self.diseqs.push((a, b));
    }

    /// Merges congruent applications until nothing changes.
    fn close(&mut self) {
        loop {
            let mut table: HashMap<(usize, usize), usize> = HashMap::new();
            let mut merged = false;
            for id in 0..self.nodes.len() {
                if let NodeKey::App(f, a) = self.nodes[id] {
                    let sig = (self.find(f), self.find(a));
                    match table.get(&sig) {
                        Some(&other) => merged |= self.union(id, other),
                        None => {
                            table.insert(sig, id);
                        }
                    }
                }
            }
            if !merged {
                break;
            }
        }
    }

    /// True iff some asserted disequation is violated by the closure.
    pub fn is_inconsistent(&mut self) -> bool {
        self.close();
        let diseqs = self.diseqs.clone();
        diseqs
            .into_iter()
            .any(|(a, b)| self.find(a) == self.find(b))
    }

    pub fn equal(&mut self, s: &Term, t: &Term) -> bool {
        let (a, b) = (self.add_term(s), self.add_term(t));
        self.close();
        self.find(a) == self.find(b)
    }
}

/// Sound, incomplete tautology check: refutes the complement of every literal
/// together with `⊤ ≉ ⊥`.
pub fn cc_valid(clause: &Clause) -> bool {
    cc_valid_lits(clause.lits())
}

pub fn cc_valid_lits(lits: &[Literal]) -> bool {
    let mut cc = CongruenceClosure::new();
    cc.assert_neq(&logic::top(), &logic::bot());
    for l in lits {
        if l.is_positive() {
            cc.assert_neq(l.left(), l.right());
        } else {
            cc.assert_eq(l.left(), l.right());
        }
    }
    cc.is_inconsistent()
}

/// Sound unsatisfiability check for ground clauses via propositional
/// abstraction: each distinct atom (a formula, or an unordered pair of
/// non-Boolean sides) becomes one variable.
pub fn cc_ground_unsat(clauses: &[Clause]) -> bool {
    let mut atoms: HashMap<(Term, Term), i32> = HashMap::new();
    let mut sat_clauses = Vec::new();
    'clauses: for c in clauses {
        let mut out = Vec::new();
        for l in c.lits() {
            if l.left() == l.right() {
                if l.is_positive() {
                    continue 'clauses;
                }
                continue;
            }
            let key = match l.formula_side() {
                Some(t) => (t.clone(), logic::top()),
                None if l.left() <= l.right() => (l.left().clone(), l.right().clone()),
                None => (l.right().clone(), l.left().clone()),
            };
            let next = atoms.len() as i32 + 1;
            let var = *atoms.entry(key).or_insert(next);
            out.push(if l.is_positive() { var } else { -var });
        }
        sat_clauses.push(out);
    }
    let problem = SatProblem::new(atoms.len(), sat_clauses).expect("well-formed abstraction");
    !sat::solve(&problem).is_sat()
}
