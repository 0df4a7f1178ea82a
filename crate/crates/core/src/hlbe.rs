//! Hidden literals over binary-clause chains, and the eliminations built on
//! them: hidden tautologies, hidden literals and failed literals.

use serde::Serialize;

use crate::cc::cc_valid_lits;
use crate::clause::{Clause, Fresh, Literal, Substitution};
use crate::term::{Term, TermNode};
use crate::types::match_type;

pub const DEFAULT_DEPTH: usize = 8;
const MAX_ROUNDS: usize = 64;

/// Finds `σ` with `pattern σ = target` by structural descent. Variables
/// heading an application are never bound.
pub fn approx_match(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    extend_match(pattern, target, &mut s)?;
    Some(s)
}

fn extend_match(pattern: &Term, target: &Term, s: &mut Substitution) -> Option<()> {
    descend(pattern, target, s).then_some(())?;
    (s.apply(pattern).ok()? == *target).then_some(())
}

fn descend(p: &Term, t: &Term, s: &mut Substitution) -> bool {
    match (p.node(), t.node()) {
        (TermNode::Var(v), _) => {
            if t.has_loose_bound() || !match_type(&v.ty, &t.ty(), &mut s.types) {
                return false;
            }
            match s.terms.get(&v.name) {
                Some(bound) => bound == t,
                None => {
                    s.terms.insert(v.name.clone(), t.clone());
                    true
                }
            }
        }
        (TermNode::Bound { index: i, ty: a }, TermNode::Bound { index: j, ty: b }) => {
            i == j && match_type(a, b, &mut s.types)
        }
        (
            TermNode::Const {
                name: f,
                ty_args: xs,
                ..
            },
            TermNode::Const {
                name: g,
                ty_args: ys,
                ..
            },
        ) => {
            f == g
                && xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys)
                    .all(|(x, y)| match_type(x, y, &mut s.types))
        }
        (TermNode::App(f, a), TermNode::App(g, b)) => {
            if p.head().as_var().is_some() {
                let (ph, pargs) = p.strip_args();
                let (th, targs) = t.strip_args();
                return ph == th
                    && pargs.len() == targs.len()
                    && pargs.iter().zip(&targs).all(|(x, y)| descend(x, y, s));
            }
            descend(f, g, s) && descend(a, b, s)
        }
        (TermNode::Lam(a, body), TermNode::Lam(b, tbody)) => {
            match_type(a, b, &mut s.types) && descend(body, tbody, s)
        }
        _ => false,
    }
}

/// Matches literals of equal polarity, trying both orientations.
pub fn approx_match_literal(pattern: &Literal, target: &Literal) -> Option<Substitution> {
    if pattern.is_positive() != target.is_positive() {
        return None;
    }
    let try_pair = |l: &Term, r: &Term| {
        let mut s = Substitution::new();
        extend_match(pattern.left(), l, &mut s)?;
        extend_match(pattern.right(), r, &mut s)?;
        Some(s)
    };
    try_pair(target.left(), target.right()).or_else(|| try_pair(target.right(), target.left()))
}

/// Literals `ℓ` with `clauses ⊨ ℓ → lit`, found through at most `depth`
/// binary-clause steps. Results mention only variables of `lit`.
pub fn hidden_literals(
    lit: &Literal,
    clauses: &[Clause],
    depth: usize,
    fresh: &mut Fresh,
) -> Vec<Literal> {
    let binaries: Vec<Clause> = clauses
        .iter()
        .filter(|c| c.len() == 2)
        .map(|c| c.rename_apart(fresh))
        .collect();
    let one = Clause::new(vec![lit.clone()]);
    let (vars, tvars) = (one.free_vars(), one.type_vars());
    let mut found: Vec<Literal> = Vec::new();
    let mut frontier = vec![lit.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for b in &binaries {
            for (i, j) in [(0, 1), (1, 0)] {
                let (implied, guard) = (&b.lits()[j], &b.lits()[i]);
                for target in &frontier {
                    let Some(s) = approx_match_literal(implied, target) else {
                        continue;
                    };
                    let Ok(g) = s.apply_literal(guard) else {
                        continue;
                    };
                    let h = g.complement();
                    let hc = Clause::new(vec![h.clone()]);
                    if !hc.free_vars().is_subset(&vars) || !hc.type_vars().is_subset(&tvars) {
                        continue;
                    }
                    if h.same(lit) || found.iter().any(|f| f.same(&h)) {
                        continue;
                    }
                    found.push(h.clone());
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    found
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HlbeReport {
    pub rounds: usize,
    pub tautologies_removed: usize,
    pub literals_removed: usize,
    pub subsumed_by_units: usize,
    pub derived_units: Vec<String>,
}

fn has_complementary_pair(lits: &[Literal]) -> bool {
    lits.iter()
        .enumerate()
        .any(|(i, a)| lits[i + 1..].iter().any(|b| a.complement().same(b)))
}

fn others(clauses: &[Clause], skip: usize) -> Vec<Clause> {
    clauses
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != skip)
        .map(|(_, c)| c.clone())
        .collect()
}

fn remove_hidden_tautologies(
    clauses: &mut Vec<Clause>,
    depth: usize,
    fresh: &mut Fresh,
    report: &mut HlbeReport,
) -> bool {
    let mut changed = false;
    let mut k = 0;
    while k < clauses.len() {
        let rest = others(clauses, k);
        let mut lits = clauses[k].lits().to_vec();
        for l in clauses[k].lits() {
            lits.extend(hidden_literals(l, &rest, depth, fresh));
        }
        if has_complementary_pair(&lits) || cc_valid_lits(&lits) {
            clauses.remove(k);
            report.tautologies_removed += 1;
            changed = true;
        } else {
            k += 1;
        }
    }
    changed
}

fn remove_hidden_literals(
    clauses: &mut [Clause],
    depth: usize,
    fresh: &mut Fresh,
    report: &mut HlbeReport,
) -> bool {
    let mut changed = false;
    for k in 0..clauses.len() {
        let rest = others(clauses, k);
        'again: loop {
            let lits = clauses[k].lits();
            for (j, l) in lits.iter().enumerate() {
                let hidden = hidden_literals(l, &rest, depth, fresh);
                if let Some(i) =
                    (0..lits.len()).find(|&i| i != j && hidden.iter().any(|h| h.same(&lits[i])))
                {
                    clauses[k] = Clause::new(clauses[k].without(i));
                    report.literals_removed += 1;
                    changed = true;
                    continue 'again;
                }
            }
            break;
        }
    }
    changed
}

fn instance_of(general: &Literal, lit: &Literal) -> bool {
    approx_match_literal(general, lit).is_some()
}

/// Derives the first failed-literal unit and simplifies the set with it.
fn apply_failed_literal(
    clauses: &mut Vec<Clause>,
    depth: usize,
    fresh: &mut Fresh,
    report: &mut HlbeReport,
) -> bool {
    let mut candidates: Vec<Literal> = Vec::new();
    for c in clauses.iter() {
        for l in c.lits() {
            for cand in [l.clone(), l.complement()] {
                if !candidates.iter().any(|x| x.same(&cand)) {
                    candidates.push(cand);
                }
            }
        }
    }
    for unit in candidates {
        let mut hidden = hidden_literals(&unit, clauses, depth, fresh);
        hidden.push(unit.clone());
        if !has_complementary_pair(&hidden) {
            continue;
        }
        let unit_clause = Clause::new(vec![unit.clone()]);
        let neg = unit.complement();
        let mut out = Vec::new();
        let mut subsumed = 0;
        let mut present = false;
        for c in clauses.iter() {
            if c.is_variant(&unit_clause) {
                present = true;
                out.push(c.clone());
            } else if c.lits().iter().any(|l| instance_of(&unit, l)) {
                subsumed += 1;
            } else {
                let kept: Vec<Literal> = c
                    .lits()
                    .iter()
                    .filter(|l| !instance_of(&neg, l))
                    .cloned()
                    .collect();
                report.literals_removed += c.len() - kept.len();
                out.push(Clause::new(kept));
            }
        }
        if !present {
            out.push(unit_clause);
        }
        if out != *clauses {
            report.subsumed_by_units += subsumed;
            report.derived_units.push(unit.to_string());
            *clauses = out;
            return true;
        }
    }
    false
}

/// Runs the three eliminations in rounds until nothing changes.
pub fn hlbe_simplify(clauses: &[Clause], depth: usize) -> (Vec<Clause>, HlbeReport) {
    let mut n = clauses.to_vec();
    let mut report = HlbeReport::default();
    let mut fresh = Fresh::avoiding(clauses);
    while report.rounds < MAX_ROUNDS {
        report.rounds += 1;
        let mut changed = remove_hidden_tautologies(&mut n, depth, &mut fresh, &mut report);
        changed |= remove_hidden_literals(&mut n, depth, &mut fresh, &mut report);
        changed |= apply_failed_literal(&mut n, depth, &mut fresh, &mut report);
        if !changed {
            break;
        }
    }
    (n, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::tests::{c, i, pred};
    use crate::parser::{parse_clause_with, parse_problem};
    use crate::term::Var;
    use crate::types::Type;

    #[test]
    fn match_examples() {
        let ii = Type::arrow(i(), i());
        let y = Var::new("y", ii.clone());
        let x = Term::free("x", i());
        let a = c("a", i());
        let pattern = Term::lam(&y, &Term::app(&Term::var(y.clone()), &x));
        let target = Term::lam(&y, &Term::app(&Term::var(y.clone()), &a));
        let s = approx_match(&pattern, &target).unwrap();
        assert_eq!(s.terms.get("x"), Some(&a));

        let yv = Term::free("y", ii);
        assert!(approx_match(&Term::app(&yv, &a), &a).is_none());

        let fb = Term::app(&c("f", Type::arrow(i(), i())), &c("b", i()));
        assert_eq!(approx_match(&x, &fb).unwrap().terms.get("x"), Some(&fb));
    }

    #[test]
    fn applied_variable_needs_identical_head() {
        let ii = Type::arrow(i(), i());
        let a = c("a", i());
        let y = Term::free("y", ii.clone());
        let x = Term::free("x", i());
        let s = approx_match(&Term::app(&y, &x), &Term::app(&y, &a)).unwrap();
        assert_eq!(s.terms.get("x"), Some(&a));
        let f = c("f", ii);
        assert!(approx_match(&Term::app(&y, &x), &Term::app(&f, &a)).is_none());
    }

    #[test]
    fn repeated_variable_must_agree() {
        let p = pred("p", 2);
        let x = Term::free("x", i());
        let (a, b) = (c("a", i()), c("b", i()));
        let pattern = Term::apps(&p, [&x, &x]);
        assert!(approx_match(&pattern, &Term::apps(&p, [&a, &a])).is_some());
        assert!(approx_match(&pattern, &Term::apps(&p, [&a, &b])).is_none());
    }

    const CHAIN: &str = "(sym a o) (sym b o) (sym c o) \
        (clause (vars) (neg a) (pos b)) (clause (vars) (neg b) (pos c))";

    #[test]
    fn hidden_literal_chain() {
        let n = parse_problem(CHAIN).unwrap();
        let l = parse_clause_with(&n.signature, "(clause (vars) (pos c))")
            .unwrap()
            .lits()[0]
            .clone();
        let hl = hidden_literals(&l, &n.clauses, DEFAULT_DEPTH, &mut Fresh::new());
        let shown: Vec<String> = hl.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["b", "a"]);
        assert_eq!(
            hidden_literals(&l, &n.clauses, 1, &mut Fresh::new()).len(),
            1
        );
        assert!(hidden_literals(&l, &n.clauses[..0], DEFAULT_DEPTH, &mut Fresh::new()).is_empty());
    }

    #[test]
    fn hidden_literal_with_instantiation() {
        let n = parse_problem(
            "(type i 0) (sym a i) (sym f (-> i i)) (sym p (-> i o)) (sym q (-> i o)) \
             (clause (vars (X i)) (neg (app p X)) (pos (app q (app f X))))",
        )
        .unwrap();
        let l = parse_clause_with(&n.signature, "(clause (vars) (pos (app q (app f a))))")
            .unwrap()
            .lits()[0]
            .clone();
        let hl = hidden_literals(&l, &n.clauses, DEFAULT_DEPTH, &mut Fresh::new());
        let shown: Vec<String> = hl.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["p a"]);
    }

    #[test]
    fn unbound_variables_are_not_hidden() {
        // ¬p x ∨ q: the guard keeps x free, so p x is not implied for all x
        let n = parse_problem(
            "(type i 0) (sym p (-> i o)) (sym q o) (clause (vars (X i)) (neg (app p X)) (pos q))",
        )
        .unwrap();
        let l = parse_clause_with(&n.signature, "(clause (vars) (pos q))")
            .unwrap()
            .lits()[0]
            .clone();
        assert!(hidden_literals(&l, &n.clauses, DEFAULT_DEPTH, &mut Fresh::new()).is_empty());
    }

    #[test]
    fn hidden_literal_elimination() {
        let text = format!("{CHAIN} (clause (vars) (pos a) (pos b) (pos c))");
        let n = parse_problem(&text).unwrap();
        let (out, report) = hlbe_simplify(&n.clauses, DEFAULT_DEPTH);
        assert!(out.iter().any(|c| c.to_string() == "c"), "{out:?}");
        assert!(report.literals_removed >= 2);
    }

    #[test]
    fn hidden_tautology() {
        let text = format!("{CHAIN} (clause (vars) (neg a) (pos c))");
        let n = parse_problem(&text).unwrap();
        let mut fresh = Fresh::new();
        let mut report = HlbeReport::default();
        let mut set = n.clauses.clone();
        assert!(remove_hidden_tautologies(
            &mut set,
            DEFAULT_DEPTH,
            &mut fresh,
            &mut report
        ));
        assert_eq!(set.len(), 2);
        assert_eq!(report.tautologies_removed, 1);
    }

    #[test]
    fn units_are_untouched() {
        let n =
            parse_problem("(sym a o) (sym b o) (clause (vars) (pos a)) (clause (vars) (pos b))")
                .unwrap();
        let (out, report) = hlbe_simplify(&n.clauses, DEFAULT_DEPTH);
        assert_eq!(out, n.clauses);
        assert_eq!(report.rounds, 1);
    }

    #[test]
    fn failed_literal_yields_unit() {
        // a → b and ¬a → b, so b holds
        let n = parse_problem(
            "(sym a o) (sym b o) (sym c o) (clause (vars) (neg a) (pos b)) (clause (vars) (pos a) (pos b)) \
             (clause (vars) (neg b) (pos c) (pos a))",
        )
        .unwrap();
        let mut out = n.clauses.clone();
        let mut report = HlbeReport::default();
        assert!(apply_failed_literal(
            &mut out,
            DEFAULT_DEPTH,
            &mut Fresh::new(),
            &mut report
        ));
        assert_eq!(report.derived_units, vec!["b".to_string()]);
        let shown: Vec<String> = out.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["c ∨ a", "b"]);
        assert_eq!(report.subsumed_by_units, 2);
        assert!(crate::modelcheck::ground_prop_sat(&out).unwrap());
    }
}
