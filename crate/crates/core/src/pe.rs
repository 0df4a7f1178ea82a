//! Predicate elimination: singular (SPE), defined (DPE) and the portfolio
//! combination of both (PPE).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cc::{cc_ground_unsat, cc_valid};
use crate::clause::{
    is_polymorphism_safe_set, is_singular, is_singular_for_clause, occurring_predicates, Clause,
    Fresh, Literal, PredLit, Substitution,
};
use crate::signature::{logic, Signature};
use crate::term::{Term, Var};
use crate::types::{unify_types, Name, Type, TypeSubst};

/// Flat resolvent on `first[i]` and `second[j]`, which must be p-literals of
/// the same symbol and opposite polarity. Disequations take their left sides
/// from `first`; the remaining literals of `first` precede those of `second`.
/// Premises must already be variable-disjoint.
pub fn ordered_resolvent(first: &Clause, i: usize, second: &Clause, j: usize) -> Option<Clause> {
    let l1 = first.lits()[i].pred_view()?;
    let l2 = second.lits()[j].pred_view()?;
    if l1.symbol != l2.symbol || l1.positive == l2.positive || l1.args.len() != l2.args.len() {
        return None;
    }
    let sigma = unify_types(&l1.ty_args, &l2.ty_args).ok()??;
    let mut lits = Vec::with_capacity(l1.args.len() + first.len() + second.len() - 2);
    for (s, t) in l1.args.iter().zip(&l2.args) {
        lits.push(Literal::new(false, s.apply_types(&sigma), t.apply_types(&sigma)).ok()?);
    }
    lits.extend(first.without(i).iter().map(|l| l.apply_types(&sigma)));
    lits.extend(second.without(j).iter().map(|l| l.apply_types(&sigma)));
    Some(Clause::new(lits))
}

/// Flat resolvent of `c` (carrying the positive literal `lc`) and `d`
/// (carrying the negative literal `ld`); the disequations read `tⱼ ≉ sⱼ`
/// with `d`'s arguments on the left.
pub fn flat_resolvent(c: &Clause, lc: usize, d: &Clause, ld: usize) -> Option<Clause> {
    if !c.lits().get(lc)?.is_positive() || d.lits().get(ld)?.is_positive() {
        return None;
    }
    ordered_resolvent(d, ld, c, lc)
}

fn first_pred_lit(c: &Clause, p: &str) -> Option<(usize, PredLit)> {
    c.pred_lits_of(p).next()
}

fn push_unique(out: &mut Vec<Clause>, c: Clause) {
    if !out.iter().any(|o| o.is_variant(&c)) {
        out.push(c);
    }
}

/// `M ⋊ₚ N`: repeatedly replaces a clause of `N` carrying a p-literal by all
/// its flat resolvents against `M`, until no p-literal is left. `steps`
/// counts rule applications.
pub fn resolved_set(
    m: &[Clause],
    n: &[Clause],
    p: &str,
    fresh: &mut Fresh,
    steps: &mut u64,
) -> Vec<Clause> {
    assert!(
        is_singular(p, m),
        "resolved set requires `{p}` singular for the left operand"
    );
    let mut out = Vec::new();
    let mut stack: Vec<Clause> = n.iter().rev().cloned().collect();
    while let Some(x) = stack.pop() {
        let Some((i, lit)) = first_pred_lit(&x, p) else {
            push_unique(&mut out, x);
            continue;
        };
        *steps += 1;
        let mut produced: Vec<Clause> = Vec::new();
        for y in m {
            let Some((j, other)) = first_pred_lit(y, p) else {
                continue;
            };
            if other.positive == lit.positive {
                continue;
            }
            let y = y.rename_apart(fresh);
            if let Some(r) = ordered_resolvent(&x, i, &y, j) {
                push_unique(&mut produced, r);
            }
        }
        stack.extend(produced.into_iter().rev());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GrowthMetrics {
    pub literals: u64,
    pub var_square_sum: u64,
    pub clauses: u64,
}

impl GrowthMetrics {
    pub fn of(clauses: &[Clause]) -> Self {
        GrowthMetrics {
            literals: clauses.iter().map(|c| c.len() as u64).sum(),
            var_square_sum: clauses
                .iter()
                .map(|c| (c.free_vars().len() as u64).pow(2))
                .sum(),
            clauses: clauses.len() as u64,
        }
    }
}

/// Tolerance meaning "never refuse".
pub const KTOL_INFINITE: u64 = u64::MAX;

pub fn growth_check(before: GrowthMetrics, after: GrowthMetrics, k_tol: u64) -> bool {
    after.literals < before.literals.saturating_add(k_tol)
        || after.var_square_sum < before.var_square_sum
        || after.clauses < before.clauses.saturating_add(k_tol)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeError {
    NotApplicable,
}

/// Splits `n` into (clauses without p-literals, with positive, with negative).
fn partition(n: &[Clause], p: &str) -> (Vec<Clause>, Vec<Clause>, Vec<Clause>) {
    let (mut rest, mut pos, mut neg) = (Vec::new(), Vec::new(), Vec::new());
    for c in n {
        match first_pred_lit(c, p) {
            None => rest.push(c.clone()),
            Some((_, l)) if l.positive => pos.push(c.clone()),
            Some(_) => neg.push(c.clone()),
        }
    }
    (rest, pos, neg)
}

/// Singular predicate elimination of `p`.
pub fn spe(
    n: &[Clause],
    p: &str,
    fresh: &mut Fresh,
    steps: &mut u64,
) -> Result<Vec<Clause>, PeError> {
    if !is_singular(p, n) || !is_polymorphism_safe_set(n, p) {
        return Err(PeError::NotApplicable);
    }
    let (mut out, pos, neg) = partition(n, p);
    out.extend(resolved_set(&pos, &neg, p, fresh, steps));
    Ok(out)
}

/// A definition set `G` for `p`, with every clause renamed to the shared
/// parameters.
#[derive(Debug, Clone)]
pub struct DefinitionSet {
    pub symbol: Name,
    /// Indices of `G` in the clause set it was found in.
    pub indices: Vec<usize>,
    /// `G`'s clauses over the canonical parameters.
    pub clauses: Vec<Clause>,
    pub type_params: Vec<Name>,
    pub params: Vec<Var>,
}

/// `p ⟨ᾱ⟩ x̄ ↔ φ` for a definition set.
#[derive(Debug, Clone)]
pub struct AssociatedDefinition {
    pub symbol: Name,
    pub type_params: Vec<Name>,
    pub params: Vec<Var>,
    pub body: Term,
}

impl AssociatedDefinition {
    /// `λx̄. φ{ᾱ ↦ τ̄}`.
    pub fn instantiate(&self, ty_args: &[Type]) -> Term {
        let subst: TypeSubst = self
            .type_params
            .iter()
            .cloned()
            .zip(ty_args.iter().cloned())
            .collect();
        let params: Vec<Var> = self
            .params
            .iter()
            .map(|v| Var::new(v.name.clone(), v.ty.apply(&subst)))
            .collect();
        Term::lams(&params, &self.body.apply_types(&subst))
    }
}

/// Shape `p⟨ᾱ⟩ x̄` with distinct type and term variables, returning them.
fn definition_shape(lit: &PredLit) -> Option<(Vec<Name>, Vec<Var>)> {
    let mut tvars = Vec::new();
    for t in &lit.ty_args {
        match t {
            Type::Var(a) if !tvars.contains(a) => tvars.push(a.clone()),
            _ => return None,
        }
    }
    let mut vars: Vec<Var> = Vec::new();
    for a in &lit.args {
        match a.as_var() {
            Some(v) if !vars.iter().any(|w| w.name == v.name) => vars.push(v.clone()),
            _ => return None,
        }
    }
    Some((tvars, vars))
}

/// Conditions 1–4 for a single clause.
fn candidate_shape(c: &Clause, p: &str) -> Option<(usize, PredLit, Vec<Name>, Vec<Var>)> {
    if !is_singular_for_clause(p, c) {
        return None;
    }
    let (i, lit) = first_pred_lit(c, p)?;
    let (tvars, vars) = definition_shape(&lit)?;
    let rest = Clause::new(c.without(i));
    if !rest.type_vars().iter().all(|a| tvars.contains(a)) {
        return None;
    }
    if !rest
        .free_vars()
        .iter()
        .all(|v| vars.iter().any(|w| w.name == v.name))
    {
        return None;
    }
    Some((i, lit, tvars, vars))
}

/// Searches `n` for a definition set of `p`: all clauses meeting the
/// syntactic conditions form the candidate, which must then pass the
/// tautology and environment checks.
pub fn find_definition_set(n: &[Clause], p: &str, fresh: &mut Fresh) -> Option<DefinitionSet> {
    let mut indices = Vec::new();
    let mut shapes = Vec::new();
    for (k, c) in n.iter().enumerate() {
        if let Some(shape) = candidate_shape(c, p) {
            indices.push(k);
            shapes.push(shape);
        }
    }
    let (_, _, tv0, v0) = shapes.first()?;
    let type_params: Vec<Name> = tv0
        .iter()
        .map(|_| match fresh.type_var() {
            Type::Var(a) => a,
            Type::Con(..) => unreachable!(),
        })
        .collect();
    let to_canon = |tvars: &[Name]| -> TypeSubst {
        tvars
            .iter()
            .cloned()
            .zip(type_params.iter().map(|a| Type::Var(a.clone())))
            .collect()
    };
    let subst0 = to_canon(tv0);
    let params: Vec<Var> = v0
        .iter()
        .map(|v| fresh.term_var(v.ty.apply(&subst0)))
        .collect();

    let mut canon = Vec::new();
    for (k, (_, _, tvars, vars)) in indices.iter().zip(&shapes) {
        let mut sigma = Substitution::new();
        sigma.types = to_canon(tvars);
        for (v, x) in vars.iter().zip(&params) {
            sigma.terms.insert(v.name.clone(), Term::var(x.clone()));
        }
        canon.push(sigma.apply_clause(&n[*k]).ok()?);
    }

    // condition 5: G⁺ ⋊ G⁻ consists of tautologies
    let (_, pos, neg) = partition(&canon, p);
    let mut steps = 0;
    if !resolved_set(&pos, &neg, p, fresh, &mut steps)
        .iter()
        .all(cc_valid)
    {
        return None;
    }

    // condition 6: the environment over fresh type constructors and constants is unsatisfiable
    let tsubst: TypeSubst = type_params
        .iter()
        .map(|a| (a.clone(), Type::base(fresh.symbol_name("ι"))))
        .collect();
    let mut env_subst = Substitution::new();
    env_subst.types = tsubst.clone();
    for x in &params {
        env_subst.terms.insert(
            x.name.clone(),
            Term::constant(fresh.symbol_name("c"), vec![], x.ty.apply(&tsubst)),
        );
    }
    let mut env = Vec::new();
    for c in &canon {
        let (i, _) = first_pred_lit(c, p)?;
        env.push(env_subst.apply_clause(&Clause::new(c.without(i))).ok()?);
    }
    if !cc_ground_unsat(&env) {
        return None;
    }

    Some(DefinitionSet {
        symbol: p.into(),
        indices,
        clauses: canon,
        type_params,
        params,
    })
}

/// The disjunction of `¬[C′]` over the positive clauses of `g`, in order.
pub fn associated_definition(g: &DefinitionSet) -> AssociatedDefinition {
    let mut disjuncts = Vec::new();
    for c in &g.clauses {
        let (i, lit) = first_pred_lit(c, &g.symbol).expect("definition clause has a p-literal");
        if lit.positive {
            disjuncts.push(logic::not(
                &Clause::new(c.without(i)).to_abbreviated_formula(),
            ));
        }
    }
    AssociatedDefinition {
        symbol: g.symbol.clone(),
        type_params: g.type_params.clone(),
        params: g.params.clone(),
        body: logic::disj(&disjuncts),
    }
}

/// Defined predicate elimination of `p` using `g ⊆ n`.
pub fn dpe(
    n: &[Clause],
    p: &str,
    g: &DefinitionSet,
    fresh: &mut Fresh,
    steps: &mut u64,
) -> Vec<Clause> {
    let def = associated_definition(g);
    let in_g: BTreeSet<usize> = g.indices.iter().copied().collect();
    let mut out = Vec::new();
    let mut rest = Vec::new();
    for (k, c) in n.iter().enumerate() {
        if in_g.contains(&k) {
            continue;
        }
        if c.contains_symbol(p) {
            rest.push(c.clone());
        } else {
            out.push(c.clone());
        }
    }
    let mut cache: BTreeMap<Vec<Type>, Term> = BTreeMap::new();
    for c in resolved_set(&g.clauses, &rest, p, fresh, steps) {
        let replaced = c.map_terms(|t| {
            t.replace_symbol_with(p, &mut |args| {
                Some(
                    cache
                        .entry(args.to_vec())
                        .or_insert_with(|| def.instantiate(args))
                        .clone(),
                )
            })
        });
        out.push(replaced);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PeBranch {
    Dpe,
    Spe,
}

/// Which eliminations `ppe` may perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeMode {
    SpeOnly,
    DpeOnly,
    #[default]
    Portfolio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeConfig {
    pub k_tol: u64,
    pub max_passes: usize,
    pub mode: PeMode,
}

impl Default for PeConfig {
    fn default() -> Self {
        PeConfig {
            k_tol: 10,
            max_passes: 1000,
            mode: PeMode::Portfolio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PpeOutcome {
    Eliminated {
        branch: PeBranch,
        clauses: Vec<Clause>,
    },
    /// SPE was possible but `growth_check` refused it.
    Refused,
    NotApplicable,
}

/// DPE when a definition set exists, otherwise SPE guarded by the growth
/// check; `cfg.mode` can disable either branch.
pub fn ppe(
    n: &[Clause],
    p: &str,
    cfg: &PeConfig,
    fresh: &mut Fresh,
    steps: &mut u64,
) -> PpeOutcome {
    if cfg.mode != PeMode::SpeOnly {
        if let Some(g) = find_definition_set(n, p, fresh) {
            return PpeOutcome::Eliminated {
                branch: PeBranch::Dpe,
                clauses: dpe(n, p, &g, fresh, steps),
            };
        }
    }
    if cfg.mode == PeMode::DpeOnly {
        return PpeOutcome::NotApplicable;
    }
    match spe(n, p, fresh, steps) {
        Ok(out) if growth_check(GrowthMetrics::of(n), GrowthMetrics::of(&out), cfg.k_tol) => {
            PpeOutcome::Eliminated {
                branch: PeBranch::Spe,
                clauses: out,
            }
        }
        Ok(_) => PpeOutcome::Refused,
        Err(PeError::NotApplicable) => PpeOutcome::NotApplicable,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub symbol: String,
    pub branch: PeBranch,
    pub clauses_before: usize,
    pub clauses_after: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PeReport {
    pub eliminated: Vec<Elimination>,
    /// Symbols whose SPE was refused by the growth check in the final pass.
    pub refused: Vec<String>,
    pub passes: usize,
    pub resolution_steps: u64,
}

/// Eliminates predicate symbols in declaration order until none is
/// eliminable or `max_passes` eliminations have happened.
pub fn run_pe(sig: &Signature, n: &[Clause], cfg: &PeConfig) -> (Vec<Clause>, PeReport) {
    let mut current = n.to_vec();
    let mut report = PeReport::default();
    let mut fresh = Fresh::avoiding(n);
    while report.passes < cfg.max_passes {
        report.passes += 1;
        report.refused.clear();
        let mut progressed = false;
        for p in occurring_predicates(sig, &current) {
            match ppe(&current, &p, cfg, &mut fresh, &mut report.resolution_steps) {
                PpeOutcome::Eliminated { branch, clauses } => {
                    report.eliminated.push(Elimination {
                        symbol: p.to_string(),
                        branch,
                        clauses_before: current.len(),
                        clauses_after: clauses.len(),
                    });
                    current = clauses;
                    progressed = true;
                    break;
                }
                PpeOutcome::Refused => report.refused.push(p.to_string()),
                PpeOutcome::NotApplicable => {}
            }
        }
        if !progressed {
            break;
        }
    }
    (current, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_clause_with, parse_problem};
    use crate::ClauseSet;

    fn problem(text: &str) -> ClauseSet {
        parse_problem(text).unwrap()
    }

    fn clause(set: &ClauseSet, text: &str) -> Clause {
        parse_clause_with(&set.signature, text).unwrap()
    }

    fn same_up_to_variants(a: &[Clause], b: &[Clause]) -> bool {
        a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| x.is_variant(y)))
    }

    const DECLS: &str =
        "(type i 0) (sym a i) (sym b i) (sym f (-> i i)) (sym p (-> i o)) (sym q (-> i o)) \
                         (sym r (-> i o)) (sym p2 (-> i i o))";

    #[test]
    fn flat_resolvent_examples() {
        let set = problem(DECLS);
        let c = clause(
            &set,
            "(clause (vars (Z i)) (pos (app p2 Z Z)) (pos (app q Z)))",
        );
        let d = clause(
            &set,
            "(clause (vars (Y (-> i i))) (neg (app p2 (app f (app Y a)) (app Y (app f a)))))",
        );
        let r = flat_resolvent(&c, 0, &d, 0).unwrap();
        let expected = clause(
            &set,
            "(clause (vars (Z i) (Y (-> i i))) (neq (app f (app Y a)) Z) (neq (app Y (app f a)) Z) (pos (app q Z)))",
        );
        assert!(r.is_variant(&expected), "{r}");
        assert_eq!(r.to_string(), "f (Y a) ≉ Z ∨ Y (f a) ≉ Z ∨ q Z");

        let c = clause(
            &set,
            "(clause (vars (Z i)) (pos (app p (app f Z))) (pos (app q Z)))",
        );
        let d = clause(&set, "(clause (vars) (neg (app p (app f a))))");
        assert_eq!(
            flat_resolvent(&c, 0, &d, 0).unwrap().to_string(),
            "f a ≉ f Z ∨ q Z"
        );
    }

    #[test]
    fn flat_resolvent_type_clash() {
        let set = problem(
            "(type int 0) (type bool 0) (sym p (pi (A) (-> A o))) (sym a int) (sym b bool)",
        );
        let c = clause(&set, "(clause (vars) (pos (app (inst p int) a)))");
        let d = clause(&set, "(clause (vars) (neg (app (inst p bool) b)))");
        assert!(flat_resolvent(&c, 0, &d, 0).is_none());
    }

    #[test]
    fn resolved_set_examples() {
        let set = problem(&format!("{DECLS} (sym c o) (sym d o) (sym e o)"));
        let m = vec![clause(
            &set,
            "(clause (vars (X i)) (neg (app p X)) (pos e))",
        )];
        let n = vec![
            clause(&set, "(clause (vars) (pos (app p a)) (pos c))"),
            clause(&set, "(clause (vars) (pos (app p b)) (pos d))"),
        ];
        let mut fresh = Fresh::avoiding(m.iter().chain(&n));
        let mut steps = 0;
        let out = resolved_set(&m, &n, "p", &mut fresh, &mut steps);
        let expected = vec![
            clause(&set, "(clause (vars (X i)) (neq a X) (pos c) (pos e))"),
            clause(&set, "(clause (vars (X i)) (neq b X) (pos d) (pos e))"),
        ];
        assert!(same_up_to_variants(&out, &expected), "{out:?}");
        assert_eq!(steps, 2);
        // the two resolvents use distinct variables
        assert!(out[0].free_vars().is_disjoint(&out[1].free_vars()));

        let m = vec![clause(&set, "(clause (vars) (pos (app p a)))")];
        assert!(resolved_set(&m, &[], "p", &mut fresh, &mut steps).is_empty());
    }

    #[test]
    fn spe_examples() {
        let set = problem(DECLS);
        let n = vec![
            clause(
                &set,
                "(clause (vars (Z i)) (pos (app p (app f Z))) (pos (app q Z)))",
            ),
            clause(&set, "(clause (vars) (neg (app p (app f a))))"),
        ];
        let mut fresh = Fresh::avoiding(&n);
        let out = spe(&n, "p", &mut fresh, &mut 0).unwrap();
        let expected = clause(
            &set,
            "(clause (vars (Z i)) (neq (app f a) (app f Z)) (pos (app q Z)))",
        );
        assert!(same_up_to_variants(&out, &[expected]), "{out:?}");

        let n = vec![
            clause(&set, "(clause (vars (Y (-> i o))) (neg (app Y a)))"),
            clause(&set, "(clause (vars) (pos (app p a)))"),
        ];
        let out = spe(&n, "p", &mut fresh, &mut 0).unwrap();
        assert_eq!(out, vec![n[0].clone()]);

        let n = vec![clause(&set, "(clause (vars) (pos (app p a)))")];
        assert!(spe(&n, "p", &mut fresh, &mut 0).unwrap().is_empty());

        let n = vec![clause(
            &set,
            "(clause (vars (X i) (Y i)) (pos (app p X)) (pos (app p Y)) (pos (app q a)))",
        )];
        assert_eq!(
            spe(&n, "p", &mut fresh, &mut 0),
            Err(PeError::NotApplicable)
        );
    }

    #[test]
    fn growth_check_examples() {
        let m = |l, u, c| GrowthMetrics {
            literals: l,
            var_square_sum: u,
            clauses: c,
        };
        assert!(growth_check(m(3, 1, 2), m(2, 1, 1), 0));
        assert!(!growth_check(m(2, 0, 2), m(2, 0, 2), 0));
        assert!(growth_check(m(2, 0, 2), m(2, 0, 2), 1));
        assert!(growth_check(m(2, 0, 2), m(1000, 90, 500), KTOL_INFINITE));
    }

    #[test]
    fn growth_metrics_count_distinct_variables() {
        let set = problem(DECLS);
        let n = vec![
            clause(
                &set,
                "(clause (vars (Z i)) (pos (app p (app f Z))) (pos (app q Z)))",
            ),
            clause(&set, "(clause (vars) (neg (app p (app f a))))"),
        ];
        assert_eq!(
            GrowthMetrics::of(&n),
            GrowthMetrics {
                literals: 3,
                var_square_sum: 1,
                clauses: 2
            }
        );
    }

    fn qr_definition(set: &ClauseSet) -> Vec<Clause> {
        vec![
            clause(
                set,
                "(clause (vars (X i) (Y i)) (neg (app p2 X Y)) (pos (app q X)) (pos (app r Y)))",
            ),
            clause(
                set,
                "(clause (vars (U i) (V i)) (pos (app p2 U V)) (neg (app q U)))",
            ),
            clause(
                set,
                "(clause (vars (X i) (Y i)) (pos (app p2 X Y)) (neg (app r Y)))",
            ),
        ]
    }

    #[test]
    fn definition_set_and_associated_definition() {
        let set = problem(&format!("{DECLS} (sym h (-> (-> i i o) i)) (sym s o)"));
        let g = qr_definition(&set);
        let mut fresh = Fresh::avoiding(&g);
        let def = find_definition_set(&g, "p2", &mut fresh).expect("definition set");
        assert_eq!(def.indices, vec![0, 1, 2]);
        let assoc = associated_definition(&def);
        let (x, y) = (&assoc.params[0].name, &assoc.params[1].name);
        assert_eq!(
            assoc.body.to_string(),
            format!("(¬ (¬ (q {x}))) ∨ (¬ (¬ (r {y})))")
        );
    }

    #[test]
    fn definition_set_negative_cases() {
        let set = problem(DECLS);
        let n = vec![clause(&set, "(clause (vars) (pos (app p a)))")];
        assert!(find_definition_set(&n, "p", &mut Fresh::new()).is_none());
        // underconstrained: environment {q c} is satisfiable
        let n = vec![clause(
            &set,
            "(clause (vars (X i)) (neg (app p X)) (pos (app q X)))",
        )];
        assert!(find_definition_set(&n, "p", &mut Fresh::new()).is_none());
        // overconstrained: resolvent q X ∨ r X' is no tautology
        let n = vec![
            clause(
                &set,
                "(clause (vars (X i)) (pos (app p X)) (pos (app q X)))",
            ),
            clause(
                &set,
                "(clause (vars (X i)) (neg (app p X)) (pos (app r X)))",
            ),
        ];
        assert!(find_definition_set(&n, "p", &mut Fresh::new()).is_none());
    }

    #[test]
    fn equivalence_definition() {
        let set = problem(DECLS);
        let g = vec![
            clause(
                &set,
                "(clause (vars (X i)) (pos (app p X)) (pos (app q X)))",
            ),
            clause(
                &set,
                "(clause (vars (X i)) (neg (app p X)) (neg (app q X)))",
            ),
        ];
        let def = find_definition_set(&g, "p", &mut Fresh::avoiding(&g)).unwrap();
        let assoc = associated_definition(&def);
        assert_eq!(
            assoc.body.to_string(),
            format!("¬ (q {})", assoc.params[0].name)
        );

        let g = vec![clause(&set, "(clause (vars (X i)) (pos (app p X)))")];
        let def = find_definition_set(&g, "p", &mut Fresh::avoiding(&g)).unwrap();
        assert_eq!(associated_definition(&def).body.to_string(), "¬ ⊥");
    }

    #[test]
    fn dpe_examples() {
        let set = problem(&format!("{DECLS} (sym h (-> (-> i i o) i)) (sym s o)"));
        let g = qr_definition(&set);
        let mut n = g.clone();
        n.push(clause(&set, "(clause (vars) (pos (app p2 a b)))"));
        n.push(clause(&set, "(clause (vars) (pos s))"));
        let mut fresh = Fresh::avoiding(&n);
        let def = find_definition_set(&n, "p2", &mut fresh).unwrap();
        assert_eq!(def.indices, vec![0, 1, 2]);
        let out = dpe(&n, "p2", &def, &mut fresh, &mut 0);
        let expected = vec![
            clause(&set, "(clause (vars) (pos s))"),
            clause(
                &set,
                "(clause (vars (X i) (Y i)) (neq a X) (neq b Y) (pos (app q X)) (pos (app r Y)))",
            ),
        ];
        assert!(same_up_to_variants(&out, &expected), "{out:?}");

        let mut n = g.clone();
        n.push(clause(&set, "(clause (vars) (pos (app r (app h p2))))"));
        let def = find_definition_set(&n, "p2", &mut fresh).unwrap();
        let out = dpe(&n, "p2", &def, &mut fresh, &mut 0);
        assert_eq!(out.len(), 1);
        assert!(!out[0].contains_symbol("p2"));
        assert_eq!(
            out[0].to_string(),
            "r (h (λx0 x1. (¬ (¬ (q x0))) ∨ (¬ (¬ (r x1)))))"
        );

        let def = find_definition_set(&g, "p2", &mut fresh).unwrap();
        assert!(dpe(&g, "p2", &def, &mut fresh, &mut 0).is_empty());
    }

    #[test]
    fn ppe_branches() {
        let set = problem(&format!("{DECLS} (sym t o)"));
        let cfg = PeConfig::default();
        let mut fresh = Fresh::new();
        let mut n = qr_definition(&set);
        n.push(clause(&set, "(clause (vars) (pos (app p2 a b)))"));
        assert!(matches!(
            ppe(&n, "p2", &cfg, &mut fresh, &mut 0),
            PpeOutcome::Eliminated {
                branch: PeBranch::Dpe,
                ..
            }
        ));

        let n = vec![
            clause(
                &set,
                "(clause (vars (Z i)) (pos (app p (app f Z))) (pos (app q Z)))",
            ),
            clause(&set, "(clause (vars) (neg (app p (app f a))))"),
        ];
        assert!(matches!(
            ppe(&n, "p", &cfg, &mut fresh, &mut 0),
            PpeOutcome::Eliminated {
                branch: PeBranch::Spe,
                ..
            }
        ));

        let n = vec![clause(
            &set,
            "(clause (vars (X i) (Y i)) (pos (app p X)) (pos (app p Y)) (pos t))",
        )];
        assert_eq!(
            ppe(&n, "p", &cfg, &mut fresh, &mut 0),
            PpeOutcome::NotApplicable
        );
    }

    #[test]
    fn run_pe_on_quasipure_example() {
        let set = problem(
            "(type i 0) (sym a i) (sym f (-> i i)) (sym p (-> i o)) (sym q (-> i i o)) \
             (clause (vars (X i)) (pos (app p X)) (pos (app q a X))) \
             (clause (vars (X i)) (pos (app p (app f X)))) \
             (clause (vars) (neg (app q a a)))",
        );
        let (out, report) = run_pe(&set.signature, &set.clauses, &PeConfig::default());
        assert!(out.is_empty(), "{out:?}");
        let names: Vec<&str> = report
            .eliminated
            .iter()
            .map(|e| e.symbol.as_str())
            .collect();
        assert_eq!(names, ["p", "q"]);
    }

    #[test]
    fn run_pe_without_predicates() {
        let set = problem("(type i 0) (sym a i) (sym b i) (clause (vars) (eq a b))");
        let (out, report) = run_pe(&set.signature, &set.clauses, &PeConfig::default());
        assert_eq!(out, set.clauses);
        assert!(report.eliminated.is_empty());
    }

    #[test]
    fn growth_guard_refuses_quadratic_blowup() {
        let mut text = String::from("(sym p o)");
        for k in 0..5 {
            text.push_str(&format!(
                " (sym a{k} o) (sym b{k} o) (sym c{k} o) (sym d{k} o)"
            ));
        }
        for k in 0..5 {
            text.push_str(&format!(" (clause (vars) (pos p) (pos a{k}) (pos b{k}))"));
            text.push_str(&format!(" (clause (vars) (neg p) (pos c{k}) (pos d{k}))"));
        }
        let set = problem(&text);
        let strict = PeConfig {
            k_tol: 0,
            ..PeConfig::default()
        };
        assert_eq!(
            ppe(&set.clauses, "p", &strict, &mut Fresh::new(), &mut 0),
            PpeOutcome::Refused
        );
        let open = PeConfig {
            k_tol: KTOL_INFINITE,
            ..PeConfig::default()
        };
        match ppe(&set.clauses, "p", &open, &mut Fresh::new(), &mut 0) {
            PpeOutcome::Eliminated { clauses, .. } => {
                assert_eq!(clauses.len(), 25);
                assert!(clauses.iter().all(|c| !c.contains_symbol("p")));
            }
            other => panic!("{other:?}"),
        }
    }
}
