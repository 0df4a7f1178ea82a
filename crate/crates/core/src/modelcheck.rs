//! Brute-force satisfiability oracles for small first-order fragments.

use std::collections::HashMap;

use thiserror::Error;

use crate::clause::{Clause, Literal};
use crate::sat::{self, SatProblem};
use crate::signature::{is_logical, logic};
use crate::term::{Term, TermNode};
use crate::types::{Name, Type};

pub const MAX_ATOMS: usize = 24;
pub const MAX_DOMAIN: usize = 3;
const MAX_INTERPRETATIONS: u64 = 2_000_000;
const MAX_GROUNDINGS: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("clause set is not ground")]
    NotGround,
    #[error("{0} distinct atoms exceed the limit of {MAX_ATOMS}")]
    TooManyAtoms(usize),
    #[error("literal `{0}` is outside the supported fragment")]
    Unsupported(String),
    #[error("domain size {0} is outside 1..={MAX_DOMAIN}")]
    DomainSize(usize),
    #[error("search space too large at domain size {0}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteVerdict {
    SatAtSize(usize),
    NoModelUpTo(usize),
}

impl FiniteVerdict {
    pub fn is_sat(self) -> bool {
        matches!(self, FiniteVerdict::SatAtSize(_))
    }
}

/// A term built only from non-logical monomorphic constants, with no
/// Boolean subterms and no λ.
fn is_plain_ground(t: &Term) -> bool {
    if t.ty().is_bool() {
        return false;
    }
    match t.node() {
        TermNode::Const { name, ty_args, .. } => !is_logical(name) && ty_args.is_empty(),
        TermNode::App(f, a) => is_plain_ground(f) && is_plain_ground(a),
        _ => false,
    }
}

fn prop_atom(l: &Literal) -> Option<Option<Term>> {
    let t = l.formula_side()?;
    if logic::is_top(t) {
        return Some(None);
    }
    let (head, args) = t.strip_args();
    match head.as_const() {
        Some((name, tys))
            if !is_logical(name) && tys.is_empty() && args.iter().all(|a| is_plain_ground(a)) =>
        {
            Some(Some(t.clone()))
        }
        _ => None,
    }
}

/// Exact satisfiability of a ground set whose literals are all predicate
/// atoms (or `⊤`) over first-order arguments.
pub fn ground_prop_sat(clauses: &[Clause]) -> Result<bool, FragmentError> {
    let mut atoms: HashMap<Term, i32> = HashMap::new();
    let mut cnf = Vec::new();
    'clauses: for c in clauses {
        if !c.is_ground() {
            return Err(FragmentError::NotGround);
        }
        let mut out = Vec::new();
        for l in c.lits() {
            match prop_atom(l) {
                None => return Err(FragmentError::Unsupported(l.to_string())),
                Some(None) if l.is_positive() => continue 'clauses,
                Some(None) => {}
                Some(Some(t)) => {
                    let next = atoms.len() as i32 + 1;
                    let v = *atoms.entry(t).or_insert(next);
                    out.push(if l.is_positive() { v } else { -v });
                }
            }
        }
        cnf.push(out);
    }
    if atoms.len() > MAX_ATOMS {
        return Err(FragmentError::TooManyAtoms(atoms.len()));
    }
    let problem = SatProblem::new(atoms.len(), cnf).expect("well-formed encoding");
    Ok(sat::solve(&problem).is_sat())
}

#[derive(Debug, Clone)]
enum FoTerm {
    Var(usize),
    App(usize, Vec<FoTerm>),
}

#[derive(Debug, Clone)]
enum FoLit {
    Truth(bool),
    Eq(bool, FoTerm, FoTerm),
    Atom(bool, usize, Vec<FoTerm>),
}

struct FoClause {
    var_sorts: Vec<usize>,
    lits: Vec<FoLit>,
}

struct FunSym {
    args: Vec<usize>,
    result: usize,
}

/// Many-sorted first-order abstraction of a clause set.
#[derive(Default)]
struct FoProblem {
    sorts: Vec<Type>,
    funs: Vec<FunSym>,
    fun_index: HashMap<Name, usize>,
    preds: HashMap<Name, usize>,
    clauses: Vec<FoClause>,
}

impl FoProblem {
    fn sort(&mut self, ty: &Type) -> Option<usize> {
        match ty {
            Type::Con(_, args) if args.is_empty() && !ty.is_bool() => {}
            _ => return None,
        }
        Some(match self.sorts.iter().position(|s| s == ty) {
            Some(i) => i,
            None => {
                self.sorts.push(ty.clone());
                self.sorts.len() - 1
            }
        })
    }

    fn term(&mut self, t: &Term, vars: &mut Vec<(Name, usize)>) -> Option<FoTerm> {
        let (head, args) = t.strip_args();
        match head.node() {
            TermNode::Var(v) if args.is_empty() => {
                let sort = self.sort(&v.ty)?;
                let idx = match vars.iter().position(|(n, _)| *n == v.name) {
                    Some(i) => i,
                    None => {
                        vars.push((v.name.clone(), sort));
                        vars.len() - 1
                    }
                };
                Some(FoTerm::Var(idx))
            }
            TermNode::Const { name, ty_args, ty } if ty_args.is_empty() && !is_logical(name) => {
                let (arg_tys, result) = ty.split_arrows();
                if arg_tys.len() != args.len() {
                    return None;
                }
                let result = self.sort(result)?;
                let arg_sorts = arg_tys
                    .iter()
                    .map(|a| self.sort(a))
                    .collect::<Option<Vec<_>>>()?;
                let id = match self.fun_index.get(name) {
                    Some(&id) => id,
                    None => {
                        self.funs.push(FunSym {
                            args: arg_sorts,
                            result,
                        });
                        self.fun_index.insert(name.clone(), self.funs.len() - 1);
                        self.funs.len() - 1
                    }
                };
                let args = args
                    .iter()
                    .map(|a| self.term(a, vars))
                    .collect::<Option<Vec<_>>>()?;
                Some(FoTerm::App(id, args))
            }
            _ => None,
        }
    }

    fn literal(&mut self, l: &Literal, vars: &mut Vec<(Name, usize)>) -> Option<FoLit> {
        if let Some(t) = l.formula_side() {
            if logic::is_top(t) {
                return Some(FoLit::Truth(l.is_positive()));
            }
            let (head, args) = t.strip_args();
            let (name, tys) = head.as_const()?;
            if is_logical(name) || !tys.is_empty() {
                return None;
            }
            let next = self.preds.len();
            let id = *self.preds.entry(name.clone()).or_insert(next);
            let args = args
                .iter()
                .map(|a| self.term(a, vars))
                .collect::<Option<Vec<_>>>()?;
            return Some(FoLit::Atom(l.is_positive(), id, args));
        }
        self.sort(&l.left().ty())?;
        let s = self.term(l.left(), vars)?;
        let t = self.term(l.right(), vars)?;
        Some(FoLit::Eq(l.is_positive(), s, t))
    }

    fn build(clauses: &[Clause]) -> Result<FoProblem, FragmentError> {
        let mut p = FoProblem::default();
        for c in clauses {
            let mut vars = Vec::new();
            let mut lits = Vec::new();
            for l in c.lits() {
                let lit = p
                    .literal(l, &mut vars)
                    .ok_or_else(|| FragmentError::Unsupported(l.to_string()))?;
                lits.push(lit);
            }
            p.clauses.push(FoClause {
                var_sorts: vars.into_iter().map(|(_, s)| s).collect(),
                lits,
            });
        }
        Ok(p)
    }
}

fn table_size(k: usize, arity: usize) -> usize {
    k.pow(arity as u32)
}

fn eval(t: &FoTerm, tables: &[Vec<usize>], k: usize, env: &[usize]) -> usize {
    match t {
        FoTerm::Var(i) => env[*i],
        FoTerm::App(f, args) => {
            let mut idx = 0;
            for a in args {
                idx = idx * k + eval(a, tables, k, env);
            }
            tables[*f][idx]
        }
    }
}

/// Constants of each sort must take values in first-use order.
fn canonical_constants(p: &FoProblem, tables: &[Vec<usize>]) -> bool {
    let mut next = vec![0usize; p.sorts.len()];
    for (f, sym) in p.funs.iter().enumerate() {
        if sym.args.is_empty() {
            let v = tables[f][0];
            if v > next[sym.result] {
                return false;
            }
            if v == next[sym.result] {
                next[sym.result] += 1;
            }
        }
    }
    true
}

/// Grounds every clause under the function tables and checks the
/// remaining predicate constraints with the SAT solver.
fn check_interpretation(p: &FoProblem, tables: &[Vec<usize>], k: usize) -> bool {
    let mut atoms: HashMap<(usize, Vec<usize>), i32> = HashMap::new();
    let mut cnf = Vec::new();
    for c in &p.clauses {
        let n = c.var_sorts.len();
        let mut env = vec![0usize; n];
        loop {
            let mut out = Vec::new();
            let mut satisfied = false;
            for l in &c.lits {
                match l {
                    FoLit::Truth(b) => satisfied |= *b,
                    FoLit::Eq(pos, s, t) => {
                        satisfied |= (eval(s, tables, k, &env) == eval(t, tables, k, &env)) == *pos;
                    }
                    FoLit::Atom(pos, pid, args) => {
                        let vals = args.iter().map(|a| eval(a, tables, k, &env)).collect();
                        let next = atoms.len() as i32 + 1;
                        let v = *atoms.entry((*pid, vals)).or_insert(next);
                        out.push(if *pos { v } else { -v });
                    }
                }
                if satisfied {
                    break;
                }
            }
            if !satisfied {
                if out.is_empty() {
                    return false;
                }
                cnf.push(out);
            }
            let mut i = 0;
            while i < n {
                env[i] += 1;
                if env[i] < k {
                    break;
                }
                env[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    let problem = SatProblem::new(atoms.len(), cnf).expect("well-formed grounding");
    sat::solve(&problem).is_sat()
}

fn sat_at_size_fo(p: &FoProblem, k: usize) -> Result<bool, FragmentError> {
    let sizes: Vec<usize> = p.funs.iter().map(|f| table_size(k, f.args.len())).collect();
    let cells: usize = sizes.iter().sum();
    let space = (k as u64)
        .checked_pow(cells as u32)
        .filter(|&s| s <= MAX_INTERPRETATIONS);
    if space.is_none() {
        return Err(FragmentError::TooLarge(k));
    }
    for c in &p.clauses {
        if (k as u64)
            .checked_pow(c.var_sorts.len() as u32)
            .is_none_or(|g| g > MAX_GROUNDINGS)
        {
            return Err(FragmentError::TooLarge(k));
        }
    }
    let mut tables: Vec<Vec<usize>> = sizes.iter().map(|&s| vec![0; s]).collect();
    loop {
        if canonical_constants(p, &tables) && check_interpretation(p, &tables, k) {
            return Ok(true);
        }
        let mut advanced = false;
        'odometer: for table in tables.iter_mut() {
            for cell in table.iter_mut() {
                *cell += 1;
                if *cell < k {
                    advanced = true;
                    break 'odometer;
                }
                *cell = 0;
            }
        }
        if !advanced {
            return Ok(false);
        }
    }
}

/// Satisfiability with every base sort interpreted by a `k`-element domain.
/// Free variables of base sort are universally quantified.
pub fn sat_at_size(clauses: &[Clause], k: usize) -> Result<bool, FragmentError> {
    if k == 0 || k > MAX_DOMAIN {
        return Err(FragmentError::DomainSize(k));
    }
    sat_at_size_fo(&FoProblem::build(clauses)?, k)
}

/// Least domain size up to `max_domain` admitting a model.
pub fn finite_model_sat(
    clauses: &[Clause],
    max_domain: usize,
) -> Result<FiniteVerdict, FragmentError> {
    if max_domain == 0 || max_domain > MAX_DOMAIN {
        return Err(FragmentError::DomainSize(max_domain));
    }
    let p = FoProblem::build(clauses)?;
    for k in 1..=max_domain {
        if sat_at_size_fo(&p, k)? {
            return Ok(FiniteVerdict::SatAtSize(k));
        }
    }
    Ok(FiniteVerdict::NoModelUpTo(max_domain))
}

/// Per-size verdicts for sizes `1..=max_domain`.
pub fn size_profile(clauses: &[Clause], max_domain: usize) -> Result<Vec<bool>, FragmentError> {
    if max_domain == 0 || max_domain > MAX_DOMAIN {
        return Err(FragmentError::DomainSize(max_domain));
    }
    let p = FoProblem::build(clauses)?;
    (1..=max_domain).map(|k| sat_at_size_fo(&p, k)).collect()
}
