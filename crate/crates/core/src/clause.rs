//! Literals, clauses and the syntactic predicates shared by all techniques.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::signature::{is_logical, logic, Signature};
use crate::term::{Term, TermNode, TypeError, Var};
use crate::types::{Name, Type, TypeSubst};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("literal sides have different types: {left} vs {right}")]
pub struct LiteralTypeError {
    pub left: Type,
    pub right: Type,
}

/// `s ≈ t` or `s ≉ t`. Sides are unordered for comparison purposes but keep
/// their construction order. A Boolean side `⊥` is rewritten to `⊤` with the
/// polarity flipped.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    positive: bool,
    left: Term,
    right: Term,
}

/// Decomposition of a p-literal `(¬) p⟨τ̄⟩ t̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredLit {
    pub symbol: Name,
    pub positive: bool,
    pub ty_args: Vec<Type>,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(positive: bool, left: Term, right: Term) -> Result<Literal, LiteralTypeError> {
        let (lt, rt) = (left.ty(), right.ty());
        if lt != rt {
            return Err(LiteralTypeError {
                left: lt,
                right: rt,
            });
        }
        let mut lit = Literal {
            positive,
            left,
            right,
        };
        loop {
            if logic::is_bot(&lit.right) {
                lit.right = logic::top();
            } else if logic::is_bot(&lit.left) {
                lit.left = logic::top();
            } else {
                break;
            }
            lit.positive = !lit.positive;
        }
        Ok(lit)
    }

    /// Panicking variant for sides already known to share a type.
    pub fn eq(left: Term, right: Term) -> Literal {
        Literal::new(true, left, right).expect("well-typed equation")
    }

    pub fn neq(left: Term, right: Term) -> Literal {
        Literal::new(false, left, right).expect("well-typed disequation")
    }

    /// `t ≈ ⊤` or `t ≉ ⊤` for a formula `t`.
    pub fn atom(positive: bool, t: Term) -> Literal {
        Literal::new(positive, t, logic::top()).expect("formula atom")
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn left(&self) -> &Term {
        &self.left
    }

    pub fn right(&self) -> &Term {
        &self.right
    }

    pub fn sides(&self) -> [&Term; 2] {
        [&self.left, &self.right]
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            left: self.left.clone(),
            right: self.right.clone(),
        }
    }

    pub fn flipped(&self) -> Literal {
        Literal {
            positive: self.positive,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Equal up to orientation.
    pub fn same(&self, other: &Literal) -> bool {
        self.positive == other.positive
            && ((self.left == other.left && self.right == other.right)
                || (self.left == other.right && self.right == other.left))
    }

    /// Atom side when the other side is `⊤`.
    pub fn formula_side(&self) -> Option<&Term> {
        if logic::is_top(&self.right) {
            Some(&self.left)
        } else if logic::is_top(&self.left) {
            Some(&self.right)
        } else {
            None
        }
    }

    pub fn pred_view(&self) -> Option<PredLit> {
        let atom = self.formula_side()?;
        let (head, args) = atom.strip_args();
        let (name, ty_args) = head.as_const()?;
        if is_logical(name) {
            return None;
        }
        Some(PredLit {
            symbol: name.clone(),
            positive: self.positive,
            ty_args: ty_args.to_vec(),
            args: args.into_iter().cloned().collect(),
        })
    }

    pub fn is_pred_lit_of(&self, p: &str) -> bool {
        self.pred_view().is_some_and(|v| &*v.symbol == p)
    }

    /// Rebuilds both sides through `f`, renormalizing.
    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Literal {
        Literal::new(self.positive, f(&self.left), f(&self.right)).expect("type-preserving map")
    }

    pub fn apply_types(&self, subst: &TypeSubst) -> Literal {
        self.map_terms(|t| t.apply_types(subst))
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<Var>) {
        self.left.collect_free_vars(out);
        self.right.collect_free_vars(out);
    }

    pub fn collect_type_vars(&self, out: &mut BTreeSet<Name>) {
        self.left.collect_type_vars(out);
        self.right.collect_type_vars(out);
    }

    pub fn contains_symbol(&self, sym: &str) -> bool {
        self.left.contains_const(sym) || self.right.contains_const(sym)
    }

    /// Literal with ground, structurally equal sides and positive polarity.
    pub fn is_reflexive(&self) -> bool {
        self.positive && self.left == self.right
    }

    /// `[L]` with bold equality symbols.
    pub fn to_formula(&self) -> Term {
        if self.positive {
            logic::eqb(&self.left, &self.right)
        } else {
            logic::neqb(&self.left, &self.right)
        }
    }

    /// Like [`Literal::to_formula`], but writes `t ≈ ⊤` as `t` and `t ≉ ⊤` as `¬t`.
    pub fn to_abbreviated_formula(&self) -> Term {
        match self.formula_side() {
            Some(atom) if self.positive => atom.clone(),
            Some(atom) => logic::not(atom),
            None => self.to_formula(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.formula_side() {
            Some(atom) if self.positive => write!(f, "{atom}"),
            Some(atom) => {
                if matches!(atom.node(), TermNode::App(..)) {
                    write!(f, "¬({atom})")
                } else {
                    write!(f, "¬{atom}")
                }
            }
            None => {
                let op = if self.positive { "≈" } else { "≉" };
                write!(f, "{} {op} {}", self.left, self.right)
            }
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Finite multiset of literals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    pub fn new(lits: Vec<Literal>) -> Clause {
        Clause { lits }
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn lits(&self) -> &[Literal] {
        &self.lits
    }

    pub fn into_lits(self) -> Vec<Literal> {
        self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.lits.iter().for_each(|l| l.collect_free_vars(&mut out));
        out
    }

    pub fn type_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.lits.iter().for_each(|l| l.collect_type_vars(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.free_vars().is_empty() && self.type_vars().is_empty()
    }

    pub fn contains_symbol(&self, sym: &str) -> bool {
        self.lits.iter().any(|l| l.contains_symbol(sym))
    }

    /// Non-logical symbols occurring anywhere.
    pub fn symbols(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for l in &self.lits {
            for side in l.sides() {
                side.for_each_const(&mut |n, _| {
                    if !is_logical(n) {
                        out.insert(n.clone());
                    }
                });
            }
        }
        out
    }

    pub fn pred_lits(&self) -> impl Iterator<Item = (usize, PredLit)> + '_ {
        self.lits
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.pred_view().map(|v| (i, v)))
    }

    pub fn pred_lits_of<'a>(&'a self, p: &'a str) -> impl Iterator<Item = (usize, PredLit)> + 'a {
        self.pred_lits().filter(move |(_, v)| &*v.symbol == p)
    }

    pub fn without(&self, index: usize) -> Vec<Literal> {
        let mut lits = self.lits.clone();
        lits.remove(index);
        lits
    }

    pub fn apply_types(&self, subst: &TypeSubst) -> Clause {
        if subst.is_empty() {
            return self.clone();
        }
        Clause::new(self.lits.iter().map(|l| l.apply_types(subst)).collect())
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Clause {
        Clause::new(self.lits.iter().map(|l| l.map_terms(&mut f)).collect())
    }

    /// Renames every type and term variable to a fresh one.
    pub fn rename_apart(&self, fresh: &mut Fresh) -> Clause {
        let tsubst: TypeSubst = self
            .type_vars()
            .into_iter()
            .map(|a| (a, fresh.type_var()))
            .collect();
        let renamed_ty = self.apply_types(&tsubst);
        let names: BTreeMap<Name, Name> = renamed_ty
            .free_vars()
            .into_iter()
            .map(|v| (v.name.clone(), fresh.term_var_name()))
            .collect();
        renamed_ty.map_terms(|t| {
            t.map_leaves(&mut |leaf| {
                leaf.as_var().and_then(|v| {
                    names
                        .get(&v.name)
                        .map(|n| Term::free(n.clone(), v.ty.clone()))
                })
            })
        })
    }

    /// `[C]` with bold connectives; `⊥` when empty.
    pub fn to_formula(&self) -> Term {
        let parts: Vec<Term> = self.lits.iter().map(Literal::to_formula).collect();
        logic::disj(&parts)
    }

    /// `[C]` writing p-literals as `p t̄` and `¬p t̄`.
    pub fn to_abbreviated_formula(&self) -> Term {
        let parts: Vec<Term> = self
            .lits
            .iter()
            .map(Literal::to_abbreviated_formula)
            .collect();
        logic::disj(&parts)
    }

    /// Equal up to renaming of type and term variables, literal order and
    /// equation orientation.
    pub fn is_variant(&self, other: &Clause) -> bool {
        if self.lits.len() != other.lits.len() {
            return false;
        }
        let mut used = vec![false; other.lits.len()];
        variant_lits(&self.lits, &other.lits, &mut used, &Renaming::default())
    }

    /// Multiset equality up to orientation, no renaming.
    pub fn same_multiset(&self, other: &Clause) -> bool {
        if self.lits.len() != other.lits.len() {
            return false;
        }
        let mut used = vec![false; other.lits.len()];
        self.lits.iter().all(|l| {
            match (0..other.lits.len()).find(|&j| !used[j] && l.same(&other.lits[j])) {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "⊥");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Clause::new(iter.into_iter().collect())
    }
}

/// Clauses together with the signature they are typed against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSet {
    pub signature: Arc<Signature>,
    pub clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn new(signature: Arc<Signature>, clauses: Vec<Clause>) -> Self {
        ClauseSet { signature, clauses }
    }

    pub fn with_clauses(&self, clauses: Vec<Clause>) -> Self {
        ClauseSet {
            signature: self.signature.clone(),
            clauses,
        }
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    /// Predicate symbols occurring in the set, in declaration order.
    pub fn occurring_predicates(&self) -> Vec<Name> {
        occurring_predicates(&self.signature, &self.clauses)
    }
}

/// Symbols occurring in `clauses` that are declared as predicates or head
/// some p-literal (a polymorphic result type instantiated to `o`), in
/// declaration order.
pub fn occurring_predicates(sig: &Signature, clauses: &[Clause]) -> Vec<Name> {
    let mut present = BTreeSet::new();
    let mut heads = BTreeSet::new();
    for c in clauses {
        present.extend(c.symbols());
        heads.extend(c.pred_lits().map(|(_, v)| v.symbol));
    }
    sig.symbols()
        .map(|(name, _)| name)
        .filter(|p| heads.contains(*p) || (sig.is_predicate_symbol(p) && present.contains(*p)))
        .cloned()
        .collect()
}

/// Source of variable names that cannot clash with parsed names.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    next: u64,
}

impl Fresh {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts past every `#k` suffix already used in `clauses`.
    pub fn avoiding<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Self {
        let mut next = 0;
        let mut bump = |name: &str| {
            if let Some((_, k)) = name.rsplit_once('#') {
                if let Ok(k) = k.parse::<u64>() {
                    next = next.max(k + 1);
                }
            }
        };
        for c in clauses {
            c.free_vars().iter().for_each(|v| bump(&v.name));
            c.type_vars().iter().for_each(|a| bump(a));
        }
        Fresh { next }
    }

    fn bump(&mut self) -> u64 {
        let k = self.next;
        self.next += 1;
        k
    }

    pub fn term_var_name(&mut self) -> Name {
        format!("X#{}", self.bump()).into()
    }

    pub fn term_var(&mut self, ty: Type) -> Var {
        Var::new(self.term_var_name(), ty)
    }

    pub fn type_var(&mut self) -> Type {
        Type::var(format!("A#{}", self.bump()))
    }

    pub fn symbol_name(&mut self, base: &str) -> Name {
        format!("{base}#{}", self.bump()).into()
    }
}

/// True iff `p` occurs in `clause` other than as the head of a p-literal atom.
pub fn occurs_deep(p: &str, clause: &Clause) -> bool {
    clause.lits().iter().any(|l| occurs_deep_in_literal(p, l))
}

pub fn occurs_deep_in_literal(p: &str, lit: &Literal) -> bool {
    match lit.pred_view() {
        Some(view) if &*view.symbol == p => view.args.iter().any(|a| a.contains_const(p)),
        _ => lit.contains_symbol(p),
    }
}

pub fn occurs_deep_in_set(p: &str, clauses: &[Clause]) -> bool {
    clauses.iter().any(|c| occurs_deep(p, c))
}

pub fn is_singular_for_clause(p: &str, clause: &Clause) -> bool {
    clause.pred_lits_of(p).count() <= 1 && !occurs_deep(p, clause)
}

pub fn is_singular(p: &str, clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| is_singular_for_clause(p, c))
}

/// Every type variable of the clause occurs in the type arguments of each
/// p-literal.
pub fn is_polymorphism_safe(clause: &Clause, p: &str) -> bool {
    let tvars = clause.type_vars();
    clause
        .pred_lits_of(p)
        .all(|(_, v)| is_polymorphism_safe_for(&tvars, &v))
}

pub fn is_polymorphism_safe_for(clause_tvars: &BTreeSet<Name>, lit: &PredLit) -> bool {
    let mut in_args = BTreeSet::new();
    lit.ty_args
        .iter()
        .for_each(|t| t.collect_vars(&mut in_args));
    clause_tvars.is_subset(&in_args)
}

pub fn is_polymorphism_safe_set(clauses: &[Clause], p: &str) -> bool {
    clauses.iter().all(|c| is_polymorphism_safe(c, p))
}

/// Bijective renaming of type and term variables built during variant checks.
#[derive(Clone, Default)]
struct Renaming {
    ty_fwd: BTreeMap<Name, Name>,
    ty_bwd: BTreeMap<Name, Name>,
    tm_fwd: BTreeMap<Name, Name>,
    tm_bwd: BTreeMap<Name, Name>,
}

fn bind_bijective(
    fwd: &mut BTreeMap<Name, Name>,
    bwd: &mut BTreeMap<Name, Name>,
    a: &Name,
    b: &Name,
) -> bool {
    match (fwd.get(a), bwd.get(b)) {
        (Some(x), Some(y)) => x == b && y == a,
        (None, None) => {
            fwd.insert(a.clone(), b.clone());
            bwd.insert(b.clone(), a.clone());
            true
        }
        _ => false,
    }
}

impl Renaming {
    fn ty(&mut self, a: &Type, b: &Type) -> bool {
        match (a, b) {
            (Type::Var(x), Type::Var(y)) => {
                bind_bijective(&mut self.ty_fwd, &mut self.ty_bwd, x, y)
            }
            (Type::Con(c, xs), Type::Con(d, ys)) => {
                c == d && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.ty(x, y))
            }
            _ => false,
        }
    }

    fn term(&mut self, a: &Term, b: &Term) -> bool {
        match (a.node(), b.node()) {
            (TermNode::Var(x), TermNode::Var(y)) => {
                self.ty(&x.ty, &y.ty)
                    && bind_bijective(&mut self.tm_fwd, &mut self.tm_bwd, &x.name, &y.name)
            }
            (TermNode::Bound { index: i, ty: s }, TermNode::Bound { index: j, ty: t }) => {
                i == j && self.ty(s, t)
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
            ) => f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.ty(x, y)),
            (TermNode::App(f, x), TermNode::App(g, y)) => self.term(f, g) && self.term(x, y),
            (TermNode::Lam(s, x), TermNode::Lam(t, y)) => self.ty(s, t) && self.term(x, y),
            _ => false,
        }
    }
}

fn variant_lits(a: &[Literal], b: &[Literal], used: &mut [bool], ren: &Renaming) -> bool {
    let Some((first, rest)) = a.split_first() else {
        return true;
    };
    for j in 0..b.len() {
        if used[j] || b[j].positive != first.positive {
            continue;
        }
        for (bl, br) in [(&b[j].left, &b[j].right), (&b[j].right, &b[j].left)] {
            let mut r = ren.clone();
            if r.term(&first.left, bl) && r.term(&first.right, br) {
                used[j] = true;
                if variant_lits(rest, b, used, &r) {
                    return true;
                }
                used[j] = false;
            }
        }
    }
    false
}

/// Type-correct substitution of type and term variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    pub types: TypeSubst,
    pub terms: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, var: impl Into<Name>, t: Term) -> Self {
        self.terms.insert(var.into(), t);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty() && self.terms.is_empty()
    }

    /// `tσ`, renormalized. Fails when an image's type differs from the
    /// variable's type after the type part is applied.
    pub fn apply(&self, t: &Term) -> Result<Term, TypeError> {
        let typed = t.apply_types(&self.types);
        let mut err = None;
        let out = typed.map_leaves(&mut |leaf| {
            let v = leaf.as_var()?;
            let image = self.terms.get(&v.name)?;
            let ity = image.ty();
            if ity != v.ty {
                err.get_or_insert(TypeError::SubstitutionMismatch {
                    var: v.name.clone(),
                    expected: v.ty.clone(),
                    found: ity,
                });
                return None;
            }
            Some(image.clone())
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    pub fn apply_literal(&self, lit: &Literal) -> Result<Literal, TypeError> {
        let l = self.apply(lit.left())?;
        let r = self.apply(lit.right())?;
        Ok(Literal::new(lit.is_positive(), l, r).expect("substitution preserves types"))
    }

    pub fn apply_clause(&self, c: &Clause) -> Result<Clause, TypeError> {
        let lits: Result<Vec<Literal>, TypeError> =
            c.lits().iter().map(|l| self.apply_literal(l)).collect();
        lits.map(Clause::new)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::types::TypeScheme;

    pub fn i() -> Type {
        Type::base("i")
    }

    pub fn c(name: &str, ty: Type) -> Term {
        Term::constant(name, vec![], ty)
    }

    pub fn pred(name: &str, arity: usize) -> Term {
        c(
            name,
            Type::arrows(std::iter::repeat_n(i(), arity), Type::bool()),
        )
    }

    pub fn v(name: &str) -> Term {
        Term::free(name, i())
    }

    #[test]
    fn bottom_is_normalized_to_top() {
        let p = c("p", Type::bool());
        let l = Literal::eq(p.clone(), logic::bot());
        assert!(!l.is_positive());
        assert!(logic::is_top(l.right()));
        let l = Literal::neq(logic::bot(), p.clone());
        assert!(l.is_positive());
        assert!(logic::is_top(l.left()));
        assert_eq!(l.right(), &p);
    }

    #[test]
    fn predicate_literal_view() {
        let a = c("a", i());
        let pa = Term::app(&pred("p", 1), &a);
        let view = Literal::atom(true, pa).pred_view().unwrap();
        assert_eq!(&*view.symbol, "p");
        assert!(view.positive);
        assert_eq!(view.args, vec![a.clone()]);
        // variable head
        let y = Term::free("Y", Type::arrow(i(), Type::bool()));
        assert!(Literal::atom(true, Term::app(&y, &a)).pred_view().is_none());
        // non-Boolean equation
        let fa = Term::app(&c("f", Type::arrow(i(), i())), &a);
        assert!(Literal::eq(fa, c("b", i())).pred_view().is_none());
    }

    #[test]
    fn occurs_deep_examples() {
        // ¬p x ∨ ¬q (h p (p b))
        let io = Type::arrow(i(), Type::bool());
        let p = c("p", io.clone());
        let b = c("b", i());
        let h = c("h", Type::arrows([io.clone(), Type::bool()], i()));
        let q = pred("q", 1);
        let clause = Clause::new(vec![
            Literal::atom(false, Term::app(&p, &v("X"))),
            Literal::atom(
                false,
                Term::app(&q, &Term::apps(&h, [&p, &Term::app(&p, &b)])),
            ),
        ]);
        assert!(occurs_deep("p", &clause));
        let pa = Clause::new(vec![Literal::atom(true, Term::app(&p, &c("a", i())))]);
        assert!(!occurs_deep("p", &pa));
        let pp = c("pp", Type::arrow(Type::bool(), Type::bool()));
        let nested = Clause::new(vec![Literal::atom(
            true,
            Term::app(&pp, &Term::app(&pp, &logic::top())),
        )]);
        assert!(occurs_deep("pp", &nested));
    }

    #[test]
    fn singular_examples() {
        let p2 = pred("p", 2);
        let q = pred("q", 1);
        let f = c("f", Type::arrow(i(), i()));
        let y = Term::free("Y", Type::arrow(i(), i()));
        let a = c("a", i());
        let z = v("Z");
        let set = vec![
            Clause::new(vec![
                Literal::atom(true, Term::apps(&p2, [&z, &z])),
                Literal::atom(true, Term::app(&q, &z)),
            ]),
            Clause::new(vec![Literal::atom(
                false,
                Term::apps(
                    &p2,
                    [
                        &Term::app(&f, &Term::app(&y, &a)),
                        &Term::app(&y, &Term::app(&f, &a)),
                    ],
                ),
            )]),
            Clause::new(vec![Literal::atom(false, Term::app(&q, &c("b", i())))]),
        ];
        assert!(is_singular("p", &set));
        let p1 = pred("p", 1);
        let two = vec![Clause::new(vec![
            Literal::atom(true, Term::app(&p1, &v("X"))),
            Literal::atom(true, Term::app(&p1, &v("Y"))),
        ])];
        assert!(!is_singular("p", &two));
    }

    #[test]
    fn polymorphism_safety() {
        let alpha = Type::var("A");
        let beta = Type::var("B");
        let scheme =
            TypeScheme::new(vec!["A".into()], Type::arrow(Type::var("A"), Type::bool())).unwrap();
        let inst = |name: &str, t: &Type| {
            Term::constant(
                name,
                vec![t.clone()],
                scheme.instantiate(std::slice::from_ref(t)).unwrap(),
            )
        };
        let x = Term::free("X", alpha.clone());
        let yb = Term::free("Y", beta.clone());
        let ya = Term::free("Y", alpha.clone());
        let safe = Clause::new(vec![
            Literal::atom(true, Term::app(&inst("p", &alpha), &x)),
            Literal::atom(true, Term::app(&inst("q", &alpha), &ya)),
        ]);
        assert!(is_polymorphism_safe(&safe, "p"));
        let unsafe_ = Clause::new(vec![
            Literal::atom(true, Term::app(&inst("p", &alpha), &x)),
            Literal::atom(true, Term::app(&inst("q", &beta), &yb)),
        ]);
        assert!(!is_polymorphism_safe(&unsafe_, "p"));
        let mono = Clause::new(vec![Literal::atom(true, Term::app(&pred("p", 1), &v("X")))]);
        assert!(is_polymorphism_safe(&mono, "p"));
    }

    #[test]
    fn clause_to_formula_examples() {
        let a = c("a", i());
        let b = c("b", i());
        let pa = Term::app(&pred("p", 1), &a);
        let cl = Clause::new(vec![
            Literal::atom(true, pa.clone()),
            Literal::neq(b.clone(), c("c", i())),
        ]);
        let expected = logic::or(
            &logic::eqb(&pa, &logic::top()),
            &logic::neqb(&b, &c("c", i())),
        );
        assert_eq!(cl.to_formula(), expected);
        assert!(logic::is_bot(&Clause::empty().to_formula()));
        let single = Clause::new(vec![Literal::eq(a.clone(), b.clone())]);
        assert_eq!(single.to_formula(), logic::eqb(&a, &b));
    }

    #[test]
    fn variants() {
        let p2 = pred("p", 2);
        let q = pred("q", 1);
        let c1 = Clause::new(vec![
            Literal::atom(true, Term::apps(&p2, [&v("X"), &v("Y")])),
            Literal::atom(false, Term::app(&q, &v("X"))),
        ]);
        let c2 = Clause::new(vec![
            Literal::atom(false, Term::app(&q, &v("U"))),
            Literal::atom(true, Term::apps(&p2, [&v("U"), &v("W")])),
        ]);
        let c3 = Clause::new(vec![
            Literal::atom(false, Term::app(&q, &v("U"))),
            Literal::atom(true, Term::apps(&p2, [&v("W"), &v("U")])),
        ]);
        assert!(c1.is_variant(&c2));
        assert!(!c1.is_variant(&c3));
        let mut fresh = Fresh::new();
        assert!(c1.is_variant(&c1.rename_apart(&mut fresh)));
        // X ≈ Y vs X ≈ X
        let xy = Clause::new(vec![Literal::eq(v("X"), v("Y"))]);
        let xx = Clause::new(vec![Literal::eq(v("X"), v("X"))]);
        assert!(!xy.is_variant(&xx));
    }

    #[test]
    fn rename_apart_shares_nothing() {
        let p2 = pred("p", 2);
        let cl = Clause::new(vec![Literal::atom(
            true,
            Term::apps(&p2, [&v("X"), &v("Y")]),
        )]);
        let mut fresh = Fresh::avoiding([&cl]);
        let r = cl.rename_apart(&mut fresh);
        assert!(cl.free_vars().is_disjoint(&r.free_vars()));
        let mut again = Fresh::avoiding([&r]);
        let r2 = r.rename_apart(&mut again);
        assert!(r.free_vars().is_disjoint(&r2.free_vars()));
    }

    #[test]
    fn substitution_examples() {
        // (y a){y ↦ λx. x} → a
        let a = c("a", i());
        let y = Term::free("Y", Type::arrow(i(), i()));
        let x = Var::new("x", i());
        let id = Term::lam(&x, &Term::var(x.clone()));
        let s = Substitution::new().bind("Y", id);
        assert_eq!(s.apply(&Term::app(&y, &a)).unwrap(), a);
        assert_eq!(Substitution::new().apply(&v("X")).unwrap(), v("X"));
        // (λx. y){y ↦ x}: the bound variable stays distinct from the free x
        let yv = Var::new("Y", i());
        let lam = Term::lam(&x, &Term::var(yv));
        let out = Substitution::new()
            .bind("Y", Term::free("x", i()))
            .apply(&lam)
            .unwrap();
        let vars: Vec<_> = out
            .free_vars()
            .into_iter()
            .map(|v| v.name.to_string())
            .collect();
        assert_eq!(vars, ["x"]);
        assert!(out.is_lam());
        // type mismatch
        assert!(Substitution::new()
            .bind("X", logic::top())
            .apply(&v("X"))
            .is_err());
    }
}
