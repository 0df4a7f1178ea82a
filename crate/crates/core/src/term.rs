//! λ-terms in η-short β-normal form.
//!
//! Bound variables are de Bruijn indices, so α-equivalent terms are
//! structurally equal. Free variables carry a name and a type. Every public
//! constructor returns a normal term; there is no way to build a [`Term`]
//! holding a β- or η-redex. Unnormalized input goes through [`RawTerm`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::types::{Name, Type, TypeSubst};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: Name,
    pub ty: Type,
}

impl Var {
    pub fn new(name: impl Into<Name>, ty: Type) -> Self {
        Var {
            name: name.into(),
            ty,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(Arc<TermNode>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermNode {
    Var(Var),
    /// de Bruijn index; `ty` is the binder's type.
    Bound {
        index: u32,
        ty: Type,
    },
    /// Symbol instance `f⟨τ̄⟩`, with its instantiated type cached.
    Const {
        name: Name,
        ty_args: Vec<Type>,
        ty: Type,
    },
    App(Term, Term),
    Lam(Type, Term),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("cannot apply a term of non-function type {0}")]
    NotAFunction(Type),
    #[error("argument has type {found}, expected {expected}")]
    ArgumentMismatch { expected: Type, found: Type },
    #[error("variable `{var}` of type {expected} cannot be replaced by a term of type {found}")]
    SubstitutionMismatch {
        var: Name,
        expected: Type,
        found: Type,
    },
    #[error("unbound λ-variable `{0}`")]
    UnboundBinder(Name),
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Term {
    pub fn node(&self) -> &TermNode {
        &self.0
    }

    fn mk(node: TermNode) -> Term {
        Term(Arc::new(node))
    }

    pub fn var(v: Var) -> Term {
        Term::mk(TermNode::Var(v))
    }

    pub fn free(name: impl Into<Name>, ty: Type) -> Term {
        Term::var(Var::new(name, ty))
    }

    /// Symbol instance; `ty` must be the scheme instantiated at `ty_args`.
    pub fn constant(name: impl Into<Name>, ty_args: Vec<Type>, ty: Type) -> Term {
        Term::mk(TermNode::Const {
            name: name.into(),
            ty_args,
            ty,
        })
    }

    pub(crate) fn bound(index: u32, ty: Type) -> Term {
        Term::mk(TermNode::Bound { index, ty })
    }

    pub fn ty(&self) -> Type {
        match self.node() {
            TermNode::Var(v) => v.ty.clone(),
            TermNode::Bound { ty, .. } => ty.clone(),
            TermNode::Const { ty, .. } => ty.clone(),
            TermNode::App(f, _) => match f.ty().as_arrow() {
                Some((_, r)) => r.clone(),
                None => unreachable!("well-typed application"),
            },
            TermNode::Lam(ty, body) => Type::arrow(ty.clone(), body.ty()),
        }
    }

    pub fn is_formula(&self) -> bool {
        self.ty().is_bool()
    }

    /// Application, β-reducing when `f` is a λ-abstraction.
    pub fn try_app(f: &Term, arg: &Term) -> Result<Term, TypeError> {
        let fty = f.ty();
        match fty.as_arrow() {
            None => Err(TypeError::NotAFunction(fty.clone())),
            Some((dom, _)) => {
                let aty = arg.ty();
                if *dom != aty {
                    return Err(TypeError::ArgumentMismatch {
                        expected: dom.clone(),
                        found: aty,
                    });
                }
                Ok(app_norm(f, arg))
            }
        }
    }

    /// Panics on ill-typed input; callers construct terms from typed parts.
    pub fn app(f: &Term, arg: &Term) -> Term {
        match Term::try_app(f, arg) {
            Ok(t) => t,
            Err(e) => panic!("ill-typed application {f} · {arg}: {e}"),
        }
    }

    pub fn apps<'a>(f: &Term, args: impl IntoIterator<Item = &'a Term>) -> Term {
        args.into_iter()
            .fold(f.clone(), |acc, a| Term::app(&acc, a))
    }

    /// `λv. body`, abstracting every free occurrence of `v`.
    pub fn lam(v: &Var, body: &Term) -> Term {
        let abstracted = abstract_var(body, v, 0);
        lam_norm(v.ty.clone(), abstracted)
    }

    pub fn lams<'a>(vars: impl IntoIterator<Item = &'a Var>, body: &Term) -> Term {
        let vars: Vec<&Var> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body.clone(), |acc, v| Term::lam(v, &acc))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self.node() {
            TermNode::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<(&Name, &[Type])> {
        match self.node() {
            TermNode::Const { name, ty_args, .. } => Some((name, ty_args)),
            _ => None,
        }
    }

    pub fn is_const(&self, sym: &str) -> bool {
        matches!(self.node(), TermNode::Const { name, .. } if &**name == sym)
    }

    pub fn is_lam(&self) -> bool {
        matches!(self.node(), TermNode::Lam(..))
    }

    /// Head and arguments of the application spine.
    pub fn strip_args(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let TermNode::App(f, a) = t.node() {
            args.push(a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn head(&self) -> &Term {
        self.strip_args().0
    }

    pub fn has_loose_bound(&self) -> bool {
        has_loose_at_or_above(self, 0)
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<Var>) {
        match self.node() {
            TermNode::Var(v) => {
                out.insert(v.clone());
            }
            TermNode::Bound { .. } | TermNode::Const { .. } => {}
            TermNode::App(f, a) => {
                f.collect_free_vars(out);
                a.collect_free_vars(out);
            }
            TermNode::Lam(_, b) => b.collect_free_vars(out),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn collect_type_vars(&self, out: &mut BTreeSet<Name>) {
        match self.node() {
            TermNode::Var(v) => v.ty.collect_vars(out),
            TermNode::Bound { ty, .. } => ty.collect_vars(out),
            TermNode::Const { ty_args, ty, .. } => {
                ty_args.iter().for_each(|t| t.collect_vars(out));
                ty.collect_vars(out);
            }
            TermNode::App(f, a) => {
                f.collect_type_vars(out);
                a.collect_type_vars(out);
            }
            TermNode::Lam(ty, b) => {
                ty.collect_vars(out);
                b.collect_type_vars(out);
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut tv = BTreeSet::new();
        self.collect_type_vars(&mut tv);
        tv.is_empty() && self.free_vars().is_empty()
    }

    pub fn contains_lam(&self) -> bool {
        match self.node() {
            TermNode::Lam(..) => true,
            TermNode::App(f, a) => f.contains_lam() || a.contains_lam(),
            _ => false,
        }
    }

    pub fn for_each_const<'a>(&'a self, f: &mut impl FnMut(&'a Name, &'a [Type])) {
        match self.node() {
            TermNode::Const { name, ty_args, .. } => f(name, ty_args),
            TermNode::App(g, a) => {
                g.for_each_const(f);
                a.for_each_const(f);
            }
            TermNode::Lam(_, b) => b.for_each_const(f),
            TermNode::Var(_) | TermNode::Bound { .. } => {}
        }
    }

    pub fn contains_const(&self, sym: &str) -> bool {
        let mut found = false;
        self.for_each_const(&mut |n, _| found |= &**n == sym);
        found
    }

    pub fn subterm_count(&self) -> usize {
        match self.node() {
            TermNode::App(f, a) => 1 + f.subterm_count() + a.subterm_count(),
            TermNode::Lam(_, b) => 1 + b.subterm_count(),
            _ => 1,
        }
    }

    /// Applies a type substitution everywhere. Cannot create redexes.
    pub fn apply_types(&self, subst: &TypeSubst) -> Term {
        if subst.is_empty() {
            return self.clone();
        }
        match self.node() {
            TermNode::Var(v) => Term::free(v.name.clone(), v.ty.apply(subst)),
            TermNode::Bound { index, ty } => Term::bound(*index, ty.apply(subst)),
            TermNode::Const { name, ty_args, ty } => Term::constant(
                name.clone(),
                ty_args.iter().map(|t| t.apply(subst)).collect(),
                ty.apply(subst),
            ),
            TermNode::App(f, a) => {
                Term::mk(TermNode::App(f.apply_types(subst), a.apply_types(subst)))
            }
            TermNode::Lam(ty, b) => Term::mk(TermNode::Lam(ty.apply(subst), b.apply_types(subst))),
        }
    }

    /// Rebuilds the term bottom-up, replacing free variables and symbol
    /// instances through `leaf`; the result is renormalized.
    pub(crate) fn map_leaves(&self, leaf: &mut impl FnMut(&Term) -> Option<Term>) -> Term {
        match self.node() {
            TermNode::Var(_) | TermNode::Const { .. } => leaf(self).unwrap_or_else(|| self.clone()),
            TermNode::Bound { .. } => self.clone(),
            TermNode::App(f, a) => {
                let f2 = f.map_leaves(leaf);
                let a2 = a.map_leaves(leaf);
                if Arc::ptr_eq(&f.0, &f2.0) && Arc::ptr_eq(&a.0, &a2.0) {
                    self.clone()
                } else {
                    app_norm(&f2, &a2)
                }
            }
            TermNode::Lam(ty, b) => {
                let b2 = b.map_leaves(leaf);
                if Arc::ptr_eq(&b.0, &b2.0) {
                    self.clone()
                } else {
                    lam_norm(ty.clone(), b2)
                }
            }
        }
    }

    /// `t[f⟨τ̄⟩ ↦ u]` for every instance of `sym`; `with` supplies the
    /// replacement for the given type arguments, or `None` to keep it.
    pub fn replace_symbol_with(
        &self,
        sym: &str,
        with: &mut impl FnMut(&[Type]) -> Option<Term>,
    ) -> Term {
        self.map_leaves(&mut |t| match t.node() {
            TermNode::Const { name, ty_args, .. } if &**name == sym => with(ty_args),
            _ => None,
        })
    }

    /// Replaces exactly the instance `sym⟨ty_args⟩` by `u`.
    pub fn replace_symbol(&self, sym: &str, ty_args: &[Type], u: &Term) -> Result<Term, TypeError> {
        let mut mismatch = None;
        let out = self.replace_symbol_with(sym, &mut |args| {
            if args != ty_args {
                return None;
            }
            Some(u.clone())
        });
        // type of the replaced instance must match u's type
        self.for_each_const(&mut |n, args| {
            if &**n == sym && args == ty_args && mismatch.is_none() {
                mismatch = Some(());
            }
        });
        if mismatch.is_some() {
            let inst_ty = find_instance_type(self, sym, ty_args).expect("instance present");
            let uty = u.ty();
            if inst_ty != uty {
                return Err(TypeError::ArgumentMismatch {
                    expected: inst_ty,
                    found: uty,
                });
            }
        }
        Ok(out)
    }
}

fn find_instance_type(t: &Term, sym: &str, ty_args: &[Type]) -> Option<Type> {
    match t.node() {
        TermNode::Const {
            name,
            ty_args: a,
            ty,
        } if &**name == sym && a.as_slice() == ty_args => Some(ty.clone()),
        TermNode::App(f, a) => {
            find_instance_type(f, sym, ty_args).or_else(|| find_instance_type(a, sym, ty_args))
        }
        TermNode::Lam(_, b) => find_instance_type(b, sym, ty_args),
        _ => None,
    }
}

/// Application of two normal terms, yielding a normal term.
fn app_norm(f: &Term, a: &Term) -> Term {
    match f.node() {
        TermNode::Lam(_, body) => {
            let inst = instantiate(body, a, 0);
            normalize_raw(&inst)
        }
        _ => Term::mk(TermNode::App(f.clone(), a.clone())),
    }
}

/// λ-abstraction over a normal body, η-reducing at the top when possible.
fn lam_norm(ty: Type, body: Term) -> Term {
    if let TermNode::App(g, a) = body.node() {
        if let TermNode::Bound { index: 0, .. } = a.node() {
            if !has_loose_index(g, 0) {
                return shift(g, -1, 0);
            }
        }
    }
    Term::mk(TermNode::Lam(ty, body))
}

/// Full normalization of a term that may contain redexes (only reachable
/// internally, after instantiation).
fn normalize_raw(t: &Term) -> Term {
    match t.node() {
        TermNode::Var(_) | TermNode::Bound { .. } | TermNode::Const { .. } => t.clone(),
        TermNode::App(f, a) => {
            let f = normalize_raw(f);
            let a = normalize_raw(a);
            app_norm(&f, &a)
        }
        TermNode::Lam(ty, b) => lam_norm(ty.clone(), normalize_raw(b)),
    }
}

fn has_loose_index(t: &Term, index: u32) -> bool {
    match t.node() {
        TermNode::Bound { index: i, .. } => *i == index,
        TermNode::App(f, a) => has_loose_index(f, index) || has_loose_index(a, index),
        TermNode::Lam(_, b) => has_loose_index(b, index + 1),
        _ => false,
    }
}

fn has_loose_at_or_above(t: &Term, depth: u32) -> bool {
    match t.node() {
        TermNode::Bound { index, .. } => *index >= depth,
        TermNode::App(f, a) => has_loose_at_or_above(f, depth) || has_loose_at_or_above(a, depth),
        TermNode::Lam(_, b) => has_loose_at_or_above(b, depth + 1),
        _ => false,
    }
}

fn shift(t: &Term, delta: i64, cutoff: u32) -> Term {
    match t.node() {
        TermNode::Bound { index, ty } => {
            if *index >= cutoff {
                let ni = *index as i64 + delta;
                debug_assert!(ni >= 0);
                Term::bound(ni as u32, ty.clone())
            } else {
                t.clone()
            }
        }
        TermNode::App(f, a) => Term::mk(TermNode::App(
            shift(f, delta, cutoff),
            shift(a, delta, cutoff),
        )),
        TermNode::Lam(ty, b) => Term::mk(TermNode::Lam(ty.clone(), shift(b, delta, cutoff + 1))),
        _ => t.clone(),
    }
}

/// Replaces index `depth` in `body` (seen from under `depth` binders) by `arg`
/// and lowers the indices above it.
fn instantiate(body: &Term, arg: &Term, depth: u32) -> Term {
    match body.node() {
        TermNode::Bound { index, ty } => {
            if *index == depth {
                shift(arg, depth as i64, 0)
            } else if *index > depth {
                Term::bound(index - 1, ty.clone())
            } else {
                body.clone()
            }
        }
        TermNode::App(f, a) => Term::mk(TermNode::App(
            instantiate(f, arg, depth),
            instantiate(a, arg, depth),
        )),
        TermNode::Lam(ty, b) => Term::mk(TermNode::Lam(ty.clone(), instantiate(b, arg, depth + 1))),
        _ => body.clone(),
    }
}

fn abstract_var(t: &Term, v: &Var, depth: u32) -> Term {
    match t.node() {
        TermNode::Var(w) if w == v => Term::bound(depth, v.ty.clone()),
        TermNode::App(f, a) => Term::mk(TermNode::App(
            abstract_var(f, v, depth),
            abstract_var(a, v, depth),
        )),
        TermNode::Lam(ty, b) => Term::mk(TermNode::Lam(ty.clone(), abstract_var(b, v, depth + 1))),
        _ => t.clone(),
    }
}

/// Unnormalized λ-term with named binders, as produced by a front end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTerm {
    Free(Var),
    /// Reference to an enclosing [`RawTerm::Lam`] binder by name.
    Bound(Name),
    Const {
        name: Name,
        ty_args: Vec<Type>,
        ty: Type,
    },
    App(Box<RawTerm>, Box<RawTerm>),
    Lam(Name, Type, Box<RawTerm>),
}

impl RawTerm {
    pub fn app(f: RawTerm, a: RawTerm) -> RawTerm {
        RawTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: impl Into<Name>, ty: Type, body: RawTerm) -> RawTerm {
        RawTerm::Lam(x.into(), ty, Box::new(body))
    }

    pub fn constant(name: impl Into<Name>, ty: Type) -> RawTerm {
        RawTerm::Const {
            name: name.into(),
            ty_args: Vec::new(),
            ty,
        }
    }
}

/// Type-checks a raw term and brings it into η-short β-normal form.
pub fn beta_eta_normalize(raw: &RawTerm) -> Result<Term, TypeError> {
    let mut env: Vec<(Name, Type)> = Vec::new();
    to_term(raw, &mut env)
}

fn to_term(raw: &RawTerm, env: &mut Vec<(Name, Type)>) -> Result<Term, TypeError> {
    match raw {
        RawTerm::Free(v) => Ok(Term::var(v.clone())),
        RawTerm::Bound(name) => {
            let pos = env
                .iter()
                .rposition(|(n, _)| n == name)
                .ok_or_else(|| TypeError::UnboundBinder(name.clone()))?;
            let index = (env.len() - 1 - pos) as u32;
            Ok(Term::bound(index, env[pos].1.clone()))
        }
        RawTerm::Const { name, ty_args, ty } => {
            Ok(Term::constant(name.clone(), ty_args.clone(), ty.clone()))
        }
        RawTerm::App(f, a) => {
            let f = to_term(f, env)?;
            let a = to_term(a, env)?;
            Term::try_app(&f, &a)
        }
        RawTerm::Lam(x, ty, body) => {
            env.push((x.clone(), ty.clone()));
            let b = to_term(body, env);
            env.pop();
            Ok(lam_norm(ty.clone(), b?))
        }
    }
}

impl Term {
    /// Inverse of [`beta_eta_normalize`] up to binder names (`x0`, `x1`, ... by depth).
    pub fn to_raw(&self) -> RawTerm {
        fn go(t: &Term, depth: u32) -> RawTerm {
            match t.node() {
                TermNode::Var(v) => RawTerm::Free(v.clone()),
                TermNode::Bound { index, .. } => {
                    RawTerm::Bound(format!("x{}", depth - 1 - index).into())
                }
                TermNode::Const { name, ty_args, ty } => RawTerm::Const {
                    name: name.clone(),
                    ty_args: ty_args.clone(),
                    ty: ty.clone(),
                },
                TermNode::App(f, a) => RawTerm::app(go(f, depth), go(a, depth)),
                TermNode::Lam(ty, b) => {
                    RawTerm::lam(format!("x{depth}"), ty.clone(), go(b, depth + 1))
                }
            }
        }
        go(self, 0)
    }

    /// True when no β- or η-redex occurs anywhere.
    pub fn is_normal(&self) -> bool {
        match self.node() {
            TermNode::App(f, a) => !f.is_lam() && f.is_normal() && a.is_normal(),
            TermNode::Lam(_, b) => {
                let eta = match b.node() {
                    TermNode::App(g, a) => {
                        matches!(a.node(), TermNode::Bound { index: 0, .. })
                            && !has_loose_index(g, 0)
                    }
                    _ => false,
                };
                !eta && b.is_normal()
            }
            _ => true,
        }
    }
}

/// Display names for logical symbols.
fn logical_display(name: &str) -> Option<&'static str> {
    Some(match name {
        "true" => "⊤",
        "false" => "⊥",
        "not" => "¬",
        "and" => "∧",
        "or" => "∨",
        "imp" => "→",
        "all" => "∀",
        "ex" => "∃",
        "eqb" => "≈",
        "neqb" => "≉",
        "choice" => "ε",
        _ => return None,
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f, &mut Vec::new(), false)
    }
}

fn fmt_term(
    t: &Term,
    f: &mut fmt::Formatter<'_>,
    names: &mut Vec<String>,
    paren: bool,
) -> fmt::Result {
    match t.node() {
        TermNode::Var(v) => write!(f, "{}", v.name),
        TermNode::Bound { index, .. } => {
            let i = names.len() as i64 - 1 - *index as i64;
            if i >= 0 {
                write!(f, "{}", names[i as usize])
            } else {
                write!(f, "#{index}")
            }
        }
        TermNode::Const { name, .. } => match logical_display(name) {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "{name}"),
        },
        TermNode::Lam(..) => {
            if paren {
                write!(f, "(")?;
            }
            write!(f, "λ")?;
            let mut cur = t;
            let mut pushed = 0;
            while let TermNode::Lam(_, b) = cur.node() {
                let n = format!("x{}", names.len());
                if pushed > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{n}")?;
                names.push(n);
                pushed += 1;
                cur = b;
            }
            write!(f, ". ")?;
            fmt_term(cur, f, names, false)?;
            names.truncate(names.len() - pushed);
            if paren {
                write!(f, ")")?;
            }
            Ok(())
        }
        TermNode::App(..) => {
            let (head, args) = t.strip_args();
            if paren {
                write!(f, "(")?;
            }
            let binop = head
                .as_const()
                .and_then(|(n, _)| {
                    matches!(&**n, "and" | "or" | "imp" | "eqb" | "neqb")
                        .then(|| logical_display(n))
                })
                .flatten();
            if let (Some(op), 2) = (binop, args.len()) {
                fmt_term(args[0], f, names, true)?;
                write!(f, " {op} ")?;
                fmt_term(args[1], f, names, true)?;
            } else {
                fmt_term(head, f, names, true)?;
                for a in args {
                    write!(f, " ")?;
                    fmt_term(a, f, names, true)?;
                }
            }
            if paren {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}
