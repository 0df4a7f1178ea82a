//! Rank-1 polymorphic types, type schemes and first-order unification on types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Interned-ish identifier used for type constructors, symbols and variables.
pub type Name = Arc<str>;

/// The Boolean type constructor.
pub const BOOL: &str = "o";
/// The function type constructor, printed infix.
pub const ARROW: &str = "->";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Var(Name),
    Con(Name, Vec<Type>),
}

impl Type {
    pub fn var(name: impl Into<Name>) -> Type {
        Type::Var(name.into())
    }

    pub fn base(name: impl Into<Name>) -> Type {
        Type::Con(name.into(), Vec::new())
    }

    pub fn con(name: impl Into<Name>, args: Vec<Type>) -> Type {
        Type::Con(name.into(), args)
    }

    pub fn bool() -> Type {
        Type::base(BOOL)
    }

    pub fn arrow(from: Type, to: Type) -> Type {
        Type::Con(ARROW.into(), vec![from, to])
    }

    /// `a1 -> a2 -> ... -> result`
    pub fn arrows(args: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| Type::arrow(arg, acc))
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, Type::Con(c, args) if &**c == BOOL && args.is_empty())
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Con(c, args) if &**c == ARROW && args.len() == 2 => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    /// Splits `a1 -> ... -> an -> r` into `([a1..an], r)` with `r` not an arrow.
    pub fn split_arrows(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut t = self;
        while let Some((a, r)) = t.as_arrow() {
            args.push(a);
            t = r;
        }
        (args, t)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Type::Var(_) => false,
            Type::Con(_, args) => args.iter().all(Type::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Type::Var(v) => {
                out.insert(v.clone());
            }
            Type::Con(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Type::Var(v) => &**v == var,
            Type::Con(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    pub fn apply(&self, subst: &TypeSubst) -> Type {
        if subst.is_empty() {
            return self.clone();
        }
        match self {
            Type::Var(v) => match subst.get(v) {
                Some(t) => t.clone(),
                None => self.clone(),
            },
            Type::Con(c, args) => {
                Type::Con(c.clone(), args.iter().map(|a| a.apply(subst)).collect())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Type::Var(_) => 0,
            Type::Con(_, args) => 1 + args.iter().map(Type::depth).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(v) => write!(f, "{v}"),
            Type::Con(c, args) if args.is_empty() => write!(f, "{c}"),
            _ => {
                if let Some((a, r)) = self.as_arrow() {
                    if a.as_arrow().is_some() {
                        write!(f, "({a}) → {r}")
                    } else {
                        write!(f, "{a} → {r}")
                    }
                } else if let Type::Con(c, args) = self {
                    write!(f, "{c}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                } else {
                    unreachable!()
                }
            }
        }
    }
}

/// `Πᾱ. τ`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeScheme {
    pub params: Vec<Name>,
    pub body: Type,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("type parameter `{0}` bound twice")]
    DuplicateParam(Name),
    #[error("type variable `{0}` is not bound by the scheme")]
    UnboundVar(Name),
    #[error("expected {expected} type arguments, got {actual}")]
    ArgCount { expected: usize, actual: usize },
}

impl TypeScheme {
    pub fn mono(body: Type) -> Self {
        TypeScheme {
            params: Vec::new(),
            body,
        }
    }

    pub fn new(params: Vec<Name>, body: Type) -> Result<Self, SchemeError> {
        let mut seen = BTreeSet::new();
        for p in &params {
            if !seen.insert(p.clone()) {
                return Err(SchemeError::DuplicateParam(p.clone()));
            }
        }
        for v in body.vars() {
            if !seen.contains(&v) {
                return Err(SchemeError::UnboundVar(v));
            }
        }
        Ok(TypeScheme { params, body })
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn instantiate(&self, args: &[Type]) -> Result<Type, SchemeError> {
        if args.len() != self.params.len() {
            return Err(SchemeError::ArgCount {
                expected: self.params.len(),
                actual: args.len(),
            });
        }
        let subst: TypeSubst = self
            .params
            .iter()
            .cloned()
            .zip(args.iter().cloned())
            .collect();
        Ok(self.body.apply(&subst))
    }

    /// Some instance has the shape `υ1 → ⋯ → υn → o`: the final target is `o`
    /// or a type variable that can be instantiated to `o`.
    pub fn is_predicate(&self) -> bool {
        let (_, target) = self.body.split_arrows();
        target.is_bool() || matches!(target, Type::Var(_))
    }
}

impl fmt::Display for TypeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            write!(f, "{}", self.body)
        } else {
            write!(f, "Π")?;
            for p in &self.params {
                write!(f, "{p} ")?;
            }
            write!(f, ". {}", self.body)
        }
    }
}

pub type TypeSubst = BTreeMap<Name, Type>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type argument lists differ in length ({left} vs {right})")]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

/// Most general unifier of two type lists, elementwise. The result is
/// idempotent: no variable in its domain occurs in its range.
pub fn unify_types(left: &[Type], right: &[Type]) -> Result<Option<TypeSubst>, LengthMismatch> {
    if left.len() != right.len() {
        return Err(LengthMismatch {
            left: left.len(),
            right: right.len(),
        });
    }
    let mut subst = TypeSubst::new();
    let mut work: Vec<(Type, Type)> = left.iter().cloned().zip(right.iter().cloned()).collect();
    while let Some((a, b)) = work.pop() {
        let a = a.apply(&subst);
        let b = b.apply(&subst);
        match (a, b) {
            (Type::Var(x), Type::Var(y)) if x == y => {}
            (Type::Var(x), t) | (t, Type::Var(x)) => {
                if t.occurs(&x) {
                    return Ok(None);
                }
                bind(&mut subst, x, t);
            }
            (Type::Con(c, args), Type::Con(d, brgs)) => {
                if c != d || args.len() != brgs.len() {
                    return Ok(None);
                }
                work.extend(args.into_iter().zip(brgs));
            }
        }
    }
    Ok(Some(subst))
}

fn bind(subst: &mut TypeSubst, var: Name, ty: Type) {
    let single: TypeSubst = std::iter::once((var.clone(), ty.clone())).collect();
    for v in subst.values_mut() {
        *v = v.apply(&single);
    }
    subst.insert(var, ty);
}

/// One-way matching: binds variables of `pattern` only.
pub fn match_type(pattern: &Type, target: &Type, subst: &mut TypeSubst) -> bool {
    match pattern {
        Type::Var(v) => match subst.get(v) {
            Some(bound) => bound == target,
            None => {
                subst.insert(v.clone(), target.clone());
                true
            }
        },
        Type::Con(c, args) => match target {
            Type::Con(d, brgs) if c == d && args.len() == brgs.len() => {
                args.iter().zip(brgs).all(|(a, b)| match_type(a, b, subst))
            }
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: Type, b: Type) -> Type {
        Type::con("pair", vec![a, b])
    }

    #[test]
    fn mgu_of_pair_example() {
        let s = unify_types(
            &[pair(Type::var("A"), Type::base("nat"))],
            &[pair(Type::base("int"), Type::var("B"))],
        )
        .unwrap()
        .unwrap();
        assert_eq!(s.get("A"), Some(&Type::base("int")));
        assert_eq!(s.get("B"), Some(&Type::base("nat")));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn identical_variables_give_empty_unifier() {
        let s = unify_types(&[Type::var("A")], &[Type::var("A")])
            .unwrap()
            .unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn constructor_clash() {
        assert_eq!(
            unify_types(&[Type::base("int")], &[Type::base("bool")]).unwrap(),
            None
        );
    }

    #[test]
    fn occurs_check() {
        let t = Type::con("list", vec![Type::var("A")]);
        assert_eq!(unify_types(&[Type::var("A")], &[t]).unwrap(), None);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(unify_types(&[Type::var("A")], &[]).is_err());
    }

    #[test]
    fn chained_bindings_are_idempotent() {
        // A = B, B = list(C), C = int
        let s = unify_types(
            &[Type::var("A"), Type::var("B"), Type::var("C")],
            &[
                Type::var("B"),
                Type::con("list", vec![Type::var("C")]),
                Type::base("int"),
            ],
        )
        .unwrap()
        .unwrap();
        for v in s.values() {
            for k in s.keys() {
                assert!(!v.occurs(k), "{k} occurs in range {v}");
            }
        }
        let int_list = Type::con("list", vec![Type::base("int")]);
        assert_eq!(Type::var("A").apply(&s), int_list);
    }

    #[test]
    fn predicate_schemes() {
        let p = TypeScheme::mono(Type::arrows([Type::base("i")], Type::bool()));
        assert!(p.is_predicate());
        let id = TypeScheme::new(
            vec!["A".into()],
            Type::arrow(Type::var("A"), Type::var("A")),
        )
        .unwrap();
        assert!(id.is_predicate());
        let f = TypeScheme::mono(Type::arrow(Type::base("i"), Type::base("i")));
        assert!(!f.is_predicate());
    }

    #[test]
    fn scheme_rejects_unbound_variable() {
        assert!(TypeScheme::new(vec![], Type::var("A")).is_err());
        assert!(TypeScheme::new(vec!["A".into(), "A".into()], Type::var("A")).is_err());
    }
}
