//! Signatures: type constructors, symbol declarations, and the fixed logical
//! symbols.

use indexmap::IndexMap;
use thiserror::Error;

use crate::term::Term;
use crate::types::{Name, Type, TypeScheme, ARROW, BOOL};

pub const TRUE: &str = "true";
pub const FALSE: &str = "false";
pub const NOT: &str = "not";
pub const AND: &str = "and";
pub const OR: &str = "or";
pub const IMP: &str = "imp";
pub const ALL: &str = "all";
pub const EX: &str = "ex";
pub const EQB: &str = "eqb";
pub const NEQB: &str = "neqb";
pub const CHOICE: &str = "choice";

pub const LOGICAL_SYMBOLS: [&str; 11] =
    [TRUE, FALSE, NOT, AND, OR, IMP, ALL, EX, EQB, NEQB, CHOICE];

pub fn is_logical(name: &str) -> bool {
    LOGICAL_SYMBOLS.contains(&name)
}

/// Scheme of a logical symbol.
pub fn logical_scheme(name: &str) -> Option<TypeScheme> {
    let o = Type::bool;
    let a = || Type::var("A");
    let poly = |body: Type| TypeScheme {
        params: vec!["A".into()],
        body,
    };
    Some(match name {
        TRUE | FALSE => TypeScheme::mono(o()),
        NOT => TypeScheme::mono(Type::arrow(o(), o())),
        AND | OR | IMP => TypeScheme::mono(Type::arrows([o(), o()], o())),
        ALL | EX => poly(Type::arrow(Type::arrow(a(), o()), o())),
        EQB | NEQB => poly(Type::arrows([a(), a()], o())),
        CHOICE => poly(Type::arrow(Type::arrow(a(), o()), a())),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("`{0}` is declared twice")]
    Duplicate(Name),
    #[error("unknown type constructor `{0}`")]
    UnknownType(Name),
    #[error("type constructor `{name}` expects {expected} arguments, got {actual}")]
    Arity {
        name: Name,
        expected: usize,
        actual: usize,
    },
}

/// Declared type constructors and symbols, in declaration order. Logical
/// symbols are implicit and never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    types: IndexMap<Name, usize>,
    symbols: IndexMap<Name, TypeScheme>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_type(
        &mut self,
        name: impl Into<Name>,
        arity: usize,
    ) -> Result<(), SignatureError> {
        let name = name.into();
        if &*name == BOOL || &*name == ARROW || self.types.contains_key(&name) {
            return Err(SignatureError::Duplicate(name));
        }
        self.types.insert(name, arity);
        Ok(())
    }

    pub fn declare_symbol(
        &mut self,
        name: impl Into<Name>,
        scheme: TypeScheme,
    ) -> Result<(), SignatureError> {
        let name = name.into();
        if is_logical(&name) || self.symbols.contains_key(&name) {
            return Err(SignatureError::Duplicate(name));
        }
        self.check_type(&scheme.body)?;
        self.symbols.insert(name, scheme);
        Ok(())
    }

    pub fn type_arity(&self, name: &str) -> Option<usize> {
        match name {
            BOOL => Some(0),
            ARROW => Some(2),
            _ => self.types.get(name).copied(),
        }
    }

    /// Checks every constructor is declared with matching arity.
    pub fn check_type(&self, ty: &Type) -> Result<(), SignatureError> {
        match ty {
            Type::Var(_) => Ok(()),
            Type::Con(c, args) => {
                let expected = self
                    .type_arity(c)
                    .ok_or_else(|| SignatureError::UnknownType(c.clone()))?;
                if expected != args.len() {
                    return Err(SignatureError::Arity {
                        name: c.clone(),
                        expected,
                        actual: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_type(a))
            }
        }
    }

    pub fn scheme(&self, name: &str) -> Option<TypeScheme> {
        self.symbols
            .get(name)
            .cloned()
            .or_else(|| logical_scheme(name))
    }

    pub fn declared_scheme(&self, name: &str) -> Option<&TypeScheme> {
        self.symbols.get(name)
    }

    pub fn types(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.types.iter().map(|(n, a)| (n, *a))
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Name, &TypeScheme)> {
        self.symbols.iter()
    }

    /// Declared symbols with a predicate-shaped scheme, in declaration order.
    pub fn predicate_symbols(&self) -> impl Iterator<Item = &Name> {
        self.symbols
            .iter()
            .filter(|(_, s)| s.is_predicate())
            .map(|(n, _)| n)
    }

    pub fn is_predicate_symbol(&self, name: &str) -> bool {
        self.symbols.get(name).is_some_and(TypeScheme::is_predicate)
    }

    pub fn declaration_index(&self, name: &str) -> Option<usize> {
        self.symbols.get_index_of(name)
    }

    /// Instance `name⟨ty_args⟩` as a term.
    pub fn instance(&self, name: &str, ty_args: Vec<Type>) -> Option<Term> {
        let scheme = self.scheme(name)?;
        let ty = scheme.instantiate(&ty_args).ok()?;
        Some(Term::constant(name, ty_args, ty))
    }
}

/// Builders for terms over the logical symbols.
pub mod logic {
    use super::*;

    pub fn top() -> Term {
        Term::constant(TRUE, vec![], Type::bool())
    }

    pub fn bot() -> Term {
        Term::constant(FALSE, vec![], Type::bool())
    }

    pub fn is_top(t: &Term) -> bool {
        t.is_const(TRUE)
    }

    pub fn is_bot(t: &Term) -> bool {
        t.is_const(FALSE)
    }

    fn connective(name: &str) -> Term {
        Term::constant(name, vec![], logical_scheme(name).expect("logical").body)
    }

    pub fn not(t: &Term) -> Term {
        Term::app(&connective(NOT), t)
    }

    pub fn or(a: &Term, b: &Term) -> Term {
        Term::apps(&connective(OR), [a, b])
    }

    pub fn and(a: &Term, b: &Term) -> Term {
        Term::apps(&connective(AND), [a, b])
    }

    /// Right-nested disjunction; `⊥` when empty.
    pub fn disj(terms: &[Term]) -> Term {
        match terms.split_last() {
            None => bot(),
            Some((last, init)) => init.iter().rev().fold(last.clone(), |acc, t| or(t, &acc)),
        }
    }

    fn poly(name: &str, ty: &Type) -> Term {
        let scheme = logical_scheme(name).expect("logical");
        let inst = scheme
            .instantiate(std::slice::from_ref(ty))
            .expect("one parameter");
        Term::constant(name, vec![ty.clone()], inst)
    }

    pub fn eqb(a: &Term, b: &Term) -> Term {
        Term::apps(&poly(EQB, &a.ty()), [a, b])
    }

    pub fn neqb(a: &Term, b: &Term) -> Term {
        Term::apps(&poly(NEQB, &a.ty()), [a, b])
    }

    pub fn choice(ty: &Type) -> Term {
        poly(CHOICE, ty)
    }
}
