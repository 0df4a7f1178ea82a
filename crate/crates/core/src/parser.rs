//! Reader for the `.chol` clausal format.
//!
//! ```text
//! problem := item*
//! item    := (type NAME NAT) | (sym NAME scheme) | (clause (vars (NAME type)*) lit*)
//! scheme  := type | (pi (NAME*) type)
//! type    := NAME | (NAME type+) | (-> type+ type)
//! lit     := (eq term term) | (neq term term) | (pos term) | (neg term)
//! term    := NAME | (inst NAME type+) | (app term term+) | (lam (NAME type) term)
//! ```
//!
//! Comments run from `;` to the end of the line. Inside a clause, a type name
//! that is not a declared constructor denotes a type variable.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::clause::{Clause, ClauseSet, Literal};
use crate::signature::Signature;
use crate::term::{Term, Var};
use crate::types::{Name, Type, TypeScheme, ARROW};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("lexical error: {0}")]
    Lexical(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(Name),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("ill-typed term: {0}")]
    IllTyped(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(Name),
    #[error("missing type arguments for `{0}`")]
    MissingTypeArguments(Name),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

fn err<T>(kind: ParseErrorKind, span: SourceSpan) -> Result<T, ParseError> {
    Err(ParseError { kind, span })
}

pub const KEYWORDS: [&str; 12] = [
    "type", "sym", "clause", "vars", "eq", "neq", "pos", "neg", "inst", "app", "lam", "pi",
];

/// S-expression node with its source span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, SourceSpan),
    Arrow(SourceSpan),
    List(Vec<Sexp>, SourceSpan),
}

impl Sexp {
    pub fn span(&self) -> SourceSpan {
        match self {
            Sexp::Atom(_, s) | Sexp::Arrow(s) | Sexp::List(_, s) => *s,
        }
    }

    fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            _ => None,
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '-')
}

/// Splits `text` into top-level s-expressions.
pub fn read_sexps(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let (mut line, mut col) = (1usize, 1usize);
    let mut stack: Vec<(Vec<Sexp>, SourceSpan)> = Vec::new();
    let mut top = Vec::new();
    let end_of = |k: usize| bytes.get(k).map(|(o, _)| *o).unwrap_or(text.len());

    while i < bytes.len() {
        let (off, ch) = bytes[i];
        let here = SourceSpan {
            start: off,
            end: off + ch.len_utf8(),
            line,
            column: col,
        };
        if ch == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if ch == ';' {
            while i < bytes.len() && bytes[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let node = match ch {
            '(' => {
                stack.push((Vec::new(), here));
                col += 1;
                i += 1;
                continue;
            }
            ')' => {
                let Some((items, open)) = stack.pop() else {
                    return err(ParseErrorKind::Syntax("unbalanced `)`".into()), here);
                };
                col += 1;
                i += 1;
                Sexp::List(
                    items,
                    SourceSpan {
                        end: here.end,
                        ..open
                    },
                )
            }
            '-' if bytes.get(i + 1).map(|b| b.1) == Some('>') => {
                i += 2;
                col += 2;
                Sexp::Arrow(SourceSpan {
                    end: off + 2,
                    ..here
                })
            }
            c if is_name_char(c) => {
                let start = i;
                while i < bytes.len()
                    && is_name_char(bytes[i].1)
                    && !(bytes[i].1 == '-' && bytes.get(i + 1).map(|b| b.1) == Some('>'))
                {
                    i += 1;
                }
                col += i - start;
                let end = end_of(i);
                Sexp::Atom(text[off..end].to_string(), SourceSpan { end, ..here })
            }
            c => {
                return err(
                    ParseErrorKind::Lexical(format!("unexpected character `{c}`")),
                    here,
                )
            }
        };
        match stack.last_mut() {
            Some((items, _)) => items.push(node),
            None => top.push(node),
        }
    }
    if let Some((_, open)) = stack.pop() {
        return err(ParseErrorKind::Syntax("unclosed `(`".into()), open);
    }
    Ok(top)
}

fn expect_name(s: &Sexp) -> Result<Name, ParseError> {
    match s {
        Sexp::Atom(a, span) => {
            if KEYWORDS.contains(&a.as_str()) {
                err(
                    ParseErrorKind::Syntax(format!("keyword `{a}` used as a name")),
                    *span,
                )
            } else {
                Ok(a.as_str().into())
            }
        }
        other => err(
            ParseErrorKind::Syntax("expected a name".into()),
            other.span(),
        ),
    }
}

fn expect_list(s: &Sexp) -> Result<&[Sexp], ParseError> {
    match s {
        Sexp::List(items, _) => Ok(items),
        other => err(
            ParseErrorKind::Syntax("expected a parenthesized form".into()),
            other.span(),
        ),
    }
}

/// How undeclared type names are resolved.
enum TypeScope<'a> {
    /// Only the listed parameters are variables.
    Params(&'a [Name]),
    /// Any undeclared name is a variable.
    Implicit,
}

fn parse_type(sig: &Signature, scope: &TypeScope<'_>, s: &Sexp) -> Result<Type, ParseError> {
    match s {
        Sexp::Atom(_, span) => {
            let name: Name = expect_name(s)?;
            if let TypeScope::Params(ps) = scope {
                if ps.contains(&name) {
                    return Ok(Type::Var(name));
                }
            }
            match sig.type_arity(&name) {
                Some(0) => Ok(Type::base(name)),
                Some(n) => err(
                    ParseErrorKind::Arity(format!(
                        "type constructor `{name}` expects {n} arguments, got 0"
                    )),
                    *span,
                ),
                None => match scope {
                    TypeScope::Implicit => Ok(Type::Var(name)),
                    TypeScope::Params(_) => err(ParseErrorKind::UnknownIdentifier(name), *span),
                },
            }
        }
        Sexp::Arrow(span) => err(
            ParseErrorKind::Syntax("`->` outside a type application".into()),
            *span,
        ),
        Sexp::List(items, span) => {
            let Some((head, rest)) = items.split_first() else {
                return err(ParseErrorKind::Syntax("empty type".into()), *span);
            };
            if rest.is_empty() {
                return err(
                    ParseErrorKind::Syntax("type application without arguments".into()),
                    *span,
                );
            }
            let args = rest
                .iter()
                .map(|a| parse_type(sig, scope, a))
                .collect::<Result<Vec<_>, _>>()?;
            match head {
                Sexp::Arrow(_) => {
                    if args.len() < 2 {
                        return err(
                            ParseErrorKind::Arity("`->` needs at least two types".into()),
                            *span,
                        );
                    }
                    let mut args = args;
                    let result = args.pop().expect("nonempty");
                    Ok(Type::arrows(args, result))
                }
                _ => {
                    let name = expect_name(head)?;
                    match sig.type_arity(&name) {
                        None => err(ParseErrorKind::UnknownIdentifier(name), head.span()),
                        Some(n) if n != args.len() || &*name == ARROW => err(
                            ParseErrorKind::Arity(format!(
                                "type constructor `{name}` expects {n} arguments, got {}",
                                args.len()
                            )),
                            *span,
                        ),
                        Some(_) => Ok(Type::Con(name, args)),
                    }
                }
            }
        }
    }
}

fn parse_scheme(sig: &Signature, s: &Sexp) -> Result<TypeScheme, ParseError> {
    if let Sexp::List(items, span) = s {
        if items.first().and_then(Sexp::as_atom) == Some("pi") {
            if items.len() != 3 {
                return err(
                    ParseErrorKind::Syntax("expected (pi (NAME*) type)".into()),
                    *span,
                );
            }
            let params = expect_list(&items[1])?
                .iter()
                .map(expect_name)
                .collect::<Result<Vec<_>, _>>()?;
            let body = parse_type(sig, &TypeScope::Params(&params), &items[2])?;
            return TypeScheme::new(params, body).map_err(|e| ParseError {
                kind: ParseErrorKind::Syntax(e.to_string()),
                span: *span,
            });
        }
    }
    let body = parse_type(sig, &TypeScope::Params(&[]), s)?;
    Ok(TypeScheme::mono(body))
}

/// Term-level scope: clause variables plus enclosing λ-binders.
pub struct TermScope {
    vars: BTreeMap<Name, Var>,
    binders: Vec<(Name, Var)>,
    next_binder: usize,
}

impl TermScope {
    pub fn new(vars: impl IntoIterator<Item = Var>) -> Self {
        TermScope {
            vars: vars.into_iter().map(|v| (v.name.clone(), v)).collect(),
            binders: Vec::new(),
            next_binder: 0,
        }
    }

    fn lookup(&self, name: &str) -> Option<&Var> {
        self.binders
            .iter()
            .rev()
            .find(|(n, _)| &**n == name)
            .map(|(_, v)| v)
            .or_else(|| self.vars.get(name))
    }
}

fn instance(
    sig: &Signature,
    name: &Name,
    ty_args: Vec<Type>,
    span: SourceSpan,
) -> Result<Term, ParseError> {
    let Some(scheme) = sig.scheme(name) else {
        return err(ParseErrorKind::UnknownIdentifier(name.clone()), span);
    };
    if ty_args.is_empty() && scheme.arity() > 0 {
        return err(ParseErrorKind::MissingTypeArguments(name.clone()), span);
    }
    for t in &ty_args {
        sig.check_type(t).map_err(|e| ParseError {
            kind: ParseErrorKind::Arity(e.to_string()),
            span,
        })?;
    }
    let ty = scheme.instantiate(&ty_args).map_err(|e| ParseError {
        kind: ParseErrorKind::Arity(format!("`{name}`: {e}")),
        span,
    })?;
    Ok(Term::constant(name.clone(), ty_args, ty))
}

fn apply_all(sig: &Signature, scope: &mut TermScope, items: &[Sexp]) -> Result<Term, ParseError> {
    let mut f = typecheck_term(sig, scope, &items[0])?;
    for a in &items[1..] {
        let arg = typecheck_term(sig, scope, a)?;
        f = Term::try_app(&f, &arg).map_err(|e| ParseError {
            kind: ParseErrorKind::IllTyped(e.to_string()),
            span: a.span(),
        })?;
    }
    Ok(f)
}

/// Type-checks a term form and returns it in normal form.
pub fn typecheck_term(
    sig: &Signature,
    scope: &mut TermScope,
    s: &Sexp,
) -> Result<Term, ParseError> {
    match s {
        Sexp::Atom(_, span) => {
            let name = expect_name(s)?;
            if let Some(v) = scope.lookup(&name) {
                return Ok(Term::var(v.clone()));
            }
            instance(sig, &name, Vec::new(), *span)
        }
        Sexp::Arrow(span) => err(ParseErrorKind::Syntax("`->` is not a term".into()), *span),
        Sexp::List(items, span) => {
            let span = *span;
            let Some(head) = items.first().and_then(Sexp::as_atom) else {
                return err(
                    ParseErrorKind::Syntax("expected inst, app or lam".into()),
                    span,
                );
            };
            match head {
                "inst" => {
                    if items.len() < 3 {
                        return err(
                            ParseErrorKind::Syntax("expected (inst NAME type+)".into()),
                            span,
                        );
                    }
                    let name = expect_name(&items[1])?;
                    let args = items[2..]
                        .iter()
                        .map(|t| parse_type(sig, &TypeScope::Implicit, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    instance(sig, &name, args, items[1].span())
                }
                "app" => {
                    if items.len() < 3 {
                        return err(
                            ParseErrorKind::Syntax("expected (app term term+)".into()),
                            span,
                        );
                    }
                    apply_all(sig, scope, &items[1..])
                }
                "lam" => {
                    if items.len() != 3 {
                        return err(
                            ParseErrorKind::Syntax("expected (lam (NAME type) term)".into()),
                            span,
                        );
                    }
                    let binder = expect_list(&items[1])?;
                    if binder.len() != 2 {
                        return err(
                            ParseErrorKind::Syntax("expected (NAME type)".into()),
                            items[1].span(),
                        );
                    }
                    let name = expect_name(&binder[0])?;
                    let ty = parse_type(sig, &TypeScope::Implicit, &binder[1])?;
                    let var = Var::new(format!("λ#{}", scope.next_binder), ty);
                    scope.next_binder += 1;
                    scope.binders.push((name, var.clone()));
                    let body = typecheck_term(sig, scope, &items[2]);
                    scope.binders.pop();
                    Ok(Term::lam(&var, &body?))
                }
                // (f a b) abbreviates (app f a b)
                other if items.len() >= 2 && !KEYWORDS.contains(&other) => {
                    apply_all(sig, scope, items)
                }
                other => err(
                    ParseErrorKind::Syntax(format!("unknown term form `{other}`")),
                    span,
                ),
            }
        }
    }
}

fn parse_literal(sig: &Signature, scope: &mut TermScope, s: &Sexp) -> Result<Literal, ParseError> {
    let items = expect_list(s)?;
    let span = s.span();
    let Some(kind) = items.first().and_then(Sexp::as_atom) else {
        return err(
            ParseErrorKind::Syntax("expected eq, neq, pos or neg".into()),
            span,
        );
    };
    match kind {
        "eq" | "neq" => {
            if items.len() != 3 {
                return err(
                    ParseErrorKind::Syntax(format!("expected ({kind} term term)")),
                    span,
                );
            }
            let l = typecheck_term(sig, scope, &items[1])?;
            let r = typecheck_term(sig, scope, &items[2])?;
            Literal::new(kind == "eq", l, r).map_err(|e| ParseError {
                kind: ParseErrorKind::IllTyped(e.to_string()),
                span,
            })
        }
        "pos" | "neg" => {
            if items.len() != 2 {
                return err(
                    ParseErrorKind::Syntax(format!("expected ({kind} term)")),
                    span,
                );
            }
            let t = typecheck_term(sig, scope, &items[1])?;
            if !t.is_formula() {
                return err(
                    ParseErrorKind::IllTyped(format!(
                        "`{kind}` expects a formula, got type {}",
                        t.ty()
                    )),
                    items[1].span(),
                );
            }
            Ok(Literal::atom(kind == "pos", t))
        }
        other => err(
            ParseErrorKind::Syntax(format!("unknown literal form `{other}`")),
            span,
        ),
    }
}

fn parse_clause(sig: &Signature, items: &[Sexp], span: SourceSpan) -> Result<Clause, ParseError> {
    let Some(vars_form) = items.get(1) else {
        return err(
            ParseErrorKind::Syntax("expected (clause (vars ...) lit*)".into()),
            span,
        );
    };
    let vars_items = expect_list(vars_form)?;
    if vars_items.first().and_then(Sexp::as_atom) != Some("vars") {
        return err(
            ParseErrorKind::Syntax("expected (vars (NAME type)*)".into()),
            vars_form.span(),
        );
    }
    let mut vars: Vec<Var> = Vec::new();
    for decl in &vars_items[1..] {
        let pair = expect_list(decl)?;
        if pair.len() != 2 {
            return err(
                ParseErrorKind::Syntax("expected (NAME type)".into()),
                decl.span(),
            );
        }
        let name = expect_name(&pair[0])?;
        if vars.iter().any(|v| v.name == name) {
            return err(ParseErrorKind::Duplicate(name), pair[0].span());
        }
        let ty = parse_type(sig, &TypeScope::Implicit, &pair[1])?;
        vars.push(Var::new(name, ty));
    }
    let mut scope = TermScope::new(vars);
    let lits = items[2..]
        .iter()
        .map(|l| parse_literal(sig, &mut scope, l))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Clause::new(lits))
}

/// Parses a whole problem. Declarations must precede their uses.
pub fn parse_problem(text: &str) -> Result<ClauseSet, ParseError> {
    let mut sig = Signature::new();
    let mut clauses = Vec::new();
    for item in read_sexps(text)? {
        let span = item.span();
        let items = expect_list(&item)?;
        let Some(kind) = items.first().and_then(Sexp::as_atom) else {
            return err(
                ParseErrorKind::Syntax("expected type, sym or clause".into()),
                span,
            );
        };
        match kind {
            "type" => {
                if items.len() != 3 {
                    return err(
                        ParseErrorKind::Syntax("expected (type NAME NAT)".into()),
                        span,
                    );
                }
                let name = expect_name(&items[1])?;
                let arity = items[2]
                    .as_atom()
                    .and_then(|a| a.parse::<usize>().ok())
                    .ok_or_else(|| ParseError {
                        kind: ParseErrorKind::Syntax("expected an arity".into()),
                        span: items[2].span(),
                    })?;
                sig.declare_type(name.clone(), arity)
                    .map_err(|_| ParseError {
                        kind: ParseErrorKind::Duplicate(name),
                        span: items[1].span(),
                    })?;
            }
            "sym" => {
                if items.len() != 3 {
                    return err(
                        ParseErrorKind::Syntax("expected (sym NAME scheme)".into()),
                        span,
                    );
                }
                let name = expect_name(&items[1])?;
                let scheme = parse_scheme(&sig, &items[2])?;
                sig.declare_symbol(name.clone(), scheme)
                    .map_err(|_| ParseError {
                        kind: ParseErrorKind::Duplicate(name),
                        span: items[1].span(),
                    })?;
            }
            "clause" => clauses.push(parse_clause(&sig, items, span)?),
            other => {
                return err(
                    ParseErrorKind::Syntax(format!("unknown item `{other}`")),
                    items[0].span(),
                )
            }
        }
    }
    Ok(ClauseSet::new(Arc::new(sig), clauses))
}

/// Parses a single clause against an existing signature.
pub fn parse_clause_with(sig: &Signature, text: &str) -> Result<Clause, ParseError> {
    let forms = read_sexps(text)?;
    let [form] = forms.as_slice() else {
        return err(
            ParseErrorKind::Syntax("expected exactly one clause".into()),
            SourceSpan::default(),
        );
    };
    let items = expect_list(form)?;
    if items.first().and_then(Sexp::as_atom) != Some("clause") {
        return err(
            ParseErrorKind::Syntax("expected (clause ...)".into()),
            form.span(),
        );
    }
    parse_clause(sig, items, form.span())
}
