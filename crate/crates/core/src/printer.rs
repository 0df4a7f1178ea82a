//! Canonical writer for the `.chol` format.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::clause::{Clause, ClauseSet, Literal};
use crate::signature::Signature;
use crate::term::{Term, TermNode, Var};
use crate::types::{Name, Type, TypeScheme};

/// Declarations in declaration order, then one clause per line.
pub fn print_problem(set: &ClauseSet) -> String {
    print_with(&set.signature, &set.clauses)
}

pub fn print_with(sig: &Signature, clauses: &[Clause]) -> String {
    let mut out = String::new();
    for (name, arity) in sig.types() {
        writeln!(out, "(type {name} {arity})").unwrap();
    }
    for (name, scheme) in sig.symbols() {
        writeln!(out, "(sym {name} {})", scheme_str(scheme)).unwrap();
    }
    for c in clauses {
        out.push_str(&print_clause(sig, c));
        out.push('\n');
    }
    out
}

fn scheme_str(s: &TypeScheme) -> String {
    if s.params.is_empty() {
        type_str(&s.body, &BTreeMap::new())
    } else {
        let params: Vec<&str> = s.params.iter().map(|p| &**p).collect();
        format!(
            "(pi ({}) {})",
            params.join(" "),
            type_str(&s.body, &BTreeMap::new())
        )
    }
}

fn type_str(t: &Type, tvars: &BTreeMap<Name, String>) -> String {
    match t {
        Type::Var(v) => tvars.get(v).cloned().unwrap_or_else(|| v.to_string()),
        Type::Con(c, args) if args.is_empty() => c.to_string(),
        _ => {
            if t.as_arrow().is_some() {
                let (args, result) = t.split_arrows();
                let mut parts: Vec<String> = args.iter().map(|a| type_str(a, tvars)).collect();
                parts.push(type_str(result, tvars));
                format!("(-> {})", parts.join(" "))
            } else if let Type::Con(c, args) = t {
                let parts: Vec<String> = args.iter().map(|a| type_str(a, tvars)).collect();
                format!("({c} {})", parts.join(" "))
            } else {
                unreachable!()
            }
        }
    }
}

/// Smallest prefix (`base`, `base_`, ...) such that no `prefix<digits>` name is taken.
fn free_prefix(base: &str, taken: &dyn Fn(&str) -> bool, count: usize) -> String {
    let mut prefix = base.to_string();
    while (0..count).any(|k| taken(&format!("{prefix}{k}"))) {
        prefix.push('_');
    }
    prefix
}

struct Names {
    tvars: BTreeMap<Name, String>,
    vars: BTreeMap<Name, String>,
    bound_prefix: String,
}

fn collect_var_order(t: &Term, tvs: &mut Vec<Name>, vs: &mut Vec<Var>) {
    let push_ty = |ty: &Type, tvs: &mut Vec<Name>| {
        let mut found = Vec::new();
        ty_var_order(ty, &mut found);
        for v in found {
            if !tvs.contains(&v) {
                tvs.push(v);
            }
        }
    };
    match t.node() {
        TermNode::Var(v) => {
            push_ty(&v.ty, tvs);
            if !vs.contains(v) {
                vs.push(v.clone());
            }
        }
        TermNode::Bound { ty, .. } => push_ty(ty, tvs),
        TermNode::Const { ty_args, .. } => ty_args.iter().for_each(|a| push_ty(a, tvs)),
        TermNode::App(f, a) => {
            collect_var_order(f, tvs, vs);
            collect_var_order(a, tvs, vs);
        }
        TermNode::Lam(ty, b) => {
            push_ty(ty, tvs);
            collect_var_order(b, tvs, vs);
        }
    }
}

fn ty_var_order(t: &Type, out: &mut Vec<Name>) {
    match t {
        Type::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Type::Con(_, args) => args.iter().for_each(|a| ty_var_order(a, out)),
    }
}

fn lam_depth(t: &Term) -> usize {
    match t.node() {
        TermNode::Lam(_, b) => 1 + lam_depth(b),
        TermNode::App(f, a) => lam_depth(f).max(lam_depth(a)),
        _ => 0,
    }
}

fn canonical_names(sig: &Signature, c: &Clause) -> Names {
    let mut tvs = Vec::new();
    let mut vs = Vec::new();
    let mut depth = 0;
    for l in c.lits() {
        for side in l.sides() {
            collect_var_order(side, &mut tvs, &mut vs);
            depth = depth.max(lam_depth(side));
        }
    }
    let is_type = |n: &str| sig.type_arity(n).is_some();
    let is_sym = |n: &str| sig.scheme(n).is_some();
    let tprefix = free_prefix("A", &is_type, tvs.len());
    let vprefix = free_prefix("X", &is_sym, vs.len());
    let taken_bound = |n: &str| {
        is_sym(n)
            || (n.starts_with(&vprefix) && n[vprefix.len()..].chars().all(|c| c.is_ascii_digit()))
    };
    let bound_prefix = free_prefix("x", &taken_bound, depth);
    Names {
        tvars: tvs
            .into_iter()
            .enumerate()
            .map(|(k, v)| (v, format!("{tprefix}{k}")))
            .collect(),
        vars: vs
            .into_iter()
            .enumerate()
            .map(|(k, v)| (v.name, format!("{vprefix}{k}")))
            .collect(),
        bound_prefix,
    }
}

fn term_str(t: &Term, names: &Names, depth: usize, out: &mut String) {
    match t.node() {
        TermNode::Var(v) => out.push_str(&names.vars[&v.name]),
        TermNode::Bound { index, .. } => {
            write!(out, "{}{}", names.bound_prefix, depth - 1 - *index as usize).unwrap();
        }
        TermNode::Const { name, ty_args, .. } => {
            if ty_args.is_empty() {
                out.push_str(name);
            } else {
                write!(out, "(inst {name}").unwrap();
                for a in ty_args {
                    write!(out, " {}", type_str(a, &names.tvars)).unwrap();
                }
                out.push(')');
            }
        }
        TermNode::App(..) => {
            let (head, args) = t.strip_args();
            out.push_str("(app ");
            term_str(head, names, depth, out);
            for a in args {
                out.push(' ');
                term_str(a, names, depth, out);
            }
            out.push(')');
        }
        TermNode::Lam(ty, body) => {
            write!(
                out,
                "(lam ({}{depth} {}) ",
                names.bound_prefix,
                type_str(ty, &names.tvars)
            )
            .unwrap();
            term_str(body, names, depth + 1, out);
            out.push(')');
        }
    }
}

fn literal_str(l: &Literal, names: &Names, out: &mut String) {
    match l.formula_side() {
        Some(atom) => {
            out.push_str(if l.is_positive() { "(pos " } else { "(neg " });
            term_str(atom, names, 0, out);
            out.push(')');
        }
        None => {
            out.push_str(if l.is_positive() { "(eq " } else { "(neq " });
            term_str(l.left(), names, 0, out);
            out.push(' ');
            term_str(l.right(), names, 0, out);
            out.push(')');
        }
    }
}

pub fn print_clause(sig: &Signature, c: &Clause) -> String {
    let names = canonical_names(sig, c);
    let mut vars: Vec<(&String, Type)> = Vec::new();
    for v in c.free_vars() {
        vars.push((&names.vars[&v.name], v.ty.clone()));
    }
    vars.sort_by_key(|(n, _)| names_index(n));
    let mut out = String::from("(clause (vars");
    for (n, ty) in vars {
        write!(out, " ({n} {})", type_str(&ty, &names.tvars)).unwrap();
    }
    out.push(')');
    for l in c.lits() {
        out.push(' ');
        literal_str(l, &names, &mut out);
    }
    out.push(')');
    out
}

fn names_index(n: &str) -> usize {
    let digits: String = n.chars().rev().take_while(char::is_ascii_digit).collect();
    digits
        .chars()
        .rev()
        .collect::<String>()
        .parse()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;

    fn roundtrip(text: &str) -> String {
        let once = print_problem(&parse_problem(text).unwrap());
        let twice = print_problem(&parse_problem(&once).unwrap());
        assert_eq!(once, twice);
        once
    }

    #[test]
    fn declarations_only_for_empty_set() {
        let out = roundtrip("(type i 0) (sym a i)");
        assert_eq!(out, "(type i 0)\n(sym a i)\n");
    }

    #[test]
    fn canonical_clause() {
        let out = roundtrip("(type i 0) (sym p (-> i o)) (sym q (-> i o)) (sym f (-> i i)) (clause (vars (Zed i)) (neg (app q Zed)) (pos (app p (app f Zed))))");
        assert!(
            out.ends_with("(clause (vars (X0 i)) (neg (app q X0)) (pos (app p (app f X0))))\n"),
            "{out}"
        );
    }

    #[test]
    fn lambda_printing() {
        let out = roundtrip("(type i 0) (sym g (-> (-> i o) o)) (sym r (-> i i o)) (sym a i) (clause (vars) (pos (app g (lam (y i) (app r y y)))))");
        assert!(
            out.contains("(pos (app g (lam (x0 i) (app r x0 x0))))"),
            "{out}"
        );
    }

    #[test]
    fn polymorphic_printing() {
        let out = roundtrip("(type list 1) (sym nil (pi (T) (list T))) (sym p (pi (T) (-> (list T) o))) (clause (vars) (pos (app (inst p B) (inst nil B))))");
        assert!(out.contains("(sym p (pi (T) (-> (list T) o)))"), "{out}");
        assert!(
            out.contains("(pos (app (inst p A0) (inst nil A0)))"),
            "{out}"
        );
    }

    #[test]
    fn names_avoid_declared_symbols() {
        let out = roundtrip(
            "(type i 0) (sym X0 i) (sym p (-> i i o)) (clause (vars (Y i)) (pos (app p Y X0)))",
        );
        assert!(
            out.contains("(clause (vars (X_0 i)) (pos (app p X_0 X0)))"),
            "{out}"
        );
    }
}
