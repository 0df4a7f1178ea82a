//! Random problem generators in the native text format, used by the property
//! and acceptance suites.

use std::fmt::Write;

use rand::Rng;

fn pick<'a, R: Rng>(rng: &mut R, items: &'a [String]) -> &'a str {
    &items[rng.gen_range(0..items.len())]
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

/// Ground propositional problem: up to 8 atoms and 12 clauses of 1 to 3 literals.
pub fn propositional<R: Rng>(rng: &mut R) -> String {
    let atoms = names("a", rng.gen_range(1..=8));
    let mut out = String::new();
    for a in &atoms {
        writeln!(out, "(sym {a} o)").unwrap();
    }
    for _ in 0..rng.gen_range(1..=12) {
        out.push_str("(clause (vars)");
        for _ in 0..rng.gen_range(1..=3) {
            let sign = if rng.gen_bool(0.5) { "pos" } else { "neg" };
            write!(out, " ({sign} {})", pick(rng, &atoms)).unwrap();
        }
        out.push_str(")\n");
    }
    out
}

fn ground_term<R: Rng>(rng: &mut R, consts: &[String], funs: &[String], depth: usize) -> String {
    if depth == 0 || funs.is_empty() || rng.gen_bool(0.6) {
        return pick(rng, consts).to_string();
    }
    let f = pick(rng, funs).to_string();
    format!("(app {f} {})", ground_term(rng, consts, funs, depth - 1))
}

/// Ground first-order problem with equality: up to 3 constants, 2 unary
/// functions and 2 unary predicates.
pub fn ground_first_order<R: Rng>(rng: &mut R) -> String {
    let consts = names("c", rng.gen_range(1..=3));
    let funs = names("f", rng.gen_range(0..=2));
    let preds = names("p", rng.gen_range(1..=2));
    let mut out = String::from("(type i 0)\n");
    for c in &consts {
        writeln!(out, "(sym {c} i)").unwrap();
    }
    for f in &funs {
        writeln!(out, "(sym {f} (-> i i))").unwrap();
    }
    for p in &preds {
        writeln!(out, "(sym {p} (-> i o))").unwrap();
    }
    for _ in 0..rng.gen_range(1..=6) {
        out.push_str("(clause (vars)");
        for _ in 0..rng.gen_range(1..=3) {
            if rng.gen_bool(0.35) {
                let kind = if rng.gen_bool(0.5) { "eq" } else { "neq" };
                let s = ground_term(rng, &consts, &funs, 1);
                let t = ground_term(rng, &consts, &funs, 1);
                write!(out, " ({kind} {s} {t})").unwrap();
            } else {
                let sign = if rng.gen_bool(0.5) { "pos" } else { "neg" };
                let p = pick(rng, &preds).to_string();
                write!(
                    out,
                    " ({sign} (app {p} {}))",
                    ground_term(rng, &consts, &funs, 1)
                )
                .unwrap();
            }
        }
        out.push_str(")\n");
    }
    out
}

fn open_term<R: Rng>(rng: &mut R, vars: &[String], depth: usize) -> String {
    match rng.gen_range(0..4) {
        0 => "a".into(),
        1 => "b".into(),
        2 if depth > 0 => format!("(app f {})", open_term(rng, vars, depth - 1)),
        _ => pick(rng, vars).to_string(),
    }
}

/// Non-ground problem over 1 to 4 predicate symbols of arity 1 or 2, with
/// occasional deep occurrences of a predicate under `h : (i → o) → i`.
pub fn first_order<R: Rng>(rng: &mut R) -> String {
    let preds: Vec<(String, usize)> = (0..rng.gen_range(1..=4))
        .map(|k| (format!("p{k}"), rng.gen_range(1..=2)))
        .collect();
    let unary: Vec<String> = preds
        .iter()
        .filter(|(_, n)| *n == 1)
        .map(|(p, _)| p.clone())
        .collect();
    let mut out = String::from(
        "(type i 0)\n(sym a i)\n(sym b i)\n(sym f (-> i i))\n(sym h (-> (-> i o) i))\n",
    );
    for (p, n) in &preds {
        let args = vec!["i"; *n].join(" ");
        writeln!(out, "(sym {p} (-> {args} o))").unwrap();
    }
    let vars = vec!["X".to_string(), "Y".to_string()];
    for _ in 0..rng.gen_range(1..=8) {
        out.push_str("(clause (vars (X i) (Y i))");
        for _ in 0..rng.gen_range(1..=3) {
            if rng.gen_bool(0.15) {
                let kind = if rng.gen_bool(0.5) { "eq" } else { "neq" };
                write!(
                    out,
                    " ({kind} {} {})",
                    open_term(rng, &vars, 1),
                    open_term(rng, &vars, 1)
                )
                .unwrap();
                continue;
            }
            let (p, n) = &preds[rng.gen_range(0..preds.len())];
            let sign = if rng.gen_bool(0.5) { "pos" } else { "neg" };
            let args: Vec<String> = (0..*n)
                .map(|_| {
                    if !unary.is_empty() && rng.gen_bool(0.05) {
                        format!("(app h {})", pick(rng, &unary))
                    } else {
                        open_term(rng, &vars, 1)
                    }
                })
                .collect();
            write!(out, " ({sign} (app {p} {}))", args.join(" ")).unwrap();
        }
        out.push_str(")\n");
    }
    out
}
