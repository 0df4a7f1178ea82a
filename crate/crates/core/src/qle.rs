//! Pure and quasipure literal elimination.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::clause::{occurring_predicates, occurs_deep, Clause};
use crate::sat::{self, SatProblem, SatResult};
use crate::signature::Signature;
use crate::types::Name;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Polarity {
    pub fn of(positive: bool) -> Polarity {
        if positive {
            Polarity::Pos
        } else {
            Polarity::Neg
        }
    }

    pub fn is_positive(self) -> bool {
        self == Polarity::Pos
    }

    pub fn opposite(self) -> Polarity {
        Polarity::of(!self.is_positive())
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_positive() { "+" } else { "-" })
    }
}

/// Polarity per predicate symbol; unlisted symbols map to `+`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolarityMap(BTreeMap<Name, Polarity>);

impl PolarityMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, p: impl Into<Name>, s: Polarity) {
        self.0.insert(p.into(), s);
    }

    pub fn get(&self, p: &str) -> Polarity {
        self.0.get(p).copied().unwrap_or(Polarity::Pos)
    }

    pub fn with(mut self, p: impl Into<Name>, s: Polarity) -> Self {
        self.set(p, s);
        self
    }
}

/// A quasipure symbol set with its polarity map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasipureResult {
    pub symbols: BTreeSet<Name>,
    pub polarity: PolarityMap,
}

impl QuasipureResult {
    /// Whether `c` contains a literal of some member with that member's polarity.
    pub fn hits(&self, c: &Clause) -> bool {
        hits(&self.symbols, &self.polarity, c)
    }
}

fn hits(set: &BTreeSet<Name>, m: &PolarityMap, c: &Clause) -> bool {
    c.pred_lits()
        .any(|(_, v)| set.contains(&v.symbol) && m.get(&v.symbol) == Polarity::of(v.positive))
}

pub fn is_quasipure(set: &BTreeSet<Name>, m: &PolarityMap, clauses: &[Clause]) -> bool {
    clauses
        .iter()
        .filter(|c| set.iter().any(|p| c.contains_symbol(p)))
        .all(|c| hits(set, m, c))
}

/// The QLE SAT problem. Symbol `symbols[i]` owns variables `2i+1` (chosen
/// with polarity +) and `2i+2` (chosen with polarity −).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QleEncoding {
    pub problem: SatProblem,
    pub symbols: Vec<Name>,
}

impl QleEncoding {
    pub fn var(&self, p: &str, s: Polarity) -> Option<i32> {
        self.symbols
            .iter()
            .position(|q| &**q == p)
            .map(|i| var_of(i, s))
    }
}

fn var_of(index: usize, s: Polarity) -> i32 {
    2 * index as i32 + if s.is_positive() { 1 } else { 2 }
}

pub fn encode_qle(sig: &Signature, clauses: &[Clause]) -> QleEncoding {
    encode_qle_with_symbols(occurring_predicates(sig, clauses), clauses)
}

/// Encodes with an explicit symbol list; every predicate symbol occurring in
/// `clauses` must be listed.
pub fn encode_qle_with_symbols(symbols: Vec<Name>, clauses: &[Clause]) -> QleEncoding {
    let index = |p: &str| {
        symbols
            .iter()
            .position(|q| &**q == p)
            .expect("symbol listed")
    };
    let mut out: Vec<Vec<i32>> = Vec::new();
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut push = |c: Vec<i32>| {
        if seen.insert(c.clone()) {
            out.push(c);
        }
    };
    let lit_vars: Vec<Vec<(usize, Polarity)>> = clauses
        .iter()
        .map(|c| {
            c.pred_lits()
                .map(|(_, v)| (index(&v.symbol), Polarity::of(v.positive)))
                .collect()
        })
        .collect();
    for lits in &lit_vars {
        for j in 0..lits.len() {
            let clause = lits
                .iter()
                .enumerate()
                .map(|(i, &(q, s))| {
                    if i == j {
                        -var_of(q, s.opposite())
                    } else {
                        var_of(q, s)
                    }
                })
                .collect();
            push(clause);
        }
    }
    for (c, lits) in clauses.iter().zip(&lit_vars) {
        for (k, p) in symbols.iter().enumerate() {
            if !occurs_deep(p, c) {
                continue;
            }
            for s in [Polarity::Pos, Polarity::Neg] {
                let mut clause = vec![-var_of(k, s)];
                clause.extend(lits.iter().map(|&(q, s)| var_of(q, s)));
                push(clause);
            }
        }
    }
    for k in 0..symbols.len() {
        push(vec![-var_of(k, Polarity::Pos), -var_of(k, Polarity::Neg)]);
    }
    push(
        (0..symbols.len())
            .flat_map(|k| [var_of(k, Polarity::Pos), var_of(k, Polarity::Neg)])
            .collect(),
    );
    let problem = SatProblem::new(2 * symbols.len(), out).expect("variables in range");
    QleEncoding { problem, symbols }
}

pub fn find_quasipure_set(sig: &Signature, clauses: &[Clause]) -> Option<QuasipureResult> {
    find_with_symbols(occurring_predicates(sig, clauses), clauses)
}

/// Solves the encoding, then greedily extends the model: each symbol in
/// list order is forced to `+`, else `−`, whenever that stays satisfiable.
fn find_with_symbols(symbols: Vec<Name>, clauses: &[Clause]) -> Option<QuasipureResult> {
    let enc = encode_qle_with_symbols(symbols, clauses);
    let solve_with = |units: &[i32]| {
        let mut cs = enc.problem.clauses().to_vec();
        cs.extend(units.iter().map(|&u| vec![u]));
        sat::solve(&SatProblem::new(enc.problem.num_vars(), cs).expect("variables in range"))
    };
    let SatResult::Sat(mut model) = solve_with(&[]) else {
        return None;
    };
    let mut units = Vec::new();
    for k in 0..enc.symbols.len() {
        for s in [Polarity::Pos, Polarity::Neg] {
            let v = var_of(k, s);
            units.push(v);
            if let SatResult::Sat(m) = solve_with(&units) {
                model = m;
                break;
            }
            units.pop();
        }
    }
    let mut result = QuasipureResult {
        symbols: BTreeSet::new(),
        polarity: PolarityMap::new(),
    };
    for (k, p) in enc.symbols.iter().enumerate() {
        let value = |s| model[var_of(k, s) as usize - 1];
        for s in [Polarity::Pos, Polarity::Neg] {
            if value(s) {
                result.symbols.insert(p.clone());
                result.polarity.set(p.clone(), s);
            }
        }
    }
    assert!(
        is_quasipure(&result.symbols, &result.polarity, clauses),
        "encoding yielded a non-quasipure set"
    );
    Some(result)
}

/// The witness used in one elimination round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundWitness {
    pub symbols: Vec<(String, Polarity)>,
    /// Indices into the input clause list.
    pub removed: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct QleReport {
    /// Indices into the input clause list, in removal order.
    pub removed: Vec<usize>,
    /// Search rounds, including the final one that found nothing.
    pub rounds: usize,
    pub witnesses: Vec<RoundWitness>,
}

pub fn run_qle(sig: &Signature, clauses: &[Clause]) -> (Vec<Clause>, QleReport) {
    run_qle_with_priority(sig, clauses, &[])
}

/// Like [`run_qle`], visiting the symbols listed in `priority` first during
/// model extension.
pub fn run_qle_with_priority(
    sig: &Signature,
    clauses: &[Clause],
    priority: &[Name],
) -> (Vec<Clause>, QleReport) {
    let mut live: Vec<usize> = (0..clauses.len()).collect();
    let mut report = QleReport::default();
    let mut union = QuasipureResult {
        symbols: BTreeSet::new(),
        polarity: PolarityMap::new(),
    };
    loop {
        report.rounds += 1;
        let current: Vec<Clause> = live.iter().map(|&k| clauses[k].clone()).collect();
        let mut symbols = occurring_predicates(sig, &current);
        symbols.sort_by_key(|p| priority.iter().position(|q| q == p).unwrap_or(usize::MAX));
        let Some(found) = find_with_symbols(symbols, &current) else {
            break;
        };
        let (gone, kept): (Vec<usize>, Vec<usize>) =
            live.iter().partition(|&&k| found.hits(&clauses[k]));
        if gone.is_empty() {
            break;
        }
        for p in &found.symbols {
            union.symbols.insert(p.clone());
            union.polarity.set(p.clone(), found.polarity.get(p));
        }
        report.witnesses.push(RoundWitness {
            symbols: found
                .symbols
                .iter()
                .map(|p| (p.to_string(), found.polarity.get(p)))
                .collect(),
            removed: gone.clone(),
        });
        report.removed.extend(gone);
        live = kept;
    }
    assert!(
        is_quasipure(&union.symbols, &union.polarity, clauses),
        "round witnesses are not jointly quasipure"
    );
    let swoop: BTreeSet<usize> = (0..clauses.len())
        .filter(|&k| union.hits(&clauses[k]))
        .collect();
    assert_eq!(
        swoop,
        report.removed.iter().copied().collect(),
        "single-swoop deletion differs"
    );
    (live.iter().map(|&k| clauses[k].clone()).collect(), report)
}

/// Pure literal elimination: repeatedly deletes the clauses of every symbol
/// that occurs with a single polarity and never deep.
pub fn run_ple(sig: &Signature, clauses: &[Clause]) -> (Vec<Clause>, QleReport) {
    let mut live: Vec<usize> = (0..clauses.len()).collect();
    let mut report = QleReport::default();
    loop {
        report.rounds += 1;
        let current: Vec<Clause> = live.iter().map(|&k| clauses[k].clone()).collect();
        let mut pure = QuasipureResult {
            symbols: BTreeSet::new(),
            polarity: PolarityMap::new(),
        };
        for p in occurring_predicates(sig, &current) {
            if current.iter().any(|c| occurs_deep(&p, c)) {
                continue;
            }
            let polarities: BTreeSet<Polarity> = current
                .iter()
                .flat_map(|c| {
                    c.pred_lits_of(&p)
                        .map(|(_, v)| Polarity::of(v.positive))
                        .collect::<Vec<_>>()
                })
                .collect();
            if let [s] = polarities.into_iter().collect::<Vec<_>>()[..] {
                pure.symbols.insert(p.clone());
                pure.polarity.set(p, s);
            }
        }
        let (gone, kept): (Vec<usize>, Vec<usize>) =
            live.iter().partition(|&&k| pure.hits(&clauses[k]));
        if gone.is_empty() {
            break;
        }
        report.witnesses.push(RoundWitness {
            symbols: pure
                .symbols
                .iter()
                .map(|p| (p.to_string(), pure.polarity.get(p)))
                .collect(),
            removed: gone.clone(),
        });
        report.removed.extend(gone);
        live = kept;
    }
    (live.iter().map(|&k| clauses[k].clone()).collect(), report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::ClauseSet;
    use crate::parser::parse_problem;

    const PURE: &str = "(type i 0) (sym a i) (sym f (-> i i)) (sym p (-> i o)) (sym q (-> i i o)) \
        (clause (vars (X i)) (pos (app p X)) (pos (app q a X))) \
        (clause (vars (X i)) (pos (app p (app f X)))) \
        (clause (vars) (neg (app q a a)))";

    const CHAIN: &str = "(type i 0) (sym a i) (sym f (-> i i)) (sym p (-> i o)) \
        (clause (vars) (pos (app p a))) \
        (clause (vars (X i)) (neg (app p X)) (pos (app p (app f X))))";

    const MIXED: &str =
        "(type i 0) (sym a i) (sym b i) (sym f (-> i i)) (sym p (-> i o)) (sym q (-> i o)) \
        (sym h (-> (-> i o) o i)) \
        (clause (vars) (pos (app p a))) \
        (clause (vars (X i)) (pos (app q X)) (pos (app p (app f X)))) \
        (clause (vars) (neg (app q (app f a)))) \
        (clause (vars (X i)) (neg (app p X)) (neg (app q (app h p (app p b)))))";

    const CLASH: &str = "(type i 0) (sym a i) (sym p (-> i o)) \
        (clause (vars) (pos (app p a))) (clause (vars) (neg (app p a)))";

    fn load(text: &str) -> ClauseSet {
        parse_problem(text).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<Name> {
        names.iter().map(|&n| Name::from(n)).collect()
    }

    #[test]
    fn checker_examples() {
        let n = load(PURE);
        let m = PolarityMap::new()
            .with("p", Polarity::Pos)
            .with("q", Polarity::Neg);
        assert!(is_quasipure(&set(&["p", "q"]), &m, &n.clauses));
        assert!(is_quasipure(
            &set(&["p"]),
            &PolarityMap::new(),
            &load(CHAIN).clauses
        ));
        let mixed = load(MIXED);
        assert!(is_quasipure(&set(&["p", "q"]), &m, &mixed.clauses));
        for s in [Polarity::Pos, Polarity::Neg] {
            let m = PolarityMap::new().with("p", s).with("q", s);
            assert!(!is_quasipure(&set(&["p"]), &m, &mixed.clauses));
            assert!(!is_quasipure(&set(&["q"]), &m, &mixed.clauses));
        }
        assert!(is_quasipure(&set(&["absent"]), &m, &n.clauses));
    }

    #[test]
    fn chain_encoding() {
        let n = load(CHAIN);
        let enc = encode_qle(&n.signature, &n.clauses);
        assert_eq!(enc.symbols, vec![Name::from("p")]);
        let (pp, pn) = (1, 2);
        assert_eq!(
            enc.problem.clauses(),
            &[
                vec![-pn],
                vec![-pp, pp],
                vec![pn, -pn],
                vec![-pp, -pn],
                vec![pp, pn]
            ]
        );
        let SatResult::Sat(model) = sat::solve(&enc.problem) else {
            panic!("unsat")
        };
        assert_eq!(model, vec![true, false]);
    }

    #[test]
    fn deep_occurrence_encoding() {
        let n = load(MIXED);
        let enc = encode_qle(&n.signature, &n.clauses);
        let p = |s| enc.var("p", s).unwrap();
        let q = |s| enc.var("q", s).unwrap();
        let cs = enc.problem.clauses();
        assert!(cs.contains(&vec![-p(Polarity::Pos), p(Polarity::Neg), q(Polarity::Neg)]));
        assert!(cs.contains(&vec![-p(Polarity::Neg), p(Polarity::Neg), q(Polarity::Neg)]));
    }

    #[test]
    fn no_predicates_means_no_set() {
        let n = load("(type i 0) (sym a i) (sym b i) (clause (vars) (eq a b))");
        let enc = encode_qle(&n.signature, &n.clauses);
        assert_eq!(enc.problem.clauses(), &[Vec::<i32>::new()]);
        assert!(find_quasipure_set(&n.signature, &n.clauses).is_none());
    }

    #[test]
    fn find_examples() {
        let n = load(PURE);
        let found = find_quasipure_set(&n.signature, &n.clauses).unwrap();
        assert_eq!(found.symbols, set(&["p", "q"]));
        assert_eq!(found.polarity.get("p"), Polarity::Pos);
        assert_eq!(found.polarity.get("q"), Polarity::Neg);
        let n = load(CHAIN);
        let found = find_quasipure_set(&n.signature, &n.clauses).unwrap();
        assert_eq!(
            (found.symbols, found.polarity.get("p")),
            (set(&["p"]), Polarity::Pos)
        );
        let n = load(CLASH);
        assert!(find_quasipure_set(&n.signature, &n.clauses).is_none());
    }

    #[test]
    fn qle_examples() {
        let n = load(PURE);
        let (out, report) = run_qle(&n.signature, &n.clauses);
        assert!(out.is_empty());
        assert_eq!((report.removed.len(), report.rounds), (3, 2));
        let n = load(MIXED);
        assert!(run_qle(&n.signature, &n.clauses).0.is_empty());
        let n = load(CHAIN);
        assert!(run_qle(&n.signature, &n.clauses).0.is_empty());
        let n = load(CLASH);
        let (out, report) = run_qle(&n.signature, &n.clauses);
        assert_eq!(out, n.clauses);
        assert_eq!(report.rounds, 1);
    }

    #[test]
    fn ple_examples() {
        let n = load(PURE);
        let (out, report) = run_ple(&n.signature, &n.clauses);
        assert!(out.is_empty());
        assert_eq!(report.witnesses[0].removed, vec![0, 1]);
        assert_eq!(report.witnesses[1].removed, vec![2]);
        let n = load(CHAIN);
        assert_eq!(run_ple(&n.signature, &n.clauses).0, n.clauses);
        let n = load(MIXED);
        assert_eq!(run_ple(&n.signature, &n.clauses).0, n.clauses);
        assert!(run_ple(&n.signature, &[]).0.is_empty());
    }

    #[test]
    fn priority_does_not_change_result() {
        let n = load(MIXED);
        let (a, _) = run_qle_with_priority(&n.signature, &n.clauses, &[Name::from("q")]);
        let (b, _) = run_qle(&n.signature, &n.clauses);
        assert_eq!(a, b);
    }
}
