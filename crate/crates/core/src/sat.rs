//! Small deterministic DPLL solver.

use std::fmt::Write;

use thiserror::Error;

/// CNF over variables `1..=num_vars`; literals are signed variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SatProblem {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("clause {clause} contains the literal 0")]
    ZeroLiteral { clause: usize },
    #[error("clause {clause} mentions variable {var}, but only {num_vars} are declared")]
    OutOfRange {
        clause: usize,
        var: u32,
        num_vars: usize,
    },
}

impl SatProblem {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, SatError> {
        for (ci, c) in clauses.iter().enumerate() {
            for &l in c {
                if l == 0 {
                    return Err(SatError::ZeroLiteral { clause: ci });
                }
                if l.unsigned_abs() as usize > num_vars {
                    return Err(SatError::OutOfRange {
                        clause: ci,
                        var: l.unsigned_abs(),
                        num_vars,
                    });
                }
            }
        }
        Ok(SatProblem { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(out, "{l} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    /// True iff `assignment[v - 1]` satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// `assignment[v - 1]` is the value of variable `v`.
    Sat(Vec<bool>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Value {
    Unset,
    True,
    False,
}

fn lit_value(assign: &[Value], l: i32) -> Value {
    match assign[l.unsigned_abs() as usize] {
        Value::Unset => Value::Unset,
        Value::True if l > 0 => Value::True,
        Value::False if l < 0 => Value::True,
        _ => Value::False,
    }
}

fn set_lit(assign: &mut [Value], l: i32) {
    assign[l.unsigned_abs() as usize] = if l > 0 { Value::True } else { Value::False };
}

/// Unit propagation and pure literals to fixpoint; `false` on conflict.
fn simplify(clauses: &[Vec<i32>], assign: &mut [Value]) -> bool {
    loop {
        let mut changed = false;
        let mut polarity = vec![0u8; assign.len()];
        for c in clauses {
            let mut unset = None;
            let mut n_unset = 0;
            let mut sat = false;
            for &l in c {
                match lit_value(assign, l) {
                    Value::True => {
                        sat = true;
                        break;
                    }
                    Value::Unset => {
                        n_unset += 1;
                        unset = Some(l);
                    }
                    Value::False => {}
                }
            }
            if sat {
                continue;
            }
            match n_unset {
                0 => return false,
                1 => {
                    set_lit(assign, unset.expect("one unset literal"));
                    changed = true;
                }
                _ => {
                    for &l in c {
                        if lit_value(assign, l) == Value::Unset {
                            polarity[l.unsigned_abs() as usize] |= if l > 0 { 1 } else { 2 };
                        }
                    }
                }
            }
        }
        if !changed {
            for (v, &p) in polarity.iter().enumerate() {
                if assign[v] == Value::Unset && (p == 1 || p == 2) {
                    assign[v] = if p == 1 { Value::True } else { Value::False };
                    changed = true;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn dpll(clauses: &[Vec<i32>], assign: &mut Vec<Value>) -> bool {
    if !simplify(clauses, assign) {
        return false;
    }
    let open = clauses
        .iter()
        .find(|c| c.iter().all(|&l| lit_value(assign, l) != Value::True));
    if open.is_none() {
        return true;
    }
    let var = (1..assign.len())
        .find(|&v| assign[v] == Value::Unset)
        .expect("open clause has an unset variable");
    for value in [Value::False, Value::True] {
        let mut next = assign.clone();
        next[var] = value;
        if dpll(clauses, &mut next) {
            *assign = next;
            return true;
        }
    }
    false
}

/// Solves `problem`. Branches on the lowest unassigned variable, `false`
/// first; variables left open are reported `false`.
pub fn solve(problem: &SatProblem) -> SatResult {
    let mut assign = vec![Value::Unset; problem.num_vars + 1];
    if !dpll(&problem.clauses, &mut assign) {
        return SatResult::Unsat;
    }
    let model: Vec<bool> = assign[1..].iter().map(|v| *v == Value::True).collect();
    assert!(
        problem.is_satisfied_by(&model),
        "solver produced a non-model"
    );
    SatResult::Sat(model)
}

/// Exhaustive enumeration; for cross-checking on small problems.
pub fn solve_exhaustive(problem: &SatProblem) -> SatResult {
    assert!(
        problem.num_vars <= 24,
        "exhaustive search limited to 24 variables"
    );
    for bits in 0u64..(1u64 << problem.num_vars) {
        let model: Vec<bool> = (0..problem.num_vars).map(|i| bits >> i & 1 == 1).collect();
        if problem.is_satisfied_by(&model) {
            return SatResult::Sat(model);
        }
    }
    SatResult::Unsat
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, cs: &[&[i32]]) -> SatProblem {
        SatProblem::new(n, cs.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn contradiction() {
        assert_eq!(solve(&p(1, &[&[1], &[-1]])), SatResult::Unsat);
    }

    #[test]
    fn resolution_on_two() {
        match solve(&p(2, &[&[1, 2], &[-1, 2]])) {
            SatResult::Sat(m) => assert!(m[1]),
            SatResult::Unsat => panic!("satisfiable"),
        }
    }

    #[test]
    fn empty_clause_is_unsat() {
        assert_eq!(solve(&p(1, &[&[]])), SatResult::Unsat);
        assert!(solve(&p(0, &[])).is_sat());
    }

    #[test]
    fn malformed_problems() {
        assert!(matches!(
            SatProblem::new(1, vec![vec![0]]),
            Err(SatError::ZeroLiteral { .. })
        ));
        assert!(matches!(
            SatProblem::new(1, vec![vec![2]]),
            Err(SatError::OutOfRange { .. })
        ));
    }

    #[test]
    fn dimacs_dump() {
        assert_eq!(p(2, &[&[1, -2]]).to_dimacs(), "p cnf 2 1\n1 -2 0\n");
    }

    fn problems() -> impl Strategy<Value = SatProblem> {
        (1usize..=16).prop_flat_map(|n| {
            let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
            prop::collection::vec(prop::collection::vec(lit, 1..=4), 0..=40)
                .prop_map(move |cs| SatProblem::new(n, cs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(problem in problems()) {
            let fast = solve(&problem);
            let slow = solve_exhaustive(&problem);
            prop_assert_eq!(fast.is_sat(), slow.is_sat());
            if let SatResult::Sat(m) = fast {
                prop_assert!(problem.is_satisfied_by(&m));
            }
        }

        #[test]
        fn deterministic(problem in problems()) {
            prop_assert_eq!(solve(&problem), solve(&problem));
        }
    }
}
