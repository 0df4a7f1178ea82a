//! Technique orchestration, oracle cross-checking and reporting.

use std::collections::BTreeSet;
use std::fmt::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bce::{run_bce_with_order, BlockednessCertificate};
use crate::clause::{occurring_predicates, Clause, ClauseSet};
use crate::hlbe::{hlbe_simplify, DEFAULT_DEPTH};
use crate::modelcheck::{ground_prop_sat, size_profile, MAX_DOMAIN};
use crate::pe::{run_pe, Elimination, PeConfig, PeMode};
use crate::qle::{run_ple, run_qle_with_priority};
use crate::signature::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Technique {
    Hlbe,
    Spe,
    Dpe,
    Ppe,
    Bce,
    Ple,
    Qle,
}

impl Technique {
    pub const ALL: [Technique; 7] = [
        Technique::Hlbe,
        Technique::Spe,
        Technique::Dpe,
        Technique::Ppe,
        Technique::Bce,
        Technique::Ple,
        Technique::Qle,
    ];
    pub const DEFAULT_ORDER: [Technique; 4] = [
        Technique::Hlbe,
        Technique::Ppe,
        Technique::Bce,
        Technique::Qle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Technique::Hlbe => "hlbe",
            Technique::Spe => "spe",
            Technique::Dpe => "dpe",
            Technique::Ppe => "ppe",
            Technique::Bce => "bce",
            Technique::Ple => "ple",
            Technique::Qle => "qle",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown technique `{0}` (expected hlbe, spe, dpe, ppe, bce, ple, qle or all)")]
pub struct UnknownTechnique(pub String);

impl FromStr for Technique {
    type Err = UnknownTechnique;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Technique::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| UnknownTechnique(s.to_string()))
    }
}

/// Parses a comma-separated technique list; `all` expands to every technique.
pub fn parse_techniques(list: &str) -> Result<Vec<Technique>, UnknownTechnique> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "all" {
            out.extend(Technique::ALL);
        } else {
            out.push(item.parse()?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub techniques: Vec<Technique>,
    pub k_tol: u64,
    pub hlbe_depth: usize,
    pub max_rounds: usize,
    pub check_ground: bool,
    /// Shuffles BCE candidate order and QLE symbol priority.
    pub seed: Option<u64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            techniques: Technique::DEFAULT_ORDER.to_vec(),
            k_tol: PeConfig::default().k_tol,
            hlbe_depth: DEFAULT_DEPTH,
            max_rounds: 3,
            check_ground: false,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SetSize {
    pub clauses: usize,
    pub literals: usize,
}

impl SetSize {
    pub fn of(clauses: &[Clause]) -> Self {
        SetSize {
            clauses: clauses.len(),
            literals: clauses.iter().map(Clause::len).sum(),
        }
    }
}

/// Net effect of one technique, summed over the invocations that changed
/// the clause set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TechniqueStats {
    pub technique: Technique,
    pub clauses_removed: usize,
    pub clauses_added: usize,
    pub literals_removed: usize,
    pub literals_added: usize,
    pub predicates_eliminated: usize,
    pub rounds: usize,
}

impl TechniqueStats {
    fn new(technique: Technique) -> Self {
        TechniqueStats {
            technique,
            clauses_removed: 0,
            clauses_added: 0,
            literals_removed: 0,
            literals_added: 0,
            predicates_eliminated: 0,
            rounds: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleFragment {
    Propositional,
    FiniteModel,
    Unsupported,
}

/// Oracle verdicts for input and output. For finite models entry `k - 1`
/// is satisfiability at domain size `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub fragment: OracleFragment,
    pub input: Vec<bool>,
    pub output: Vec<bool>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub input: SetSize,
    pub output: SetSize,
    pub rounds: usize,
    pub techniques: Vec<TechniqueStats>,
    pub eliminations: Vec<Elimination>,
    pub certificates: Vec<BlockednessCertificate>,
    pub derived_units: Vec<String>,
    pub oracle: Option<OracleCheck>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn stats(&self, t: Technique) -> Option<&TechniqueStats> {
        self.techniques.iter().find(|s| s.technique == t)
    }

    pub fn oracle_mismatch(&self) -> bool {
        self.oracle.as_ref().is_some_and(|o| !o.agree)
    }
}

/// Compares oracle verdicts for `input` and `output`, preferring the
/// propositional oracle.
pub fn oracle_check(input: &[Clause], output: &[Clause]) -> OracleCheck {
    if let (Ok(a), Ok(b)) = (ground_prop_sat(input), ground_prop_sat(output)) {
        return OracleCheck {
            fragment: OracleFragment::Propositional,
            input: vec![a],
            output: vec![b],
            agree: a == b,
        };
    }
    if let (Ok(a), Ok(b)) = (
        size_profile(input, MAX_DOMAIN),
        size_profile(output, MAX_DOMAIN),
    ) {
        let agree = a == b;
        return OracleCheck {
            fragment: OracleFragment::FiniteModel,
            input: a,
            output: b,
            agree,
        };
    }
    OracleCheck {
        fragment: OracleFragment::Unsupported,
        input: vec![],
        output: vec![],
        agree: true,
    }
}

struct Step {
    clauses: Vec<Clause>,
    rounds: usize,
}

struct Runner<'a> {
    sig: &'a Signature,
    cfg: &'a PipelineConfig,
    rng: Option<ChaCha8Rng>,
    report: Report,
}

impl Runner<'_> {
    fn apply(&mut self, t: Technique, n: &[Clause]) -> Step {
        match t {
            Technique::Hlbe => {
                let (clauses, r) = hlbe_simplify(n, self.cfg.hlbe_depth);
                self.report.derived_units.extend(r.derived_units);
                Step {
                    clauses,
                    rounds: r.rounds,
                }
            }
            Technique::Spe | Technique::Dpe | Technique::Ppe => {
                let mode = match t {
                    Technique::Spe => PeMode::SpeOnly,
                    Technique::Dpe => PeMode::DpeOnly,
                    _ => PeMode::Portfolio,
                };
                let pe = PeConfig {
                    k_tol: self.cfg.k_tol,
                    mode,
                    ..PeConfig::default()
                };
                let (clauses, r) = run_pe(self.sig, n, &pe);
                self.report.eliminations.extend(r.eliminated);
                Step {
                    clauses,
                    rounds: r.passes,
                }
            }
            Technique::Bce => {
                let mut order: Vec<usize> = (0..n.len()).collect();
                if let Some(rng) = &mut self.rng {
                    order.shuffle(rng);
                }
                let (clauses, r) = run_bce_with_order(n, &order);
                self.report.certificates.extend(r.certificates);
                Step {
                    clauses,
                    rounds: r.sweeps,
                }
            }
            Technique::Ple => {
                let (clauses, r) = run_ple(self.sig, n);
                Step {
                    clauses,
                    rounds: r.rounds,
                }
            }
            Technique::Qle => {
                let mut priority = occurring_predicates(self.sig, n);
                if let Some(rng) = &mut self.rng {
                    priority.shuffle(rng);
                }
                let (clauses, r) = run_qle_with_priority(self.sig, n, &priority);
                Step {
                    clauses,
                    rounds: r.rounds,
                }
            }
        }
    }
}

/// Applies the configured techniques in order, repeating the sequence until
/// nothing changes, the set is empty or `max_rounds` is reached.
pub fn run_pipeline(input: &ClauseSet, cfg: &PipelineConfig) -> (ClauseSet, Report) {
    let start = Instant::now();
    let sig = &*input.signature;
    let mut order: Vec<Technique> = Vec::new();
    for &t in &cfg.techniques {
        if !order.contains(&t) {
            order.push(t);
        }
    }
    let mut runner = Runner {
        sig,
        cfg,
        rng: cfg.seed.map(ChaCha8Rng::seed_from_u64),
        report: Report {
            input: SetSize::of(&input.clauses),
            output: SetSize::default(),
            rounds: 0,
            techniques: order.iter().map(|&t| TechniqueStats::new(t)).collect(),
            eliminations: Vec::new(),
            certificates: Vec::new(),
            derived_units: Vec::new(),
            oracle: None,
            wall_time_ms: 0,
        },
    };
    let mut current = input.clauses.clone();
    for _ in 0..cfg.max_rounds.max(1) {
        if current.is_empty() {
            break;
        }
        runner.report.rounds += 1;
        let round_start = current.clone();
        for &t in &cfg.techniques {
            if current.is_empty() {
                break;
            }
            let step = runner.apply(t, &current);
            if step.clauses == current {
                continue;
            }
            let (before, after) = (SetSize::of(&current), SetSize::of(&step.clauses));
            let preds_before: BTreeSet<_> =
                occurring_predicates(sig, &current).into_iter().collect();
            let preds_after: BTreeSet<_> = occurring_predicates(sig, &step.clauses)
                .into_iter()
                .collect();
            let stats = runner
                .report
                .techniques
                .iter_mut()
                .find(|s| s.technique == t)
                .expect("listed");
            stats.clauses_removed += before.clauses.saturating_sub(after.clauses);
            stats.clauses_added += after.clauses.saturating_sub(before.clauses);
            stats.literals_removed += before.literals.saturating_sub(after.literals);
            stats.literals_added += after.literals.saturating_sub(before.literals);
            stats.predicates_eliminated += preds_before.difference(&preds_after).count();
            stats.rounds += step.rounds;
            current = step.clauses;
        }
        if current == round_start {
            break;
        }
    }
    let mut report = runner.report;
    report.output = SetSize::of(&current);
    if cfg.check_ground {
        report.oracle = Some(oracle_check(&input.clauses, &current));
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    (input.with_clauses(current), report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StatsFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for StatsFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(StatsFormat::Text),
            "json" => Ok(StatsFormat::Json),
            other => Err(format!(
                "unknown stats format `{other}` (expected text or json)"
            )),
        }
    }
}

fn verdicts(v: &[bool]) -> String {
    let words: Vec<&str> = v.iter().map(|&b| if b { "sat" } else { "unsat" }).collect();
    words.join("/")
}

pub fn emit_report(r: &Report, format: StatsFormat) -> String {
    match format {
        StatsFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        StatsFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "input: {} clauses, {} literals",
                r.input.clauses, r.input.literals
            );
            let _ = writeln!(
                s,
                "output: {} clauses, {} literals",
                r.output.clauses, r.output.literals
            );
            let _ = writeln!(s, "pipeline rounds: {}", r.rounds);
            for t in &r.techniques {
                let _ = writeln!(
                    s,
                    "{} removed {} clauses in {} rounds; added {} clauses, removed {} literals, added {} literals, eliminated {} predicates",
                    t.technique,
                    t.clauses_removed,
                    t.rounds,
                    t.clauses_added,
                    t.literals_removed,
                    t.literals_added,
                    t.predicates_eliminated
                );
            }
            for e in &r.eliminations {
                let _ = writeln!(
                    s,
                    "eliminated {} by {:?}: {} -> {} clauses",
                    e.symbol, e.branch, e.clauses_before, e.clauses_after
                );
            }
            for c in &r.certificates {
                let _ = writeln!(
                    s,
                    "blocked: {} on {} ({} partners)",
                    c.clause_text,
                    c.literal,
                    c.partners.len()
                );
            }
            for u in &r.derived_units {
                let _ = writeln!(s, "derived unit: {u}");
            }
            if let Some(o) = &r.oracle {
                let fragment = match o.fragment {
                    OracleFragment::Propositional => "propositional",
                    OracleFragment::FiniteModel => "finite-model",
                    OracleFragment::Unsupported => "unsupported",
                };
                let verdict = if o.agree { "agree" } else { "MISMATCH" };
                if o.fragment == OracleFragment::Unsupported {
                    let _ = writeln!(s, "oracle ({fragment}): not checked");
                } else {
                    let _ = writeln!(
                        s,
                        "oracle ({fragment}): input {}, output {}, {verdict}",
                        verdicts(&o.input),
                        verdicts(&o.output)
                    );
                }
            }
            let _ = writeln!(s, "wall time: {} ms", r.wall_time_ms);
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;

    const PURE: &str = "(type i 0) (sym a i) (sym f (-> i i)) (sym p (-> i o)) (sym q (-> i i o)) \
        (clause (vars (X i)) (pos (app p X)) (pos (app q a X))) \
        (clause (vars (X i)) (pos (app p (app f X)))) \
        (clause (vars) (neg (app q a a)))";

    fn only(t: Technique) -> PipelineConfig {
        PipelineConfig {
            techniques: vec![t],
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn technique_lists() {
        assert_eq!(parse_techniques("qle").unwrap(), vec![Technique::Qle]);
        assert_eq!(
            parse_techniques("bce, ple").unwrap(),
            vec![Technique::Bce, Technique::Ple]
        );
        assert_eq!(parse_techniques("all").unwrap(), Technique::ALL.to_vec());
        assert!(parse_techniques("xyz").is_err());
        assert_eq!(Technique::Hlbe.to_string(), "hlbe");
    }

    #[test]
    fn qle_report_line() {
        let n = parse_problem(PURE).unwrap();
        let (out, report) = run_pipeline(&n, &only(Technique::Qle));
        assert!(out.clauses.is_empty());
        let q = report.stats(Technique::Qle).unwrap();
        assert_eq!(
            (q.clauses_removed, q.rounds, q.predicates_eliminated),
            (3, 2, 2)
        );
        let text = emit_report(&report, StatsFormat::Text);
        assert!(text.contains("qle removed 3 clauses in 2 rounds"), "{text}");
    }

    #[test]
    fn empty_run_has_zero_counters() {
        let n = parse_problem("(type i 0)").unwrap();
        let (out, report) = run_pipeline(&n, &PipelineConfig::default());
        assert!(out.clauses.is_empty());
        assert_eq!(report.rounds, 0);
        for t in &report.techniques {
            assert_eq!(t, &TechniqueStats::new(t.technique));
        }
    }

    #[test]
    fn json_round_trips() {
        let n = parse_problem(PURE).unwrap();
        let cfg = PipelineConfig {
            check_ground: true,
            ..PipelineConfig::default()
        };
        let (_, report) = run_pipeline(&n, &cfg);
        let json = emit_report(&report, StatsFormat::Json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let again: serde_json::Value = serde_json::from_str(&value.to_string()).unwrap();
        assert_eq!(again, value);
        let keys: Vec<&str> = json
            .lines()
            .filter(|l| l.starts_with("  \""))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        assert_eq!(keys[..3], ["input", "output", "rounds"]);
        assert_eq!(value["input"]["clauses"], 3);
        assert_eq!(value["techniques"][0]["technique"], "hlbe");
    }

    #[test]
    fn oracle_flags_mismatch() {
        let sat = parse_problem("(sym a o) (clause (vars) (pos a))").unwrap();
        let unsat =
            parse_problem("(sym a o) (clause (vars) (pos a)) (clause (vars) (neg a))").unwrap();
        let check = oracle_check(&sat.clauses, &unsat.clauses);
        assert_eq!(check.fragment, OracleFragment::Propositional);
        assert!(!check.agree);
        assert!(oracle_check(&sat.clauses, &[]).agree);
    }

    #[test]
    fn seeded_runs_agree() {
        let n = parse_problem(PURE).unwrap();
        let plain = run_pipeline(&n, &PipelineConfig::default()).0;
        for seed in 0..5 {
            let cfg = PipelineConfig {
                seed: Some(seed),
                ..PipelineConfig::default()
            };
            assert_eq!(run_pipeline(&n, &cfg).0.clauses, plain.clauses);
        }
    }
}
