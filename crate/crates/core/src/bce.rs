//! Blocked clause elimination with binary flat L-resolvents.

use serde::Serialize;
use thiserror::Error;

use crate::cc::cc_valid;
use crate::clause::{is_polymorphism_safe_for, occurs_deep, Clause, Fresh};
use crate::pe::ordered_resolvent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BceError {
    #[error("literal {literal} of clause {clause} is not a predicate literal")]
    NotAPredicateLiteral { clause: usize, literal: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartnerEvidence {
    pub partner: usize,
    pub resolvent: String,
    pub cc_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockednessCertificate {
    pub clause: usize,
    pub clause_text: String,
    pub literal: String,
    pub partners: Vec<PartnerEvidence>,
}

/// `((⋁ sⱼ ≉ tⱼ) ∨ C′ ∨ D′)σ` for `L = c[l]` and `L′ = d[l2]`; `None` when the
/// literals are not opposite-polarity p-literals of one symbol or their type
/// arguments do not unify.
pub fn binary_flat_l_resolvent(c: &Clause, l: usize, d: &Clause, l2: usize) -> Option<Clause> {
    ordered_resolvent(c, l, d, l2)
}

/// Checks whether `clauses[clause]` is blocked by its literal `literal`
/// within the clauses flagged `active`. Returns the certificate on success.
pub fn is_blocked(
    clauses: &[Clause],
    active: &[bool],
    clause: usize,
    literal: usize,
    fresh: &mut Fresh,
) -> Result<Option<BlockednessCertificate>, BceError> {
    let c = &clauses[clause];
    let lit = c.lits()[literal]
        .pred_view()
        .ok_or(BceError::NotAPredicateLiteral { clause, literal })?;
    let p = &*lit.symbol;
    if !is_polymorphism_safe_for(&c.type_vars(), &lit) {
        return Ok(None);
    }
    let live = || clauses.iter().enumerate().filter(|(k, _)| active[*k]);
    if live().any(|(_, d)| occurs_deep(p, d)) {
        return Ok(None);
    }
    if c.pred_lits_of(p)
        .any(|(k, v)| k != literal && v.positive == lit.positive)
    {
        return Ok(None);
    }
    let mut partners = Vec::new();
    for (k, d) in live() {
        if k == clause {
            continue;
        }
        let candidates: Vec<usize> = d
            .pred_lits_of(p)
            .filter(|(_, v)| v.positive != lit.positive)
            .map(|(j, _)| j)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let d = d.rename_apart(fresh);
        for j in candidates {
            let Some(r) = binary_flat_l_resolvent(c, literal, &d, j) else {
                continue;
            };
            if !cc_valid(&r) {
                return Ok(None);
            }
            partners.push(PartnerEvidence {
                partner: k,
                resolvent: r.to_string(),
                cc_valid: true,
            });
        }
    }
    Ok(Some(BlockednessCertificate {
        clause,
        clause_text: c.to_string(),
        literal: c.lits()[literal].to_string(),
        partners,
    }))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BceReport {
    pub removed: Vec<usize>,
    pub certificates: Vec<BlockednessCertificate>,
    pub sweeps: usize,
}

/// Removes blocked clauses until none remains; the survivors keep their
/// input order.
pub fn run_bce(clauses: &[Clause]) -> (Vec<Clause>, BceReport) {
    let order: Vec<usize> = (0..clauses.len()).collect();
    run_bce_with_order(clauses, &order)
}

/// Like [`run_bce`], scanning candidates in the given order.
pub fn run_bce_with_order(clauses: &[Clause], order: &[usize]) -> (Vec<Clause>, BceReport) {
    let mut active = vec![true; clauses.len()];
    let mut report = BceReport::default();
    let mut fresh = Fresh::avoiding(clauses);
    loop {
        report.sweeps += 1;
        let mut changed = false;
        for &k in order {
            if !active[k] {
                continue;
            }
            let pred_lits: Vec<usize> = clauses[k].pred_lits().map(|(i, _)| i).collect();
            for i in pred_lits {
                let cert =
                    is_blocked(clauses, &active, k, i, &mut fresh).expect("predicate literal");
                if let Some(cert) = cert {
                    active[k] = false;
                    report.removed.push(k);
                    report.certificates.push(cert);
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let kept = clauses
        .iter()
        .zip(&active)
        .filter(|(_, a)| **a)
        .map(|(c, _)| c.clone())
        .collect();
    (kept, report)
}
