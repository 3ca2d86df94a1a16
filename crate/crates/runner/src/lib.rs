//! Verification of every case in the case book, the summary report, and the
//! operations behind the command-line interface.

use std::collections::BTreeMap;

use fano_casebook::{load, Case, CaseError, Mechanism, CASE_IDS};
use rayon::prelude::*;

pub mod pipeline;
pub mod report;

pub use pipeline::{check_case, compute, quantity, CaseOutcome, CheckResult, Computed, Status};
pub use report::{markdown, Row};

/// A loaded case with its computed invariants.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub case: Case,
    pub computed: Computed,
}

/// Loads and computes one case, computing the parent of a pullback first.
pub fn prepare(id: &str) -> Result<Prepared, CaseError> {
    let case = load(id)?;
    let computed = if case.mechanism() == Mechanism::BetaPullback {
        let parent = prepare(case.doc.parent.as_deref().expect("pullbacks name a parent"))?;
        compute(&case, Some((&parent.case, &parent.computed)))
    } else {
        compute(&case, None)
    };
    Ok(Prepared { case, computed })
}

pub fn verify_case(id: &str) -> Result<CaseOutcome, CaseError> {
    let p = prepare(id)?;
    Ok(check_case(&p.case, &p.computed))
}

/// All cases in manifest order. Parents are computed once and shared with their
/// pullbacks; the order of results does not depend on scheduling.
pub fn verify_all() -> Result<Vec<CaseOutcome>, CaseError> {
    let cases: Vec<Case> = CASE_IDS.par_iter().map(|id| load(id)).collect::<Result<_, _>>()?;
    let roots: BTreeMap<String, Computed> = cases
        .par_iter()
        .filter(|c| c.mechanism() != Mechanism::BetaPullback)
        .map(|c| (c.id().to_string(), compute(c, None)))
        .collect();
    let by_id: BTreeMap<&str, &Case> = cases.iter().map(|c| (c.id(), c)).collect();
    Ok(cases
        .par_iter()
        .map(|c| {
            let own;
            let computed = match c.mechanism() {
                Mechanism::BetaPullback => {
                    let pid = c.doc.parent.as_deref().expect("pullbacks name a parent");
                    own = compute(c, Some((by_id[pid], &roots[pid])));
                    &own
                }
                _ => &roots[c.id()],
            };
            check_case(c, computed)
        })
        .collect())
}

/// Runs `verify_all` on a pool of the given size.
pub fn verify_all_with_jobs(jobs: Option<usize>) -> Result<Vec<CaseOutcome>, CaseError> {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CaseError::Json(e.to_string()))?
            .install(verify_all),
        None => verify_all(),
    }
}
