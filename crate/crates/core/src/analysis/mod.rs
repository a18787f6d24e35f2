//! Verification suites producing [`VerificationReport`]s.

mod identities;
mod resultants;
mod table;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::resultant::{
    resultant_exact, resultant_nonzero_witness, resultant_zero_certify, MacaulayResultantProblem, ResultantOptions,
    ResultantOutcome, WitnessResult, ZeroCheck,
};
use crate::steiner::{gradient_system, Normalization};
use crate::tree::{canonical_code, Tree};

pub use identities::{
    forced_candidate_check, forced_candidate_suite, graham_pollak_suite, nullvector_report, oracle_equivalence_suite,
    proof_identity_at, proof_identity_check, proof_identity_suite, row_difference_suite,
};
pub use resultants::{invariance_experiment, linear_case_suite, parity_theorem_check, table_comparison, InvarianceMode};
pub use table::{obstruction_prime, reference_row, TableIndex, TableRow, REFERENCE_TABLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Inconclusive,
    Refuted,
}

impl Status {
    /// Refuted dominates inconclusive, which dominates verified.
    pub fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
        statuses.into_iter().max().unwrap_or(Status::Verified)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    /// Canonical code of the tree, or a label for aggregate instances.
    pub tree: String,
    pub result: Status,
    pub evidence: Value,
}

impl Instance {
    pub fn for_tree(tree: &Tree, result: Status, evidence: Value) -> Self {
        Self { tree: canonical_code(tree).to_string(), result, evidence }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub params: Value,
    pub status: Status,
    pub instances: Vec<Instance>,
    /// RFC 3339 start time.
    pub started: String,
    pub wall_ms: u64,
    pub seed: Option<u64>,
    pub versions: BTreeMap<String, String>,
}

impl VerificationReport {
    pub(crate) fn finish(
        claim: &str,
        params: Value,
        seed: Option<u64>,
        started: (String, Instant),
        instances: Vec<Instance>,
    ) -> Self {
        let status = Status::combine(instances.iter().map(|i| i.result));
        Self {
            claim: claim.to_string(),
            params,
            status,
            instances,
            started: started.0,
            wall_ms: started.1.elapsed().as_millis() as u64,
            seed,
            versions: versions(),
        }
    }
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([("steiner-core".to_string(), env!("CARGO_PKG_VERSION").to_string())])
}

pub(crate) fn start_clock() -> (String, Instant) {
    (chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true), Instant::now())
}

/// How a resultant is to be decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResultantMode {
    Exact,
    Witness,
    ZeroCertify,
}

impl ResultantMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ResultantMode::Exact => "exact",
            ResultantMode::Witness => "witness",
            ResultantMode::ZeroCertify => "zero-certify",
        }
    }
}

/// Shared settings for resultant-backed suites.
#[derive(Debug)]
pub struct Context {
    pub seed: u64,
    pub normalization: Normalization,
    pub early_termination: bool,
    pub witness_attempts: usize,
    pub cache: Option<Cache>,
}

impl Default for Context {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            normalization: Normalization::default(),
            early_termination: false,
            witness_attempts: DEFAULT_WITNESS_ATTEMPTS,
            cache: None,
        }
    }
}

pub const DEFAULT_WITNESS_ATTEMPTS: usize = 8;

/// Largest Macaulay matrix attempted in any mode.
pub const MAX_MACAULAY_COLUMNS: usize = 2048;

/// `(k, largest v_count)` pairs for which exact and zero-certify modes run.
pub const EXACT_FEASIBLE: [(u32, usize); 6] = [(2, 9), (3, 5), (4, 5), (5, 4), (6, 4), (8, 3)];

pub fn exact_feasible(k: u32, v_count: usize) -> bool {
    EXACT_FEASIBLE.iter().any(|&(kk, max_v)| kk == k && v_count <= max_v)
}

fn feasible_set() -> String {
    EXACT_FEASIBLE.iter().map(|(k, v)| format!("(k={k}, n<={v})")).collect::<Vec<_>>().join(", ")
}

pub(crate) fn require_exact_feasible(k: u32, v_count: usize) -> Result<()> {
    if exact_feasible(k, v_count) {
        Ok(())
    } else {
        Err(Error::SizeLimit(format!(
            "exact resultant at k={k}, n={v_count} is outside the feasible set {}",
            feasible_set()
        )))
    }
}

/// Number of Macaulay columns for the gradient system at `(k, v_count)`.
pub fn macaulay_columns(k: u32, v_count: usize) -> u128 {
    let degree = v_count as u128 * (k as u128 - 2) + 1;
    // C(D + n - 1, n - 1)
    let mut c: u128 = 1;
    for i in 1..v_count as u128 {
        c = c * (degree + i) / i;
    }
    c
}

impl Context {
    fn options(&self) -> ResultantOptions {
        ResultantOptions { seed: self.seed, early_termination: self.early_termination }
    }

    pub fn problem(&self, tree: &Tree, k: u32) -> Result<MacaulayResultantProblem> {
        let columns = macaulay_columns(k, tree.v_count());
        if columns > MAX_MACAULAY_COLUMNS as u128 {
            return Err(Error::SizeLimit(format!(
                "Macaulay matrix at k={k}, n={} has {columns} columns (limit {MAX_MACAULAY_COLUMNS})",
                tree.v_count()
            )));
        }
        let forms = gradient_system(tree, k)?.forms_with(self.normalization);
        MacaulayResultantProblem::assemble_preconditioned(forms, self.seed)
    }

    /// Resultant of the tree's gradient system in the requested mode, through
    /// the cache when one is configured. `None` means an inconclusive witness
    /// search. Exact and zero-certify modes respect [`EXACT_FEASIBLE`].
    ///
    /// The computation runs on the canonically labeled copy of `tree`, so the
    /// outcome (form order and certificates included) depends only on the
    /// cache key.
    pub fn resultant(&self, tree: &Tree, k: u32, mode: ResultantMode) -> Result<Option<ResultantOutcome>> {
        if mode != ResultantMode::Witness {
            require_exact_feasible(k, tree.v_count())?;
        }
        let code = canonical_code(tree);
        let key = Cache::key(&code, k, mode.as_str(), self.normalization);
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get(&key)) {
            return Ok(Some(hit));
        }
        let problem = self.problem(&code.to_tree(), k)?;
        let outcome = match mode {
            ResultantMode::Exact => Some(resultant_exact(&problem, &self.options())?),
            ResultantMode::Witness => match resultant_nonzero_witness(&problem, self.seed, self.witness_attempts)? {
                WitnessResult::Witness(o) => Some(o),
                WitnessResult::Inconclusive { .. } => None,
            },
            ResultantMode::ZeroCertify => match resultant_zero_certify(&problem, &self.options())? {
                ZeroCheck::Zero(o) | ZeroCheck::NotZero(o) => Some(o),
            },
        }
        .map(|o| o.with_normalization(self.normalization));
        if let (Some(cache), Some(o)) = (&self.cache, &outcome) {
            cache.put(&key, o)?;
        }
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_counts() {
        assert_eq!(macaulay_columns(4, 4), 220);
        assert_eq!(macaulay_columns(4, 5), 1365);
        assert_eq!(macaulay_columns(6, 4), 1140);
        assert_eq!(macaulay_columns(3, 5), 210);
        assert_eq!(macaulay_columns(2, 9), 9);
        assert_eq!(macaulay_columns(4, 2), 6);
    }

    #[test]
    fn feasibility_table() {
        assert!(exact_feasible(4, 5));
        assert!(!exact_feasible(4, 6));
        assert!(!exact_feasible(7, 2));
        let err = require_exact_feasible(6, 5).unwrap_err();
        assert!(matches!(err, Error::SizeLimit(ref m) if m.contains("(k=6, n<=4)")));
    }

    #[test]
    fn status_combination() {
        assert_eq!(Status::combine([]), Status::Verified);
        assert_eq!(Status::combine([Status::Verified, Status::Inconclusive]), Status::Inconclusive);
        assert_eq!(Status::combine([Status::Refuted, Status::Inconclusive]), Status::Refuted);
    }

    #[test]
    fn context_uses_cache() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = Context { cache: Some(Cache::new(dir.path())), ..Context::default() };
        let tree = Tree::path(3).unwrap();
        let first = ctx.resultant(&tree, 4, ResultantMode::Exact).unwrap().unwrap();
        let second = ctx.resultant(&tree, 4, ResultantMode::Exact).unwrap().unwrap();
        assert_eq!(first, second);
        let cache = ctx.cache.as_ref().unwrap();
        assert_eq!((cache.hits(), cache.misses()), (1, 1));
    }
}
