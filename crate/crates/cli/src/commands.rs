use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Value};
use steiner_core::analysis::{
    forced_candidate_suite, graham_pollak_suite, invariance_experiment, nullvector_report, oracle_equivalence_suite,
    parity_theorem_check, proof_identity_suite, row_difference_suite, table_comparison, InvarianceMode,
};
use steiner_core::factor::factor_integer;
use steiner_core::newton::NewtonOptions;
use steiner_core::steiner::{build_hypermatrix, gradient_system, steiner_polynomial};
use steiner_core::tree::{canonical_code, enumerate_trees, labeled_trees, parse_tree, Graph6, TreeMode};
use steiner_core::tree::LABELED_MATERIALIZE_LIMIT;
use steiner_core::{Context, Error, ResultantMode, Status, Tree, VerificationReport};

use crate::args::{Command, Mode, Subject, TreeSelection};
use crate::output::Timings;

/// Records for standard output plus the overall status.
pub struct Outcome {
    pub claim: String,
    pub status: Status,
    pub records: Vec<Value>,
    /// Report-level fields carried into the summary.
    pub reports: Vec<Value>,
}

impl Outcome {
    fn plain(claim: &str, status: Status, records: Vec<Value>) -> Self {
        Self { claim: claim.to_string(), status, records, reports: Vec::new() }
    }

    fn from_reports(claim: &str, reports: Vec<VerificationReport>, timings: &mut Timings) -> Self {
        let status = Status::combine(reports.iter().map(|r| r.status));
        let mut records = Vec::new();
        let mut summaries = Vec::new();
        for r in reports {
            timings.record(&r.claim, r.wall_ms);
            for i in &r.instances {
                records.push(json!({ "claim": r.claim, "tree": i.tree, "result": i.result, "evidence": i.evidence }));
            }
            summaries.push(json!({
                "claim": r.claim, "status": r.status, "params": r.params, "instances": r.instances.len(),
                "started": r.started, "wall_ms": r.wall_ms, "seed": r.seed, "versions": r.versions,
            }));
        }
        Self { claim: claim.to_string(), status, records, reports: summaries }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub fn load_tree(source: &str) -> Result<Tree, Error> {
    let path = Path::new(source);
    if path.is_file() {
        parse_tree(&std::fs::read_to_string(path)?)
    } else {
        parse_tree(source)
    }
}

fn select_trees(select: &TreeSelection) -> Result<Vec<Tree>, Error> {
    match (&select.tree, select.n) {
        (Some(source), _) => Ok(vec![load_tree(source)?]),
        (None, Some(n)) => enumerate_trees(n, TreeMode::Unlabeled),
        (None, None) => Err(usage("give --tree or --n")),
    }
}

fn tree_record(tree: &Tree) -> Value {
    json!({ "n": tree.v_count(), "code": canonical_code(tree).to_string(), "graph6": tree.to_graph6(), "edges": tree.edges() })
}

fn resultant_mode(mode: Mode) -> Result<ResultantMode, Error> {
    match mode {
        Mode::Exact => Ok(ResultantMode::Exact),
        Mode::Witness => Ok(ResultantMode::Witness),
        Mode::ZeroCertify => Ok(ResultantMode::ZeroCertify),
        Mode::Modular => Err(usage("resultant supports --mode exact|witness|zero-certify")),
    }
}

pub fn run(command: &Command, ctx: &Context, timings: &mut Timings) -> Result<Outcome, Error> {
    match command {
        Command::Trees { n, labeled } => {
            let trees: Vec<Tree> = if *labeled {
                if *n > LABELED_MATERIALIZE_LIMIT {
                    return Err(Error::SizeLimit(format!("labeled listing supports n <= {LABELED_MATERIALIZE_LIMIT}")));
                }
                labeled_trees(*n)?.collect()
            } else {
                enumerate_trees(*n, TreeMode::Unlabeled)?
            };
            timings.lap("enumerate");
            Ok(Outcome::plain("trees", Status::Verified, trees.iter().map(tree_record).collect()))
        }
        Command::Steiner { tree, k } => {
            let tree = load_tree(tree)?;
            let record = json!({
                "tree": tree_record(&tree),
                "k": k,
                "hypermatrix": build_hypermatrix(&tree, *k)?,
                "polynomial": steiner_polynomial(&tree, *k)?,
                "gradient": gradient_system(&tree, *k)?.forms_with(ctx.normalization),
                "normalization": ctx.normalization,
            });
            timings.lap("build");
            Ok(Outcome::plain("steiner", Status::Verified, vec![record]))
        }
        Command::Resultant { select, k, mode, .. } => {
            let mode = resultant_mode(*mode)?;
            let mut records = Vec::new();
            let mut statuses = Vec::new();
            for tree in select_trees(select)? {
                let outcome = ctx.resultant(&tree, *k, mode)?;
                let result = if outcome.is_some() { Status::Verified } else { Status::Inconclusive };
                statuses.push(result);
                records.push(json!({
                    "claim": "resultant", "tree": canonical_code(&tree).to_string(), "result": result,
                    "evidence": { "graph6": tree.to_graph6(), "k": k, "mode": mode.as_str(), "outcome": outcome },
                }));
                timings.lap(&format!("resultant {}", canonical_code(&tree).to_hex()));
            }
            Ok(Outcome::plain("resultant", Status::combine(statuses), records))
        }
        Command::Verify { subject } => verify(subject, ctx, timings),
        Command::Conjecture { k, n, mode, primes } => {
            let mode = match mode {
                Mode::Exact => InvarianceMode::Exact,
                Mode::Modular => InvarianceMode::Modular { primes: *primes },
                _ => return Err(usage("conjecture supports --mode exact|modular")),
            };
            let report = invariance_experiment(ctx, *k, *n, mode)?;
            Ok(Outcome::from_reports("invariance", vec![report], timings))
        }
        Command::Nullvector { select, k, restarts, max_iterations, damping, tolerance } => {
            let options = NewtonOptions {
                restarts: *restarts,
                max_iterations: *max_iterations,
                damping: *damping,
                tolerance: *tolerance,
                seed: ctx.seed,
            };
            let reports =
                select_trees(select)?.iter().map(|t| nullvector_report(t, *k, &options)).collect::<Result<Vec<_>, _>>()?;
            Ok(Outcome::from_reports("nullvector", reports, timings))
        }
        Command::Factor { value } => {
            let n: BigInt = value.trim().parse().map_err(|_| usage(format!("not an integer: {value:?}")))?;
            let f = factor_integer(&n)?;
            timings.lap("factor");
            let status = if f.is_complete() { Status::Verified } else { Status::Inconclusive };
            let record = json!({ "value": n.to_string(), "factored": f.to_string(), "factorization": f });
            Ok(Outcome::plain("factor", status, vec![record]))
        }
        Command::CompareTable { k, n, table_index } => {
            let report = table_comparison(ctx, *k, *n, (*table_index).into())?;
            Ok(Outcome::from_reports("table-comparison", vec![report], timings))
        }
    }
}

fn verify(subject: &Subject, ctx: &Context, timings: &mut Timings) -> Result<Outcome, Error> {
    match subject {
        Subject::GrahamPollak { max_n } => {
            Ok(Outcome::from_reports("graham-pollak", vec![graham_pollak_suite(*max_n)?], timings))
        }
        Subject::Parity { k, n, mode } => {
            let exact = match mode {
                Mode::Exact => true,
                Mode::Witness => false,
                _ => return Err(usage("parity supports --mode exact|witness")),
            };
            Ok(Outcome::from_reports("parity", vec![parity_theorem_check(ctx, *k, *n, exact)?], timings))
        }
        Subject::Propositions { max_n, k } => {
            let reports = vec![
                row_difference_suite(*max_n, k, ctx.seed)?,
                forced_candidate_suite(*max_n, k)?,
                oracle_equivalence_suite((*max_n).min(6), 4)?,
            ];
            Ok(Outcome::from_reports("propositions", reports, timings))
        }
        Subject::ProofIdentity { max_n, k, trials } => {
            let report = proof_identity_suite(*max_n, k, *trials, ctx.seed)?;
            Ok(Outcome::from_reports("proof-identity", vec![report], timings))
        }
    }
}
