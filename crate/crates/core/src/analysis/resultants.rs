//! Suites built on gradient resultants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::table::{obstruction_prime, reference_row, TableIndex};
use super::{require_exact_feasible, start_clock, Context, Instance, ResultantMode, Status, VerificationReport};
use crate::error::{Error, Result};
use crate::factor::factor_integer;
use crate::linalg::bareiss_det;
use crate::modular::PrimeStream;
use crate::resultant::{resultant_exact, resultant_mod_prime, MacaulayResultantProblem, OutcomeMode, ResultantOptions};
use crate::steiner::{gradient_system, normalization_exponent, normalization_factor, Normalization};
use crate::tree::{canonical_code, enumerate_trees, Tree, TreeMode};

fn outcome_json(outcome: &Option<crate::resultant::ResultantOutcome>) -> Value {
    match outcome {
        Some(o) => serde_json::to_value(o).expect("outcome serializes"),
        None => json!({ "mode": "nonzero-witness", "inconclusive": true }),
    }
}

/// Even `k`: every tree has a nonvanishing resultant (witness by default,
/// exact value with `exact`). Odd `k`, `n >= 3`: every tree has a zero
/// certificate. Odd `k`, `n = 2`: computed and reported as out of scope.
pub fn parity_theorem_check(ctx: &Context, k: u32, v_count: usize, exact: bool) -> Result<VerificationReport> {
    let started = start_clock();
    if k < 2 || !(2..=6).contains(&v_count) {
        return Err(Error::InvalidArgument(format!("parity check needs k >= 2 and 2 <= n <= 6, got k={k}, n={v_count}")));
    }
    let even = k.is_multiple_of(2);
    let mode = if even {
        if exact {
            ResultantMode::Exact
        } else {
            ResultantMode::Witness
        }
    } else if v_count == 2 {
        ResultantMode::Exact
    } else {
        ResultantMode::ZeroCertify
    };
    if mode != ResultantMode::Witness {
        require_exact_feasible(k, v_count)?;
    }
    let trees = enumerate_trees(v_count, TreeMode::Unlabeled)?;
    let in_scope = even || v_count >= 3;
    let instances = trees
        .par_iter()
        .map(|tree| {
            let outcome = ctx.resultant(tree, k, mode)?;
            let result = match &outcome {
                None => Status::Inconclusive,
                Some(o) if even && o.proves_nonzero() => Status::Verified,
                Some(o) if !even && v_count >= 3 && o.proves_zero() => Status::Verified,
                Some(o) if !in_scope && (o.proves_zero() || o.proves_nonzero()) => Status::Verified,
                Some(_) => Status::Refuted,
            };
            let mut evidence = json!({ "outcome": outcome_json(&outcome), "in_scope": in_scope });
            if result == Status::Refuted {
                evidence["counterexample"] = json!({ "edges": tree.edges() });
            }
            Ok(Instance::for_tree(tree, result, evidence))
        })
        .collect::<Result<Vec<_>>>()?;
    let claim = match (even, in_scope) {
        (true, _) => "even-order-nonvanishing",
        (false, true) => "odd-order-vanishing",
        (false, false) => "odd-order-outside-scope",
    };
    let params = json!({
        "k": k, "n": v_count, "mode": mode.as_str(), "normalization": ctx.normalization, "in_scope": in_scope,
    });
    Ok(VerificationReport::finish(claim, params, Some(ctx.seed), started, instances))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvarianceMode {
    Exact,
    /// Residues modulo this many random primes; evidence only.
    Modular { primes: usize },
}

pub const MIN_MODULAR_PRIMES: usize = 5;

/// Whether all unlabeled trees on `v_count` vertices share one resultant.
pub fn invariance_experiment(ctx: &Context, k: u32, v_count: usize, mode: InvarianceMode) -> Result<VerificationReport> {
    let started = start_clock();
    if k < 2 || v_count < 2 {
        return Err(Error::InvalidArgument(format!("invariance needs k >= 2 and n >= 2, got k={k}, n={v_count}")));
    }
    let trees = enumerate_trees(v_count, TreeMode::Unlabeled)?;
    let (values, params): (Vec<Value>, Value) = match mode {
        InvarianceMode::Exact => {
            require_exact_feasible(k, v_count)?;
            let values = trees
                .par_iter()
                .map(|t| {
                    let o = ctx.resultant(t, k, ResultantMode::Exact)?.expect("exact mode is conclusive");
                    Ok(serde_json::to_value(&o)?)
                })
                .collect::<Result<Vec<_>>>()?;
            (values, json!({ "k": k, "n": v_count, "mode": "exact", "normalization": ctx.normalization }))
        }
        InvarianceMode::Modular { primes } => {
            if primes < MIN_MODULAR_PRIMES {
                return Err(Error::InvalidArgument(format!(
                    "modular invariance needs at least {MIN_MODULAR_PRIMES} primes, got {primes}"
                )));
            }
            let mut stream = PrimeStream::new(ctx.seed ^ 0x1a7a_1a7a);
            let chosen: Vec<u64> = (0..primes).map(|_| stream.next_prime()).collect();
            let values = trees
                .par_iter()
                .map(|t| {
                    let problem = ctx.problem(t, k)?;
                    let residues = chosen
                        .iter()
                        .map(|&p| Ok(resultant_mod_prime(&problem, p)?.0.to_string()))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(json!({ "primes": chosen, "residues": residues }))
                })
                .collect::<Result<Vec<_>>>()?;
            let params = json!({
                "k": k, "n": v_count, "mode": "modular", "primes": primes,
                "normalization": ctx.normalization, "strength": "evidence",
            });
            (values, params)
        }
    };
    let key = |v: &Value| match mode {
        InvarianceMode::Exact => v["value"].clone(),
        InvarianceMode::Modular { .. } => v["residues"].clone(),
    };
    let reference = key(&values[0]);
    let first_code = canonical_code(&trees[0]).to_string();
    let instances = trees
        .iter()
        .zip(values)
        .map(|(tree, v)| {
            let agrees = key(&v) == reference;
            let mut evidence = json!({ "resultant": v });
            if !agrees {
                evidence["counterexample"] =
                    json!({ "reference_tree": first_code, "reference": reference, "edges": tree.edges() });
            }
            Instance::for_tree(tree, if agrees { Status::Verified } else { Status::Refuted }, evidence)
        })
        .collect();
    Ok(VerificationReport::finish("invariance", params, Some(ctx.seed), started, instances))
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Compares the computed resultant of every unlabeled tree on `v_count`
/// vertices against the tabulated value. The asserted check is that
/// `2^(k-1) - 1` divides the computed value; the ratio is reported.
pub fn table_comparison(ctx: &Context, k: u32, v_count: usize, index: TableIndex) -> Result<VerificationReport> {
    let started = start_clock();
    let row = reference_row(k, v_count, index)?;
    require_exact_feasible(k, v_count)?;
    let tabulated = row.value();
    let tabulated_factors = factor_integer(&tabulated)?;
    let q = obstruction_prime(k);
    let divides = |v: &BigInt| !v.is_zero() && (v % &q).is_zero();
    let conversion = match ctx.normalization {
        Normalization::Unscaled => None,
        Normalization::FullDp => Some(json!({
            "factor": format!("{k}^{}", normalization_exponent(k, v_count)),
            "value": normalization_factor(k, v_count).to_string(),
        })),
    };
    let trees = enumerate_trees(v_count, TreeMode::Unlabeled)?;
    let instances = trees
        .par_iter()
        .map(|tree| {
            let outcome = ctx.resultant(tree, k, ResultantMode::Exact)?.expect("exact mode is conclusive");
            let computed = outcome.value.clone().expect("exact outcome has a value");
            let computed_factors = if computed.is_zero() { None } else { Some(factor_integer(&computed)?) };
            let ratio = (!computed.is_zero()).then(|| BigRational::new(tabulated.clone(), computed.clone()));
            let evidence = json!({
                "tabulated": tabulated.to_string(),
                "tabulated_factored": row.factored(),
                "tabulated_factorization": tabulated_factors,
                "computed": computed.to_string(),
                "computed_factorization": computed_factors,
                "computed_sign": outcome.sign,
                "ratio": ratio.as_ref().map(rational_string),
                "abs_ratio": ratio.as_ref().map(|r| rational_string(&r.abs())),
                "obstruction_prime": q.to_string(),
                "obstruction_divides_computed": divides(&computed),
                "obstruction_divides_tabulated": divides(&tabulated),
                "conversion": conversion,
                "outcome": outcome,
            });
            let result = if divides(&computed) { Status::Verified } else { Status::Refuted };
            Ok(Instance::for_tree(tree, result, evidence))
        })
        .collect::<Result<Vec<_>>>()?;
    let params = json!({
        "k": k, "n": v_count, "row": row.index, "table_index": index.as_str(), "normalization": ctx.normalization,
    });
    Ok(VerificationReport::finish("table-comparison", params, Some(ctx.seed), started, instances))
}

/// For `k = 2` the gradient forms `D_r p` are linear with coefficient matrix
/// `2 D`, so their resultant is `2^n det(D)`; checked against a direct
/// fraction-free determinant for every unlabeled tree with `n <= max_v`.
pub fn linear_case_suite(ctx: &Context, max_v: usize) -> Result<VerificationReport> {
    let started = start_clock();
    if !(2..=9).contains(&max_v) {
        return Err(Error::InvalidArgument(format!("linear case needs 2 <= max_n <= 9, got {max_v}")));
    }
    let trees: Vec<Tree> = (2..=max_v)
        .map(|n| enumerate_trees(n, TreeMode::Unlabeled))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let instances = trees
        .par_iter()
        .map(|tree| {
            let n = tree.v_count();
            let forms = gradient_system(tree, 2)?.forms_with(Normalization::FullDp);
            let problem = MacaulayResultantProblem::assemble(forms)?;
            let outcome = resultant_exact(&problem, &ResultantOptions { seed: ctx.seed, early_termination: false })?;
            let res = outcome.value.clone().unwrap_or_default();
            let d = tree.distance_matrix().into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect();
            let det = bareiss_det(d);
            let expected = (BigInt::from(1) << n) * &det;
            let closed_form = BigInt::from(1 - n as i64) * num_traits::pow(BigInt::from(-2), n - 2);
            let ok = outcome.mode == OutcomeMode::Exact && res == expected && det == closed_form;
            let evidence = json!({
                "n": n,
                "resultant": res.to_string(),
                "det_distance": det.to_string(),
                "expected": expected.to_string(),
            });
            Ok(Instance::for_tree(tree, if ok { Status::Verified } else { Status::Refuted }, evidence))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::finish(
        "linear-case",
        json!({ "k": 2, "max_n": max_v, "normalization": Normalization::FullDp }),
        Some(ctx.seed),
        started,
        instances,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_small_cases() {
        let ctx = Context::default();
        let r = parity_theorem_check(&ctx, 4, 4, false).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.instances.len(), 2);
        let r = parity_theorem_check(&ctx, 3, 4, false).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.claim, "odd-order-vanishing");
        assert!(r.instances.iter().all(|i| i.evidence["outcome"]["mode"] == "zero-certificate"));
        let r = parity_theorem_check(&ctx, 3, 2, false).unwrap();
        assert_eq!(r.claim, "odd-order-outside-scope");
        assert_eq!(r.instances[0].evidence["outcome"]["value"].as_str().map(|s| s.trim_start_matches('-')), Some("3"));
        let full = Context { normalization: Normalization::FullDp, ..Context::default() };
        let r = parity_theorem_check(&full, 3, 2, false).unwrap();
        assert_eq!(r.instances[0].evidence["outcome"]["value"].as_str().map(|s| s.trim_start_matches('-')), Some("243"));
        assert!(matches!(parity_theorem_check(&ctx, 7, 3, false), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn invariance_small_cases() {
        let ctx = Context::default();
        let r = invariance_experiment(&ctx, 2, 5, InvarianceMode::Exact).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.instances.len(), 3);
        // unscaled forms at k = 2 have coefficient matrix D: det(D) = (1-5)(-2)^3 = 32
        assert_eq!(r.instances[0].evidence["resultant"]["value"], "32");
        let r = invariance_experiment(&ctx, 4, 4, InvarianceMode::Modular { primes: 5 }).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert!(invariance_experiment(&ctx, 4, 4, InvarianceMode::Modular { primes: 4 }).is_err());
    }

    #[test]
    fn table_rows_with_two_vertices() {
        let ctx = Context::default();
        let r = table_comparison(&ctx, 4, 2, TableIndex::Kn).unwrap();
        assert_eq!(r.status, Status::Verified);
        let e = &r.instances[0].evidence;
        assert_eq!(e["computed"], "-28");
        assert_eq!(e["ratio"], "1");
        let full = Context { normalization: Normalization::FullDp, ..Context::default() };
        let e = &table_comparison(&full, 4, 2, TableIndex::Kn).unwrap().instances[0].evidence;
        assert_eq!(e["computed"], "-114688");
        assert_eq!(e["abs_ratio"], "1/4096");
        assert_eq!(e["conversion"]["factor"], "4^6");
        assert!(table_comparison(&ctx, 5, 2, TableIndex::Kn).is_err());
    }

    #[test]
    fn linear_case_small() {
        let r = linear_case_suite(&Context::default(), 6).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.instances.len(), 1 + 1 + 2 + 3 + 6);
    }
}
