//! Exact identity checks that do not need resultants.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{start_clock, Instance, Status, VerificationReport};
use crate::error::{Error, Result};
use crate::linalg::bareiss_det;
use crate::newton::{homogeneity_defect, newton_nullvector, NewtonOptions, NewtonOutcome};
use crate::poly::{pit_equal, HomogeneousForm};
use crate::steiner::{
    forced_candidate, gradient_system, multisets, row_difference_direct, row_difference_form, steiner_distance,
    steiner_distance_oracle,
};
use crate::tree::{enumerate_trees, labeled_trees, Side, Tree, TreeMode};

fn unlabeled_range(min_v: usize, max_v: usize) -> Result<Vec<Tree>> {
    Ok((min_v..=max_v)
        .map(|n| enumerate_trees(n, TreeMode::Unlabeled))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect())
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Verified
    } else {
        Status::Refuted
    }
}

/// `det(D) = (1 - n)(-2)^(n-2)` for every unlabeled tree with `2 <= n <= max_v`.
pub fn graham_pollak_suite(max_v: usize) -> Result<VerificationReport> {
    let started = start_clock();
    if !(2..=10).contains(&max_v) {
        return Err(Error::InvalidArgument(format!("graham-pollak needs 2 <= max_n <= 10, got {max_v}")));
    }
    let instances = unlabeled_range(2, max_v)?
        .par_iter()
        .map(|tree| {
            let n = tree.v_count();
            let d = tree.distance_matrix().into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect();
            let det = bareiss_det(d);
            let expected = BigInt::from(1 - n as i64) * num_traits::pow(BigInt::from(-2), n - 2);
            let mut evidence = json!({ "n": n, "det": det.to_string(), "expected": expected.to_string() });
            if det != expected {
                evidence["counterexample"] = json!({ "edges": tree.edges() });
            }
            Instance::for_tree(tree, verdict(det == expected), evidence)
        })
        .collect();
    Ok(VerificationReport::finish("graham-pollak", json!({ "max_n": max_v }), None, started, instances))
}

/// Cut-based Steiner distance against the brute-force minimal connected
/// subgraph, on every multiset of size `2..=max_k` of every labeled tree with
/// `n <= max_v`. One aggregate instance per `(n, k)`; mismatches are listed.
pub fn oracle_equivalence_suite(max_v: usize, max_k: usize) -> Result<VerificationReport> {
    let started = start_clock();
    if !(1..=7).contains(&max_v) || !(1..=8).contains(&max_k) {
        return Err(Error::InvalidArgument(format!("oracle check needs n <= 7 and k <= 8, got n={max_v}, k={max_k}")));
    }
    let mut instances = Vec::new();
    for n in 1..=max_v {
        let trees: Vec<Tree> = labeled_trees(n)?.collect();
        for k in 1..=max_k {
            let sets = multisets(n, k);
            let mismatches: Vec<_> = trees
                .par_iter()
                .flat_map_iter(|t| {
                    sets.iter().filter_map(move |s| {
                        let fast = steiner_distance(t, s).ok()?;
                        let slow = steiner_distance_oracle(t, s).ok()?;
                        (fast != slow).then(|| json!({ "edges": t.edges(), "multiset": s, "fast": fast, "oracle": slow }))
                    })
                })
                .collect();
            let evidence = json!({
                "n": n, "k": k, "labeled_trees": trees.len(), "multisets": sets.len(),
                "comparisons": trees.len() * sets.len(), "mismatches": mismatches,
            });
            instances.push(Instance { tree: format!("labeled n={n} k={k}"), result: verdict(mismatches.is_empty()), evidence });
        }
    }
    Ok(VerificationReport::finish(
        "oracle-equivalence",
        json!({ "max_n": max_v, "max_k": max_k }),
        None,
        started,
        instances,
    ))
}

fn forms_agree(f: &HomogeneousForm, g: &HomogeneousForm, seed: u64) -> bool {
    pit_equal(f, g, 2, seed) && f == g
}

/// Row difference across each edge: the two-valued closed form equals the
/// entrywise expansion of the contracted matrix, and its contraction with
/// `x` equals `g_a - g_b`. PIT filters, structural equality decides.
pub fn row_difference_suite(max_v: usize, ks: &[u32], seed: u64) -> Result<VerificationReport> {
    let started = start_clock();
    if !(2..=7).contains(&max_v) {
        return Err(Error::InvalidArgument(format!("row difference needs 2 <= max_n <= 7, got {max_v}")));
    }
    let trees = unlabeled_range(2, max_v)?;
    let jobs: Vec<(&Tree, u32)> = trees.iter().flat_map(|t| ks.iter().map(move |&k| (t, k))).collect();
    let instances = jobs
        .par_iter()
        .map(|&(tree, k)| {
            let g = gradient_system(tree, k)?.forms;
            let mut edges = Vec::new();
            let mut all_ok = true;
            for &edge in tree.edges() {
                let closed = row_difference_form(tree, k, edge)?;
                let direct = row_difference_direct(tree, k, edge)?;
                let entries_ok = closed.as_vector().iter().zip(&direct).all(|(c, d)| forms_agree(c, d, seed));
                let (a, b) = closed.cut.edge;
                let contraction_ok = forms_agree(&closed.contracted_with_x(), &g[a].sub(&g[b]), seed);
                all_ok &= entries_ok && contraction_ok;
                edges.push(json!({
                    "edge": [a, b], "side_a": closed.cut.side_a, "entries": entries_ok,
                    "contraction": contraction_ok, "in_stated_scope": closed.in_stated_scope,
                }));
            }
            Ok(Instance::for_tree(tree, verdict(all_ok), json!({ "k": k, "edges": edges })))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::finish(
        "row-difference",
        json!({ "max_n": max_v, "k": ks }),
        Some(seed),
        started,
        instances,
    ))
}

/// Leaf-deletion identity at one point. With `l` the smallest leaf and `m`
/// its neighbor, `x_l = 1`, `T' = T - l` and `x'` equal to `x` off `l`
/// except `x'_m = x_m + 1`, returns `g^T_m(x) - g^{T'}_m(x')`, which is
/// `2^(k-1) - 1` whenever `sum_{v != l} x_v = 1`.
pub fn proof_identity_at(tree: &Tree, k: u32, point: &[BigRational]) -> Result<BigRational> {
    if tree.v_count() < 3 {
        return Err(Error::InvalidArgument("leaf-deletion identity needs at least 3 vertices".into()));
    }
    if point.len() != tree.v_count() {
        return Err(Error::InvalidArgument(format!("point has {} coordinates, tree has {}", point.len(), tree.v_count())));
    }
    let leaf = tree.leaves()[0];
    let m = tree.neighbors(leaf)[0];
    let (reduced, map) = tree.without_leaf(leaf)?;
    let mut shifted = vec![BigRational::zero(); reduced.v_count()];
    for (v, x) in point.iter().enumerate() {
        if let Some(w) = map[v] {
            shifted[w] = if v == m { x + BigRational::one() } else { x.clone() };
        }
    }
    let g = gradient_system(tree, k)?.forms;
    let g_reduced = gradient_system(&reduced, k)?.forms;
    let m_reduced = map[m].expect("neighbor survives leaf deletion");
    Ok(g[m].evaluate(point)? - g_reduced[m_reduced].evaluate(&shifted)?)
}

fn random_constrained_point(rng: &mut ChaCha8Rng, tree: &Tree) -> Vec<BigRational> {
    let n = tree.v_count();
    let leaf = tree.leaves()[0];
    let mut x = vec![BigRational::zero(); n];
    let others: Vec<usize> = (0..n).filter(|&v| v != leaf).collect();
    let mut sum = BigRational::zero();
    for &v in &others[..others.len() - 1] {
        let r = BigRational::new(BigInt::from(rng.gen_range(-20i64..=20)), BigInt::from(rng.gen_range(1i64..=20)));
        sum += &r;
        x[v] = r;
    }
    x[*others.last().unwrap()] = BigRational::one() - sum;
    x[leaf] = BigRational::one();
    x
}

/// [`proof_identity_at`] on `trials` random rational points with the
/// required normalization.
pub fn proof_identity_check(tree: &Tree, k: u32, trials: usize, seed: u64) -> Result<VerificationReport> {
    let started = start_clock();
    let instance = proof_identity_instance(tree, k, trials, seed)?;
    Ok(VerificationReport::finish(
        "proof-identity",
        json!({ "k": k, "n": tree.v_count(), "trials": trials }),
        Some(seed),
        started,
        vec![instance],
    ))
}

fn proof_identity_instance(tree: &Tree, k: u32, trials: usize, seed: u64) -> Result<Instance> {
    let expected = BigRational::from_integer((BigInt::one() << (k - 1)) - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let x = random_constrained_point(&mut rng, tree);
        let diff = proof_identity_at(tree, k, &x)?;
        if diff != expected {
            failures.push(json!({
                "edges": tree.edges(),
                "point": x.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "difference": diff.to_string(),
            }));
        }
    }
    let evidence = json!({
        "k": k, "trials": trials, "expected": expected.to_string(),
        "leaf": tree.leaves()[0], "counterexamples": failures,
    });
    Ok(Instance::for_tree(tree, verdict(failures.is_empty()), evidence))
}

/// [`proof_identity_check`] over all unlabeled trees with `3 <= n <= max_v`.
pub fn proof_identity_suite(max_v: usize, ks: &[u32], trials: usize, seed: u64) -> Result<VerificationReport> {
    let started = start_clock();
    if !(3..=8).contains(&max_v) {
        return Err(Error::InvalidArgument(format!("proof identity needs 3 <= max_n <= 8, got {max_v}")));
    }
    let trees = unlabeled_range(3, max_v)?;
    let jobs: Vec<(usize, &Tree, u32)> =
        trees.iter().enumerate().flat_map(|(i, t)| ks.iter().map(move |&k| (i, t, k))).collect();
    let instances = jobs
        .par_iter()
        .map(|&(i, tree, k)| proof_identity_instance(tree, k, trials, seed ^ ((i as u64) << 8) ^ k as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::finish(
        "proof-identity",
        json!({ "max_n": max_v, "k": ks, "trials": trials }),
        Some(seed),
        started,
        instances,
    ))
}

fn forced_candidate_instance(tree: &Tree, k: u32) -> Result<Instance> {
    let candidate = forced_candidate(tree)?;
    let leaf = tree.leaves()[0];
    let mut cut_sums = Vec::new();
    let mut sums_ok = true;
    for &edge in tree.edges() {
        let cut = tree.edge_cut(edge)?;
        let far = match cut.side_of(leaf) {
            Side::A => &cut.side_b,
            Side::B => &cut.side_a,
        };
        let sum: i64 = far.iter().map(|&v| candidate[v]).sum();
        sums_ok &= sum == candidate[leaf];
        cut_sums.push(json!({ "edge": cut.edge, "far_side": far, "sum": sum }));
    }
    let x: Vec<BigInt> = candidate.iter().map(|&c| BigInt::from(c)).collect();
    let gradient = gradient_system(tree, k)?
        .forms
        .iter()
        .map(|f| f.evaluate(&x))
        .collect::<Result<Vec<BigInt>>>()?;
    let nonzero = gradient.iter().any(|g| !g.is_zero());
    let ok = sums_ok && (k % 2 == 1 || nonzero);
    let evidence = json!({
        "k": k, "candidate": candidate, "leaf": leaf, "cut_sums": cut_sums,
        "gradient": gradient.iter().map(|g| g.to_string()).collect::<Vec<_>>(), "gradient_nonzero": nonzero,
    });
    Ok(Instance::for_tree(tree, verdict(ok), evidence))
}

/// The vector `2 - deg(v)` satisfies every leaf-side edge-cut sum and, for
/// even `k`, is not a zero of the gradient.
pub fn forced_candidate_check(tree: &Tree, k: u32) -> Result<VerificationReport> {
    let started = start_clock();
    let instance = forced_candidate_instance(tree, k)?;
    Ok(VerificationReport::finish(
        "forced-candidate",
        json!({ "k": k, "n": tree.v_count() }),
        None,
        started,
        vec![instance],
    ))
}

pub fn forced_candidate_suite(max_v: usize, ks: &[u32]) -> Result<VerificationReport> {
    let started = start_clock();
    if !(2..=8).contains(&max_v) {
        return Err(Error::InvalidArgument(format!("forced candidate needs 2 <= max_n <= 8, got {max_v}")));
    }
    let trees = unlabeled_range(2, max_v)?;
    let jobs: Vec<(&Tree, u32)> = trees.iter().flat_map(|t| ks.iter().map(move |&k| (t, k))).collect();
    let instances =
        jobs.par_iter().map(|&(tree, k)| forced_candidate_instance(tree, k)).collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::finish("forced-candidate", json!({ "max_n": max_v, "k": ks }), None, started, instances))
}

/// Newton search for a gradient nullvector. Found points are verified to
/// the tolerance; not-found is inconclusive.
pub fn nullvector_report(tree: &Tree, k: u32, options: &NewtonOptions<f64>) -> Result<VerificationReport> {
    let started = start_clock();
    if tree.v_count() > 8 {
        return Err(Error::SizeLimit(format!("nullvector search supports n <= 8, got {}", tree.v_count())));
    }
    let forms = gradient_system(tree, k)?.forms;
    let outcome = newton_nullvector::<f64>(&forms, options)?;
    let (result, evidence) = match &outcome {
        NewtonOutcome::Found(hit) => {
            let defect = homogeneity_defect::<f64>(&forms, &hit.point)?;
            let point: Vec<[f64; 2]> = hit.point.iter().map(|z: &Complex64| [z.re, z.im]).collect();
            (
                Status::Verified,
                json!({
                    "found": true, "point": point, "residual": hit.residual, "restart": hit.restart,
                    "iterations": hit.iterations, "homogeneity_defect": defect,
                }),
            )
        }
        NewtonOutcome::NotFound { restarts, best_residual } => (
            Status::Inconclusive,
            json!({ "found": false, "restarts": restarts, "best_residual": best_residual, "conclusion": "none" }),
        ),
    };
    let params = json!({
        "k": k, "n": tree.v_count(), "restarts": options.restarts, "max_iterations": options.max_iterations,
        "damping": options.damping, "tolerance": options.tolerance,
    });
    Ok(VerificationReport::finish(
        "nullvector",
        params,
        Some(options.seed),
        started,
        vec![Instance::for_tree(tree, result, evidence)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn graham_pollak_small() {
        let r = graham_pollak_suite(6).unwrap();
        assert_eq!(r.status, Status::Verified);
        let six: Vec<_> = r.instances.iter().filter(|i| i.evidence["n"] == 6).collect();
        assert_eq!(six.len(), 6);
        assert!(six.iter().all(|i| i.evidence["det"] == "-80"));
        let four: Vec<_> = r.instances.iter().filter(|i| i.evidence["n"] == 4).collect();
        assert!(four.iter().all(|i| i.evidence["det"] == "-12"));
        assert_eq!(r.instances[0].evidence["det"], "-1");
    }

    #[test]
    fn proof_identity_examples() {
        let p3 = Tree::path(3).unwrap();
        assert_eq!(proof_identity_at(&p3, 4, &[q(1, 1), q(3, 5), q(2, 5)]).unwrap(), q(7, 1));
        for t in [q(0, 1), q(1, 3), q(-5, 2)] {
            let x = [q(1, 1), t.clone(), q(1, 1) - t];
            assert_eq!(proof_identity_at(&p3, 2, &x).unwrap(), q(1, 1));
        }
        let r = proof_identity_check(&Tree::star(5).unwrap(), 6, 20, 3).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.instances[0].evidence["expected"], "31");
    }

    #[test]
    fn forced_candidate_examples() {
        let r = forced_candidate_check(&Tree::path(4).unwrap(), 4).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.instances[0].evidence["candidate"], json!([1, 0, 0, 1]));
        let r = forced_candidate_check(&Tree::star(4).unwrap(), 6).unwrap();
        assert_eq!(r.instances[0].evidence["candidate"], json!([-1, 1, 1, 1]));
        assert_eq!(r.status, Status::Verified);
        let r = forced_candidate_check(&Tree::path(2).unwrap(), 4).unwrap();
        assert_eq!(r.instances[0].evidence["gradient"], json!(["7", "7"]));
    }

    #[test]
    fn row_difference_small() {
        let r = row_difference_suite(4, &[4, 6], 1).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.instances.len(), 2 * (1 + 1 + 2));
    }

    #[test]
    fn oracle_small() {
        let r = oracle_equivalence_suite(4, 3).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.instances.len(), 12);
    }

    #[test]
    fn nullvector_reports() {
        let opts = NewtonOptions::default();
        let r = nullvector_report(&Tree::path(3).unwrap(), 3, &opts).unwrap();
        assert_eq!(r.status, Status::Verified);
        let r = nullvector_report(&Tree::path(4).unwrap(), 4, &opts).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        assert_eq!(r.instances[0].evidence["conclusion"], "none");
    }
}
