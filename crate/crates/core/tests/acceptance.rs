//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use steiner_core::analysis::{
    graham_pollak_suite, invariance_experiment, linear_case_suite, oracle_equivalence_suite, parity_theorem_check,
    proof_identity_suite, row_difference_suite, table_comparison, InvarianceMode, TableIndex,
};
use steiner_core::newton::{newton_nullvector, projective_distance, NewtonOptions, NewtonOutcome};
use steiner_core::steiner::gradient_system;
use steiner_core::tree::{enumerate_trees, TreeMode};
use steiner_core::{Context, Normalization, Status, Tree, VerificationReport};

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Check + 'a>);

fn verified(r: &VerificationReport) -> Check {
    match r.status {
        Status::Verified => Ok(format!("{} x{}", r.claim, r.instances.len())),
        other => {
            let bad: Vec<_> = r.instances.iter().filter(|i| i.result != Status::Verified).map(|i| &i.tree).collect();
            Err(format!("{} {:?} on {:?}", r.claim, other, bad))
        }
    }
}

fn all(parts: Vec<Check>) -> Check {
    let mut notes = Vec::new();
    for p in parts {
        notes.push(p?);
    }
    Ok(notes.join("; "))
}

fn run<E: std::fmt::Display>(step: impl FnOnce() -> Result<Check, E>) -> Check {
    step().map_err(|e| e.to_string())?
}

fn graham_pollak() -> Check {
    run(|| Ok::<_, steiner_core::Error>(verified(&graham_pollak_suite(9)?)))
}

fn linear_case(ctx: &Context) -> Check {
    run(|| Ok::<_, steiner_core::Error>(verified(&linear_case_suite(ctx, 7)?)))
}

fn even_nonvanishing(ctx: &Context) -> Check {
    run(|| {
        let mut parts = Vec::new();
        for (k, n) in [(4, 2), (4, 3), (4, 4), (4, 5), (6, 2), (6, 3), (6, 4), (8, 2), (8, 3)] {
            parts.push(verified(&parity_theorem_check(ctx, k, n, false)?).map(|s| format!("({k},{n}) {s}")));
        }
        for (k, n) in [(4, 2), (4, 3), (6, 2), (6, 3), (8, 2), (8, 3)] {
            let r = parity_theorem_check(ctx, k, n, true)?;
            let exact = r.instances.iter().all(|i| i.evidence["outcome"]["mode"] == "exact");
            parts.push(if exact {
                verified(&r).map(|_| format!("({k},{n}) exact {}", r.instances[0].evidence["outcome"]["value"]))
            } else {
                Err(format!("({k},{n}) missing exact value"))
            });
        }
        Ok::<_, steiner_core::Error>(all(parts))
    })
}

fn odd_vanishing(ctx: &Context) -> Check {
    run(|| {
        let mut parts = Vec::new();
        for (k, n) in [(3, 3), (3, 4), (3, 5), (5, 3), (5, 4)] {
            let r = parity_theorem_check(ctx, k, n, false)?;
            let certified = r.instances.iter().all(|i| i.evidence["outcome"]["mode"] == "zero-certificate");
            parts.push(if certified { verified(&r) } else { Err(format!("({k},{n}) missing certificate")) });
        }
        let full = Context { normalization: Normalization::FullDp, seed: ctx.seed, ..Context::default() };
        let r = parity_theorem_check(&full, 3, 2, false)?;
        let value: Option<BigInt> = r.instances[0].evidence["outcome"]["value"].as_str().and_then(|s| s.parse().ok());
        parts.push(match value {
            Some(v) if v.abs() == BigInt::from(243) => verified(&r).map(|_| format!("(3,2) |Res| = 243 ({v})")),
            other => Err(format!("(3,2) value {other:?}")),
        });
        Ok::<_, steiner_core::Error>(all(parts))
    })
}

fn invariance(ctx: &Context) -> Check {
    run(|| {
        let a = invariance_experiment(ctx, 4, 4, InvarianceMode::Exact)?;
        let b = invariance_experiment(ctx, 4, 5, InvarianceMode::Exact)?;
        let c = invariance_experiment(ctx, 6, 4, InvarianceMode::Modular { primes: 5 })?;
        let counts = (a.instances.len(), b.instances.len(), c.instances.len());
        let shape = if counts == (2, 3, 2) { Ok(format!("trees {counts:?}")) } else { Err(format!("trees {counts:?}")) };
        Ok::<_, steiner_core::Error>(all(vec![shape, verified(&a), verified(&b), verified(&c)]))
    })
}

fn table(ctx: &Context) -> Check {
    run(|| {
        let mut parts = Vec::new();
        for (k, n) in [(4, 2), (6, 2), (8, 2), (4, 3)] {
            let r = table_comparison(ctx, k, n, TableIndex::Kn)?;
            let e = &r.instances[0].evidence;
            let emitted = ["tabulated", "computed", "ratio"].iter().all(|f| e.get(*f).is_some());
            parts.push(if emitted {
                verified(&r).map(|_| format!("({k},{n}) ratio {}", e["ratio"]))
            } else {
                Err(format!("({k},{n}) incomplete evidence"))
            });
        }
        Ok::<_, steiner_core::Error>(all(parts))
    })
}

fn identities() -> Check {
    run(|| {
        let rows = row_difference_suite(5, &[4, 6], 11)?;
        let proof = proof_identity_suite(6, &[2, 4, 6], 20, 12)?;
        Ok::<_, steiner_core::Error>(all(vec![verified(&rows), verified(&proof)]))
    })
}

fn oracle() -> Check {
    run(|| Ok::<_, steiner_core::Error>(verified(&oracle_equivalence_suite(6, 4)?)))
}

fn nullvector() -> Check {
    run(|| {
        let opts = NewtonOptions::default();
        let p3 = gradient_system(&Tree::path(3)?, 3)?.forms;
        let target = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, -1.0), Complex64::new(0.0, 1.0)];
        let conj: Vec<Complex64> = target.iter().map(|z| z.conj()).collect();
        let first = match newton_nullvector::<f64>(&p3, &opts)? {
            NewtonOutcome::Found(hit) => {
                let dist = projective_distance(&hit.point, &target).min(projective_distance(&hit.point, &conj));
                if hit.residual < 1e-10 && dist < 1e-8 {
                    Ok(format!("(3,3) residual {:.1e}, class distance {dist:.1e}", hit.residual))
                } else {
                    Err(format!("(3,3) residual {:.1e}, class distance {dist:.1e}", hit.residual))
                }
            }
            NewtonOutcome::NotFound { .. } => Err("(3,3) not found".into()),
        };
        let trees = enumerate_trees(4, TreeMode::Unlabeled)?;
        let mut second = Vec::new();
        for t in &trees {
            let forms = gradient_system(t, 4)?.forms;
            second.push(match newton_nullvector::<f64>(&forms, &opts)? {
                NewtonOutcome::NotFound { restarts: 100, .. } => Ok("(4,4) not found".to_string()),
                other => Err(format!("(4,4) {other:?}")),
            });
        }
        Ok::<_, steiner_core::Error>(all(std::iter::once(first).chain(second).collect()))
    })
}

fn main() -> ExitCode {
    let ctx = Context::default();
    let criteria: Vec<Criterion> = vec![
        ("graham-pollak n<=9", Duration::from_secs(10), Box::new(graham_pollak)),
        ("linear case k=2 n<=7", Duration::from_secs(60), Box::new(|| linear_case(&ctx))),
        ("even-k nonvanishing", Duration::from_secs(600), Box::new(|| even_nonvanishing(&ctx))),
        ("odd-k vanishing", Duration::from_secs(1800), Box::new(|| odd_vanishing(&ctx))),
        ("invariance (4,4) (4,5) (6,4)", Duration::from_secs(7200), Box::new(|| invariance(&ctx))),
        ("table comparison", Duration::from_secs(600), Box::new(|| table(&ctx))),
        ("closed-form identities", Duration::from_secs(300), Box::new(identities)),
        ("oracle equivalence", Duration::from_secs(120), Box::new(oracle)),
        ("numeric nullvector", Duration::from_secs(600), Box::new(nullvector)),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(note) if elapsed > *budget => Err(format!("{note}; over budget {budget:?}")),
            other => other,
        };
        let (tag, note) = match &result {
            Ok(note) => ("PASS", note),
            Err(note) => {
                failures += 1;
                ("FAIL", note)
            }
        };
        println!("{tag} {} {name} [{:.1}s] {note}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
