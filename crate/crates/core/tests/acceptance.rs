//! Acceptance suite: each criterion runs to completion and prints one
//! PASS/FAIL line; the process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use hurwitz_core::chamber::{fit_chamber_polynomial, parse_point, sample_chamber, MIN_VALIDATION};
use hurwitz_core::characters::CharacterTable;
use hurwitz_core::content::RegularFunction;
use hurwitz_core::engine::{connected_coefficient, is_on_wall, parity_vanishes};
use hurwitz_core::partitions::factorial;
use hurwitz_core::toda::{
    build_tau, shift_substitution_check, toda_first_equation_check, PowerSumProfile, TauOptions,
};
use hurwitz_core::walks::{
    verify_central_character, verify_jm_levels, walk_counts_by_target, WalkLimits,
};
use hurwitz_core::{HurwitzEngine, HurwitzQuery, Partition, Truncation};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fact(n: u32) -> BigRational {
    BigRational::from_integer(factorial(n).into())
}

fn pairs(d: u32) -> Vec<(Partition, Partition)> {
    let all = Partition::all(d);
    all.iter()
        .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

fn oracle_equivalence(engine: &HurwitzEngine) -> Outcome {
    let mut checked = 0;
    for d in 1..=6 {
        for k in 0..=2 {
            for l in 0..=2 {
                for alpha in Partition::all(d) {
                    let counts = walk_counts_by_target(&alpha, k, l, WalkLimits::default())
                        .map_err(|e| e.to_string())?;
                    for (beta, count) in counts {
                        let q = HurwitzQuery::new(k, l, alpha.clone(), beta.clone()).unwrap();
                        let w = engine.w_char(&q).map_err(|e| e.to_string())?;
                        ensure(w == count, || {
                            format!("{q:?}: character sum {w}, walks {count}")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} (d,k,l,alpha,beta) cases"))
}

fn chamber_identity(engine: &HurwitzEngine) -> Outcome {
    engine
        .warm_connected(Truncation::new(6, 4, 4))
        .map_err(|e| e.to_string())?;
    let mut checked = 0;
    for d in 1..=6 {
        for (alpha, beta) in pairs(d) {
            if is_on_wall(&alpha, &beta).unwrap() {
                continue;
            }
            for k in 0..=4 {
                for l in 0..=4 - k {
                    let q = HurwitzQuery::new(k, l, alpha.clone(), beta.clone()).unwrap();
                    let w =
                        BigRational::from_integer(engine.w_char(&q).map_err(|e| e.to_string())?);
                    let hc = engine.h_connected(&q).map_err(|e| e.to_string())?;
                    let hx = engine.h_char(&q).map_err(|e| e.to_string())?;
                    ensure(&hc * fact(d) == w, || {
                        format!("{q:?}: d!·H = {} but W = {w}", &hc * fact(d))
                    })?;
                    ensure(hx == hc, || {
                        format!("{q:?}: H_char = {hx} but H_connected = {hc}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} off-wall cases"))
}

fn exponential_round_trip(engine: &HurwitzEngine) -> Outcome {
    let mut checked = 0;
    for d in 1..=5 {
        for (alpha, beta) in pairs(d) {
            for k in 0..=2 {
                for l in 0..=2 {
                    let q = HurwitzQuery::new(k, l, alpha.clone(), beta.clone()).unwrap();
                    let w = engine.w_char(&q).map_err(|e| e.to_string())?;
                    let r = engine.reconstruct_w_from_h(&q).map_err(|e| e.to_string())?;
                    ensure(w == r, || format!("{q:?}: W = {w}, rebuilt {r}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} cases"))
}

fn jucys_murphy_levels() -> Outcome {
    let mut checked = 0;
    for d in 1..=6 {
        for r in 0..d {
            let ok = verify_jm_levels(d, r).map_err(|e| e.to_string())?;
            ensure(ok, || {
                format!("e_{r}(J) differs from the level sum at d = {d}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (d,r) pairs"))
}

fn central_characters() -> Outcome {
    let mut checked = 0;
    for name in ["E1", "E2", "H2", "H3", "P2", "H2*E1"] {
        let f: RegularFunction = name
            .parse()
            .map_err(|e: hurwitz_core::Error| e.to_string())?;
        for d in 1..=5 {
            let ok = verify_central_character(d, &f).map_err(|e| e.to_string())?;
            ensure(ok, || format!("f = {name} fails at d = {d}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (f,d) pairs"))
}

fn toda_equation() -> Outcome {
    let mut compared = 0;
    for n in -2..=2 {
        let report =
            toda_first_equation_check(n, Truncation::new(5, 2, 2), 8).map_err(|e| e.to_string())?;
        ensure(report.gamma_is_content_weight, || {
            format!("n = {n}: gamma is not y_n")
        })?;
        ensure(report.verdict, || {
            format!(
                "n = {n}: {} of {} coefficients differ",
                report.mismatches, report.compared
            )
        })?;
        compared += report.compared;
    }
    for n in -2..=2 {
        let ok = shift_substitution_check(n, Truncation::new(4, 2, 2), TauOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(ok, || format!("shift substitution fails at n = {n}"))?;
    }
    Ok(format!(
        "{compared} coefficients over n = -2..2; shift identity n = -2..2"
    ))
}

fn series_cross_check(engine: &HurwitzEngine) -> Outcome {
    let trunc = Truncation::new(5, 2, 2);
    let options = TauOptions {
        profile: PowerSumProfile::Full,
        max_dz: 8,
    };
    let log_tau = build_tau(0, trunc, options)
        .and_then(|t| t.log())
        .map_err(|e| e.to_string())?;
    let mut checked = 0;
    for d in 1..=5 {
        for (alpha, beta) in pairs(d) {
            for k in 0..=2 {
                for l in 0..=2 {
                    let q = HurwitzQuery::new(k, l, alpha.clone(), beta.clone()).unwrap();
                    let from_tau = connected_coefficient(&log_tau, d, k, l, &alpha, &beta)
                        .map_err(|e| e.to_string())?;
                    let h = engine.h_connected(&q).map_err(|e| e.to_string())?;
                    ensure(from_tau == h, || {
                        format!("{q:?}: log tau gives {from_tau}, H = {h}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} coefficients"))
}

fn piecewise_polynomiality(engine: &HurwitzEngine) -> Outcome {
    let setups = [
        ("5/5", 30u32, 30usize),
        ("3,1/4", 24, 60),
        ("3,1/2,2", 24, 80),
    ];
    let mut degrees = Vec::new();
    for (base, bound, count) in setups {
        let base = parse_point(base).map_err(|e| e.to_string())?;
        let points = sample_chamber(&base, count, bound, 2024).map_err(|e| e.to_string())?;
        for (k, l) in [(0, 2), (2, 0), (1, 1)] {
            let fit = fit_chamber_polynomial(engine, k, l, &points, 12).map_err(|e| {
                format!(
                    "(m,n) = ({},{}), (k,l) = ({k},{l}): {e}",
                    base.m(),
                    base.n()
                )
            })?;
            ensure(fit.validation.len() >= MIN_VALIDATION, || {
                "too few held-out points".into()
            })?;
            ensure(fit.max_abs_residual().is_zero(), || {
                "nonzero residual".into()
            })?;
            let q = HurwitzQuery::new(k, l, base.alpha(), base.beta()).unwrap();
            ensure(fit.parity_vanishes == parity_vanishes(&q), || {
                "parity flag".into()
            })?;
            let tag = if fit.parity_vanishes {
                " (parity zero)"
            } else {
                ""
            };
            degrees.push(format!(
                "({},{}) k={k} l={l}: deg {}{tag}",
                base.m(),
                base.n(),
                fit.degree
            ));
        }
    }
    Ok(degrees.join("; "))
}

fn structural_invariants(engine: &HurwitzEngine) -> Outcome {
    let mut checked = 0;
    for d in 1..=6 {
        for (alpha, beta) in pairs(d) {
            for k in 0..=5 {
                for l in 0..=5 - k {
                    let q = HurwitzQuery::new(k, l, alpha.clone(), beta.clone()).unwrap();
                    // w_char rejects non-integral sums
                    let w = engine.w_char(&q).map_err(|e| e.to_string())?;
                    if k + l <= 4 {
                        let swapped = HurwitzQuery::new(k, l, beta.clone(), alpha.clone()).unwrap();
                        let ws = engine.w_char(&swapped).map_err(|e| e.to_string())?;
                        ensure(w == ws, || format!("{q:?}: W not symmetric"))?;
                    }
                    if parity_vanishes(&q) {
                        ensure(w.is_zero(), || format!("{q:?}: parity-forbidden W = {w}"))?;
                        if k + l <= 4 {
                            let h = engine.h_connected(&q).map_err(|e| e.to_string())?;
                            ensure(h.is_zero(), || format!("{q:?}: parity-forbidden H = {h}"))?;
                        }
                    }
                    if k == 0 && l == 0 {
                        let expected: BigInt = if alpha == beta {
                            alpha.class_size().into()
                        } else {
                            BigInt::zero()
                        };
                        ensure(w == expected, || format!("{q:?}: W^(0,0) = {w}"))?;
                    }
                    if k == 1 && d <= 5 {
                        let free =
                            HurwitzQuery::new(0, l + 1, alpha.clone(), beta.clone()).unwrap();
                        let wf = engine.w_char(&free).map_err(|e| e.to_string())?;
                        ensure(w == wf, || {
                            format!("{q:?}: W^(1,l) = {w} but W^(0,l+1) = {wf}")
                        })?;
                    }
                    checked += 1;
                }
            }
        }
    }
    for d in 1..=8 {
        let table = CharacterTable::compute(d, 10).map_err(|e| e.to_string())?;
        ensure(table.row_orthogonality_holds(), || {
            format!("row orthogonality at d = {d}")
        })?;
        ensure(table.column_orthogonality_holds(), || {
            format!("column orthogonality at d = {d}")
        })?;
    }
    Ok(format!("{checked} cases; orthogonality d <= 8"))
}

fn main() -> ExitCode {
    let engine = HurwitzEngine::default();
    let criteria: Vec<Criterion> = vec![
        (
            "AC1 oracle equivalence",
            Box::new(|| oracle_equivalence(&engine)),
        ),
        (
            "AC2 chamber identity",
            Box::new(|| chamber_identity(&engine)),
        ),
        (
            "AC3 exponential-formula round trip",
            Box::new(|| exponential_round_trip(&engine)),
        ),
        ("AC4 Jucys-Murphy levels", Box::new(jucys_murphy_levels)),
        ("AC5 central characters", Box::new(central_characters)),
        ("AC6 Toda bilinear equation", Box::new(toda_equation)),
        (
            "AC7 series/character cross-check",
            Box::new(|| series_cross_check(&engine)),
        ),
        (
            "AC8 piecewise polynomiality",
            Box::new(|| piecewise_polynomiality(&engine)),
        ),
        (
            "AC9 structural invariants",
            Box::new(|| structural_invariants(&engine)),
        ),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} [{secs:.1}s] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} [{secs:.1}s] {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
