//! The full experiment battery in one deterministic report.

use nilpairs_core::census::{
    census, class_size, fiber_dims, gerstenhaber_suite, nilpotent_count, regular_fiber_count, tangent_dim,
    CensusBudget, CensusReport, FiberMode, FiberReport, GerstenhaberSummary, LambdaMode, MethodChoice, Variety,
};
use nilpairs_core::constructions::{exists_partner, good_pair, standard_weyl_pair, SearchBudget};
use nilpairs_core::equivalence::{are_conjugate, hom_space, morita_suite, ConjugacyBudget, MoritaSummary};
use nilpairs_core::io::FieldJson;
use nilpairs_core::linalg::partitions;
use nilpairs_core::weyl::{center_generator_checks, verify_matrix_structure, Check, StructureReport, TruncatedWeyl};
use nilpairs_core::{Error, FieldCtx, MatrixF, Scalar};
use serde::Serialize;

use crate::args::Common;
use crate::output::{emit, envelope, json, require_json, CliError, CliResult};

/// What point counts and ranks cannot show; stated in every full report.
pub const LIMITATIONS: [&str; 3] = [
    "irreducibility of X and of the image of Y under (A, B) -> (A^p, B^p) is not tested; counts and tangent ranks are dimension evidence only",
    "the classification of arbitrary homomorphic images of the truncated Weyl algebra is not reproduced; only the levels a = 1 and a = 2 (p = 2, 3) are checked",
    "sampled counts are estimates with 95% Wilson radii; exact methods are labelled brute or class-exact",
];

#[derive(Serialize)]
struct Section<T: Serialize> {
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
    data: T,
}

fn section<T: Serialize>(passed: bool, data: T, failures: &mut Vec<String>, name: &str) -> Section<T> {
    if !passed {
        failures.push(name.to_string());
    }
    Section { passed, note: None, data }
}

/// Tangent ranks are measured against n^2 but never gate the exit status:
/// the defining equations need not generate a radical ideal, so a larger
/// Zariski tangent space of the scheme is not a statement about X.
const TANGENT_NOTE: &str = "tangent_dim is the Zariski tangent dimension of the scheme cut out by the char-poly coefficients and [A,B] - lambda I; in characteristic 2 at n = 4 that scheme is non-reduced along the good pairs (the fiber over regular A is the smooth graph c1 = c0^2, cut out to second order), so it exceeds dim X = 16 by one";

#[derive(Serialize)]
struct ClassSum {
    n: usize,
    q: u32,
    sum: u128,
    nilpotent_count: u128,
}

#[derive(Serialize)]
struct WeylEntry {
    p: u32,
    centre: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    level_one: Option<StructureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    level_two: Option<StructureReport>,
}

#[derive(Serialize)]
struct TangentEntry {
    n: usize,
    p: u32,
    jacobian_rank: usize,
    tangent_dim: usize,
    expected: usize,
}

#[derive(Serialize)]
struct JordanEntry {
    n: usize,
    p: u32,
    tau: String,
    solvable: bool,
    parts_divisible_by_p: bool,
    witness: String,
}

#[derive(Serialize)]
struct MismatchEntry {
    q: u32,
    lambda: Vec<u32>,
    hom_dim: usize,
    conjugate: bool,
    certified: bool,
}

#[derive(Serialize)]
struct RegularFiberEntry {
    n: usize,
    q: u32,
    space_dim: Option<usize>,
    count: f64,
}

#[derive(Serialize)]
struct FullReport {
    passed: bool,
    failures: Vec<String>,
    counts: Section<Vec<CensusReport>>,
    class_sums: Section<Vec<ClassSum>>,
    weyl: Section<Vec<WeylEntry>>,
    tangent: Section<Vec<TangentEntry>>,
    fibers: Section<Vec<FiberReport>>,
    jordan_criterion: Section<Vec<JordanEntry>>,
    gerstenhaber: Section<GerstenhaberSummary>,
    morita: Section<Vec<MoritaSummary>>,
    lambda_mismatch: Section<Vec<MismatchEntry>>,
    regular_fiber: Vec<RegularFiberEntry>,
}

/// Falsification errors become failed sections; anything else aborts.
fn soft<T>(result: Result<T, Error>, failures: &mut Vec<String>) -> CliResult<Option<T>> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(Error::Falsification(msg)) => {
            eprintln!("falsification event: {msg}");
            failures.push(msg);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn run(common: &Common, seed: u64, morita_trials: usize, gerstenhaber_trials: usize, with_q8: bool) -> CliResult<()> {
    require_json(common, "report")?;
    let budget = CensusBudget { enumeration_cap: common.enumeration_cap, samples: common.samples, seed };
    let mut failures = Vec::new();
    let f2 = FieldCtx::prime(2)?;
    let f3 = FieldCtx::prime(3)?;
    let f4 = FieldCtx::of_order(4)?;

    // point counts and fits
    let small_qs: Vec<u32> = if with_q8 { vec![2, 4, 8] } else { vec![2, 4] };
    let mut counts = Vec::new();
    let mut counts_ok = true;
    for variety in [Variety::X, Variety::D] {
        if let Some(r) = soft(census(variety, 2, &small_qs, LambdaMode::All, MethodChoice::Both, &budget), &mut failures)? {
            let fit = r.fit.as_ref().map_or(f64::NAN, |f| f.fitted_dim);
            counts_ok &= match variety {
                Variety::X => fit == 4.0,
                _ => (fit - 3.0).abs() <= 0.1 || !with_q8,
            };
            counts.push(r);
        } else {
            counts_ok = false;
        }
    }
    let big = census(Variety::X, 4, &[2, 4], LambdaMode::All, MethodChoice::Class, &budget)?;
    counts_ok &= big.fit.as_ref().is_some_and(|f| (f.fitted_dim - 16.0).abs() <= 0.5);
    counts.push(big);
    let obstruction = census(Variety::X, 3, &[2], LambdaMode::Nonzero, MethodChoice::Class, &budget)?;
    counts_ok &= obstruction.counts.iter().all(|c| c.count == 0);
    counts.push(obstruction);
    let counts = section(counts_ok, counts, &mut failures, "counts");

    let mut sums = Vec::new();
    for n in 1..=4 {
        for f in [&f2, &f4] {
            let sum = partitions(n).iter().map(|t| class_size(t, f)).sum::<Result<u128, _>>()?;
            sums.push(ClassSum { n, q: f.order(), sum, nilpotent_count: nilpotent_count(n, f.order() as u64) });
        }
    }
    let sums_ok = sums.iter().all(|s| s.sum == s.nilpotent_count);
    let class_sums = section(sums_ok, sums, &mut failures, "class sums");

    let mut weyl = Vec::new();
    for p in [2, 3, 5] {
        let f = FieldCtx::prime(p)?;
        let level_one = if p <= 3 { Some(verify_matrix_structure(&TruncatedWeyl::new(&f, 1)?)?) } else { None };
        let level_two = if p == 2 { Some(verify_matrix_structure(&TruncatedWeyl::new(&f, 2)?)?) } else { None };
        weyl.push(WeylEntry { p, centre: center_generator_checks(&f), level_one, level_two });
    }
    let weyl_ok = weyl.iter().all(|w| {
        w.centre.iter().all(|c| c.passed)
            && w.level_one.as_ref().is_none_or(|s| s.passed())
            && w.level_two.as_ref().is_none_or(|s| s.passed())
    });
    let weyl = section(weyl_ok, weyl, &mut failures, "weyl");

    let mut tangents = Vec::new();
    for (f, r) in [(&f2, 1), (&f2, 2), (&f3, 1)] {
        let pair = good_pair(f, r, Scalar::ONE)?;
        let t = tangent_dim(&pair);
        tangents.push(TangentEntry {
            n: t.n,
            p: f.characteristic(),
            jacobian_rank: t.jacobian_rank,
            tangent_dim: t.tangent_dim,
            expected: t.n * t.n,
        });
    }
    let tangent_ok = tangents.iter().all(|t| t.tangent_dim == t.expected);
    let tangent = Section { passed: tangent_ok, note: (!tangent_ok).then_some(TANGENT_NOTE), data: tangents };

    let mut fibers = Vec::new();
    for (f, r) in [(&f2, 1), (&f2, 2), (&f2, 3), (&f3, 1), (&f3, 2)] {
        let pair = good_pair(f, r, Scalar::ONE)?;
        let (mode, qs): (FiberMode, &[u32]) = if r == 1 && f.characteristic() == 2 {
            (FiberMode::AllLambda, &[2, 4])
        } else {
            (FiberMode::FixedLambda, &[])
        };
        if let Some(report) = soft(fiber_dims(&pair, mode, qs, &budget), &mut failures)? {
            fibers.push(report);
        }
    }
    let fibers_ok = fibers.len() == 5 && fibers.iter().all(|f| f.c2_equals_r && f.difference_matches);
    let fibers = section(fibers_ok, fibers, &mut failures, "fibers");

    let mut jordan = Vec::new();
    let search = SearchBudget { enumeration_cap: common.enumeration_cap, samples: common.samples, seed };
    for n in [4, 6] {
        for tau in partitions(n) {
            let a = MatrixF::nilpotent_of_type(&f2, &tau);
            let res = exists_partner(&a, Scalar::ONE, &search)?;
            jordan.push(JordanEntry {
                n,
                p: 2,
                tau: tau.to_string(),
                solvable: res.solvable,
                parts_divisible_by_p: tau.all_parts_divisible_by(2),
                witness: format!("{:?}", res.status).to_lowercase(),
            });
        }
    }
    let jordan_ok = jordan.iter().all(|j| j.solvable == j.parts_divisible_by_p);
    let jordan = section(jordan_ok, jordan, &mut failures, "jordan criterion");

    let gfields = vec![f2.clone(), f3.clone(), f4.clone()];
    let gerst = soft(gerstenhaber_suite(gerstenhaber_trials, 6, &gfields, seed), &mut failures)?;
    let gerst_ok = gerst.is_some();
    let gerstenhaber = section(gerst_ok, gerst.unwrap_or_default(), &mut failures, "gerstenhaber");

    let mut morita = Vec::new();
    for (n, q) in [(2, 2), (2, 4), (4, 2), (3, 3)] {
        let f = FieldCtx::of_order(q)?;
        if let Some(s) = soft(morita_suite(&f, n, morita_trials, seed), &mut failures)? {
            morita.push(s);
        }
    }
    let morita_ok = morita.len() == 4 && morita.iter().all(|s| s.disagreements == 0);
    let morita = section(morita_ok, morita, &mut failures, "morita");

    let mut mismatch = Vec::new();
    let base = standard_weyl_pair(&f4, Scalar::ONE)?;
    for lambda in f4.units().filter(|&l| l != Scalar::ONE) {
        let other = standard_weyl_pair(&f4, lambda)?;
        let ans = are_conjugate(&base, &other, &ConjugacyBudget { seed, ..Default::default() })?;
        mismatch.push(MismatchEntry {
            q: 4,
            lambda: f4.coeffs(lambda),
            hom_dim: hom_space(&base, &other)?.dim(),
            conjugate: ans.conjugate,
            certified: ans.certified,
        });
    }
    let mismatch_ok = mismatch.iter().all(|m| m.hom_dim == 0 && !m.conjugate && m.certified);
    let lambda_mismatch = section(mismatch_ok, mismatch, &mut failures, "lambda mismatch");

    let mut regular_fiber = Vec::new();
    for n in [2, 4] {
        for f in [&f2, &f4] {
            let (space_dim, count, _) = regular_fiber_count(n, f, &budget)?;
            regular_fiber.push(RegularFiberEntry { n, q: f.order(), space_dim, count });
        }
    }

    let report = FullReport {
        passed: failures.is_empty(),
        failures: failures.clone(),
        counts,
        class_sums,
        weyl,
        tangent,
        fibers,
        jordan_criterion: jordan,
        gerstenhaber,
        morita,
        lambda_mismatch,
        regular_fiber,
    };
    let fields = [&f2, &f3, &f4].iter().map(|f| FieldJson::of(f)).collect();
    let mut env = envelope(common, seed, "report", fields, &report);
    env.limitations = Some(LIMITATIONS.to_vec());
    emit(common, &json(&env)?)?;
    if !failures.is_empty() {
        return Err(CliError::Failure(format!("failed sections: {}", failures.join(", "))));
    }
    Ok(())
}
