use std::fs;
use std::path::Path;

use nilpairs_core::census::{
    self, census, fiber_dims, regular_fiber_count, tangent_dim, CensusBudget, CensusReport, CountEntry, FiberMode,
    LambdaMode, Method, MethodChoice, Variety,
};
use nilpairs_core::constructions::{
    build_pair, cyclic_commuting_partner, good_pair, is_good, perturb_pair, standard_weyl_pair, PerturbMode,
};
use nilpairs_core::equivalence::{are_conjugate, morita_check, ConjugacyBudget};
use nilpairs_core::io::{pair_to_json, FieldJson, PairJson};
use nilpairs_core::linalg::nilpotency_and_type;
use nilpairs_core::subalgebra::{algebra_dim, centralizer_dim};
use nilpairs_core::weyl::{center_generator_checks, verify_matrix_structure, TruncatedWeyl};
use nilpairs_core::{Error, Field, FieldCtx, JordanType, MatrixF, NilpPair, Scalar};
use serde::Serialize;

use crate::args::{Cli, Command, Common, ConstructArgs, CountArgs, Format, PairSource};
use crate::output::{emit, envelope, json, require_json, CliError, CliResult};

mod report;

pub const SEED_ENV: &str = "NILPAIRS_SEED";

pub fn run(cli: &Cli) -> CliResult<()> {
    let common = &cli.common;
    let seed = resolve_seed(common)?;
    match &cli.command {
        Command::Construct(args) => construct(common, seed, args),
        Command::Verify { pair } => verify(common, seed, pair),
        Command::WeylCheck { p, a } => weyl_check(common, seed, *p, *a),
        Command::Conjugacy { first, second, trials } => conjugacy(common, seed, first, second, *trials),
        Command::Count(args) => count(common, seed, args, false),
        Command::Dims(args) => count(common, seed, args, true),
        Command::Tangent(source) => tangent(common, seed, source),
        Command::Fiber { source, mode, q } => fiber(common, seed, source, mode, q),
        Command::Report { morita_trials, gerstenhaber_trials, with_q8 } => {
            report::run(common, seed, *morita_trials, *gerstenhaber_trials, *with_q8)
        }
    }
}

fn resolve_seed(common: &Common) -> CliResult<u64> {
    if let Some(seed) = common.seed {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={text:?} is not a 64-bit integer"))),
        Err(_) => Ok(0),
    }
}

fn census_budget(common: &Common, seed: u64) -> CensusBudget {
    CensusBudget { enumeration_cap: common.enumeration_cap, samples: common.samples, seed }
}

fn parse<T: std::str::FromStr<Err = Error>>(text: &str) -> CliResult<T> {
    text.parse().map_err(CliError::from)
}

/// An integer reduced into the prime field, or comma-separated base-p coefficients.
pub fn parse_scalar(field: &FieldCtx, text: &str) -> CliResult<Scalar> {
    let bad = || CliError::Usage(format!("cannot parse field element {text:?}"));
    if text.contains(',') {
        let coeffs = text
            .split(',')
            .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<CliResult<Vec<u32>>>()?;
        Ok(field.from_coeffs(&coeffs)?)
    } else {
        Ok(field.from_int(text.trim().parse::<i64>().map_err(|_| bad())?))
    }
}

fn read_pair_json(path: &Path) -> CliResult<PairJson> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed pair JSON in {}: {e}", path.display())))
}

fn load_pair(path: &Path) -> CliResult<NilpPair> {
    Ok(NilpPair::try_from(read_pair_json(path)?)?)
}

fn source_pair(source: &PairSource) -> CliResult<NilpPair> {
    match &source.pair {
        Some(path) => load_pair(path),
        None => {
            let field = FieldCtx::new(source.p, source.m)?;
            let lambda = parse_scalar(&field, &source.lambda)?;
            Ok(good_pair(&field, source.r, lambda)?)
        }
    }
}

fn fields_of(fields: &[&Field]) -> Vec<FieldJson> {
    fields.iter().map(|f| FieldJson::of(f)).collect()
}

fn construct(common: &Common, seed: u64, args: &ConstructArgs) -> CliResult<()> {
    require_json(common, "construct")?;
    let field = FieldCtx::new(args.p, args.m)?;
    let lambda = parse_scalar(&field, &args.lambda)?;
    let pair = if args.standard {
        standard_weyl_pair(&field, lambda)?
    } else if !args.c_type.is_empty() {
        let tau = JordanType::new(args.c_type.clone())?;
        let c = MatrixF::nilpotent_of_type(&field, &tau);
        let d = if args.d_zero {
            MatrixF::zeros(&field, tau.size(), tau.size())
        } else {
            cyclic_commuting_partner(&c)?.m
        };
        build_pair(&c, &d, lambda)?
    } else {
        good_pair(&field, args.r, lambda)?
    };
    let pair = match &args.perturb {
        Some(mode) => perturb_pair(&pair, parse::<PerturbMode>(mode)?, seed)?,
        None => pair,
    };
    let mut text = pair_to_json(&pair);
    text.push('\n');
    emit(common, &text)
}

#[derive(Serialize)]
struct Verdict {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violated: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<PairDetails>,
}

#[derive(Serialize)]
struct PairDetails {
    n: usize,
    p: usize,
    q: u32,
    lambda: Vec<u32>,
    type_a: Option<JordanType>,
    type_b: Option<JordanType>,
    good: bool,
    algebra_dim_pair: usize,
    algebra_dim_powers: usize,
    centralizer_dim_pair: usize,
    centralizer_dim_powers: usize,
}

fn verify(common: &Common, seed: u64, path: &Path) -> CliResult<()> {
    require_json(common, "verify")?;
    let raw = read_pair_json(path)?;
    let fields = vec![raw.field.clone()];
    let (a, b, lambda) = raw.decode()?;
    let pair = match NilpPair::new(a, b, lambda) {
        Ok(pair) => pair,
        Err(Error::Invariant(clause)) => {
            let verdict = Verdict { valid: false, violated: Some(clause.clone()), details: None };
            emit(common, &json(&envelope(common, seed, "verify", fields, verdict))?)?;
            return Err(CliError::Failure(format!("pair invariant violated: {clause}")));
        }
        Err(other) => return Err(other.into()),
    };
    let f = pair.field();
    let n = pair.n();
    let powers = pair.pth_powers();
    let gens = [pair.a.clone(), pair.b.clone()];
    let pgens = [powers.c.clone(), powers.d.clone()];
    let details = PairDetails {
        n,
        p: pair.p(),
        q: f.order(),
        lambda: f.coeffs(pair.lambda),
        type_a: nilpotency_and_type(&pair.a).1,
        type_b: nilpotency_and_type(&pair.b).1,
        good: is_good(&pair)?,
        algebra_dim_pair: algebra_dim(f, n, &gens)?,
        algebra_dim_powers: algebra_dim(f, n, &pgens)?,
        centralizer_dim_pair: centralizer_dim(f, n, &gens)?,
        centralizer_dim_powers: centralizer_dim(f, n, &pgens)?,
    };
    let verdict = Verdict { valid: true, violated: None, details: Some(details) };
    emit(common, &json(&envelope(common, seed, "verify", fields, verdict))?)
}

#[derive(Serialize)]
struct WeylResult {
    p: u32,
    a: u32,
    passed: bool,
    centre: Vec<nilpairs_core::weyl::Check>,
    structure: nilpairs_core::weyl::StructureReport,
}

fn weyl_check(common: &Common, seed: u64, p: u32, a: u32) -> CliResult<()> {
    let field = FieldCtx::prime(p)?;
    let centre = center_generator_checks(&field);
    let structure = verify_matrix_structure(&TruncatedWeyl::new(&field, a)?)?;
    let passed = centre.iter().all(|c| c.passed) && structure.passed();
    let result = WeylResult { p, a, passed, centre, structure };
    let text = match common.format {
        Format::Json => json(&envelope(common, seed, "weyl-check", fields_of(&[&field]), &result))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Failure(e.to_string());
            w.write_record(["version", "p", "a", "section", "check", "passed", "detail"]).map_err(csv_err)?;
            let sections = [("centre", &result.centre), ("structure", &result.structure.checks)];
            for (section, checks) in sections {
                for c in checks.iter() {
                    w.write_record([
                        crate::output::VERSION,
                        &p.to_string(),
                        &a.to_string(),
                        section,
                        &c.name,
                        &c.passed.to_string(),
                        &c.detail,
                    ])
                    .map_err(csv_err)?;
                }
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?).expect("utf8")
        }
    };
    emit(common, &text)?;
    if !passed {
        return Err(CliError::Failure("Weyl structure check failed".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct ConjugacyResult {
    conjugate: bool,
    certified: bool,
    reason: nilpairs_core::equivalence::ConjugacyReason,
    hom_dim: Option<usize>,
    witness: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    morita: Option<nilpairs_core::equivalence::MoritaReport>,
}

fn conjugacy(common: &Common, seed: u64, first: &Path, second: &Path, trials: usize) -> CliResult<()> {
    require_json(common, "conjugacy")?;
    let p = load_pair(first)?;
    let q = load_pair(second)?;
    if **p.field() != **q.field() {
        return Err(CliError::Usage("pairs live over different fields".into()));
    }
    let budget = ConjugacyBudget { trials, enumeration_cap: common.enumeration_cap, seed };
    let ans = are_conjugate(&p, &q, &budget)?;
    let morita = if !p.lambda.is_zero() && !q.lambda.is_zero() {
        Some(morita_check(&p, &q, &budget)?)
    } else {
        None
    };
    let result = ConjugacyResult {
        conjugate: ans.conjugate,
        certified: ans.certified,
        reason: ans.reason,
        hom_dim: ans.hom_dim,
        witness: ans.witness.map(|g| g.to_coeff_grid()),
        morita: morita.clone(),
    };
    emit(common, &json(&envelope(common, seed, "conjugacy", fields_of(&[p.field()]), result))?)?;
    if let Some(report) = morita {
        report.ensure_consistent(&p, &q)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RegularFiber {
    n: usize,
    counts: Vec<RegularFiberCount>,
    fitted_dim: Option<f64>,
}

#[derive(Serialize)]
struct RegularFiberCount {
    q: u32,
    space_dim: Option<usize>,
    count: f64,
    radius: Option<f64>,
}

#[derive(Serialize)]
struct DimsResult {
    census: CensusReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    regular_fiber: Option<RegularFiber>,
}

fn count(common: &Common, seed: u64, args: &CountArgs, dims: bool) -> CliResult<()> {
    let variety: Variety = parse(&args.variety)?;
    let mode: LambdaMode = parse(&args.lambda_mode)?;
    let choice = match args.method.as_str() {
        "auto" => MethodChoice::Auto,
        "brute" => MethodChoice::Brute,
        "class" => MethodChoice::Class,
        "both" => MethodChoice::Both,
        other => return Err(CliError::Usage(format!("unknown method {other}"))),
    };
    let fields = args.q.iter().map(|&q| FieldCtx::of_order(q)).collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = args.p {
        if let Some(f) = fields.iter().find(|f| f.characteristic() != p) {
            return Err(CliError::Usage(format!("q = {} is not a power of p = {p}", f.order())));
        }
    }
    let budget = census_budget(common, seed);
    let report = census(variety, args.n, &args.q, mode, choice, &budget)?;
    let regular_fiber = if dims && args.n % report.p as usize == 0 {
        let mut counts = Vec::new();
        for f in &fields {
            let (space_dim, count, radius) = regular_fiber_count(args.n, f, &budget)?;
            counts.push(RegularFiberCount { q: f.order(), space_dim, count, radius });
        }
        let entries: Vec<CountEntry> = counts
            .iter()
            .map(|c| CountEntry { q: c.q, count: c.count.round() as u128, method: Method::ClassExact, radius: c.radius })
            .collect();
        let fitted_dim = census::estimate_dimension(&entries).ok().map(|fit| fit.fitted_dim);
        Some(RegularFiber { n: args.n, counts, fitted_dim })
    } else {
        None
    };
    let command = if dims { "dims" } else { "count" };
    let field_refs: Vec<&Field> = fields.iter().collect();
    let text = match common.format {
        Format::Json => {
            let result = DimsResult { census: report, regular_fiber };
            json(&envelope(common, seed, command, fields_of(&field_refs), result))?
        }
        Format::Csv => census_csv(&report, &fields)?,
    };
    emit(common, &text)
}

/// One row per count, mirroring the JSON fields.
pub fn census_csv(report: &CensusReport, fields: &[Field]) -> CliResult<String> {
    let csv_err = |e: csv::Error| CliError::Failure(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "version", "variety", "n", "p", "q", "modulus", "lambda_mode", "count", "method", "radius", "fitted_dim",
        "residual", "seed",
    ])
    .map_err(csv_err)?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for entry in &report.counts {
        let modulus = fields
            .iter()
            .find(|f| f.order() == entry.q)
            .map(|f| f.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        w.write_record([
            crate::output::VERSION.to_string(),
            report.variety.to_string(),
            report.n.to_string(),
            report.p.to_string(),
            entry.q.to_string(),
            modulus,
            format!("{:?}", report.lambda_mode).to_lowercase(),
            entry.count.to_string(),
            entry.method.to_string(),
            opt(entry.radius),
            opt(report.fit.as_ref().map(|f| f.fitted_dim)),
            opt(report.fit.as_ref().map(|f| f.residual)),
            report.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?).map_err(|e| CliError::Failure(e.to_string()))
}

fn tangent(common: &Common, seed: u64, source: &PairSource) -> CliResult<()> {
    require_json(common, "tangent")?;
    let pair = source_pair(source)?;
    let report = tangent_dim(&pair);
    emit(common, &json(&envelope(common, seed, "tangent", fields_of(&[pair.field()]), report))?)
}

fn fiber(common: &Common, seed: u64, source: &PairSource, mode: &str, qs: &[u32]) -> CliResult<()> {
    require_json(common, "fiber")?;
    let mode: FiberMode = parse(mode)?;
    let pair = source_pair(source)?;
    let qs: Vec<u32> = if qs.is_empty() && mode == FiberMode::AllLambda { vec![pair.field().order()] } else { qs.to_vec() };
    let report = fiber_dims(&pair, mode, &qs, &census_budget(common, seed))?;
    let ok = report.c2_equals_r && report.difference_matches;
    emit(common, &json(&envelope(common, seed, "fiber", fields_of(&[pair.field()]), &report))?)?;
    if !ok {
        return Err(CliError::Failure(format!(
            "fiber dimensions c1 - c2 = {} (expected {}), c2 = {} (expected {})",
            report.difference, report.expected_difference, report.c2, report.r
        )));
    }
    Ok(())
}
