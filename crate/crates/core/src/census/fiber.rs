use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{estimate_dimension, CensusBudget, CountEntry, DimensionFit, Method, NilpotencyTester};
use crate::affine::AffineSpace;
use crate::constructions::{build_pair, is_good, partner_space, random_commuting_pair, CommutingPair, NilpPair};
use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx};
use crate::linalg::MatrixF;
use crate::subalgebra::{algebra_dim, centralizer_dim};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberMode {
    FixedLambda,
    AllLambda,
}

impl std::str::FromStr for FiberMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed-lambda" => Ok(FiberMode::FixedLambda),
            "all-lambda" => Ok(FiberMode::AllLambda),
            other => Err(Error::Precondition(format!("unknown fiber mode {other}"))),
        }
    }
}

/// Points `(A', B')` over F_q with `(A'^p, B'^p) = (A^p, B^p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageCount {
    pub q: u32,
    /// λ' equal to the pair's λ.
    pub fixed_lambda: u128,
    /// λ' ranging over all nonzero scalars.
    pub all_lambda: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub n: usize,
    pub p: usize,
    pub r: usize,
    /// Centralizer dimension of `{A^p, B^p}`.
    pub c1: usize,
    /// Centralizer dimension of `{A, B}`.
    pub c2: usize,
    pub difference: usize,
    pub expected_difference: usize,
    pub c2_equals_r: bool,
    pub difference_matches: bool,
    pub preimage: Vec<PreimageCount>,
    pub fixed_lambda_fit: Option<DimensionFit>,
    pub all_lambda_fit: Option<DimensionFit>,
}

/// Orbit dimension `c1 - c2` of a good pair under simultaneous conjugation
/// within the fiber, and optionally point counts of the λ-varying fiber.
pub fn fiber_dims(pair: &NilpPair, mode: FiberMode, qs: &[u32], budget: &CensusBudget) -> Result<FiberReport> {
    if !is_good(pair)? {
        return Err(Error::Precondition("fiber dimensions need a good pair".into()));
    }
    let f = pair.field();
    let n = pair.n();
    let p = pair.p();
    let r = pair.r().expect("good pairs have p | n");
    let powers = pair.pth_powers();
    let c1 = centralizer_dim(f, n, &[powers.c.clone(), powers.d.clone()])?;
    let c2 = centralizer_dim(f, n, &[pair.a.clone(), pair.b.clone()])?;
    let expected = p * p * r - r;
    let mut report = FiberReport {
        n,
        p,
        r,
        c1,
        c2,
        difference: c1 - c2,
        expected_difference: expected,
        c2_equals_r: c2 == r,
        difference_matches: c1 - c2 == expected,
        preimage: Vec::new(),
        fixed_lambda_fit: None,
        all_lambda_fit: None,
    };
    if mode == FiberMode::AllLambda {
        for &q in qs {
            report.preimage.push(count_preimage(pair, &powers, q, budget)?);
        }
        if report.preimage.len() >= 2 {
            let entries = |pick: fn(&PreimageCount) -> u128| -> Vec<CountEntry> {
                report
                    .preimage
                    .iter()
                    .map(|c| CountEntry { q: c.q, count: pick(c), method: Method::Brute, radius: None })
                    .collect()
            };
            report.fixed_lambda_fit = Some(estimate_dimension(&entries(|c| c.fixed_lambda))?);
            report.all_lambda_fit = Some(estimate_dimension(&entries(|c| c.all_lambda))?);
        }
    }
    Ok(report)
}

fn count_preimage(pair: &NilpPair, powers: &CommutingPair, q: u32, budget: &CensusBudget) -> Result<PreimageCount> {
    let big = FieldCtx::of_order(q)?;
    let n = pair.n();
    let p = pair.p() as u64;
    let embed = |m: &MatrixF| -> Result<MatrixF> {
        if **m.field() == *big {
            Ok(m.clone())
        } else {
            m.embed_into(&big)
        }
    };
    let target_c = embed(&powers.c)?;
    let target_d = embed(&powers.d)?;
    let lambda = big.embed_prime(pair.lambda, pair.field()).or_else(|_| {
        if **pair.field() == *big {
            Ok(pair.lambda)
        } else {
            Err(Error::FieldMismatch)
        }
    })?;
    let units: Vec<MatrixF> =
        (0..n * n).map(|idx| MatrixF::unit(&big, n, idx / n, idx % n)).collect();
    let everything = AffineSpace::new(MatrixF::zeros(&big, n, n), units);
    if !everything.fits(budget.enumeration_cap) {
        return Err(Error::Guard(format!(
            "fiber enumeration over all {q}^{} matrices exceeds the cap",
            n * n
        )));
    }
    let mut candidates = Vec::new();
    let mut tester = NilpotencyTester::new(n);
    everything.for_each_point(|a, _| {
        if tester.is_nilpotent(&big, a.data()) && a.pow(p) == target_c {
            candidates.push(a.clone());
        }
        true
    });
    let mut fixed = 0u128;
    let mut all = 0u128;
    for a in &candidates {
        for mu in big.units() {
            let Some(space) = partner_space(a, mu) else { continue };
            if !space.fits(budget.enumeration_cap) {
                return Err(Error::Guard("partner space too large to enumerate".into()));
            }
            let mut hits = 0u128;
            space.for_each_point(|b, _| {
                if tester.is_nilpotent(&big, b.data()) && b.pow(p) == target_d {
                    hits += 1;
                }
                true
            });
            all += hits;
            if mu == lambda {
                fixed += hits;
            }
        }
    }
    Ok(PreimageCount { q, fixed_lambda: fixed, all_lambda: all })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GerstenhaberSummary {
    pub trials: usize,
    pub max_n: usize,
    /// Pairs reaching `dim k[C, D] = n`.
    pub at_bound: usize,
}

/// Samples commuting nilpotent pairs of size at most `max_n` (random pairs
/// and p-th powers of constructed pairs) and checks `dim k[C, D] <= n`.
/// The first violation aborts with a falsification error.
pub fn gerstenhaber_suite(trials: usize, max_n: usize, fields: &[Field], seed: u64) -> Result<GerstenhaberSummary> {
    if fields.is_empty() || max_n == 0 {
        return Err(Error::Precondition("need at least one field and max_n >= 1".into()));
    }
    let mut summary = GerstenhaberSummary { max_n, ..Default::default() };
    for t in 0..trials as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        let f = &fields[(t as usize) % fields.len()];
        let p = f.characteristic() as usize;
        let n = rng.gen_range(1..=max_n);
        let pair = if t % 2 == 1 && n % p == 0 {
            let small = random_commuting_pair(f, n / p, &mut rng)?;
            let lambda = crate::Scalar(rng.gen_range(1..f.order()));
            build_pair(&small.c, &small.d, lambda)?.pth_powers()
        } else {
            random_commuting_pair(f, n, &mut rng)?
        };
        pair.validate()?;
        let dim = algebra_dim(f, n, &[pair.c.clone(), pair.d.clone()])?;
        summary.trials += 1;
        if dim == n {
            summary.at_bound += 1;
        }
        if dim > n {
            return Err(Error::Falsification(format!(
                "commuting nilpotent pair of size {n} over F_{} generates an algebra of dimension {dim}\nC = {:?}\nD = {:?}",
                f.order(),
                pair.c.to_coeff_grid(),
                pair.d.to_coeff_grid()
            )));
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::good_pair;
    use crate::Scalar;

    #[test]
    fn fiber_small_cases() {
        let f2 = FieldCtx::prime(2).unwrap();
        let pair = good_pair(&f2, 1, Scalar::ONE).unwrap();
        let report = fiber_dims(&pair, FiberMode::FixedLambda, &[], &CensusBudget::default()).unwrap();
        assert_eq!((report.c1, report.c2, report.difference), (4, 1, 3));
        let pair = good_pair(&f2, 2, Scalar::ONE).unwrap();
        let report = fiber_dims(&pair, FiberMode::FixedLambda, &[], &CensusBudget::default()).unwrap();
        assert_eq!((report.c2, report.difference), (2, 6));
    }

    #[test]
    fn all_lambda_preimage_n2() {
        let f2 = FieldCtx::prime(2).unwrap();
        let pair = good_pair(&f2, 1, Scalar::ONE).unwrap();
        let report = fiber_dims(&pair, FiberMode::AllLambda, &[2, 4], &CensusBudget::default()).unwrap();
        // fixed λ: the orbit GL_2 / scalars, q^3 - q points
        assert_eq!(report.preimage[0].fixed_lambda, 6);
        assert_eq!(report.preimage[1].fixed_lambda, 60);
        assert_eq!(report.preimage[1].all_lambda, 180);
        let fit = report.all_lambda_fit.unwrap();
        assert!(fit.fitted_dim > report.fixed_lambda_fit.unwrap().fitted_dim);
    }

    #[test]
    fn not_good_is_rejected() {
        let f2 = FieldCtx::prime(2).unwrap();
        let z = MatrixF::zeros(&f2, 2, 2);
        let pair = build_pair(&z, &z, Scalar::ONE).unwrap();
        assert!(fiber_dims(&pair, FiberMode::FixedLambda, &[], &CensusBudget::default()).is_err());
    }

    #[test]
    fn gerstenhaber_small() {
        let fields = vec![FieldCtx::prime(2).unwrap(), FieldCtx::prime(3).unwrap()];
        let s = gerstenhaber_suite(60, 5, &fields, 1).unwrap();
        assert_eq!(s.trials, 60);
        assert!(s.at_bound > 0);
    }
}
