//! Simultaneous conjugacy of matrix pairs through intertwiner spaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affine::{AffineSpace, ENUMERATION_CAP};
use crate::constructions::{
    build_pair, perturb_pair, random_commuting_pair, CommutingPair, NilpPair, PerturbMode,
};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{linear_map_kernel, nilpotency_and_type, MatrixF};
use crate::subalgebra::algebra_dim;

/// Default number of random intertwiner combinations tried.
pub const DEFAULT_TRIALS: usize = 200;

/// Anything conjugacy acts on coordinatewise.
pub trait MatrixPair {
    fn coords(&self) -> [&MatrixF; 2];
    /// The scalar commutator, when the pair carries one.
    fn lambda(&self) -> Option<Scalar> {
        None
    }
}

impl MatrixPair for NilpPair {
    fn coords(&self) -> [&MatrixF; 2] {
        [&self.a, &self.b]
    }
    fn lambda(&self) -> Option<Scalar> {
        Some(self.lambda)
    }
}

impl MatrixPair for CommutingPair {
    fn coords(&self) -> [&MatrixF; 2] {
        [&self.c, &self.d]
    }
}

/// Basis of `{S : S A = C S, S B = D S}` for source `(A, B)` and target `(C, D)`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub basis: Vec<MatrixF>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn hom_space<P: MatrixPair, Q: MatrixPair>(source: &P, target: &Q) -> Result<HomSpace> {
    let [a, b] = source.coords();
    let [c, d] = target.coords();
    let n = a.rows();
    if [b, c, d].iter().any(|m| m.rows() != n || m.cols() != n) || a.cols() != n {
        return Err(Error::Shape("hom_space needs pairs of equal square size".into()));
    }
    if [b, c, d].iter().any(|m| **m.field() != **a.field()) {
        return Err(Error::FieldMismatch);
    }
    let basis = linear_map_kernel(a.field(), n, |s| vec![&(s * a) - &(c * s), &(s * b) - &(d * s)]);
    for s in &basis {
        if s * a != c * s || s * b != d * s {
            return Err(Error::Internal("intertwiner fails to verify".into()));
        }
    }
    Ok(HomSpace { basis })
}

/// Why a conjugacy answer came out the way it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugacyReason {
    LambdaDiffers,
    JordanTypeDiffers,
    AlgebraDimDiffers,
    /// `Hom(P, Q)` is zero or has a different dimension from `End(P)`.
    HomDimension,
    RandomWitness,
    ExhaustiveWitness,
    ExhaustiveAbsence,
    /// Random search failed and the space was too large to enumerate.
    NotFound,
}

#[derive(Clone, Debug)]
pub struct ConjugacyAnswer {
    pub conjugate: bool,
    /// `g` with `g A g^{-1} = C` and `g B g^{-1} = D`.
    pub witness: Option<MatrixF>,
    /// False only when the answer is "not found" rather than "absent".
    pub certified: bool,
    pub reason: ConjugacyReason,
    pub hom_dim: Option<usize>,
}

impl ConjugacyAnswer {
    fn no(reason: ConjugacyReason, hom_dim: Option<usize>) -> Self {
        ConjugacyAnswer { conjugate: false, witness: None, certified: true, reason, hom_dim }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyBudget {
    pub trials: usize,
    pub enumeration_cap: u64,
    pub seed: u64,
}

impl Default for ConjugacyBudget {
    fn default() -> Self {
        ConjugacyBudget { trials: DEFAULT_TRIALS, enumeration_cap: ENUMERATION_CAP, seed: 0 }
    }
}

/// Two-step isomorphism test: cheap invariants and the Hom dimension first,
/// then a search for an invertible intertwiner.
pub fn are_conjugate<P: MatrixPair, Q: MatrixPair>(
    source: &P,
    target: &Q,
    budget: &ConjugacyBudget,
) -> Result<ConjugacyAnswer> {
    if let (Some(l1), Some(l2)) = (source.lambda(), target.lambda()) {
        if l1 != l2 {
            return Ok(ConjugacyAnswer::no(ConjugacyReason::LambdaDiffers, None));
        }
    }
    let src = source.coords();
    let dst = target.coords();
    let n = src[0].rows();
    if dst[0].rows() != n {
        return Err(Error::Shape("pairs of different sizes".into()));
    }
    for (x, y) in src.iter().zip(&dst) {
        if nilpotency_and_type(x) != nilpotency_and_type(y) {
            return Ok(ConjugacyAnswer::no(ConjugacyReason::JordanTypeDiffers, None));
        }
    }
    let f = src[0].field();
    let gens = |c: [&MatrixF; 2]| vec![c[0].clone(), c[1].clone()];
    if algebra_dim(f, n, &gens(src))? != algebra_dim(f, n, &gens(dst))? {
        return Ok(ConjugacyAnswer::no(ConjugacyReason::AlgebraDimDiffers, None));
    }
    let hom = hom_space(source, target)?;
    let dim = hom.dim();
    if dim == 0 || dim != hom_space(source, source)?.dim() {
        return Ok(ConjugacyAnswer::no(ConjugacyReason::HomDimension, Some(dim)));
    }
    let space = AffineSpace::new(MatrixF::zeros(f, n, n), hom.basis);
    let verified = |g: MatrixF, reason| -> Result<ConjugacyAnswer> {
        let g_inv = g.inverse()?;
        if src.iter().zip(&dst).any(|(x, y)| x.conjugate_by(&g, &g_inv) != **y) {
            return Err(Error::Internal("conjugating witness fails to verify".into()));
        }
        Ok(ConjugacyAnswer { conjugate: true, witness: Some(g), certified: true, reason, hom_dim: Some(dim) })
    };
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.trials {
        let g = space.sample(&mut rng);
        if g.rank() == n {
            return verified(g, ConjugacyReason::RandomWitness);
        }
    }
    if !space.fits(budget.enumeration_cap) {
        return Ok(ConjugacyAnswer {
            conjugate: false,
            witness: None,
            certified: false,
            reason: ConjugacyReason::NotFound,
            hom_dim: Some(dim),
        });
    }
    let mut found = None;
    space.for_each_point(|g, _| {
        if g.rank() == n {
            found = Some(g.clone());
            false
        } else {
            true
        }
    });
    match found {
        Some(g) => verified(g, ConjugacyReason::ExhaustiveWitness),
        None => Ok(ConjugacyAnswer::no(ConjugacyReason::ExhaustiveAbsence, Some(dim))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoritaVerdict {
    Agree,
    /// The scalars differ, so the pairs cannot be conjugate; the p-th powers
    /// forget the scalar and are not compared.
    LambdaMismatch,
    /// The sides differ but one of them is uncertified.
    Inconclusive,
    /// Both sides certified and different.
    Disagree,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    pub pairs_conjugate: bool,
    pub pairs_certified: bool,
    pub powers_conjugate: bool,
    pub powers_certified: bool,
    pub verdict: MoritaVerdict,
}

impl MoritaReport {
    /// Turns a certified disagreement into a falsification error.
    pub fn ensure_consistent(&self, p: &NilpPair, q: &NilpPair) -> Result<()> {
        if self.verdict == MoritaVerdict::Disagree {
            return Err(Error::Falsification(format!(
                "pair conjugacy {} but p-th power conjugacy {}\nP = {}\nQ = {}",
                self.pairs_conjugate,
                self.powers_conjugate,
                crate::io::pair_to_json(p),
                crate::io::pair_to_json(q)
            )));
        }
        Ok(())
    }
}

/// Compares conjugacy of `P, Q` with conjugacy of their coordinatewise p-th powers.
pub fn morita_check(p: &NilpPair, q: &NilpPair, budget: &ConjugacyBudget) -> Result<MoritaReport> {
    if p.lambda.is_zero() || q.lambda.is_zero() {
        return Err(Error::RequiresNonzeroLambda);
    }
    let left = are_conjugate(p, q, budget)?;
    let right = are_conjugate(&p.pth_powers(), &q.pth_powers(), budget)?;
    let verdict = if p.lambda != q.lambda {
        MoritaVerdict::LambdaMismatch
    } else if left.conjugate == right.conjugate {
        MoritaVerdict::Agree
    } else if left.certified && right.certified {
        MoritaVerdict::Disagree
    } else {
        MoritaVerdict::Inconclusive
    };
    Ok(MoritaReport {
        pairs_conjugate: left.conjugate,
        pairs_certified: left.certified,
        powers_conjugate: right.conjugate,
        powers_certified: right.certified,
        verdict,
    })
}

/// Tallies of a batch of Morita trials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoritaSummary {
    pub n: usize,
    pub p: u32,
    pub q: u32,
    pub trials: usize,
    pub agreements: usize,
    pub both_conjugate: usize,
    pub both_nonconjugate: usize,
    pub lambda_mismatch: usize,
    pub inconclusive: usize,
    pub disagreements: usize,
}

/// A seeded pair of trial inputs in Y. The second pair is, by trial index,
/// a conjugate of the first, an independent construction with the same
/// scalar, a centralizing perturbation, or the construction applied to a
/// conjugate of the same commuting pair.
pub fn morita_trial_pairs(field: &Field, n: usize, trial: u64, seed: u64) -> Result<(NilpPair, NilpPair)> {
    let p = field.characteristic() as usize;
    if n % p != 0 {
        return Err(Error::Precondition(format!("p = {p} must divide n = {n}")));
    }
    let r = n / p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let lambda = Scalar(rng.gen_range(1..field.order()));
    let random_conjugate = |pair: &NilpPair, rng: &mut ChaCha8Rng| {
        let g = MatrixF::random_invertible(field, n, rng);
        pair.conjugate(&g)
    };
    let cp = random_commuting_pair(field, r, &mut rng)?;
    let base = build_pair(&cp.c, &cp.d, lambda)?;
    let first = random_conjugate(&base, &mut rng)?;
    let second = match trial % 4 {
        0 => random_conjugate(&first, &mut rng)?,
        1 => {
            let other = random_commuting_pair(field, r, &mut rng)?;
            random_conjugate(&build_pair(&other.c, &other.d, lambda)?, &mut rng)?
        }
        2 => perturb_pair(&first, PerturbMode::CentralizingUpper, rng.gen())?,
        _ => {
            let h = MatrixF::random_invertible(field, r, &mut rng);
            let h_inv = h.inverse()?;
            build_pair(&cp.c.conjugate_by(&h, &h_inv), &cp.d.conjugate_by(&h, &h_inv), lambda)?
        }
    };
    Ok((first, second))
}

/// Runs `trials` seeded Morita comparisons, stopping at the first certified disagreement.
pub fn morita_suite(field: &Field, n: usize, trials: usize, seed: u64) -> Result<MoritaSummary> {
    let mut summary = MoritaSummary {
        n,
        p: field.characteristic(),
        q: field.order(),
        ..Default::default()
    };
    for t in 0..trials as u64 {
        let (a, b) = morita_trial_pairs(field, n, t, seed)?;
        let budget = ConjugacyBudget { seed: seed ^ t, ..Default::default() };
        let report = morita_check(&a, &b, &budget)?;
        summary.trials += 1;
        match report.verdict {
            MoritaVerdict::Agree => {
                summary.agreements += 1;
                if report.pairs_conjugate {
                    summary.both_conjugate += 1;
                } else {
                    summary.both_nonconjugate += 1;
                }
            }
            MoritaVerdict::LambdaMismatch => summary.lambda_mismatch += 1,
            MoritaVerdict::Inconclusive => summary.inconclusive += 1,
            MoritaVerdict::Disagree => {
                summary.disagreements += 1;
                report.ensure_consistent(&a, &b)?;
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{good_pair, standard_weyl_pair};
    use crate::field::FieldCtx;

    #[test]
    fn hom_space_dimensions() {
        let f2 = FieldCtx::prime(2).unwrap();
        let pair = standard_weyl_pair(&f2, Scalar::ONE).unwrap();
        assert_eq!(hom_space(&pair, &pair).unwrap().dim(), 1);
        let zero = CommutingPair::new(MatrixF::zeros(&f2, 2, 2), MatrixF::zeros(&f2, 2, 2)).unwrap();
        assert_eq!(hom_space(&zero, &zero).unwrap().dim(), 4);

        let f4 = FieldCtx::of_order(4).unwrap();
        let g = f4.generator();
        let p1 = standard_weyl_pair(&f4, Scalar::ONE).unwrap();
        let p2 = NilpPair::new(p1.a.clone(), p1.b.scale(g), g).unwrap();
        assert_eq!(hom_space(&p1, &p2).unwrap().dim(), 0);
        let ans = are_conjugate(&p1, &p2, &ConjugacyBudget::default()).unwrap();
        assert!(!ans.conjugate && ans.certified);
    }

    #[test]
    fn transpose_conjugation() {
        let f2 = FieldCtx::prime(2).unwrap();
        let j = MatrixF::jordan_block(&f2, 2);
        let p1 = NilpPair::new(j.clone(), j.transpose(), Scalar::ONE).unwrap();
        let p2 = NilpPair::new(j.transpose(), j.clone(), Scalar::ONE).unwrap();
        let ans = are_conjugate(&p1, &p2, &ConjugacyBudget::default()).unwrap();
        assert!(ans.conjugate && ans.certified);
        let g = ans.witness.unwrap();
        assert_eq!(g, MatrixF::from_ints(&f2, &[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn random_conjugates_are_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [2, 3, 4] {
            let f = FieldCtx::of_order(q).unwrap();
            let p = f.characteristic() as usize;
            for r in 1..=2 {
                let pair = good_pair(&f, r, Scalar(q - 1)).unwrap();
                let g = MatrixF::random_invertible(&f, p * r, &mut rng);
                let other = pair.conjugate(&g).unwrap();
                let ans = are_conjugate(&pair, &other, &ConjugacyBudget::default()).unwrap();
                assert!(ans.conjugate && ans.certified);
                let back = are_conjugate(&other, &pair, &ConjugacyBudget::default()).unwrap();
                assert!(back.conjugate);
            }
        }
    }

    #[test]
    fn morita_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        let budget = ConjugacyBudget::default();
        let j2 = MatrixF::jordan_block(&f2, 2);
        let z2 = MatrixF::zeros(&f2, 2, 2);
        let p = build_pair(&j2, &j2, Scalar::ONE).unwrap();
        let q = build_pair(&z2, &j2, Scalar::ONE).unwrap();
        let report = morita_check(&p, &q, &budget).unwrap();
        assert_eq!(report.verdict, MoritaVerdict::Agree);
        assert!(!report.pairs_conjugate && !report.powers_conjugate);
        assert!(report.pairs_certified && report.powers_certified);

        let r = morita_check(&p, &p.conjugate(&MatrixF::random_invertible(&f2, 4, &mut ChaCha8Rng::seed_from_u64(3))).unwrap(), &budget).unwrap();
        assert!(r.pairs_conjugate && r.powers_conjugate);

        let comm = NilpPair::new(j2.clone(), z2.clone(), Scalar::ZERO).unwrap();
        assert_eq!(morita_check(&comm, &comm, &budget).unwrap_err(), Error::RequiresNonzeroLambda);
    }

    #[test]
    fn lambda_mismatch_has_conjugate_powers() {
        let f4 = FieldCtx::of_order(4).unwrap();
        let g = f4.generator();
        let p1 = standard_weyl_pair(&f4, Scalar::ONE).unwrap();
        let p2 = standard_weyl_pair(&f4, g).unwrap();
        let report = morita_check(&p1, &p2, &ConjugacyBudget::default()).unwrap();
        assert_eq!(report.verdict, MoritaVerdict::LambdaMismatch);
        assert!(!report.pairs_conjugate && report.pairs_certified);
        assert!(report.powers_conjugate);
    }

    #[test]
    fn perturbed_good_pairs_stay_in_orbit() {
        let f2 = FieldCtx::prime(2).unwrap();
        let pair = good_pair(&f2, 2, Scalar::ONE).unwrap();
        let budget = ConjugacyBudget::default();
        for seed in 0..10 {
            let x = perturb_pair(&pair, PerturbMode::CentralizingUpper, seed).unwrap();
            let y = perturb_pair(&pair, PerturbMode::CentralizingUpper, seed + 100).unwrap();
            let report = morita_check(&x, &y, &budget).unwrap();
            assert_eq!(report.verdict, MoritaVerdict::Agree);
        }
    }

    #[test]
    fn small_suites_agree() {
        for (n, q) in [(2, 2), (2, 4), (4, 2), (3, 3)] {
            let f = FieldCtx::of_order(q).unwrap();
            let s = morita_suite(&f, n, 24, 11).unwrap();
            assert_eq!(s.disagreements, 0);
            assert_eq!(s.trials, 24);
            assert!(s.both_conjugate > 0);
        }
        let f2 = FieldCtx::prime(2).unwrap();
        let s = morita_suite(&f2, 4, 40, 11).unwrap();
        assert!(s.both_nonconjugate > 0, "{s:?}");
    }
}
