//! Explicit nilpotent pairs with `[A, B] = λI` and commuting nilpotent pairs.
//!
//! Every constructor re-verifies the invariants of its output; nothing is
//! trusted by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affine::{AffineSpace, ENUMERATION_CAP, SAMPLE_BUDGET};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{
    commutator, jordan_chains, linear_map_kernel, linear_map_matrix, nilpotency_and_type, JordanType,
    MatrixF,
};
use crate::subalgebra::{algebra_dim, cyclic_submodule_dim};
use crate::weyl::standard_representation;

/// Maximum resampling attempts for perturbations.
pub const MAX_RESAMPLES: usize = 100;

/// Nilpotent `A, B` with `[A, B] = λI`. Serializes as pair JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "crate::io::PairJson", try_from = "crate::io::PairJson")]
pub struct NilpPair {
    pub a: MatrixF,
    pub b: MatrixF,
    pub lambda: Scalar,
}

impl NilpPair {
    /// Builds and validates a pair.
    pub fn new(a: MatrixF, b: MatrixF, lambda: Scalar) -> Result<Self> {
        let pair = NilpPair { a, b, lambda };
        pair.validate()?;
        Ok(pair)
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn p(&self) -> usize {
        self.field().characteristic() as usize
    }

    /// `n / p` when p divides n.
    pub fn r(&self) -> Option<usize> {
        (self.n() % self.p() == 0).then(|| self.n() / self.p())
    }

    /// Checks every pair invariant, reporting the first violated clause.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if !self.a.is_square() || !self.b.is_square() || self.b.rows() != n {
            return Err(Error::Invariant("shape".into()));
        }
        if **self.a.field() != **self.b.field() || !self.field().contains(self.lambda) {
            return Err(Error::Invariant("field".into()));
        }
        if !self.lambda.is_zero() && n % self.p() != 0 {
            return Err(Error::Invariant(format!(
                "trace obstruction: lambda != 0 needs p | n, got n = {n}, p = {}",
                self.p()
            )));
        }
        if !nilpotency_and_type(&self.a).0 {
            return Err(Error::Invariant("nilpotency(A)".into()));
        }
        if !nilpotency_and_type(&self.b).0 {
            return Err(Error::Invariant("nilpotency(B)".into()));
        }
        let c = commutator(&self.a, &self.b)?;
        if c != MatrixF::scalar(self.field(), n, self.lambda) {
            return Err(Error::Invariant("commutator: [A, B] != lambda I".into()));
        }
        Ok(())
    }

    /// `(gAg^{-1}, gBg^{-1}, λ)`.
    pub fn conjugate(&self, g: &MatrixF) -> Result<NilpPair> {
        let g_inv = g.inverse()?;
        Ok(NilpPair {
            a: self.a.conjugate_by(g, &g_inv),
            b: self.b.conjugate_by(g, &g_inv),
            lambda: self.lambda,
        })
    }

    /// `(A^p, B^p)`, a commuting nilpotent pair.
    pub fn pth_powers(&self) -> CommutingPair {
        let p = self.p() as u64;
        CommutingPair { c: self.a.pow(p), d: self.b.pow(p) }
    }
}

/// Commuting nilpotent `C, D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingPair {
    pub c: MatrixF,
    pub d: MatrixF,
}

impl CommutingPair {
    pub fn new(c: MatrixF, d: MatrixF) -> Result<Self> {
        let pair = CommutingPair { c, d };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        if !nilpotency_and_type(&self.c).0 {
            return Err(Error::NotNilpotent("C".into()));
        }
        if !nilpotency_and_type(&self.d).0 {
            return Err(Error::NotNilpotent("D".into()));
        }
        if !commutator(&self.c, &self.d)?.is_zero() {
            return Err(Error::NotCommuting);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn field(&self) -> &Field {
        self.c.field()
    }
}

/// The `p x p` pair from the standard representation: `A` the regular
/// nilpotent shift, `B e_i = -λ i e_{i-1}`.
pub fn standard_weyl_pair(field: &Field, lambda: Scalar) -> Result<NilpPair> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let (a, b) = standard_representation(field, lambda);
    let pair = NilpPair::new(a, b, lambda)?;
    let p = pair.p() as u64;
    if !pair.a.pow(p).is_zero() || !pair.b.pow(p).is_zero() {
        return Err(Error::Internal("standard pair p-th powers nonzero".into()));
    }
    Ok(pair)
}

/// A commuting nilpotent partner `M` of `L` together with a cyclic vector.
#[derive(Clone, Debug)]
pub struct CyclicPartner {
    pub m: MatrixF,
    /// Generates `k^r` under `k[L, M]`.
    pub cyclic_vector: Vec<Scalar>,
}

/// Nilpotent `M` commuting with `L` such that `k[L, M]` has dimension r and
/// the natural module is cyclic.
///
/// With Jordan chain generators `g_1, ..., g_s` of `L` (sizes weakly
/// decreasing), `M` sends `L^j g_i -> L^j g_{i+1}` and `g_s`'s chain to zero.
pub fn cyclic_commuting_partner(l: &MatrixF) -> Result<CyclicPartner> {
    if !l.is_square() {
        return Err(Error::Shape("partner of a non-square matrix".into()));
    }
    let chains = jordan_chains(l)?;
    let f = l.field();
    let r = l.rows();
    // columns L^j g_i in order
    let mut columns = Vec::with_capacity(r);
    let mut offsets = Vec::with_capacity(chains.len());
    for (g, k) in &chains {
        offsets.push(columns.len());
        let mut w = g.clone();
        for _ in 0..*k {
            columns.push(w.clone());
            w = l.apply(&w);
        }
    }
    let basis = MatrixF::from_columns(f, r, &columns);
    let mut shift = MatrixF::zeros(f, r, r);
    for i in 0..chains.len().saturating_sub(1) {
        let next_len = chains[i + 1].1;
        for j in 0..chains[i].1.min(next_len) {
            shift.set(offsets[i + 1] + j, offsets[i] + j, Scalar::ONE);
        }
    }
    let m = &(&basis * &shift) * &basis.inverse()?;
    let cyclic_vector = chains.first().map(|(g, _)| g.clone()).unwrap_or_default();
    if !m.is_nilpotent() || !commutator(l, &m)?.is_zero() {
        return Err(Error::Internal("cyclic partner fails to commute or is not nilpotent".into()));
    }
    if r > 0 {
        let dim = algebra_dim(f, r, &[l.clone(), m.clone()])?;
        let cyc = cyclic_submodule_dim(f, &[l.clone(), m.clone()], &cyclic_vector);
        if dim != r || cyc != r {
            return Err(Error::Internal(format!("k[L,M] has dim {dim}, cyclic span {cyc}, expected {r}")));
        }
    }
    Ok(CyclicPartner { m, cyclic_vector })
}

/// Block realization on `k^p ⊗ k^r` (index `i * r + v`) of a pair with
/// `A^p = I ⊗ C` and `B^p = I ⊗ D^p`:
/// `A(e_i ⊗ v) = e_{i+1} ⊗ v` for `i < p - 1`, `A(e_{p-1} ⊗ v) = e_0 ⊗ Cv`,
/// `B = B_sh + I ⊗ D` with `B_sh(e_i ⊗ v) = -λ i e_{i-1} ⊗ v`.
pub fn build_pair(c: &MatrixF, d: &MatrixF, lambda: Scalar) -> Result<NilpPair> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    CommutingPair::new(c.clone(), d.clone())?;
    let f = c.field().clone();
    let p = f.characteristic() as usize;
    let r = c.rows();
    let n = p * r;
    let mut a = MatrixF::zeros(&f, n, n);
    let mut b = MatrixF::zeros(&f, n, n);
    for i in 0..p {
        for v in 0..r {
            if i + 1 < p {
                a.set((i + 1) * r + v, i * r + v, Scalar::ONE);
            } else {
                for w in 0..r {
                    a.set(w, i * r + v, c.get(w, v));
                }
            }
            if i > 0 {
                b.set((i - 1) * r + v, i * r + v, f.neg(f.mul(lambda, f.from_int(i as i64))));
            }
            for w in 0..r {
                b.set(i * r + w, i * r + v, d.get(w, v));
            }
        }
    }
    let pair = NilpPair::new(a, b, lambda)?;
    let id = MatrixF::identity(&f, p);
    let powers = pair.pth_powers();
    if powers.c != id.kron(c) {
        return Err(Error::Internal("A^p != I ⊗ C".into()));
    }
    if powers.d != id.kron(&d.pow(p as u64)) {
        return Err(Error::Internal("B^p != I ⊗ D^p".into()));
    }
    Ok(pair)
}

/// `build_pair(J_r, J_r, λ)`: `A` is regular nilpotent and `k[A^p, B^p] = k[I ⊗ J_r]`.
pub fn good_pair(field: &Field, r: usize, lambda: Scalar) -> Result<NilpPair> {
    if r == 0 {
        return Err(Error::Precondition("r >= 1".into()));
    }
    let j = MatrixF::jordan_block(field, r);
    let pair = build_pair(&j, &j, lambda)?;
    if !is_good(&pair)? {
        return Err(Error::Internal("good_pair output is not good".into()));
    }
    Ok(pair)
}

/// `λ != 0` and `dim k[A^p, B^p] = r`. A dimension above r is reported as a
/// falsification of the commutative two-generator bound.
pub fn is_good(pair: &NilpPair) -> Result<bool> {
    if pair.lambda.is_zero() {
        return Ok(false);
    }
    let Some(r) = pair.r() else {
        return Ok(false);
    };
    let powers = pair.pth_powers();
    let dim = algebra_dim(pair.field(), pair.n(), &[powers.c, powers.d])?;
    if dim > r {
        return Err(Error::Falsification(format!("dim k[A^p, B^p] = {dim} exceeds r = {r}")));
    }
    Ok(dim == r)
}

/// Search parameters for nonlinear searches over affine solution spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub enumeration_cap: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { enumeration_cap: ENUMERATION_CAP, samples: SAMPLE_BUDGET, seed: 0 }
    }
}

/// How a witness search ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStatus {
    Found,
    /// Exhaustive enumeration found nothing.
    AbsenceCertified,
    /// Sampling found nothing; absence is not certified.
    AbsenceNotCertified,
    /// The linear system has no solution.
    Unsolvable,
}

#[derive(Clone, Debug)]
pub struct PartnerSearch {
    /// Solvability of the linear system `[A, X] = λI`.
    pub solvable: bool,
    pub witness: Option<MatrixF>,
    pub status: WitnessStatus,
    pub solution_space_dim: usize,
}

/// Affine space `{X : [A, X] = λI}`, or `None` when the system is unsolvable.
pub fn partner_space(a: &MatrixF, lambda: Scalar) -> Option<AffineSpace> {
    let f = a.field();
    let n = a.rows();
    let system = linear_map_matrix(f, n, |x| vec![commutator(a, x).expect("square")]);
    let rhs = MatrixF::scalar(f, n, lambda);
    let particular = system.solve(rhs.data())?;
    let directions: Vec<MatrixF> =
        system.kernel().into_iter().map(|v| MatrixF::from_flat(f, n, &v)).collect();
    Some(AffineSpace::new(MatrixF::from_flat(f, n, &particular), directions))
}

/// Decides whether `[A, X] = λI` is solvable and looks for a nilpotent solution.
pub fn exists_partner(a: &MatrixF, lambda: Scalar, budget: &SearchBudget) -> Result<PartnerSearch> {
    if !a.is_square() {
        return Err(Error::Shape("exists_partner needs a square matrix".into()));
    }
    if !nilpotency_and_type(a).0 {
        return Err(Error::NotNilpotent("A".into()));
    }
    let Some(space) = partner_space(a, lambda) else {
        return Ok(PartnerSearch {
            solvable: false,
            witness: None,
            status: WitnessStatus::Unsolvable,
            solution_space_dim: 0,
        });
    };
    let dim = space.dim();
    let mut witness = None;
    let status = if space.fits(budget.enumeration_cap) {
        space.for_each_point(|b, _| {
            if b.is_nilpotent() {
                witness = Some(b.clone());
                false
            } else {
                true
            }
        });
        if witness.is_some() {
            WitnessStatus::Found
        } else {
            WitnessStatus::AbsenceCertified
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        witness = (0..budget.samples).map(|_| space.sample(&mut rng)).find(|b| b.is_nilpotent());
        if witness.is_some() {
            WitnessStatus::Found
        } else {
            WitnessStatus::AbsenceNotCertified
        }
    };
    if let Some(b) = &witness {
        NilpPair::new(a.clone(), b.clone(), lambda)?;
    }
    Ok(PartnerSearch { solvable: true, witness, status, solution_space_dim: dim })
}

/// Perturbation families that keep `A` and stay inside the variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbMode {
    /// `B + C` with `C` centralizing `A` and strictly lowering the filtration
    /// `ker A^p ⊂ ker A^{2p} ⊂ ...`.
    CentralizingUpper,
    /// `b B + f(A)` with `b != 0` and `f(0) = 0`; `λ` becomes `b λ`.
    PolyInA,
}

impl std::str::FromStr for PerturbMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centralizing-upper" => Ok(PerturbMode::CentralizingUpper),
            "poly-in-a" | "poly-in-A" => Ok(PerturbMode::PolyInA),
            other => Err(Error::Precondition(format!("unknown perturbation mode {other}"))),
        }
    }
}

/// Linear space of `C` with `[A, C] = 0` and `C(ker A^{pi}) ⊆ ker A^{p(i-1)}` for all i.
pub fn centralizing_upper_space(a: &MatrixF) -> Vec<MatrixF> {
    let f = a.field();
    let n = a.rows();
    let p = f.characteristic() as u64;
    let mut constraints: Vec<(MatrixF, MatrixF)> = Vec::new();
    let mut i = 1u64;
    loop {
        let kernel = a.pow(p * i).kernel();
        let lower = a.pow(p * (i - 1));
        if !kernel.is_empty() {
            constraints.push((lower, MatrixF::from_columns(f, n, &kernel)));
        }
        if kernel.len() == n {
            break;
        }
        i += 1;
    }
    linear_map_kernel(f, n, |c| {
        let mut out = vec![commutator(a, c).expect("square")];
        out.extend(constraints.iter().map(|(lower, k)| &(lower * c) * k));
        out
    })
}

/// Random perturbation of `pair` within its family, re-verified and resampled
/// up to [`MAX_RESAMPLES`] times.
pub fn perturb_pair(pair: &NilpPair, mode: PerturbMode, seed: u64) -> Result<NilpPair> {
    pair.validate()?;
    let f = pair.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        PerturbMode::CentralizingUpper => {
            let space = centralizing_upper_space(&pair.a);
            if space.is_empty() {
                return Ok(pair.clone());
            }
            let zero = MatrixF::zeros(&f, pair.n(), pair.n());
            let affine = AffineSpace::new(zero, space);
            for _ in 0..MAX_RESAMPLES {
                let c = affine.sample(&mut rng);
                if let Ok(out) = perturb_with_centralizer(pair, &c) {
                    return Ok(out);
                }
            }
            Err(Error::Exhausted("centralizing-upper perturbation".into()))
        }
        PerturbMode::PolyInA => {
            let (_, ty) = nilpotency_and_type(&pair.a);
            if !ty.is_some_and(|t| t.is_regular()) {
                return Err(Error::Precondition("poly-in-A needs A regular nilpotent".into()));
            }
            let q = f.order();
            for _ in 0..MAX_RESAMPLES {
                let b = Scalar(rng.gen_range(1..q));
                let coeffs: Vec<Scalar> = (1..pair.n()).map(|_| Scalar(rng.gen_range(0..q))).collect();
                if let Ok(out) = perturb_poly_in_a(pair, b, &coeffs) {
                    return Ok(out);
                }
            }
            Err(Error::Exhausted("poly-in-A perturbation".into()))
        }
    }
}

/// `(A, B + C)` for an explicit `C` centralizing `A`.
pub fn perturb_with_centralizer(pair: &NilpPair, c: &MatrixF) -> Result<NilpPair> {
    if !commutator(&pair.a, c)?.is_zero() {
        return Err(Error::NotCommuting);
    }
    NilpPair::new(pair.a.clone(), &pair.b + c, pair.lambda)
}

/// `(A, bB + f(A), bλ)` with `f(t) = coeffs[0] t + coeffs[1] t^2 + ...`.
pub fn perturb_poly_in_a(pair: &NilpPair, b: Scalar, coeffs: &[Scalar]) -> Result<NilpPair> {
    let f = pair.field();
    if b.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let mut new_b = pair.b.scale(b);
    let mut power = pair.a.clone();
    for &c in coeffs {
        new_b = new_b.add_scaled(c, &power);
        power = &power * &pair.a;
    }
    NilpPair::new(pair.a.clone(), new_b, f.mul(b, pair.lambda))
}

/// Random commuting nilpotent pair of size n: `C` a random conjugate of a
/// random Jordan type, `D` a random nilpotent element of its centralizer.
pub fn random_commuting_pair(field: &Field, n: usize, rng: &mut impl Rng) -> Result<CommutingPair> {
    let types = crate::linalg::partitions(n);
    let tau: &JordanType = &types[rng.gen_range(0..types.len())];
    let g = MatrixF::random_invertible(field, n, rng);
    let g_inv = g.inverse()?;
    let c = MatrixF::nilpotent_of_type(field, tau).conjugate_by(&g, &g_inv);
    let centralizer = crate::subalgebra::centralizer_basis(field, n, &[c.clone()])?;
    let space = AffineSpace::new(MatrixF::zeros(field, n, n), centralizer);
    for _ in 0..MAX_RESAMPLES {
        let d = space.sample(rng);
        if d.is_nilpotent() {
            return CommutingPair::new(c, d);
        }
    }
    // polynomials in C without constant term are always nilpotent
    let d = c.scale(Scalar(rng.gen_range(0..field.order())));
    CommutingPair::new(c, d)
}
