use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{wilson_radius, CensusBudget, LambdaMode, Method, NilpotencyTester, Variety};
use crate::affine::{int_pow, AffineSpace};
use crate::constructions::partner_space;
use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx, Scalar};
use crate::linalg::{commutator, partitions, JordanType, MatrixF};
use crate::subalgebra::centralizer_basis;

/// Brute force is limited to `q^(2n^2) <= 2^26` pair checks.
pub const BRUTE_LIMIT: u128 = 1 << 26;

const CLASS_MAX_N: usize = 6;
const CLASS_MAX_Q: u32 = 4;

pub(super) fn class_supported(n: usize, q: u32) -> bool {
    (1..=CLASS_MAX_N).contains(&n) && q <= CLASS_MAX_Q
}

pub fn brute_guard(n: usize, q: u32) -> Result<()> {
    let work = int_pow(q as u64, (2 * n * n) as u32);
    if n == 0 || work > BRUTE_LIMIT {
        return Err(Error::Guard(format!(
            "brute force over q^(2n^2) = {q}^{} pairs exceeds 2^26; use class counting",
            2 * n * n
        )));
    }
    Ok(())
}

/// Every n x n matrix over the field, in base-q order of the row-major entry codes.
fn all_matrices(field: &Field, n: usize) -> Vec<MatrixF> {
    let q = field.order() as usize;
    let total = q.pow((n * n) as u32);
    (0..total)
        .map(|mut code| {
            MatrixF::from_fn(field, n, n, |_, _| {
                let s = Scalar((code % q) as u32);
                code /= q;
                s
            })
        })
        .collect()
}

/// Exact count of pairs `(A, B)` in the variety by enumerating every pair.
/// Pairs whose `A` is not nilpotent are rejected once per `A`.
pub fn brute_count(variety: Variety, n: usize, field: &Field) -> Result<u128> {
    brute_guard(n, field.order())?;
    let matrices = all_matrices(field, n);
    let nilpotent: Vec<bool> = matrices.iter().map(|m| m.is_nilpotent()).collect();
    let count = matrices
        .par_iter()
        .zip(&nilpotent)
        .filter(|(_, &nil)| nil)
        .map(|(a, _)| {
            matrices
                .iter()
                .zip(&nilpotent)
                .filter(|(b, &nil)| {
                    if !nil {
                        return false;
                    }
                    let c = commutator(a, b).expect("square");
                    let lambda = c.get(0, 0);
                    let scalar = c == MatrixF::scalar(field, n, lambda);
                    scalar
                        && match variety {
                            Variety::X => true,
                            Variety::Y => !lambda.is_zero(),
                            Variety::D => lambda.is_zero(),
                        }
                })
                .count() as u128
        })
        .sum();
    Ok(count)
}

/// `|GL_n(F_q)|`.
pub fn gl_order(n: usize, q: u64) -> u128 {
    let qn = int_pow(q, n as u32);
    (0..n as u32).map(|i| qn - int_pow(q, i)).product()
}

/// Number of nilpotent n x n matrices over F_q: `q^(n^2 - n)`.
pub fn nilpotent_count(n: usize, q: u64) -> u128 {
    int_pow(q, (n * n - n) as u32)
}

/// Size of the conjugacy class of nilpotents of type `tau`:
/// `|GL_n| / (q^(dim C - Σ m_i^2) Π |GL_{m_i}|)` with `dim C = Σ (τ'_i)^2`
/// and `m_i` the multiplicities of the distinct parts.
pub fn class_size(tau: &JordanType, field: &FieldCtx) -> Result<u128> {
    let n = tau.size();
    if n == 0 {
        return Err(Error::Precondition("empty partition".into()));
    }
    let q = field.order() as u64;
    let mults = tau.multiplicities();
    let square_mults: usize = mults.iter().map(|&(_, m)| m * m).sum();
    let unipotent = int_pow(q, (tau.centralizer_dim() - square_mults) as u32);
    let reductive: u128 = mults.iter().map(|&(_, m)| gl_order(m, q)).product();
    let total = gl_order(n, q);
    let stab = unipotent * reductive;
    if total % stab != 0 {
        return Err(Error::Internal(format!("class size of {tau} is not an integer")));
    }
    Ok(total / stab)
}

/// One stratum of a class count: a Jordan type of `A` and a λ range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellCount {
    pub tau: String,
    pub nonzero_lambda: bool,
    /// Dimension of the affine space of `B` solving the linear equations, if solvable.
    pub space_dim: Option<usize>,
    /// Nilpotent `B` for one representative `A` (and one λ in nonzero cells).
    /// Rounded when sampled.
    pub inner: u128,
    pub class_size: u128,
    pub total: u128,
    pub method: Method,
    pub radius: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassCount {
    pub count: u128,
    pub method: Method,
    pub radius: Option<f64>,
    pub cells: Vec<CellCount>,
}

/// Counts nilpotent points of an affine space: every point when it fits the
/// cap, otherwise a uniform sample. Returns (estimate, Wilson radius if sampled).
fn count_nilpotent_points(space: &AffineSpace, budget: &CensusBudget, rng: &mut ChaCha8Rng) -> (f64, Option<f64>) {
    let f = space.field().clone();
    let n = space.base.rows();
    let mut tester = NilpotencyTester::new(n);
    if space.fits(budget.enumeration_cap) {
        let mut hits: u64 = 0;
        space.for_each_point(|b, _| {
            if tester.is_nilpotent(&f, b.data()) {
                hits += 1;
            }
            true
        });
        return (hits as f64, None);
    }
    let size = int_pow(f.order() as u64, space.dim() as u32) as f64;
    let hits = (0..budget.samples).filter(|_| tester.is_nilpotent(&f, space.sample(rng).data())).count() as u64;
    let frac = hits as f64 / budget.samples as f64;
    (frac * size, Some(wilson_radius(hits, budget.samples) * size))
}

/// Sum over Jordan types `τ` of `|class(τ)| · #{B nilpotent : [A_τ, B] = λI}`
/// over the λ range. Nonzero λ is counted at λ = 1 and scaled by `q - 1`
/// through `(A, B, λ) -> (A, cB, cλ)`.
pub fn class_count(
    variety: Variety,
    n: usize,
    field: &Field,
    mode: LambdaMode,
    budget: &CensusBudget,
) -> Result<ClassCount> {
    let q = field.order();
    if !class_supported(n, q) {
        return Err(Error::Guard(format!(
            "class counting supports 1 <= n <= {CLASS_MAX_N} and q <= {CLASS_MAX_Q}, got n={n}, q={q}"
        )));
    }
    let (zero, nonzero) = mode.cells_for(variety)?;
    let mut cells: Vec<(JordanType, bool)> = Vec::new();
    for tau in partitions(n) {
        if zero {
            cells.push((tau.clone(), false));
        }
        if nonzero {
            cells.push((tau, true));
        }
    }
    let results: Vec<Result<CellCount>> = cells
        .par_iter()
        .enumerate()
        .map(|(index, (tau, nz))| count_cell(field, tau, *nz, budget, index as u64))
        .collect();
    let cells = results.into_iter().collect::<Result<Vec<_>>>()?;
    let sampled = cells.iter().any(|c| c.method == Method::ClassSampled);
    let count = cells.iter().map(|c| c.total).sum();
    let radius = sampled.then(|| cells.iter().filter_map(|c| c.radius).sum());
    let method = if sampled { Method::ClassSampled } else { Method::ClassExact };
    Ok(ClassCount { count, method, radius, cells })
}

fn count_cell(field: &Field, tau: &JordanType, nonzero: bool, budget: &CensusBudget, index: u64) -> Result<CellCount> {
    let n = tau.size();
    let q = field.order() as u64;
    let size = class_size(tau, field)?;
    let scale = if nonzero { q - 1 } else { 1 };
    let exact = |space_dim, inner: u128| CellCount {
        tau: tau.to_string(),
        nonzero_lambda: nonzero,
        space_dim,
        inner,
        class_size: size,
        total: inner * size * scale as u128,
        method: Method::ClassExact,
        radius: None,
    };
    let a = MatrixF::nilpotent_of_type(field, tau);
    let space = if nonzero {
        match partner_space(&a, Scalar::ONE) {
            Some(space) => space,
            None => return Ok(exact(None, 0)),
        }
    } else {
        if tau.parts().iter().all(|&k| k == 1) {
            // A = 0: every nilpotent B
            return Ok(exact(Some(n * n), nilpotent_count(n, q)));
        }
        AffineSpace::new(MatrixF::zeros(field, n, n), centralizer_basis(field, n, &[a])?)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    rng.set_stream(index);
    let (inner, radius) = count_nilpotent_points(&space, budget, &mut rng);
    if radius.is_none() {
        return Ok(exact(Some(space.dim()), inner as u128));
    }
    let factor = size as f64 * scale as f64;
    Ok(CellCount {
        tau: tau.to_string(),
        nonzero_lambda: nonzero,
        space_dim: Some(space.dim()),
        inner: inner.round() as u128,
        class_size: size,
        total: (inner * factor).round() as u128,
        method: Method::ClassSampled,
        radius: radius.map(|r| r * factor),
    })
}

/// `#{B nilpotent : [J_n, B] = λI}` for one nonzero λ: the fiber of
/// `(A, B) -> A` over a regular nilpotent.
pub fn regular_fiber_count(n: usize, field: &Field, budget: &CensusBudget) -> Result<(Option<usize>, f64, Option<f64>)> {
    let a = MatrixF::jordan_block(field, n);
    let Some(space) = partner_space(&a, Scalar::ONE) else {
        return Ok((None, 0.0, None));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let (count, radius) = count_nilpotent_points(&space, budget, &mut rng);
    Ok((Some(space.dim()), count, radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn class_sizes_small() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(class_size(&JordanType::new(vec![2]).unwrap(), &f2).unwrap(), 3);
        assert_eq!(class_size(&JordanType::new(vec![1, 1]).unwrap(), &f2).unwrap(), 1);
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(3, 2), 168);
    }

    #[test]
    fn class_sizes_match_enumeration() {
        // Jordan type of every 3x3 matrix over F_2 and every 2x2 over F_4
        for (n, q) in [(3, 2), (2, 4), (2, 3)] {
            let f = FieldCtx::of_order(q).unwrap();
            let mut seen: HashMap<JordanType, u128> = HashMap::new();
            for m in all_matrices(&f, n) {
                if let (true, Some(t)) = crate::linalg::nilpotency_and_type(&m) {
                    *seen.entry(t).or_default() += 1;
                }
            }
            for tau in partitions(n) {
                assert_eq!(seen[&tau], class_size(&tau, &f).unwrap(), "{tau} q={q}");
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_nilpotent_count() {
        for n in 1..=6 {
            for q in [2u32, 3, 4, 5, 7, 8] {
                let f = FieldCtx::of_order(q).unwrap();
                let total: u128 = partitions(n).iter().map(|t| class_size(t, &f).unwrap()).sum();
                assert_eq!(total, nilpotent_count(n, q as u64), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn brute_counts_n2() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(brute_count(Variety::D, 2, &f2).unwrap(), 10);
        assert_eq!(brute_count(Variety::X, 2, &f2).unwrap(), 16);
        assert_eq!(brute_count(Variety::Y, 2, &f2).unwrap(), 6);
        let f16 = FieldCtx::of_order(16).unwrap();
        assert!(matches!(brute_count(Variety::X, 2, &f16), Err(Error::Guard(_))));
        let f4 = FieldCtx::prime(2).unwrap();
        assert!(brute_count(Variety::X, 4, &f4).is_err());
    }

    #[test]
    fn class_agrees_with_brute() {
        let budget = CensusBudget::default();
        for (n, q) in [(2, 2), (2, 3), (2, 4), (3, 2)] {
            let f = FieldCtx::of_order(q).unwrap();
            for v in [Variety::X, Variety::Y, Variety::D] {
                let brute = brute_count(v, n, &f).unwrap();
                let class = class_count(v, n, &f, LambdaMode::All, &budget).unwrap();
                assert_eq!(class.method, Method::ClassExact);
                assert_eq!(class.count, brute, "{v} n={n} q={q}");
            }
        }
    }

    #[test]
    fn nonzero_scaling_matches_direct_lambda_count() {
        let f = FieldCtx::of_order(4).unwrap();
        let mut direct = 0u128;
        for lambda in f.units() {
            for tau in partitions(2) {
                let a = MatrixF::nilpotent_of_type(&f, &tau);
                if let Some(space) = partner_space(&a, lambda) {
                    let mut c = 0u128;
                    space.for_each_point(|b, _| {
                        c += b.is_nilpotent() as u128;
                        true
                    });
                    direct += c * class_size(&tau, &f).unwrap();
                }
            }
        }
        let scaled = class_count(Variety::X, 2, &f, LambdaMode::Nonzero, &CensusBudget::default()).unwrap();
        assert_eq!(scaled.count, direct);
    }

    #[test]
    fn trace_obstruction() {
        let f2 = FieldCtx::prime(2).unwrap();
        let c = class_count(Variety::X, 3, &f2, LambdaMode::Nonzero, &CensusBudget::default()).unwrap();
        assert_eq!(c.count, 0);
        assert_eq!(c.method, Method::ClassExact);
    }

    #[test]
    fn sampled_cells_carry_radii() {
        let f2 = FieldCtx::prime(2).unwrap();
        let budget = CensusBudget { enumeration_cap: 1 << 3, samples: 4000, seed: 9 };
        let exact = class_count(Variety::D, 3, &f2, LambdaMode::All, &CensusBudget::default()).unwrap();
        let sampled = class_count(Variety::D, 3, &f2, LambdaMode::All, &budget).unwrap();
        assert_eq!(sampled.method, Method::ClassSampled);
        let radius = sampled.radius.unwrap();
        assert!(radius > 0.0);
        assert!((sampled.count as f64 - exact.count as f64).abs() <= 2.0 * radius);
        let again = class_count(Variety::D, 3, &f2, LambdaMode::All, &budget).unwrap();
        assert_eq!(again, sampled);
    }
}
