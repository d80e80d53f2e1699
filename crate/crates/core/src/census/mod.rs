//! Point counts of X, Y and D over small fields, dimension fits from count
//! growth, tangent-space ranks and fiber dimensions.
//!
//! All of this is dimension evidence only. Point counts at these sizes
//! cannot decide irreducibility.

mod counting;
mod fiber;
mod tangent;

pub use counting::{
    brute_count, brute_guard, class_count, class_size, gl_order, nilpotent_count, regular_fiber_count,
    CellCount, ClassCount, BRUTE_LIMIT,
};
pub use fiber::{fiber_dims, gerstenhaber_suite, FiberMode, FiberReport, GerstenhaberSummary, PreimageCount};
pub use tangent::{jacobian, tangent_dim, TangentReport};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::affine::{ENUMERATION_CAP, SAMPLE_BUDGET};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, Scalar};

/// Residual above which a dimension fit is flagged.
pub const FIT_TOLERANCE: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variety {
    /// Nilpotent pairs with `[A, B] = λI`, λ arbitrary.
    X,
    /// The part of X with λ != 0.
    Y,
    /// Commuting nilpotent pairs.
    D,
}

impl FromStr for Variety {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Variety::X),
            "Y" | "y" => Ok(Variety::Y),
            "D" | "d" => Ok(Variety::D),
            other => Err(Error::Precondition(format!("unknown variety {other}"))),
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMode {
    Zero,
    Nonzero,
    All,
}

impl FromStr for LambdaMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(LambdaMode::Zero),
            "nonzero" => Ok(LambdaMode::Nonzero),
            "all" => Ok(LambdaMode::All),
            other => Err(Error::Precondition(format!("unknown lambda mode {other}"))),
        }
    }
}

impl LambdaMode {
    /// `(zero cells, nonzero cells)` included for this variety.
    pub fn cells_for(self, variety: Variety) -> Result<(bool, bool)> {
        let (zero, nonzero) = match self {
            LambdaMode::Zero => (true, false),
            LambdaMode::Nonzero => (false, true),
            LambdaMode::All => (true, true),
        };
        let cells = match variety {
            Variety::X => (zero, nonzero),
            Variety::Y => (false, nonzero),
            Variety::D => (zero, false),
        };
        if cells == (false, false) {
            return Err(Error::Precondition(format!("variety {variety} has no points with lambda mode {self:?}")));
        }
        Ok(cells)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Brute,
    ClassExact,
    ClassSampled,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::ClassExact => "class-exact",
            Method::ClassSampled => "class-sampled",
        })
    }
}

/// Enumeration cap, sample budget and master seed for counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusBudget {
    pub enumeration_cap: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for CensusBudget {
    fn default() -> Self {
        CensusBudget { enumeration_cap: ENUMERATION_CAP, samples: SAMPLE_BUDGET, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountEntry {
    pub q: u32,
    pub count: u128,
    pub method: Method,
    /// 95% half-width, present for sampled counts.
    pub radius: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionFit {
    pub fitted_dim: f64,
    /// Largest deviation of a consecutive log-ratio from their mean.
    pub residual: f64,
    pub ratios: Vec<f64>,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub variety: Variety,
    pub n: usize,
    pub p: u32,
    pub lambda_mode: LambdaMode,
    pub seed: u64,
    pub counts: Vec<CountEntry>,
    pub fit: Option<DimensionFit>,
}

/// How to pick the counting method for each q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    /// Class counting where supported, brute force otherwise.
    Auto,
    Brute,
    Class,
    /// Both methods wherever they run; they must agree when exact.
    Both,
}

/// Counts `variety` for each q and fits a dimension when there are at least two field sizes.
pub fn census(
    variety: Variety,
    n: usize,
    qs: &[u32],
    lambda_mode: LambdaMode,
    choice: MethodChoice,
    budget: &CensusBudget,
) -> Result<CensusReport> {
    if qs.is_empty() {
        return Err(Error::Precondition("no field sizes given".into()));
    }
    let mut p = None;
    let mut counts = Vec::new();
    for &q in qs {
        let field = FieldCtx::of_order(q)?;
        let ch = field.characteristic();
        if *p.get_or_insert(ch) != ch {
            return Err(Error::Precondition("all field sizes must share one characteristic".into()));
        }
        let class_ok = counting::class_supported(n, q);
        let brute_ok = brute_guard(n, q).is_ok();
        let (do_class, do_brute) = match choice {
            MethodChoice::Auto => (class_ok, !class_ok),
            MethodChoice::Brute => (false, true),
            MethodChoice::Class => (true, false),
            MethodChoice::Both => (class_ok, brute_ok),
        };
        if do_class {
            let c = class_count(variety, n, &field, lambda_mode, budget)?;
            counts.push(CountEntry { q, count: c.count, method: c.method, radius: c.radius });
        }
        if do_brute {
            let effective = match lambda_mode.cells_for(variety)? {
                (true, true) => Variety::X,
                (true, false) => Variety::D,
                _ => Variety::Y,
            };
            let count = brute_count(effective, n, &field)?;
            if let Some(prev) = counts.last().filter(|e| e.q == q && e.method == Method::ClassExact) {
                if prev.count != count {
                    return Err(Error::Falsification(format!(
                        "{variety} n={n} q={q}: brute {count} vs class {}",
                        prev.count
                    )));
                }
            }
            counts.push(CountEntry { q, count, method: Method::Brute, radius: None });
        }
        if !do_class && !do_brute {
            return Err(Error::Guard(format!("no counting method applies to n={n}, q={q}")));
        }
    }
    let mut report = CensusReport {
        variety,
        n,
        p: p.expect("nonempty"),
        lambda_mode,
        seed: budget.seed,
        counts,
        fit: None,
    };
    let distinct = {
        let mut qs: Vec<u32> = report.counts.iter().map(|c| c.q).collect();
        qs.dedup();
        qs.len()
    };
    if distinct >= 2 {
        report.fit = Some(estimate_dimension(&report.counts)?);
    }
    Ok(report)
}

/// Mean of consecutive `log(N(q2)/N(q1)) / log(q2/q1)`, using the first
/// count listed for each q.
pub fn estimate_dimension(counts: &[CountEntry]) -> Result<DimensionFit> {
    let mut points: Vec<(u32, u128)> = Vec::new();
    for c in counts {
        if !points.iter().any(|&(q, _)| q == c.q) {
            points.push((c.q, c.count));
        }
    }
    points.sort_unstable();
    if points.len() < 2 {
        return Err(Error::Precondition("a dimension fit needs counts at two or more field sizes".into()));
    }
    if points.iter().any(|&(_, c)| c == 0) {
        return Err(Error::Precondition("cannot fit a dimension to a zero count".into()));
    }
    let ratios: Vec<f64> = points
        .windows(2)
        .map(|w| ((w[1].1 as f64) / (w[0].1 as f64)).ln() / ((w[1].0 as f64) / (w[0].0 as f64)).ln())
        .collect();
    let fitted_dim = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let residual = ratios.iter().map(|r| (r - fitted_dim).abs()).fold(0.0, f64::max);
    Ok(DimensionFit { fitted_dim, residual, ratios, flagged: residual > FIT_TOLERANCE })
}

/// 95% Wilson interval half-width (the larger side) around `hits / trials`.
pub fn wilson_radius(hits: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 1.0;
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let phat = hits as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center + half) - phat).max(phat - (center - half))
}

/// Nilpotency by repeated squaring on raw entry slices, reusing buffers.
pub struct NilpotencyTester {
    n: usize,
    x: Vec<Scalar>,
    y: Vec<Scalar>,
}

impl NilpotencyTester {
    pub fn new(n: usize) -> Self {
        NilpotencyTester { n, x: vec![Scalar::ZERO; n * n], y: vec![Scalar::ZERO; n * n] }
    }

    pub fn is_nilpotent(&mut self, f: &FieldCtx, m: &[Scalar]) -> bool {
        let n = self.n;
        let trace = (0..n).fold(Scalar::ZERO, |acc, i| f.add(acc, m[i * n + i]));
        if !trace.is_zero() {
            return false;
        }
        self.x.copy_from_slice(m);
        let mut e = 1;
        while e < n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Scalar::ZERO;
                    for k in 0..n {
                        acc = f.mul_add(acc, self.x[i * n + k], self.x[k * n + j]);
                    }
                    self.y[i * n + j] = acc;
                }
            }
            std::mem::swap(&mut self.x, &mut self.y);
            if self.x.iter().all(|s| s.is_zero()) {
                return true;
            }
            e *= 2;
        }
        self.x.iter().all(|s| s.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::MatrixF;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fits() {
        let entry = |q, count| CountEntry { q, count, method: Method::Brute, radius: None };
        let fit = estimate_dimension(&[entry(2, 16), entry(4, 256)]).unwrap();
        assert_eq!(fit.fitted_dim, 4.0);
        assert_eq!(fit.residual, 0.0);
        let fit = estimate_dimension(&[entry(2, 10), entry(4, 76)]).unwrap();
        assert!((fit.fitted_dim - (7.6f64).log2()).abs() < 1e-12);
        assert!((fit.fitted_dim - 2.93).abs() < 0.01);
        assert!(estimate_dimension(&[entry(2, 10)]).is_err());
    }

    #[test]
    fn wilson_radius_is_sane() {
        assert!(wilson_radius(0, 100) > 0.0);
        let r = wilson_radius(50, 10_000);
        assert!(r > 0.0 && r < 0.01);
        assert!(wilson_radius(5000, 10_000) < 0.011);
    }

    #[test]
    fn nilpotency_tester_matches_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for q in [2, 3, 4] {
            let f = FieldCtx::of_order(q).unwrap();
            for n in 1..=6 {
                let mut tester = NilpotencyTester::new(n);
                for _ in 0..200 {
                    let mut m = MatrixF::random(&f, n, n, &mut rng);
                    // bias towards nilpotent inputs
                    if n > 1 && rand::Rng::gen_bool(&mut rng, 0.5) {
                        for i in 0..n {
                            for j in 0..=i {
                                m.set(i, j, Scalar::ZERO);
                            }
                        }
                    }
                    assert_eq!(tester.is_nilpotent(&f, m.data()), m.is_nilpotent());
                }
            }
        }
    }
}
