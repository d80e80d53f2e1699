use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Scalar;

use super::{char_poly, Echelon, MatrixF};

/// Jordan type of a nilpotent matrix: block sizes in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JordanType(Vec<usize>);

impl JordanType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&k| k == 0) {
            return Err(Error::Precondition("partition with a zero part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(JordanType(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Transposed partition.
    pub fn conjugate(&self) -> JordanType {
        let largest = self.0.first().copied().unwrap_or(0);
        JordanType((1..=largest).map(|k| self.0.iter().filter(|&&p| p >= k).count()).collect())
    }

    /// Dimension of the centralizer of a nilpotent of this type: the sum of squared conjugate parts.
    pub fn centralizer_dim(&self) -> usize {
        self.conjugate().0.iter().map(|&c| c * c).sum()
    }

    /// `(part, multiplicity)` for each distinct part, largest first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &k in &self.0 {
            match out.last_mut() {
                Some((part, mult)) if *part == k => *mult += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }

    pub fn all_parts_divisible_by(&self, p: usize) -> bool {
        self.0.iter().all(|&k| k % p == 0)
    }

    /// Every part multiplied by `p`.
    pub fn scaled(&self, p: usize) -> JordanType {
        JordanType(self.0.iter().map(|&k| k * p).collect())
    }

    pub fn is_regular(&self) -> bool {
        self.0.len() <= 1
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order starting from `(n)`.
pub fn partitions(n: usize) -> Vec<JordanType> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<JordanType>) {
        if remaining == 0 {
            out.push(JordanType(prefix.clone()));
            return;
        }
        for k in (1..=remaining.min(max)).rev() {
            prefix.push(k);
            rec(remaining - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `rank(A^k)` for k = 0, 1, ... up to the first zero power (inclusive).
pub fn rank_sequence(a: &MatrixF) -> Vec<usize> {
    let n = a.rows();
    let mut ranks = vec![n];
    let mut power = MatrixF::identity(a.field(), n);
    for _ in 0..n {
        power = &power * a;
        let r = power.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    ranks
}

/// Nilpotency via `char_poly(A) = t^n`; when nilpotent, the Jordan type from
/// the rank sequence: blocks of size k number `r_{k-1} - 2 r_k + r_{k+1}`.
pub fn nilpotency_and_type(a: &MatrixF) -> (bool, Option<JordanType>) {
    assert!(a.is_square(), "nilpotency of a non-square matrix");
    let n = a.rows();
    let cp = char_poly(a);
    let nilpotent = cp[..n].iter().all(|c| c.is_zero()) && cp[n] == Scalar::ONE;
    if !nilpotent {
        return (false, None);
    }
    let mut ranks = rank_sequence(a);
    ranks.push(0);
    let mut parts = Vec::new();
    for k in (1..ranks.len() - 1).rev() {
        let count = ranks[k - 1] + ranks[k + 1] - 2 * ranks[k];
        parts.extend(std::iter::repeat(k).take(count));
    }
    (true, Some(JordanType(parts)))
}

/// Jordan chain generators of a nilpotent matrix: vectors `g_i` with block
/// sizes `k_i`, weakly decreasing, such that the vectors `L^j g_i`
/// (`j < k_i`) form a basis.
pub fn jordan_chains(l: &MatrixF) -> Result<Vec<(Vec<Scalar>, usize)>> {
    let (nilpotent, _) = nilpotency_and_type(l);
    if !nilpotent {
        return Err(Error::NotNilpotent("Jordan chains need a nilpotent matrix".into()));
    }
    let f = l.field();
    let n = l.rows();
    let mut powers = vec![MatrixF::identity(f, n)];
    while !powers.last().expect("nonempty").is_zero() {
        let next = powers.last().expect("nonempty") * l;
        powers.push(next);
    }
    let index = powers.len() - 1;
    let kernels: Vec<Vec<Vec<Scalar>>> = powers.iter().map(|m| m.kernel()).collect();
    let mut chains = Echelon::new(f, n);
    let mut gens = Vec::new();
    for k in (1..=index).rev() {
        let mut test = chains.clone();
        for v in &kernels[k - 1] {
            test.insert(v);
        }
        for v in &kernels[k] {
            if test.insert(v) {
                let mut w = v.clone();
                for _ in 0..k {
                    chains.insert(&w);
                    w = l.apply(&w);
                }
                gens.push((v.clone(), k));
            }
        }
    }
    if chains.dim() != n {
        return Err(Error::Internal("Jordan chains do not span".into()));
    }
    Ok(gens)
}
