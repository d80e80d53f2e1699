use serde::{Deserialize, Serialize};

use crate::constructions::NilpPair;
use crate::field::Scalar;
use crate::linalg::{dual_char_poly, nilpotency_and_type, JordanType, MatrixF};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentReport {
    pub point: NilpPair,
    pub n: usize,
    pub q: u32,
    pub type_a: Option<JordanType>,
    pub type_b: Option<JordanType>,
    pub jacobian_rank: usize,
    pub ambient_dim: usize,
    pub tangent_dim: usize,
}

/// Jacobian at `(A, B, λ)` of the system: the n lower char-poly coefficients
/// of A, those of B, and the n^2 entries of `[A, B] - λI`. Columns are the
/// entries of A, then of B, then λ.
pub fn jacobian(pair: &NilpPair) -> MatrixF {
    let f = pair.field();
    let n = pair.n();
    let nn = n * n;
    let mut jac = MatrixF::zeros(f, 2 * n + nn, 2 * nn + 1);
    for (block, m) in [&pair.a, &pair.b].into_iter().enumerate() {
        for idx in 0..nn {
            let e = MatrixF::unit(f, n, idx / n, idx % n);
            let dual = dual_char_poly(m, &e);
            for k in 0..n {
                jac.set(block * n + k, block * nn + idx, dual[k].deriv);
            }
        }
    }
    // d[A, B] = [dA, B] + [A, dB]
    for idx in 0..nn {
        let e = MatrixF::unit(f, n, idx / n, idx % n);
        let da = &(&e * &pair.b) - &(&pair.b * &e);
        let db = &(&pair.a * &e) - &(&e * &pair.a);
        for row in 0..nn {
            jac.set(2 * n + row, idx, da.data()[row]);
            jac.set(2 * n + row, nn + idx, db.data()[row]);
        }
    }
    let minus_one = f.neg(Scalar::ONE);
    for i in 0..n {
        jac.set(2 * n + i * n + i, 2 * nn, minus_one);
    }
    jac
}

/// Zariski tangent dimension of X at the pair: `2n^2 + 1 - rank(Jacobian)`.
pub fn tangent_dim(pair: &NilpPair) -> TangentReport {
    let n = pair.n();
    let rank = jacobian(pair).rank();
    let ambient = 2 * n * n + 1;
    TangentReport {
        point: pair.clone(),
        n,
        q: pair.field().order(),
        type_a: nilpotency_and_type(&pair.a).1,
        type_b: nilpotency_and_type(&pair.b).1,
        jacobian_rank: rank,
        ambient_dim: ambient,
        tangent_dim: ambient - rank,
    }
}
