//! Characteristic polynomials without division by integers.
//!
//! Polynomials are coefficient vectors, constant term first. `char_poly`
//! returns `det(tI - A)`, monic of degree n.

use crate::field::{FieldCtx, Scalar};

use super::MatrixF;

/// Coefficients, constant term first.
pub type Poly = Vec<Scalar>;

/// Minimal commutative-ring interface for the division-free Berkowitz recurrence.
pub trait RingOps {
    type Elem: Copy + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
}

impl RingOps for FieldCtx {
    type Elem = Scalar;
    fn zero(&self) -> Scalar {
        Scalar::ZERO
    }
    fn one(&self) -> Scalar {
        Scalar::ONE
    }
    fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        FieldCtx::add(self, a, b)
    }
    fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        FieldCtx::sub(self, a, b)
    }
    fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        FieldCtx::mul(self, a, b)
    }
}

/// `value + deriv * eps` in `F[eps]/(eps^2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DualScalar {
    pub value: Scalar,
    pub deriv: Scalar,
}

impl DualScalar {
    pub fn new(value: Scalar, deriv: Scalar) -> Self {
        DualScalar { value, deriv }
    }
}

/// The dual numbers over a field.
pub struct DualRing<'a>(pub &'a FieldCtx);

impl RingOps for DualRing<'_> {
    type Elem = DualScalar;
    fn zero(&self) -> DualScalar {
        DualScalar::default()
    }
    fn one(&self) -> DualScalar {
        DualScalar::new(Scalar::ONE, Scalar::ZERO)
    }
    fn add(&self, a: DualScalar, b: DualScalar) -> DualScalar {
        DualScalar::new(self.0.add(a.value, b.value), self.0.add(a.deriv, b.deriv))
    }
    fn sub(&self, a: DualScalar, b: DualScalar) -> DualScalar {
        DualScalar::new(self.0.sub(a.value, b.value), self.0.sub(a.deriv, b.deriv))
    }
    fn mul(&self, a: DualScalar, b: DualScalar) -> DualScalar {
        let f = self.0;
        DualScalar::new(
            f.mul(a.value, b.value),
            f.add(f.mul(a.value, b.deriv), f.mul(a.deriv, b.value)),
        )
    }
}

/// Berkowitz's algorithm over any commutative ring; `entries` is row-major n x n.
pub fn berkowitz<R: RingOps>(ring: &R, n: usize, entries: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(entries.len(), n * n, "entries length");
    let at = |i: usize, j: usize| entries[i * n + j];
    // highest degree first while iterating
    let mut vect = vec![ring.one()];
    for r in 0..n {
        // Q = [1, -a_rr, -R C, -R S C, ..., -R S^{r-1} C], S the leading r x r block
        let mut q = Vec::with_capacity(r + 2);
        q.push(ring.one());
        q.push(ring.sub(ring.zero(), at(r, r)));
        let mut col: Vec<R::Elem> = (0..r).map(|i| at(i, r)).collect();
        for _ in 0..r {
            let rc = (0..r).fold(ring.zero(), |acc, j| ring.add(acc, ring.mul(at(r, j), col[j])));
            q.push(ring.sub(ring.zero(), rc));
            col = (0..r)
                .map(|i| (0..r).fold(ring.zero(), |acc, j| ring.add(acc, ring.mul(at(i, j), col[j]))))
                .collect();
        }
        let next: Vec<R::Elem> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r)).fold(ring.zero(), |acc, j| ring.add(acc, ring.mul(q[i - j], vect[j])))
            })
            .collect();
        vect = next;
    }
    vect.reverse();
    vect
}

/// `det(tI - A)` via similarity reduction to upper Hessenberg form followed by
/// the Hessenberg determinant recurrence. Only field divisions by pivots occur.
pub fn char_poly(a: &MatrixF) -> Poly {
    assert!(a.is_square(), "char_poly of a non-square matrix");
    let f = a.field().clone();
    let n = a.rows();
    let mut h = a.data().to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| !h[idx(i, m - 1)].is_zero()) else {
            continue;
        };
        if piv != m {
            for j in 0..n {
                h.swap(idx(piv, j), idx(m, j));
            }
            for i in 0..n {
                h.swap(idx(i, piv), idx(i, m));
            }
        }
        let inv = f.inv(h[idx(m, m - 1)]).expect("nonzero pivot");
        for i in m + 1..n {
            let u = f.mul(h[idx(i, m - 1)], inv);
            if u.is_zero() {
                continue;
            }
            let neg = f.neg(u);
            for j in 0..n {
                let v = h[idx(m, j)];
                h[idx(i, j)] = f.mul_add(h[idx(i, j)], neg, v);
            }
            for r in 0..n {
                let v = h[idx(r, i)];
                h[idx(r, m)] = f.mul_add(h[idx(r, m)], u, v);
            }
        }
    }
    // polys[k] = char poly of the leading k x k block
    let mut polys: Vec<Poly> = vec![vec![Scalar::ONE]];
    for k in 1..=n {
        let prev = &polys[k - 1];
        let diag = h[idx(k - 1, k - 1)];
        let mut pk = vec![Scalar::ZERO; k + 1];
        for (d, &c) in prev.iter().enumerate() {
            pk[d + 1] = f.add(pk[d + 1], c);
            pk[d] = f.sub(pk[d], f.mul(diag, c));
        }
        let mut prod = Scalar::ONE;
        for i in (1..k).rev() {
            // 1-based: i runs k-1 .. 1, prod accumulates h_{i+1,i}
            prod = f.mul(prod, h[idx(i, i - 1)]);
            let term = f.mul(h[idx(i - 1, k - 1)], prod);
            if term.is_zero() {
                continue;
            }
            for (d, &c) in polys[i - 1].iter().enumerate() {
                pk[d] = f.sub(pk[d], f.mul(term, c));
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap_or_else(|| vec![Scalar::ONE])
}

/// Characteristic polynomial of `A + eps E` over the dual numbers. The `deriv`
/// parts are the exact directional derivatives of the coefficients at `A`.
pub fn dual_char_poly(a: &MatrixF, e: &MatrixF) -> Vec<DualScalar> {
    assert!(a.is_square() && a.rows() == e.rows() && e.is_square(), "dual_char_poly shapes");
    let entries: Vec<DualScalar> =
        a.data().iter().zip(e.data()).map(|(&v, &d)| DualScalar::new(v, d)).collect();
    berkowitz(&DualRing(a.field()), a.rows(), &entries)
}
