//! Affine subspaces `base + span(directions)` of `M_n(F_q)`, enumerated or sampled.

use rand::Rng;

use crate::field::{Field, Scalar};
use crate::linalg::MatrixF;

/// Default cap on exhaustive enumeration (points).
pub const ENUMERATION_CAP: u64 = 1 << 20;
/// Default number of random samples once enumeration is out of reach.
pub const SAMPLE_BUDGET: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct AffineSpace {
    pub base: MatrixF,
    /// Linearly independent directions.
    pub directions: Vec<MatrixF>,
}

impl AffineSpace {
    pub fn new(base: MatrixF, directions: Vec<MatrixF>) -> Self {
        AffineSpace { base, directions }
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// `q^dim`, or `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        (self.field().order() as u128).checked_pow(self.dim() as u32)
    }

    pub fn fits(&self, cap: u64) -> bool {
        self.size().is_some_and(|s| s <= cap as u128)
    }

    pub fn point(&self, coords: &[Scalar]) -> MatrixF {
        coords.iter().zip(&self.directions).fold(self.base.clone(), |acc, (&c, d)| acc.add_scaled(c, d))
    }

    pub fn sample(&self, rng: &mut impl Rng) -> MatrixF {
        let q = self.field().order();
        let coords: Vec<Scalar> = (0..self.dim()).map(|_| Scalar(rng.gen_range(0..q))).collect();
        self.point(&coords)
    }

    /// Visits every point in mixed-radix order of the coordinates, updating
    /// the current matrix incrementally. Stops early when `visit` returns `false`.
    pub fn for_each_point(&self, mut visit: impl FnMut(&MatrixF, &[Scalar]) -> bool) {
        let f = self.field().clone();
        let q = f.order();
        let mut coords = vec![Scalar::ZERO; self.dim()];
        let mut current = self.base.clone();
        loop {
            if !visit(&current, &coords) {
                return;
            }
            let mut k = 0;
            loop {
                if k == coords.len() {
                    return;
                }
                let old = coords[k];
                let new = Scalar((old.0 + 1) % q);
                current = current.add_scaled(f.sub(new, old), &self.directions[k]);
                coords[k] = new;
                if new.0 != 0 {
                    break;
                }
                k += 1;
            }
        }
    }
}

/// Integer power `q^e` in u128, saturating.
pub fn int_pow(q: u64, e: u32) -> u128 {
    (q as u128).checked_pow(e).unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use std::collections::HashSet;

    #[test]
    fn enumeration_hits_every_point_once() {
        let f = FieldCtx::of_order(4).unwrap();
        let base = MatrixF::unit(&f, 2, 0, 0);
        let dirs = vec![MatrixF::unit(&f, 2, 0, 1), MatrixF::unit(&f, 2, 1, 1)];
        let space = AffineSpace::new(base, dirs);
        assert_eq!(space.size(), Some(16));
        let mut seen = HashSet::new();
        space.for_each_point(|m, coords| {
            assert_eq!(*m, space.point(coords));
            seen.insert(m.data().to_vec());
            true
        });
        assert_eq!(seen.len(), 16);
        let empty = AffineSpace::new(MatrixF::zeros(&f, 2, 2), vec![]);
        let mut count = 0;
        empty.for_each_point(|_, _| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
    }
}
