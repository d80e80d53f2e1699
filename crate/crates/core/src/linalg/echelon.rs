use crate::field::{Field, Scalar};

use super::MatrixF;

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: MatrixF,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// Kernel basis read off the free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let cols = self.matrix.cols();
        let f = self.matrix.field();
        let mut is_pivot = vec![false; cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Scalar::ZERO; cols];
                v[free] = Scalar::ONE;
                for (row, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = f.neg(self.matrix.get(row, free));
                }
                v
            })
            .collect()
    }
}

pub fn rref(a: &MatrixF) -> Rref {
    let f = a.field().clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Scalar> = a.data().to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m[r * cols + c]).expect("nonzero pivot");
        for j in c..cols {
            m[r * cols + j] = f.mul(m[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            let neg = f.neg(factor);
            for j in c..cols {
                let v = m[r * cols + j];
                m[i * cols + j] = f.mul_add(m[i * cols + j], neg, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let matrix = MatrixF::from_vec(&f, rows, cols, m).expect("shape preserved");
    Rref { matrix, pivots }
}

/// Incrementally maintained semi-echelon basis of a subspace of `F^len`.
///
/// Each stored row has a unit pivot and is reduced against all earlier rows,
/// so reducing a new vector against the rows in insertion order is exact.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    len: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, len: usize) -> Self {
        Echelon { field: field.clone(), len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    /// Remainder of `v` after reduction by the stored basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.len, "vector length");
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            let neg = f.neg(c);
            for (x, &y) in v.iter_mut().zip(row).skip(pc) {
                *x = f.mul_add(*x, neg, y);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|s| s.is_zero())
    }

    /// Inserts `v`; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(r[pc]).expect("nonzero pivot");
        for x in r.iter_mut().skip(pc) {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    #[test]
    fn echelon_tracks_span() {
        let f3 = FieldCtx::prime(3).unwrap();
        let mut e = Echelon::new(&f3, 3);
        assert!(e.insert(&[Scalar(1), Scalar(2), Scalar(0)]));
        assert!(e.insert(&[Scalar(0), Scalar(1), Scalar(1)]));
        // 1*(1,2,0) + 2*(0,1,1) = (1,1,2)
        assert!(!e.insert(&[Scalar(1), Scalar(1), Scalar(2)]));
        assert!(e.contains(&[Scalar(2), Scalar(1), Scalar(0)]));
        assert_eq!(e.dim(), 2);
        assert!(e.insert(&[Scalar(0), Scalar(0), Scalar(1)]));
        assert_eq!(e.dim(), 3);
    }

    #[test]
    fn rref_pivots() {
        let f2 = FieldCtx::prime(2).unwrap();
        let a = MatrixF::from_ints(&f2, &[&[0, 1, 1], &[0, 1, 1], &[1, 0, 1]]);
        let r = rref(&a);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.kernel_basis(), vec![vec![Scalar(1), Scalar(1), Scalar(1)]]);
    }
}
