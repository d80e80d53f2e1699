//! Dense matrices over a [`FieldCtx`] and the exact linear algebra built on them.

mod charpoly;
mod echelon;
mod jordan;

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

pub use charpoly::{berkowitz, char_poly, dual_char_poly, DualScalar, Poly, RingOps};
pub use echelon::{rref, Echelon, Rref};
pub use jordan::{jordan_chains, nilpotency_and_type, partitions, rank_sequence, JordanType};

/// Dense row-major matrix over a finite field.
#[derive(Clone)]
pub struct MatrixF {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
    field: Field,
}

impl PartialEq for MatrixF {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }
}

impl Eq for MatrixF {}

impl fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixF {}x{} over GF({})", self.rows, self.cols, self.field.order())?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl MatrixF {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        MatrixF { rows, cols, data: vec![Scalar::ZERO; rows * cols], field: field.clone() }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::scalar(field, n, Scalar::ONE)
    }

    /// `s * I`
    pub fn scalar(field: &Field, n: usize, s: Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatrixF { rows, cols, data, field: field.clone() }
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|s| !field.contains(**s)) {
            return Err(Error::Precondition(format!("entry {bad} outside GF({})", field.order())));
        }
        Ok(MatrixF { rows, cols, data, field: field.clone() })
    }

    /// Integer entries reduced into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged integer matrix");
        Self::from_fn(field, r, c, |i, j| field.from_int(rows[i][j]))
    }

    /// Matrix unit `e_{ij}` (zero-based indices).
    pub fn unit(field: &Field, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.data[i * n + j] = Scalar::ONE;
        m
    }

    /// Single nilpotent Jordan block `J_k`, mapping `e_i -> e_{i+1}` (ones on the subdiagonal).
    pub fn jordan_block(field: &Field, k: usize) -> Self {
        Self::from_fn(field, k, k, |i, j| if i == j + 1 { Scalar::ONE } else { Scalar::ZERO })
    }

    /// Block diagonal nilpotent in Jordan form for the given type.
    pub fn nilpotent_of_type(field: &Field, tau: &JordanType) -> Self {
        let blocks: Vec<_> = tau.parts().iter().map(|&k| Self::jordan_block(field, k)).collect();
        Self::block_diag(field, &blocks)
    }

    pub fn block_diag(field: &Field, blocks: &[MatrixF]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Kronecker product; index `(i, a)` of `self ⊗ other` is `i * other.rows + a`.
    pub fn kron(&self, other: &MatrixF) -> MatrixF {
        let f = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        MatrixF::from_fn(f, r, c, |i, j| {
            let (i0, i1) = (i / other.rows, i % other.rows);
            let (j0, j1) = (j / other.cols, j % other.cols);
            f.mul(self.get(i0, j0), other.get(i1, j1))
        })
    }

    pub fn random(field: &Field, rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let q = field.order();
        Self::from_fn(field, rows, cols, |_, _| Scalar(rng.gen_range(0..q)))
    }

    /// Uniformly random invertible matrix by rejection.
    pub fn random_invertible(field: &Field, n: usize, rng: &mut impl Rng) -> Self {
        loop {
            let g = Self::random(field, n, n, rng);
            if g.rank() == n {
                return g;
            }
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Row-major entries; also the flattening used for span computations.
    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == MatrixF::identity(&self.field, self.rows)
    }

    fn check_same(&self, other: &MatrixF, what: &str) -> Result<()> {
        if !(Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MatrixF) -> Result<MatrixF> {
        self.check_same(other, "add")?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(MatrixF { data, ..self.clone_shape() })
    }

    pub fn try_sub(&self, other: &MatrixF) -> Result<MatrixF> {
        self.check_same(other, "sub")?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(MatrixF { data, ..self.clone_shape() })
    }

    pub fn try_mul(&self, other: &MatrixF) -> Result<MatrixF> {
        if !(Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = MatrixF::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = f.mul_add(*o, a, b);
                }
            }
        }
        Ok(out)
    }

    fn clone_shape(&self) -> MatrixF {
        MatrixF { rows: self.rows, cols: self.cols, data: Vec::new(), field: self.field.clone() }
    }

    pub fn scale(&self, s: Scalar) -> MatrixF {
        let f = &self.field;
        MatrixF { data: self.data.iter().map(|&a| f.mul(s, a)).collect(), ..self.clone_shape() }
    }

    pub fn neg(&self) -> MatrixF {
        let f = &self.field;
        MatrixF { data: self.data.iter().map(|&a| f.neg(a)).collect(), ..self.clone_shape() }
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: Scalar, other: &MatrixF) -> MatrixF {
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.mul_add(a, s, b)).collect();
        MatrixF { data, ..self.clone_shape() }
    }

    pub fn transpose(&self) -> MatrixF {
        MatrixF::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn pow(&self, mut e: u64) -> MatrixF {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut base = self.clone();
        let mut acc = MatrixF::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(Scalar::ZERO, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Applies an entrywise map of fields, e.g. embedding prime-subfield entries.
    pub fn embed_into(&self, target: &Field) -> Result<MatrixF> {
        let data = self
            .data
            .iter()
            .map(|&a| target.embed_prime(a, &self.field))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixF { rows: self.rows, cols: self.cols, data, field: target.clone() })
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        rref(self).kernel_basis()
    }

    /// Rank and kernel basis together.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Scalar>>) {
        let r = rref(self);
        (r.pivots.len(), r.kernel_basis())
    }

    /// A particular solution of `self * x = b`, or `None` if `b` is outside the column space.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let aug = MatrixF::from_fn(&self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                b[i]
            }
        });
        let r = rref(&aug);
        if r.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::ZERO; self.cols];
        for (row, &pc) in r.pivots.iter().enumerate() {
            x[pc] = r.matrix.get(row, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<MatrixF> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = MatrixF::from_fn(&self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if j - n == i {
                Scalar::ONE
            } else {
                Scalar::ZERO
            }
        });
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        Ok(MatrixF::from_fn(&self.field, n, n, |i, j| r.matrix.get(i, n + j)))
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Scalar::ZERO, |acc, (&a, &b)| f.mul_add(acc, a, b)))
            .collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, n: usize, columns: &[Vec<Scalar>]) -> MatrixF {
        MatrixF::from_fn(field, n, columns.len(), |i, j| columns[j][i])
    }

    /// Reshapes a flattened n*n vector (row-major) into a square matrix.
    pub fn from_flat(field: &Field, n: usize, flat: &[Scalar]) -> MatrixF {
        assert_eq!(flat.len(), n * n, "flat length");
        MatrixF { rows: n, cols: n, data: flat.to_vec(), field: field.clone() }
    }

    /// `g * self * g^{-1}`
    pub fn conjugate_by(&self, g: &MatrixF, g_inv: &MatrixF) -> MatrixF {
        &(g * self) * g_inv
    }

    pub fn char_poly(&self) -> Poly {
        char_poly(self)
    }

    /// `self^n == 0`, which for an n x n matrix is equivalent to nilpotency.
    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u64).is_zero()
    }

    /// Integer coefficient vectors of every entry, row by row.
    pub fn to_coeff_grid(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&s| self.field.coeffs(s)).collect()).collect()
    }

    pub fn from_coeff_grid(field: &Field, grid: &[Vec<Vec<u32>>]) -> Result<MatrixF> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows * cols);
        for row in grid {
            if row.len() != cols {
                return Err(Error::Shape("ragged matrix rows".into()));
            }
            for c in row {
                data.push(field.from_coeffs(c)?);
            }
        }
        Ok(MatrixF { rows, cols, data, field: field.clone() })
    }
}

impl<'a> Add<&'a MatrixF> for &'a MatrixF {
    type Output = MatrixF;
    fn add(self, rhs: &'a MatrixF) -> MatrixF {
        self.try_add(rhs).expect("matrix addition")
    }
}

impl<'a> Sub<&'a MatrixF> for &'a MatrixF {
    type Output = MatrixF;
    fn sub(self, rhs: &'a MatrixF) -> MatrixF {
        self.try_sub(rhs).expect("matrix subtraction")
    }
}

impl<'a> Mul<&'a MatrixF> for &'a MatrixF {
    type Output = MatrixF;
    fn mul(self, rhs: &'a MatrixF) -> MatrixF {
        self.try_mul(rhs).expect("matrix product")
    }
}

/// `[A, B] = AB - BA`
pub fn commutator(a: &MatrixF, b: &MatrixF) -> Result<MatrixF> {
    if !a.is_square() {
        return Err(Error::Shape("commutator of non-square matrices".into()));
    }
    a.check_same(b, "commutator")?;
    Ok(&a.try_mul(b)? - &b.try_mul(a)?)
}

/// Kernel of a linear map on n x n matrices, given by its action on matrix
/// units. The map's outputs are flattened and stacked as columns.
pub fn linear_map_kernel(
    field: &Field,
    n: usize,
    map: impl Fn(&MatrixF) -> Vec<MatrixF>,
) -> Vec<MatrixF> {
    let system = linear_map_matrix(field, n, map);
    system.kernel().into_iter().map(|v| MatrixF::from_flat(field, n, &v)).collect()
}

/// Coefficient matrix of a linear map on n x n matrices (one column per unit `e_{ij}`).
pub fn linear_map_matrix(field: &Field, n: usize, map: impl Fn(&MatrixF) -> Vec<MatrixF>) -> MatrixF {
    let mut columns = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let images = map(&MatrixF::unit(field, n, i, j));
            columns.push(images.iter().flat_map(|m| m.data().iter().copied()).collect::<Vec<_>>());
        }
    }
    let height = columns.first().map_or(0, |c| c.len());
    MatrixF::from_columns(field, height, &columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn commutator_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        let e21 = MatrixF::unit(&f2, 2, 1, 0);
        let e12 = MatrixF::unit(&f2, 2, 0, 1);
        assert!(commutator(&e21, &e12).unwrap().is_identity());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = MatrixF::random(&f2, 3, 3, &mut rng);
        assert!(commutator(&a, &a).unwrap().is_zero());
        assert!(commutator(&MatrixF::identity(&f2, 3), &a).unwrap().is_zero());
        let wrong = MatrixF::zeros(&f2, 2, 2);
        assert!(matches!(commutator(&a, &wrong), Err(Error::Shape(_))));
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(commutator(&wrong, &MatrixF::zeros(&f3, 2, 2)), Err(Error::FieldMismatch));
    }

    #[test]
    fn rank_kernel_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        let (r, k) = MatrixF::zeros(&f2, 2, 2).rank_kernel();
        assert_eq!((r, k.len()), (0, 2));
        let (r, k) = MatrixF::identity(&f2, 3).rank_kernel();
        assert_eq!((r, k.len()), (3, 0));
        let e12 = MatrixF::unit(&f2, 2, 0, 1);
        let (r, k) = e12.rank_kernel();
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec![Scalar::ONE, Scalar::ZERO]]);
    }

    #[test]
    fn solve_and_inverse() {
        let f5 = FieldCtx::prime(5).unwrap();
        let a = MatrixF::from_ints(&f5, &[&[1, 2], &[3, 4]]);
        let x = a.solve(&[Scalar(1), Scalar(0)]).unwrap();
        assert_eq!(a.apply(&x), vec![Scalar(1), Scalar(0)]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        let singular = MatrixF::from_ints(&f5, &[&[1, 2], &[2, 4]]);
        assert!(singular.solve(&[Scalar(1), Scalar(0)]).is_none());
        assert_eq!(singular.inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn kron_layout() {
        let f2 = FieldCtx::prime(2).unwrap();
        let i2 = MatrixF::identity(&f2, 2);
        let j2 = MatrixF::jordan_block(&f2, 2);
        let k = i2.kron(&j2);
        assert_eq!(k, MatrixF::block_diag(&f2, &[j2.clone(), j2]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn trace_of_commutator_vanishes(seed in any::<u64>(), n in 1usize..6, q in prop::sample::select(vec![2u32, 3, 4, 5, 9])) {
            let f = FieldCtx::of_order(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = MatrixF::random(&f, n, n, &mut rng);
            let b = MatrixF::random(&f, n, n, &mut rng);
            prop_assert_eq!(commutator(&a, &b).unwrap().trace(), Scalar::ZERO);
        }

        #[test]
        fn rank_nullity_and_kernel(seed in any::<u64>(), r in 1usize..7, c in 1usize..7, q in prop::sample::select(vec![2u32, 3, 4, 7])) {
            let f = FieldCtx::of_order(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // low-rank products exercise nontrivial kernels
            let k = rng.gen_range(1..=r.min(c));
            let a = &MatrixF::random(&f, r, k, &mut rng) * &MatrixF::random(&f, k, c, &mut rng);
            let (rank, kernel) = a.rank_kernel();
            prop_assert_eq!(rank + kernel.len(), c);
            for v in &kernel {
                prop_assert!(a.apply(v).iter().all(|s| s.is_zero()));
            }
            prop_assert_eq!(MatrixF::from_columns(&f, c, &kernel).rank(), kernel.len());
            let x = MatrixF::random(&f, c, 1, &mut rng).column(0);
            let b = a.apply(&x);
            let sol = a.solve(&b).unwrap();
            prop_assert_eq!(a.apply(&sol), b);
        }
    }
}
