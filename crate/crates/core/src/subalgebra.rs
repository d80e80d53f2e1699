//! Unital subalgebras `k[S]` generated by sets of matrices, and centralizers.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{commutator, linear_map_kernel, Echelon, MatrixF};

/// Linear basis of the unital subalgebra generated by `generators`.
#[derive(Clone, Debug)]
pub struct AlgebraSpan {
    pub basis: Vec<MatrixF>,
    pub generators: Vec<MatrixF>,
    /// Result of the closure audit: every `b * g` lies in the span.
    pub closed: bool,
}

impl AlgebraSpan {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, m: &MatrixF) -> bool {
        let Some(first) = self.basis.first() else {
            return false;
        };
        let mut ech = Echelon::new(first.field(), first.rows() * first.cols());
        for b in &self.basis {
            ech.insert(b.data());
        }
        ech.contains(m.data())
    }
}

fn check_square_family(field: &Field, n: usize, gens: &[MatrixF]) -> Result<()> {
    for g in gens {
        if !g.is_square() || g.rows() != n {
            return Err(Error::Shape(format!("generator {}x{} in a family of size {n}", g.rows(), g.cols())));
        }
        if **g.field() != **field {
            return Err(Error::FieldMismatch);
        }
    }
    Ok(())
}

/// Smallest unital subalgebra of `M_n` containing `gens`.
///
/// Starts from `I` and the generators and left-multiplies every new basis
/// element by each generator until no product enlarges the span. Every word
/// in the generators is reached this way since `g1 g2 ... gk = g1 (g2 (... gk I))`.
pub fn algebra_span(field: &Field, n: usize, gens: &[MatrixF]) -> Result<AlgebraSpan> {
    check_square_family(field, n, gens)?;
    let mut ech = Echelon::new(field, n * n);
    let mut basis = Vec::new();
    let mut frontier = Vec::new();
    for m in std::iter::once(MatrixF::identity(field, n)).chain(gens.iter().cloned()) {
        if ech.insert(m.data()) {
            basis.push(m.clone());
            frontier.push(m);
        }
    }
    while let Some(b) = frontier.pop() {
        for g in gens {
            let prod = g * &b;
            if ech.insert(prod.data()) {
                basis.push(prod.clone());
                frontier.push(prod);
            }
        }
    }
    let closed = basis.iter().all(|b| gens.iter().all(|g| ech.contains((b * g).data())));
    Ok(AlgebraSpan { basis, generators: gens.to_vec(), closed })
}

pub fn algebra_dim(field: &Field, n: usize, gens: &[MatrixF]) -> Result<usize> {
    let span = algebra_span(field, n, gens)?;
    if !span.closed {
        return Err(Error::Internal("subalgebra closure audit failed".into()));
    }
    Ok(span.dim())
}

/// Basis of `{X : [X, s] = 0 for all s in S}`.
pub fn centralizer_basis(field: &Field, n: usize, set: &[MatrixF]) -> Result<Vec<MatrixF>> {
    check_square_family(field, n, set)?;
    if set.is_empty() {
        return Ok((0..n * n).map(|k| MatrixF::unit(field, n, k / n, k % n)).collect());
    }
    let basis = linear_map_kernel(field, n, |x| {
        set.iter().map(|s| commutator(x, s).expect("shapes checked")).collect()
    });
    for x in &basis {
        for s in set {
            if !commutator(x, s)?.is_zero() {
                return Err(Error::Internal("centralizer element fails to commute".into()));
            }
        }
    }
    Ok(basis)
}

pub fn centralizer_dim(field: &Field, n: usize, set: &[MatrixF]) -> Result<usize> {
    Ok(centralizer_basis(field, n, set)?.len())
}

/// Span of `{w v : w a word in gens}`, the cyclic submodule generated by `v`.
pub fn cyclic_submodule_dim(field: &Field, gens: &[MatrixF], v: &[crate::Scalar]) -> usize {
    let n = v.len();
    let mut ech = Echelon::new(field, n);
    let mut frontier = Vec::new();
    if ech.insert(v) {
        frontier.push(v.to_vec());
    }
    while let Some(w) = frontier.pop() {
        for g in gens {
            let img = g.apply(&w);
            if ech.insert(&img) {
                frontier.push(img);
            }
        }
    }
    ech.dim()
}
