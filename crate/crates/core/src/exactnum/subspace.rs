//! Subspaces of coordinate spaces, given by a basis of column vectors.

use super::field::Field;
use super::matrix::{realify_vec, Matrix};
use super::scalar::{Rational, Scalar};
use super::ExactError;

#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Matrix<F>,
}

pub type QSubspace = Subspace<Rational>;
pub type CSubspace = Subspace<Scalar>;

impl<F: Field> Subspace<F> {
    /// Span of the columns of `m`. Dependent columns are dropped.
    pub fn span_of(m: &Matrix<F>) -> Self {
        Subspace { ambient: m.rows(), basis: m.column_space() }
    }

    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        Self::span_of(&Matrix::from_columns(ambient, vectors))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Span of the listed standard basis vectors.
    pub fn coordinate(ambient: usize, idx: &[usize]) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient).select_columns(idx) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        self.basis.columns()
    }

    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.ambient, "vector outside ambient space");
        let rhs = Matrix::from_columns(self.ambient, &[v.to_vec()]);
        self.basis.solve(&rhs).map(|x| x.column(0))
    }

    /// Coordinates of every column of `m`, or `None` if one lies outside.
    pub fn coordinates_of(&self, m: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(m.rows(), self.ambient, "matrix outside ambient space");
        self.basis.solve(m)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, w: &Self) -> bool {
        w.ambient == self.ambient && self.basis.solve(&w.basis).is_some()
    }

    pub fn sum(&self, o: &Self) -> Self {
        assert_eq!(self.ambient, o.ambient);
        Self::span_of(&self.basis.hstack(&o.basis))
    }

    pub fn intersection(&self, o: &Self) -> Self {
        assert_eq!(self.ambient, o.ambient);
        let stacked = self.basis.hstack(&o.basis.scale(&F::one().negate()));
        let k = stacked.kernel();
        let top: Vec<usize> = (0..self.dim()).collect();
        Self::span_of(&self.basis.mul(&k.select_rows(&top)))
    }

    /// Representatives of a complement of `w` inside `self`.
    pub fn quotient(&self, w: &Self) -> Result<Self, ExactError> {
        if !self.contains_subspace(w) {
            return Err(ExactError::NotASubspace);
        }
        let (_, pivots) = w.basis.hstack(&self.basis).rref();
        let extra: Vec<usize> =
            pivots.into_iter().filter(|&c| c >= w.dim()).map(|c| c - w.dim()).collect();
        Ok(Subspace { ambient: self.ambient, basis: self.basis.select_columns(&extra) })
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.dim() == o.dim() && self.contains_subspace(o)
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix<F>) -> Self {
        Self::span_of(&m.mul(&self.basis))
    }
}

pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    Subspace { ambient: m.cols(), basis: m.kernel() }
}

pub fn image<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    Subspace::span_of(m)
}

/// View a complex subspace of `C^m` as a rational subspace of `Q^{2m}`
/// with basis `{b_j, i·b_j}`.
pub fn restrict_scalars(v: &CSubspace) -> QSubspace {
    let i = Scalar::i();
    let mut cols = Vec::with_capacity(2 * v.dim());
    for b in v.basis_vectors() {
        cols.push(realify_vec(&b));
        let ib: Vec<Scalar> = b.iter().map(|z| z * &i).collect();
        cols.push(realify_vec(&ib));
    }
    Subspace { ambient: 2 * v.ambient(), basis: Matrix::from_columns(2 * v.ambient(), &cols) }
}
