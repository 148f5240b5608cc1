//! Linear subspaces stored by their reduced echelon basis.
//!
//! The basis is canonical, so two subspaces are equal exactly when their
//! stored bases are equal.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: Field> Subspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix<T>) -> Self {
        let (mut r, pivots) = m.rref();
        let rank = pivots.len();
        if rank < r.rows() {
            let rows = r.row_vecs().into_iter().take(rank).collect();
            r = Matrix::from_rows(m.cols(), rows).expect("consistent width");
        }
        Subspace {
            ambient_dim: m.cols(),
            basis: r,
            pivots,
        }
    }

    /// Span of the given vectors.
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        let m = Matrix::from_rows(ambient_dim, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Reduced echelon basis, one vector per row.
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.basis.row_vecs()
    }

    fn check_ambient(&self, other: usize) -> Result<()> {
        if self.ambient_dim != other {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other,
            });
        }
        Ok(())
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v`
    /// lies in the subspace.
    pub fn reduce(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_ambient(v.len())?;
        let mut v = v.to_vec();
        for (row, &pc) in self.pivots.iter().enumerate() {
            if v[pc].is_zero() {
                continue;
            }
            let f = v[pc].clone();
            for (j, b) in self.basis.row(row).iter().enumerate().skip(pc) {
                if !b.is_zero() {
                    v[j] -= f.clone() * b.clone();
                }
            }
        }
        Ok(v)
    }

    pub fn contains(&self, v: &[T]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(T::is_zero))
    }

    pub fn contains_subspace(&self, other: &Subspace<T>) -> Result<bool> {
        self.check_ambient(other.ambient_dim)?;
        for v in other.basis_vectors() {
            if !self.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace<T>) -> Result<Subspace<T>> {
        self.check_ambient(other.ambient_dim)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// `U ∩ V` from the left kernel of the stacked bases: a relation
    /// `aU = bV` gives the common vector `aU`.
    pub fn intersection(&self, other: &Subspace<T>) -> Result<Subspace<T>> {
        self.check_ambient(other.ambient_dim)?;
        let du = self.dim();
        if du == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let stacked = self.basis.vstack(&other.basis)?;
        let relations = stacked.transpose().kernel_basis();
        let vectors = relations
            .basis_vectors()
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![T::zero(); self.ambient_dim];
                for (a, row) in coeffs[..du].iter().zip(0..du) {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in self.basis.row(row).iter().enumerate() {
                        v[j] += a.clone() * b.clone();
                    }
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.ambient_dim, vectors)
    }

    /// Image of the subspace under `m` (acting on column vectors).
    pub fn image_under(&self, m: &Matrix<T>) -> Result<Subspace<T>> {
        self.check_ambient(m.cols())?;
        let vectors = self
            .basis_vectors()
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Subspace::from_vectors(m.rows(), vectors)
    }
}
