use serde::{Deserialize, Serialize};

use super::matrix::{dot, vec_norm, Matrix, C64, ZERO};
use super::Tolerances;
use crate::error::{Error, Result};

/// Orthonormal columns in an ambient space, stored as an `ambient × dim`
/// matrix. A frame of dimension zero is allowed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Matrix", into = "Matrix")]
pub struct Frame {
    basis: Matrix,
}

impl From<Matrix> for Frame {
    fn from(basis: Matrix) -> Self {
        Frame { basis }
    }
}

impl From<Frame> for Matrix {
    fn from(f: Frame) -> Self {
        f.basis
    }
}

impl Frame {
    pub fn empty(ambient: usize) -> Self {
        Frame {
            basis: Matrix::zeros(ambient, 0),
        }
    }

    /// Wraps columns that the caller guarantees to be orthonormal.
    pub fn from_orthonormal(basis: Matrix) -> Self {
        Frame { basis }
    }

    /// Checks orthonormality within `tol.structure` before wrapping.
    pub fn try_new(basis: Matrix, tol: &Tolerances) -> Result<Self> {
        let f = Frame { basis };
        let dev = f.orthonormality_defect();
        if dev > tol.structure {
            return Err(Error::RankDeficient {
                index: 0,
                residual: dev,
            });
        }
        Ok(f)
    }

    /// Standard basis vectors `e_i` for the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        Frame {
            basis: Matrix::from_fn(ambient, indices.len(), |i, j| {
                if i == indices[j] {
                    C64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            }),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<C64>> {
        self.basis.columns()
    }

    pub fn projector(&self) -> Matrix {
        &self.basis * &self.basis.adjoint()
    }

    /// ‖FᴴF − Id‖_F.
    pub fn orthonormality_defect(&self) -> f64 {
        (&(&self.basis.adjoint() * &self.basis) - &Matrix::identity(self.dim())).frobenius_norm()
    }

    /// Largest |⟨v, w⟩| over v in `self`, w in `other`.
    pub fn max_overlap(&self, other: &Frame) -> f64 {
        (&self.basis.adjoint() * &other.basis).max_abs()
    }

    /// Concatenation of two frames' columns (not re-orthonormalized).
    pub fn concat(&self, other: &Frame) -> Frame {
        let mut cols = self.vectors();
        cols.extend(other.vectors());
        Frame {
            basis: Matrix::from_columns(self.ambient_dim(), &cols),
        }
    }

    /// Applies a linear map to every column.
    pub fn mapped(&self, map: &Matrix) -> Frame {
        Frame {
            basis: map * &self.basis,
        }
    }

    /// Distance between the spanned subspaces: ‖P − P′‖_F of the
    /// orthogonal projectors. At least 1 when the dimensions differ.
    pub fn subspace_distance(&self, other: &Frame) -> f64 {
        if self.ambient_dim() != other.ambient_dim() {
            return f64::INFINITY;
        }
        self.projector().distance(&other.projector())
    }

    /// Index of the first coordinate on which the subspace is supported.
    pub fn leading_coordinate(&self) -> usize {
        let p = self.projector();
        (0..self.ambient_dim())
            .find(|&i| p[(i, i)].re > 1e-8)
            .unwrap_or(usize::MAX)
    }

    /// A frame determined by the spanned subspace alone: Gram–Schmidt of the
    /// projector columns `P e_i` in index order. The leading coordinate of
    /// each vector is real and positive.
    pub fn canonical(&self) -> Frame {
        canonical_frame(&self.projector(), self.dim())
    }
}

/// Canonical orthonormal basis for the range of a rank-`dim` orthogonal projector.
pub fn canonical_frame(projector: &Matrix, dim: usize) -> Frame {
    let n = projector.rows();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    if dim > 0 {
        for i in 0..n {
            let mut r = projector.column(i);
            for _ in 0..2 {
                for c in &cols {
                    let h = dot(c, &r);
                    for (rk, ck) in r.iter_mut().zip(c) {
                        *rk -= h * ck;
                    }
                }
            }
            let nr = vec_norm(&r);
            if nr > 1e-4 {
                // Fix phase: coordinate i real positive.
                let phase = if r[i].norm() > 0.0 {
                    r[i].conj() / r[i].norm()
                } else {
                    C64::new(1.0, 0.0)
                };
                cols.push(r.iter().map(|z| z * phase / nr).collect());
                if cols.len() == dim {
                    break;
                }
            }
        }
    }
    Frame {
        basis: Matrix::from_columns(n, &cols),
    }
}

/// Modified Gram–Schmidt with a second re-orthogonalization pass.
pub fn orthonormalize(vectors: &[Vec<C64>], ambient: usize, tol: &Tolerances) -> Result<Frame> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != ambient {
            return Err(Error::ShapeMismatch(format!(
                "vector {index} has length {}, ambient dimension is {ambient}",
                v.len()
            )));
        }
        let input_norm = vec_norm(v);
        let mut r = v.clone();
        for _ in 0..2 {
            for c in &cols {
                let h = dot(c, &r);
                for (rk, ck) in r.iter_mut().zip(c) {
                    *rk -= h * ck;
                }
            }
        }
        let nr = vec_norm(&r);
        if input_norm == 0.0 || nr < tol.structure * input_norm {
            return Err(Error::RankDeficient {
                index,
                residual: if input_norm == 0.0 { 0.0 } else { nr / input_norm },
            });
        }
        cols.push(r.iter().map(|z| z / nr).collect());
    }
    Ok(Frame {
        basis: Matrix::from_columns(ambient, &cols),
    })
}
