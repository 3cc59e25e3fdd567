//! Dense complex matrix kernel: arithmetic, orthonormalization, Hermitian
//! eigendecomposition and the tolerance policy shared by every module.

mod frame;
pub mod jacobi;
mod matrix;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use frame::{canonical_frame, orthonormalize, Frame};
pub use matrix::{commutator_defect, dot, vec_norm, Field, Matrix, C64, I, ONE, ZERO};

/// Numerical thresholds threaded explicitly through every operation.
/// All are relative to Frobenius norms unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Structure checks (unitarity, Hermitian-ness, orthogonality, commuting).
    pub structure: f64,
    /// Clustering of eigenvalues into joint eigenspaces.
    pub cluster: f64,
    /// Distance to 1 below which a unit scalar counts as the basepoint.
    pub base: f64,
    /// Cap on Jacobi sweeps.
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            structure: 1e-9,
            cluster: 1e-6,
            base: 1e-9,
            max_sweeps: 100,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.structure, self.cluster, self.base]
            .iter()
            .all(|&t| t > 0.0 && t.is_finite());
        if !positive || self.max_sweeps == 0 {
            return Err(Error::InvalidTolerances(
                "all tolerances must be strictly positive".into(),
            ));
        }
        if self.structure > self.cluster {
            return Err(Error::InvalidTolerances(format!(
                "structure tolerance {} exceeds cluster tolerance {}",
                self.structure, self.cluster
            )));
        }
        Ok(())
    }
}

/// Spectral decomposition `H = Q diag(λ) Qᴴ` of a Hermitian matrix by
/// cyclic Jacobi sweeps. Eigenvalues are returned in ascending order.
pub fn hermitian_eig(h: &Matrix, tol: &Tolerances) -> Result<(Matrix, Vec<f64>)> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix is not square",
            h.rows(),
            h.cols()
        )));
    }
    let deviation = h.hermitian_deviation();
    if deviation > tol.structure {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    let sym = &(h + &h.adjoint()).scale_real(0.5);
    let out = jacobi::joint_sweeps(std::slice::from_ref(sym), Matrix::identity(n), false, tol.max_sweeps);
    let norm = h.frobenius_norm();
    if out.off_norm > 1e-12 * norm.max(f64::MIN_POSITIVE) && out.off_norm > 0.0 {
        return Err(Error::NoConvergence {
            sweeps: out.sweeps,
            residual: out.off_norm,
        });
    }
    let diag: Vec<f64> = out.family[0].diag().iter().map(|z| z.re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let q = out.rotation.select_columns(&order);
    let lambda = order.iter().map(|&i| diag[i]).collect();
    Ok((q, lambda))
}
