//! Real variant: commuting real symmetric tuples, their diagonalization by
//! special orthogonal matrices, the real Cayley transform onto symmetric
//! unitaries, and real stratum charts.

use serde::{Deserialize, Serialize};

use crate::commodel::{joint_diagonalize, CommutingTuple, JointDiagonalization, TupleKind};
use crate::error::{Error, Result};
use crate::numkit::{canonical_frame, Field, Frame, Matrix, Tolerances, C64, I};
use crate::rankstrata::{cayley_inv, cayley_raw, SubquotientChart};

/// `X ↦ (iX − Id)(iX + Id)⁻¹`, a unitary with `Aᵀ = A`.
pub fn real_cayley(x: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let deviation = x.real_symmetric_deviation();
    if deviation > tol.structure {
        return Err(Error::NotSymmetric { deviation });
    }
    Ok(cayley_raw(&x.scale(I)))
}

/// Joint diagonalization of a real symmetric tuple by `Q ∈ SO(s)`. When the
/// block frames assemble to an improper matrix, the last column of `Q` is
/// negated; the block frames themselves keep their canonical signs.
pub fn joint_diagonalize_real(t: &CommutingTuple, tol: &Tolerances) -> Result<JointDiagonalization> {
    if t.kind() != TupleKind::RealSymmetric {
        return Err(Error::ShapeMismatch(format!(
            "real diagonalization of a {:?} tuple",
            t.kind()
        )));
    }
    let mut jd = joint_diagonalize(t, tol)?;
    let s = t.s();
    let mut q = jd.unitary.real_part();
    if s > 0 && q.determinant().re < 0.0 {
        for r in 0..s {
            q[(r, s - 1)] = -q[(r, s - 1)];
        }
    }
    jd.unitary = q;
    Ok(jd)
}

/// `(X̄, τ)` with `Xᵢ = X̄ᵢ + τᵢ·Id`, `X̄ᵢ` traceless symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealSplit {
    pub traceless: CommutingTuple,
    pub tau: Vec<f64>,
}

impl RealSplit {
    pub fn reassemble(&self) -> CommutingTuple {
        let s = self.traceless.s();
        let mats = self
            .traceless
            .mats()
            .iter()
            .zip(&self.tau)
            .map(|(m, &t)| m + &Matrix::scalar(s, C64::new(t, 0.0)))
            .collect();
        CommutingTuple::new_unchecked(self.traceless.kind(), s, mats)
    }
}

pub fn real_trace_split(x: &CommutingTuple) -> RealSplit {
    let s = x.s();
    let tau: Vec<f64> = x
        .mats()
        .iter()
        .map(|m| if s == 0 { 0.0 } else { m.trace().re / s as f64 })
        .collect();
    let mats = x
        .mats()
        .iter()
        .zip(&tau)
        .map(|(m, &t)| m - &Matrix::scalar(s, C64::new(t, 0.0)))
        .collect();
    RealSplit {
        traceless: CommutingTuple::new_unchecked(x.kind(), s, mats),
        tau,
    }
}

/// Chart of a unitary tuple whose eigenspaces are complexifications of real
/// subspaces: a real frame `f` of `F` and a real symmetric tuple `X` with
/// `real_cayley(Xᵢ) = fᵀAᵢf`.
pub fn real_stratum_chart(t: &CommutingTuple, tol: &Tolerances) -> Result<SubquotientChart> {
    if t.kind() != TupleKind::Unitary {
        return Err(Error::ShapeMismatch("chart needs a unitary tuple".into()));
    }
    let jd = joint_diagonalize(t, tol)?;
    let s_total = t.s();
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for b in &jd.blocks {
        if b.values.iter().any(|v| (v - crate::numkit::ONE).norm() < tol.base) {
            continue;
        }
        let p = b.frame.projector();
        // a subspace is the complexification of a real one iff its
        // projector commutes with conjugation, i.e. is real
        let deviation = p.imag_norm();
        if deviation > tol.structure {
            return Err(Error::NotRealizable { deviation });
        }
        let real = canonical_frame(&p.real_part(), b.dim());
        cols.extend(real.matrix().real_part().columns());
    }
    let f = Frame::from_orthonormal(Matrix::from_columns(s_total, &cols));
    let fm = f.matrix();
    let ft = fm.adjoint();
    let mut xs = Vec::with_capacity(t.n());
    for a in t.mats() {
        let b = &(&ft * a) * fm;
        let y = cayley_inv(&b, tol).map_err(|e| match e {
            Error::SingularAtOne { gap } => {
                Error::WrongStratum(format!("Aᵢ − Id is singular on F (gap {gap:.3e})"))
            }
            other => other,
        })?;
        let x = y.scale(-I);
        let deviation = x.imag_norm() / x.frobenius_norm().max(1.0);
        if deviation > tol.cluster {
            return Err(Error::NotRealizable { deviation });
        }
        let r = x.real_part();
        xs.push((&r + &r.transpose()).scale_real(0.5));
    }
    let x = CommutingTuple::new_unchecked(TupleKind::RealSymmetric, f.dim(), xs);
    Ok(SubquotientChart {
        s: f.dim(),
        split: None,
        x,
        frame: f,
        field: Field::Real,
        universe: t.ambient().cloned(),
    })
}
