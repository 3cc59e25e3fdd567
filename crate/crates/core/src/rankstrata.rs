//! Rank filtration and the chart of its open strata: a class of rank
//! exactly `s` is recorded by a commuting skew-Hermitian `s`-tuple (via the
//! Cayley transform) together with a frame of its `F`-subspace.

use serde::{Deserialize, Serialize};

use crate::commodel::{f_frame, joint_diagonalize, CommutingTuple, TupleKind};
use crate::error::{Error, Result};
use crate::numkit::jacobi::joint_sweeps;
use crate::numkit::{Field, Frame, Matrix, Tolerances, I, ONE};
use crate::symuniverse::{Permutation, PsiEmbedding, UniverseBasis};

/// `(X − Id)(X + Id)⁻¹`; skew-Hermitian input is not checked.
pub(crate) fn cayley_raw(x: &Matrix) -> Matrix {
    let id = Matrix::identity(x.rows());
    (x + &id)
        .solve(&(x - &id))
        .expect("X + Id is invertible for skew-Hermitian X")
}

/// Cayley transform of a skew-Hermitian matrix: a unitary without
/// eigenvalue 1.
pub fn cayley(x: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let deviation = x.skew_hermitian_deviation();
    if deviation > tol.structure {
        return Err(Error::NotSkewHermitian { deviation });
    }
    Ok(cayley_raw(x))
}

/// Smallest `|λ − 1|` over the eigenvalues of a unitary matrix.
pub fn gap_to_one(a: &Matrix, tol: &Tolerances) -> f64 {
    let ah = a.adjoint();
    let family = [(a + &ah).scale_real(0.5), (a - &ah).scale(-I * 0.5)];
    let out = joint_sweeps(&family, Matrix::identity(a.rows()), false, tol.max_sweeps);
    let q = out.rotation;
    (&(&q.adjoint() * a) * &q)
        .diag()
        .iter()
        .map(|l| (l - ONE).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Inverse Cayley transform `(Id − A)⁻¹(Id + A)`.
pub fn cayley_inv(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let deviation = a.unitary_deviation();
    if deviation > tol.structure {
        return Err(Error::NotUnitary { deviation });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let gap = gap_to_one(a, tol);
    if gap <= tol.structure {
        return Err(Error::SingularAtOne { gap });
    }
    let id = Matrix::identity(n);
    let x = (&id - a)
        .solve(&(&id + a))
        .ok_or(Error::SingularAtOne { gap })?;
    Ok((&x - &x.adjoint()).scale_real(0.5))
}

/// `dim F(A₁,…,Aₙ)`: the filtration level of the class.
pub fn stratum_rank(t: &CommutingTuple, tol: &Tolerances) -> Result<usize> {
    Ok(crate::commodel::f_subspace(t, tol)?.dim())
}

/// `(X̄, τ)` with `Xᵢ = X̄ᵢ + i·τᵢ·Id` and `X̄ᵢ` traceless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSplit {
    pub traceless: CommutingTuple,
    /// Imaginary parts of `tr(Xᵢ)/s`.
    pub tau: Vec<f64>,
}

impl TraceSplit {
    pub fn reassemble(&self) -> CommutingTuple {
        let s = self.traceless.s();
        let mats = self
            .traceless
            .mats()
            .iter()
            .zip(&self.tau)
            .map(|(m, &t)| m + &Matrix::scalar(s, I * t))
            .collect();
        CommutingTuple::new_unchecked(self.traceless.kind(), s, mats)
    }
}

/// Splits a skew-Hermitian tuple into its traceless part and scalar part.
pub fn trace_split(x: &CommutingTuple) -> TraceSplit {
    let s = x.s();
    let tau: Vec<f64> = x
        .mats()
        .iter()
        .map(|m| if s == 0 { 0.0 } else { m.trace().im / s as f64 })
        .collect();
    let mats = x
        .mats()
        .iter()
        .zip(&tau)
        .map(|(m, &t)| m - &Matrix::scalar(s, I * t))
        .collect();
    TraceSplit {
        traceless: CommutingTuple::new_unchecked(x.kind(), s, mats),
        tau,
    }
}

/// The chart `[(A₁,…,Aₙ)] ↦ [(X₁,…,Xₙ), f]` of the open stratum of rank `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubquotientChart {
    pub s: usize,
    /// Skew-Hermitian tuple (complex field) or real symmetric tuple (real field).
    pub x: CommutingTuple,
    /// Isometric embedding of `ℂˢ` onto `F`.
    pub frame: Frame,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<TraceSplit>,
    #[serde(default)]
    pub field: Field,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<UniverseBasis>,
}

impl SubquotientChart {
    /// The unitaries `Bᵢ` on `ℂˢ`: `cayley(Xᵢ)`, or `cayley(iXᵢ)` for the
    /// real field.
    pub fn unitaries(&self) -> Vec<Matrix> {
        self.x
            .mats()
            .iter()
            .map(|m| match self.field {
                Field::Complex => cayley_raw(m),
                Field::Real => cayley_raw(&m.scale(I)),
            })
            .collect()
    }

    /// `f Bᵢ fᴴ + (Id − f fᴴ)`: the canonical representative of the class.
    pub fn reconstruct(&self) -> CommutingTuple {
        let f = self.frame.matrix();
        let dim = self.frame.ambient_dim();
        let rest = &Matrix::identity(dim) - &self.frame.projector();
        let mats = self
            .unitaries()
            .iter()
            .map(|b| &(&(f * b) * &f.adjoint()) + &rest)
            .collect();
        CommutingTuple::new_unchecked(TupleKind::Unitary, dim, mats).with_ambient(self.universe.clone())
    }

    /// Complex chart of the complexification: `(iXᵢ)` with the same frame.
    pub fn complexified(&self) -> SubquotientChart {
        match self.field {
            Field::Complex => self.clone(),
            Field::Real => {
                let x = self.x.map_mats(|m| m.scale(I));
                let x = CommutingTuple::new_unchecked(TupleKind::SkewHermitian, self.s, x.into_mats());
                SubquotientChart {
                    s: self.s,
                    split: Some(trace_split(&x)),
                    x,
                    frame: self.frame.clone(),
                    field: Field::Complex,
                    universe: self.universe.clone(),
                }
            }
        }
    }

    /// How far `other` is from `self` transported along `g = fᴴf′`:
    /// `max(‖g‖ unitarity defect, maxᵢ ‖X′ᵢ − gᴴXᵢg‖_F)`. Charts of the same
    /// class agree up to this conjugation.
    pub fn conjugation_defect(&self, other: &SubquotientChart) -> f64 {
        if self.s != other.s || self.x.n() != other.x.n() || self.field != other.field {
            return f64::INFINITY;
        }
        let g = &self.frame.matrix().adjoint() * other.frame.matrix();
        let gh = g.adjoint();
        let moved = self
            .x
            .mats()
            .iter()
            .zip(other.x.mats())
            .map(|(x, y)| y.distance(&(&(&gh * x) * &g)))
            .fold(0.0, f64::max);
        moved.max(g.unitary_deviation())
    }
}

fn chart_from_frame(t: &CommutingTuple, f: Frame, tol: &Tolerances) -> Result<SubquotientChart> {
    let fm = f.matrix();
    let fh = fm.adjoint();
    let mut xs = Vec::with_capacity(t.n());
    for a in t.mats() {
        let b = &(&fh * a) * fm;
        let x = cayley_inv(&b, tol).map_err(|e| match e {
            Error::SingularAtOne { gap } => {
                Error::WrongStratum(format!("Aᵢ − Id is singular on F (gap {gap:.3e})"))
            }
            other => other,
        })?;
        xs.push(x);
    }
    let x = CommutingTuple::new_unchecked(TupleKind::SkewHermitian, f.dim(), xs);
    Ok(SubquotientChart {
        s: f.dim(),
        split: Some(trace_split(&x)),
        x,
        frame: f,
        field: Field::Complex,
        universe: t.ambient().cloned(),
    })
}

/// Chart of a unitary tuple on its own stratum, with the deterministic
/// frame made of the canonical eigenblock frames of `F`.
pub fn subquotient_chart(t: &CommutingTuple, tol: &Tolerances) -> Result<SubquotientChart> {
    if t.kind() != TupleKind::Unitary {
        return Err(Error::ShapeMismatch("chart needs a unitary tuple".into()));
    }
    let jd = joint_diagonalize(t, tol)?;
    let f = f_frame(&jd, t.s(), tol);
    chart_from_frame(t, f, tol)
}

/// As [`subquotient_chart`], rejecting tuples outside the stratum of rank `s`.
pub fn subquotient_chart_at(t: &CommutingTuple, s: usize, tol: &Tolerances) -> Result<SubquotientChart> {
    let chart = subquotient_chart(t, tol)?;
    if chart.s != s {
        return Err(Error::WrongStratum(format!(
            "tuple has rank {}, expected {s}",
            chart.s
        )));
    }
    Ok(chart)
}

/// Chart computed with a caller-supplied orthonormal frame of `F`.
pub fn chart_with_frame(t: &CommutingTuple, f: &Frame, tol: &Tolerances) -> Result<SubquotientChart> {
    let own = crate::commodel::f_subspace(t, tol)?;
    let d = own.subspace_distance(f);
    if own.dim() != f.dim() || d > tol.cluster {
        return Err(Error::WrongStratum(format!(
            "frame does not span F (distance {d:.3e})"
        )));
    }
    chart_from_frame(t, f.clone(), tol)
}

/// `(X₁,…,Xₙ) ↦ (X₁,…,Xₙ,0,…,0)` with `m` zeros appended.
pub fn stabilize(x: &CommutingTuple, m: usize) -> Result<CommutingTuple> {
    if x.kind() == TupleKind::Unitary {
        return Err(Error::ShapeMismatch("stabilization acts on Lie algebra tuples".into()));
    }
    let mut mats = x.mats().to_vec();
    mats.extend(std::iter::repeat_n(Matrix::zeros(x.s(), x.s()), m));
    Ok(CommutingTuple::new_unchecked(x.kind(), x.s(), mats))
}

/// `(X₁⊗Id_t, …, Xₙ⊗Id_t, Id_s⊗Y₁, …, Id_s⊗Yₘ)`.
pub fn pairing_chart(x: &CommutingTuple, y: &CommutingTuple) -> Result<CommutingTuple> {
    if x.kind() != y.kind() || x.kind() == TupleKind::Unitary {
        return Err(Error::ShapeMismatch(format!(
            "cannot pair {:?} with {:?}",
            x.kind(),
            y.kind()
        )));
    }
    let (s, t) = (x.s(), y.s());
    let (is, it) = (Matrix::identity(s), Matrix::identity(t));
    let mats = x
        .mats()
        .iter()
        .map(|m| m.kron(&it))
        .chain(y.mats().iter().map(|m| is.kron(m)))
        .collect();
    Ok(CommutingTuple::new_unchecked(x.kind(), s * t, mats))
}

/// Pairs two charts: Kronecker pairing of the tuples, frame `ψ(f ⊗ g)`.
pub fn pair_charts(
    a: &SubquotientChart,
    b: &SubquotientChart,
    psi: &PsiEmbedding,
    tol: &Tolerances,
) -> Result<SubquotientChart> {
    if a.field != b.field {
        return Err(Error::ShapeMismatch("charts over different fields".into()));
    }
    let x = pairing_chart(&a.x, &b.x)?;
    let frame = psi.tensor_frame(&a.frame, &b.frame, tol)?;
    Ok(SubquotientChart {
        s: x.s(),
        split: Some(trace_split(&x)),
        x,
        frame,
        field: a.field,
        universe: Some(psi.target().clone()),
    })
}

/// Chart of `σ·T` predicted from the chart of `T`: the frame is moved by
/// `σ_*` and the tuple entries are permuted.
pub fn sigma_action_chart(sigma: &Permutation, chart: &SubquotientChart) -> Result<SubquotientChart> {
    let universe = chart.universe.as_ref().ok_or(Error::MissingAmbient)?;
    if sigma.len() != chart.x.n() {
        return Err(Error::ShapeMismatch(format!(
            "permutation of {} letters on a {}-tuple",
            sigma.len(),
            chart.x.n()
        )));
    }
    let p = crate::symuniverse::sigma_star(sigma, universe);
    let x = CommutingTuple::new_unchecked(chart.x.kind(), chart.s, sigma.act_on(chart.x.mats()));
    Ok(SubquotientChart {
        s: chart.s,
        split: Some(trace_split(&x)),
        x,
        frame: chart.frame.mapped(&p),
        field: chart.field,
        universe: chart.universe.clone(),
    })
}
