//! Isotropy analysis of commuting tuples: decomposition types, fixed
//! subspace dimensions, unit-norm traceless tuples and the flag map
//! `U(p) ×_{Σ_p ≀ U(1)} S(𝔥ⁿ) → C¹ₙ(𝔰𝔲_p)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::commodel::{joint_diagonalize, CommutingTuple, TupleKind};
use crate::error::{Error, Result};
use crate::numkit::{dot, Field, Matrix, Tolerances, C64, I};

/// A partition `(n₁ ≥ … ≥ n_k)` of `s`: the dimensions of the simultaneous
/// eigenspaces, i.e. the isotropy `U(n₁)×⋯×U(n_k)` up to conjugacy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecompType {
    parts: Vec<usize>,
}

impl DecompType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        DecompType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of blocks `k`.
    pub fn blocks(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl fmt::Display for DecompType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `s`, each in descending order.
pub fn partitions(s: usize) -> Vec<DecompType> {
    fn go(rest: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<DecompType>) {
        if rest == 0 {
            out.push(DecompType { parts: acc.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            acc.push(p);
            go(rest - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if s > 0 {
        go(s, s, &mut Vec::new(), &mut out);
    }
    out
}

pub fn decomposition_type(t: &CommutingTuple, tol: &Tolerances) -> Result<DecompType> {
    if t.s() == 0 {
        return Err(Error::ShapeMismatch("decomposition type of a 0x0 tuple".into()));
    }
    let jd = joint_diagonalize(t, tol)?;
    Ok(DecompType::new(jd.blocks.iter().map(|b| b.dim()).collect()))
}

/// Complete subgroups are the proper block subgroups, `k > 1`.
pub fn is_complete_type(d: &DecompType) -> bool {
    d.blocks() > 1
}

/// Dimension of the space of traceless tuples fixed by the isotropy group
/// of type `d`: `n(k − 1)`, for either field.
pub fn fixed_subspace_dim(d: &DecompType, n: usize, _field: Field) -> usize {
    n * d.blocks().saturating_sub(1)
}

/// A traceless commuting tuple with `Σ‖Xᵢ‖² = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitTuple(CommutingTuple);

fn check_traceless(t: &CommutingTuple, tol: &Tolerances) -> Result<()> {
    if t.kind() == TupleKind::Unitary {
        return Err(Error::ShapeMismatch("unit tuples live in a Lie algebra".into()));
    }
    for m in t.mats() {
        let trace = m.trace().norm();
        if trace > tol.structure * m.frobenius_norm().max(1.0) {
            return Err(Error::NotTraceless { trace });
        }
    }
    Ok(())
}

impl UnitTuple {
    pub fn new(t: CommutingTuple, tol: &Tolerances) -> Result<Self> {
        check_traceless(&t, tol)?;
        let norm = t.norm_sq().sqrt();
        if (norm - 1.0).abs() > tol.structure {
            return Err(Error::ShapeMismatch(format!("tuple has norm {norm}, expected 1")));
        }
        Ok(UnitTuple(t))
    }

    pub fn tuple(&self) -> &CommutingTuple {
        &self.0
    }

    pub fn into_inner(self) -> CommutingTuple {
        self.0
    }
}

/// Scales a nonzero traceless tuple onto the unit sphere.
pub fn unit_normalize(t: &CommutingTuple, tol: &Tolerances) -> Result<UnitTuple> {
    check_traceless(t, tol)?;
    let norm = t.norm_sq().sqrt();
    if norm <= tol.structure {
        return Err(Error::ZeroTuple);
    }
    Ok(UnitTuple(t.map_mats(|m| m.scale_real(1.0 / norm))))
}

/// A point of the domain of the flag map, in canonical form: columns of
/// `frame` sorted by their eigenvalue tuples, each column phased so that
/// its first sizeable entry is real positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagClass {
    pub frame: Matrix,
    /// `diagonals[i][c]`: imaginary part of the `c`-th diagonal entry of `Xᵢ`.
    pub diagonals: Vec<Vec<f64>>,
}

impl FlagClass {
    /// Canonical representative of the class of `(g, X)` with diagonal
    /// entries `i·diagonals[i][c]`.
    pub fn canonical(g: &Matrix, diagonals: &[Vec<f64>], tol: &Tolerances) -> FlagClass {
        let p = g.cols();
        let key = |c: usize| -> Vec<f64> { diagonals.iter().map(|d| d[c]).collect() };
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| {
            for (x, y) in key(a).iter().zip(key(b)) {
                if (x - y).abs() >= tol.cluster {
                    return x.total_cmp(&y);
                }
            }
            Ordering::Equal
        });
        let threshold = 0.5 / (p.max(1) as f64).sqrt();
        let cols: Vec<Vec<C64>> = order
            .iter()
            .map(|&c| {
                let v = g.column(c);
                let pivot = v.iter().find(|z| z.norm() > threshold).copied().unwrap_or(C64::new(1.0, 0.0));
                let phase = pivot.conj() / pivot.norm();
                v.iter().map(|z| z * phase).collect()
            })
            .collect();
        FlagClass {
            frame: Matrix::from_columns(g.rows(), &cols),
            diagonals: diagonals.iter().map(|d| order.iter().map(|&c| d[c]).collect()).collect(),
        }
    }

    /// The diagonal tuple `(X₁, …, Xₙ)`.
    pub fn diagonal_tuple(&self) -> CommutingTuple {
        let p = self.frame.cols();
        let mats = self
            .diagonals
            .iter()
            .map(|d| Matrix::from_diag(&d.iter().map(|&v| I * v).collect::<Vec<_>>()))
            .collect();
        CommutingTuple::new_unchecked(TupleKind::SkewHermitian, p, mats)
    }

    /// Distance between canonical representatives, insensitive to column
    /// phases.
    pub fn distance(&self, other: &FlagClass) -> f64 {
        if self.frame.rows() != other.frame.rows()
            || self.frame.cols() != other.frame.cols()
            || self.diagonals.len() != other.diagonals.len()
        {
            return f64::INFINITY;
        }
        let diag = self
            .diagonals
            .iter()
            .zip(&other.diagonals)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        let cols = (0..self.frame.cols())
            .map(|c| {
                let (v, w) = (self.frame.column(c), other.frame.column(c));
                let h = dot(&w, &v);
                let phase = if h.norm() > 0.0 { h / h.norm() } else { C64::new(1.0, 0.0) };
                v.iter().zip(&w).map(|(a, b)| (a - b * phase).norm_sqr()).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max);
        diag.max(cols)
    }
}

/// `(g, X₁, …, Xₙ) ↦ (g X₁ gᴴ, …, g Xₙ gᴴ)` for traceless diagonal
/// skew-Hermitian `Xᵢ` of unit total norm.
pub fn flag_map(g: &Matrix, x: &CommutingTuple, tol: &Tolerances) -> Result<UnitTuple> {
    let deviation = g.unitary_deviation();
    if deviation > tol.structure {
        return Err(Error::NotUnitary { deviation });
    }
    if x.kind() != TupleKind::SkewHermitian || x.s() != g.rows() {
        return Err(Error::ShapeMismatch(format!(
            "flag map needs {}x{} skew-Hermitian diagonals",
            g.rows(),
            g.rows()
        )));
    }
    for m in x.mats() {
        if m.offdiag_norm() > tol.structure {
            return Err(Error::ShapeMismatch("flag map input is not diagonal".into()));
        }
        let deviation = m.skew_hermitian_deviation();
        if deviation > tol.structure {
            return Err(Error::NotSkewHermitian { deviation });
        }
    }
    UnitTuple::new(x.conjugate(g), tol)
}

/// The canonical preimage class of a unit tuple under the flag map. Fails
/// with `WrongStratum` when some eigenspace is not a line, since the
/// preimage is then not a single class.
pub fn flag_preimage(t: &UnitTuple, tol: &Tolerances) -> Result<FlagClass> {
    let tuple = t.tuple();
    if tuple.kind() != TupleKind::SkewHermitian {
        return Err(Error::ShapeMismatch("flag preimage of a non skew-Hermitian tuple".into()));
    }
    let jd = joint_diagonalize(tuple, tol)?;
    if let Some(b) = jd.blocks.iter().find(|b| b.dim() > 1) {
        return Err(Error::WrongStratum(format!(
            "eigenspace of dimension {}; preimage is not unique",
            b.dim()
        )));
    }
    let diagonals: Vec<Vec<f64>> = (0..tuple.n())
        .map(|i| jd.blocks.iter().map(|b| b.values[i].im).collect())
        .collect();
    Ok(FlagClass::canonical(&jd.unitary, &diagonals, tol))
}
