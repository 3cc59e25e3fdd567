//! Commuting tuples of matrices, their simultaneous eigenspace
//! decomposition, and the homeomorphism between labeled configurations and
//! classes of commuting unitary tuples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gammaconf::{Configuration, Label, SpherePoint};
use crate::numkit::jacobi::joint_sweeps;
use crate::numkit::{commutator_defect, hermitian_eig, Frame, Matrix, Tolerances, C64, I, ONE};
use crate::sample::SplitMix64;
use crate::symuniverse::{sigma_star, Permutation, UniverseBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleKind {
    Unitary,
    SkewHermitian,
    RealSymmetric,
}

/// An n-tuple of pairwise commuting `s × s` matrices of one structural kind,
/// optionally living on a truncated universe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr", into = "TupleRepr")]
pub struct CommutingTuple {
    kind: TupleKind,
    s: usize,
    mats: Vec<Matrix>,
    ambient: Option<UniverseBasis>,
}

#[derive(Serialize, Deserialize)]
struct TupleRepr {
    n: usize,
    s: usize,
    kind: TupleKind,
    mats: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    universe: Option<UniverseBasis>,
}

impl TryFrom<TupleRepr> for CommutingTuple {
    type Error = Error;

    fn try_from(r: TupleRepr) -> Result<Self> {
        if r.mats.len() != r.n {
            return Err(Error::ShapeMismatch(format!(
                "n = {} but {} matrices given",
                r.n,
                r.mats.len()
            )));
        }
        check_shapes(r.s, &r.mats)?;
        let t = CommutingTuple {
            kind: r.kind,
            s: r.s,
            mats: r.mats,
            ambient: None,
        };
        match r.universe {
            Some(u) => t.on_universe(u),
            None => Ok(t),
        }
    }
}

impl From<CommutingTuple> for TupleRepr {
    fn from(t: CommutingTuple) -> Self {
        TupleRepr {
            n: t.mats.len(),
            s: t.s,
            kind: t.kind,
            mats: t.mats,
            universe: t.ambient,
        }
    }
}

fn check_shapes(s: usize, mats: &[Matrix]) -> Result<()> {
    for (i, m) in mats.iter().enumerate() {
        if m.rows() != s || m.cols() != s {
            return Err(Error::ShapeMismatch(format!(
                "matrix {i} is {}x{}, expected {s}x{s}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

impl CommutingTuple {
    /// Checks shapes, the structure equation of `kind` and commutativity.
    pub fn new(kind: TupleKind, s: usize, mats: Vec<Matrix>, tol: &Tolerances) -> Result<Self> {
        check_shapes(s, &mats)?;
        let t = CommutingTuple {
            kind,
            s,
            mats,
            ambient: None,
        };
        t.validate(tol)?;
        Ok(t)
    }

    /// Wraps matrices without any checks beyond what the caller promises.
    pub fn new_unchecked(kind: TupleKind, s: usize, mats: Vec<Matrix>) -> Self {
        CommutingTuple {
            kind,
            s,
            mats,
            ambient: None,
        }
    }

    /// The tuple `(Id, …, Id)`.
    pub fn identity(n: usize, s: usize) -> Self {
        Self::new_unchecked(TupleKind::Unitary, s, vec![Matrix::identity(s); n])
    }

    /// The tuple `(0, …, 0)`.
    pub fn zeros(kind: TupleKind, n: usize, s: usize) -> Self {
        Self::new_unchecked(kind, s, vec![Matrix::zeros(s, s); n])
    }

    /// Attaches a universe; its dimension must equal the matrix size.
    pub fn on_universe(mut self, universe: UniverseBasis) -> Result<Self> {
        if universe.dim() != self.s {
            return Err(Error::ShapeMismatch(format!(
                "universe of dimension {} for {}x{} matrices",
                universe.dim(),
                self.s,
                self.s
            )));
        }
        self.ambient = Some(universe);
        Ok(self)
    }

    pub(crate) fn with_ambient(mut self, universe: Option<UniverseBasis>) -> Self {
        self.ambient = universe.filter(|u| u.dim() == self.s);
        self
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        for m in &self.mats {
            match self.kind {
                TupleKind::Unitary => {
                    let deviation = m.unitary_deviation();
                    if deviation > tol.structure {
                        return Err(Error::NotUnitary { deviation });
                    }
                }
                TupleKind::SkewHermitian => {
                    let deviation = m.skew_hermitian_deviation();
                    if deviation > tol.structure {
                        return Err(Error::NotSkewHermitian { deviation });
                    }
                }
                TupleKind::RealSymmetric => {
                    let deviation = m.real_symmetric_deviation();
                    if deviation > tol.structure {
                        return Err(Error::NotSymmetric { deviation });
                    }
                }
            }
        }
        let defect = commutator_defect(&self.mats)?;
        if defect > tol.structure {
            return Err(Error::NotCommuting { defect });
        }
        Ok(())
    }

    pub fn kind(&self) -> TupleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn mat(&self, i: usize) -> &Matrix {
        &self.mats[i]
    }

    pub fn ambient(&self) -> Option<&UniverseBasis> {
        self.ambient.as_ref()
    }

    pub fn into_mats(self) -> Vec<Matrix> {
        self.mats
    }

    /// Applies `f` to every matrix, keeping kind and universe.
    pub fn map_mats(&self, f: impl Fn(&Matrix) -> Matrix) -> CommutingTuple {
        CommutingTuple {
            kind: self.kind,
            s: self.s,
            mats: self.mats.iter().map(f).collect(),
            ambient: self.ambient.clone(),
        }
    }

    /// `(U A₁ Uᴴ, …, U Aₙ Uᴴ)`.
    pub fn conjugate(&self, u: &Matrix) -> CommutingTuple {
        let ua = u.adjoint();
        self.map_mats(|m| &(u * m) * &ua)
    }

    /// Largest Frobenius norm in the tuple.
    pub fn max_norm(&self) -> f64 {
        self.mats.iter().map(Matrix::frobenius_norm).fold(0.0, f64::max)
    }

    /// `Σᵢ ‖Xᵢ‖²_F`.
    pub fn norm_sq(&self) -> f64 {
        self.mats.iter().map(|m| m.frobenius_norm().powi(2)).sum()
    }

    /// Largest componentwise Frobenius distance; infinite on shape mismatch.
    pub fn distance(&self, other: &CommutingTuple) -> f64 {
        if self.n() != other.n() || self.s != other.s {
            return f64::INFINITY;
        }
        self.mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    fn require_unitary(&self) -> Result<()> {
        if self.kind != TupleKind::Unitary {
            return Err(Error::ShapeMismatch(format!(
                "operation needs a unitary tuple, got {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    /// Hermitian family whose joint eigenvectors are those of the tuple.
    fn hermitian_components(&self) -> Vec<Matrix> {
        match self.kind {
            TupleKind::Unitary => self
                .mats
                .iter()
                .flat_map(|a| {
                    let ah = a.adjoint();
                    [(a + &ah).scale_real(0.5), (a - &ah).scale(-I * 0.5)]
                })
                .collect(),
            TupleKind::SkewHermitian => self.mats.iter().map(|x| x.scale(-I)).collect(),
            TupleKind::RealSymmetric => self.mats.clone(),
        }
    }
}

/// A simultaneous eigenspace with its eigenvalue tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenBlock {
    pub frame: Frame,
    pub values: Vec<C64>,
}

impl EigenBlock {
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }
}

#[derive(Clone, Debug)]
pub struct JointDiagonalization {
    /// Columns are the block frames, concatenated in block order.
    pub unitary: Matrix,
    pub blocks: Vec<EigenBlock>,
    /// Largest off-diagonal Frobenius norm of `QᴴAⱼQ` before clustering.
    pub residual: f64,
}

const FALLBACK_SEED: u64 = 0x5EED_0FD1_A6A6;

/// Simultaneous diagonalization by joint Jacobi sweeps, with a fallback
/// through a random real combination of the Hermitian components. Columns
/// are clustered into the coarsest eigenspace decomposition by single
/// linkage on the eigenvalue tuples (max-metric, `tol.cluster`). Blocks are
/// ordered by leading coordinate, then by eigenvalue tuple.
pub fn joint_diagonalize(t: &CommutingTuple, tol: &Tolerances) -> Result<JointDiagonalization> {
    t.validate(tol)?;
    let s = t.s;
    let family = t.hermitian_components();
    let real = t.kind == TupleKind::RealSymmetric;
    let scale = t.max_norm();
    let bound = 1e-8 * scale;

    let residual_of = |q: &Matrix| -> f64 {
        t.mats
            .iter()
            .map(|a| (&(&q.adjoint() * a) * q).offdiag_norm())
            .fold(0.0, f64::max)
    };
    let mut out = joint_sweeps(&family, Matrix::identity(s), real, tol.max_sweeps);
    let mut residual = residual_of(&out.rotation);
    if residual > bound && !family.is_empty() {
        let mut rng = SplitMix64::new(FALLBACK_SEED);
        let mut mix = Matrix::zeros(s, s);
        for h in &family {
            mix = &mix + &h.scale_real(rng.gaussian());
        }
        let (start, _) = hermitian_eig(&mix, tol)?;
        let retry = joint_sweeps(&family, start, real, tol.max_sweeps);
        let r = residual_of(&retry.rotation);
        if r < residual {
            out = retry;
            residual = r;
        }
    }
    if residual > bound {
        return Err(Error::NoConvergence {
            sweeps: out.sweeps,
            residual,
        });
    }

    let q = &out.rotation;
    let diag: Vec<Vec<C64>> = t.mats.iter().map(|a| (&(&q.adjoint() * a) * q).diag()).collect();
    let tuple_at = |col: usize| -> Vec<C64> { diag.iter().map(|d| d[col]).collect() };

    let clusters = cluster_columns(s, |a, b| {
        diag.iter()
            .map(|d| (d[a] - d[b]).norm())
            .fold(0.0, f64::max)
            < tol.cluster
    });
    let mut blocks: Vec<EigenBlock> = clusters
        .into_iter()
        .map(|cols| {
            let raw = Frame::from_orthonormal(q.select_columns(&cols));
            let mut values = vec![C64::new(0.0, 0.0); t.n()];
            for &c in &cols {
                for (v, x) in values.iter_mut().zip(tuple_at(c)) {
                    *v += x;
                }
            }
            let k = cols.len() as f64;
            for v in values.iter_mut() {
                *v /= k;
                if real {
                    v.im = 0.0;
                }
            }
            EigenBlock {
                frame: raw.canonical(),
                values,
            }
        })
        .collect();
    sort_blocks(&mut blocks);
    let cols: Vec<Vec<C64>> = blocks.iter().flat_map(|b| b.frame.vectors()).collect();
    Ok(JointDiagonalization {
        unitary: Matrix::from_columns(s, &cols),
        blocks,
        residual,
    })
}

/// Connected components of the "close" relation on `0..count`, each listed
/// in ascending order, components ordered by smallest member.
fn cluster_columns(count: usize, close: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut label: Vec<Option<usize>> = vec![None; count];
    let mut clusters = Vec::new();
    for start in 0..count {
        if label[start].is_some() {
            continue;
        }
        let id = clusters.len();
        let mut members = vec![start];
        label[start] = Some(id);
        let mut head = 0;
        while head < members.len() {
            let a = members[head];
            head += 1;
            for b in 0..count {
                if label[b].is_none() && close(a, b) {
                    label[b] = Some(id);
                    members.push(b);
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }
    clusters
}

pub(crate) fn lex_values(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn sort_blocks(blocks: &mut [EigenBlock]) {
    blocks.sort_by(|a, b| {
        a.frame
            .leading_coordinate()
            .cmp(&b.frame.leading_coordinate())
            .then_with(|| lex_values(&a.values, &b.values))
    });
}

fn touches_one(values: &[C64], tol: &Tolerances) -> bool {
    values.iter().any(|v| (v - ONE).norm() < tol.base)
}

/// Frame of `F(A₁,…,Aₙ)`: the eigenblocks whose value tuple has no entry
/// within `tol.base` of 1, concatenated in block order.
pub fn f_subspace(t: &CommutingTuple, tol: &Tolerances) -> Result<Frame> {
    t.require_unitary()?;
    let jd = joint_diagonalize(t, tol)?;
    Ok(f_frame(&jd, t.s, tol))
}

pub(crate) fn f_frame(jd: &JointDiagonalization, s: usize, tol: &Tolerances) -> Frame {
    let cols: Vec<Vec<C64>> = jd
        .blocks
        .iter()
        .filter(|b| !touches_one(&b.values, tol))
        .flat_map(|b| b.frame.vectors())
        .collect();
    Frame::from_orthonormal(Matrix::from_columns(s, &cols))
}

/// Representative of the class of `t`: each `Aᵢ` restricted to `F` and
/// extended by the identity on `F^⊥`.
pub fn canonical_rep(t: &CommutingTuple, tol: &Tolerances) -> Result<CommutingTuple> {
    let f = f_subspace(t, tol)?;
    Ok(extend_by_identity(t, &f.projector()))
}

/// `P A P + (Id − P)` componentwise.
pub(crate) fn extend_by_identity(t: &CommutingTuple, p: &Matrix) -> CommutingTuple {
    let rest = &Matrix::identity(t.s) - p;
    t.map_mats(|a| &(&(p * a) * p) + &rest)
}

/// Whether two unitary tuples define the same class.
pub fn equivalent(a: &CommutingTuple, b: &CommutingTuple, tol: &Tolerances) -> Result<bool> {
    let d = canonical_rep(a, tol)?.distance(&canonical_rep(b, tol)?);
    Ok(d <= tol.structure * (a.s as f64).sqrt().max(1.0))
}

/// `Aⱼ = Σᵢ x_{ij} P_{Vᵢ} + P_{(⊕Vᵢ)^⊥}`.
pub fn config_to_commuting(c: &Configuration) -> CommutingTuple {
    let dim = c.universe.dim();
    let n = c.universe.n();
    let mut mats = vec![Matrix::identity(dim); n];
    for label in &c.labels {
        let Some(x) = label.point.coordinates() else {
            continue;
        };
        let p = label.frame.projector();
        for (a, &xj) in mats.iter_mut().zip(x) {
            *a = &*a + &p.scale(xj - ONE);
        }
    }
    CommutingTuple {
        kind: TupleKind::Unitary,
        s: dim,
        mats,
        ambient: Some(c.universe.clone()),
    }
}

/// Inverse of [`config_to_commuting`] on classes: eigenblocks free of the
/// eigenvalue 1 become labels at their eigenvalue tuple.
pub fn commuting_to_config(t: &CommutingTuple, tol: &Tolerances) -> Result<Configuration> {
    t.require_unitary()?;
    let universe = t.ambient.clone().ok_or(Error::MissingAmbient)?;
    if universe.n() != t.n() {
        return Err(Error::ShapeMismatch(format!(
            "{}-tuple on a universe of level {}",
            t.n(),
            universe.n()
        )));
    }
    let jd = joint_diagonalize(t, tol)?;
    let labels = jd
        .blocks
        .into_iter()
        .filter(|b| !touches_one(&b.values, tol))
        .map(|b| {
            let coords = b.values.iter().map(|v| v / v.norm()).collect();
            Label::new(b.frame, SpherePoint::Coords(coords))
        })
        .collect();
    Configuration::new(universe, labels).canonicalize(tol)
}

/// `(σ·A)ⱼ = σ_* A_{σ⁻¹(j)} σ_*⁻¹`, the action matching the left action on
/// sphere coordinates.
pub fn sigma_action_tuple(sigma: &Permutation, t: &CommutingTuple) -> Result<CommutingTuple> {
    let universe = t.ambient.as_ref().ok_or(Error::MissingAmbient)?;
    if sigma.len() != t.n() || universe.n() != t.n() {
        return Err(Error::ShapeMismatch(format!(
            "permutation of {} letters on a {}-tuple over level {}",
            sigma.len(),
            t.n(),
            universe.n()
        )));
    }
    let p = sigma_star(sigma, universe);
    let pt = p.adjoint();
    let mats = sigma
        .act_on(&t.mats)
        .iter()
        .map(|a| &(&p * a) * &pt)
        .collect();
    Ok(CommutingTuple {
        kind: t.kind,
        s: t.s,
        mats,
        ambient: t.ambient.clone(),
    })
}
