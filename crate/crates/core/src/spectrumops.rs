//! Level maps of the spectrum `{ku_n}`: units `Sⁿ → ku_n`, multiplications
//! `ku_n ∧ ku_m → ku_{n+m}` and structure maps `ku_n ∧ Sᵐ → ku_{n+m}`, in
//! the configuration picture and, as an independent route, in the
//! commuting-tuple picture.

use crate::commodel::{f_subspace, CommutingTuple, TupleKind};
use crate::error::{Error, Result};
use crate::gammaconf::{Configuration, Label, SpherePoint};
use crate::numkit::{Matrix, Tolerances};
use crate::symuniverse::{j0, psi_embed, PsiEmbedding, UniverseBasis};

fn check_point(x: &SpherePoint, n: usize) -> Result<()> {
    match x.coordinates() {
        Some(c) if c.len() != n => Err(Error::ShapeMismatch(format!(
            "point with {} coordinates at level {n}",
            c.len()
        ))),
        _ => Ok(()),
    }
}

/// `x ↦ [ℂ·1, x]`.
pub fn unit_map(x: &SpherePoint, universe: &UniverseBasis, tol: &Tolerances) -> Result<Configuration> {
    check_point(x, universe.n())?;
    Configuration::new(universe.clone(), vec![Label::new(j0(universe), x.clone())]).canonicalize(tol)
}

/// Tuple picture of the unit: `xⱼ` on the line `ℂ·1`, the identity elsewhere.
pub fn unit_map_tuple(x: &SpherePoint, universe: &UniverseBasis) -> Result<CommutingTuple> {
    check_point(x, universe.n())?;
    let dim = universe.dim();
    let mats = match x.coordinates() {
        None => vec![Matrix::identity(dim); universe.n()],
        Some(c) => c
            .iter()
            .map(|&xj| {
                let mut m = Matrix::identity(dim);
                m[(0, 0)] = xj;
                m
            })
            .collect(),
    };
    CommutingTuple::new_unchecked(TupleKind::Unitary, dim, mats).on_universe(universe.clone())
}

/// `[(Vᵢ, xᵢ)] · [(Wⱼ, yⱼ)] = [(ψ(Vᵢ ⊗ Wⱼ), xᵢ ∧ yⱼ)]` in truncation degree
/// `D_a + D_b`.
pub fn multiply(a: &Configuration, b: &Configuration, tol: &Tolerances) -> Result<Configuration> {
    multiply_into(a, b, None, tol)
}

/// [`multiply`] with an explicit output truncation degree.
pub fn multiply_into(
    a: &Configuration,
    b: &Configuration,
    target_degree: Option<usize>,
    tol: &Tolerances,
) -> Result<Configuration> {
    let psi = psi_embed(&a.universe, &b.universe, target_degree);
    multiply_with(&psi, a, b, tol)
}

fn multiply_with(psi: &PsiEmbedding, a: &Configuration, b: &Configuration, tol: &Tolerances) -> Result<Configuration> {
    let mut labels = Vec::with_capacity(a.labels.len() * b.labels.len());
    for la in &a.labels {
        for lb in &b.labels {
            let point = la.point.smash(&lb.point);
            if point.is_basepoint() {
                continue;
            }
            labels.push(Label::new(psi.tensor_frame(&la.frame, &lb.frame, tol)?, point));
        }
    }
    Configuration::new(psi.target().clone(), labels).canonicalize(tol)
}

/// `σ_{n,m}(a ∧ y) = μ(a ∧ ι(y))` for `y ∈ Sᵐ`, landing in truncation
/// degree `2D`.
pub fn structure_map(a: &Configuration, y: &SpherePoint, m: usize, tol: &Tolerances) -> Result<Configuration> {
    let unit_universe = UniverseBasis::new(m, a.universe.degree());
    let unit = unit_map(y, &unit_universe, tol)?;
    multiply(a, &unit, tol)
}

/// Tuple picture of the multiplication:
/// `Cᵢ = ψ(Aᵢ|_F ⊗ Id_{F′})ψ⁻¹` for `i ≤ n`, `ψ(Id_F ⊗ Bⱼ|_{F′})ψ⁻¹` after,
/// each extended by the identity off `ψ(F ⊗ F′)`.
pub fn multiply_tuple(a: &CommutingTuple, b: &CommutingTuple, tol: &Tolerances) -> Result<CommutingTuple> {
    multiply_tuple_into(a, b, None, tol)
}

pub fn multiply_tuple_into(
    a: &CommutingTuple,
    b: &CommutingTuple,
    target_degree: Option<usize>,
    tol: &Tolerances,
) -> Result<CommutingTuple> {
    let ua = a.ambient().ok_or(Error::MissingAmbient)?;
    let ub = b.ambient().ok_or(Error::MissingAmbient)?;
    let psi = psi_embed(ua, ub, target_degree);
    let pa = f_subspace(a, tol)?.projector();
    let pb = f_subspace(b, tol)?.projector();
    let support = pa.kron(&pb);
    psi.check_support(&support, tol)?;

    let e = psi.matrix();
    let eh = e.adjoint();
    let target_dim = psi.target().dim();
    let outside = &Matrix::identity(target_dim) - &(&e * &eh);
    let off_support = &Matrix::identity(support.rows()) - &support;
    let lift = |m: Matrix| -> Matrix {
        let inner = &m + &off_support;
        &(&(&e * &inner) * &eh) + &outside
    };
    let mut mats = Vec::with_capacity(a.n() + b.n());
    for ai in a.mats() {
        mats.push(lift((&(&pa * ai) * &pa).kron(&pb)));
    }
    for bj in b.mats() {
        mats.push(lift(pa.kron(&(&(&pb * bj) * &pb))));
    }
    CommutingTuple::new_unchecked(TupleKind::Unitary, target_dim, mats).on_universe(psi.target().clone())
}

/// Tuple picture of the structure map: multiplication by the unit tuple of `y`.
pub fn structure_map_tuple(a: &CommutingTuple, y: &SpherePoint, m: usize, tol: &Tolerances) -> Result<CommutingTuple> {
    let ua = a.ambient().ok_or(Error::MissingAmbient)?;
    let unit = unit_map_tuple(y, &UniverseBasis::new(m, ua.degree()))?;
    multiply_tuple(a, &unit, tol)
}
