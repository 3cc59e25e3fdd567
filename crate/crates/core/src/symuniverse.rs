//! Truncated symmetric algebra `Sym^{≤D}(ℂⁿ)` with the permanent inner
//! product `⟨e^α, e^β⟩ = δ_{αβ} α!`, written in the orthonormal basis
//! `e^α/√(α!)`. In these coordinates the canonical isometries ψ, σ_* and j₀
//! are partial permutation matrices.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{Frame, Matrix, Tolerances, C64, ONE, ZERO};

pub type MultiIndex = Vec<u32>;

/// Monomial basis of `Sym^{≤D}(ℂⁿ)` in graded order; within one degree,
/// exponent vectors are sorted lexicographically descending, so
/// `x₁ < x₂ < … ` and the constant monomial comes first.
#[derive(Clone, Serialize, Deserialize)]
#[serde(from = "UniverseSpec", into = "UniverseSpec")]
pub struct UniverseBasis {
    n: usize,
    degree: usize,
    monomials: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

#[derive(Serialize, Deserialize)]
struct UniverseSpec {
    n: usize,
    #[serde(rename = "D")]
    degree: usize,
}

impl From<UniverseSpec> for UniverseBasis {
    fn from(s: UniverseSpec) -> Self {
        UniverseBasis::new(s.n, s.degree)
    }
}

impl From<UniverseBasis> for UniverseSpec {
    fn from(u: UniverseBasis) -> Self {
        UniverseSpec {
            n: u.n,
            degree: u.degree,
        }
    }
}

impl PartialEq for UniverseBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.degree == other.degree
    }
}

impl Eq for UniverseBasis {}

impl fmt::Debug for UniverseBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym^<={}(C^{})", self.degree, self.n)
    }
}

fn compositions(total: u32, parts: usize, prefix: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

impl UniverseBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        let mut monomials = Vec::new();
        for d in 0..=degree as u32 {
            compositions(d, n, &mut Vec::with_capacity(n), &mut monomials);
            if n == 0 {
                break;
            }
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        UniverseBasis {
            n,
            degree,
            monomials,
            index,
        }
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation degree.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &MultiIndex {
        &self.monomials[i]
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    /// `α! = ∏ αᵢ!`, the squared norm of the unnormalized monomial `e^α`.
    pub fn norm_sq(&self, i: usize) -> u128 {
        multi_factorial(&self.monomials[i])
    }

    /// Index of the largest-degree monomial carrying weight above `cutoff` in `v`.
    pub fn max_degree_in(&self, v: &[C64], cutoff: f64) -> usize {
        v.iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > cutoff)
            .map(|(i, _)| total_degree(&self.monomials[i]))
            .max()
            .unwrap_or(0)
    }
}

pub fn total_degree(alpha: &[u32]) -> usize {
    alpha.iter().map(|&a| a as usize).sum()
}

pub fn multi_factorial(alpha: &[u32]) -> u128 {
    alpha
        .iter()
        .map(|&a| (1..=a as u128).product::<u128>())
        .product()
}

/// `dim Sym^{≤D}(ℂⁿ) = C(n + D, n)`.
pub fn universe_dim(n: usize, degree: usize) -> usize {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc * (degree as u128 + k) / k;
    }
    acc as usize
}

/// A permutation of `{0, …, n−1}` stored by images: `σ(i) = images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, limit: n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::ShapeMismatch(format!("{images:?} repeats {i}")));
            }
        }
        Ok(Permutation { images })
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Block sum `σ × τ` acting on `{0..n+m}`.
    pub fn block_sum(&self, other: &Permutation) -> Permutation {
        let n = self.len();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&j| j + n));
        Permutation { images }
    }

    /// Left action on coordinate lists: `(σ·x)_j = x_{σ⁻¹(j)}`.
    pub fn act_on<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let inv = self.inverse();
        (0..self.len()).map(|j| x[inv.apply(j)].clone()).collect()
    }

    /// All permutations of `n` letters in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation {
                images: cur.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// Index map of `σ_*`: monomial `i` goes to monomial `sigma_star_indices(σ, U)[i]`.
pub fn sigma_star_indices(sigma: &Permutation, universe: &UniverseBasis) -> Vec<usize> {
    assert_eq!(sigma.len(), universe.n(), "permutation size must match n");
    universe
        .monomials()
        .iter()
        .map(|alpha| {
            universe
                .index_of(&sigma.act_on(alpha))
                .expect("permuted multi-index has the same degree")
        })
        .collect()
}

/// `σ_*` as a permutation matrix on the orthonormal monomial basis:
/// `e^α ↦ e^{σ·α}` with `(σ·α)_j = α_{σ⁻¹(j)}`.
pub fn sigma_star(sigma: &Permutation, universe: &UniverseBasis) -> Matrix {
    let idx = sigma_star_indices(sigma, universe);
    let n = universe.dim();
    let mut m = Matrix::zeros(n, n);
    for (i, &j) in idx.iter().enumerate() {
        m[(j, i)] = ONE;
    }
    m
}

/// `j₀ : ℂ → Sym(ℂᵐ)`, the inclusion of the constants.
pub fn j0(universe: &UniverseBasis) -> Frame {
    Frame::coordinate(universe.dim(), &[0])
}

/// The isometry `ψ_{n,m}: Sym(ℂⁿ) ⊗ Sym(ℂᵐ) → Sym(ℂⁿ⁺ᵐ)` restricted to the
/// truncations, sending `e^α ⊗ e^β ↦ e^{(α,β)}`. Tensor coordinates are
/// ordered `a·dim(right) + b`.
#[derive(Clone, Debug)]
pub struct PsiEmbedding {
    left: UniverseBasis,
    right: UniverseBasis,
    target: UniverseBasis,
    map: Vec<Option<usize>>,
}

/// Builds ψ into `Sym^{≤target}(ℂⁿ⁺ᵐ)`; the default target degree is the
/// sum of the two source degrees, where ψ is defined on every pair.
pub fn psi_embed(
    left: &UniverseBasis,
    right: &UniverseBasis,
    target_degree: Option<usize>,
) -> PsiEmbedding {
    let degree = target_degree.unwrap_or(left.degree() + right.degree());
    let target = UniverseBasis::new(left.n() + right.n(), degree);
    let mut map = Vec::with_capacity(left.dim() * right.dim());
    for a in left.monomials() {
        for b in right.monomials() {
            let mut ab = a.clone();
            ab.extend_from_slice(b);
            map.push(target.index_of(&ab));
        }
    }
    PsiEmbedding {
        left: left.clone(),
        right: right.clone(),
        target,
        map,
    }
}

impl PsiEmbedding {
    pub fn target(&self) -> &UniverseBasis {
        &self.target
    }

    pub fn left(&self) -> &UniverseBasis {
        &self.left
    }

    pub fn right(&self) -> &UniverseBasis {
        &self.right
    }

    /// Image index of the tensor basis vector `(a, b)`; `None` on overflow.
    pub fn image(&self, a: usize, b: usize) -> Option<usize> {
        self.map[a * self.right.dim() + b]
    }

    fn overflow_error(&self, k: usize) -> Error {
        let a = k / self.right.dim();
        let b = k % self.right.dim();
        Error::TruncationOverflow {
            degree: total_degree(self.left.monomial(a)) + total_degree(self.right.monomial(b)),
            bound: self.target.degree(),
        }
    }

    /// Applies ψ to a tensor-coordinate vector, failing if it has weight
    /// (above `tol.structure`) on pairs outside the target truncation.
    pub fn apply(&self, v: &[C64], tol: &Tolerances) -> Result<Vec<C64>> {
        assert_eq!(v.len(), self.map.len());
        let mut out = vec![ZERO; self.target.dim()];
        for (k, &z) in v.iter().enumerate() {
            match self.map[k] {
                Some(t) => out[t] += z,
                None if z.norm() > tol.structure => return Err(self.overflow_error(k)),
                None => {}
            }
        }
        Ok(out)
    }

    /// `ψ(V ⊗ W)` for frames of the two factors; columns ordered `(i, j)`
    /// with `i` the slow index.
    pub fn tensor_frame(&self, f: &Frame, g: &Frame, tol: &Tolerances) -> Result<Frame> {
        let fv = f.vectors();
        let gv = g.vectors();
        let mut cols = Vec::with_capacity(fv.len() * gv.len());
        for u in &fv {
            for w in &gv {
                let t: Vec<C64> = u.iter().flat_map(|&x| w.iter().map(move |&y| x * y)).collect();
                cols.push(self.apply(&t, tol)?);
            }
        }
        Ok(Frame::from_orthonormal(Matrix::from_columns(
            self.target.dim(),
            &cols,
        )))
    }

    /// The partial isometry `E` (target × tensor) with `E e_{(a,b)} = e^{(α,β)}`;
    /// columns of overflowing pairs are zero.
    pub fn matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.dim(), self.map.len());
        for (k, t) in self.map.iter().enumerate() {
            if let Some(t) = t {
                m[(*t, k)] = ONE;
            }
        }
        m
    }

    /// Checks that a tensor-space operator supported on `support` (an
    /// orthogonal projector) fits into the target truncation.
    pub fn check_support(&self, support: &Matrix, tol: &Tolerances) -> Result<()> {
        for (k, t) in self.map.iter().enumerate() {
            if t.is_none() && support[(k, k)].re > tol.structure {
                return Err(self.overflow_error(k));
            }
        }
        Ok(())
    }
}
