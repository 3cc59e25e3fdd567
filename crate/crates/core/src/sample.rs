//! Seeded random model: a SplitMix64 stream, Haar-distributed unitary and
//! orthogonal matrices, and exactly commuting tuples built by conjugating
//! random diagonals.
//!
//! SplitMix64 step: `state += 0x9E3779B97F4A7C15`, then
//! `z = (z ^ (z >> 30)) · 0xBF58476D1CE4E5B9`,
//! `z = (z ^ (z >> 27)) · 0x94D049BB133111EB`, `z ^= z >> 31`.
//! Uniform doubles take the top 53 bits; Gaussians use Box–Muller.

use std::f64::consts::TAU;

use crate::commodel::{config_to_commuting, CommutingTuple, TupleKind};
use crate::gammaconf::{Configuration, Label, SpherePoint};
use crate::numkit::{orthonormalize, Frame, Matrix, Tolerances, C64, I};
use crate::symuniverse::UniverseBasis;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
    spare: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 {
            state: seed,
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        (self.uniform() * bound as f64) as usize % bound
    }

    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        self.spare = Some(r * (TAU * u2).sin());
        r * (TAU * u2).cos()
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_gaussian(&mut self) -> C64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.gaussian() * h, self.gaussian() * h)
    }

    /// Uniform point of the unit circle.
    pub fn unit_complex(&mut self) -> C64 {
        C64::from_polar(1.0, self.uniform_in(0.0, TAU))
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }
}

/// Independent seed for trial `index` of a run seeded by `seed`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    mix(seed ^ mix(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

fn gram_schmidt(rng: &mut SplitMix64, s: usize, real: bool) -> Matrix {
    let tol = Tolerances::default();
    loop {
        let cols: Vec<Vec<C64>> = (0..s)
            .map(|_| {
                (0..s)
                    .map(|_| {
                        if real {
                            C64::new(rng.gaussian(), 0.0)
                        } else {
                            rng.complex_gaussian()
                        }
                    })
                    .collect()
            })
            .collect();
        // Gram–Schmidt leaves R with a positive diagonal, so Q is Haar.
        if let Ok(f) = orthonormalize(&cols, s, &tol) {
            return f.matrix().clone();
        }
    }
}

/// Haar-distributed element of U(s).
pub fn haar_unitary(rng: &mut SplitMix64, s: usize) -> Matrix {
    gram_schmidt(rng, s, false)
}

/// Haar-distributed element of O(s), with real entries.
pub fn haar_orthogonal(rng: &mut SplitMix64, s: usize) -> Matrix {
    gram_schmidt(rng, s, true)
}

/// Gaussian skew-Hermitian matrix.
pub fn random_skew_hermitian(rng: &mut SplitMix64, s: usize) -> Matrix {
    let g = Matrix::from_fn(s, s, |_, _| rng.complex_gaussian());
    (&g - &g.adjoint()).scale_real(0.5)
}

/// Gaussian real symmetric matrix.
pub fn random_symmetric(rng: &mut SplitMix64, s: usize) -> Matrix {
    let g = Matrix::from_fn(s, s, |_, _| C64::new(rng.gaussian(), 0.0));
    (&g + &g.transpose()).scale_real(0.5)
}

fn random_eigenvalue(rng: &mut SplitMix64, kind: TupleKind) -> C64 {
    match kind {
        TupleKind::Unitary => rng.unit_complex(),
        TupleKind::SkewHermitian => I * rng.gaussian(),
        TupleKind::RealSymmetric => C64::new(rng.gaussian(), 0.0),
    }
}

/// Commuting tuple `(Q D₁ Qᴴ, …, Q Dₙ Qᴴ)` with random diagonals and Haar `Q`
/// (orthogonal for the real symmetric kind). Deterministic in `seed`.
pub fn gen_random_commuting(seed: u64, n: usize, s: usize, kind: TupleKind) -> CommutingTuple {
    let mut rng = SplitMix64::new(seed);
    let diagonals: Vec<Vec<C64>> = (0..n)
        .map(|_| (0..s).map(|_| random_eigenvalue(&mut rng, kind)).collect())
        .collect();
    tuple_from_spectrum(&mut rng, kind, &diagonals)
}

/// Conjugates the diagonal tuple given by `diagonals[j][col]` by a Haar
/// unitary (orthogonal for the real symmetric kind).
pub fn tuple_from_spectrum(rng: &mut SplitMix64, kind: TupleKind, diagonals: &[Vec<C64>]) -> CommutingTuple {
    let s = diagonals.first().map_or(0, Vec::len);
    let q = if kind == TupleKind::RealSymmetric {
        haar_orthogonal(rng, s)
    } else {
        haar_unitary(rng, s)
    };
    let mats = diagonals.iter().map(|d| Matrix::from_diag(d)).collect();
    let t = CommutingTuple::new_unchecked(kind, s, mats).conjugate(&q);
    if kind == TupleKind::RealSymmetric {
        t.map_mats(|m| {
            let r = m.real_part();
            (&r + &r.transpose()).scale_real(0.5)
        })
    } else {
        t
    }
}

/// Traceless tuple whose simultaneous eigenspaces have the prescribed
/// dimensions `parts`: each block carries a distinct random value tuple.
pub fn tuple_with_partition(rng: &mut SplitMix64, kind: TupleKind, n: usize, parts: &[usize]) -> CommutingTuple {
    let s: usize = parts.iter().sum();
    let diagonals: Vec<Vec<C64>> = (0..n)
        .map(|_| {
            let mut d = Vec::with_capacity(s);
            for &p in parts {
                let v = random_eigenvalue(rng, kind);
                d.extend(std::iter::repeat_n(v, p));
            }
            let mean = d.iter().sum::<C64>() / s as f64;
            d.iter().map(|v| v - mean).collect()
        })
        .collect();
    if n == 0 {
        return CommutingTuple::zeros(kind, 0, s);
    }
    tuple_from_spectrum(rng, kind, &diagonals)
}

/// Random point of `Sⁿ` with every coordinate at arc distance at least
/// `margin` from 1.
pub fn random_sphere_point(rng: &mut SplitMix64, n: usize, margin: f64) -> SpherePoint {
    SpherePoint::Coords(
        (0..n)
            .map(|_| C64::from_polar(1.0, rng.uniform_in(margin, TAU - margin)))
            .collect(),
    )
}

/// Random composition of `total` into `labels` positive parts.
fn random_composition(rng: &mut SplitMix64, total: usize, labels: usize) -> Vec<usize> {
    let mut parts = vec![1; labels];
    for _ in labels..total {
        let k = rng.below(labels);
        parts[k] += 1;
    }
    parts
}

/// Random canonical configuration of the given rank over `universe`:
/// Haar-random mutually orthogonal frames at well-separated points away
/// from the basepoint. Rank 0 gives the empty configuration.
pub fn random_configuration(rng: &mut SplitMix64, universe: &UniverseBasis, rank: usize) -> Configuration {
    configuration_with_frames(rng, universe, rank, false)
}

/// As [`random_configuration`], with real frames: the image of the real
/// configuration model under complexification.
pub fn random_real_configuration(rng: &mut SplitMix64, universe: &UniverseBasis, rank: usize) -> Configuration {
    configuration_with_frames(rng, universe, rank, true)
}

fn configuration_with_frames(rng: &mut SplitMix64, universe: &UniverseBasis, rank: usize, real: bool) -> Configuration {
    let dim = universe.dim();
    let rank = rank.min(dim);
    if rank == 0 {
        return Configuration::empty(universe.clone());
    }
    let labels = 1 + rng.below(rank);
    let parts = random_composition(rng, rank, labels);
    let q = gram_schmidt(rng, dim, real);
    let mut points: Vec<SpherePoint> = Vec::with_capacity(labels);
    while points.len() < labels {
        let p = random_sphere_point(rng, universe.n(), 0.2);
        if points.iter().all(|x| x.distance(&p) > 0.1) {
            points.push(p);
        }
    }
    let mut start = 0;
    let labels = parts
        .iter()
        .zip(points)
        .map(|(&k, x)| {
            let cols: Vec<usize> = (start..start + k).collect();
            start += k;
            Label::new(Frame::from_orthonormal(q.select_columns(&cols)), x)
        })
        .collect();
    Configuration::new(universe.clone(), labels)
        .canonicalize(&Tolerances::default())
        .expect("random labels are orthonormal and separated")
}

/// Unitary tuple on `universe` with stratum rank exactly `rank`. Its
/// eigenspaces are Haar-random, so it is not block diagonal in the monomial
/// basis.
pub fn random_tuple_of_rank(rng: &mut SplitMix64, universe: &UniverseBasis, rank: usize) -> CommutingTuple {
    let c = random_configuration(rng, universe, rank);
    config_to_commuting(&c)
}
