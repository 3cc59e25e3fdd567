//! Cyclic Jacobi sweeps for a family of Hermitian matrices.
//!
//! Each 2×2 pivot block of every matrix is written in Pauli coordinates,
//! `M = m₀·Id + v·σ` with `v = ((a − d)/2, Re b, −Im b)`. A unitary
//! conjugation of the block rotates every `v` by the same element of SO(3),
//! and the off-diagonal energy of the block is `2Σ(|v|² − v_z²)`. The
//! optimal rotation therefore sends the top eigenvector `u` of
//! `G = Σ v vᵀ` to the z-axis. For a single matrix this is the classical
//! Jacobi rotation.

use super::matrix::{Matrix, C64, ZERO};

/// Outcome of a joint sweep run.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Accumulated unitary; `vᴴ Hₖ v` is (nearly) diagonal for all k.
    pub rotation: Matrix,
    /// The conjugated family.
    pub family: Vec<Matrix>,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm of the conjugated family, summed in quadrature.
    pub off_norm: f64,
}

fn family_off_norm(family: &[Matrix]) -> f64 {
    family
        .iter()
        .map(|m| m.offdiag_norm().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Runs cyclic joint Jacobi sweeps starting from `start` (a unitary whose
/// columns are the initial basis). With `real` set, only real rotations are
/// used, so real symmetric input yields a real orthogonal accumulation.
pub fn joint_sweeps(
    family: &[Matrix],
    start: Matrix,
    real: bool,
    max_sweeps: usize,
) -> SweepOutcome {
    let n = start.cols();
    let mut rotation = start;
    let mut family: Vec<Matrix> = family
        .iter()
        .map(|h| &(&rotation.adjoint() * h) * &rotation)
        .collect();
    let scale = family
        .iter()
        .map(|m| m.frobenius_norm())
        .fold(0.0, f64::max);
    let mut sweeps = 0;
    if scale == 0.0 || n < 2 {
        let off_norm = family_off_norm(&family);
        return SweepOutcome {
            rotation,
            family,
            sweeps,
            off_norm,
        };
    }
    let negligible = (f64::EPSILON * scale * 1e-2).powi(2);

    while sweeps < max_sweeps {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let pair_off: f64 = family.iter().map(|m| m[(p, q)].norm_sqr()).sum();
                if pair_off <= negligible {
                    continue;
                }
                let Some((c, s)) = pair_rotation(&family, p, q, real) else {
                    continue;
                };
                if s.norm() < 1e-300 {
                    continue;
                }
                rotated |= s.norm() > 1e-15;
                for m in family.iter_mut() {
                    apply_rotation(m, p, q, c, s);
                }
                rotate_columns(&mut rotation, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
        if family_off_norm(&family) <= f64::EPSILON * scale * 1e-1 {
            break;
        }
    }
    let off_norm = family_off_norm(&family);
    SweepOutcome {
        rotation,
        family,
        sweeps,
        off_norm,
    }
}

/// Rotation `U = [[c, −s̄], [s, c]]` minimizing the joint off-diagonal
/// energy on the (p, q) block. Returns `None` when no rotation helps.
fn pair_rotation(family: &[Matrix], p: usize, q: usize, real: bool) -> Option<(f64, C64)> {
    let mut g = [[0.0f64; 3]; 3];
    let mut single = [0.0f64; 3];
    for m in family {
        let b = m[(p, q)];
        let v = [
            0.5 * (m[(p, p)].re - m[(q, q)].re),
            b.re,
            if real { 0.0 } else { -b.im },
        ];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] += v[i] * v[j];
            }
        }
        single = v;
    }
    let mut u = if family.len() == 1 {
        single
    } else {
        top_eigenvector3(&g)
    };
    // Pauli ordering is (z-like, x, y) = (diff, Re, -Im): relabel.
    let (uz, ux, uy) = (u[0], u[1], u[2]);
    let norm = (uz * uz + ux * ux + uy * uy).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    u = [uz / norm, ux / norm, uy / norm];
    if u[0] < 0.0 {
        u = [-u[0], -u[1], -u[2]];
    }
    let (uz, ux, uy) = (u[0], u[1], u[2]);
    let c = (0.5 * (1.0 + uz)).sqrt();
    let denom = (2.0 * (1.0 + uz)).sqrt();
    let s = C64::new(ux / denom, if real { 0.0 } else { uy / denom });
    Some((c, s))
}

/// M ← Uᴴ M U on rows/columns p and q.
fn apply_rotation(m: &mut Matrix, p: usize, q: usize, c: f64, s: C64) {
    let n = m.rows();
    // columns: M U
    for r in 0..n {
        let mp = m[(r, p)];
        let mq = m[(r, q)];
        m[(r, p)] = mp * c + mq * s;
        m[(r, q)] = -mp * s.conj() + mq * c;
    }
    // rows: Uᴴ M, Uᴴ = [[c, s̄], [−s, c]]
    for col in 0..n {
        let mp = m[(p, col)];
        let mq = m[(q, col)];
        m[(p, col)] = mp * c + mq * s.conj();
        m[(q, col)] = -mp * s + mq * c;
    }
}

fn rotate_columns(v: &mut Matrix, p: usize, q: usize, c: f64, s: C64) {
    for r in 0..v.rows() {
        let vp = v[(r, p)];
        let vq = v[(r, q)];
        v[(r, p)] = vp * c + vq * s;
        v[(r, q)] = -vp * s.conj() + vq * c;
    }
}

/// Unit eigenvector of the largest eigenvalue of a real symmetric 3×3
/// matrix, via classical real Jacobi.
fn top_eigenvector3(g: &[[f64; 3]; 3]) -> [f64; 3] {
    let mut a = *g;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..64 {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        let diag = a[0][0].abs() + a[1][1].abs() + a[2][2].abs();
        if off <= f64::EPSILON * 1e-3 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let best = (0..3)
        .max_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap())
        .unwrap();
    [v[0][best], v[1][best], v[2][best]]
}

/// Returns a copy of `m` with the off-diagonal part removed.
pub fn diagonal_part(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| if i == j { m[(i, j)] } else { ZERO })
}
