//! Acceptance gate: ten criteria, one PASS/FAIL line each. Exits non-zero
//! if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use commvar::cohomtab::{a0_lambda_table, poincare_poly, IntPolynomial};
use commvar::commodel::{canonical_rep, commuting_to_config, config_to_commuting, sigma_action_tuple, CommutingTuple, TupleKind};
use commvar::gammaconf::{sphere_coord, Configuration, Label, SpherePoint};
use commvar::isodecomp::{
    decomposition_type, fixed_subspace_dim, flag_map, flag_preimage, is_complete_type, partitions, unit_normalize,
    FlagClass,
};
use commvar::numkit::{commutator_defect, Field, Frame, Matrix, Tolerances, C64, I, ONE};
use commvar::rankstrata::{
    cayley, cayley_inv, chart_with_frame, pair_charts, pairing_chart, sigma_action_chart, stratum_rank,
    subquotient_chart, subquotient_chart_at, trace_split,
};
use commvar::realk::{joint_diagonalize_real, real_cayley, real_stratum_chart, real_trace_split};
use commvar::sample::{
    gen_random_commuting, haar_orthogonal, haar_unitary, random_configuration, random_real_configuration,
    random_skew_hermitian, random_sphere_point, random_symmetric, random_tuple_of_rank, sub_seed,
    tuple_with_partition, SplitMix64,
};
use commvar::spectrumops::{multiply, multiply_tuple, structure_map, structure_map_tuple, unit_map};
use commvar::symuniverse::{psi_embed, Permutation, UniverseBasis};
use commvar::Error;

const SEED: u64 = 0xC0FF_EE00_2024;

/// Worst observed value against its bound, plus hard failures.
struct Tally {
    worst: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            worst: 0.0,
            failures: Vec::new(),
        }
    }

    fn within(&mut self, what: &str, value: f64, bound: f64) {
        if value.is_nan() || value > bound {
            self.failures.push(format!("{what}: {value:.3e} > {bound:.0e}"));
        }
        if value.is_finite() {
            self.worst = self.worst.max(value / bound);
        } else {
            self.worst = f64::INFINITY;
        }
    }

    fn check(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn run<T>(&mut self, what: &str, r: commvar::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn rng(criterion: u64, trial: u64) -> SplitMix64 {
    SplitMix64::new(sub_seed(SEED ^ criterion, trial))
}

/// Unitary with spectrum bounded away from 1.
fn unitary_away_from_one(rng: &mut SplitMix64, s: usize) -> Matrix {
    let q = haar_unitary(rng, s);
    let d: Vec<C64> = (0..s).map(|_| C64::from_polar(1.0, rng.uniform_in(0.3, 6.0))).collect();
    &(&q * &Matrix::from_diag(&d)) * &q.adjoint()
}

fn criterion_1() -> Tally {
    let mut t = Tally::new();
    let start = Instant::now();
    for trial in 0..200 {
        let mut r = rng(1, trial);
        let n = 1 + (trial as usize % 3);
        let degree = match n {
            1 => 1 + r.below(9),
            2 => 1 + r.below(3),
            _ => 1 + r.below(2),
        };
        let u = UniverseBasis::new(n, degree);
        let rank = r.below(u.dim().min(6) + 1);
        let c = random_configuration(&mut r, &u, rank);
        if let Some(back) = t.run("round trip", commuting_to_config(&config_to_commuting(&c), &tol())) {
            t.within("label-matching distance", back.distance(&c), 1e-6);
        }
    }
    t.check("runtime within 30 s", start.elapsed() <= Duration::from_secs(30));
    t
}

fn criterion_2() -> Tally {
    let mut t = Tally::new();
    for trial in 0..100 {
        let mut r = rng(2, trial);
        let s = 1 + r.below(6);
        let x = random_skew_hermitian(&mut r, s);
        let Some(a) = t.run("cayley", cayley(&x, &tol())) else { continue };
        if let Some(back) = t.run("cayley_inv", cayley_inv(&a, &tol())) {
            t.within("cayley_inv(cayley(X)) - X", back.distance(&x), 1e-10);
        }
        let b = unitary_away_from_one(&mut r, s);
        if let Some(y) = t.run("cayley_inv", cayley_inv(&b, &tol())) {
            t.within("skew-Hermitian output", y.skew_hermitian_deviation(), 1e-10);
            let again = cayley(&y, &tol()).unwrap();
            t.within("cayley(cayley_inv(A)) - A", again.distance(&b), 1e-10);
        }
        let u = haar_unitary(&mut r, s);
        let ux = &(&u * &x) * &u.adjoint();
        let lhs = cayley(&ux, &tol()).unwrap();
        let rhs = &(&u * &a) * &u.adjoint();
        t.within("conjugation equivariance", lhs.distance(&rhs), 1e-10);

        // singular exactly when an eigenvalue equals 1
        let q = haar_unitary(&mut r, s);
        let mut d: Vec<C64> = (0..s).map(|_| C64::from_polar(1.0, r.uniform_in(0.3, 6.0))).collect();
        let k = r.below(s);
        d[k] = ONE;
        let singular = &(&q * &Matrix::from_diag(&d)) * &q.adjoint();
        t.check(
            "SingularAtOne on eigenvalue 1",
            matches!(cayley_inv(&singular, &tol()), Err(Error::SingularAtOne { .. })),
        );
        d[k] = C64::from_polar(1.0, 1e-6);
        let near = &(&q * &Matrix::from_diag(&d)) * &q.adjoint();
        t.check("no error at gap 1e-6", cayley_inv(&near, &tol()).is_ok());
    }
    let mut r = rng(2, 1000);
    for _ in 0..50 {
        let s = r.gaussian() * 3.0;
        let c = cayley(&Matrix::scalar(1, I * s), &tol()).unwrap();
        t.within("scalar consistency", (c[(0, 0)] - sphere_coord(s)).norm(), 1e-14);
    }
    t
}

fn criterion_3() -> Tally {
    let mut t = Tally::new();
    for trial in 0..100 {
        let mut r = rng(3, trial);
        let n = 1 + (trial as usize % 3);
        let u = match n {
            1 => UniverseBasis::new(1, 4),
            _ => UniverseBasis::new(n, 2),
        };
        let s = 1 + r.below(5);
        let tuple = random_tuple_of_rank(&mut r, &u, s);
        let Some(chart) = t.run("chart", subquotient_chart_at(&tuple, s, &tol())) else { continue };
        let rep = canonical_rep(&tuple, &tol()).unwrap();
        t.within("reconstruction vs canonical_rep", chart.reconstruct().distance(&rep), 1e-8);

        let g = haar_unitary(&mut r, s);
        let other = Frame::from_orthonormal(chart.frame.matrix() * &g);
        if let Some(alt) = t.run("chart with frame", chart_with_frame(&tuple, &other, &tol())) {
            t.within("frame-choice conjugacy", chart.conjugation_defect(&alt), 1e-8);
        }
        for sigma in Permutation::all(n) {
            let moved = sigma_action_tuple(&sigma, &tuple).unwrap();
            let Some(direct) = t.run("chart of σ·T", subquotient_chart(&moved, &tol())) else { continue };
            let predicted = sigma_action_chart(&sigma, &chart).unwrap();
            t.within("Σn-equivariance of the chart", predicted.conjugation_defect(&direct), 1e-8);
        }
    }
    t
}

fn random_pair(r: &mut SplitMix64, max_rank: usize) -> (Configuration, Configuration) {
    let n = 1 + r.below(2);
    let m = 1 + r.below(2);
    let (un, um) = (UniverseBasis::new(n, 1), UniverseBasis::new(m, 1));
    let ra = r.below(max_rank.min(un.dim()) + 1);
    let a = random_configuration(r, &un, ra);
    let rb = r.below(max_rank.min(um.dim()) + 1);
    let b = random_configuration(r, &um, rb);
    (a, b)
}

/// Frame pushed along the coordinate inclusion `α ↦ (α, 0)`.
fn include_frame(f: &Frame, from: &UniverseBasis, to: &UniverseBasis) -> Frame {
    let pad = to.n() - from.n();
    let index: Vec<usize> = from
        .monomials()
        .iter()
        .map(|a| {
            let mut b = a.clone();
            b.extend(std::iter::repeat_n(0, pad));
            to.index_of(&b).unwrap()
        })
        .collect();
    let cols: Vec<Vec<C64>> = f
        .vectors()
        .iter()
        .map(|v| {
            let mut w = vec![C64::new(0.0, 0.0); to.dim()];
            for (i, z) in v.iter().enumerate() {
                w[index[i]] = *z;
            }
            w
        })
        .collect();
    Frame::from_orthonormal(Matrix::from_columns(to.dim(), &cols))
}

fn criterion_4() -> Tally {
    let mut t = Tally::new();
    let tol = tol();
    for trial in 0..100 {
        let mut r = rng(4, trial);
        let (a, b) = random_pair(&mut r, 3);
        let (n, m) = (a.universe.n(), b.universe.n());
        let x = random_sphere_point(&mut r, n, 0.2);
        let y = random_sphere_point(&mut r, m, 0.2);

        // unit law: μ(ι x, ι y) = ι(x ∧ y), and μ(a, ι₀) = a
        let ix = unit_map(&x, &a.universe, &tol).unwrap();
        let iy = unit_map(&y, &b.universe, &tol).unwrap();
        let prod = multiply(&ix, &iy, &tol).unwrap();
        let ixy = unit_map(&x.smash(&y), &prod.universe, &tol).unwrap();
        t.within("unit law μ(ιx, ιy) = ι(x∧y)", prod.distance(&ixy), 1e-8);
        let unit0 = unit_map(&SpherePoint::Coords(vec![]), &UniverseBasis::new(0, 1), &tol).unwrap();
        let right = multiply(&a, &unit0, &tol).unwrap();
        let included = Configuration::new(
            right.universe.clone(),
            a.labels
                .iter()
                .map(|l| Label::new(include_frame(&l.frame, &a.universe, &right.universe), l.point.clone()))
                .collect(),
        )
        .canonicalize(&tol)
        .unwrap();
        t.within("unit law μ(a, ι₀) = a", right.distance(&included), 1e-8);

        // σ_{n,m} = μ ∘ (id ∧ ι), against labels (V ⊗ ℂ·1, x ∧ y) built by hand
        let sm = structure_map(&a, &y, m, &tol).unwrap();
        let by_hand = Configuration::new(
            sm.universe.clone(),
            a.labels
                .iter()
                .map(|l| Label::new(include_frame(&l.frame, &a.universe, &sm.universe), l.point.smash(&y)))
                .collect(),
        )
        .canonicalize(&tol)
        .unwrap();
        t.within("σ = μ∘(id∧ι)", sm.distance(&by_hand), 1e-8);
        t.check("rank preserved by σ", sm.rank() == a.rank());

        // associativity
        let k = 1 + r.below(2);
        let uc = UniverseBasis::new(k, 1);
        let rc = r.below(3);
        let c = random_configuration(&mut r, &uc, rc);
        let left = multiply(&multiply(&a, &b, &tol).unwrap(), &c, &tol).unwrap();
        let right = multiply(&a, &multiply(&b, &c, &tol).unwrap(), &tol).unwrap();
        t.within("associativity", left.distance(&right), 1e-8);

        // (Σn × Σm)-equivariance
        let ab = multiply(&a, &b, &tol).unwrap();
        for sigma in Permutation::all(n) {
            for tau in Permutation::all(m) {
                let sa = commvar::gammaconf::sigma_action_config(&sigma, &a, &tol).unwrap();
                let tb = commvar::gammaconf::sigma_action_config(&tau, &b, &tol).unwrap();
                let lhs = multiply(&sa, &tb, &tol).unwrap();
                let rhs = commvar::gammaconf::sigma_action_config(&sigma.block_sum(&tau), &ab, &tol).unwrap();
                t.within("(Σn×Σm)-equivariance", lhs.distance(&rhs), 1e-8);
            }
        }

        // rank multiplicativity, in both pictures
        t.check("rank(μ(a,b)) = rank a · rank b", ab.rank() == a.rank() * b.rank());
        let pt = multiply_tuple(&config_to_commuting(&a), &config_to_commuting(&b), &tol).unwrap();
        t.check(
            "stratum_rank(μ) multiplicative",
            stratum_rank(&pt, &tol).unwrap() == a.rank() * b.rank(),
        );
    }
    t
}

fn criterion_5() -> Tally {
    let mut t = Tally::new();
    let tol = tol();
    for trial in 0..100 {
        let mut r = rng(5, trial);
        let (a, b) = random_pair(&mut r, 2);
        let via_configs = config_to_commuting(&multiply(&a, &b, &tol).unwrap());
        let Some(via_tuples) = t.run(
            "tuple multiplication",
            multiply_tuple(&config_to_commuting(&a), &config_to_commuting(&b), &tol),
        ) else {
            continue;
        };
        let rep = canonical_rep(&via_tuples, &tol).unwrap();
        t.within("multiplication through φ̄", via_configs.distance(&rep), 1e-8);

        let m = b.universe.n();
        let y = random_sphere_point(&mut r, m, 0.2);
        let cfg = config_to_commuting(&structure_map(&a, &y, m, &tol).unwrap());
        if let Some(tup) = t.run("tuple structure map", structure_map_tuple(&config_to_commuting(&a), &y, m, &tol)) {
            t.within("structure map through φ̄", cfg.distance(&tup), 1e-8);
        }
    }
    t
}

fn criterion_6() -> Tally {
    let mut t = Tally::new();
    let tol = tol();
    for trial in 0..50 {
        let mut r = rng(6, trial);
        let n = 1 + r.below(3);
        let s = 1 + r.below(5);
        let x = gen_random_commuting(r.next_u64(), n, s, TupleKind::SkewHermitian);
        let split = trace_split(&x);
        t.within("complex reassembly", split.reassemble().distance(&x), 1e-12);
        let tr = split.traceless.mats().iter().map(|m| m.trace().norm()).fold(0.0, f64::max);
        t.within("traceless part", tr, 1e-12);
        let xr = gen_random_commuting(r.next_u64(), n, s, TupleKind::RealSymmetric);
        let rs = real_trace_split(&xr);
        t.within("real reassembly", rs.reassemble().distance(&xr), 1e-12);

        let y = gen_random_commuting(r.next_u64(), 1 + r.below(2), 1 + r.below(3), TupleKind::SkewHermitian);
        let p = pairing_chart(&x, &y).unwrap();
        t.within("pairing commutes", commutator_defect(p.mats()).unwrap(), 1e-12);
        for (i, xi) in x.mats().iter().enumerate() {
            let lhs = p.mat(i).trace();
            t.within("tr(X⊗Id_t) = t·tr X", (lhs - xi.trace() * y.s() as f64).norm(), 1e-12);
        }

        // dim F of the reconstructed pairing is the product of the ranks
        let (ua, ub) = (UniverseBasis::new(1, 3), UniverseBasis::new(2, 1));
        let sa = 1 + r.below(3);
        let sb = 1 + r.below(3);
        let ca = subquotient_chart(&random_tuple_of_rank(&mut r, &ua, sa), &tol).unwrap();
        let cb = subquotient_chart(&random_tuple_of_rank(&mut r, &ub, sb), &tol).unwrap();
        let psi = psi_embed(&ua, &ub, None);
        if let Some(pc) = t.run("paired chart", pair_charts(&ca, &cb, &psi, &tol)) {
            let rank = stratum_rank(&pc.reconstruct(), &tol).unwrap();
            t.check("dim F(pair) = s·t", rank == sa * sb);
        }
    }
    t
}

/// Real coordinates of a matrix, for the null-space oracle.
fn real_coords(m: &Matrix) -> Vec<f64> {
    m.data().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn matrix_rank(rows: &[Vec<f64>]) -> usize {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else { break };
        if a[p][c].abs() <= 1e-9 * scale {
            continue;
        }
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank {
                let f = a[i][c] / a[rank][c];
                if f != 0.0 {
                    for k in c..cols {
                        a[i][k] -= f * a[rank][k];
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the traceless n-tuples fixed by random elements of the
/// block group of type `parts`, computed as a null space.
fn fixed_dim_oracle(parts: &[usize], n: usize, field: Field, r: &mut SplitMix64) -> usize {
    let s: usize = parts.iter().sum();
    let mut basis: Vec<Matrix> = Vec::new();
    for j in 0..s {
        for k in j..s {
            match field {
                Field::Complex => {
                    if j == k {
                        basis.push(Matrix::from_fn(s, s, |a, b| if a == j && b == j { I } else { C64::new(0.0, 0.0) }));
                    } else {
                        basis.push(Matrix::from_fn(s, s, |a, b| match (a, b) {
                            (a, b) if a == j && b == k => ONE,
                            (a, b) if a == k && b == j => -ONE,
                            _ => C64::new(0.0, 0.0),
                        }));
                        basis.push(Matrix::from_fn(s, s, |a, b| {
                            if (a == j && b == k) || (a == k && b == j) { I } else { C64::new(0.0, 0.0) }
                        }));
                    }
                }
                Field::Real => basis.push(Matrix::from_fn(s, s, |a, b| {
                    if (a == j && b == k) || (a == k && b == j) { ONE } else { C64::new(0.0, 0.0) }
                })),
            }
        }
    }
    let block_diag = |blocks: Vec<Matrix>| {
        let mut g = Matrix::zeros(s, s);
        let mut off = 0;
        for b in blocks {
            for a in 0..b.rows() {
                for c in 0..b.rows() {
                    g[(off + a, off + c)] = b[(a, c)];
                }
            }
            off += b.rows();
        }
        g
    };
    // one reflection per block, so size-one orthogonal blocks are not missed
    let reflections = (0..parts.len()).map(|k| {
        block_diag(
            parts
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    let mut m = Matrix::identity(p);
                    if j == k {
                        m[(0, 0)] = -ONE;
                    }
                    m
                })
                .collect(),
        )
    });
    let mut group: Vec<Matrix> = reflections.collect();
    for _ in 0..3 {
        let blocks = parts
            .iter()
            .map(|&p| match field {
                Field::Complex => haar_unitary(r, p),
                Field::Real => haar_orthogonal(r, p),
            })
            .collect();
        group.push(block_diag(blocks));
    }
    // constraint rows: one column per basis element
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for x in &basis {
        let mut col = Vec::new();
        for g in &group {
            col.extend(real_coords(&(&(&(g * x) * &g.adjoint()) - x)));
        }
        let tr = x.trace();
        col.push(tr.re);
        col.push(tr.im);
        columns.push(col);
    }
    let rows: Vec<Vec<f64>> = (0..columns[0].len()).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    n * (basis.len() - matrix_rank(&rows))
}

fn criterion_7() -> Tally {
    let mut t = Tally::new();
    let tol = tol();
    for trial in 0..100 {
        let mut r = rng(7, trial);
        let s = 1 + r.below(5);
        let all = partitions(s);
        let d = all[r.below(all.len())].clone();
        let n = 1 + r.below(3);
        let mut parts = d.parts().to_vec();
        r.shuffle(&mut parts);
        let kind = if trial % 2 == 0 { TupleKind::SkewHermitian } else { TupleKind::RealSymmetric };
        let x = tuple_with_partition(&mut r, kind, n, &parts);
        match decomposition_type(&x, &tol) {
            Ok(got) => t.check(&format!("prescribed {d}, got {got}"), got == d),
            Err(e) => t.check(&format!("decomposition type: {e}"), false),
        }
        if d.blocks() > 1 {
            let u = unit_normalize(&x, &tol).unwrap();
            let got = decomposition_type(u.tuple(), &tol).unwrap();
            t.check("type invariant under normalization", got == d);
        }
        // generic unit-norm traceless tuples are complete
        let g = gen_random_commuting(r.next_u64(), n, s.max(2), TupleKind::SkewHermitian);
        let u = unit_normalize(&trace_split(&g).traceless, &tol).unwrap();
        t.check("unit tuple has complete type", is_complete_type(&decomposition_type(u.tuple(), &tol).unwrap()));
    }
    let mut r = rng(7, 1000);
    for s in 1..=5 {
        for d in partitions(s) {
            for n in 1..=3 {
                for field in [Field::Complex, Field::Real] {
                    let oracle = fixed_dim_oracle(d.parts(), n, field, &mut r);
                    t.check(
                        &format!("fixed dim {d} n={n} {field:?}: {} vs {oracle}", fixed_subspace_dim(&d, n, field)),
                        fixed_subspace_dim(&d, n, field) == oracle,
                    );
                }
            }
        }
    }
    t
}

/// Expansion of `1 + t^{2p−3}(1+t)∏(1+t^{2i−1})` by enumerating subsets of
/// the exterior generators.
fn poincare_oracle(p: u32) -> IntPolynomial {
    let degrees: Vec<u32> = std::iter::once(1).chain((1..=p - 2).map(|i| 2 * i - 1)).collect();
    let terms = (0u64..1 << degrees.len()).map(|mask| {
        let d: u32 = degrees.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, d)| d).sum();
        (2 * p - 3 + d, 1)
    });
    IntPolynomial::from_terms(terms.chain([(0, 1)]))
}

fn criterion_8() -> Tally {
    let mut t = Tally::new();
    let p3 = poincare_poly(3).unwrap();
    t.check(
        "P₃ = 1 + t³ + 2t⁴ + t⁵",
        p3 == IntPolynomial::from_terms([(0, 1), (3, 1), (4, 2), (5, 1)]),
    );
    t.check("P₅ matches subset expansion", poincare_poly(5).unwrap() == poincare_oracle(5));
    for p in [3u64, 5, 7, 11] {
        let full = poincare_poly(p).unwrap();
        let reduced = a0_lambda_table(p).unwrap();
        t.check(
            &format!("reduced table consistency p={p}"),
            &reduced + &IntPolynomial::one() == full,
        );
        t.check(&format!("lowest degree p={p}"), reduced.lowest_degree() == Some(2 * p as u32 - 3));
        t.check(&format!("P({p}) at 1"), full.eval(1) == 1 + (1i128 << (p - 1)));
    }
    t
}

fn criterion_9() -> Tally {
    let mut t = Tally::new();
    let tol = tol();
    for trial in 0..100 {
        let mut r = rng(9, trial);
        let s = 1 + r.below(6);
        let n = 1 + r.below(3);
        let x = random_symmetric(&mut r, s);
        let a = real_cayley(&x, &tol).unwrap();
        t.within("real Cayley unitary", a.unitary_deviation(), 1e-10);
        t.within("real Cayley symmetric", a.distance(&a.transpose()), 1e-10);

        let tuple = gen_random_commuting(r.next_u64(), n, s, TupleKind::RealSymmetric);
        if let Some(jd) = t.run("SO(s) diagonalization", joint_diagonalize_real(&tuple, &tol)) {
            let q = &jd.unitary;
            t.within("det Q = 1", (q.determinant() - ONE).norm(), 1e-10);
            t.within("Q real orthogonal", q.unitary_deviation() + q.imag_norm(), 1e-10);
            for m in tuple.mats() {
                t.within("QᵀXQ diagonal", (&(&q.transpose() * m) * q).offdiag_norm(), 1e-8);
            }
        }

        let u = match trial % 3 {
            0 => UniverseBasis::new(1, 4),
            1 => UniverseBasis::new(2, 2),
            _ => UniverseBasis::new(3, 1),
        };
        let rank = 1 + r.below(4);
        let c = random_real_configuration(&mut r, &u, rank);
        let at = config_to_commuting(&c);
        let Some(real) = t.run("real chart", real_stratum_chart(&at, &tol)) else { continue };
        let complex = subquotient_chart(&at, &tol).unwrap();
        t.within("real vs complex chart", complex.conjugation_defect(&real.complexified()), 1e-8);
        t.within("real chart reconstruction", real.reconstruct().distance(&at), 1e-8);
    }
    t
}

fn criterion_10() -> Tally {
    let mut t = Tally::new();
    let tol = tol();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for trial in 0..500 {
        let mut r = rng(10, trial);
        let g = haar_unitary(&mut r, 2);
        let a = if r.below(2) == 0 { h } else { -h };
        let diagonals = vec![vec![a, -a]];
        let x = CommutingTuple::new_unchecked(TupleKind::SkewHermitian, 2, vec![Matrix::from_diag(&[I * a, -I * a])]);
        let target = flag_map(&g, &x, &tol).unwrap();
        let Some(class) = t.run("preimage", flag_preimage(&target, &tol)) else { continue };
        let image = flag_map(&class.frame, &class.diagonal_tuple(), &tol).unwrap();
        t.within("preimage maps to target", image.tuple().distance(target.tuple()), 1e-8);
        t.within("known preimage in the recovered class", class.distance(&FlagClass::canonical(&g, &diagonals, &tol)), 1e-8);
        // another representative: right torus action and the swap
        let phases = Matrix::from_diag(&[r.unit_complex(), r.unit_complex()]);
        let swap = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let g2 = &(&g * &phases) * &swap;
        let rep2 = FlagClass::canonical(&g2, &[vec![-a, a]], &tol);
        t.within("class independent of representative", class.distance(&rep2), 1e-8);
        let x2 = CommutingTuple::new_unchecked(TupleKind::SkewHermitian, 2, vec![Matrix::from_diag(&[-I * a, I * a])]);
        let again = flag_map(&g2, &x2, &tol).unwrap();
        t.within("representatives share the image", again.tuple().distance(target.tuple()), 1e-8);

        // targets drawn directly from the unit sphere of traceless su(2)
        let raw = random_skew_hermitian(&mut r, 2);
        let shift = Matrix::scalar(2, raw.trace().scale(0.5));
        let y = CommutingTuple::new_unchecked(TupleKind::SkewHermitian, 2, vec![&raw - &shift]);
        let direct = unit_normalize(&y, &tol).unwrap();
        let Some(found) = t.run("preimage of a direct sample", flag_preimage(&direct, &tol)) else { continue };
        let back = flag_map(&found.frame, &found.diagonal_tuple(), &tol).unwrap();
        t.within("direct sample recovered", back.tuple().distance(direct.tuple()), 1e-8);
        let spectrum: Vec<f64> = found.diagonals[0].clone();
        let moved = FlagClass::canonical(&(&found.frame * &phases), &[spectrum], &tol);
        t.within("recovered class is canonical", found.distance(&moved), 1e-8);
    }
    t
}

type Criterion = (&'static str, fn() -> Tally);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 round-trip homeomorphism", criterion_1),
        ("2 Cayley suite", criterion_2),
        ("3 stratum chart", criterion_3),
        ("4 spectrum laws", criterion_4),
        ("5 cross-picture coherence", criterion_5),
        ("6 trace splitting and pairing", criterion_6),
        ("7 isotropy types", criterion_7),
        ("8 cohomology table", criterion_8),
        ("9 real variant", criterion_9),
        ("10 flag map at p = 2", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, run) in criteria {
        let t0 = Instant::now();
        let tally = run();
        let ok = tally.failures.is_empty();
        println!(
            "{} criterion {name} (worst/bound {:.2e}, {:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            tally.worst,
            t0.elapsed().as_secs_f64()
        );
        for f in tally.failures.iter().take(5) {
            println!("     {f}");
        }
        if !ok {
            failed += 1;
        }
    }
    let total = start.elapsed();
    println!("{} of 10 criteria passed in {:.1}s", 10 - failed, total.as_secs_f64());
    if failed == 0 && total <= Duration::from_secs(300) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
