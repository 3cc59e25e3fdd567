//! Property suites behind `commvar verify`. Each trial draws its own
//! sub-seed, so trials run in parallel and aggregate in index order.

use rayon::prelude::*;
use serde::Serialize;

use commvar::cohomtab::{a0_lambda_table, poincare_poly, IntPolynomial};
use commvar::commodel::{
    canonical_rep, commuting_to_config, config_to_commuting, f_subspace, sigma_action_tuple, CommutingTuple,
    TupleKind,
};
use commvar::gammaconf::{sigma_action_config, sphere_coord, Configuration, Label};
use commvar::isodecomp::{
    decomposition_type, flag_map, flag_preimage, is_complete_type, partitions, unit_normalize,
};
use commvar::numkit::{commutator_defect, Frame, Matrix, Tolerances, C64, I, ONE};
use commvar::rankstrata::{
    cayley, cayley_inv, chart_with_frame, pair_charts, pairing_chart, sigma_action_chart, stratum_rank,
    subquotient_chart, trace_split,
};
use commvar::realk::{joint_diagonalize_real, real_cayley, real_stratum_chart, real_trace_split};
use commvar::sample::{
    gen_random_commuting, haar_unitary, random_configuration, random_real_configuration, random_skew_hermitian,
    random_sphere_point, random_symmetric, random_tuple_of_rank, sub_seed, tuple_with_partition, SplitMix64,
};
use commvar::spectrumops::{multiply, multiply_tuple, structure_map, structure_map_tuple, unit_map};
use commvar::symuniverse::{psi_embed, Permutation, UniverseBasis};
use commvar::Error;

pub const SUITES: [&str; 7] = ["roundtrip", "cayley", "spectrum", "equivariance", "real", "isotropy", "cohomology"];

/// Seed, trial count, tolerances and size caps for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub tol: Tolerances,
    pub n_max: usize,
    pub s_max: usize,
    pub d_max: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub suite: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub messages: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<Summary>,
}

/// Residuals of one trial against their bounds.
#[derive(Default)]
struct Check {
    worst: f64,
    failures: Vec<String>,
}

impl Check {
    fn within(&mut self, what: &str, value: f64, bound: f64) {
        if value.is_nan() || value > bound {
            self.failures.push(format!("{what}: {value:.3e} > {bound:.0e}"));
        }
        if value.is_finite() {
            self.worst = self.worst.max(value);
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }
}

type Trial = fn(&mut SplitMix64, &RunConfig, &mut Check) -> commvar::Result<()>;

pub fn run(suite: &str, cfg: &RunConfig) -> Option<Summary> {
    if suite == "all" {
        let parts: Vec<Summary> = SUITES.iter().map(|s| run(s, cfg).expect("known suite")).collect();
        return Some(Summary {
            suite: "all".into(),
            trials: parts.iter().map(|p| p.trials).sum(),
            failures: parts.iter().map(|p| p.failures).sum(),
            worst_residual: parts.iter().map(|p| p.worst_residual).fold(0.0, f64::max),
            messages: Vec::new(),
            suites: parts,
        });
    }
    let trial: Trial = match suite {
        "roundtrip" => roundtrip,
        "cayley" => cayley_suite,
        "spectrum" => spectrum,
        "equivariance" => equivariance,
        "real" => real,
        "isotropy" => isotropy,
        "cohomology" => cohomology,
        _ => return None,
    };
    let salt = SUITES.iter().position(|s| *s == suite).unwrap() as u64;
    let outcomes: Vec<Check> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = SplitMix64::new(sub_seed(cfg.seed ^ salt, i as u64));
            let mut check = Check::default();
            if let Err(e) = trial(&mut rng, cfg, &mut check) {
                check.failures.push(format!("error: {e}"));
            }
            check
        })
        .collect();
    let mut messages = Vec::new();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for (i, c) in outcomes.iter().enumerate() {
        worst = worst.max(c.worst);
        if !c.failures.is_empty() {
            failures += 1;
            if messages.len() < 10 {
                messages.push(format!("trial {i}: {}", c.failures.join("; ")));
            }
        }
    }
    Some(Summary {
        suite: suite.into(),
        trials: cfg.trials,
        failures,
        worst_residual: worst,
        messages,
        suites: Vec::new(),
    })
}

fn pick_permutation(rng: &mut SplitMix64, n: usize) -> Permutation {
    let all = Permutation::all(n);
    all[rng.below(all.len())].clone()
}

fn universe(rng: &mut SplitMix64, cfg: &RunConfig) -> UniverseBasis {
    UniverseBasis::new(1 + rng.below(cfg.n_max), 1 + rng.below(cfg.d_max))
}

fn unitary_away_from_one(rng: &mut SplitMix64, s: usize) -> Matrix {
    let q = haar_unitary(rng, s);
    let d: Vec<C64> = (0..s).map(|_| C64::from_polar(1.0, rng.uniform_in(0.3, 6.0))).collect();
    &(&q * &Matrix::from_diag(&d)) * &q.adjoint()
}

fn roundtrip(rng: &mut SplitMix64, cfg: &RunConfig, c: &mut Check) -> commvar::Result<()> {
    let tol = &cfg.tol;
    let u = universe(rng, cfg);
    let rank = rng.below(u.dim().min(cfg.s_max) + 1);
    let config = random_configuration(rng, &u, rank);
    c.within("canonicalize idempotent", config.canonicalize(tol)?.distance(&config), 1e-12);
    let tuple = config_to_commuting(&config);
    c.within("commuting", commutator_defect(tuple.mats())?, 1e-12);
    c.holds("rank equals dim F", f_subspace(&tuple, tol)?.dim() == rank);
    let back = commuting_to_config(&tuple, tol)?;
    c.within("round trip", back.distance(&config), 1e-6);
    // conjugation by U(F^⊥) fixes the class
    let g = haar_unitary(rng, u.dim());
    let moved = commuting_to_config(&tuple.conjugate(&g), tol)?;
    let expected = Configuration::new(
        u.clone(),
        config
            .labels
            .iter()
            .map(|l| Label::new(l.frame.mapped(&g), l.point.clone()))
            .collect(),
    )
    .canonicalize(tol)?;
    c.within("conjugated round trip", moved.distance(&expected), 1e-6);
    Ok(())
}

fn cayley_suite(rng: &mut SplitMix64, cfg: &RunConfig, c: &mut Check) -> commvar::Result<()> {
    let tol = &cfg.tol;
    let s = 1 + rng.below(cfg.s_max);
    let x = random_skew_hermitian(rng, s);
    let a = cayley(&x, tol)?;
    c.within("cayley_inv∘cayley", cayley_inv(&a, tol)?.distance(&x), 1e-10);
    let b = unitary_away_from_one(rng, s);
    c.within("cayley∘cayley_inv", cayley(&cayley_inv(&b, tol)?, tol)?.distance(&b), 1e-10);
    let g = haar_unitary(rng, s);
    let lhs = cayley(&(&(&g * &x) * &g.adjoint()), tol)?;
    c.within("equivariance", lhs.distance(&(&(&g * &a) * &g.adjoint())), 1e-10);
    let t = rng.gaussian() * 3.0;
    let scalar = cayley(&Matrix::scalar(1, I * t), tol)?;
    c.within("scalar consistency", (scalar[(0, 0)] - sphere_coord(t)).norm(), 1e-14);
    let mut d: Vec<C64> = (0..s).map(|_| C64::from_polar(1.0, rng.uniform_in(0.3, 6.0))).collect();
    d[rng.below(s)] = ONE;
    let q = haar_unitary(rng, s);
    let singular = &(&q * &Matrix::from_diag(&d)) * &q.adjoint();
    c.holds("singularity detected", matches!(cayley_inv(&singular, tol), Err(Error::SingularAtOne { .. })));

    // charts
    let u = universe(rng, cfg);
    let rank = 1 + rng.below(u.dim().min(cfg.s_max));
    let tuple = random_tuple_of_rank(rng, &u, rank);
    let chart = subquotient_chart(&tuple, tol)?;
    c.holds("chart size", chart.s == rank);
    c.within("chart reconstruction", chart.reconstruct().distance(&canonical_rep(&tuple, tol)?), 1e-8);
    let h = haar_unitary(rng, rank);
    let alt = chart_with_frame(&tuple, &Frame::from_orthonormal(chart.frame.matrix() * &h), tol)?;
    c.within("frame change", chart.conjugation_defect(&alt), 1e-8);
    let split = trace_split(&chart.x);
    c.within("trace split", split.reassemble().distance(&chart.x), 1e-12);

    // pairing
    let y = gen_random_commuting(rng.next_u64(), 1 + rng.below(2), 1 + rng.below(3), TupleKind::SkewHermitian);
    c.within("pairing commutes", commutator_defect(pairing_chart(&chart.x, &y)?.mats())?, 1e-12);
    let (ua, ub) = (UniverseBasis::new(1, 2), UniverseBasis::new(1, 2));
    let (ra, rb) = (1 + rng.below(2), 1 + rng.below(2));
    let ca = subquotient_chart(&random_tuple_of_rank(rng, &ua, ra), tol)?;
    let cb = subquotient_chart(&random_tuple_of_rank(rng, &ub, rb), tol)?;
    let paired = pair_charts(&ca, &cb, &psi_embed(&ua, &ub, None), tol)?;
    c.holds("pairing rank", stratum_rank(&paired.reconstruct(), tol)? == ra * rb);
    Ok(())
}

fn spectrum(rng: &mut SplitMix64, cfg: &RunConfig, c: &mut Check) -> commvar::Result<()> {
    let tol = &cfg.tol;
    let cap = cfg.n_max.min(2);
    let (n, m) = (1 + rng.below(cap), 1 + rng.below(cap));
    let (un, um) = (UniverseBasis::new(n, 1), UniverseBasis::new(m, 1));
    let (ra, rb) = (rng.below(un.dim() + 1), rng.below(um.dim() + 1));
    let a = random_configuration(rng, &un, ra);
    let b = random_configuration(rng, &um, rb);
    let (x, y) = (random_sphere_point(rng, n, 0.2), random_sphere_point(rng, m, 0.2));

    let e = psi_embed(&un, &um, None).matrix();
    c.within("ψ isometry", (&e.adjoint() * &e).distance(&Matrix::identity(un.dim() * um.dim())), 1e-14);
    let prod = multiply(&unit_map(&x, &un, tol)?, &unit_map(&y, &um, tol)?, tol)?;
    c.within("unit law", prod.distance(&unit_map(&x.smash(&y), &prod.universe, tol)?), 1e-8);
    let ab = multiply(&a, &b, tol)?;
    c.holds("rank multiplicative", ab.rank() == ra * rb);
    let sm = structure_map(&a, &y, m, tol)?;
    c.holds("structure map keeps rank", sm.rank() == ra);
    let k = 1 + rng.below(cap);
    let uc = UniverseBasis::new(k, 1);
    let rc = rng.below(uc.dim() + 1);
    let third = random_configuration(rng, &uc, rc);
    let left = multiply(&ab, &third, tol)?;
    let right = multiply(&a, &multiply(&b, &third, tol)?, tol)?;
    c.within("associativity", left.distance(&right), 1e-8);

    let (ta, tb) = (config_to_commuting(&a), config_to_commuting(&b));
    let pt = multiply_tuple(&ta, &tb, tol)?;
    c.within("multiplication through φ̄", config_to_commuting(&ab).distance(&canonical_rep(&pt, tol)?), 1e-8);
    c.holds("tuple rank multiplicative", stratum_rank(&pt, tol)? == ra * rb);
    let st = structure_map_tuple(&ta, &y, m, tol)?;
    c.within("structure map through φ̄", config_to_commuting(&sm).distance(&st), 1e-8);
    Ok(())
}

fn equivariance(rng: &mut SplitMix64, cfg: &RunConfig, c: &mut Check) -> commvar::Result<()> {
    let tol = &cfg.tol;
    let u = universe(rng, cfg);
    let n = u.n();
    let rank = 1 + rng.below(u.dim().min(cfg.s_max));
    let config = random_configuration(rng, &u, rank);
    let (sigma, tau) = (pick_permutation(rng, n), pick_permutation(rng, n));
    let stepwise = sigma_action_config(&sigma, &sigma_action_config(&tau, &config, tol)?, tol)?;
    c.within("action on configurations", stepwise.distance(&sigma_action_config(&sigma.compose(&tau), &config, tol)?), 1e-9);

    let tuple = config_to_commuting(&config);
    let moved = sigma_action_tuple(&sigma, &tuple)?;
    let stepwise = sigma_action_tuple(&sigma, &sigma_action_tuple(&tau, &tuple)?)?;
    c.within("action on tuples", stepwise.distance(&sigma_action_tuple(&sigma.compose(&tau), &tuple)?), 1e-12);
    let via_config = config_to_commuting(&sigma_action_config(&sigma, &config, tol)?);
    c.within("φ̄ equivariant", via_config.distance(&canonical_rep(&moved, tol)?), 1e-8);

    let chart = subquotient_chart(&tuple, tol)?;
    let direct = subquotient_chart(&moved, tol)?;
    c.within("chart equivariant", sigma_action_chart(&sigma, &chart)?.conjugation_defect(&direct), 1e-8);

    let cap = cfg.n_max.min(2);
    let (n1, m1) = (1 + rng.below(cap), 1 + rng.below(cap));
    let (un, um) = (UniverseBasis::new(n1, 1), UniverseBasis::new(m1, 1));
    let (ra, rb) = (rng.below(un.dim() + 1), rng.below(um.dim() + 1));
    let a = random_configuration(rng, &un, ra);
    let b = random_configuration(rng, &um, rb);
    let (p, q) = (pick_permutation(rng, n1), pick_permutation(rng, m1));
    let lhs = multiply(&sigma_action_config(&p, &a, tol)?, &sigma_action_config(&q, &b, tol)?, tol)?;
    let rhs = sigma_action_config(&p.block_sum(&q), &multiply(&a, &b, tol)?, tol)?;
    c.within("product equivariant", lhs.distance(&rhs), 1e-8);
    Ok(())
}

fn real(rng: &mut SplitMix64, cfg: &RunConfig, c: &mut Check) -> commvar::Result<()> {
    let tol = &cfg.tol;
    let s = 1 + rng.below(cfg.s_max);
    let n = 1 + rng.below(cfg.n_max);
    let a = real_cayley(&random_symmetric(rng, s), tol)?;
    c.within("real Cayley unitary", a.unitary_deviation(), 1e-10);
    c.within("real Cayley symmetric", a.distance(&a.transpose()), 1e-10);

    let t = gen_random_commuting(rng.next_u64(), n, s, TupleKind::RealSymmetric);
    let jd = joint_diagonalize_real(&t, tol)?;
    c.within("det Q", (jd.unitary.determinant() - ONE).norm(), 1e-10);
    c.within("diagonalization residual", jd.residual, 1e-8 * t.max_norm().max(1.0));
    c.within("real split", real_trace_split(&t).reassemble().distance(&t), 1e-12);

    let u = universe(rng, cfg);
    let rank = 1 + rng.below(u.dim().min(cfg.s_max));
    let tuple = config_to_commuting(&random_real_configuration(rng, &u, rank));
    let chart = real_stratum_chart(&tuple, tol)?;
    c.within("real chart vs complex chart", subquotient_chart(&tuple, tol)?.conjugation_defect(&chart.complexified()), 1e-8);
    Ok(())
}

fn isotropy(rng: &mut SplitMix64, cfg: &RunConfig, c: &mut Check) -> commvar::Result<()> {
    let tol = &cfg.tol;
    let s = 1 + rng.below(cfg.s_max);
    let all = partitions(s);
    let d = all[rng.below(all.len())].clone();
    let mut parts = d.parts().to_vec();
    rng.shuffle(&mut parts);
    let kind = if rng.below(2) == 0 { TupleKind::SkewHermitian } else { TupleKind::RealSymmetric };
    let n = 1 + rng.below(cfg.n_max);
    let x = tuple_with_partition(rng, kind, n, &parts);
    c.holds("prescribed type recovered", decomposition_type(&x, tol)? == d);
    if d.blocks() > 1 {
        let unit = unit_normalize(&x, tol)?;
        c.holds("unit tuple complete", is_complete_type(&decomposition_type(unit.tuple(), tol)?));
    }

    let raw = random_skew_hermitian(rng, 2);
    let shift = Matrix::scalar(2, raw.trace().scale(0.5));
    let target = unit_normalize(&CommutingTuple::new_unchecked(TupleKind::SkewHermitian, 2, vec![&raw - &shift]), tol)?;
    let class = flag_preimage(&target, tol)?;
    let back = flag_map(&class.frame, &class.diagonal_tuple(), tol)?;
    c.within("flag preimage", back.tuple().distance(target.tuple()), 1e-8);
    Ok(())
}

const PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 17];

fn cohomology(rng: &mut SplitMix64, _cfg: &RunConfig, c: &mut Check) -> commvar::Result<()> {
    let p = PRIMES[rng.below(PRIMES.len())];
    let full = poincare_poly(p)?;
    let reduced = a0_lambda_table(p)?;
    c.holds("reduced table plus one", &reduced + &IntPolynomial::one() == full);
    c.holds("lowest degree 2p−3", reduced.lowest_degree() == Some(2 * p as u32 - 3));
    c.holds("total rank 1 + 2^{p−1}", full.eval(1) == 1 + (1i128 << (p - 1)));
    c.holds(
        "p = 3 table",
        poincare_poly(3)? == IntPolynomial::from_terms([(0, 1), (3, 1), (4, 2), (5, 1)]),
    );
    Ok(())
}
