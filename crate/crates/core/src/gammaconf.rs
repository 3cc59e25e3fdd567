//! Labeled configuration model `ku(Sⁿ, V)`: unordered configurations of
//! points of `Sⁿ = S(ℂ)^∧n` labeled by mutually orthogonal subspaces of a
//! truncated universe.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{orthonormalize, Frame, Tolerances, C64, I, ONE};
use crate::symuniverse::{sigma_star, Permutation, UniverseBasis};

/// A point of `Sⁿ` in unit-circle coordinates, or the basepoint.
#[derive(Clone, Debug, PartialEq)]
pub enum SpherePoint {
    Basepoint,
    Coords(Vec<C64>),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BaseTag {
    Basepoint,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Base(BaseTag),
    Coords { coords: Vec<C64> },
}

impl Serialize for SpherePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpherePoint::Basepoint => PointRepr::Base(BaseTag::Basepoint).serialize(s),
            SpherePoint::Coords(c) => PointRepr::Coords { coords: c.clone() }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match PointRepr::deserialize(d)? {
            PointRepr::Base(_) => SpherePoint::Basepoint,
            PointRepr::Coords { coords } => SpherePoint::Coords(coords),
        })
    }
}

/// The chart `ℝ ∪ {∞} → S(ℂ)`, `t ↦ (it − 1)(it + 1)⁻¹`, with `±∞ ↦ 1`.
pub fn sphere_coord(t: f64) -> C64 {
    if t.is_infinite() {
        return ONE;
    }
    let it = I * t;
    (it - ONE) / (it + ONE)
}

impl SpherePoint {
    pub fn coords(coords: Vec<C64>) -> Self {
        SpherePoint::Coords(coords)
    }

    /// Point with coordinates `sphere_coord(tⱼ)`.
    pub fn from_reals(ts: &[f64]) -> Self {
        SpherePoint::Coords(ts.iter().map(|&t| sphere_coord(t)).collect())
    }

    pub fn is_basepoint(&self) -> bool {
        matches!(self, SpherePoint::Basepoint)
    }

    /// True for the basepoint symbol and for points with a coordinate
    /// within `tol.base` of 1.
    pub fn is_near_basepoint(&self, tol: &Tolerances) -> bool {
        match self {
            SpherePoint::Basepoint => true,
            SpherePoint::Coords(c) => c.iter().any(|z| (z - ONE).norm() < tol.base),
        }
    }

    pub fn coordinates(&self) -> Option<&[C64]> {
        match self {
            SpherePoint::Basepoint => None,
            SpherePoint::Coords(c) => Some(c),
        }
    }

    /// `x ∧ y`: coordinate concatenation; the basepoint is absorbing.
    pub fn smash(&self, other: &SpherePoint) -> SpherePoint {
        match (self, other) {
            (SpherePoint::Coords(a), SpherePoint::Coords(b)) => {
                let mut c = a.clone();
                c.extend_from_slice(b);
                SpherePoint::Coords(c)
            }
            _ => SpherePoint::Basepoint,
        }
    }

    /// Standard left action `(σ·x)_j = x_{σ⁻¹(j)}`; the basepoint is fixed.
    pub fn act(&self, sigma: &Permutation) -> SpherePoint {
        match self {
            SpherePoint::Basepoint => SpherePoint::Basepoint,
            SpherePoint::Coords(c) => SpherePoint::Coords(sigma.act_on(c)),
        }
    }

    /// Max-metric distance; infinite between a basepoint and a coordinate point.
    pub fn distance(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Basepoint, SpherePoint::Basepoint) => 0.0,
            (SpherePoint::Coords(a), SpherePoint::Coords(b)) if a.len() == b.len() => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        }
    }

    fn lex_cmp(&self, other: &SpherePoint) -> Ordering {
        match (self, other) {
            (SpherePoint::Coords(a), SpherePoint::Coords(b)) => {
                for (x, y) in a.iter().zip(b) {
                    let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                a.len().cmp(&b.len())
            }
            (SpherePoint::Basepoint, SpherePoint::Basepoint) => Ordering::Equal,
            (SpherePoint::Basepoint, _) => Ordering::Less,
            (_, SpherePoint::Basepoint) => Ordering::Greater,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Label {
    pub frame: Frame,
    pub point: SpherePoint,
}

impl Label {
    pub fn new(frame: Frame, point: SpherePoint) -> Self {
        Label { frame, point }
    }
}

/// An element `[(V₁, x₁), …, (V_k, x_k)]` of `ku(Sⁿ, Sym^{≤D}(ℂⁿ))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub universe: UniverseBasis,
    pub labels: Vec<Label>,
}

impl Configuration {
    pub fn new(universe: UniverseBasis, labels: Vec<Label>) -> Self {
        Configuration { universe, labels }
    }

    pub fn empty(universe: UniverseBasis) -> Self {
        Configuration {
            universe,
            labels: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn validate_shapes(&self) -> Result<()> {
        let dim = self.universe.dim();
        let n = self.universe.n();
        for l in &self.labels {
            if l.frame.ambient_dim() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "frame lives in dimension {}, universe has dimension {dim}",
                    l.frame.ambient_dim()
                )));
            }
            if let SpherePoint::Coords(c) = &l.point {
                if c.len() != n {
                    return Err(Error::ShapeMismatch(format!(
                        "point has {} coordinates, expected {n}",
                        c.len()
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_orthogonal(&self, tol: &Tolerances) -> Result<()> {
        for (i, a) in self.labels.iter().enumerate() {
            let defect = a.frame.orthonormality_defect();
            if defect > tol.structure {
                return Err(Error::RankDeficient {
                    index: i,
                    residual: defect,
                });
            }
            for (j, b) in self.labels.iter().enumerate().skip(i + 1) {
                let overlap = a.frame.max_overlap(&b.frame);
                if overlap > tol.structure {
                    return Err(Error::NotOrthogonal {
                        first: i,
                        second: j,
                        overlap,
                    });
                }
            }
        }
        Ok(())
    }

    /// Applies the coend identifications: basepoint-labeled and
    /// zero-dimensional labels are dropped, labels at equal points (within
    /// `tol.cluster` per coordinate) are merged into their direct sum.
    /// Output frames are canonical and labels are sorted by leading
    /// coordinate, then by point.
    pub fn canonicalize(&self, tol: &Tolerances) -> Result<Configuration> {
        self.validate_shapes()?;
        self.check_orthogonal(tol)?;
        let live: Vec<&Label> = self
            .labels
            .iter()
            .filter(|l| !l.frame.is_empty() && !l.point.is_near_basepoint(tol))
            .collect();

        // single-linkage grouping of equal points
        let mut group: Vec<usize> = (0..live.len()).collect();
        fn root(group: &mut [usize], mut i: usize) -> usize {
            while group[i] != i {
                group[i] = group[group[i]];
                i = group[i];
            }
            i
        }
        for i in 0..live.len() {
            for j in i + 1..live.len() {
                if live[i].point.distance(&live[j].point) < tol.cluster {
                    let (ri, rj) = (root(&mut group, i), root(&mut group, j));
                    if ri != rj {
                        group[rj.max(ri)] = ri.min(rj);
                    }
                }
            }
        }
        let mut labels = Vec::new();
        for r in 0..live.len() {
            let members: Vec<usize> = (0..live.len())
                .filter(|&i| root(&mut group, i) == r)
                .collect();
            if members.is_empty() {
                continue;
            }
            let frame = if members.len() == 1 {
                live[members[0]].frame.canonical()
            } else {
                let vectors: Vec<Vec<C64>> = members
                    .iter()
                    .flat_map(|&i| live[i].frame.vectors())
                    .collect();
                orthonormalize(&vectors, self.universe.dim(), tol)?.canonical()
            };
            let lead = members
                .iter()
                .min_by_key(|&&i| live[i].frame.leading_coordinate())
                .copied()
                .unwrap();
            labels.push(Label::new(frame, live[lead].point.clone()));
        }
        sort_labels(&mut labels);
        Ok(Configuration {
            universe: self.universe.clone(),
            labels,
        })
    }

    /// `Σ dim Vᵢ` over labels away from the basepoint.
    pub fn rank(&self) -> usize {
        self.labels
            .iter()
            .filter(|l| !l.point.is_basepoint())
            .map(|l| l.frame.dim())
            .sum()
    }

    /// Matching distance between two configurations over the same
    /// universe: the best assignment of labels minimizing the worst
    /// `point distance + ‖P_V − P_W‖_F`. Infinite if the label counts differ.
    pub fn distance(&self, other: &Configuration) -> f64 {
        if self.universe != other.universe || self.labels.len() != other.labels.len() {
            return f64::INFINITY;
        }
        let k = self.labels.len();
        if k == 0 {
            return 0.0;
        }
        let cost: Vec<Vec<f64>> = self
            .labels
            .iter()
            .map(|a| {
                other
                    .labels
                    .iter()
                    .map(|b| a.point.distance(&b.point) + a.frame.subspace_distance(&b.frame))
                    .collect()
            })
            .collect();
        bottleneck_assignment(&cost)
    }
}

fn sort_labels(labels: &mut [Label]) {
    labels.sort_by(|a, b| {
        a.frame
            .leading_coordinate()
            .cmp(&b.frame.leading_coordinate())
            .then_with(|| a.point.lex_cmp(&b.point))
    });
}

/// Minimum over assignments of the maximal cost. Exhaustive for up to eight
/// labels, greedy beyond.
fn bottleneck_assignment(cost: &[Vec<f64>]) -> f64 {
    let k = cost.len();
    if k <= 8 {
        Permutation::all(k)
            .iter()
            .map(|p| (0..k).map(|i| cost[i][p.apply(i)]).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min)
    } else {
        let mut used = vec![false; k];
        let mut worst: f64 = 0.0;
        for row in cost {
            let (j, c) = row
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, c)| (j, *c))
                .unwrap();
            used[j] = true;
            worst = worst.max(c);
        }
        worst
    }
}

/// A basepoint-preserving map `⟨k⟩ → ⟨l⟩`; `images[j]` is the image of
/// `j + 1`, with 0 the basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedMap {
    images: Vec<usize>,
    target: usize,
}

impl BasedMap {
    pub fn new(images: Vec<usize>, target: usize) -> Result<Self> {
        if let Some(&bad) = images.iter().find(|&&i| i > target) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: target,
            });
        }
        Ok(BasedMap { images, target })
    }

    pub fn identity(k: usize) -> Self {
        BasedMap {
            images: (1..=k).collect(),
            target: k,
        }
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn image(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BasedMap) -> Result<BasedMap> {
        if first.target != self.source() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose <{}> -> <{}> after <{}> -> <{}>",
                self.source(),
                self.target,
                first.source(),
                first.target
            )));
        }
        Ok(BasedMap {
            images: first
                .images
                .iter()
                .map(|&i| if i == 0 { 0 } else { self.images[i - 1] })
                .collect(),
            target: self.target,
        })
    }

    /// Index-preserving push-forward: label `i` of the output carries
    /// `Wᵢ = ⊕_{α(j)=i} Vⱼ` at the common point of its preimages. Empty and
    /// basepoint labels are trivial and ignored; targets left with nothing
    /// get an empty label at the basepoint.
    pub fn push_forward(&self, labels: &[Label], ambient: usize, tol: &Tolerances) -> Result<Vec<Label>> {
        if labels.len() != self.source() {
            return Err(Error::IndexOutOfRange {
                index: labels.len(),
                limit: self.source(),
            });
        }
        let mut out = Vec::with_capacity(self.target);
        for i in 1..=self.target {
            let members: Vec<&Label> = labels
                .iter()
                .zip(&self.images)
                .filter(|(l, &img)| img == i && !l.frame.is_empty() && !l.point.is_near_basepoint(tol))
                .map(|(l, _)| l)
                .collect();
            let Some(first) = members.first() else {
                out.push(Label::new(Frame::empty(ambient), SpherePoint::Basepoint));
                continue;
            };
            if members
                .iter()
                .any(|m| m.point.distance(&first.point) >= tol.cluster)
            {
                return Err(Error::IncompatiblePoints { target: i });
            }
            let vectors: Vec<Vec<C64>> = members.iter().flat_map(|m| m.frame.vectors()).collect();
            out.push(Label::new(orthonormalize(&vectors, ambient, tol)?, first.point.clone()));
        }
        Ok(out)
    }
}

/// `ku(α, V)` applied to a configuration whose labels are indexed `1..k`
/// in the given order; the result is canonicalized.
pub fn apply_based_map(alpha: &BasedMap, c: &Configuration, tol: &Tolerances) -> Result<Configuration> {
    let labels = alpha.push_forward(&c.labels, c.universe.dim(), tol)?;
    Configuration::new(c.universe.clone(), labels).canonicalize(tol)
}

/// `σ·[(Vᵢ, xᵢ)] = [(σ_*(Vᵢ), σ·xᵢ)]`.
pub fn sigma_action_config(sigma: &Permutation, c: &Configuration, tol: &Tolerances) -> Result<Configuration> {
    if sigma.len() != c.universe.n() {
        return Err(Error::ShapeMismatch(format!(
            "permutation of {} letters acting on level {}",
            sigma.len(),
            c.universe.n()
        )));
    }
    let s = sigma_star(sigma, &c.universe);
    let labels = c
        .labels
        .iter()
        .map(|l| Label::new(l.frame.mapped(&s), l.point.act(sigma)))
        .collect();
    Configuration::new(c.universe.clone(), labels).canonicalize(tol)
}

/// Total dimension of the non-basepoint labels.
pub fn rank(c: &Configuration) -> usize {
    c.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn pt(xs: &[C64]) -> SpherePoint {
        SpherePoint::Coords(xs.to_vec())
    }

    #[test]
    fn sphere_chart_values() {
        assert!((sphere_coord(0.0) + ONE).norm() < 1e-16);
        assert!((sphere_coord(1.0) - I).norm() < 1e-16);
        assert_eq!(sphere_coord(f64::INFINITY), ONE);
        for t in [-3.0, -0.2, 0.7, 12.0] {
            assert!((sphere_coord(t).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn basepoint_label_is_killed() {
        let u = UniverseBasis::new(1, 2);
        let c = Configuration::new(
            u.clone(),
            vec![Label::new(Frame::coordinate(3, &[1]), SpherePoint::Basepoint)],
        );
        let k = c.canonicalize(&tol()).unwrap();
        assert!(k.is_empty());
        // a coordinate equal to 1 also counts as the basepoint
        let c = Configuration::new(u, vec![Label::new(Frame::coordinate(3, &[1]), pt(&[ONE]))]);
        assert!(c.canonicalize(&tol()).unwrap().is_empty());
    }

    #[test]
    fn empty_frame_is_killed() {
        let u = UniverseBasis::new(1, 2);
        let c = Configuration::new(u, vec![Label::new(Frame::empty(3), pt(&[-ONE]))]);
        assert!(c.canonicalize(&tol()).unwrap().is_empty());
    }

    #[test]
    fn coincident_points_merge() {
        let u = UniverseBasis::new(1, 2);
        let x = pt(&[I]);
        let c = Configuration::new(
            u,
            vec![
                Label::new(Frame::coordinate(3, &[2]), x.clone()),
                Label::new(Frame::coordinate(3, &[0]), x.clone()),
            ],
        );
        let k = c.canonicalize(&tol()).unwrap();
        assert_eq!(k.labels.len(), 1);
        assert_eq!(k.rank(), 2);
        assert!(k.labels[0].frame.subspace_distance(&Frame::coordinate(3, &[0, 2])) < 1e-14);
    }

    #[test]
    fn non_orthogonal_labels_rejected() {
        let u = UniverseBasis::new(1, 1);
        let r = 0.5f64.sqrt();
        let diag = Frame::from_orthonormal(crate::numkit::Matrix::from_columns(
            2,
            &[vec![ONE * r, ONE * r]],
        ));
        let c = Configuration::new(
            u,
            vec![
                Label::new(Frame::coordinate(2, &[0]), pt(&[I])),
                Label::new(diag, pt(&[-ONE])),
            ],
        );
        assert!(matches!(
            c.canonicalize(&tol()),
            Err(Error::NotOrthogonal { first: 0, second: 1, .. })
        ));
    }

    #[test]
    fn rank_is_additive() {
        let u = UniverseBasis::new(1, 5);
        let c = Configuration::new(
            u,
            vec![
                Label::new(Frame::coordinate(6, &[0, 1]), pt(&[I])),
                Label::new(Frame::coordinate(6, &[2, 3, 4]), pt(&[-ONE])),
            ],
        );
        assert_eq!(c.canonicalize(&tol()).unwrap().rank(), 5);
        assert_eq!(rank(&Configuration::empty(UniverseBasis::new(2, 1))), 0);
    }

    #[test]
    fn based_maps() {
        let u = UniverseBasis::new(1, 2);
        let x = pt(&[I]);
        let c = Configuration::new(
            u.clone(),
            vec![
                Label::new(Frame::coordinate(3, &[0]), x.clone()),
                Label::new(Frame::coordinate(3, &[1]), x.clone()),
            ],
        );
        let id = apply_based_map(&BasedMap::identity(2), &c, &tol()).unwrap();
        assert!(id.distance(&c.canonicalize(&tol()).unwrap()) < 1e-14);

        let fold = BasedMap::new(vec![1, 1], 1).unwrap();
        let folded = apply_based_map(&fold, &c, &tol()).unwrap();
        assert_eq!(folded.labels.len(), 1);
        assert_eq!(folded.rank(), 2);

        let kill = BasedMap::new(vec![0, 0], 3).unwrap();
        assert!(apply_based_map(&kill, &c, &tol()).unwrap().is_empty());

        assert!(matches!(
            BasedMap::new(vec![1, 4], 3),
            Err(Error::IndexOutOfRange { index: 4, limit: 3 })
        ));
        let y = Configuration::new(
            u,
            vec![
                Label::new(Frame::coordinate(3, &[0]), x),
                Label::new(Frame::coordinate(3, &[1]), pt(&[-ONE])),
            ],
        );
        assert!(matches!(
            apply_based_map(&fold, &y, &tol()),
            Err(Error::IncompatiblePoints { target: 1 })
        ));
    }

    #[test]
    fn sigma_swaps_coordinates() {
        let u = UniverseBasis::new(2, 1);
        let x = pt(&[I, -ONE]);
        let c = Configuration::new(u, vec![Label::new(Frame::coordinate(3, &[1]), x)]);
        let swap = Permutation::transposition(2, 0, 1);
        let out = sigma_action_config(&swap, &c, &tol()).unwrap();
        assert_eq!(out.labels[0].point, pt(&[-ONE, I]));
        // x1 -> x2
        assert!(out.labels[0].frame.subspace_distance(&Frame::coordinate(3, &[2])) < 1e-15);
        let id = sigma_action_config(&Permutation::identity(2), &c, &tol()).unwrap();
        assert!(id.distance(&c) < 1e-15);
    }

    #[test]
    fn json_point_schema() {
        let b = serde_json::to_string(&SpherePoint::Basepoint).unwrap();
        assert_eq!(b, "\"basepoint\"");
        let p = serde_json::to_string(&pt(&[C64::new(0.0, 1.0)])).unwrap();
        assert_eq!(p, r#"{"coords":[[0.0,1.0]]}"#);
        let back: SpherePoint = serde_json::from_str(&p).unwrap();
        assert_eq!(back, pt(&[I]));
        let u = UniverseBasis::new(1, 1);
        let c = Configuration::new(u, vec![Label::new(Frame::coordinate(2, &[0]), pt(&[-ONE]))]);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.starts_with(r#"{"universe":{"n":1,"D":1},"labels":[{"frame":{"rows":2,"cols":1"#));
        let back: Configuration = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
