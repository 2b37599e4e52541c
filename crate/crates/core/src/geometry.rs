//! Origin-symmetric convex polygons.
//!
//! A polygon is stored through its support values on a fixed set of antipodal
//! direction pairs `±u(θ)`, `θ ∈ [0, π)`. Only the half circle is kept, so every
//! body and every measure built from it is even by construction. Pairs whose
//! facet is absent stay in the list with `edge_length == 0` and carry the true
//! support of the body in that direction.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two angles closer than this are the same direction pair.
pub const ANGLE_TOL: f64 = 1e-12;

/// Number of uniformly spaced angles added to the evaluation set of
/// [`hausdorff_distance`] and [`contains`].
pub const HAUSDORFF_GRID: usize = 4096;

pub type Point = [f64; 2];

#[inline]
pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[inline]
pub fn unit(theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    [c, s]
}

/// The antipodal pair `±(cos θ, sin θ)` with `θ ∈ [0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DirectionPair {
    theta: f64,
}

impl DirectionPair {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..PI).contains(&theta) {
            return Err(Error::Validation(format!("theta {theta} outside [0, π)")));
        }
        Ok(Self { theta })
    }

    /// Reduces any finite angle modulo π.
    pub fn from_angle(angle: f64) -> Self {
        let mut theta = angle.rem_euclid(PI);
        if theta >= PI {
            theta = 0.0;
        }
        Self { theta }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    /// The `+` representative `u(θ)`.
    pub fn unit(self) -> Point {
        unit(self.theta)
    }
}

/// `m` equally spaced pairs `θ_k = kπ/m + offset`.
pub fn uniform_pairs(m: usize, offset: f64) -> Vec<DirectionPair> {
    (0..m)
        .map(|k| DirectionPair::from_angle(offset + k as f64 * PI / m as f64))
        .collect()
}

/// Sorts `(pair, value)` entries by angle and merges entries closer than
/// [`ANGLE_TOL`], including across the `θ = 0 ≡ π` seam.
pub(crate) fn canonicalize(
    mut entries: Vec<(DirectionPair, f64)>,
    merge: impl Fn(f64, f64) -> f64,
) -> Vec<(DirectionPair, f64)> {
    entries.sort_by(|a, b| a.0.theta.total_cmp(&b.0.theta));
    let mut out: Vec<(DirectionPair, f64)> = Vec::with_capacity(entries.len());
    for (pair, value) in entries {
        match out.last_mut() {
            Some(last) if pair.theta - last.0.theta <= ANGLE_TOL => {
                last.1 = merge(last.1, value);
            }
            _ => out.push((pair, value)),
        }
    }
    if out.len() > 1 {
        let first = out[0].0.theta;
        let last = out[out.len() - 1].0.theta;
        if first + PI - last <= ANGLE_TOL {
            let (_, value) = out.pop().unwrap();
            out[0].1 = merge(out[0].1, value);
        }
    }
    out
}

/// One edge of a polygon, traversed counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolygonEdge {
    /// Index into the polygon's pair list.
    pub pair: usize,
    /// `+1.0` for the outward normal `u(θ)`, `-1.0` for `-u(θ)`.
    pub sign: f64,
    pub from: Point,
    pub to: Point,
}

impl PolygonEdge {
    pub fn normal(&self, pairs: &[DirectionPair]) -> Point {
        let u = pairs[self.pair].unit();
        [self.sign * u[0], self.sign * u[1]]
    }

    pub fn length(&self) -> f64 {
        dist(self.from, self.to)
    }
}

/// Origin-symmetric convex polygon with the origin in its interior.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricPolygon {
    pairs: Vec<DirectionPair>,
    support: Vec<f64>,
    edge_lengths: Vec<f64>,
    /// Counterclockwise; `edges[k].to == vertices[k]`.
    edges: Vec<PolygonEdge>,
    vertices: Vec<Point>,
}

/// The Wulff shape `{x : |⟨x, u(θ_i)⟩| ≤ q_i for all i}`.
///
/// Duplicate directions are merged keeping the smaller value. Facets whose
/// predicted edge length is not positive are discarded while walking the
/// cyclically ordered normals, and the support actually attained by the body
/// is reported for them.
pub fn wulff_shape(pairs: &[DirectionPair], q: &[f64]) -> Result<SymmetricPolygon> {
    if pairs.len() != q.len() {
        return Err(Error::InvalidInput(format!(
            "{} pairs but {} support values",
            pairs.len(),
            q.len()
        )));
    }
    if let Some(bad) = q.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "support values must be positive and finite, got {bad}"
        )));
    }
    let entries = canonicalize(
        pairs.iter().copied().zip(q.iter().copied()).collect(),
        f64::min,
    );
    if entries.len() < 2 {
        return Err(Error::InvalidInput(
            "a Wulff shape needs at least two distinct direction pairs".into(),
        ));
    }
    let m = entries.len();
    let pairs: Vec<DirectionPair> = entries.iter().map(|e| e.0).collect();
    let q: Vec<f64> = entries.iter().map(|e| e.1).collect();

    // Full circle: node i < m is +u(θ_i), node i + m is -u(θ_i).
    let n = 2 * m;
    let angle = |k: usize| pairs[k % m].theta + if k >= m { PI } else { 0.0 };
    let value = |k: usize| q[k % m];
    let gap = |from: usize, to: usize| (angle(to) - angle(from)).rem_euclid(2.0 * PI);

    let mut prev: Vec<usize> = (0..n).map(|k| (k + n - 1) % n).collect();
    let mut next: Vec<usize> = (0..n).map(|k| (k + 1) % n).collect();
    let mut alive = vec![true; m];
    let mut alive_count = m;
    let scale = q.iter().copied().fold(0.0, f64::max);
    let len_tol = 1e-13 * scale;

    let edge_len = |k: usize, prev: &[usize], next: &[usize]| {
        let (p, nx) = (prev[k], next[k]);
        let d1 = gap(p, k);
        let d2 = gap(k, nx);
        let qk = value(k);
        (value(p) - qk * d1.cos()) / d1.sin() + (value(nx) - qk * d2.cos()) / d2.sin()
    };

    let mut work: Vec<usize> = (0..m).rev().collect();
    while let Some(i) = work.pop() {
        if !alive[i] || alive_count <= 2 {
            continue;
        }
        if edge_len(i, &prev, &next) <= len_tol {
            alive[i] = false;
            alive_count -= 1;
            for k in [i, i + m] {
                let (p, nx) = (prev[k], next[k]);
                next[p] = nx;
                prev[nx] = p;
            }
            for k in [prev[i], next[i]] {
                let pi = k % m;
                if alive[pi] && !work.contains(&pi) {
                    work.push(pi);
                }
            }
        }
    }
    if alive_count < 2 {
        return Err(Error::Numeric("Wulff shape collapsed".into()));
    }

    let start = (0..m).find(|&i| alive[i]).unwrap();
    let mut active = Vec::with_capacity(2 * alive_count);
    let mut k = start;
    loop {
        active.push(k);
        k = next[k];
        if k == start {
            break;
        }
    }

    let corner = |a: usize, b: usize| -> Point {
        let (ua, ub) = (unit(angle(a)), unit(angle(b)));
        let det = cross(ua, ub);
        let (qa, qb) = (value(a), value(b));
        [
            (qa * ub[1] - qb * ua[1]) / det,
            (ua[0] * qb - ub[0] * qa) / det,
        ]
    };
    let na = active.len();
    let vertices: Vec<Point> = (0..na)
        .map(|j| corner(active[j], active[(j + 1) % na]))
        .collect();
    let edges: Vec<PolygonEdge> = (0..na)
        .map(|j| PolygonEdge {
            pair: active[j] % m,
            sign: if active[j] >= m { -1.0 } else { 1.0 },
            from: vertices[(j + na - 1) % na],
            to: vertices[j],
        })
        .collect();

    let mut edge_lengths = vec![0.0; m];
    for e in &edges {
        if e.sign > 0.0 {
            edge_lengths[e.pair] = e.length();
        }
    }
    let support = (0..m)
        .map(|i| {
            if alive[i] {
                q[i]
            } else {
                let u = pairs[i].unit();
                vertices.iter().map(|v| dot(*v, u)).fold(f64::MIN, f64::max)
            }
        })
        .collect();

    Ok(SymmetricPolygon {
        pairs,
        support,
        edge_lengths,
        edges,
        vertices,
    })
}

impl SymmetricPolygon {
    /// Axis-aligned box `[-a, a] × [-b, b]`.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        wulff_shape(&uniform_pairs(2, 0.0), &[a, b])
    }

    /// Regular `2m`-gon with the given apothem and a facet normal at angle 0.
    pub fn regular(m_pairs: usize, apothem: f64) -> Result<Self> {
        wulff_shape(&uniform_pairs(m_pairs, 0.0), &vec![apothem; m_pairs])
    }

    pub fn pairs(&self) -> &[DirectionPair] {
        &self.pairs
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }

    pub fn edges(&self) -> &[PolygonEdge] {
        &self.edges
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// `h_P(θ)`: the maximum of `⟨v, u(θ)⟩` over the vertices.
    pub fn support_value(&self, theta: f64) -> f64 {
        let u = unit(theta);
        self.vertices
            .iter()
            .map(|v| dot(*v, u))
            .fold(f64::MIN, f64::max)
    }

    /// `S_P({±u_i}) = 2 · edge_length_i`.
    pub fn surface_area_measure(&self) -> Vec<f64> {
        self.edge_lengths.iter().map(|l| 2.0 * l).collect()
    }

    /// `(1/2) · h_i · S_P({±u_i})`; sums to the area.
    pub fn cone_volume_measure(&self) -> Vec<f64> {
        self.support
            .iter()
            .zip(&self.edge_lengths)
            .map(|(h, l)| h * l)
            .collect()
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|j| cross(self.vertices[j], self.vertices[(j + 1) % n]))
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(PolygonEdge::length).sum()
    }

    /// Largest vertex norm; for a centrally symmetric body this is half the
    /// diameter.
    pub fn circumradius(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v[0].hypot(v[1]))
            .fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.circumradius()
    }

    /// The dilate `cP`.
    pub fn scaled(&self, c: f64) -> SymmetricPolygon {
        let sv = |v: Point| [c * v[0], c * v[1]];
        SymmetricPolygon {
            pairs: self.pairs.clone(),
            support: self.support.iter().map(|h| c * h).collect(),
            edge_lengths: self.edge_lengths.iter().map(|l| c * l).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| PolygonEdge {
                    from: sv(e.from),
                    to: sv(e.to),
                    ..*e
                })
                .collect(),
            vertices: self.vertices.iter().map(|v| sv(*v)).collect(),
        }
    }

    /// Angles (mod π) at which the support functions of polygons are compared:
    /// facet normals, vertex directions and a uniform grid.
    fn evaluation_angles(&self, other: &SymmetricPolygon) -> Vec<f64> {
        let mut angles: Vec<f64> = (0..HAUSDORFF_GRID)
            .map(|k| k as f64 * PI / HAUSDORFF_GRID as f64)
            .collect();
        for p in [self, other] {
            angles.extend(p.pairs.iter().map(|d| d.theta));
            angles.extend(p.vertices.iter().map(|v| v[1].atan2(v[0]).rem_euclid(PI)));
        }
        angles
    }
}

/// `sup_θ |h_P(θ) − h_Q(θ)|` over the evaluation set of both polygons.
pub fn hausdorff_distance(p: &SymmetricPolygon, q: &SymmetricPolygon) -> f64 {
    p.evaluation_angles(q)
        .into_iter()
        .map(|t| (p.support_value(t) - q.support_value(t)).abs())
        .fold(0.0, f64::max)
}

/// Hausdorff distance between `p` and the centered disc of radius `r`.
pub fn hausdorff_to_disc(p: &SymmetricPolygon, r: f64) -> f64 {
    // h_P is extremal at facet normals (minima) and vertex directions (maxima).
    p.evaluation_angles(p)
        .into_iter()
        .map(|t| (p.support_value(t) - r).abs())
        .fold(0.0, f64::max)
}

/// `Q ⊆ P`, decided by comparing support values on the evaluation set.
pub fn contains(p: &SymmetricPolygon, q: &SymmetricPolygon) -> bool {
    let slack = 1e-12 * p.circumradius().max(q.circumradius());
    p.evaluation_angles(q)
        .into_iter()
        .all(|t| q.support_value(t) <= p.support_value(t) + slack)
}

/// A random symmetric polygon with `m ∈ pair_range` stratified directions and
/// support values in `support_range`.
pub fn random_polygon<R: Rng + ?Sized>(
    rng: &mut R,
    pair_range: std::ops::RangeInclusive<usize>,
    support_range: std::ops::Range<f64>,
) -> SymmetricPolygon {
    loop {
        let m = rng.gen_range(pair_range.clone());
        let offset = rng.gen_range(0.0..PI);
        let pairs: Vec<DirectionPair> = (0..m)
            .map(|k| {
                let jitter: f64 = rng.gen_range(0.15..0.85);
                DirectionPair::from_angle(offset + (k as f64 + jitter) * PI / m as f64)
            })
            .collect();
        let q: Vec<f64> = (0..m)
            .map(|_| rng.gen_range(support_range.clone()))
            .collect();
        if let Ok(p) = wulff_shape(&pairs, &q) {
            return p;
        }
    }
}

/// On-disk polygon representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonFile {
    pub dimension: u32,
    pub pairs: Vec<PolygonFileEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Point>>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PolygonFileEntry {
    pub theta: f64,
    pub support: f64,
}

impl From<&SymmetricPolygon> for PolygonFile {
    fn from(p: &SymmetricPolygon) -> Self {
        PolygonFile {
            dimension: 2,
            pairs: p
                .pairs
                .iter()
                .zip(&p.support)
                .map(|(d, h)| PolygonFileEntry {
                    theta: d.theta,
                    support: *h,
                })
                .collect(),
            vertices: Some(p.vertices.clone()),
        }
    }
}

impl Serialize for SymmetricPolygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonFile::from(self).serialize(s)
    }
}

impl PolygonFile {
    /// Builds the Wulff shape of the listed support values. Stored vertices
    /// are ignored.
    pub fn to_polygon(&self) -> Result<SymmetricPolygon> {
        if self.dimension != 2 {
            return Err(Error::Validation(format!(
                "only dimension 2 is supported, got {}",
                self.dimension
            )));
        }
        let pairs = self
            .pairs
            .iter()
            .map(|e| DirectionPair::new(e.theta))
            .collect::<Result<Vec<_>>>()?;
        let q: Vec<f64> = self.pairs.iter().map(|e| e.support).collect();
        wulff_shape(&pairs, &q)
    }
}

pub fn polygon_to_json(p: &SymmetricPolygon) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PolygonFile::from(p))?)
}

pub fn polygon_from_json(text: &str) -> Result<SymmetricPolygon> {
    serde_json::from_str::<PolygonFile>(text)?.to_polygon()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square() -> SymmetricPolygon {
        SymmetricPolygon::rectangle(1.0, 1.0).unwrap()
    }

    #[test]
    fn square_from_two_pairs() {
        let p = square();
        assert_eq!(p.vertices().len(), 4);
        for v in p.vertices() {
            assert_relative_eq!(v[0].abs(), 1.0, epsilon = 1e-14);
            assert_relative_eq!(v[1].abs(), 1.0, epsilon = 1e-14);
        }
        assert_eq!(p.edge_lengths().len(), 2);
        for l in p.edge_lengths() {
            assert_relative_eq!(*l, 2.0, epsilon = 1e-14);
        }
        assert_relative_eq!(p.area(), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn regular_hexagon() {
        let p = wulff_shape(&uniform_pairs(3, 0.0), &[1.0; 3]).unwrap();
        assert_eq!(p.vertices().len(), 6);
        let side = 2.0 / 3f64.sqrt();
        for (h, l) in p.support().iter().zip(p.edge_lengths()) {
            assert_relative_eq!(*h, 1.0, epsilon = 1e-14);
            assert_relative_eq!(*l, side, epsilon = 1e-13);
        }
        let s: f64 = p.surface_area_measure().iter().sum();
        assert_relative_eq!(s, 6.0 * side, epsilon = 1e-12);
        for c in p.cone_volume_measure() {
            assert_relative_eq!(c, 2.0 / 3f64.sqrt(), epsilon = 1e-12);
        }
        assert_relative_eq!(p.area(), 2.0 * 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn ghost_facet_keeps_true_support() {
        let pairs = uniform_pairs(4, 0.0); // 0, π/4, π/2, 3π/4
        let p = wulff_shape(&pairs[..3], &[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_relative_eq!(p.support()[1], 2f64.sqrt(), epsilon = 1e-14);
        assert_eq!(p.edge_lengths()[1], 0.0);
        assert_eq!(p.surface_area_measure()[1], 0.0);
        assert_relative_eq!(p.area(), 4.0, epsilon = 1e-13);
    }

    #[test]
    fn support_values_of_square() {
        let p = square();
        assert_relative_eq!(p.support_value(0.0), 1.0, epsilon = 1e-15);
        assert_relative_eq!(p.support_value(PI / 4.0), 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(p.support_value(PI / 4.0 + PI), 2f64.sqrt(), epsilon = 1e-15);
        let hex = SymmetricPolygon::regular(3, 1.0).unwrap();
        assert_relative_eq!(hex.support_value(PI / 3.0), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn square_measures() {
        let p = square();
        assert_eq!(p.surface_area_measure(), vec![4.0, 4.0]);
        assert_eq!(p.cone_volume_measure(), vec![2.0, 2.0]);
        let q = p.scaled(3.0);
        for (a, b) in q.cone_volume_measure().iter().zip(p.cone_volume_measure()) {
            assert_relative_eq!(*a, 9.0 * b, max_relative = 1e-14);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let pairs = uniform_pairs(2, 0.0);
        assert!(wulff_shape(&pairs, &[1.0, 0.0]).is_err());
        assert!(wulff_shape(&pairs, &[1.0, -1.0]).is_err());
        assert!(wulff_shape(&pairs[..1], &[1.0]).is_err());
        let same = [pairs[0], DirectionPair::from_angle(1e-14)];
        assert!(wulff_shape(&same, &[1.0, 2.0]).is_err());
        assert!(DirectionPair::new(PI).is_err());
        assert!(DirectionPair::new(-0.1).is_err());
    }

    #[test]
    fn duplicate_directions_take_min_support() {
        let pairs = [
            DirectionPair::from_angle(0.0),
            DirectionPair::from_angle(PI / 2.0),
            DirectionPair::from_angle(PI - 1e-13),
        ];
        let p = wulff_shape(&pairs, &[2.0, 1.0, 1.5]).unwrap();
        assert_eq!(p.num_pairs(), 2);
        assert_relative_eq!(p.support()[0], 1.5);
    }

    #[test]
    fn hausdorff_examples() {
        let p = square();
        let q = SymmetricPolygon::rectangle(2.0, 2.0).unwrap();
        assert_eq!(hausdorff_distance(&p, &p), 0.0);
        assert_relative_eq!(hausdorff_distance(&p, &q), 2f64.sqrt(), epsilon = 1e-14);
        let hex = SymmetricPolygon::regular(3, 1.0).unwrap();
        let big = hex.scaled(2.5);
        let hmax = 2.0 / 3f64.sqrt();
        assert_relative_eq!(hausdorff_distance(&hex, &big), 1.5 * hmax, epsilon = 1e-13);
    }

    #[test]
    fn containment() {
        let p = square();
        let hex = SymmetricPolygon::regular(3, 1.0).unwrap();
        assert!(contains(&p, &p.scaled(0.5)));
        // circumradius 2/√3 > 1: a hexagon vertex sticks out of the square
        assert!(!contains(&p, &hex));
        assert!(contains(&p.scaled(1.16), &hex));
        assert!(!contains(&hex, &p));
        let tall = SymmetricPolygon::rectangle(0.5, 3.0).unwrap();
        assert!(!contains(&p, &tall));
    }

    #[test]
    fn wulff_idempotent_and_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_polygon(&mut rng, 2..=12, 0.3..2.0);
            let again = wulff_shape(p.pairs(), p.support()).unwrap();
            for (a, b) in p.support().iter().zip(again.support()) {
                assert!((a - b).abs() <= 1e-10 * a);
            }
            // vertices reproduce the stored support on present facets
            for (i, d) in p.pairs().iter().enumerate() {
                if p.edge_lengths()[i] > 0.0 {
                    let h = p.support_value(d.theta());
                    assert!((h - p.support()[i]).abs() <= 1e-10 * h);
                }
            }
            // central symmetry and counterclockwise convexity
            let n = p.vertices().len();
            assert_eq!(n % 2, 0);
            for j in 0..n / 2 {
                let (a, b) = (p.vertices()[j], p.vertices()[j + n / 2]);
                assert!((a[0] + b[0]).abs() < 1e-12 && (a[1] + b[1]).abs() < 1e-12);
            }
            for j in 0..n {
                let a = p.vertices()[j];
                let b = p.vertices()[(j + 1) % n];
                let c = p.vertices()[(j + 2) % n];
                assert!(cross([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]) > 0.0);
            }
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_polygon(&mut rng, 5..=5, 0.5..1.5);
        let text = polygon_to_json(&p).unwrap();
        let back = polygon_from_json(&text).unwrap();
        assert_eq!(p.support(), back.support());
    }
}
