//! Conforming triangle meshes of symmetric convex polygons.
//!
//! The polygon is fanned from the origin into one wedge per edge. Each wedge
//! is cut into bands by `rings` scaled copies of the polygon boundary, and each
//! band is zipped into triangles. The topology depends only on integer counts
//! (a [`MeshTemplate`]), so node positions move smoothly when the polygon is
//! perturbed with the template held fixed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{cross, dist, Point, SymmetricPolygon};

/// Default cap on mesh nodes.
pub const NODE_BUDGET: usize = 2_000_000;

/// Integer resolution of a mesh: number of rings and boundary divisions per
/// direction pair (applied to both antipodal edges).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeshTemplate {
    pub rings: usize,
    pub divisions: Vec<usize>,
}

/// A boundary segment with the polygon edge it lies on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundarySegment {
    pub nodes: [usize; 2],
    pub pair: usize,
    pub sign: f64,
    /// The unique triangle having this segment as an edge.
    pub triangle: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleMesh {
    pub points: Vec<Point>,
    /// Counterclockwise index triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<BoundarySegment>,
    pub on_boundary: Vec<bool>,
    pub num_pairs: usize,
}

fn pow2_at_least(x: f64) -> usize {
    if x <= 1.0 {
        1
    } else {
        (x.ceil() as usize).next_power_of_two()
    }
}

impl MeshTemplate {
    /// Resolution for which every triangle edge of the mesh of `p` is at most
    /// `h_max`. Boundary divisions are powers of two.
    pub fn for_polygon(p: &SymmetricPolygon, h_max: f64) -> Result<Self> {
        if !(h_max.is_finite() && h_max > 0.0) {
            return Err(Error::InvalidInput(format!(
                "h_max must be positive, got {h_max}"
            )));
        }
        let target = h_max / std::f64::consts::SQRT_2;
        let divisions = p
            .edge_lengths()
            .iter()
            .map(|l| pow2_at_least(l / target))
            .collect();
        let mut template = MeshTemplate {
            rings: ((p.circumradius() / target).ceil() as usize).max(1),
            divisions,
        };
        loop {
            template.check_budget(p, NODE_BUDGET)?;
            let mesh = triangulate_with(p, &template)?;
            if mesh.max_edge_length() <= h_max * (1.0 + 1e-12) {
                return Ok(template);
            }
            template.rings += (template.rings / 8).max(1);
        }
    }

    /// Number of boundary segments on the edge at parameter `ring` of wedge
    /// `pair` (ring 0 is the origin).
    fn ring_divisions(&self, pair: usize, ring: usize) -> usize {
        let n = self.divisions[pair];
        ((n * ring).div_ceil(self.rings)).max(1)
    }

    pub fn node_count(&self, p: &SymmetricPolygon) -> usize {
        1 + (1..=self.rings)
            .map(|r| {
                p.edges()
                    .iter()
                    .map(|e| self.ring_divisions(e.pair, r))
                    .sum::<usize>()
            })
            .sum::<usize>()
    }

    fn check_budget(&self, p: &SymmetricPolygon, budget: usize) -> Result<()> {
        let nodes = self.node_count(p);
        if nodes > budget {
            return Err(Error::Resource(format!(
                "mesh would have {nodes} nodes, budget is {budget}"
            )));
        }
        Ok(())
    }
}

/// Mesh of `p` with all triangle edges at most `h_max`.
pub fn triangulate(p: &SymmetricPolygon, h_max: f64) -> Result<TriangleMesh> {
    let template = MeshTemplate::for_polygon(p, h_max)?;
    triangulate_with(p, &template)
}

/// Mesh of `p` with a fixed resolution.
pub fn triangulate_with(p: &SymmetricPolygon, template: &MeshTemplate) -> Result<TriangleMesh> {
    if template.divisions.len() != p.num_pairs() || template.rings == 0 {
        return Err(Error::InvalidInput(format!(
            "mesh template for {} pairs used on a polygon with {}",
            template.divisions.len(),
            p.num_pairs()
        )));
    }
    template.check_budget(p, NODE_BUDGET)?;
    let edges = p.edges();
    let ne = edges.len();
    let rings = template.rings;

    let mut points: Vec<Point> = vec![[0.0, 0.0]];
    let mut on_boundary = vec![false];
    // ring_nodes[r][j]: node ids along edge j at ring r, from its start vertex
    // to its end vertex. Vertex nodes are shared with the neighbouring wedge.
    let mut ring_nodes: Vec<Vec<Vec<usize>>> = vec![vec![vec![0]; ne]];
    for r in 1..=rings {
        let s = r as f64 / rings as f64;
        let boundary = r == rings;
        // vertex nodes: vertex j is the end of edge j
        let vertex_ids: Vec<usize> = (0..ne)
            .map(|j| {
                let v = edges[j].to;
                points.push([s * v[0], s * v[1]]);
                on_boundary.push(boundary);
                points.len() - 1
            })
            .collect();
        let mut per_edge = Vec::with_capacity(ne);
        for (j, e) in edges.iter().enumerate() {
            let c = template.ring_divisions(e.pair, r);
            let mut ids = Vec::with_capacity(c + 1);
            ids.push(vertex_ids[(j + ne - 1) % ne]);
            for a in 1..c {
                let f = a as f64 / c as f64;
                points.push([
                    s * (e.from[0] + f * (e.to[0] - e.from[0])),
                    s * (e.from[1] + f * (e.to[1] - e.from[1])),
                ]);
                on_boundary.push(boundary);
                ids.push(points.len() - 1);
            }
            ids.push(vertex_ids[j]);
            per_edge.push(ids);
        }
        ring_nodes.push(per_edge);
    }

    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut boundary = Vec::new();
    for (j, e) in edges.iter().enumerate() {
        for r in 0..rings {
            let inner = &ring_nodes[r][j];
            let outer = &ring_nodes[r + 1][j];
            let last_band = r + 1 == rings;
            let mut push_outer = |tri: [usize; 3], k: usize, triangles: &mut Vec<[usize; 3]>| {
                triangles.push(tri);
                if last_band {
                    boundary.push(BoundarySegment {
                        nodes: [outer[k], outer[k + 1]],
                        pair: e.pair,
                        sign: e.sign,
                        triangle: triangles.len() - 1,
                    });
                }
            };
            if r == 0 {
                for k in 0..outer.len() - 1 {
                    push_outer([0, outer[k], outer[k + 1]], k, &mut triangles);
                }
                continue;
            }
            let (a, b) = (inner.len() - 1, outer.len() - 1);
            let (mut i, mut k) = (0, 0);
            while i < a || k < b {
                let advance_inner = if i == a {
                    false
                } else if k == b {
                    true
                } else {
                    (i + 1) * b < (k + 1) * a
                };
                if advance_inner {
                    triangles.push([inner[i], outer[k], inner[i + 1]]);
                    i += 1;
                } else {
                    push_outer([inner[i], outer[k], outer[k + 1]], k, &mut triangles);
                    k += 1;
                }
            }
        }
    }

    Ok(TriangleMesh {
        points,
        triangles,
        boundary,
        on_boundary,
        num_pairs: p.num_pairs(),
    })
}

impl TriangleMesh {
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.points[i]);
        0.5 * cross([b[0] - a[0], b[1] - a[1]], [c[0] - a[0], c[1] - a[1]])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| {
                let p = t.map(|i| self.points[i]);
                [dist(p[0], p[1]), dist(p[1], p[2]), dist(p[2], p[0])]
            })
            .fold(0.0, f64::max)
    }

    pub fn num_nodes(&self) -> usize {
        self.points.len()
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary
            .iter()
            .map(|s| dist(self.points[s.nodes[0]], self.points[s.nodes[1]]))
            .sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::random_polygon;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn assert_valid(p: &SymmetricPolygon, m: &TriangleMesh) {
        for t in 0..m.triangles.len() {
            assert!(m.signed_area(t) > 0.0, "triangle {t} not positive");
        }
        let area = p.area();
        assert!((m.area() - area).abs() <= 1e-10 * area);
        assert!((m.boundary_length() - p.perimeter()).abs() <= 1e-10 * p.perimeter());

        // conformity: interior edges are shared by exactly two triangles,
        // boundary edges by exactly one
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &m.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut boundary_keys: Vec<_> = m
            .boundary
            .iter()
            .map(|s| (s.nodes[0].min(s.nodes[1]), s.nodes[0].max(s.nodes[1])))
            .collect();
        boundary_keys.sort();
        let mut singles: Vec<_> = count
            .iter()
            .filter(|(_, c)| **c == 1)
            .map(|(k, _)| *k)
            .collect();
        singles.sort();
        assert_eq!(singles, boundary_keys);
        assert!(count.values().all(|c| *c <= 2));

        // boundary segments lie on their polygon edge, covering it exactly
        let mut covered = vec![0.0; p.num_pairs()];
        for s in &m.boundary {
            let e = p
                .edges()
                .iter()
                .find(|e| e.pair == s.pair && e.sign == s.sign)
                .unwrap();
            let n = e.normal(p.pairs());
            let h = p.support()[s.pair];
            for node in s.nodes {
                let x = m.points[node];
                assert!((x[0] * n[0] + x[1] * n[1] - h).abs() <= 1e-10);
                assert!(m.on_boundary[node]);
            }
            let tri = m.triangles[s.triangle];
            assert!(s.nodes.iter().all(|v| tri.contains(v)));
            covered[s.pair] += dist(m.points[s.nodes[0]], m.points[s.nodes[1]]);
        }
        for (c, l) in covered.iter().zip(p.edge_lengths()) {
            assert!((c - 2.0 * l).abs() <= 1e-10 * (1.0 + l));
        }
    }

    #[test]
    fn square_coarse_is_a_fan() {
        let p = SymmetricPolygon::rectangle(1.0, 1.0).unwrap();
        let template = MeshTemplate {
            rings: 1,
            divisions: vec![1, 1],
        };
        let m = triangulate_with(&p, &template).unwrap();
        assert_eq!(m.triangles.len(), 4);
        assert!((m.area() - 4.0).abs() < 1e-14);
        assert_valid(&p, &m);
    }

    #[test]
    fn square_respects_max_edge() {
        let p = SymmetricPolygon::rectangle(1.0, 1.0).unwrap();
        for h in [2.0, 1.0, 0.3, 0.1] {
            let m = triangulate(&p, h).unwrap();
            assert!(m.max_edge_length() <= h * (1.0 + 1e-12));
            assert_valid(&p, &m);
        }
    }

    #[test]
    fn regular_64_gon_area() {
        let p = SymmetricPolygon::regular(32, 1.0).unwrap();
        let m = triangulate(&p, 0.05).unwrap();
        let exact = 64.0 * (std::f64::consts::PI / 64.0).tan();
        assert!((m.area() - exact).abs() <= 1e-10 * exact);
        assert!((exact - 3.14412).abs() < 1e-5);
        assert!(m.max_edge_length() <= 0.05 * (1.0 + 1e-12));
        assert_valid(&p, &m);
    }

    #[test]
    fn random_polygons_are_meshed_validly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let p = random_polygon(&mut rng, 2..=9, 0.5..1.5);
            let h = 0.1 * p.diameter();
            let m = triangulate(&p, h).unwrap();
            assert!(m.max_edge_length() <= h * (1.0 + 1e-12));
            assert_valid(&p, &m);
        }
    }

    #[test]
    fn halving_h_doubles_boundary_segments() {
        let p = SymmetricPolygon::regular(5, 1.0).unwrap();
        let min_edge = p.edge_lengths().iter().copied().fold(f64::MAX, f64::min);
        let mut h = min_edge;
        let mut prev = triangulate(&p, h).unwrap();
        for _ in 0..3 {
            h /= 2.0;
            let m = triangulate(&p, h).unwrap();
            assert!(m.boundary.len() >= 2 * prev.boundary.len());
            assert!((m.area() - prev.area()).abs() <= 1e-12 * p.area());
            prev = m;
        }
    }

    #[test]
    fn deterministic() {
        let p = SymmetricPolygon::regular(7, 1.3).unwrap();
        let a = triangulate(&p, 0.07).unwrap();
        let b = triangulate(&p, 0.07).unwrap();
        assert_eq!(a.triangles, b.triangles);
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn budget_is_enforced() {
        let p = SymmetricPolygon::rectangle(1.0, 1.0).unwrap();
        assert!(matches!(triangulate(&p, 1e-4), Err(Error::Resource(_))));
    }

    #[test]
    fn template_mismatch_is_rejected() {
        let p = SymmetricPolygon::rectangle(1.0, 1.0).unwrap();
        let template = MeshTemplate {
            rings: 2,
            divisions: vec![1, 1, 1],
        };
        assert!(triangulate_with(&p, &template).is_err());
    }
}
