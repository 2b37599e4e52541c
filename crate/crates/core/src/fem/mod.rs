//! Piecewise-linear finite elements for the torsion problem `−Δu = 1` and the
//! principal Dirichlet eigenpair `−Δv = λ v` on a meshed polygon, with the
//! boundary energies `∫ |∇u|² dH¹` aggregated per direction pair.
//!
//! Boundary gradients are obtained by consistent flux recovery: the residual
//! of the discrete equations at boundary nodes equals `∫ ∂ₙu φⱼ ds`, and
//! solving the boundary mass system for the nodal normal derivative gives a
//! flux that converges at the same order as the energy.

pub mod sparse;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::dist;
use crate::mesh::TriangleMesh;
use sparse::{default_max_iter, dot, norm, solve_cg, CsrMatrix};

/// Relative residual for every linear solve.
pub const CG_TOL: f64 = 1e-10;
/// Outer iteration cap of the inverse power method.
pub const EIGEN_MAX_ITERS: usize = 500;
/// Inverse iteration stops once successive Rayleigh quotients agree to this
/// relative tolerance and the eigen-residual is below [`EIGEN_RESIDUAL_TOL`].
pub const EIGEN_RAYLEIGH_TOL: f64 = 1e-10;
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;
/// Factor by which each inner solve of the inverse iteration reduces the
/// residual of its warm start.
pub const EIGEN_INNER_REDUCTION: f64 = 0.05;
const EIGEN_INNER_FLOOR: f64 = 1e-13;
/// Admissible relative gap between `∫u` and `∫|∇u|²`.
pub const TORSION_DUALITY_TOL: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Problem {
    Torsion,
    Eigen,
}

/// Output of a finite-element solve.
#[derive(Clone, Debug, Serialize)]
pub struct BoundarySolution {
    pub problem: Problem,
    /// Nodal values; zero on boundary nodes.
    pub field: Vec<f64>,
    /// `τ` (torsion) or `λ₁` (eigen).
    pub functional_value: f64,
    /// Per direction pair: `∫ |∇field|² dH¹` over both antipodal edges.
    pub edge_energy: Vec<f64>,
    pub mesh_h: f64,
    /// `∫ u dx` (torsion) or `∫ v² dx` (eigen).
    pub integral: f64,
    /// `∫ |∇field|² dx`.
    pub dirichlet_energy: f64,
    /// Eigen: `‖Kv − λMv‖ / ‖Mv‖` on the interior system. Torsion: final CG
    /// residual.
    pub residual: f64,
    pub iterations: usize,
}

struct Assembly {
    stiffness: CsrMatrix,
    mass: CsrMatrix,
    load: Vec<f64>,
    /// Node → interior unknown, `usize::MAX` on the boundary.
    dof: Vec<usize>,
    interior: Vec<usize>,
}

fn assemble(mesh: &TriangleMesh) -> Result<Assembly> {
    let n = mesh.num_nodes();
    let mut k_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut m_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut load = vec![0.0; n];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let area = mesh.signed_area(t);
        if !(area > 0.0) {
            return Err(Error::InvalidInput(format!(
                "triangle {t} has nonpositive area {area}"
            )));
        }
        let p = tri.map(|i| mesh.points[i]);
        // edge opposite to local vertex i
        let e: [[f64; 2]; 3] = std::array::from_fn(|i| {
            let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
            [b[0] - a[0], b[1] - a[1]]
        });
        for i in 0..3 {
            load[tri[i]] += area / 3.0;
            for j in 0..3 {
                let kij = (e[i][0] * e[j][0] + e[i][1] * e[j][1]) / (4.0 * area);
                let mij = area / 12.0 * if i == j { 2.0 } else { 1.0 };
                k_trip.push((tri[i], tri[j], kij));
                m_trip.push((tri[i], tri[j], mij));
            }
        }
    }
    let mut dof = vec![usize::MAX; n];
    let mut interior = Vec::new();
    for i in 0..n {
        if !mesh.on_boundary[i] {
            dof[i] = interior.len();
            interior.push(i);
        }
    }
    Ok(Assembly {
        stiffness: CsrMatrix::from_triplets(n, k_trip),
        mass: CsrMatrix::from_triplets(n, m_trip),
        load,
        dof,
        interior,
    })
}

fn scatter(interior: &[usize], values: &[f64], n: usize) -> Vec<f64> {
    let mut full = vec![0.0; n];
    for (k, &node) in interior.iter().enumerate() {
        full[node] = values[k];
    }
    full
}

/// `∫ |∇f|² dx`, summed per triangle from the piecewise-constant gradient.
pub fn dirichlet_energy(mesh: &TriangleMesh, field: &[f64]) -> f64 {
    (0..mesh.triangles.len())
        .map(|t| {
            let g = triangle_gradient(mesh, t, field);
            (g[0] * g[0] + g[1] * g[1]) * mesh.signed_area(t)
        })
        .sum()
}

/// Gradient of the P1 interpolant of `field` on triangle `t`.
pub fn triangle_gradient(mesh: &TriangleMesh, t: usize, field: &[f64]) -> [f64; 2] {
    let tri = mesh.triangles[t];
    let p = tri.map(|i| mesh.points[i]);
    let two_a = 2.0 * mesh.signed_area(t);
    let mut g = [0.0; 2];
    for i in 0..3 {
        let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        // ∇λ_i is the opposite edge b − a turned by +90°, over 2A
        let grad_lambda = [(a[1] - b[1]) / two_a, (b[0] - a[0]) / two_a];
        g[0] += field[tri[i]] * grad_lambda[0];
        g[1] += field[tri[i]] * grad_lambda[1];
    }
    g
}

/// Solves `−Δu = 1`, `u = 0` on the boundary.
pub fn solve_torsion(mesh: &TriangleMesh) -> Result<BoundarySolution> {
    let asm = assemble(mesh)?;
    let m = asm.interior.len();
    if m == 0 {
        return Err(Error::InvalidInput("mesh has no interior nodes".into()));
    }
    let k_ii = asm.stiffness.restrict(&asm.dof, m);
    let b: Vec<f64> = asm.interior.iter().map(|&i| asm.load[i]).collect();
    let mut x = vec![0.0; m];
    let stats = solve_cg(&k_ii, &b, &mut x, CG_TOL, default_max_iter(m))?;
    let field = scatter(&asm.interior, &x, mesh.num_nodes());

    let integral = dot(&asm.load, &field);
    let energy = dirichlet_energy(mesh, &field);
    let gap = (integral - energy).abs() / integral;
    if gap > TORSION_DUALITY_TOL {
        return Err(Error::Accuracy(format!(
            "∫u = {integral:.6e} and ∫|∇u|² = {energy:.6e} differ by {:.2}%; use a smaller mesh size",
            100.0 * gap
        )));
    }
    let mut sol = BoundarySolution {
        problem: Problem::Torsion,
        field,
        functional_value: integral,
        edge_energy: Vec::new(),
        mesh_h: mesh.max_edge_length(),
        integral,
        dirichlet_energy: energy,
        residual: stats.relative_residual,
        iterations: stats.iterations,
    };
    sol.edge_energy = boundary_energies(mesh, &asm, &sol)?;
    Ok(sol)
}

/// Smallest eigenpair of the Dirichlet Laplacian by inverse power iteration.
pub fn solve_eigen(mesh: &TriangleMesh) -> Result<BoundarySolution> {
    solve_eigen_from(mesh, None)
}

/// As [`solve_eigen`], starting the iteration from `guess` (nodal values on
/// the same mesh) when given.
pub fn solve_eigen_from(mesh: &TriangleMesh, guess: Option<&[f64]>) -> Result<BoundarySolution> {
    let asm = assemble(mesh)?;
    let m = asm.interior.len();
    if m == 0 {
        return Err(Error::InvalidInput("mesh has no interior nodes".into()));
    }
    let k_ii = asm.stiffness.restrict(&asm.dof, m);
    let m_ii = asm.mass.restrict(&asm.dof, m);
    let max_cg = default_max_iter(m);

    let mut v: Vec<f64> = match guess {
        Some(g) if g.len() == mesh.num_nodes() => asm.interior.iter().map(|&i| g[i]).collect(),
        _ => vec![1.0; m],
    };
    let mv = m_ii.mul(&v);
    let s = dot(&v, &mv).sqrt();
    if !(s > 0.0) {
        return Err(Error::InvalidInput("eigen start vector is zero".into()));
    }
    v.iter_mut().for_each(|x| *x /= s);
    let mut mv: Vec<f64> = m_ii.mul(&v);
    let mut kv = k_ii.mul(&v);
    let mut lambda = dot(&v, &kv);
    let mut x: Vec<f64> = v.iter().map(|vi| vi / lambda).collect();
    let r0: Vec<f64> = (0..m).map(|i| kv[i] - lambda * mv[i]).collect();
    let mut residual = norm(&r0) / norm(&mv);

    // Inner solves only need to shrink the residual of the warm start
    // x = v/λ, which is (eigen residual)/λ relative, by a fixed factor; the
    // stopping test below is evaluated exactly on v.
    let mut inner_tol = (EIGEN_INNER_REDUCTION * residual / lambda).clamp(EIGEN_INNER_FLOOR, 1e-2);
    for it in 1..=EIGEN_MAX_ITERS {
        solve_cg(&k_ii, &mv, &mut x, inner_tol, max_cg)?;
        let mx = m_ii.mul(&x);
        let s = dot(&x, &mx).sqrt();
        for i in 0..m {
            v[i] = x[i] / s;
            mv[i] = mx[i] / s;
        }
        k_ii.mul_into(&v, &mut kv);
        let next = dot(&v, &kv);
        let r: Vec<f64> = (0..m).map(|i| kv[i] - next * mv[i]).collect();
        residual = norm(&r) / norm(&mv);
        let change = (next - lambda).abs() / next;
        lambda = next;
        inner_tol = (EIGEN_INNER_REDUCTION * residual / lambda).clamp(EIGEN_INNER_FLOOR, 1e-2);
        // warm start for the next solve: K⁻¹ M v ≈ v / λ
        for i in 0..m {
            x[i] = v[i] / lambda;
        }
        if change <= EIGEN_RAYLEIGH_TOL && residual <= EIGEN_RESIDUAL_TOL {
            if v.iter().sum::<f64>() < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            let field = scatter(&asm.interior, &v, mesh.num_nodes());
            let mut sol = BoundarySolution {
                problem: Problem::Eigen,
                integral: dot(&field, &asm.mass.mul(&field)),
                dirichlet_energy: dirichlet_energy(mesh, &field),
                field,
                functional_value: lambda,
                edge_energy: Vec::new(),
                mesh_h: mesh.max_edge_length(),
                residual,
                iterations: it,
            };
            sol.edge_energy = boundary_energies(mesh, &asm, &sol)?;
            return Ok(sol);
        }
    }
    Err(Error::Numeric(format!(
        "inverse iteration did not converge in {EIGEN_MAX_ITERS} iterations (λ = {lambda:.8}, residual {residual:.3e})"
    )))
}

/// Per-pair boundary energy `∫ |∂ₙ field|² dH¹` of a solution on `mesh`.
pub fn edge_energies(mesh: &TriangleMesh, sol: &BoundarySolution) -> Result<Vec<f64>> {
    let asm = assemble(mesh)?;
    boundary_energies(mesh, &asm, sol)
}

fn boundary_energies(
    mesh: &TriangleMesh,
    asm: &Assembly,
    sol: &BoundarySolution,
) -> Result<Vec<f64>> {
    // residual of the full system at boundary rows: ∫ ∂ₙu φⱼ ds
    let mut residual = asm.stiffness.mul(&sol.field);
    match sol.problem {
        Problem::Torsion => {
            for (r, b) in residual.iter_mut().zip(&asm.load) {
                *r -= b;
            }
        }
        Problem::Eigen => {
            let mv = asm.mass.mul(&sol.field);
            for (r, m) in residual.iter_mut().zip(&mv) {
                *r -= sol.functional_value * m;
            }
        }
    }

    let n = mesh.num_nodes();
    let mut bdof = vec![usize::MAX; n];
    let mut bnodes = Vec::new();
    for s in &mesh.boundary {
        for v in s.nodes {
            if bdof[v] == usize::MAX {
                bdof[v] = bnodes.len();
                bnodes.push(v);
            }
        }
    }
    let nb = bnodes.len();
    let mut trip = Vec::with_capacity(4 * mesh.boundary.len());
    for s in &mesh.boundary {
        let len = dist(mesh.points[s.nodes[0]], mesh.points[s.nodes[1]]);
        let [a, b] = s.nodes.map(|v| bdof[v]);
        trip.extend([
            (a, a, len / 3.0),
            (b, b, len / 3.0),
            (a, b, len / 6.0),
            (b, a, len / 6.0),
        ]);
    }
    let boundary_mass = CsrMatrix::from_triplets(nb, trip);
    let rhs: Vec<f64> = bnodes.iter().map(|&v| residual[v]).collect();
    let mut flux = vec![0.0; nb];
    solve_cg(&boundary_mass, &rhs, &mut flux, 1e-13, default_max_iter(nb))?;

    let mut energy = vec![0.0; mesh.num_pairs];
    for s in &mesh.boundary {
        let len = dist(mesh.points[s.nodes[0]], mesh.points[s.nodes[1]]);
        let [a, b] = s.nodes.map(|v| flux[bdof[v]]);
        energy[s.pair] += len * (a * a + a * b + b * b) / 3.0;
    }
    Ok(energy)
}

/// Boundary energies from the full P1 gradient on the triangle owning each
/// boundary segment. First-order accurate; kept for comparison.
pub fn owning_triangle_energies(mesh: &TriangleMesh, field: &[f64]) -> Vec<f64> {
    let mut energy = vec![0.0; mesh.num_pairs];
    for s in &mesh.boundary {
        let g = triangle_gradient(mesh, s.triangle, field);
        let len = dist(mesh.points[s.nodes[0]], mesh.points[s.nodes[1]]);
        energy[s.pair] += (g[0] * g[0] + g[1] * g[1]) * len;
    }
    energy
}

/// `‖Kv − λMv‖ / ‖Mv‖` on interior nodes for an eigen solution.
pub fn eigen_residual(mesh: &TriangleMesh, sol: &BoundarySolution) -> Result<f64> {
    let asm = assemble(mesh)?;
    let m = asm.interior.len();
    let k_ii = asm.stiffness.restrict(&asm.dof, m);
    let m_ii = asm.mass.restrict(&asm.dof, m);
    let v: Vec<f64> = asm.interior.iter().map(|&i| sol.field[i]).collect();
    let kv = k_ii.mul(&v);
    let mv = m_ii.mul(&v);
    let r: Vec<f64> = (0..m)
        .map(|i| kv[i] - sol.functional_value * mv[i])
        .collect();
    Ok(norm(&r) / norm(&mv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SymmetricPolygon;
    use crate::mesh::triangulate;
    use std::f64::consts::PI;

    #[test]
    fn gradient_of_linear_field_is_exact() {
        let p = SymmetricPolygon::regular(4, 1.0).unwrap();
        let mesh = triangulate(&p, 0.3).unwrap();
        let field: Vec<f64> = mesh
            .points
            .iter()
            .map(|x| 2.0 * x[0] - 3.0 * x[1])
            .collect();
        for t in 0..mesh.triangles.len() {
            let g = triangle_gradient(&mesh, t, &field);
            assert!((g[0] - 2.0).abs() < 1e-10 && (g[1] + 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn torsion_field_is_positive_inside_and_zero_on_boundary() {
        let p = SymmetricPolygon::rectangle(1.0, 0.7).unwrap();
        let mesh = triangulate(&p, 0.1).unwrap();
        let sol = solve_torsion(&mesh).unwrap();
        for (i, u) in sol.field.iter().enumerate() {
            if mesh.on_boundary[i] {
                assert_eq!(*u, 0.0);
            } else {
                assert!(*u > 0.0);
            }
        }
        assert!((sol.integral - sol.dirichlet_energy).abs() <= 1e-8 * sol.integral);
    }

    #[test]
    fn eigen_is_normalized_and_converged() {
        let p = SymmetricPolygon::regular(3, 1.0).unwrap();
        let mesh = triangulate(&p, 0.1).unwrap();
        let sol = solve_eigen(&mesh).unwrap();
        assert!((sol.integral - 1.0).abs() < 1e-8);
        assert!(eigen_residual(&mesh, &sol).unwrap() <= 1e-8);
        assert!(sol.field.iter().all(|v| *v >= -1e-12));
        assert!((sol.dirichlet_energy - sol.functional_value).abs() < 1e-8 * sol.functional_value);
    }

    #[test]
    fn disc_boundary_energy_beats_owning_triangle_gradient() {
        let p = SymmetricPolygon::regular(64, 1.0).unwrap();
        let mesh = triangulate(&p, 0.06).unwrap();
        let sol = solve_torsion(&mesh).unwrap();
        // disc value 4τ = π/2; the 128-gon differs at order 1e-4
        let exact = PI / 2.0;
        let recovered: f64 = sol.edge_energy.iter().sum();
        let owning: f64 = owning_triangle_energies(&mesh, &sol.field).iter().sum();
        assert!((recovered - exact).abs() < (owning - exact).abs());
    }

    #[test]
    fn empty_interior_is_rejected() {
        let p = SymmetricPolygon::rectangle(1.0, 1.0).unwrap();
        let mesh = crate::mesh::triangulate_with(
            &p,
            &crate::mesh::MeshTemplate {
                rings: 1,
                divisions: vec![1, 1],
            },
        )
        .unwrap();
        // only the origin is interior; the single-unknown system is still valid
        assert!(solve_torsion(&mesh).is_ok());
    }
}
