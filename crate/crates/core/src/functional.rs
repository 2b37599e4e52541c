//! α-homogeneous functionals of convex bodies that carry a boundary density.
//!
//! Each functional `F` comes with a density `φ_K` on `∂K` whose pushforward
//! under the Gauss map is the surface density measure `S^φ_K`, and satisfies
//!
//! * `F(K) = (1/|α|) ∫ h_K dS^φ_K` (the variational measure `V_{F,K}` has total
//!   mass `F(K)`),
//! * `d/dt F([h_K e^{tf}])|₀ = sgn(α) ∫ f h_K dS^φ_K`.
//!
//! Instances: volume (`φ ≡ 1`, `α = 2`), torsional rigidity (`φ = |∇u_K|²`,
//! `α = 4`) and the principal Dirichlet eigenvalue (`φ = |∇v_K|²`, `α = −2`).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::{self, BoundarySolution};
use crate::geometry::{DirectionPair, SymmetricPolygon};
use crate::mesh::{triangulate_with, MeshTemplate, TriangleMesh};

/// First positive zero of the Bessel function `J₀`.
pub const BESSEL_J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Default mesh size relative to half the diameter.
pub const DEFAULT_MESH_FACTOR: f64 = 0.03;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalKind {
    Volume,
    Torsion,
    Eigenvalue,
}

impl FunctionalKind {
    pub fn name(self) -> &'static str {
        match self {
            FunctionalKind::Volume => "volume",
            FunctionalKind::Torsion => "torsion",
            FunctionalKind::Eigenvalue => "eigenvalue",
        }
    }

    /// Homogeneity degree in the plane.
    pub fn alpha(self) -> f64 {
        match self {
            FunctionalKind::Volume => 2.0,
            FunctionalKind::Torsion => 4.0,
            FunctionalKind::Eigenvalue => -2.0,
        }
    }

    /// Value on the unit disc.
    pub fn ball_value(self) -> f64 {
        match self {
            FunctionalKind::Volume => PI,
            FunctionalKind::Torsion => PI / 8.0,
            FunctionalKind::Eigenvalue => BESSEL_J0_FIRST_ZERO * BESSEL_J0_FIRST_ZERO,
        }
    }

    /// Tolerance of the representation `Σ V_i = F` at default resolution.
    pub fn representation_tolerance(self) -> f64 {
        match self {
            FunctionalKind::Volume => 1e-10,
            _ => 2e-2,
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "volume" => Ok(FunctionalKind::Volume),
            "torsion" => Ok(FunctionalKind::Torsion),
            "eigenvalue" => Ok(FunctionalKind::Eigenvalue),
            other => Err(Error::InvalidInput(format!(
                "unknown functional {other:?}; expected volume, torsion or eigenvalue"
            ))),
        }
    }
}

/// How a polygon is meshed for the PDE functionals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Resolution {
    /// `h_max = factor × diameter / 2`.
    Relative(f64),
    /// Fixed `h_max`.
    Absolute(f64),
    /// Fixed integer resolution: the mesh topology does not change with the
    /// shape as long as the same facets are present.
    Template(MeshTemplate),
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::Relative(DEFAULT_MESH_FACTOR)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalDescriptor {
    pub kind: FunctionalKind,
    pub resolution: Resolution,
}

/// Value and per-pair surface density of a functional on one polygon.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub value: f64,
    /// `S^φ_P({±u_i})`.
    pub density: Vec<f64>,
    pub support: Vec<f64>,
    /// Finite-element solution, if one was computed.
    pub solution: Option<BoundarySolution>,
}

impl Analysis {
    /// `V_i = (1/|α|) h_i S^φ_P({±u_i})`.
    pub fn variational_masses(&self, alpha: f64) -> Vec<f64> {
        self.support
            .iter()
            .zip(&self.density)
            .map(|(h, s)| h * s / alpha.abs())
            .collect()
    }
}

/// `V_{F,K}` on the pairs of `K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariationalMeasure {
    pub pairs: Vec<DirectionPair>,
    pub mass: Vec<f64>,
    pub total: f64,
}

impl FunctionalDescriptor {
    pub fn new(kind: FunctionalKind) -> Self {
        Self {
            kind,
            resolution: Resolution::default(),
        }
    }

    pub fn with_resolution(kind: FunctionalKind, resolution: Resolution) -> Self {
        Self { kind, resolution }
    }

    pub fn volume() -> Self {
        Self::new(FunctionalKind::Volume)
    }

    pub fn torsion() -> Self {
        Self::new(FunctionalKind::Torsion)
    }

    pub fn eigenvalue() -> Self {
        Self::new(FunctionalKind::Eigenvalue)
    }

    pub fn alpha(&self) -> f64 {
        self.kind.alpha()
    }

    pub fn sign(&self) -> f64 {
        self.alpha().signum()
    }

    pub fn ball_value(&self) -> f64 {
        self.kind.ball_value()
    }

    pub fn needs_mesh(&self) -> bool {
        self.kind != FunctionalKind::Volume
    }

    /// The same functional with the mesh resolution of `p` frozen, so that
    /// nearby polygons with the same facets are meshed with identical topology.
    pub fn frozen_at(&self, p: &SymmetricPolygon) -> Result<Self> {
        let template = match &self.resolution {
            Resolution::Template(t) => t.clone(),
            _ if !self.needs_mesh() => {
                return Ok(self.clone());
            }
            _ => MeshTemplate::for_polygon(p, self.mesh_size(p))?,
        };
        Ok(Self::with_resolution(
            self.kind,
            Resolution::Template(template),
        ))
    }

    fn mesh_size(&self, p: &SymmetricPolygon) -> f64 {
        match &self.resolution {
            Resolution::Relative(f) => f * p.circumradius(),
            Resolution::Absolute(h) => *h,
            Resolution::Template(_) => f64::NAN,
        }
    }

    pub fn mesh(&self, p: &SymmetricPolygon) -> Result<TriangleMesh> {
        let template = match &self.resolution {
            Resolution::Template(t) => t.clone(),
            _ => MeshTemplate::for_polygon(p, self.mesh_size(p))?,
        };
        triangulate_with(p, &template)
    }

    pub fn analyze(&self, p: &SymmetricPolygon) -> Result<Analysis> {
        self.analyze_seeded(p, None)
    }

    /// As [`analyze`](Self::analyze); `seed` is a previous eigenfunction on a
    /// mesh of the same topology, used as the starting vector.
    pub fn analyze_seeded(&self, p: &SymmetricPolygon, seed: Option<&[f64]>) -> Result<Analysis> {
        let support = p.support().to_vec();
        match self.kind {
            FunctionalKind::Volume => Ok(Analysis {
                value: p.area(),
                density: p.surface_area_measure(),
                support,
                solution: None,
            }),
            FunctionalKind::Torsion | FunctionalKind::Eigenvalue => {
                let mesh = self.mesh(p)?;
                let sol = if self.kind == FunctionalKind::Torsion {
                    fem::solve_torsion(&mesh)?
                } else {
                    fem::solve_eigen_from(&mesh, seed)?
                };
                Ok(Analysis {
                    value: sol.functional_value,
                    density: sol.edge_energy.clone(),
                    support,
                    solution: Some(sol),
                })
            }
        }
    }

    pub fn evaluate(&self, p: &SymmetricPolygon) -> Result<f64> {
        if self.kind == FunctionalKind::Volume {
            return Ok(p.area());
        }
        Ok(self.analyze(p)?.value)
    }

    pub fn surface_density(&self, p: &SymmetricPolygon) -> Result<Vec<f64>> {
        Ok(self.analyze(p)?.density)
    }

    pub fn variational_measure(&self, p: &SymmetricPolygon) -> Result<VariationalMeasure> {
        let a = self.analyze(p)?;
        Ok(self.variational_from(p, &a))
    }

    pub fn variational_from(&self, p: &SymmetricPolygon, a: &Analysis) -> VariationalMeasure {
        let mass = a.variational_masses(self.alpha());
        VariationalMeasure {
            pairs: p.pairs().to_vec(),
            total: mass.iter().sum(),
            mass,
        }
    }

    /// `sgn(α) Σ f_i h_i S^φ_P({±u_i})`: the derivative of `F` along the
    /// logarithmic perturbation `h ↦ h e^{tf}`.
    pub fn hadamard_derivative(&self, p: &SymmetricPolygon, f: &[f64]) -> Result<f64> {
        let a = self.analyze(p)?;
        hadamard_from(self.alpha(), &a, f)
    }
}

pub fn hadamard_from(alpha: f64, a: &Analysis, f: &[f64]) -> Result<f64> {
    if f.len() != a.support.len() {
        return Err(Error::InvalidInput(format!(
            "perturbation has {} entries, polygon has {} pairs",
            f.len(),
            a.support.len()
        )));
    }
    Ok(alpha.signum()
        * f.iter()
            .zip(&a.support)
            .zip(&a.density)
            .map(|((f, h), s)| f * h * s)
            .sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn descriptors() {
        for (k, a) in [
            (FunctionalKind::Volume, 2.0),
            (FunctionalKind::Torsion, 4.0),
            (FunctionalKind::Eigenvalue, -2.0),
        ] {
            let d = FunctionalDescriptor::new(k);
            assert_eq!(d.alpha(), a);
            assert_eq!(d.sign(), a.signum());
            assert!(d.ball_value() > 0.0);
            assert_eq!(k.name().parse::<FunctionalKind>().unwrap(), k);
        }
        assert!("capacity".parse::<FunctionalKind>().is_err());
    }

    #[test]
    fn volume_on_square() {
        let p = SymmetricPolygon::rectangle(1.0, 1.0).unwrap();
        let f = FunctionalDescriptor::volume();
        assert_eq!(f.evaluate(&p).unwrap(), 4.0);
        assert_eq!(f.surface_density(&p).unwrap(), vec![4.0, 4.0]);
        let v = f.variational_measure(&p).unwrap();
        assert_eq!(v.mass, vec![2.0, 2.0]);
        assert_eq!(v.total, 4.0);
        assert_eq!(f.hadamard_derivative(&p, &[1.0, 0.0]).unwrap(), 4.0);
        assert_eq!(f.hadamard_derivative(&p, &[1.0, 1.0]).unwrap(), 8.0);
    }

    #[test]
    fn eigenvalue_derivative_has_negative_sign() {
        let p = SymmetricPolygon::regular(3, 1.0).unwrap();
        let f = FunctionalDescriptor::with_resolution(
            FunctionalKind::Eigenvalue,
            Resolution::Relative(0.08),
        );
        let a = f.analyze(&p).unwrap();
        let d = hadamard_from(f.alpha(), &a, &[1.0; 3]).unwrap();
        assert!(rel(d, -2.0 * a.value) < 2e-2);
    }

    #[test]
    fn frozen_resolution_is_scale_free() {
        let p = SymmetricPolygon::regular(4, 1.0).unwrap();
        let f = FunctionalDescriptor::with_resolution(
            FunctionalKind::Torsion,
            Resolution::Relative(0.1),
        )
        .frozen_at(&p)
        .unwrap();
        let a = f.evaluate(&p).unwrap();
        let b = f.evaluate(&p.scaled(2.0)).unwrap();
        assert!(rel(b, 16.0 * a) < 1e-8);
    }

    #[test]
    fn perturbation_length_is_checked() {
        let p = SymmetricPolygon::rectangle(1.0, 1.0).unwrap();
        assert!(FunctionalDescriptor::volume()
            .hadamard_derivative(&p, &[1.0])
            .is_err());
    }
}
