//! Planar even logarithmic Minkowski problems for volume, torsional rigidity
//! and the principal Dirichlet eigenvalue, and self-similar solutions of the
//! associated worn-stone flows.

pub mod error;
pub mod fem;
pub mod flow;
pub mod functional;
pub mod geometry;
pub mod measure;
pub mod mesh;
pub mod oracles;
pub mod report;
pub mod selftest;
pub mod solver;

pub use error::{Error, Result};
pub use functional::{FunctionalDescriptor, FunctionalKind, Resolution};
pub use geometry::{DirectionPair, SymmetricPolygon};
pub use measure::EvenMeasure;
pub use solver::{solve_log_minkowski, SolveOptions, SolveResult};
