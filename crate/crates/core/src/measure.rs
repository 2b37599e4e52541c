//! Discrete even measures on the unit circle and the strict subspace
//! concentration condition.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{canonicalize, uniform_pairs, DirectionPair};

/// Even measure stored as masses of antipodal pairs `{u, −u}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenMeasure {
    pairs: Vec<DirectionPair>,
    mass: Vec<f64>,
}

impl EvenMeasure {
    /// Validates and canonicalizes: zero masses are dropped, duplicate
    /// directions merged by summing.
    pub fn new(pairs: Vec<DirectionPair>, mass: Vec<f64>) -> Result<Self> {
        if pairs.len() != mass.len() {
            return Err(Error::InvalidInput(format!(
                "{} pairs but {} masses",
                pairs.len(),
                mass.len()
            )));
        }
        for (k, (p, m)) in pairs.iter().zip(&mass).enumerate() {
            if !m.is_finite() || *m < 0.0 {
                return Err(Error::Validation(format!(
                    "entry {k} (theta {}): mass must be nonnegative and finite, got {m}",
                    p.theta()
                )));
            }
        }
        let entries = canonicalize(
            pairs
                .into_iter()
                .zip(mass)
                .filter(|(_, m)| *m > 0.0)
                .collect(),
            |a, b| a + b,
        );
        if entries.len() < 2 {
            return Err(Error::Validation(format!(
                "measure must charge at least two distinct direction pairs, got {}",
                entries.len()
            )));
        }
        let (pairs, mass) = entries.into_iter().unzip();
        Ok(Self { pairs, mass })
    }

    /// `m` equally spaced pairs `θ_k = kπ/m` of equal mass summing to `total`.
    pub fn uniform(m: usize, total: f64) -> Result<Self> {
        Self::new(uniform_pairs(m, 0.0), vec![total / m as f64; m])
    }

    /// Midpoint discretization of a density on `m` uniform pairs: pair `i` at
    /// `θ_i = (i + 1/2)π/m` receives `φ(θ_i)·π/m`.
    pub fn from_density(density: impl Fn(f64) -> f64, m: usize) -> Result<Self> {
        let width = std::f64::consts::PI / m as f64;
        let pairs = uniform_pairs(m, 0.5 * width);
        let mass = pairs.iter().map(|p| density(p.theta()) * width).collect();
        Self::new(pairs, mass)
    }

    pub fn pairs(&self) -> &[DirectionPair] {
        &self.pairs
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.pairs.clone(),
            self.mass.iter().map(|m| c * m).collect(),
        )
    }

    /// Probability measure with the same support.
    pub fn normalized(&self) -> Self {
        let total = self.total();
        Self {
            pairs: self.pairs.clone(),
            mass: self.mass.iter().map(|m| m / total).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureFile {
    pub dimension: u32,
    pub pairs: Vec<MeasureFileEntry>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasureFileEntry {
    pub theta: f64,
    pub mass: f64,
}

impl From<&EvenMeasure> for MeasureFile {
    fn from(nu: &EvenMeasure) -> Self {
        MeasureFile {
            dimension: 2,
            pairs: nu
                .pairs
                .iter()
                .zip(&nu.mass)
                .map(|(p, m)| MeasureFileEntry {
                    theta: p.theta(),
                    mass: *m,
                })
                .collect(),
        }
    }
}

pub fn parse_measure(text: &str) -> Result<EvenMeasure> {
    let file: MeasureFile = serde_json::from_str(text)?;
    if file.dimension != 2 {
        return Err(Error::Validation(format!(
            "only dimension 2 is supported, got {}",
            file.dimension
        )));
    }
    let mut pairs = Vec::with_capacity(file.pairs.len());
    let mut mass = Vec::with_capacity(file.pairs.len());
    for (k, e) in file.pairs.iter().enumerate() {
        let pair = DirectionPair::new(e.theta)
            .map_err(|err| Error::Validation(format!("entry {k}: {err}")))?;
        if !(e.mass >= 0.0) {
            return Err(Error::Validation(format!(
                "entry {k} (theta {}): mass must be nonnegative, got {}",
                e.theta, e.mass
            )));
        }
        pairs.push(pair);
        mass.push(e.mass);
    }
    EvenMeasure::new(pairs, mass)
}

pub fn load_measure(path: impl AsRef<Path>) -> Result<EvenMeasure> {
    parse_measure(&std::fs::read_to_string(path)?)
}

pub fn measure_to_json(nu: &EvenMeasure) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MeasureFile::from(nu))?)
}

/// A pair carrying at least half of the total mass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentratedPair {
    pub index: usize,
    pub theta: f64,
    pub mass: f64,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SsccReport {
    Pass,
    Violation(Vec<ConcentratedPair>),
}

impl SsccReport {
    pub fn passes(&self) -> bool {
        matches!(self, SsccReport::Pass)
    }

    pub fn describe(&self) -> String {
        match self {
            SsccReport::Pass => "pass: every pair carries less than half of the total mass".into(),
            SsccReport::Violation(v) => {
                let lines: Vec<String> = v
                    .iter()
                    .map(|c| {
                        let what = if c.fraction == 0.5 {
                            "pair mass equals half of total"
                        } else {
                            "pair mass exceeds half of total"
                        };
                        format!(
                            "pair {} (theta {}): mass {} = {:.6} of total; {what}",
                            c.index, c.theta, c.mass, c.fraction
                        )
                    })
                    .collect();
                format!("violation:\n  {}", lines.join("\n  "))
            }
        }
    }
}

/// In the plane the only proper subspaces are lines, so the condition is
/// `mass_i < total / 2` for every pair, compared without tolerance.
pub fn check_sscc(nu: &EvenMeasure) -> SsccReport {
    let total = nu.total();
    let bad: Vec<ConcentratedPair> = nu
        .pairs
        .iter()
        .zip(&nu.mass)
        .enumerate()
        .filter(|(_, (_, m))| !(2.0 * **m < total))
        .map(|(index, (p, m))| ConcentratedPair {
            index,
            theta: p.theta(),
            mass: *m,
            fraction: m / total,
        })
        .collect();
    if bad.is_empty() {
        SsccReport::Pass
    } else {
        SsccReport::Violation(bad)
    }
}
