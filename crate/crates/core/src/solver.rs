//! Variational solver for the even logarithmic Minkowski problem
//! `V_{F,K} = ν`.
//!
//! With `ν̂ = ν/|ν|`, minimize the scale-invariant functional
//!
//! ```text
//! Γ(q) = F([q])^{−1/α} · exp(Σ ν̂_i log q_i)
//! ```
//!
//! over positive support vectors on the pairs of `ν`. Replacing `q` by the
//! support of its Wulff shape never increases `Γ`, and in logarithmic
//! coordinates `g = log q` the gradient at a Wulff shape `P` is
//! `ν̂_i − V_i(P)/F(P)`. A stationary body therefore satisfies
//! `V_{F,P}/F(P) = ν̂`; rescaling by `(|ν|/F(P))^{1/α}` gives `F(K₀) = |ν|` and
//! `V_{F,K₀} = ν`.
//!
//! Normals of the solution are restricted to the support of `ν`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::{
    Analysis, FunctionalDescriptor, FunctionalKind, Resolution, VariationalMeasure,
};
use crate::geometry::{wulff_shape, SymmetricPolygon, ANGLE_TOL};
use crate::measure::{check_sscc, EvenMeasure};

/// Smallest backtracking step before the line search gives up.
pub const MIN_STEP: f64 = 1e-12;
/// Cap on the trial step, as a multiple of `initial_step`.
pub const MAX_STEP_FACTOR: f64 = 64.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOptions {
    /// Stop when `‖∇ log Γ‖_∞` falls below this.
    pub tol_grad: f64,
    pub max_iters: usize,
    pub initial_step: f64,
    /// Floor on every support value relative to the geometric mean of `q`.
    pub min_support: f64,
    /// Mesh resolution; it is frozen at the first iterate.
    pub resolution: Resolution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol_grad: 1e-3,
            max_iters: 500,
            initial_step: 0.5,
            min_support: 1e-6,
            resolution: Resolution::default(),
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("tol_grad", self.tol_grad)?;
        positive("initial_step", self.initial_step)?;
        positive("min_support", self.min_support)?;
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        match self.resolution {
            Resolution::Relative(v) => positive("mesh factor", v),
            Resolution::Absolute(v) => positive("mesh size", v),
            Resolution::Template(_) => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    /// The line search found no decrease; the gradient is within `10·tol`.
    Stalled,
    /// The iteration cap was hit; the gradient is within `10·tol`.
    MaxIterations,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub functional: FunctionalKind,
    pub alpha: f64,
    pub measure: EvenMeasureSummary,
    /// `K₀` rescaled so that `F(K₀) = |ν|`.
    pub body: SymmetricPolygon,
    pub variational: VariationalMeasure,
    pub surface_density: Vec<f64>,
    pub f_value: f64,
    /// `max_i |ν_i − V_i| / |ν|`.
    pub residual_linf: f64,
    /// `‖ν̂ − V/F‖_∞` at the final iterate.
    pub gradient_linf: f64,
    /// `Γ` after every accepted step, starting with the initial body.
    pub gamma_trace: Vec<f64>,
    pub iterations: usize,
    /// `Φ_ν(K₀) = Σ ν_i log h_{K₀}(u_i)`.
    pub objective: f64,
    pub status: SolveStatus,
    /// Mesh resolution the solver froze at its first iterate.
    #[serde(skip)]
    pub resolution: Resolution,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvenMeasureSummary {
    pub theta: Vec<f64>,
    pub mass: Vec<f64>,
    pub total: f64,
}

impl From<&EvenMeasure> for EvenMeasureSummary {
    fn from(nu: &EvenMeasure) -> Self {
        Self {
            theta: nu.pairs().iter().map(|p| p.theta()).collect(),
            mass: nu.mass().to_vec(),
            total: nu.total(),
        }
    }
}

/// `Φ_ν(P) = Σ ν_i log h_P(u_i)`.
pub fn phi_objective(nu: &EvenMeasure, p: &SymmetricPolygon) -> f64 {
    nu.pairs()
        .iter()
        .zip(nu.mass())
        .map(|(u, m)| m * p.support_value(u.theta()).ln())
        .sum()
}

fn log_gamma_parts(alpha: f64, f_value: f64, nu_hat: &EvenMeasure, log_q: &[f64]) -> f64 {
    -f_value.ln() / alpha
        + nu_hat
            .mass()
            .iter()
            .zip(log_q)
            .map(|(m, g)| m * g)
            .sum::<f64>()
}

fn check_positive(q: &[f64], n: usize) -> Result<()> {
    if q.len() != n {
        return Err(Error::InvalidInput(format!(
            "support vector has {} entries, measure has {n} pairs",
            q.len()
        )));
    }
    if let Some(bad) = q.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "support values must be positive, got {bad}"
        )));
    }
    Ok(())
}

/// `log Γ(q)` for a probability measure `ν̂`.
pub fn log_gamma(nu_hat: &EvenMeasure, f: &FunctionalDescriptor, q: &[f64]) -> Result<f64> {
    check_positive(q, nu_hat.len())?;
    let p = wulff_shape(nu_hat.pairs(), q)?;
    let value = f.evaluate(&p)?;
    let log_q: Vec<f64> = q.iter().map(|v| v.ln()).collect();
    Ok(log_gamma_parts(f.alpha(), value, nu_hat, &log_q))
}

/// `Γ(q) = F([q])^{−1/α} exp(Σ ν̂_i log q_i)`.
pub fn gamma(nu_hat: &EvenMeasure, f: &FunctionalDescriptor, q: &[f64]) -> Result<f64> {
    Ok(log_gamma(nu_hat, f, q)?.exp())
}

fn check_same_pairs(nu: &EvenMeasure, p: &SymmetricPolygon) -> Result<()> {
    let same = nu.len() == p.num_pairs()
        && nu
            .pairs()
            .iter()
            .zip(p.pairs())
            .all(|(a, b)| (a.theta() - b.theta()).abs() <= ANGLE_TOL);
    if same {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "polygon normals differ from the support of the measure".into(),
        ))
    }
}

fn gradient_from(nu_hat: &EvenMeasure, alpha: f64, a: &Analysis) -> Vec<f64> {
    a.variational_masses(alpha)
        .iter()
        .zip(nu_hat.mass())
        .map(|(v, m)| m - v / a.value)
        .collect()
}

/// `∂ log Γ / ∂ g_i = ν̂_i − V_i(P)/F(P)` at the Wulff shape `P` whose normals
/// are the pairs of `ν̂`.
pub fn gamma_gradient(
    nu_hat: &EvenMeasure,
    f: &FunctionalDescriptor,
    p: &SymmetricPolygon,
) -> Result<Vec<f64>> {
    check_same_pairs(nu_hat, p)?;
    let a = f.analyze(p)?;
    Ok(gradient_from(nu_hat, f.alpha(), &a))
}

fn linf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Iterate {
    body: SymmetricPolygon,
    log_q: Vec<f64>,
    analysis: Analysis,
    log_gamma: f64,
    grad: Vec<f64>,
}

struct Problem<'a> {
    nu_hat: &'a EvenMeasure,
    functional: FunctionalDescriptor,
    min_support: f64,
}

impl Problem<'_> {
    /// Evaluates the projected iterate for `log_q`; `Ok(None)` when the Wulff
    /// shape collapses below the support floor.
    fn project(&self, log_q: &[f64], seed: Option<&[f64]>) -> Result<Option<(Iterate, f64)>> {
        let q: Vec<f64> = log_q.iter().map(|g| g.exp()).collect();
        let body = wulff_shape(self.nu_hat.pairs(), &q)?;
        let mean = log_q.iter().sum::<f64>() / log_q.len() as f64;
        let floor = self.min_support * mean.exp();
        if body.support().iter().any(|h| *h < floor) {
            return Ok(None);
        }
        let analysis = self.functional.analyze_seeded(&body, seed)?;
        let alpha = self.functional.alpha();
        let unprojected = log_gamma_parts(alpha, analysis.value, self.nu_hat, log_q);
        let log_q: Vec<f64> = body.support().iter().map(|h| h.ln()).collect();
        let log_gamma = log_gamma_parts(alpha, analysis.value, self.nu_hat, &log_q);
        let grad = gradient_from(self.nu_hat, alpha, &analysis);
        Ok(Some((
            Iterate {
                body,
                log_q,
                analysis,
                log_gamma: log_gamma.min(unprojected),
                grad,
            },
            unprojected,
        )))
    }
}

fn seed_of(it: &Iterate) -> Option<&[f64]> {
    it.analysis.solution.as_ref().map(|s| s.field.as_slice())
}

/// Projected gradient descent on `log Γ` in log-support coordinates with a
/// pure-decrease backtracking line search.
pub fn solve_log_minkowski(
    nu: &EvenMeasure,
    functional: &FunctionalDescriptor,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    opts.validate()?;
    let report = check_sscc(nu);
    if !report.passes() {
        return Err(Error::SsccRefused(format!(
            "the strict subspace concentration condition fails, so existence of a solution is not guaranteed ({}); \
             the condition is sufficient, and whether it is necessary for torsion and eigenvalue is open, \
             so such measures are refused",
            report.describe().replace('\n', " ")
        )));
    }
    let nu_hat = nu.normalized();
    let start = wulff_shape(nu.pairs(), &vec![1.0; nu.len()])?;
    let frozen = FunctionalDescriptor::with_resolution(functional.kind, opts.resolution.clone())
        .frozen_at(&start)?;
    let problem = Problem {
        nu_hat: &nu_hat,
        functional: frozen,
        min_support: opts.min_support,
    };

    let (mut current, _) = problem
        .project(&vec![0.0; nu.len()], None)?
        .ok_or_else(|| Error::Numeric("initial Wulff shape is degenerate".into()))?;
    let mut trace = vec![current.log_gamma.exp()];
    let mut iterations = 0;
    let mut step = opts.initial_step;
    let max_step = MAX_STEP_FACTOR * opts.initial_step;
    let mut status = None;

    while linf(&current.grad) > opts.tol_grad {
        if iterations >= opts.max_iters {
            status = Some(SolveStatus::MaxIterations);
            break;
        }
        let mut s = step;
        let accepted = loop {
            if s < MIN_STEP {
                break None;
            }
            let trial: Vec<f64> = current
                .log_q
                .iter()
                .zip(&current.grad)
                .map(|(g, d)| g - s * d)
                .collect();
            match problem.project(&trial, seed_of(&current)) {
                Ok(Some((next, unprojected))) if unprojected < current.log_gamma => {
                    break Some((next, s));
                }
                Ok(_) => {}
                Err(Error::Resource(msg)) => return Err(Error::Resource(msg)),
                // a failed solve on a trial body is treated as a rejected step
                Err(_) => {}
            }
            s *= 0.5;
        };
        let Some((next, s)) = accepted else {
            status = Some(SolveStatus::Stalled);
            break;
        };
        // Barzilai–Borwein trial step for the next iteration
        let dg: Vec<f64> = next
            .log_q
            .iter()
            .zip(&current.log_q)
            .map(|(a, b)| a - b)
            .collect();
        let dgrad: Vec<f64> = next
            .grad
            .iter()
            .zip(&current.grad)
            .map(|(a, b)| a - b)
            .collect();
        let num: f64 = dg.iter().map(|x| x * x).sum();
        let den: f64 = dg.iter().zip(&dgrad).map(|(x, y)| x * y).sum();
        step = if den > 0.0 && num > 0.0 {
            (num / den).min(max_step)
        } else {
            (2.0 * s).min(max_step)
        };
        let lg = next.log_gamma.min(current.log_gamma);
        current = next;
        current.log_gamma = lg;
        trace.push(lg.exp());
        iterations += 1;
    }

    let gradient_linf = linf(&current.grad);
    let status = status.unwrap_or(SolveStatus::Converged);
    let result = finish(
        nu,
        &problem,
        current,
        trace,
        iterations,
        gradient_linf,
        status,
    );
    if status != SolveStatus::Converged && gradient_linf > 10.0 * opts.tol_grad {
        let why = match status {
            SolveStatus::Stalled => "line search stalled",
            _ => "iteration cap reached",
        };
        return Err(Error::NotConverged {
            reason: format!(
                "{why} after {iterations} iterations with gradient {gradient_linf:.3e} (tolerance {:.1e})",
                opts.tol_grad
            ),
            result: Box::new(result),
        });
    }
    Ok(result)
}

fn finish(
    nu: &EvenMeasure,
    problem: &Problem,
    it: Iterate,
    gamma_trace: Vec<f64>,
    iterations: usize,
    gradient_linf: f64,
    status: SolveStatus,
) -> SolveResult {
    let f = &problem.functional;
    let alpha = f.alpha();
    let total = nu.total();
    let c = (total / it.analysis.value).powf(1.0 / alpha);
    let body = it.body.scaled(c);
    // exact homogeneity of the frozen discretization: F(cP) = c^α F(P) and
    // S^φ_{cP} = c^{α−1} S^φ_P
    let density_scale = c.powf(alpha - 1.0);
    let surface_density: Vec<f64> = it
        .analysis
        .density
        .iter()
        .map(|d| d * density_scale)
        .collect();
    let mass: Vec<f64> = body
        .support()
        .iter()
        .zip(&surface_density)
        .map(|(h, s)| h * s / alpha.abs())
        .collect();
    let residual_linf = nu
        .mass()
        .iter()
        .zip(&mass)
        .fold(0.0f64, |r, (a, b)| r.max((a - b).abs()))
        / total;
    let variational = VariationalMeasure {
        pairs: body.pairs().to_vec(),
        total: mass.iter().sum(),
        mass,
    };
    SolveResult {
        functional: f.kind,
        alpha,
        measure: nu.into(),
        objective: phi_objective(nu, &body),
        f_value: it.analysis.value * c.powf(alpha),
        body,
        variational,
        surface_density,
        residual_linf,
        gradient_linf,
        gamma_trace,
        iterations,
        status,
        resolution: f.resolution.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::uniform_pairs;
    use std::f64::consts::PI;

    #[test]
    fn phi_examples() {
        let nu = EvenMeasure::uniform(2, 2.0).unwrap();
        let sq = SymmetricPolygon::rectangle(1.0, 1.0).unwrap();
        assert_eq!(phi_objective(&nu, &sq), 0.0);
        assert!((phi_objective(&nu, &sq.scaled(3.0)) - 2.0 * 3f64.ln()).abs() < 1e-14);
        let nu = EvenMeasure::uniform(3, 6.0).unwrap();
        let hex = SymmetricPolygon::regular(3, 3f64.powf(0.25)).unwrap();
        assert!((phi_objective(&nu, &hex) - 1.5 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn gamma_examples() {
        let nu_hat = EvenMeasure::uniform(2, 1.0).unwrap();
        let vol = FunctionalDescriptor::volume();
        assert!((gamma(&nu_hat, &vol, &[1.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((gamma(&nu_hat, &vol, &[2.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(gamma(&nu_hat, &vol, &[1.0, 0.0]).is_err());
        assert!(gamma(&nu_hat, &vol, &[1.0]).is_err());
    }

    #[test]
    fn cone_measure_is_stationary_for_volume() {
        let sq = SymmetricPolygon::rectangle(1.0, 2.0).unwrap();
        let nu_hat = EvenMeasure::new(sq.pairs().to_vec(), sq.cone_volume_measure())
            .unwrap()
            .normalized();
        let g = gamma_gradient(&nu_hat, &FunctionalDescriptor::volume(), &sq).unwrap();
        assert!(linf(&g) < 1e-15);
    }

    #[test]
    fn hexagon_solution() {
        let nu = EvenMeasure::uniform(3, 6.0).unwrap();
        let r = solve_log_minkowski(
            &nu,
            &FunctionalDescriptor::volume(),
            &SolveOptions::default(),
        )
        .unwrap();
        let h = 3f64.powf(0.25);
        for s in r.body.support() {
            assert!((s - h).abs() < 1e-9);
        }
        assert!(r.residual_linf < 1e-8);
        assert!((r.f_value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn skewed_volume_solution_is_stationary() {
        let nu = EvenMeasure::new(uniform_pairs(5, 0.2), vec![1.0, 2.0, 0.5, 3.0, 1.5]).unwrap();
        let opts = SolveOptions {
            tol_grad: 1e-6,
            ..SolveOptions::default()
        };
        let r = solve_log_minkowski(&nu, &FunctionalDescriptor::volume(), &opts).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!(r.residual_linf <= 1e-6);
        assert!(r.gamma_trace.windows(2).all(|w| w[1] <= w[0]));
        assert!((r.body.area() - nu.total()).abs() < 1e-10 * nu.total());
    }

    #[test]
    fn refuses_concentrated_measures() {
        let nu = EvenMeasure::uniform(2, 2.0).unwrap();
        let err = solve_log_minkowski(
            &nu,
            &FunctionalDescriptor::volume(),
            &SolveOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::SsccRefused(_)));
        assert!(err.to_string().contains("not guaranteed"));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let nu = EvenMeasure::new(uniform_pairs(4, 0.0), vec![1.0, 0.1, 1.0, 0.1]).unwrap();
        let opts = SolveOptions {
            max_iters: 1,
            tol_grad: 1e-12,
            ..SolveOptions::default()
        };
        match solve_log_minkowski(&nu, &FunctionalDescriptor::volume(), &opts) {
            Err(Error::NotConverged { result, .. }) => {
                assert_eq!(result.iterations, 1);
                assert_eq!(result.gamma_trace.len(), 2);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn torsion_on_uniform_pairs_is_nearly_round() {
        let nu = EvenMeasure::uniform(16, PI / 8.0).unwrap();
        let opts = SolveOptions {
            resolution: Resolution::Relative(0.08),
            ..SolveOptions::default()
        };
        let r = solve_log_minkowski(&nu, &FunctionalDescriptor::torsion(), &opts).unwrap();
        assert!(r.residual_linf < 2e-2);
        let s = r.body.support();
        let spread =
            s.iter().cloned().fold(0.0, f64::max) / s.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1.02);
    }
}
