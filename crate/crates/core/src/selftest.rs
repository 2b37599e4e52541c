//! Oracle-backed checks of the whole pipeline, shared by the `selftest`
//! command and the acceptance test target.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::flow::{build_self_similar, verify_self_similar, FlowSpec};
use crate::functional::{
    hadamard_from, Analysis, FunctionalDescriptor, FunctionalKind, Resolution,
};
use crate::geometry::{
    contains, hausdorff_to_disc, random_polygon, uniform_pairs, wulff_shape, SymmetricPolygon,
};
use crate::measure::{check_sscc, EvenMeasure};
use crate::oracles;
use crate::solver::{gamma, solve_log_minkowski, SolveOptions, SolveResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// Reduced sample counts for a fast smoke run.
    Quick,
    /// The full sample counts.
    Full,
}

#[derive(Clone, Copy, Debug)]
struct Counts {
    polygons: usize,
    hadamard: usize,
    nested: usize,
    homogeneity: usize,
    projection: usize,
    projection_pde: usize,
    sscc: usize,
}

impl Scale {
    fn counts(self) -> Counts {
        match self {
            Scale::Full => Counts {
                polygons: 100,
                hadamard: 20,
                nested: 50,
                homogeneity: 10,
                projection: 1000,
                projection_pde: 50,
                sscc: 2000,
            },
            Scale::Quick => Counts {
                polygons: 10,
                hadamard: 4,
                nested: 6,
                homogeneity: 2,
                projection: 200,
                projection_pde: 5,
                sscc: 300,
            },
        }
    }
}

pub const CRITERIA: [(usize, &str); 11] = [
    (1, "volume log-Minkowski: hexagon"),
    (2, "torsion log-Minkowski: disc recovery"),
    (3, "eigenvalue log-Minkowski: disc recovery"),
    (4, "finite-element accuracy"),
    (5, "representation identity"),
    (6, "Hadamard derivative vs finite differences"),
    (7, "monotonicity and isoperimetric inequalities"),
    (8, "homogeneity and scale-free gradient"),
    (9, "subspace concentration logic"),
    (10, "self-similar flow"),
    (11, "optimizer monotonicity and projection"),
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<45} {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// One random polygon with its three analyses.
struct Case {
    polygon: SymmetricPolygon,
    volume: Analysis,
    torsion: Analysis,
    eigen: Analysis,
}

pub struct Suite {
    scale: Scale,
    seed: u64,
    cases: Option<Vec<Case>>,
    traces: Vec<(String, Vec<f64>)>,
}

struct Check {
    passed: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            passed: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, note: String) {
        self.passed &= ok;
        self.notes
            .push(if ok { note } else { format!("FAILED {note}") });
    }

    fn detail(&self) -> String {
        self.notes.join("; ")
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn nonincreasing(trace: &[f64]) -> bool {
    trace.windows(2).all(|w| w[1] <= w[0])
}

/// The polygon with its absent facets removed.
fn facets_only(p: &SymmetricPolygon) -> Result<SymmetricPolygon> {
    let (pairs, q): (Vec<_>, Vec<_>) = p
        .pairs()
        .iter()
        .zip(p.support())
        .zip(p.edge_lengths())
        .filter(|(_, l)| **l > 0.0)
        .map(|((d, h), _)| (*d, *h))
        .unzip();
    wulff_shape(&pairs, &q)
}

fn random_case_polygon(rng: &mut ChaCha8Rng) -> SymmetricPolygon {
    random_polygon(rng, 3..=8, 0.6..1.4)
}

impl Suite {
    pub fn new(scale: Scale, seed: u64) -> Self {
        Self {
            scale,
            seed,
            cases: None,
            traces: Vec::new(),
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn counts(&self) -> Counts {
        self.scale.counts()
    }

    pub fn run(&mut self, ids: &[usize]) -> Vec<Outcome> {
        ids.iter().map(|&id| self.run_one(id)).collect()
    }

    pub fn run_all(&mut self) -> Vec<Outcome> {
        let ids: Vec<usize> = CRITERIA.iter().map(|c| c.0).collect();
        self.run(&ids)
    }

    pub fn run_one(&mut self, id: usize) -> Outcome {
        let name = CRITERIA
            .iter()
            .find(|c| c.0 == id)
            .map(|c| c.1)
            .unwrap_or("unknown criterion");
        let start = Instant::now();
        let result = match id {
            1 => self.hexagon(),
            2 => self.disc_recovery(FunctionalKind::Torsion),
            3 => self.disc_recovery(FunctionalKind::Eigenvalue),
            4 => self.fem_accuracy(),
            5 => self.representation(),
            6 => self.hadamard(),
            7 => self.monotonicity_and_isoperimetry(),
            8 => self.homogeneity(),
            9 => self.sscc(),
            10 => self.flow(),
            11 => self.optimizer(),
            _ => Ok(Check {
                passed: false,
                notes: vec![format!("no criterion with id {id}")],
            }),
        };
        let (passed, detail) = match result {
            Ok(c) => (c.passed, c.detail()),
            Err(e) => (false, format!("error: {e}")),
        };
        Outcome {
            id,
            name,
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        }
    }

    fn record(&mut self, label: &str, r: &SolveResult) {
        self.traces.push((label.to_string(), r.gamma_trace.clone()));
    }

    fn hexagon(&mut self) -> Result<Check> {
        let nu = EvenMeasure::uniform(3, 6.0)?;
        let r = solve_log_minkowski(
            &nu,
            &FunctionalDescriptor::volume(),
            &SolveOptions::default(),
        )?;
        self.record("hexagon", &r);
        let h = 3f64.powf(0.25);
        let support_err = r
            .body
            .support()
            .iter()
            .map(|s| (s - h).abs())
            .fold(0.0, f64::max);
        let brute = oracles::brute_force_volume_logmink(&nu)?;
        let obj_err = (r.objective - brute.objective.value).abs();
        let mut c = Check::new();
        c.require(
            support_err <= 1e-6,
            format!("support error {support_err:.1e}"),
        );
        c.require(
            r.residual_linf <= 1e-8,
            format!("residual {:.1e}", r.residual_linf),
        );
        c.require(
            obj_err <= 1e-6,
            format!("objective vs grid search {obj_err:.1e}"),
        );
        Ok(c)
    }

    fn disc_recovery(&mut self, kind: FunctionalKind) -> Result<Check> {
        let total = FunctionalDescriptor::new(kind).ball_value();
        let nu = EvenMeasure::uniform(64, total)?;
        let start = Instant::now();
        let r = solve_log_minkowski(
            &nu,
            &FunctionalDescriptor::new(kind),
            &SolveOptions::default(),
        )?;
        let seconds = start.elapsed().as_secs_f64();
        self.record(kind.name(), &r);
        let dist = hausdorff_to_disc(&r.body, 1.0);
        let mut c = Check::new();
        c.require(dist <= 2e-2, format!("Hausdorff to unit disc {dist:.2e}"));
        c.require(
            r.residual_linf <= 2e-2,
            format!("residual {:.2e}", r.residual_linf),
        );
        c.require(seconds <= 300.0, format!("solve {seconds:.1}s"));
        Ok(c)
    }

    fn fem_accuracy(&mut self) -> Result<Check> {
        let square = SymmetricPolygon::rectangle(1.0, 1.0)?;
        let disc = SymmetricPolygon::regular(128, 1.0)?;
        let tor = FunctionalDescriptor::torsion();
        let eig = FunctionalDescriptor::eigenvalue();
        let mut c = Check::new();
        for (label, value, oracle) in [
            (
                "tau(square)",
                tor.evaluate(&square)?,
                oracles::square_torsion(2.0).value,
            ),
            (
                "lambda(square)",
                eig.evaluate(&square)?,
                oracles::rect_eigen(2.0, 2.0).value,
            ),
            (
                "tau(256-gon)",
                tor.evaluate(&disc)?,
                oracles::disc_torsion(1.0).0.value,
            ),
            (
                "lambda(256-gon)",
                eig.evaluate(&disc)?,
                oracles::disc_eigen(1.0).value,
            ),
        ] {
            let e = rel(value, oracle);
            c.require(e <= 1e-2, format!("{label} {e:.1e}"));
        }
        Ok(c)
    }

    fn cases(&mut self) -> Result<&[Case]> {
        if self.cases.is_none() {
            let mut rng = self.rng(5);
            let polygons: Vec<SymmetricPolygon> = (0..self.counts().polygons)
                .map(|_| random_case_polygon(&mut rng))
                .collect();
            let cases = polygons
                .into_par_iter()
                .map(|p| {
                    Ok(Case {
                        volume: FunctionalDescriptor::volume().analyze(&p)?,
                        torsion: FunctionalDescriptor::torsion().analyze(&p)?,
                        eigen: FunctionalDescriptor::eigenvalue().analyze(&p)?,
                        polygon: p,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            self.cases = Some(cases);
        }
        Ok(self.cases.as_deref().unwrap())
    }

    fn representation(&mut self) -> Result<Check> {
        let cases = self.cases()?;
        let mut worst = [0.0f64; 3];
        for case in cases {
            for (k, (a, alpha)) in [
                (&case.volume, 2.0),
                (&case.torsion, 4.0),
                (&case.eigen, -2.0),
            ]
            .into_iter()
            .enumerate()
            {
                let total: f64 = a.variational_masses(alpha).iter().sum();
                worst[k] = worst[k].max(rel(total, a.value));
            }
        }
        let mut c = Check::new();
        c.require(worst[0] <= 1e-10, format!("volume {:.1e}", worst[0]));
        c.require(worst[1] <= 2e-2, format!("torsion {:.1e}", worst[1]));
        c.require(worst[2] <= 2e-2, format!("eigenvalue {:.1e}", worst[2]));
        c.notes.push(format!("{} polygons", cases.len()));
        Ok(c)
    }

    fn hadamard(&mut self) -> Result<Check> {
        let n = self.counts().hadamard;
        let mut rng = self.rng(6);
        let mut inputs = Vec::new();
        for _ in 0..n {
            let p = facets_only(&random_case_polygon(&mut rng))?;
            // a sign-changing f can make the derivative vanish, which leaves
            // the relative error undefined
            let f: Vec<f64> = (0..p.num_pairs())
                .map(|_| rng.gen_range(0.5..1.5))
                .collect();
            inputs.push((p, f));
        }
        let mut c = Check::new();
        for (kind, t, tol) in [
            (FunctionalKind::Volume, 1e-5, 1e-6),
            (FunctionalKind::Torsion, 1e-3, 1e-2),
            (FunctionalKind::Eigenvalue, 1e-3, 1e-2),
        ] {
            let errors = inputs
                .par_iter()
                .map(|(p, f)| {
                    let d = FunctionalDescriptor::new(kind).frozen_at(p)?;
                    let exact = hadamard_from(d.alpha(), &d.analyze(p)?, f)?;
                    let perturbed = |s: f64| -> Result<f64> {
                        let q: Vec<f64> = p
                            .support()
                            .iter()
                            .zip(f)
                            .map(|(h, f)| h * (s * f).exp())
                            .collect();
                        d.evaluate(&wulff_shape(p.pairs(), &q)?)
                    };
                    let fd = (perturbed(t)? - perturbed(-t)?) / (2.0 * t);
                    Ok(rel(exact, fd))
                })
                .collect::<Result<Vec<f64>>>()?;
            let worst = errors.iter().cloned().fold(0.0, f64::max);
            c.require(worst <= tol, format!("{kind} {worst:.1e}"));
        }
        Ok(c)
    }

    fn monotonicity_and_isoperimetry(&mut self) -> Result<Check> {
        let n = self.counts().nested;
        let mut rng = self.rng(7);
        let mut pairs = Vec::new();
        for k in 0..n {
            let outer = random_case_polygon(&mut rng);
            let inner = if k % 2 == 0 {
                // shrink the support values of the outer polygon
                let q: Vec<f64> = outer
                    .support()
                    .iter()
                    .map(|h| h * rng.gen_range(0.6..1.0))
                    .collect();
                wulff_shape(outer.pairs(), &q)?
            } else {
                // an unrelated polygon dilated to fit
                let other = random_case_polygon(&mut rng);
                let fit = outer
                    .pairs()
                    .iter()
                    .zip(outer.support())
                    .map(|(d, h)| h / other.support_value(d.theta()))
                    .fold(f64::INFINITY, f64::min);
                other.scaled(fit * rng.gen_range(0.7..1.0))
            };
            pairs.push((inner, outer));
        }
        let mut c = Check::new();
        let all_nested = pairs.iter().all(|(k, l)| contains(l, k));
        c.require(all_nested, format!("{n} nested pairs"));
        for kind in [
            FunctionalKind::Volume,
            FunctionalKind::Torsion,
            FunctionalKind::Eigenvalue,
        ] {
            let d = FunctionalDescriptor::new(kind);
            let sign = d.sign();
            let violations = pairs
                .par_iter()
                .map(|(k, l)| {
                    let (fk, fl) = (d.evaluate(k)?, d.evaluate(l)?);
                    Ok(sign * fk > sign * fl + 1e-2 * fl.abs())
                })
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .filter(|v| *v)
                .count();
            c.require(
                violations == 0,
                format!("{kind} monotonicity violations {violations}"),
            );
        }
        let tau_ball = FunctionalKind::Torsion.ball_value();
        let lambda_ball = FunctionalKind::Eigenvalue.ball_value();
        let cases = self.cases()?;
        let (mut sv, mut fk) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for case in cases {
            let vol_ratio = case.volume.value / PI;
            sv = sv.max((case.torsion.value / tau_ball).powf(0.25) / vol_ratio.sqrt());
            fk = fk.max(lambda_ball / case.eigen.value / vol_ratio);
        }
        c.require(sv <= 1.0 + 1e-2, format!("Saint-Venant max ratio {sv:.4}"));
        c.require(fk <= 1.0 + 1e-2, format!("Faber-Krahn max ratio {fk:.4}"));
        Ok(c)
    }

    fn homogeneity(&mut self) -> Result<Check> {
        let n = self.counts().homogeneity;
        let mut rng = self.rng(8);
        let weights: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..8).map(|_| rng.gen_range(0.1..1.0)).collect())
            .collect();
        let cases = self.cases()?;
        let mut worst = [0.0f64; 3];
        let mut grad_sum = [0.0f64; 3];
        for (case, w) in cases.iter().take(n).zip(&weights) {
            let p = &case.polygon;
            let nu_hat =
                EvenMeasure::new(p.pairs().to_vec(), w[..p.num_pairs()].to_vec())?.normalized();
            for (k, (kind, a)) in [
                (FunctionalKind::Volume, &case.volume),
                (FunctionalKind::Torsion, &case.torsion),
                (FunctionalKind::Eigenvalue, &case.eigen),
            ]
            .into_iter()
            .enumerate()
            {
                let d = FunctionalDescriptor::new(kind);
                for c in [0.5, 2.0, 3.0] {
                    let scaled = d.evaluate(&p.scaled(c))?;
                    worst[k] = worst[k].max(rel(scaled, c.powf(d.alpha()) * a.value));
                }
                let s: f64 = a
                    .variational_masses(d.alpha())
                    .iter()
                    .zip(nu_hat.mass())
                    .map(|(v, m)| m - v / a.value)
                    .sum();
                grad_sum[k] = grad_sum[k].max(s.abs());
            }
        }
        let mut c = Check::new();
        for (k, kind) in [
            FunctionalKind::Volume,
            FunctionalKind::Torsion,
            FunctionalKind::Eigenvalue,
        ]
        .into_iter()
        .enumerate()
        {
            let tol = kind.representation_tolerance();
            let hom_tol = if kind == FunctionalKind::Volume {
                1e-10
            } else {
                1e-2
            };
            c.require(
                worst[k] <= hom_tol,
                format!("{kind} F(cP) {:.1e}", worst[k]),
            );
            c.require(
                grad_sum[k] <= tol,
                format!("{kind} |sum grad| {:.1e}", grad_sum[k]),
            );
        }
        Ok(c)
    }

    fn sscc(&mut self) -> Result<Check> {
        let n = self.counts().sscc;
        let mut rng = self.rng(9);
        let mut c = Check::new();
        let fixed = [
            (vec![1.0, 1.0, 1.0], true),
            (vec![1.0, 1.0], false),
            (vec![3.0, 1.0, 1.0], false),
            (vec![2.0, 1.0, 1.0], false),
            (vec![1.0, 1.0, 1.0, 3.0], false),
            (vec![1.0, 1.0, 1.0, 2.9], true),
        ];
        let mut fixed_ok = true;
        for (mass, expected) in &fixed {
            let nu = EvenMeasure::new(uniform_pairs(mass.len(), 0.0), mass.clone())?;
            fixed_ok &= check_sscc(&nu).passes() == *expected;
        }
        c.require(fixed_ok, format!("{} hand-checked measures", fixed.len()));

        let (mut wrong, mut two_pass, mut scale_flip) = (0, 0, 0);
        for k in 0..n {
            let m = rng.gen_range(2..=8usize);
            let integer = k % 2 == 0;
            let mass: Vec<f64> = (0..m)
                .map(|_| {
                    if integer {
                        rng.gen_range(1..=6) as f64
                    } else {
                        rng.gen_range(0.01..1.0)
                    }
                })
                .collect();
            let nu = EvenMeasure::new(uniform_pairs(m, rng.gen_range(0.0..0.3)), mass.clone())?;
            let verdict = check_sscc(&nu).passes();
            // oracle: the heaviest pair is lighter than all the others together
            let heaviest = mass.iter().cloned().fold(0.0, f64::max);
            let others: f64 = mass.iter().sum::<f64>() - heaviest;
            let expected = if integer {
                heaviest < others
            } else {
                m >= 3 && heaviest < others
            };
            wrong += usize::from(verdict != expected);
            two_pass += usize::from(m == 2 && verdict);
            let factor = if integer {
                2f64.powi(rng.gen_range(-20..20))
            } else {
                rng.gen_range(1e-3..1e3)
            };
            scale_flip += usize::from(check_sscc(&nu.scaled(factor)?).passes() != verdict);
        }
        c.require(wrong == 0, format!("{n} random verdicts, {wrong} wrong"));
        c.require(two_pass == 0, format!("two-pair passes {two_pass}"));
        c.require(
            scale_flip == 0,
            format!("verdict changes under scaling {scale_flip}"),
        );
        Ok(c)
    }

    fn flow(&mut self) -> Result<Check> {
        let mut c = Check::new();
        let spec = FlowSpec::from_density(
            FunctionalDescriptor::torsion(),
            1.0,
            |_| 1.0 / 8.0,
            64,
            FlowSpec::uniform_times(1.0, 16),
        )?;
        let flow = build_self_similar(&spec, &SolveOptions::default())?;
        self.record("torsion flow", &flow.solution);
        let report = verify_self_similar(&flow, &spec)?;
        c.require(
            report.max_exponent_error() <= 1e-12,
            format!("exponent {:.1e}", report.max_exponent_error()),
        );
        c.require(
            report.max_value_error() <= 2e-2,
            format!("F(frame) {:.1e}", report.max_value_error()),
        );
        let gap = (report.measure_residual - report.solver_residual).abs();
        c.require(
            report.measure_residual <= 2e-2 && gap <= 1e-9,
            format!(
                "measure residual {:.1e} (solver {:.1e})",
                report.measure_residual, report.solver_residual
            ),
        );
        c.require(
            report.density_scaling_error <= 3e-2,
            format!("density scaling {:.1e}", report.density_scaling_error),
        );
        c.require(
            report.max_dilation_error() <= 1e-12,
            format!("dilation {:.1e}", report.max_dilation_error()),
        );
        let late = flow.frames.iter().find(|f| f.t == 15.0 / 16.0);
        let late_ok = late.is_some_and(|f| {
            (f.scale - 0.5).abs() <= 1e-12 && hausdorff_to_disc(&f.body, 0.5) <= 1e-2
        });
        c.require(late_ok, "t=15/16 is the disc of radius 1/2".into());

        let vspec = FlowSpec::new(
            FunctionalDescriptor::volume(),
            1.0,
            EvenMeasure::uniform(3, 6.0)?,
            vec![0.0, 0.5, 0.75],
        )?;
        let vflow = build_self_similar(&vspec, &SolveOptions::default())?;
        self.record("volume flow", &vflow.solution);
        let vreport = verify_self_similar(&vflow, &vspec)?;
        c.require(
            vreport.passed
                && vreport.measure_residual <= 1e-8
                && (vflow.frames[2].scale - 0.5).abs() <= 1e-15,
            format!("volume flow residual {:.1e}", vreport.measure_residual),
        );
        Ok(c)
    }

    fn optimizer(&mut self) -> Result<Check> {
        let mut c = Check::new();
        let skew = EvenMeasure::new(uniform_pairs(5, 0.2), vec![1.0, 2.0, 0.5, 3.0, 1.5])?;
        let r = solve_log_minkowski(
            &skew,
            &FunctionalDescriptor::volume(),
            &SolveOptions::default(),
        )?;
        self.record("skewed volume", &r);
        let opts = SolveOptions {
            resolution: Resolution::Relative(0.06),
            ..SolveOptions::default()
        };
        let skew_t = EvenMeasure::new(uniform_pairs(4, 0.1), vec![1.0, 0.6, 1.4, 0.8])?;
        let r = solve_log_minkowski(&skew_t, &FunctionalDescriptor::torsion(), &opts)?;
        self.record("skewed torsion", &r);
        let bad: Vec<&str> = self
            .traces
            .iter()
            .filter(|(_, t)| !nonincreasing(t))
            .map(|(l, _)| l.as_str())
            .collect();
        c.require(
            bad.is_empty(),
            format!(
                "{} traces nonincreasing{}",
                self.traces.len(),
                if bad.is_empty() {
                    String::new()
                } else {
                    format!(" except {bad:?}")
                }
            ),
        );

        let counts = self.counts();
        let mut rng = self.rng(11);
        let mut inputs = Vec::new();
        for k in 0..counts.projection + counts.projection_pde {
            let m = rng.gen_range(3..=8usize);
            let offset = rng.gen_range(0.0..PI / m as f64);
            let mass: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..1.0)).collect();
            let nu_hat = EvenMeasure::new(uniform_pairs(m, offset), mass)?.normalized();
            let q: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..2.0)).collect();
            let kind = if k < counts.projection {
                FunctionalKind::Volume
            } else {
                FunctionalKind::Torsion
            };
            inputs.push((kind, nu_hat, q));
        }
        let violations = inputs
            .par_iter()
            .map(|(kind, nu_hat, q)| {
                let body = wulff_shape(nu_hat.pairs(), q)?;
                let d = FunctionalDescriptor::with_resolution(*kind, Resolution::Relative(0.1))
                    .frozen_at(&body)?;
                let before = gamma(nu_hat, &d, q)?;
                let after = gamma(nu_hat, &d, body.support())?;
                Ok(after > before * (1.0 + 1e-10))
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|v| *v)
            .count();
        c.require(
            violations == 0,
            format!(
                "projection on {} random q, {violations} violations",
                inputs.len()
            ),
        );
        Ok(c)
    }
}

/// Runs every criterion and returns one outcome per criterion.
pub fn run_all(scale: Scale, seed: u64) -> Vec<Outcome> {
    Suite::new(scale, seed).run_all()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass_quickly() {
        let mut suite = Suite::new(Scale::Quick, 1);
        for o in suite.run(&[1, 9]) {
            assert!(o.passed, "{}", o.line());
        }
    }

    #[test]
    fn unknown_criterion_fails() {
        let o = Suite::new(Scale::Quick, 1).run_one(42);
        assert!(!o.passed);
    }
}
