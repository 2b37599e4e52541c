//! Reference values computed without the mesh, finite-element or optimizer
//! code: closed forms, series, a Bessel root, and a brute-force grid search.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{check_sscc, EvenMeasure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    ClosedForm,
    Series,
    SpecialFunctionRoot,
    GridSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleValue {
    pub name: String,
    pub value: f64,
    pub method: OracleMethod,
}

impl OracleValue {
    fn new(name: impl Into<String>, value: f64, method: OracleMethod) -> Self {
        Self {
            name: name.into(),
            value,
            method,
        }
    }
}

/// Torsional rigidity of the disc of radius `r` from `u = (r² − |x|²)/4`,
/// and the boundary gradient `|∇u| = r/2`.
pub fn disc_torsion(r: f64) -> (OracleValue, f64) {
    (
        OracleValue::new(
            format!("disc torsion R={r}"),
            PI * r.powi(4) / 8.0,
            OracleMethod::ClosedForm,
        ),
        r / 2.0,
    )
}

/// Torsional rigidity of the square of side `a`.
///
/// The double sine series `Σ_{m,n odd} 64 a⁴ / (π⁶ m² n² (m² + n²))` with the
/// inner index summed in closed form:
/// `a⁴/12 − (16 a⁴/π⁵) Σ_{n odd} tanh(nπ/2) / n⁵`.
pub fn square_torsion(a: f64) -> OracleValue {
    rect_torsion(a, a)
}

/// Torsional rigidity of the `a × b` rectangle (same series as
/// [`square_torsion`]).
pub fn rect_torsion(a: f64, b: f64) -> OracleValue {
    let mut sum = 0.0;
    let mut n = 1.0f64;
    loop {
        let term = (n * PI * b / (2.0 * a)).tanh() / n.powi(5);
        sum += term;
        if term < 1e-17 {
            break;
        }
        n += 2.0;
    }
    let value = a.powi(3) * b / 12.0 - 16.0 * a.powi(4) / PI.powi(5) * sum;
    OracleValue::new(
        format!("rectangle torsion {a}x{b}"),
        value,
        OracleMethod::Series,
    )
}

/// `π²(1/a² + 1/b²)` for the rectangle with side lengths `a`, `b`.
pub fn rect_eigen(a: f64, b: f64) -> OracleValue {
    OracleValue::new(
        format!("rectangle eigenvalue {a}x{b}"),
        PI * PI * (1.0 / (a * a) + 1.0 / (b * b)),
        OracleMethod::ClosedForm,
    )
}

/// `J₀(x) = Σ_k (−1)^k (x/2)^{2k} / (k!)²`, accurate for moderate `x`.
pub fn bessel_j0(x: f64) -> f64 {
    let y = -(x * x) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= y / (k as f64 * k as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// First positive zero of `J₀` by bisection on `[2, 3]`.
pub fn bessel_j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(j₀,₁ / r)²`.
pub fn disc_eigen(r: f64) -> OracleValue {
    let j = bessel_j0_first_zero();
    OracleValue::new(
        format!("disc eigenvalue R={r}"),
        (j / r).powi(2),
        OracleMethod::SpecialFunctionRoot,
    )
}

/// Area of `{x : |⟨x, (cos θ_i, sin θ_i)⟩| ≤ q_i}` by clipping a large square
/// against each halfplane.
pub fn slab_intersection_area(theta: &[f64], q: &[f64]) -> f64 {
    let big = 4.0 * q.iter().cloned().fold(0.0, f64::max) * (1.0 + theta.len() as f64);
    let mut poly = vec![[-big, -big], [big, -big], [big, big], [-big, big]];
    for (t, h) in theta.iter().zip(q) {
        let (c, s) = (t.cos(), t.sin());
        for sign in [1.0, -1.0] {
            let side = |p: &[f64; 2]| h - sign * (c * p[0] + s * p[1]);
            let mut out = Vec::with_capacity(poly.len() + 1);
            for k in 0..poly.len() {
                let a = poly[k];
                let b = poly[(k + 1) % poly.len()];
                let (da, db) = (side(&a), side(&b));
                if da >= 0.0 {
                    out.push(a);
                }
                if (da >= 0.0) != (db >= 0.0) {
                    let t = da / (da - db);
                    out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
                }
            }
            poly = out;
        }
    }
    let n = poly.len();
    (0..n)
        .map(|k| {
            let (a, b) = (poly[k], poly[(k + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

/// Result of the brute-force volume search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceSolution {
    /// Minimizing support values, rescaled so that the area equals `|ν|`.
    pub support: Vec<f64>,
    /// `Σ ν_i log q_i` at the rescaled minimizer.
    pub objective: OracleValue,
}

/// Minimizes `A([q])^{−1/2} exp(Σ ν̂_i log q_i)` over `log q` with the first
/// coordinate fixed at 0, by a grid search whose window is repeatedly
/// narrowed around the best point until the spacing is below `1e−4`.
pub fn brute_force_volume_logmink(nu: &EvenMeasure) -> Result<BruteForceSolution> {
    let m = nu.len();
    if m > 4 {
        return Err(Error::InvalidInput(format!(
            "grid search supports at most 4 pairs, got {m}"
        )));
    }
    if !check_sscc(nu).passes() {
        return Err(Error::SsccRefused(
            "grid search requires the strict subspace concentration condition".into(),
        ));
    }
    let theta: Vec<f64> = nu.pairs().iter().map(|p| p.theta()).collect();
    let total = nu.total();
    let w: Vec<f64> = nu.mass().iter().map(|x| x / total).collect();
    let objective = |g: &[f64]| -> f64 {
        let q: Vec<f64> = g.iter().map(|x| x.exp()).collect();
        let area = slab_intersection_area(&theta, &q);
        -0.5 * area.ln() + w.iter().zip(g).map(|(a, b)| a * b).sum::<f64>()
    };

    let free = m - 1;
    let points = 21usize;
    let mut center = vec![0.0; free];
    let mut half_width = 2.0;
    loop {
        let spacing = 2.0 * half_width / (points - 1) as f64;
        let mut best = (f64::INFINITY, center.clone());
        let mut idx = vec![0usize; free];
        'grid: loop {
            let mut g = vec![0.0; m];
            for k in 0..free {
                g[k + 1] = center[k] - half_width + idx[k] as f64 * spacing;
            }
            let value = objective(&g);
            if value < best.0 {
                best = (value, g[1..].to_vec());
            }
            for k in 0..free {
                idx[k] += 1;
                if idx[k] < points {
                    continue 'grid;
                }
                idx[k] = 0;
            }
            break;
        }
        center = best.1;
        if spacing < 1e-4 {
            break;
        }
        half_width = 2.0 * spacing;
    }
    let mut q: Vec<f64> = std::iter::once(1.0)
        .chain(center.iter().map(|g| g.exp()))
        .collect();
    let c = (total / slab_intersection_area(&theta, &q)).sqrt();
    q.iter_mut().for_each(|x| *x *= c);
    let phi = nu.mass().iter().zip(&q).map(|(a, h)| a * h.ln()).sum();
    Ok(BruteForceSolution {
        support: q,
        objective: OracleValue::new(
            "volume log-Minkowski objective",
            phi,
            OracleMethod::GridSearch,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_values() {
        let (t, g) = disc_torsion(1.0);
        assert!((t.value - std::f64::consts::FRAC_PI_8).abs() < 1e-15);
        assert_eq!(g, 0.5);
        assert!((disc_torsion(2.0).0.value - 2.0 * PI).abs() < 1e-14);
        assert!((bessel_j0_first_zero() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((disc_eigen(1.0).value - 5.78319).abs() < 1e-4);
        assert!((disc_eigen(2.0).value - 1.44580).abs() < 1e-4);
    }

    #[test]
    fn rectangle_values() {
        assert!((square_torsion(2.0).value - 0.562_308_06).abs() < 1e-8);
        assert!((square_torsion(1.0).value - 0.035_144_254).abs() < 1e-9);
        // the commonly quoted four-digit value
        assert!((square_torsion(2.0).value / 0.56245 - 1.0).abs() < 3e-4);
        assert!((square_torsion(3.0).value / square_torsion(1.0).value - 81.0).abs() < 1e-10);
        assert!((rect_eigen(2.0, 2.0).value - 4.93480).abs() < 1e-5);
        assert!((rect_eigen(2.0, 4.0).value - 3.08425).abs() < 1e-5);
        // symmetric in the sides
        assert!((rect_torsion(1.0, 3.0).value - rect_torsion(3.0, 1.0).value).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_series_matches_double_series() {
        let a = 2.0;
        let mut double = 0.0;
        for m in (1..2000).step_by(2) {
            for n in (1..2000).step_by(2) {
                let (m, n) = (m as f64, n as f64);
                double += 64.0 * a * a / (PI.powi(6) * m * m * n * n * ((m * m + n * n) / (a * a)));
            }
        }
        // truncation tail is below 1e-9
        assert!((double - square_torsion(a).value).abs() < 1e-8);
    }

    #[test]
    fn saint_venant_ordering() {
        // square with the area of the unit disc
        let a = PI.sqrt();
        assert!(square_torsion(a).value < disc_torsion(1.0).0.value);
    }

    #[test]
    fn clipping_area() {
        assert!((slab_intersection_area(&[0.0, PI / 2.0], &[1.0, 1.0]) - 4.0).abs() < 1e-12);
        let hex = slab_intersection_area(&[0.0, PI / 3.0, 2.0 * PI / 3.0], &[1.0; 3]);
        assert!((hex - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        // absent facet
        assert!(
            (slab_intersection_area(&[0.0, PI / 4.0, PI / 2.0], &[1.0, 2.0, 1.0]) - 4.0).abs()
                < 1e-12
        );
    }

    #[test]
    fn brute_force_hexagon_and_octagon() {
        let hex = brute_force_volume_logmink(&EvenMeasure::uniform(3, 6.0).unwrap()).unwrap();
        for s in &hex.support {
            assert!((s - 3f64.powf(0.25)).abs() < 1e-3);
        }
        let oct = brute_force_volume_logmink(&EvenMeasure::uniform(4, 4.0).unwrap()).unwrap();
        // regular octagon of area 4: 8 tan(π/8) h² = 4
        let h = (0.5 / (PI / 8.0).tan()).sqrt();
        for s in &oct.support {
            assert!((s - h).abs() < 1e-3);
        }
        let scaled = brute_force_volume_logmink(&EvenMeasure::uniform(4, 40.0).unwrap()).unwrap();
        for (a, b) in scaled.support.iter().zip(&oct.support) {
            assert!((a / b - 10f64.sqrt()).abs() < 1e-9);
        }
    }
}
