//! Finite-difference oracles.
//!
//! Nothing in here looks at closed-form derivatives: every check consumes a
//! scalar evaluator `ξ ↦ u(ξ)` and differentiates it numerically, so the
//! residuals stay independent of the code that built the wave.

use serde::Serialize;
use thiserror::Error;

use crate::elliptic::CubicCoeffs;
use crate::waves::{FifthOrderParams, Profile, TravelingWave, WaveContext};

/// Samples closer than this many stencil steps to a declared pole are skipped.
pub const SINGULAR_EXCLUSION_STEPS: f64 = 10.0;

/// Minimum number of evaluated samples for a report to count.
pub const MIN_VALID_SAMPLES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("evaluator failed inside the stencil around x = {x}")]
    SingularSample { x: f64 },
    #[error("derivative order {0} not supported (1..=4)")]
    UnsupportedOrder(u8),
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
}

/// Default step for a derivative of the given order at `x`.
///
/// First and second derivatives use plain three-point central stencils;
/// third and fourth derivatives use the seven-point stencils, which need a
/// wider step to keep cancellation in check.
pub fn default_step(order: u8, x: f64) -> f64 {
    if order <= 2 {
        1e-4f64.max(1e-4 * x.abs())
    } else {
        1e-2f64.max(1e-4 * x.abs())
    }
}

/// Central-difference approximation of `f^(order)(x)`.
///
/// Orders 1 and 2 are second-order accurate; orders 3 and 4 use seven-point
/// stencils (fourth-order accurate) reaching `x ± 3h`.
pub fn fd_derivative<F, E>(f: F, x: f64, order: u8, h: f64) -> Result<f64, OracleError>
where
    F: Fn(f64) -> Result<f64, E>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(OracleError::InvalidStep(h));
    }
    let weights: &[(i32, f64)] = match order {
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[
            (-3, 1.0 / 8.0),
            (-2, -1.0),
            (-1, 13.0 / 8.0),
            (1, -13.0 / 8.0),
            (2, 1.0),
            (3, -1.0 / 8.0),
        ],
        4 => &[
            (-3, -1.0 / 6.0),
            (-2, 2.0),
            (-1, -13.0 / 2.0),
            (0, 28.0 / 3.0),
            (1, -13.0 / 2.0),
            (2, 2.0),
            (3, -1.0 / 6.0),
        ],
        other => return Err(OracleError::UnsupportedOrder(other)),
    };
    let mut acc = 0.0;
    for &(offset, w) in weights {
        let xs = x + offset as f64 * h;
        let v = f(xs).map_err(|_| OracleError::SingularSample { x })?;
        if !v.is_finite() {
            return Err(OracleError::SingularSample { x });
        }
        acc += w * v;
    }
    Ok(acc / h.powi(order as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    /// Largest per-sample residual divided by that sample's largest additive
    /// term, the divisor floored at 1.
    pub max_rel: f64,
    pub samples: usize,
    pub skipped: usize,
}

impl ResidualReport {
    pub fn is_valid(&self) -> bool {
        self.samples >= MIN_VALID_SAMPLES
    }

    pub fn passes(&self, rel_tol: f64) -> bool {
        self.is_valid() && self.max_rel < rel_tol
    }
}

/// Derivatives of the profile at one point.
struct Jet {
    u: f64,
    d1: f64,
    d2: f64,
    d4: f64,
}

/// Step for `order` at `xi`, shrunk for profiles narrower than unit width
/// and near a pole, so the stencil stays well inside the region where the
/// profile is smooth on the step scale.
fn step_near(order: u8, xi: f64, w: &TravelingWave) -> f64 {
    let mut h = default_step(order, xi);
    if let Profile::Sech2 { wavenumber, .. } | Profile::SecSquared { wavenumber, .. } = w.profile {
        if wavenumber.abs() > 1.0 {
            h /= wavenumber.abs();
        }
    }
    let ratio = if order <= 2 { 2e-4 } else { 1e-2 };
    w.distance_to_singularity(xi)
        .map_or(h, |d| h.min(ratio * d))
}

fn jet(w: &TravelingWave, xi: f64, need_d4: bool) -> Result<Jet, OracleError> {
    let f = |x: f64| w.evaluate(x);
    let u = f(xi).map_err(|_| OracleError::SingularSample { x: xi })?;
    let d1 = fd_derivative(f, xi, 1, step_near(1, xi, w))?;
    let d2 = fd_derivative(f, xi, 2, step_near(2, xi, w))?;
    let d4 = if need_d4 {
        fd_derivative(f, xi, 4, step_near(4, xi, w))?
    } else {
        0.0
    };
    Ok(Jet { u, d1, d2, d4 })
}

/// Samples within `SINGULAR_EXCLUSION_STEPS` default steps of a declared pole
/// are not evaluated.
fn near_declared_pole(w: &TravelingWave, xi: f64, order: u8) -> bool {
    let reach = if order > 2 { 3.0 } else { 1.0 };
    let h = default_step(order, xi);
    w.distance_to_singularity(xi)
        .is_some_and(|d| d < SINGULAR_EXCLUSION_STEPS.max(reach) * h)
}

/// Runs `residual` at every sample, collecting `(residual, largest term)`.
fn collect<F>(w: &TravelingWave, xis: &[f64], need_d4: bool, residual: F) -> ResidualReport
where
    F: Fn(&Jet) -> (f64, f64),
{
    let order = if need_d4 { 4 } else { 2 };
    let mut report = ResidualReport {
        max_abs: 0.0,
        max_rel: 0.0,
        samples: 0,
        skipped: 0,
    };
    for &xi in xis {
        if near_declared_pole(w, xi, order) {
            report.skipped += 1;
            continue;
        }
        let Ok(j) = jet(w, xi, need_d4) else {
            report.skipped += 1;
            continue;
        };
        let (r, largest) = residual(&j);
        report.samples += 1;
        report.max_abs = report.max_abs.max(r.abs());
        report.max_rel = report.max_rel.max(r.abs() / largest.max(1.0));
    }
    report
}

fn max_abs(terms: &[f64]) -> f64 {
    terms.iter().fold(0.0, |m, t| m.max(t.abs()))
}

/// Residual of `μ1 u'' + (3/4) u² − (c − 1) u − A1` (the once-integrated
/// third-order traveling-wave equation).
pub fn residual_third_order(
    w: &TravelingWave,
    nu: f64,
    ctx: &WaveContext,
    xis: &[f64],
) -> ResidualReport {
    let c = ctx.c;
    let mu1 = (1.0 - c) * nu + c / 6.0;
    collect(w, xis, false, |j| {
        let terms = [mu1 * j.d2, 0.75 * j.u * j.u, -(c - 1.0) * j.u, -ctx.bc_a1];
        (terms.iter().sum(), max_abs(&terms))
    })
}

/// Residual of the once-integrated fifth-order traveling-wave equation
/// `μ2 u'''' + (c/6) u'' + (2γ − 1/12) u'² + 2γ u u'' − u³/4 + (3/4) u² + (1 − c) u − B1`.
pub fn residual_fifth_order(
    w: &TravelingWave,
    p: &FifthOrderParams,
    ctx: &WaveContext,
    xis: &[f64],
) -> ResidualReport {
    let c = ctx.c;
    let mu2 = p.mu2(c);
    let g = p.gamma;
    collect(w, xis, true, |j| {
        let terms = [
            mu2 * j.d4,
            c / 6.0 * j.d2,
            (2.0 * g - 1.0 / 12.0) * j.d1 * j.d1,
            2.0 * g * j.u * j.d2,
            -0.25 * j.u * j.u * j.u,
            0.75 * j.u * j.u,
            (1.0 - c) * j.u,
            -ctx.bc_b1,
        ];
        (terms.iter().sum(), max_abs(&terms))
    })
}

/// Residual of `u'² − q3(u)` against the wave's own cubic.
pub fn residual_elliptic(w: &TravelingWave, xis: &[f64]) -> ResidualReport {
    residual_elliptic_with(w, &w.coeffs, xis)
}

/// Residual of `u'² − q3(u)` against an arbitrary cubic (used for
/// sensitivity checks with corrupted coefficients).
pub fn residual_elliptic_with(
    w: &TravelingWave,
    coeffs: &CubicCoeffs,
    xis: &[f64],
) -> ResidualReport {
    collect(w, xis, false, |j| {
        let slope2 = j.d1 * j.d1;
        let r = slope2 - coeffs.eval(j.u);
        (r, slope2.max(coeffs.largest_term(j.u)))
    })
}

/// `n` evenly spaced sample points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
