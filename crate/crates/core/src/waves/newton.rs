use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use super::fifth::branch_a3;
use super::{Branch, FifthOrderParams, WaveContext, WaveError};
use crate::elliptic::CubicCoeffs;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Convergence threshold on every equation's residual relative to its
    /// largest term.
    pub tol: f64,
    /// Residual bound accepted once the step has stalled at rounding level.
    pub stall_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-12,
            stall_tol: 1e-10,
        }
    }
}

/// Residual of one equation of the coefficient system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquationResidual {
    pub abs: f64,
    /// `abs` over the magnitude of the equation's largest additive term.
    pub rel: f64,
}

impl EquationResidual {
    fn from_terms(terms: &[f64]) -> Self {
        let abs = terms.iter().sum::<f64>().abs();
        let largest = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let rel = if largest > 0.0 { abs / largest } else { abs };
        Self { abs, rel }
    }
}

fn terms(gamma: f64, mu2: f64, c: f64, b1: f64, a: &[f64; 4]) -> [Vec<f64>; 4] {
    let [a0, a1, a2, a3] = *a;
    let t = 1.0 / 12.0;
    [
        vec![7.5 * mu2 * a3 * a3, (5.0 * gamma - t) * a3, -0.25],
        vec![
            7.5 * mu2 * a2 * a3,
            (4.0 * gamma - t) * a2,
            0.25 * c * a3,
            0.75,
        ],
        vec![
            mu2 * a2 * a2,
            4.5 * mu2 * a1 * a3,
            (3.0 * gamma - t) * a1,
            c / 6.0 * a2,
            -(c - 1.0),
        ],
        vec![
            0.5 * mu2 * a1 * a2,
            3.0 * mu2 * a0 * a3,
            (2.0 * gamma - t) * a0,
            c / 12.0 * a1,
            -b1,
        ],
    ]
}

/// Residuals of the four algebraic equations that `(a0, a1, a2, a3)` must
/// satisfy for `u'² = q3(u)` to solve the fifth-order traveling-wave ODE.
pub fn sys2_residuals(
    gamma: f64,
    mu2: f64,
    c: f64,
    b1: f64,
    coeffs: &CubicCoeffs,
) -> [EquationResidual; 4] {
    terms(gamma, mu2, c, b1, &coeffs.as_array()).map(|t| EquationResidual::from_terms(&t))
}

fn values(gamma: f64, mu2: f64, c: f64, b1: f64, a: &[f64; 4]) -> Vector4<f64> {
    let t = terms(gamma, mu2, c, b1, a);
    Vector4::from_fn(|i, _| t[i].iter().sum())
}

fn jacobian(gamma: f64, mu2: f64, c: f64, a: &[f64; 4]) -> Matrix4<f64> {
    let [a0, a1, a2, a3] = *a;
    let t = 1.0 / 12.0;
    #[rustfmt::skip]
    let j = Matrix4::new(
        0.0, 0.0, 0.0, 15.0 * mu2 * a3 + 5.0 * gamma - t,
        0.0, 0.0, 7.5 * mu2 * a3 + 4.0 * gamma - t, 7.5 * mu2 * a2 + 0.25 * c,
        0.0, 4.5 * mu2 * a3 + 3.0 * gamma - t, 2.0 * mu2 * a2 + c / 6.0, 4.5 * mu2 * a1,
        3.0 * mu2 * a3 + 2.0 * gamma - t, 0.5 * mu2 * a2 + c / 12.0, 0.5 * mu2 * a1, 3.0 * mu2 * a0,
    );
    j
}

fn worst_rel(gamma: f64, mu2: f64, c: f64, b1: f64, a: &[f64; 4]) -> f64 {
    sys2_residuals(gamma, mu2, c, b1, &CubicCoeffs::from_array(*a))
        .iter()
        .fold(0.0, |m, r| m.max(r.rel))
}

/// Solves the nonzero-boundary coefficient system by damped Newton iteration
/// from `seed`, with `μ2` and `ℬ1` taken from `ctx`.
pub fn fifth_order_coeffs_nonzero_bc(
    p: &FifthOrderParams,
    ctx: &WaveContext,
    seed: &CubicCoeffs,
) -> Result<CubicCoeffs, WaveError> {
    fifth_order_coeffs_nonzero_bc_with(p, ctx, seed, &NewtonOptions::default())
}

pub fn fifth_order_coeffs_nonzero_bc_with(
    p: &FifthOrderParams,
    ctx: &WaveContext,
    seed: &CubicCoeffs,
    opts: &NewtonOptions,
) -> Result<CubicCoeffs, WaveError> {
    let (gamma, c, b1) = (p.gamma, ctx.c, ctx.bc_b1);
    let mu2 = p.mu2(c);
    if !(gamma.is_finite() && mu2.is_finite() && b1.is_finite() && seed.is_finite()) {
        return Err(WaveError::NonFinite("parameters or seed"));
    }
    if mu2 == 0.0 {
        return Err(WaveError::DegenerateMu { which: "mu2" });
    }
    let mut a = seed.as_array();
    let mut f = values(gamma, mu2, c, b1, &a);
    let mut rel = worst_rel(gamma, mu2, c, b1, &a);
    for iter in 0..opts.max_iter {
        if rel < opts.tol {
            return Ok(CubicCoeffs::from_array(a));
        }
        let Some(step) = jacobian(gamma, mu2, c, &a).lu().solve(&f) else {
            return Err(WaveError::NoConvergence {
                iterations: iter,
                residual: rel,
            });
        };
        let norm0 = f.norm();
        let mut lambda = 1.0;
        let mut next = a;
        let mut f_next = f;
        for _ in 0..30 {
            for i in 0..4 {
                next[i] = a[i] - lambda * step[i];
            }
            f_next = values(gamma, mu2, c, b1, &next);
            if f_next.norm() < norm0 {
                break;
            }
            lambda *= 0.5;
        }
        let stalled = (0..4).all(|i| (next[i] - a[i]).abs() <= 4.0 * f64::EPSILON * a[i].abs());
        a = next;
        f = f_next;
        rel = worst_rel(gamma, mu2, c, b1, &a);
        if stalled && rel < opts.stall_tol {
            return Ok(CubicCoeffs::from_array(a));
        }
    }
    if rel < opts.tol {
        return Ok(CubicCoeffs::from_array(a));
    }
    Err(WaveError::NoConvergence {
        iterations: opts.max_iter,
        residual: rel,
    })
}

/// Starting point for the Newton solver: the branch's `a3`, `a2` from the
/// second equation, `a1 = 0` and `a0` chosen to balance `ℬ1` in the last
/// equation. With `ℬ1 = 0` on the constraint curve this is the zero-boundary
/// solution itself.
pub fn zero_bc_seed(
    p: &FifthOrderParams,
    c: f64,
    branch: Branch,
    b1: f64,
) -> Result<CubicCoeffs, WaveError> {
    let mu2 = p.mu2(c);
    let t = 1.0 / 12.0;
    let a3 = branch_a3(p.gamma, mu2, branch)?;
    let d2 = 7.5 * mu2 * a3 + 4.0 * p.gamma - t;
    let a2 = if d2 != 0.0 {
        -(0.25 * c * a3 + 0.75) / d2
    } else {
        0.0
    };
    let d0 = 3.0 * mu2 * a3 + 2.0 * p.gamma - t;
    let a0 = if d0 != 0.0 { b1 / d0 } else { 0.0 };
    Ok(CubicCoeffs::new(a0, 0.0, a2, a3))
}
