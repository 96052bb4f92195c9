//! Fourier pseudospectral evolution of the third- and fifth-order equations
//! on a periodic interval.
//!
//! Both equations are written as `û_t = −iφ(ξ) û − iψ(ξ) N̂(u)` with real odd
//! symbols `φ`, `ψ`, so the linear part is propagated exactly and only the
//! nonlinearity is treated explicitly.

mod energy;
mod etdrk4;

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::waves::{FifthOrderParams, WaveError};

pub use energy::{energies, propagate_and_compare, sample_wave, EnergyReport};
pub use etdrk4::{step, Integrator};

/// `max|u|` above which a run is declared blown up.
pub const BLOWUP_GUARD: f64 = 1e8;

pub const MIN_MODES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("nu = {0} must be below 1/6")]
    InvalidNu(f64),
    #[error("delta1 = {0} must be positive")]
    InvalidDelta1(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("solution blew up at t = {t} (max|u| = {max_abs:e})")]
    BlowUp { t: f64, max_abs: f64 },
    #[error("initial wave is unusable: {0}")]
    InitialData(String),
    #[error(transparent)]
    Wave(#[from] WaveError),
}

/// Which PDE an operator discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Equation {
    ThirdOrder { nu: f64 },
    FifthOrder(FifthOrderParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperator {
    pub equation: Equation,
    pub length: f64,
    /// Mode frequencies `2πk/L` in FFT order; the Nyquist entry is zero.
    pub wavenumbers: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    /// 2/3-rule mask applied to the transformed nonlinearity.
    pub dealias: Vec<bool>,
}

impl SpectralOperator {
    pub fn modes(&self) -> usize {
        self.wavenumbers.len()
    }

    pub fn dx(&self) -> f64 {
        self.length / self.modes() as f64
    }

    /// Grid points `x_j = −L/2 + j L/N`.
    pub fn grid(&self) -> Vec<f64> {
        grid_points(self.length, self.modes())
    }
}

pub fn grid_points(length: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| -0.5 * length + length * j as f64 / n as f64)
        .collect()
}

fn check_grid(length: f64, n: usize) -> Result<(), SpectralError> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(SpectralError::InvalidGrid(format!(
            "L = {length} must be positive"
        )));
    }
    if n < MIN_MODES || !n.is_power_of_two() {
        return Err(SpectralError::InvalidGrid(format!(
            "N = {n} must be a power of two and at least {MIN_MODES}"
        )));
    }
    Ok(())
}

/// Signed mode index of FFT slot `j`.
fn signed_index(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn wavenumbers(length: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            if j == n / 2 {
                0.0
            } else {
                2.0 * PI * signed_index(j, n) as f64 / length
            }
        })
        .collect()
}

fn dealias_mask(n: usize) -> Vec<bool> {
    (0..n)
        .map(|j| 3 * signed_index(j, n).unsigned_abs() < n as u64)
        .collect()
}

/// `φ(ξ) = ξ(1 − νξ²)/((1/6 − ν)ξ² + 1)`, `ψ(ξ) = 3ξ/(4[(1/6 − ν)ξ² + 1])`,
/// paired with the nonlinearity `u²`.
pub fn build_third_order_operator(
    nu: f64,
    length: f64,
    n: usize,
) -> Result<SpectralOperator, SpectralError> {
    if !(nu < 1.0 / 6.0) || !nu.is_finite() {
        return Err(SpectralError::InvalidNu(nu));
    }
    check_grid(length, n)?;
    let wavenumbers = wavenumbers(length, n);
    let b = 1.0 / 6.0 - nu;
    let phi = wavenumbers
        .iter()
        .map(|&k| k * (1.0 - nu * k * k) / (b * k * k + 1.0))
        .collect();
    let psi = wavenumbers
        .iter()
        .map(|&k| 3.0 * k / (4.0 * (b * k * k + 1.0)))
        .collect();
    Ok(SpectralOperator {
        equation: Equation::ThirdOrder { nu },
        length,
        wavenumbers,
        phi,
        psi,
        dealias: dealias_mask(n),
    })
}

/// `φ(ξ) = ξ(1 + δ2ξ⁴)/D`, `ψ(ξ) = ξ/D` with `D = 1 + ξ²/6 + δ1ξ⁴`, paired
/// with `N(u) = (3/4)u² + γ(u²)_xx − (1/12)u_x² − (1/4)u³`.
pub fn build_fifth_order_operator(
    p: &FifthOrderParams,
    length: f64,
    n: usize,
) -> Result<SpectralOperator, SpectralError> {
    if !(p.delta1 > 0.0) || !p.delta1.is_finite() {
        return Err(SpectralError::InvalidDelta1(p.delta1));
    }
    if !(p.gamma.is_finite() && p.delta2.is_finite()) {
        return Err(SpectralError::Wave(WaveError::NonFinite("gamma or delta2")));
    }
    check_grid(length, n)?;
    let wavenumbers = wavenumbers(length, n);
    let denom = |k: f64| 1.0 + k * k / 6.0 + p.delta1 * k.powi(4);
    let phi = wavenumbers
        .iter()
        .map(|&k| k * (1.0 + p.delta2 * k.powi(4)) / denom(k))
        .collect();
    let psi = wavenumbers.iter().map(|&k| k / denom(k)).collect();
    Ok(SpectralOperator {
        equation: Equation::FifthOrder(*p),
        length,
        wavenumbers,
        phi,
        psi,
        dealias: dealias_mask(n),
    })
}

/// Real field samples on the periodic grid at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridState {
    pub length: f64,
    pub u: Vec<f64>,
    pub t: f64,
}

impl GridState {
    pub fn new(length: f64, u: Vec<f64>) -> Result<Self, SpectralError> {
        check_grid(length, u.len())?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::InitialData("non-finite sample".into()));
        }
        Ok(Self { length, u, t: 0.0 })
    }

    /// Samples `f` at the grid points `x_j = −L/2 + jL/N`.
    pub fn from_fn<F: Fn(f64) -> f64>(length: f64, n: usize, f: F) -> Result<Self, SpectralError> {
        check_grid(length, n)?;
        Self::new(length, grid_points(length, n).into_iter().map(f).collect())
    }

    pub fn modes(&self) -> usize {
        self.u.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `0.5·(L/N)` shrunk by the size of the explicit nonlinear term.
pub fn default_dt(op: &SpectralOperator, state: &GridState) -> f64 {
    let psi_max = op.psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let amp = state.max_abs();
    let scale = match op.equation {
        Equation::ThirdOrder { .. } => 2.0 * amp,
        Equation::FifthOrder(_) => 1.5 * amp + 0.75 * amp * amp,
    };
    0.5 * op.dx() / (1.0 + psi_max * scale * op.dx())
}
