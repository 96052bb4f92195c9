//! Exact traveling waves `u(ξ)`, `ξ = x − c t`, of the third- and
//! fifth-order KdV–BBM equations.
//!
//! All families are solutions of the reduced elliptic equation
//! `u'² = q3(u)`; the constructors here produce the coefficients of `q3` and
//! the closed-form profile that integrates it.

mod fifth;
mod newton;
mod third;

use serde::Serialize;
use thiserror::Error;

use crate::elliptic::{
    invariants_from_cubic, wp_eval, CubicCoeffs, EllipticError, EllipticInvariants,
};

pub use fifth::{
    fifth_order_coeffs_zero_bc, fifth_order_constraint, fifth_order_periodic, fifth_order_soliton,
    fifth_order_weierstrass, scan_constraint_roots, solve_constraint_mu2, CONSTRAINT_GATE,
};
pub use newton::{
    fifth_order_coeffs_nonzero_bc, fifth_order_coeffs_nonzero_bc_with, sys2_residuals,
    zero_bc_seed, EquationResidual, NewtonOptions,
};
pub use third::{
    region_classify_third, third_order_coeffs, third_order_periodic, third_order_soliton,
    third_order_weierstrass, RegionTag,
};

/// A `sec²` value larger than this multiple of the amplitude is a pole hit.
const SEC2_POLE_GUARD: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error("degenerate traveling-wave equation: {which} vanishes")]
    DegenerateMu { which: &'static str },
    #[error("cubic coefficient a3 vanishes; no Weierstrass reduction")]
    DegenerateCubic,
    #[error("parameters lie outside the region of the requested family: {0}")]
    WrongRegion(String),
    #[error("negative radicand in the zero-boundary coefficients: {0}")]
    ComplexDiscriminant(String),
    #[error("constraint residual |h| = {h:e} exceeds the gate")]
    ConstraintViolated { h: f64 },
    #[error("no constraint root in bracket [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },
    #[error(
        "coefficient solver did not converge in {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("u(ξ) is singular at ξ = {xi}")]
    SingularPoint { xi: f64 },
    #[error("non-finite parameter: {0}")]
    NonFinite(&'static str),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Dispersion parameter of the third-order equation; `ν = 0` is BBM and
/// `ν = 1/6` is KdV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThirdOrderParams {
    pub nu: f64,
}

impl ThirdOrderParams {
    pub fn new(nu: f64) -> Self {
        Self { nu }
    }

    /// `μ1 = (1 − c) ν + c/6`.
    pub fn mu1(&self, c: f64) -> f64 {
        (1.0 - c) * self.nu + c / 6.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FifthOrderParams {
    pub gamma: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl FifthOrderParams {
    pub fn new(gamma: f64, delta1: f64, delta2: f64) -> Self {
        Self {
            gamma,
            delta1,
            delta2,
        }
    }

    /// Parameters whose `μ2` at speed `c` is `mu2`, keeping `γ` and `δ1`.
    pub fn with_mu2(gamma: f64, delta1: f64, mu2: f64, c: f64) -> Self {
        Self::new(gamma, delta1, mu2 + c * delta1)
    }

    /// `μ2 = δ2 − c δ1`.
    pub fn mu2(&self, c: f64) -> f64 {
        self.delta2 - c * self.delta1
    }

    /// Whether `γ = 1/12`, the case with a conserved fifth-order energy.
    pub fn is_hamiltonian(&self) -> bool {
        (self.gamma - 1.0 / 12.0).abs() < 1e-15
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Model {
    ThirdOrder(ThirdOrderParams),
    FifthOrder(FifthOrderParams),
}

/// Traveling-wave data: speed, integration constants and the derived
/// highest-order coefficient (`μ1` or `μ2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveContext {
    pub c: f64,
    /// Second integration constant of the third-order reduction.
    pub bc_a0: f64,
    /// First integration constant of the third-order reduction.
    pub bc_a1: f64,
    /// Integration constant of the fifth-order reduction.
    pub bc_b1: f64,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
}

impl WaveContext {
    pub fn third_order(p: &ThirdOrderParams, c: f64, a0: f64, a1: f64) -> Self {
        Self {
            c,
            bc_a0: a0,
            bc_a1: a1,
            bc_b1: 0.0,
            mu1: Some(p.mu1(c)),
            mu2: None,
        }
    }

    pub fn fifth_order(p: &FifthOrderParams, c: f64, b1: f64) -> Self {
        Self {
            c,
            bc_a0: 0.0,
            bc_a1: 0.0,
            bc_b1: b1,
            mu1: None,
            mu2: Some(p.mu2(c)),
        }
    }
}

/// Sign choice for the square roots of the zero-boundary fifth-order
/// coefficients. Both roots use the same sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WaveFamily {
    Sech2,
    TrigPeriodicUnbounded,
    Weierstrass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Profile {
    /// `amplitude · sech²(wavenumber · ξ)`.
    Sech2 { amplitude: f64, wavenumber: f64 },
    /// `amplitude · sec²(wavenumber · ξ)`, poles at `wavenumber · ξ = π/2 + nπ`.
    SecSquared { amplitude: f64, wavenumber: f64 },
    /// `scale · ℘(ξ; g2, g3) + offset`, poles at `ξ = 0` and its real period translates.
    Weierstrass {
        scale: f64,
        offset: f64,
        g2: f64,
        g3: f64,
    },
}

/// Where a profile is singular on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Singularities {
    None,
    /// Poles at `first + n · spacing` for all integers `n`.
    Periodic {
        first: f64,
        spacing: f64,
    },
    /// Pole at the origin only.
    Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TravelingWave {
    pub profile: Profile,
    pub coeffs: CubicCoeffs,
    pub invariants: EllipticInvariants,
    pub model: Option<Model>,
    pub context: Option<WaveContext>,
}

impl TravelingWave {
    fn new(profile: Profile, coeffs: CubicCoeffs) -> Result<Self, WaveError> {
        Ok(Self {
            profile,
            coeffs,
            invariants: invariants_from_cubic(&coeffs)?,
            model: None,
            context: None,
        })
    }

    fn with_origin(mut self, model: Model, context: WaveContext) -> Self {
        self.model = Some(model);
        self.context = Some(context);
        self
    }

    pub fn family(&self) -> WaveFamily {
        match self.profile {
            Profile::Sech2 { .. } => WaveFamily::Sech2,
            Profile::SecSquared { .. } => WaveFamily::TrigPeriodicUnbounded,
            Profile::Weierstrass { .. } => WaveFamily::Weierstrass,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.family() == WaveFamily::Sech2
    }

    /// Wave speed, if the wave came from one of the PDE constructors.
    pub fn speed(&self) -> Option<f64> {
        self.context.map(|ctx| ctx.c)
    }

    pub fn singularities(&self) -> Singularities {
        match self.profile {
            Profile::Sech2 { .. } => Singularities::None,
            Profile::SecSquared { wavenumber, .. } => {
                if wavenumber == 0.0 {
                    Singularities::None
                } else {
                    let spacing = std::f64::consts::PI / wavenumber;
                    Singularities::Periodic {
                        first: 0.5 * spacing,
                        spacing,
                    }
                }
            }
            Profile::Weierstrass { .. } => match self.invariants.real_half_period() {
                Some(w) => Singularities::Periodic {
                    first: 0.0,
                    spacing: 2.0 * w,
                },
                None => Singularities::Origin,
            },
        }
    }

    /// Distance from `xi` to the nearest declared pole.
    pub fn distance_to_singularity(&self, xi: f64) -> Option<f64> {
        match self.singularities() {
            Singularities::None => None,
            Singularities::Origin => Some(xi.abs()),
            Singularities::Periodic { first, spacing } => {
                let n = ((xi - first) / spacing).round();
                Some((xi - first - n * spacing).abs())
            }
        }
    }

    /// `u(ξ)` from the family's closed form.
    pub fn evaluate(&self, xi: f64) -> Result<f64, WaveError> {
        if !xi.is_finite() {
            return Err(WaveError::NonFinite("xi"));
        }
        match self.profile {
            Profile::Sech2 {
                amplitude,
                wavenumber,
            } => {
                let ch = (wavenumber * xi).cosh();
                Ok(amplitude / (ch * ch))
            }
            Profile::SecSquared {
                amplitude,
                wavenumber,
            } => {
                let cs = (wavenumber * xi).cos();
                let sec2 = 1.0 / (cs * cs);
                if !sec2.is_finite() || sec2 > SEC2_POLE_GUARD {
                    return Err(WaveError::SingularPoint { xi });
                }
                Ok(amplitude * sec2)
            }
            Profile::Weierstrass {
                scale,
                offset,
                g2,
                g3,
            } => {
                if xi == 0.0 {
                    return Err(WaveError::SingularPoint { xi });
                }
                match wp_eval(xi, g2, g3) {
                    Ok(p) => Ok(scale * p + offset),
                    Err(EllipticError::PoleProximity { .. }) => {
                        Err(WaveError::SingularPoint { xi })
                    }
                    Err(e) => Err(e.into()),
                }
            }
        }
    }
}

/// Uniform evaluation front end over all families.
pub fn evaluate_wave(w: &TravelingWave, xi: f64) -> Result<f64, WaveError> {
    w.evaluate(xi)
}

/// `u = (4/a3) ℘(ξ; g2, g3) − a2/(3 a3)` for an arbitrary cubic.
pub fn elliptic_transform(coeffs: &CubicCoeffs) -> Result<TravelingWave, WaveError> {
    if !coeffs.is_finite() {
        return Err(WaveError::NonFinite("cubic coefficients"));
    }
    if coeffs.a3 == 0.0 {
        return Err(WaveError::DegenerateCubic);
    }
    let inv = invariants_from_cubic(coeffs)?;
    let profile = Profile::Weierstrass {
        scale: 4.0 / coeffs.a3,
        offset: -coeffs.a2 / (3.0 * coeffs.a3),
        g2: inv.g2,
        g3: inv.g3,
    };
    Ok(TravelingWave {
        profile,
        coeffs: *coeffs,
        invariants: inv,
        model: None,
        context: None,
    })
}

/// Profile of the bounded or unbounded zero-boundary wave with
/// `q3(u) = a2 u² + a3 u³`: `−(a2/a3) sech²(√a2 ξ / 2)` for `a2 > 0`,
/// `−(a2/a3) sec²(√(−a2) ξ / 2)` for `a2 < 0`.
fn zero_bc_profile(a2: f64, a3: f64) -> Profile {
    let amplitude = -a2 / a3;
    if a2 >= 0.0 {
        Profile::Sech2 {
            amplitude,
            wavenumber: 0.5 * a2.sqrt(),
        }
    } else {
        Profile::SecSquared {
            amplitude,
            wavenumber: 0.5 * (-a2).sqrt(),
        }
    }
}
