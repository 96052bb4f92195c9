use serde::Serialize;

use super::{
    elliptic_transform, zero_bc_profile, Model, Profile, ThirdOrderParams, TravelingWave,
    WaveContext, WaveError,
};
use crate::elliptic::CubicCoeffs;

/// Existence region of the zero-boundary third-order wave in the `(c, ν)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionTag {
    BoundedBright,
    BoundedDark,
    Unbounded,
    Boundary,
}

impl RegionTag {
    pub fn is_bounded(self) -> bool {
        matches!(self, RegionTag::BoundedBright | RegionTag::BoundedDark)
    }

    pub fn label(self) -> &'static str {
        match self {
            RegionTag::BoundedBright => "BoundedBright",
            RegionTag::BoundedDark => "BoundedDark",
            RegionTag::Unbounded => "Unbounded",
            RegionTag::Boundary => "Boundary",
        }
    }
}

fn checked_mu1(p: &ThirdOrderParams, c: f64) -> Result<f64, WaveError> {
    if !p.nu.is_finite() || !c.is_finite() {
        return Err(WaveError::NonFinite("nu or c"));
    }
    let mu1 = p.mu1(c);
    if mu1 == 0.0 {
        return Err(WaveError::DegenerateMu { which: "mu1" });
    }
    Ok(mu1)
}

/// `a0 = A0/μ1`, `a1 = 2A1/μ1`, `a2 = (c − 1)/μ1`, `a3 = −1/(2μ1)`.
pub fn third_order_coeffs(
    p: &ThirdOrderParams,
    ctx: &WaveContext,
) -> Result<CubicCoeffs, WaveError> {
    let mu1 = checked_mu1(p, ctx.c)?;
    Ok(CubicCoeffs::new(
        ctx.bc_a0 / mu1,
        2.0 * ctx.bc_a1 / mu1,
        (ctx.c - 1.0) / mu1,
        -0.5 / mu1,
    ))
}

pub fn region_classify_third(c: f64, nu: f64) -> RegionTag {
    let mu1 = ThirdOrderParams::new(nu).mu1(c);
    if mu1 == 0.0 || c == 1.0 {
        return RegionTag::Boundary;
    }
    let ratio = (c - 1.0) / mu1;
    if ratio > 0.0 {
        if c > 1.0 {
            RegionTag::BoundedBright
        } else {
            RegionTag::BoundedDark
        }
    } else {
        RegionTag::Unbounded
    }
}

fn zero_bc_wave(p: &ThirdOrderParams, c: f64) -> Result<TravelingWave, WaveError> {
    let ctx = WaveContext::third_order(p, c, 0.0, 0.0);
    let coeffs = third_order_coeffs(p, &ctx)?;
    // −a2/a3 = 2(c − 1); √a2/2 = (1/2)√((c − 1)/μ1)
    let profile = zero_bc_profile(coeffs.a2, coeffs.a3);
    Ok(TravelingWave::new(profile, coeffs)?.with_origin(Model::ThirdOrder(*p), ctx))
}

/// Bright (`c > 1`) or dark (`c < 1`) soliton `2(c − 1) sech²(½√((c − 1)/μ1) ξ)`.
///
/// At `c = 1` the amplitude vanishes and the zero wave is returned.
pub fn third_order_soliton(p: &ThirdOrderParams, c: f64) -> Result<TravelingWave, WaveError> {
    let mu1 = checked_mu1(p, c)?;
    let ratio = (c - 1.0) / mu1;
    if ratio < 0.0 {
        return Err(WaveError::WrongRegion(format!(
            "(c-1)/mu1 = {ratio} < 0 gives the unbounded periodic family"
        )));
    }
    let w = zero_bc_wave(p, c)?;
    debug_assert!(matches!(w.profile, Profile::Sech2 { .. }));
    Ok(w)
}

/// Unbounded periodic wave `2(c − 1) sec²(½√(−(c − 1)/μ1) ξ)`.
pub fn third_order_periodic(p: &ThirdOrderParams, c: f64) -> Result<TravelingWave, WaveError> {
    let mu1 = checked_mu1(p, c)?;
    let ratio = (c - 1.0) / mu1;
    if ratio >= 0.0 {
        return Err(WaveError::WrongRegion(format!(
            "(c-1)/mu1 = {ratio} >= 0 has no unbounded periodic wave"
        )));
    }
    zero_bc_wave(p, c)
}

/// Weierstrass wave `(2/3)(c − 1) − 8 μ1 ℘(ξ; g2, g3)` for arbitrary
/// integration constants; germs come from the general cubic formulas.
pub fn third_order_weierstrass(
    p: &ThirdOrderParams,
    ctx: &WaveContext,
) -> Result<TravelingWave, WaveError> {
    let coeffs = third_order_coeffs(p, ctx)?;
    let ctx = WaveContext::third_order(p, ctx.c, ctx.bc_a0, ctx.bc_a1);
    Ok(elliptic_transform(&coeffs)?.with_origin(Model::ThirdOrder(*p), ctx))
}
