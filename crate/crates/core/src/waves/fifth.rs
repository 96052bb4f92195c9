use super::{
    elliptic_transform, zero_bc_profile, Branch, FifthOrderParams, Model, Profile, TravelingWave,
    WaveContext, WaveError,
};
use crate::elliptic::CubicCoeffs;

/// Largest constraint residual `|h|` accepted when building a zero-boundary
/// fifth-order wave.
pub const CONSTRAINT_GATE: f64 = 1e-10;

const BISECTION_MAX_ITER: usize = 200;
const CONSTRAINT_ROOT_TOL: f64 = 1e-12;

/// `a3 = (1 − 60γ ± √((1 − 60γ)² + 1080 μ2)) / (180 μ2)`, shared by the zero-
/// and nonzero-boundary systems.
pub(super) fn branch_a3(gamma: f64, mu2: f64, branch: Branch) -> Result<f64, WaveError> {
    if !(gamma.is_finite() && mu2.is_finite()) {
        return Err(WaveError::NonFinite("gamma or mu2"));
    }
    if mu2 == 0.0 {
        return Err(WaveError::DegenerateMu { which: "mu2" });
    }
    let k = 1.0 - 60.0 * gamma;
    let rad = k * k + 1080.0 * mu2;
    if rad < 0.0 {
        return Err(WaveError::ComplexDiscriminant(format!(
            "(1-60 gamma)^2 + 1080 mu2 = {rad}"
        )));
    }
    Ok((k + branch.sign() * rad.sqrt()) / (180.0 * mu2))
}

/// `(a2, a3)` of the zero-boundary system for given `γ, μ2, c`.
fn zero_bc_a2_a3(gamma: f64, mu2: f64, c: f64, branch: Branch) -> Result<(f64, f64), WaveError> {
    if !c.is_finite() {
        return Err(WaveError::NonFinite("c"));
    }
    let a3 = branch_a3(gamma, mu2, branch)?;
    let rad = c * c + 144.0 * mu2 * (c - 1.0);
    if rad < 0.0 {
        return Err(WaveError::ComplexDiscriminant(format!(
            "c^2 + 144 mu2 (c-1) = {rad}"
        )));
    }
    let a2 = (-c + branch.sign() * rad.sqrt()) / (12.0 * mu2);
    Ok((a2, a3))
}

fn constraint_from(gamma: f64, mu2: f64, c: f64, a2: f64, a3: f64) -> f64 {
    7.5 * mu2 * a2 * a3 + (4.0 * gamma - 1.0 / 12.0) * a2 + 0.25 * c * a3 + 0.75
}

/// Zero-boundary coefficients `(0, 0, a2, a3)` at the parameters' own `μ2`,
/// together with the constraint residual `h(μ2, c)` (zero on admissible
/// parameters).
pub fn fifth_order_coeffs_zero_bc(
    p: &FifthOrderParams,
    c: f64,
    branch: Branch,
) -> Result<(CubicCoeffs, f64), WaveError> {
    let mu2 = p.mu2(c);
    let (a2, a3) = zero_bc_a2_a3(p.gamma, mu2, c, branch)?;
    Ok((
        CubicCoeffs::new(0.0, 0.0, a2, a3),
        constraint_from(p.gamma, mu2, c, a2, a3),
    ))
}

/// `h(μ2, c) = (15/2) μ2 a2 a3 + (4γ − 1/12) a2 + (c/4) a3 + 3/4`.
pub fn fifth_order_constraint(
    p: &FifthOrderParams,
    mu2: f64,
    c: f64,
    branch: Branch,
) -> Result<f64, WaveError> {
    let (a2, a3) = zero_bc_a2_a3(p.gamma, mu2, c, branch)?;
    Ok(constraint_from(p.gamma, mu2, c, a2, a3))
}

/// Finds `μ2` in `bracket` with `h(μ2, c) = 0` by bisection.
///
/// Both endpoints must give real coefficients and `h` must change sign (or
/// vanish) between them. A sign change across a pole of `h` is reported as
/// [`WaveError::NoRootInBracket`].
pub fn solve_constraint_mu2(
    p: &FifthOrderParams,
    c: f64,
    branch: Branch,
    bracket: (f64, f64),
) -> Result<f64, WaveError> {
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let no_root = || WaveError::NoRootInBracket {
        lo: bracket.0,
        hi: bracket.1,
    };
    if lo <= 0.0 && hi >= 0.0 {
        // h is undefined at μ2 = 0
        return Err(no_root());
    }
    let h = |m: f64| fifth_order_constraint(p, m, c, branch);
    let mut h_lo = h(lo)?;
    let h_hi = h(hi)?;
    if h_lo == 0.0 {
        return Ok(lo);
    }
    if h_hi == 0.0 {
        return Ok(hi);
    }
    if h_lo.signum() == h_hi.signum() {
        return Err(no_root());
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let h_mid = h(mid)?;
        if h_mid == 0.0 {
            return Ok(mid);
        }
        if h_mid.signum() == h_lo.signum() {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }
    let (h_l, h_h) = (h(lo)?.abs(), h(hi)?.abs());
    let (root, residual) = if h_l <= h_h { (lo, h_l) } else { (hi, h_h) };
    if residual < CONSTRAINT_ROOT_TOL {
        Ok(root)
    } else {
        Err(no_root())
    }
}

/// All constraint roots `μ2` found between sign changes of `h` on `grid`
/// (ascending). The ends of the interval of real coefficients are added to
/// the scan when they fall inside the grid; sign changes across `μ2 = 0`
/// are discarded.
pub fn scan_constraint_roots(
    p: &FifthOrderParams,
    c: f64,
    branch: Branch,
    grid: &[f64],
) -> Vec<f64> {
    let (lo, hi) = grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &m| {
            (l.min(m), h.max(m))
        });
    let k = 1.0 - 60.0 * p.gamma;
    let mut edges = vec![-k * k / 1080.0];
    if c != 1.0 {
        edges.push(c * c / (144.0 * (1.0 - c)));
    }
    let mut points = grid.to_vec();
    for e in edges {
        for x in [e * (1.0 - 1e-12), e * (1.0 + 1e-12)] {
            if x > lo && x < hi {
                points.push(x);
            }
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let grid = &points[..];
    let h: Vec<Option<f64>> = grid
        .iter()
        .map(|&m| fifth_order_constraint(p, m, c, branch).ok())
        .collect();
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let (Some(h0), Some(h1)) = (h[i], h[i + 1]) else {
            continue;
        };
        if h0 == 0.0 {
            if roots.last() != Some(&grid[i]) {
                roots.push(grid[i]);
            }
            continue;
        }
        if h0.signum() == h1.signum() || h1 == 0.0 {
            continue;
        }
        if let Ok(root) = solve_constraint_mu2(p, c, branch, (grid[i], grid[i + 1])) {
            roots.push(root);
        }
    }
    if let (Some(&last), Some(Some(h_last))) = (grid.last(), h.last()) {
        if *h_last == 0.0 && roots.last() != Some(&last) {
            roots.push(last);
        }
    }
    roots
}

fn zero_bc_wave(
    p: &FifthOrderParams,
    mu2: f64,
    c: f64,
    branch: Branch,
) -> Result<TravelingWave, WaveError> {
    let aligned = FifthOrderParams::with_mu2(p.gamma, p.delta1, mu2, c);
    let ctx = WaveContext::fifth_order(&aligned, c, 0.0);
    let (coeffs, h) = fifth_order_coeffs_zero_bc(&aligned, c, branch)?;
    if !(h.abs() < CONSTRAINT_GATE) {
        return Err(WaveError::ConstraintViolated { h });
    }
    let profile = zero_bc_profile(coeffs.a2, coeffs.a3);
    Ok(TravelingWave::new(profile, coeffs)?.with_origin(Model::FifthOrder(aligned), ctx))
}

/// Zero-boundary fifth-order soliton `−(a2/a3) sech²(√a2 ξ / 2)` on the
/// constraint curve.
///
/// The returned wave carries parameters with `δ2 = μ2 + c δ1` so that it is
/// an exact solution of the PDE it reports.
pub fn fifth_order_soliton(
    p: &FifthOrderParams,
    mu2: f64,
    c: f64,
    branch: Branch,
) -> Result<TravelingWave, WaveError> {
    let w = zero_bc_wave(p, mu2, c, branch)?;
    match w.profile {
        Profile::Sech2 { .. } => Ok(w),
        _ => Err(WaveError::WrongRegion(format!(
            "width radicand a2 = {} < 0 gives the unbounded periodic family",
            w.coeffs.a2
        ))),
    }
}

/// Zero-boundary fifth-order unbounded periodic wave `−(a2/a3) sec²(√(−a2) ξ / 2)`.
pub fn fifth_order_periodic(
    p: &FifthOrderParams,
    mu2: f64,
    c: f64,
    branch: Branch,
) -> Result<TravelingWave, WaveError> {
    let w = zero_bc_wave(p, mu2, c, branch)?;
    match w.profile {
        Profile::SecSquared { .. } => Ok(w),
        _ => Err(WaveError::WrongRegion(format!(
            "width radicand a2 = {} >= 0 gives the bounded soliton",
            w.coeffs.a2
        ))),
    }
}

/// Weierstrass wave of the fifth-order equation for a solved coefficient set.
pub fn fifth_order_weierstrass(
    p: &FifthOrderParams,
    ctx: &WaveContext,
    coeffs: &CubicCoeffs,
) -> Result<TravelingWave, WaveError> {
    let ctx = WaveContext::fifth_order(p, ctx.c, ctx.bc_b1);
    Ok(elliptic_transform(coeffs)?.with_origin(Model::FifthOrder(*p), ctx))
}
