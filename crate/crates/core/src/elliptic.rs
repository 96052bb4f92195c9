//! Weierstrass ℘ on the real line, germs of the reduced cubic, and the
//! classification of the solution family.
//!
//! Every traveling wave in this crate satisfies `u'² = a0 + a1 u + a2 u² + a3 u³`.
//! The shift-and-scale `u = (4/a3) ℘ − a2/(3 a3)` maps it onto the Weierstrass
//! normal form `℘'² = 4℘³ − g2 ℘ − g3`; the germs `g2`, `g3` and the
//! discriminant `g2³ − 27 g3²` decide whether ℘ is a genuine elliptic function
//! or degenerates into hyperbolic, trigonometric or rational functions.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Above this magnitude a ℘ value is reported as a pole hit.
pub const WP_OVERFLOW_GUARD: f64 = 1e150;

/// Relative size of the discriminant (against `max(1, |g2|³, g3²)`) below
/// which it is treated as zero.
pub const DELTA_ZERO_REL: f64 = 1e-9;

/// Germs below this absolute value count as zero.
pub const GERM_ZERO_ABS: f64 = 1e-12;

/// Largest `|z| · s` handled by the Laurent series before duplication kicks
/// in, where `s = max(|g2|^(1/4), |g3|^(1/6))`.
const SERIES_TRUST_RADIUS: f64 = 1.0;
const SERIES_MAX_TERMS: usize = 30;
const SERIES_REL_CUTOFF: f64 = 1e-16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("non-finite input")]
    NonFiniteInput,
    #[error("argument {z} is too close to a pole of ℘")]
    PoleProximity { z: f64 },
    #[error("closed-form evaluation requested for a {0:?} solution")]
    WrongClass(SolutionClass),
}

/// Coefficients of `q3(u) = a0 + a1 u + a2 u² + a3 u³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl CubicCoeffs {
    pub fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        Self { a0, a1, a2, a3 }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    /// `q3(u)`.
    pub fn eval(&self, u: f64) -> f64 {
        ((self.a3 * u + self.a2) * u + self.a1) * u + self.a0
    }

    /// Largest magnitude among the four terms of `q3(u)`.
    pub fn largest_term(&self, u: f64) -> f64 {
        let u2 = u * u;
        [
            self.a0.abs(),
            (self.a1 * u).abs(),
            (self.a2 * u2).abs(),
            (self.a3 * u2 * u).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolutionClass {
    GenericElliptic,
    /// Double root `e1 = e2 > 0`: ℘ reduces to `csch²`.
    DegenerateHyperbolic,
    /// Double root `e2 = e3 < 0`: ℘ reduces to `csc²`.
    DegenerateTrigonometric,
    /// Triple root at zero: ℘ = 1/z².
    DegenerateRational,
    /// `a3 = 0`; the cubic is really a quadratic and the ℘ reduction does not apply.
    DegenerateQuadratic,
}

impl SolutionClass {
    pub fn is_degenerate(self) -> bool {
        !matches!(self, SolutionClass::GenericElliptic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticInvariants {
    pub g2: f64,
    pub g3: f64,
    pub delta: f64,
    /// Roots of `4t³ − g2 t − g3`: real roots first in descending order,
    /// then a conjugate pair (positive imaginary part first) if present.
    #[serde(serialize_with = "serialize_roots")]
    pub roots: [Complex64; 3],
    pub class: SolutionClass,
}

fn serialize_roots<S: serde::Serializer>(roots: &[Complex64; 3], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for r in roots {
        seq.serialize_element(&[r.re, r.im])?;
    }
    seq.end()
}

impl EllipticInvariants {
    /// Builds the invariants straight from the germs.
    pub fn from_germs(g2: f64, g3: f64) -> Self {
        let delta = discriminant(g2, g3);
        let mut inv = Self {
            g2,
            g3,
            delta,
            roots: cubic_roots(g2, g3),
            class: SolutionClass::GenericElliptic,
        };
        inv.class = classify(&inv);
        inv
    }

    /// `16 (e1−e2)² (e1−e3)² (e2−e3)²`.
    pub fn delta_from_roots(&self) -> f64 {
        let [e1, e2, e3] = self.roots;
        let p = (e1 - e2) * (e1 - e3) * (e2 - e3);
        16.0 * (p * p).re
    }

    /// The double root of a degenerate cubic, `e = −3 g3 / (2 g2)`.
    pub fn repeated_root(&self) -> Option<f64> {
        match self.class {
            SolutionClass::DegenerateHyperbolic | SolutionClass::DegenerateTrigonometric => {
                Some(-1.5 * self.g3 / self.g2)
            }
            SolutionClass::DegenerateRational => Some(0.0),
            _ => None,
        }
    }

    pub fn real_roots(&self) -> Vec<f64> {
        self.roots
            .iter()
            .filter(|r| r.im == 0.0)
            .map(|r| r.re)
            .collect()
    }

    /// `ω = ∫_{e1}^∞ dt / √(4t³ − g2 t − g3)`, half the real period of ℘,
    /// so that the real poles sit at `2nω`. `None` when ℘ has no real
    /// period (hyperbolic and rational cases).
    pub fn real_half_period(&self) -> Option<f64> {
        use std::f64::consts::PI;
        match self.class {
            SolutionClass::GenericElliptic => {
                let e1 = self.roots[0].re;
                if self.delta > 0.0 {
                    let (e2, e3) = (self.roots[1].re, self.roots[2].re);
                    Some(PI / (2.0 * agm((e1 - e3).sqrt(), (e1 - e2).max(0.0).sqrt())))
                } else {
                    let h = (3.0 * e1 * e1 - 0.25 * self.g2).sqrt();
                    let kp2 = 0.5 + 0.75 * e1 / h;
                    Some(PI / (2.0 * agm(h.sqrt(), (h * kp2).sqrt())))
                }
            }
            SolutionClass::DegenerateTrigonometric => {
                let e = self.repeated_root()?;
                Some(PI / (2.0 * (-3.0 * e).sqrt()))
            }
            _ => None,
        }
    }
}

/// Arithmetic-geometric mean.
fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a.abs() {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

pub fn discriminant(g2: f64, g3: f64) -> f64 {
    g2 * g2 * g2 - 27.0 * g3 * g3
}

/// Germs, discriminant, roots and class for the cubic `q3`.
pub fn invariants_from_cubic(coeffs: &CubicCoeffs) -> Result<EllipticInvariants, EllipticError> {
    if !coeffs.is_finite() {
        return Err(EllipticError::NonFiniteInput);
    }
    let CubicCoeffs { a0, a1, a2, a3 } = *coeffs;
    let g2 = (a2 * a2 - 3.0 * a1 * a3) / 12.0;
    let g3 = (9.0 * a1 * a2 * a3 - 27.0 * a0 * a3 * a3 - 2.0 * a2 * a2 * a2) / 432.0;
    let mut inv = EllipticInvariants::from_germs(g2, g3);
    if a3 == 0.0 {
        inv.class = SolutionClass::DegenerateQuadratic;
    }
    Ok(inv)
}

fn p3(t: f64, g2: f64, g3: f64) -> f64 {
    (4.0 * t * t - g2) * t - g3
}

fn polish_root(mut t: f64, g2: f64, g3: f64) -> f64 {
    for _ in 0..4 {
        let f = p3(t, g2, g3);
        let df = 12.0 * t * t - g2;
        if df == 0.0 || f == 0.0 {
            break;
        }
        let next = t - f / df;
        if !next.is_finite() || p3(next, g2, g3).abs() >= f.abs() {
            break;
        }
        t = next;
    }
    t
}

/// Roots of `4t³ − g2 t − g3`.
pub fn cubic_roots(g2: f64, g3: f64) -> [Complex64; 3] {
    let re = |x: f64| Complex64::new(x, 0.0);
    if g2 == 0.0 && g3 == 0.0 {
        return [re(0.0); 3];
    }
    let delta = discriminant(g2, g3);
    let scale = (g2 * g2 * g2).abs().max(27.0 * g3 * g3);

    if delta.abs() <= 4.0 * f64::EPSILON * scale && g2 > 0.0 {
        // 4(t − e)²(t + 2e) with g2 = 12e², g3 = −8e³
        let e = -1.5 * g3 / g2;
        let mut r = [e, e, -2.0 * e];
        r.sort_by(|a, b| b.total_cmp(a));
        return r.map(re);
    }

    if delta > 0.0 {
        // three distinct real roots, g2 > 0 necessarily
        let amp = 2.0 * (g2 / 12.0).sqrt();
        let arg = (1.5 * g3 / g2 * (12.0 / g2).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
        let mut r =
            [0.0, 1.0, 2.0].map(|k: f64| polish_root(amp * (theta - two_pi_3 * k).cos(), g2, g3));
        r.sort_by(|a, b| b.total_cmp(a));
        return r.map(re);
    }

    // one real root and a complex pair; depressed form t³ + p t + q
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
    let a = -(q / 2.0 + q.signum() * s).cbrt();
    let b = if a != 0.0 { -p / (3.0 * a) } else { 0.0 };
    let r = polish_root(a + b, g2, g3);
    let im = (0.75 * r * r + p).max(0.0).sqrt();
    [
        re(r),
        Complex64::new(-0.5 * r, im),
        Complex64::new(-0.5 * r, -im),
    ]
}

/// Assigns the solution class from the germs and discriminant.
pub fn classify(inv: &EllipticInvariants) -> SolutionClass {
    let (g2, g3) = (inv.g2, inv.g3);
    if g2.abs() < GERM_ZERO_ABS && g3.abs() < GERM_ZERO_ABS {
        return SolutionClass::DegenerateRational;
    }
    let threshold = DELTA_ZERO_REL * 1f64.max((g2 * g2 * g2).abs()).max(g3 * g3);
    if inv.delta.abs() >= threshold {
        return SolutionClass::GenericElliptic;
    }
    if g3 < 0.0 {
        SolutionClass::DegenerateHyperbolic
    } else if g3 > 0.0 {
        SolutionClass::DegenerateTrigonometric
    } else {
        SolutionClass::DegenerateRational
    }
}

/// Laurent coefficients `c_k` of `℘(z) = z⁻² + Σ_{k≥2} c_k z^{2k−2}`.
fn laurent_coefficients(g2: f64, g3: f64) -> [f64; SERIES_MAX_TERMS + 2] {
    let mut c = [0.0; SERIES_MAX_TERMS + 2];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..c.len() {
        let conv: f64 = (2..=k - 2).map(|m| c[m] * c[k - m]).sum();
        c[k] = 3.0 * conv / (((2 * k + 1) * (k - 3)) as f64);
    }
    c
}

/// ℘ from the truncated Laurent series.
fn wp_series(z: f64, g2: f64, g3: f64) -> f64 {
    let c = laurent_coefficients(g2, g3);
    let w = z * z;
    let mut value = 1.0 / w;
    // power = z^{2k-2}
    let mut power = 1.0;
    for (k, &ck) in c.iter().enumerate().skip(2).take(SERIES_MAX_TERMS) {
        power *= w;
        let term = ck * power;
        value += term;
        if term.abs() < SERIES_REL_CUTOFF * value.abs() && k > 3 {
            break;
        }
    }
    value
}

/// `℘(z; g2, g3)` for real `z ≠ 0`.
///
/// The argument is halved until it lies inside the series trust radius, the
/// Laurent series supplies ℘ there, and the duplication formula
/// `℘(2z) = (x⁴ + g2 x²/2 + 2 g3 x + g2²/16) / (4x³ − g2 x − g3)` carries it
/// back out.
///
/// When ℘ has a real period the argument is first folded into `[0, ω]`, and
/// the upper half `ω − t` goes through the half-period shift
/// `℘(ω + t) = e1 + (3e1² − g2/4) / (℘(t) − e1)`, which keeps every
/// duplication step away from the root `e1` where its denominator vanishes.
pub fn wp_eval(z: f64, g2: f64, g3: f64) -> Result<f64, EllipticError> {
    if !(z.is_finite() && g2.is_finite() && g3.is_finite()) {
        return Err(EllipticError::NonFiniteInput);
    }
    let za = z.abs();
    if za == 0.0 {
        return Err(EllipticError::PoleProximity { z });
    }
    if g2 == 0.0 && g3 == 0.0 {
        return guard(1.0 / (za * za), z);
    }

    let s = germ_scale(g2, g3);
    if za * s <= SERIES_TRUST_RADIUS {
        return guard(wp_series(za, g2, g3), z);
    }
    let inv = EllipticInvariants::from_germs(g2, g3);
    let Some(omega) = inv.real_half_period().filter(|w| w.is_finite() && *w > 0.0) else {
        return wp_doubling(za, g2, g3, s).and_then(|x| guard(x, z));
    };
    let period = 2.0 * omega;
    let mut r = za - period * (za / period).floor();
    if r > omega {
        r = period - r;
    }
    if r <= 0.5 * omega {
        if r == 0.0 {
            return Err(EllipticError::PoleProximity { z });
        }
        return wp_doubling(r, g2, g3, s).and_then(|x| guard(x, z));
    }
    let e1 = inv.roots[0].re;
    let t = omega - r;
    if t == 0.0 {
        return Ok(e1);
    }
    let x = wp_doubling(t, g2, g3, s).map_err(|_| EllipticError::PoleProximity { z })?;
    guard(e1 + (3.0 * e1 * e1 - 0.25 * g2) / (x - e1), z)
}

fn germ_scale(g2: f64, g3: f64) -> f64 {
    g2.abs().powf(0.25).max(g3.abs().powf(1.0 / 6.0))
}

fn guard(x: f64, z: f64) -> Result<f64, EllipticError> {
    if x.is_finite() && x.abs() <= WP_OVERFLOW_GUARD {
        Ok(x)
    } else {
        Err(EllipticError::PoleProximity { z })
    }
}

fn wp_doubling(za: f64, g2: f64, g3: f64, s: f64) -> Result<f64, EllipticError> {
    let mut halvings = 0u32;
    let mut z0 = za;
    while z0 * s > SERIES_TRUST_RADIUS {
        z0 *= 0.5;
        halvings += 1;
    }
    let mut x = wp_series(z0, g2, g3);
    for _ in 0..halvings {
        let x2 = x * x;
        let num = (x2 + 0.5 * g2) * x2 + 2.0 * g3 * x + g2 * g2 / 16.0;
        x = num / p3(x, g2, g3);
        if !x.is_finite() || x.abs() > WP_OVERFLOW_GUARD {
            return Err(EllipticError::PoleProximity { z: za });
        }
    }
    Ok(x)
}

/// Closed forms of ℘ for a vanishing discriminant, with `repeated_root` the
/// double root `e`:
/// hyperbolic `e + 3e csch²(√(3e) z)`, trigonometric `e − 3e csc²(√(−3e) z)`,
/// rational `1/z²`.
pub fn wp_eval_degenerate(
    z: f64,
    class: SolutionClass,
    repeated_root: f64,
) -> Result<f64, EllipticError> {
    if !(z.is_finite() && repeated_root.is_finite()) {
        return Err(EllipticError::NonFiniteInput);
    }
    let e = repeated_root;
    let value = match class {
        SolutionClass::DegenerateRational => 1.0 / (z * z),
        SolutionClass::DegenerateHyperbolic => {
            let sh = ((3.0 * e).sqrt() * z).sinh();
            e + 3.0 * e / (sh * sh)
        }
        SolutionClass::DegenerateTrigonometric => {
            let sn = ((-3.0 * e).sqrt() * z).sin();
            e - 3.0 * e / (sn * sn)
        }
        other => return Err(EllipticError::WrongClass(other)),
    };
    if !value.is_finite() || value.abs() > WP_OVERFLOW_GUARD {
        return Err(EllipticError::PoleProximity { z });
    }
    Ok(value)
}
