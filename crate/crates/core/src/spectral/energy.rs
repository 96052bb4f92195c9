use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::{grid_points, Equation, GridState, Integrator, SpectralError, SpectralOperator};
use crate::waves::{FifthOrderParams, Model, TravelingWave};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    /// `(1/2)∫u² + (1/6 − ν)u_x² dx`.
    pub e3: f64,
    /// `(1/2)∫u² + (1/6)u_x² + δ1 u_xx² dx`.
    pub e5: f64,
    /// `(γ − 1/12)∫u_x³ dx`, the rate of change of `e5`.
    pub flux: f64,
}

/// Energies by Parseval quadrature and the fifth-order flux with a
/// 2/3-truncated `u_x`.
pub fn energies(state: &GridState, nu: f64, p: &FifthOrderParams) -> EnergyReport {
    let n = state.modes();
    let length = state.length;
    let mut planner = FftPlanner::new();
    let mut u_hat: Vec<Complex64> = state.u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut u_hat);

    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    let mut ux_hat = vec![Complex64::new(0.0, 0.0); n];
    for (j, v) in u_hat.iter().enumerate() {
        let m = if j <= n / 2 {
            j as f64
        } else {
            j as f64 - n as f64
        };
        let k = if j == n / 2 {
            0.0
        } else {
            2.0 * std::f64::consts::PI * m / length
        };
        let w = v.norm_sqr();
        s0 += w;
        s1 += k * k * w;
        s2 += k.powi(4) * w;
        if 3.0 * m.abs() < n as f64 {
            ux_hat[j] = Complex64::new(0.0, k) * v;
        }
    }
    let q = length / (n as f64 * n as f64);
    let (int_u2, int_ux2, int_uxx2) = (q * s0, q * s1, q * s2);

    let flux_coeff = p.gamma - 1.0 / 12.0;
    let flux = if flux_coeff == 0.0 {
        0.0
    } else {
        planner.plan_fft_inverse(n).process(&mut ux_hat);
        let cube: f64 = ux_hat.iter().map(|v| (v.re / n as f64).powi(3)).sum();
        flux_coeff * cube * length / n as f64
    };
    EnergyReport {
        e3: 0.5 * (int_u2 + (1.0 / 6.0 - nu) * int_ux2),
        e5: 0.5 * (int_u2 + int_ux2 / 6.0 + p.delta1 * int_uxx2),
        flux,
    }
}

/// `x` wrapped into `[−L/2, L/2)`.
fn wrap(x: f64, length: f64) -> f64 {
    (x + 0.5 * length).rem_euclid(length) - 0.5 * length
}

fn check_model(w: &TravelingWave, op: &SpectralOperator) -> Result<f64, SpectralError> {
    if !w.is_bounded() {
        return Err(SpectralError::InitialData(
            "only bounded families can be propagated".into(),
        ));
    }
    let c = w
        .speed()
        .ok_or_else(|| SpectralError::InitialData("wave carries no speed".into()))?;
    let matches = match (w.model, op.equation) {
        (Some(Model::ThirdOrder(p)), Equation::ThirdOrder { nu }) => p.nu == nu,
        (Some(Model::FifthOrder(p)), Equation::FifthOrder(q)) => p == q,
        _ => false,
    };
    if !matches {
        return Err(SpectralError::InitialData(
            "wave and operator describe different equations".into(),
        ));
    }
    Ok(c)
}

/// Samples of the exact wave translated by `shift` on the operator's grid.
pub fn sample_wave(
    w: &TravelingWave,
    op: &SpectralOperator,
    shift: f64,
) -> Result<Vec<f64>, SpectralError> {
    grid_points(op.length, op.modes())
        .into_iter()
        .map(|x| Ok(w.evaluate(wrap(x - shift, op.length))?))
        .collect()
}

/// Relative L² distance between the simulated `u(·, T)` from exact initial
/// data and the exact profile translated by `cT`.
///
/// The step is shortened so that a whole number of steps lands on `T`.
pub fn propagate_and_compare(
    w: &TravelingWave,
    op: &SpectralOperator,
    t_final: f64,
    dt: f64,
) -> Result<f64, SpectralError> {
    let c = check_model(w, op)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SpectralError::InvalidStep(dt));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(SpectralError::InvalidStep(t_final));
    }
    let mut state = GridState::new(op.length, sample_wave(w, op, 0.0)?)?;
    let steps = (t_final / dt).ceil() as usize;
    if steps > 0 {
        let mut integrator = Integrator::new(op, t_final / steps as f64)?;
        integrator.advance(&mut state, steps)?;
    }
    let exact = sample_wave(w, op, c * t_final)?;
    let diff: f64 = state
        .u
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = exact.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(if norm > 0.0 { diff / norm } else { diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_third_order_operator;
    use crate::waves::{third_order_soliton, ThirdOrderParams};

    #[test]
    fn zero_state_has_zero_energy() {
        let s = GridState::new(10.0, vec![0.0; 32]).unwrap();
        let e = energies(&s, 0.0, &FifthOrderParams::new(0.5, 1.0, 1.0));
        assert_eq!((e.e3, e.e5, e.flux), (0.0, 0.0, 0.0));
    }

    #[test]
    fn soliton_energy_closed_form() {
        // ∫sech⁴(kx) = 4/(3k), ∫sech⁴ tanh² = 4/(15k); u_x = −4k sech² tanh
        let k = 3f64.sqrt() / 4.0;
        let s = GridState::from_fn(160.0, 1024, |x| 2.0 / (k * x).cosh().powi(2)).unwrap();
        let e = energies(&s, -1.0, &FifthOrderParams::new(1.0 / 12.0, 1.0, 0.0));
        let want = 0.5 * (16.0 / (3.0 * k) + 7.0 / 6.0 * 16.0 * 4.0 * k / 15.0);
        assert!((e.e3 - want).abs() < 1e-10 * want, "{} vs {want}", e.e3);
        assert!((want - 7.2361).abs() < 1e-4);
        assert_eq!(e.flux, 0.0);
    }

    #[test]
    fn sine_flux_vanishes_by_symmetry() {
        let s = GridState::from_fn(2.0 * std::f64::consts::PI, 64, |x| x.sin()).unwrap();
        let e = energies(&s, 0.0, &FifthOrderParams::new(1.0 / 6.0, 1.0, 0.0));
        // ∫cos³ = 0 over a period; E5 = (1/2)(π + π/6 + π)
        assert!(e.flux.abs() < 1e-14);
        let want = 0.5 * std::f64::consts::PI * (2.0 + 1.0 / 6.0);
        assert!((e.e5 - want).abs() < 1e-12);
    }

    #[test]
    fn zero_wave_propagates_exactly() {
        let w = third_order_soliton(&ThirdOrderParams::new(-1.0), 1.0).unwrap();
        let op = build_third_order_operator(-1.0, 40.0, 64).unwrap();
        assert_eq!(propagate_and_compare(&w, &op, 1.0, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_operator_is_rejected() {
        let w = third_order_soliton(&ThirdOrderParams::new(-1.0), 2.0).unwrap();
        let op = build_third_order_operator(0.0, 40.0, 64).unwrap();
        assert!(matches!(
            propagate_and_compare(&w, &op, 1.0, 0.1),
            Err(SpectralError::InitialData(_))
        ));
    }

    #[test]
    fn wrap_into_domain() {
        assert_eq!(wrap(6.0, 10.0), -4.0);
        assert_eq!(wrap(-5.0, 10.0), -5.0);
        assert_eq!(wrap(5.0, 10.0), -5.0);
    }
}
