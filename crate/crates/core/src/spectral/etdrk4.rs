use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{Equation, GridState, SpectralError, SpectralOperator, BLOWUP_GUARD};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `φ1, φ2, φ3` at `z`: Taylor series inside the unit disc, the recurrence
/// `φ_{k+1} = (φ_k − 1/k!)/z` outside it.
fn phi_functions(z: Complex64) -> [Complex64; 3] {
    if z.norm() < 1.0 {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (idx, slot) in out.iter_mut().enumerate() {
            // φ_k(z) = Σ_j z^j / (j + k)!
            let k = idx + 1;
            let mut term = Complex64::new(1.0 / (1..=k).product::<usize>() as f64, 0.0);
            let mut acc = term;
            for j in 1..30 {
                term = term * z / (j + k) as f64;
                acc += term;
                if term.norm() < 1e-18 * acc.norm() {
                    break;
                }
            }
            *slot = acc;
        }
        out
    } else {
        let e = z.exp();
        let p1 = (e - 1.0) / z;
        let p2 = (p1 - 1.0) / z;
        let p3 = (p2 - 0.5) / z;
        [p1, p2, p3]
    }
}

struct Coefficients {
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

impl Coefficients {
    fn new(op: &SpectralOperator, dt: f64) -> Self {
        let n = op.modes();
        let mut c = Coefficients {
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for &phi in &op.phi {
            let z = -I * phi * dt;
            let [p1, p2, p3] = phi_functions(z);
            let [h1, _, _] = phi_functions(0.5 * z);
            c.e.push(z.exp());
            c.e2.push((0.5 * z).exp());
            c.q.push(0.5 * dt * h1);
            c.f1.push(dt * (p1 - 3.0 * p2 + 4.0 * p3));
            c.f2.push(dt * (p2 - 2.0 * p3));
            c.f3.push(dt * (4.0 * p3 - p2));
        }
        c
    }
}

/// Fourth-order exponential Runge–Kutta (Cox–Matthews) stepper for one
/// operator and one fixed time step.
pub struct Integrator {
    op: SpectralOperator,
    dt: f64,
    coeffs: Coefficients,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    /// `max|Im u| / max|u|` of the last step before symmetry was restored.
    pub last_imag_residue: f64,
}

impl Integrator {
    pub fn new(op: &SpectralOperator, dt: f64) -> Result<Self, SpectralError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SpectralError::InvalidStep(dt));
        }
        let n = op.modes();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Ok(Self {
            op: op.clone(),
            dt,
            coeffs: Coefficients::new(op, dt),
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            last_imag_residue: 0.0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn operator(&self) -> &SpectralOperator {
        &self.op
    }

    pub(super) fn fft(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    pub(super) fn ifft(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
        let inv = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|v| *v *= inv);
    }

    pub(super) fn to_spectral(&mut self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft(&mut buf);
        buf
    }

    /// Real samples of `IFFT(v̂)`.
    pub(super) fn to_physical(&mut self, v_hat: &[Complex64]) -> Vec<f64> {
        let mut buf = v_hat.to_vec();
        self.ifft(&mut buf);
        buf.into_iter().map(|v| v.re).collect()
    }

    fn derivative(&mut self, v_hat: &[Complex64]) -> Vec<f64> {
        let d: Vec<Complex64> = v_hat
            .iter()
            .zip(&self.op.wavenumbers)
            .map(|(v, &k)| I * k * v)
            .collect();
        self.to_physical(&d)
    }

    /// `−iψ · mask · N̂(u)` for the transformed field `v̂`.
    fn nonlinear(&mut self, v_hat: &[Complex64]) -> Vec<Complex64> {
        let u = self.to_physical(v_hat);
        let mut n_hat = match self.op.equation {
            Equation::ThirdOrder { .. } => {
                let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
                self.to_spectral(&sq)
            }
            Equation::FifthOrder(p) => {
                let ux = self.derivative(v_hat);
                let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
                let rest: Vec<f64> = u
                    .iter()
                    .zip(&ux)
                    .map(|(v, d)| -d * d / 12.0 - 0.25 * v * v * v)
                    .collect();
                let sq_hat = self.to_spectral(&sq);
                let rest_hat = self.to_spectral(&rest);
                sq_hat
                    .iter()
                    .zip(&rest_hat)
                    .zip(&self.op.wavenumbers)
                    .map(|((s, r), &k)| (0.75 - p.gamma * k * k) * s + r)
                    .collect()
            }
        };
        for (j, v) in n_hat.iter_mut().enumerate() {
            *v = if self.op.dealias[j] {
                -I * self.op.psi[j] * *v
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        n_hat
    }

    /// Advances `û` by one step in place.
    fn step_spectral(&mut self, u: &mut [Complex64]) {
        let nu = self.nonlinear(u);
        let c = &self.coeffs;
        let a: Vec<Complex64> = (0..u.len())
            .map(|j| c.e2[j] * u[j] + c.q[j] * nu[j])
            .collect();
        let na = self.nonlinear(&a);
        let c = &self.coeffs;
        let b: Vec<Complex64> = (0..u.len())
            .map(|j| c.e2[j] * u[j] + c.q[j] * na[j])
            .collect();
        let nb = self.nonlinear(&b);
        let c = &self.coeffs;
        let cc: Vec<Complex64> = (0..u.len())
            .map(|j| c.e2[j] * a[j] + c.q[j] * (2.0 * nb[j] - nu[j]))
            .collect();
        let nc = self.nonlinear(&cc);
        let c = &self.coeffs;
        for j in 0..u.len() {
            u[j] =
                c.e[j] * u[j] + c.f1[j] * nu[j] + 2.0 * c.f2[j] * (na[j] + nb[j]) + c.f3[j] * nc[j];
        }
    }

    /// Advances `state` by one time step.
    pub fn step(&mut self, state: &mut GridState) -> Result<(), SpectralError> {
        if state.modes() != self.op.modes() || state.length != self.op.length {
            return Err(SpectralError::InvalidGrid(
                "state grid does not match the operator".into(),
            ));
        }
        let mut u_hat = self.to_spectral(&state.u);
        self.step_spectral(&mut u_hat);
        let mut raw = u_hat.clone();
        self.ifft(&mut raw);
        let (re_max, im_max) = raw.iter().fold((0.0f64, 0.0f64), |(r, i), v| {
            (r.max(v.re.abs()), i.max(v.im.abs()))
        });
        self.last_imag_residue = if re_max > 0.0 {
            im_max / re_max
        } else {
            im_max
        };
        restore_conjugate_symmetry(&mut u_hat);
        state.u = self.to_physical(&u_hat);
        state.t += self.dt;
        let max_abs = state.u.iter().fold(0.0f64, |m, v| {
            if v.is_finite() {
                m.max(v.abs())
            } else {
                f64::INFINITY
            }
        });
        if !(max_abs <= BLOWUP_GUARD) {
            return Err(SpectralError::BlowUp {
                t: state.t,
                max_abs,
            });
        }
        Ok(())
    }

    /// Takes `steps` steps.
    pub fn advance(&mut self, state: &mut GridState, steps: usize) -> Result<(), SpectralError> {
        for _ in 0..steps {
            self.step(state)?;
        }
        Ok(())
    }

    /// Transformed field (unnormalized forward FFT).
    pub fn spectrum(&mut self, state: &GridState) -> Vec<Complex64> {
        self.to_spectral(&state.u)
    }
}

/// Forces `û_{N−k} = conj(û_k)` and real `û_0`, `û_{N/2}`.
fn restore_conjugate_symmetry(u: &mut [Complex64]) {
    let n = u.len();
    u[0].im = 0.0;
    u[n / 2].im = 0.0;
    for k in 1..n / 2 {
        let avg = 0.5 * (u[k] + u[n - k].conj());
        u[k] = avg;
        u[n - k] = avg.conj();
    }
}

/// One step of size `dt` from `state`; builds a fresh integrator, so loops
/// should use [`Integrator`] directly.
pub fn step(state: &GridState, op: &SpectralOperator, dt: f64) -> Result<GridState, SpectralError> {
    let mut next = state.clone();
    Integrator::new(op, dt)?.step(&mut next)?;
    Ok(next)
}
