use std::path::PathBuf;

use serde::Serialize;

use super::output::{emit, fmt_f64, to_json, Cell, Table};
use super::{CliError, EquationKind, FamilyArg, Format, InitKind, RunConfig};
use crate::elliptic::{CubicCoeffs, EllipticInvariants};
use crate::spectral::{
    build_fifth_order_operator, build_third_order_operator, default_dt, energies, sample_wave,
    GridState, Integrator, SpectralError, SpectralOperator,
};
use crate::verify::{
    linspace, residual_elliptic, residual_elliptic_with, residual_fifth_order,
    residual_third_order, ResidualReport,
};
use crate::waves::{
    fifth_order_coeffs_nonzero_bc, fifth_order_coeffs_zero_bc, fifth_order_periodic,
    fifth_order_soliton, fifth_order_weierstrass, region_classify_third, scan_constraint_roots,
    solve_constraint_mu2, sys2_residuals, third_order_periodic, third_order_soliton,
    third_order_weierstrass, zero_bc_seed, Branch, EquationResidual, FifthOrderParams, Model,
    Profile, ThirdOrderParams, TravelingWave, WaveContext, WaveFamily,
};

const ELLIPTIC_TOL: f64 = 1e-6;
const THIRD_ODE_TOL: f64 = 1e-6;
const FIFTH_ODE_TOL: f64 = 1e-5;
const SYS2_TOL: f64 = 1e-10;
const DEFAULT_XI_RANGE: &str = "-20:20:801";
const DEFAULT_VERIFY_XI_RANGE: &str = "-10:10:50";
const DEFAULT_MU2_RANGE: &str = "-0.1:2:0.001";
const DEFAULT_MODES: usize = 512;
const DEFAULT_T: f64 = 10.0;
const DEFAULT_SNAPSHOTS: usize = 5;
/// Domain length in units of the soliton width `1/wavenumber`.
const DOMAIN_WIDTHS: f64 = 40.0;

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn split_f64(s: &str, name: &str, parts: usize) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| config(format!("--{name}: cannot parse `{s}`")))?;
    if v.len() != parts || v.iter().any(|x| !x.is_finite()) {
        return Err(config(format!(
            "--{name}: expected {parts} finite values separated by ':'"
        )));
    }
    Ok(v)
}

/// `start:stop:step`, inclusive of `stop` when it lies on the lattice.
pub fn parse_step_range(s: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let v = split_f64(s, name, 3)?;
    let (a, b, h) = (v[0], v[1], v[2]);
    if !(h > 0.0) || b < a {
        return Err(config(format!("--{name}: need stop >= start and step > 0")));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + i as f64 * h).collect())
}

/// `start:stop:count`.
pub fn parse_count_range(s: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let v = split_f64(s, name, 3)?;
    let n = v[2];
    if n < 1.0 || n.fract() != 0.0 || v[1] < v[0] {
        return Err(config(format!(
            "--{name}: need stop >= start and a positive integer count"
        )));
    }
    Ok(linspace(v[0], v[1], n as usize))
}

fn grid_or_point(
    range: &Option<String>,
    point: Option<f64>,
    name: &str,
) -> Result<Vec<f64>, CliError> {
    match (range, point) {
        (Some(r), _) => parse_step_range(r, &format!("{name}-range")),
        (None, Some(p)) => Ok(vec![p]),
        (None, None) => Err(config(format!("--{name} or --{name}-range is required"))),
    }
}

fn format_or(cfg: &RunConfig, default: Format) -> Format {
    cfg.format.unwrap_or(default)
}

fn equation_label(e: EquationKind) -> &'static str {
    match e {
        EquationKind::Third => "third",
        EquationKind::Fifth => "fifth",
    }
}

fn family_label(f: WaveFamily) -> &'static str {
    match f {
        WaveFamily::Sech2 => "Sech2",
        WaveFamily::TrigPeriodicUnbounded => "TrigPeriodicUnbounded",
        WaveFamily::Weierstrass => "Weierstrass",
    }
}

/// Fifth-order parameters from `γ`, `δ1` and either `μ2`, `δ2` or a
/// constraint bracket.
fn fifth_params(cfg: &RunConfig, c: f64) -> Result<FifthOrderParams, CliError> {
    let gamma = cfg.require("gamma", cfg.gamma)?;
    let delta1 = cfg.delta1.unwrap_or(0.0);
    let mu2 = match (cfg.mu2, cfg.delta2, &cfg.mu2_bracket) {
        (Some(_), Some(_), _) => return Err(config("give either --mu2 or --delta2, not both")),
        (Some(m), None, _) => m,
        (None, Some(d2), _) => return Ok(FifthOrderParams::new(gamma, delta1, d2)),
        (None, None, Some(b)) => {
            let v = split_f64(b, "mu2-bracket", 2)?;
            let p = FifthOrderParams::new(gamma, delta1, 0.0);
            solve_constraint_mu2(&p, c, cfg.branch()?, (v[0], v[1]))?
        }
        (None, None, None) => {
            return Err(config(
                "one of --mu2, --delta2 or --mu2-bracket is required",
            ))
        }
    };
    Ok(FifthOrderParams::with_mu2(gamma, delta1, mu2, c))
}

/// Builds the traveling wave described by `cfg`.
pub fn build_wave(cfg: &RunConfig) -> Result<TravelingWave, CliError> {
    let c = cfg.require("c", cfg.c)?;
    match cfg.equation()? {
        EquationKind::Third => {
            let p = ThirdOrderParams::new(cfg.require("nu", cfg.nu)?);
            let (a0, a1) = (cfg.a0.unwrap_or(0.0), cfg.a1.unwrap_or(0.0));
            let zero_bc = a0 == 0.0 && a1 == 0.0;
            let family = cfg.family.unwrap_or(if !zero_bc {
                FamilyArg::Weierstrass
            } else if region_classify_third(c, p.nu).is_bounded() || c == 1.0 {
                FamilyArg::Soliton
            } else {
                FamilyArg::Periodic
            });
            if family != FamilyArg::Weierstrass && !zero_bc {
                return Err(config("soliton and periodic families need --a0 = --a1 = 0"));
            }
            Ok(match family {
                FamilyArg::Soliton => third_order_soliton(&p, c)?,
                FamilyArg::Periodic => third_order_periodic(&p, c)?,
                FamilyArg::Weierstrass => {
                    third_order_weierstrass(&p, &WaveContext::third_order(&p, c, a0, a1))?
                }
            })
        }
        EquationKind::Fifth => {
            let p = fifth_params(cfg, c)?;
            let branch = cfg.branch()?;
            let b1 = cfg.b1.unwrap_or(0.0);
            let family = match cfg.family {
                Some(f) => f,
                None if b1 != 0.0 => FamilyArg::Weierstrass,
                None => {
                    let (coeffs, _) = fifth_order_coeffs_zero_bc(&p, c, branch)?;
                    if coeffs.a2 >= 0.0 {
                        FamilyArg::Soliton
                    } else {
                        FamilyArg::Periodic
                    }
                }
            };
            if family != FamilyArg::Weierstrass && b1 != 0.0 {
                return Err(config("soliton and periodic families need --b1 = 0"));
            }
            let mu2 = p.mu2(c);
            Ok(match family {
                FamilyArg::Soliton => fifth_order_soliton(&p, mu2, c, branch)?,
                FamilyArg::Periodic => fifth_order_periodic(&p, mu2, c, branch)?,
                FamilyArg::Weierstrass => {
                    let ctx = WaveContext::fifth_order(&p, c, b1);
                    let seed = zero_bc_seed(&p, c, branch, b1)?;
                    let coeffs = fifth_order_coeffs_nonzero_bc(&p, &ctx, &seed)?;
                    fifth_order_weierstrass(&p, &ctx, &coeffs)?
                }
            })
        }
    }
}

fn push_wave_meta(t: &mut Table, w: &TravelingWave) {
    if let Some(model) = w.model {
        match model {
            Model::ThirdOrder(p) => {
                t.meta("equation", "third");
                t.meta_f64("nu", p.nu);
            }
            Model::FifthOrder(p) => {
                t.meta("equation", "fifth");
                t.meta_f64("gamma", p.gamma);
                t.meta_f64("delta1", p.delta1);
                t.meta_f64("delta2", p.delta2);
            }
        }
    }
    if let Some(ctx) = w.context {
        t.meta_f64("c", ctx.c);
        t.meta_f64("A0", ctx.bc_a0);
        t.meta_f64("A1", ctx.bc_a1);
        t.meta_f64("B1", ctx.bc_b1);
        if let Some(m) = ctx.mu1 {
            t.meta_f64("mu1", m);
        }
        if let Some(m) = ctx.mu2 {
            t.meta_f64("mu2", m);
        }
    }
    t.meta("family", family_label(w.family()));
    match w.profile {
        Profile::Sech2 {
            amplitude,
            wavenumber,
        }
        | Profile::SecSquared {
            amplitude,
            wavenumber,
        } => {
            t.meta_f64("amplitude", amplitude);
            t.meta_f64("wavenumber", wavenumber);
        }
        Profile::Weierstrass { scale, offset, .. } => {
            t.meta_f64("wp_scale", scale);
            t.meta_f64("wp_offset", offset);
        }
    }
    let a = w.coeffs;
    t.meta_f64("a0", a.a0);
    t.meta_f64("a1", a.a1);
    t.meta_f64("a2", a.a2);
    t.meta_f64("a3", a.a3);
    let inv = w.invariants;
    t.meta_f64("g2", inv.g2);
    t.meta_f64("g3", inv.g3);
    t.meta_f64("Delta", inv.delta);
    t.meta("class", format!("{:?}", inv.class));
}

pub fn run_solve(cfg: &RunConfig) -> Result<(), CliError> {
    let w = build_wave(cfg)?;
    let xis = parse_count_range(
        cfg.xi_range.as_deref().unwrap_or(DEFAULT_XI_RANGE),
        "xi-range",
    )?;
    let mut t = Table::new(&["xi", "u"]);
    t.meta("command", "solve");
    push_wave_meta(&mut t, &w);
    for xi in xis {
        // poles are written as empty fields
        t.push(vec![xi.into(), w.evaluate(xi).ok().into()]);
    }
    emit(cfg.out.as_deref(), &t.render(format_or(cfg, Format::Csv)))
}

pub fn run_classify(cfg: &RunConfig) -> Result<(), CliError> {
    let equation = cfg.equation()?;
    let cs = grid_or_point(&cfg.c_range, cfg.c, "c")?;
    let mut t;
    match equation {
        EquationKind::Third => {
            let nus = grid_or_point(&cfg.nu_range, cfg.nu, "nu")?;
            t = Table::new(&["c", "nu", "mu1", "region"]);
            t.meta("command", "classify");
            t.meta("equation", "third");
            for &c in &cs {
                for &nu in &nus {
                    let mu1 = ThirdOrderParams::new(nu).mu1(c);
                    t.push(vec![
                        c.into(),
                        nu.into(),
                        mu1.into(),
                        region_classify_third(c, nu).label().into(),
                    ]);
                }
            }
        }
        EquationKind::Fifth => {
            let gamma = cfg.require("gamma", cfg.gamma)?;
            let branch = cfg.branch()?;
            let mu2s = match (&cfg.mu2_range, cfg.mu2) {
                (None, None) => parse_step_range(DEFAULT_MU2_RANGE, "mu2-range")?,
                _ => grid_or_point(&cfg.mu2_range, cfg.mu2, "mu2")?,
            };
            t = Table::new(&["c", "mu2", "h", "a2"]);
            t.meta("command", "classify");
            t.meta("equation", "fifth");
            t.meta_f64("gamma", gamma);
            t.meta("branch", branch.label());
            let p = FifthOrderParams::new(gamma, 0.0, 0.0);
            for &c in &cs {
                for &mu2 in &mu2s {
                    let p = FifthOrderParams::new(p.gamma, 0.0, mu2);
                    let (h, a2) = match fifth_order_coeffs_zero_bc(&p, c, branch) {
                        Ok((coeffs, h)) => (Some(h), Some(coeffs.a2)),
                        Err(_) => (None, None),
                    };
                    t.push(vec![c.into(), mu2.into(), h.into(), a2.into()]);
                }
            }
        }
    }
    emit(cfg.out.as_deref(), &t.render(format_or(cfg, Format::Csv)))
}

pub fn run_sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let cs = grid_or_point(&cfg.c_range, cfg.c, "c")?;
    let mut t;
    match cfg.equation()? {
        EquationKind::Third => {
            let nu = cfg.require("nu", cfg.nu)?;
            let p = ThirdOrderParams::new(nu);
            t = Table::new(&["c", "region", "family", "amplitude", "wavenumber"]);
            t.meta("command", "sweep");
            t.meta("equation", "third");
            t.meta_f64("nu", nu);
            for &c in &cs {
                let region = region_classify_third(c, nu);
                let w = if region.is_bounded() {
                    third_order_soliton(&p, c).ok()
                } else {
                    third_order_periodic(&p, c).ok()
                };
                let (family, amp, k) = match w.map(|w| (w.family(), w.profile)) {
                    Some((
                        f,
                        Profile::Sech2 {
                            amplitude,
                            wavenumber,
                        }
                        | Profile::SecSquared {
                            amplitude,
                            wavenumber,
                        },
                    )) => (
                        Cell::from(family_label(f)),
                        Some(amplitude),
                        Some(wavenumber),
                    ),
                    _ => (Cell::Empty, None, None),
                };
                t.push(vec![
                    c.into(),
                    region.label().into(),
                    family,
                    amp.into(),
                    k.into(),
                ]);
            }
        }
        EquationKind::Fifth => {
            let gamma = cfg.require("gamma", cfg.gamma)?;
            let branches = match cfg.branch {
                Some(b) => vec![Branch::from(b)],
                None => vec![Branch::Plus, Branch::Minus],
            };
            let mu2s = parse_step_range(
                cfg.mu2_range.as_deref().unwrap_or(DEFAULT_MU2_RANGE),
                "mu2-range",
            )?;
            t = Table::new(&["c", "branch", "mu2", "h", "a2", "amplitude", "family"]);
            t.meta("command", "sweep");
            t.meta("equation", "fifth");
            t.meta_f64("gamma", gamma);
            let p = FifthOrderParams::new(gamma, 0.0, 0.0);
            let (mut bounded, mut unbounded) = (0usize, 0usize);
            for &c in &cs {
                for &branch in &branches {
                    for mu2 in scan_constraint_roots(&p, c, branch, &mu2s) {
                        let q = FifthOrderParams::new(gamma, 0.0, mu2);
                        let (coeffs, h) = fifth_order_coeffs_zero_bc(&q, c, branch)?;
                        let family = if coeffs.a2 >= 0.0 {
                            bounded += 1;
                            WaveFamily::Sech2
                        } else {
                            unbounded += 1;
                            WaveFamily::TrigPeriodicUnbounded
                        };
                        t.push(vec![
                            c.into(),
                            branch.label().into(),
                            mu2.into(),
                            h.into(),
                            coeffs.a2.into(),
                            (-coeffs.a2 / coeffs.a3).into(),
                            family_label(family).into(),
                        ]);
                    }
                }
            }
            t.meta("bounded_roots", bounded.to_string());
            t.meta("unbounded_roots", unbounded.to_string());
        }
    }
    emit(cfg.out.as_deref(), &t.render(format_or(cfg, Format::Csv)))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub equation: &'static str,
    pub family: WaveFamily,
    pub c: Option<f64>,
    pub coeffs: CubicCoeffs,
    pub invariants: EllipticInvariants,
    pub elliptic: ResidualReport,
    pub ode: ResidualReport,
    pub ode_tolerance: f64,
    pub sys2: Option<[EquationResidual; 4]>,
    pub corrupted: Option<ResidualReport>,
    pub passed: bool,
}

pub fn verify_wave(
    w: &TravelingWave,
    xis: &[f64],
    perturb_a2: Option<f64>,
) -> Result<VerifyReport, CliError> {
    let ctx = w
        .context
        .ok_or_else(|| CliError::Construction("wave carries no traveling-wave context".into()))?;
    let elliptic = residual_elliptic(w, xis);
    let (equation, ode, tol, sys2) = match w.model {
        Some(Model::ThirdOrder(p)) => (
            "third",
            residual_third_order(w, p.nu, &ctx, xis),
            THIRD_ODE_TOL,
            None,
        ),
        Some(Model::FifthOrder(p)) => (
            "fifth",
            residual_fifth_order(w, &p, &ctx, xis),
            FIFTH_ODE_TOL,
            Some(sys2_residuals(
                p.gamma,
                p.mu2(ctx.c),
                ctx.c,
                ctx.bc_b1,
                &w.coeffs,
            )),
        ),
        None => return Err(CliError::Construction("wave carries no model".into())),
    };
    let corrupted = perturb_a2.map(|d| {
        let mut bad = w.coeffs;
        bad.a2 += d;
        residual_elliptic_with(w, &bad, xis)
    });
    let passed = elliptic.passes(ELLIPTIC_TOL)
        && ode.passes(tol)
        && sys2.is_none_or(|r| r.iter().all(|e| e.rel < SYS2_TOL))
        && corrupted.is_none_or(|r| !r.passes(ELLIPTIC_TOL));
    Ok(VerifyReport {
        equation,
        family: w.family(),
        c: w.speed(),
        coeffs: w.coeffs,
        invariants: w.invariants,
        elliptic,
        ode,
        ode_tolerance: tol,
        sys2,
        corrupted,
        passed,
    })
}

pub fn run_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let w = build_wave(cfg)?;
    let xis = parse_count_range(
        cfg.xi_range.as_deref().unwrap_or(DEFAULT_VERIFY_XI_RANGE),
        "xi-range",
    )?;
    let report = verify_wave(&w, &xis, cfg.perturb_a2)?;
    let text = match format_or(cfg, Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut t = Table::new(&["check", "max_abs", "max_rel", "samples", "skipped"]);
            t.meta("command", "verify");
            push_wave_meta(&mut t, &w);
            t.meta("passed", report.passed.to_string());
            let mut add = |name: &str, r: &ResidualReport| {
                t.push(vec![
                    name.into(),
                    r.max_abs.into(),
                    r.max_rel.into(),
                    (r.samples as f64).into(),
                    (r.skipped as f64).into(),
                ])
            };
            add("elliptic", &report.elliptic);
            add("ode", &report.ode);
            if let Some(r) = &report.corrupted {
                add("corrupted", r);
            }
            if let Some(sys) = &report.sys2 {
                for (i, e) in sys.iter().enumerate() {
                    t.push(vec![
                        format!("sys2_{}", i + 1).into(),
                        e.abs.into(),
                        e.rel.into(),
                        Cell::Empty,
                        Cell::Empty,
                    ]);
                }
            }
            t.to_csv()
        }
    };
    emit(cfg.out.as_deref(), &text)
}

/// `0.5 sech²(x + 2) + 0.25 sech²(1.5(x − 3))`.
fn bump(x: f64) -> f64 {
    0.5 / (x + 2.0).cosh().powi(2) + 0.25 / (1.5 * (x - 3.0)).cosh().powi(2)
}

struct SimSetup {
    op: SpectralOperator,
    state: GridState,
    wave: Option<TravelingWave>,
    nu: f64,
    fifth: FifthOrderParams,
}

fn simulation_setup(cfg: &RunConfig) -> Result<SimSetup, CliError> {
    let equation = cfg.equation()?;
    let init = cfg.init.unwrap_or(InitKind::Wave);
    let modes = cfg.modes.unwrap_or(DEFAULT_MODES);
    let wave = if init == InitKind::Wave {
        let w = build_wave(cfg)?;
        if !w.is_bounded() {
            return Err(CliError::Construction(format!(
                "{} waves are unbounded and cannot be sampled as initial data",
                family_label(w.family())
            )));
        }
        Some(w)
    } else {
        None
    };
    let length = match (cfg.length, &wave) {
        (Some(l), _) => l,
        (None, Some(w)) => match w.profile {
            Profile::Sech2 { wavenumber, .. } if wavenumber > 0.0 => DOMAIN_WIDTHS / wavenumber,
            _ => DOMAIN_WIDTHS,
        },
        (None, None) => DOMAIN_WIDTHS,
    };
    let (op, nu, fifth) = match equation {
        EquationKind::Third => {
            let nu = cfg.require("nu", cfg.nu)?;
            let op = build_third_order_operator(nu, length, modes)?;
            (op, nu, FifthOrderParams::new(1.0 / 12.0, 0.0, 0.0))
        }
        EquationKind::Fifth => {
            let p = match wave.and_then(|w| w.model) {
                Some(Model::FifthOrder(p)) => p,
                _ => {
                    let c = cfg.c.unwrap_or(0.0);
                    fifth_params(cfg, c)?
                }
            };
            (build_fifth_order_operator(&p, length, modes)?, 0.0, p)
        }
    };
    let u = match init {
        InitKind::Wave => sample_wave(wave.as_ref().expect("wave init"), &op, 0.0)?,
        InitKind::Bump => op.grid().into_iter().map(bump).collect(),
        InitKind::Mode => {
            let m = cfg.mode.unwrap_or(1) as f64;
            let a = cfg.amplitude.unwrap_or(1e-8);
            let k = 2.0 * std::f64::consts::PI * m / length;
            op.grid().into_iter().map(|x| a * (k * x).cos()).collect()
        }
        InitKind::Zero => vec![0.0; modes],
    };
    let state = GridState::new(length, u)?;
    Ok(SimSetup {
        op,
        state,
        wave,
        nu,
        fifth,
    })
}

fn shape_error(w: &TravelingWave, op: &SpectralOperator, state: &GridState) -> Option<f64> {
    let exact = sample_wave(w, op, w.speed()? * state.t).ok()?;
    let diff: f64 = state
        .u
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let norm: f64 = exact.iter().map(|v| v * v).sum();
    Some(if norm > 0.0 {
        (diff / norm).sqrt()
    } else {
        diff.sqrt()
    })
}

fn snapshot_path(out: &std::path::Path, format: Format) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    out.with_file_name(format!("{stem}.snapshots.{ext}"))
}

pub fn run_simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let SimSetup {
        op,
        mut state,
        wave,
        nu,
        fifth,
    } = simulation_setup(cfg)?;
    let t_final = cfg.t_final.unwrap_or(DEFAULT_T);
    if !(t_final >= 0.0) {
        return Err(config("--T must be non-negative"));
    }
    let dt_req = cfg.dt.unwrap_or_else(|| default_dt(&op, &state));
    let steps = (t_final / dt_req).ceil().max(1.0) as usize;
    let dt = if t_final > 0.0 {
        t_final / steps as f64
    } else {
        dt_req
    };
    let steps = if t_final > 0.0 { steps } else { 0 };
    let n_snap = cfg.snapshots.unwrap_or(DEFAULT_SNAPSHOTS).max(2);
    let snap_steps: Vec<usize> = (0..n_snap)
        .map(|i| (i as f64 * steps as f64 / (n_snap - 1) as f64).round() as usize)
        .collect();

    let mut diag = Table::new(&["t", "E3", "E5", "flux", "max_abs", "shape_error"]);
    diag.meta("command", "simulate");
    let mut snaps = Table::new(&["t", "x", "u"]);
    match &wave {
        Some(w) => push_wave_meta(&mut diag, w),
        None => {
            diag.meta("equation", equation_label(cfg.equation()?));
            match op.equation {
                crate::spectral::Equation::ThirdOrder { nu } => diag.meta_f64("nu", nu),
                crate::spectral::Equation::FifthOrder(p) => {
                    diag.meta_f64("gamma", p.gamma);
                    diag.meta_f64("delta1", p.delta1);
                    diag.meta_f64("delta2", p.delta2);
                }
            }
        }
    }
    diag.meta(
        "init",
        format!("{:?}", cfg.init.unwrap_or(InitKind::Wave)).to_lowercase(),
    );
    diag.meta_f64("L", op.length);
    diag.meta("N", op.modes().to_string());
    diag.meta_f64("dt", dt);
    diag.meta_f64("T", t_final);
    let grid = op.grid();

    let record = |state: &GridState, diag: &mut Table, snaps: &mut Table, step: usize| {
        let e = energies(state, nu, &fifth);
        let shape = wave.as_ref().and_then(|w| shape_error(w, &op, state));
        diag.push(vec![
            state.t.into(),
            e.e3.into(),
            e.e5.into(),
            e.flux.into(),
            state.max_abs().into(),
            shape.into(),
        ]);
        if snap_steps.contains(&step) {
            for (x, u) in grid.iter().zip(&state.u) {
                snaps.push(vec![state.t.into(), (*x).into(), (*u).into()]);
            }
        }
    };

    let mut integrator = Integrator::new(&op, dt)?;
    record(&state, &mut diag, &mut snaps, 0);
    let mut outcome = Ok(());
    for i in 1..=steps {
        if let Err(e) = integrator.step(&mut state) {
            outcome = Err(e);
            break;
        }
        record(&state, &mut diag, &mut snaps, i);
    }
    let status = match &outcome {
        Ok(()) => "complete".to_string(),
        Err(SpectralError::BlowUp { t, .. }) => format!("blowup at t={}", fmt_f64(*t)),
        Err(e) => format!("failed: {e}"),
    };
    diag.meta("status", status);
    snaps.meta = diag.meta.clone();

    let format = format_or(cfg, Format::Csv);
    emit(cfg.out.as_deref(), &diag.render(format))?;
    if let Some(out) = &cfg.out {
        emit(Some(&snapshot_path(out, format)), &snaps.render(format))?;
    }
    outcome.map_err(CliError::from)
}
