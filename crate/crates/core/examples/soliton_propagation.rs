//! Exact solitons as initial data for the pseudospectral integrator: the
//! numerical solution is compared with the translated profile and the
//! conserved energy is tracked.

use std::error::Error;

use kdvbbm::spectral::{
    build_fifth_order_operator, build_third_order_operator, energies, propagate_and_compare,
    sample_wave, GridState, Integrator,
};
use kdvbbm::waves::{
    fifth_order_soliton, scan_constraint_roots, third_order_soliton, Branch, FifthOrderParams,
    Profile, ThirdOrderParams,
};

fn sech2_width(profile: Profile) -> f64 {
    match profile {
        Profile::Sech2 { wavenumber, .. } => wavenumber,
        _ => f64::NAN,
    }
}

pub fn run() -> Result<(), Box<dyn Error>> {
    let (t_final, dt) = (10.0, 0.05);

    let p3 = ThirdOrderParams::new(-1.0);
    let w = third_order_soliton(&p3, 2.0)?;
    let op = build_third_order_operator(p3.nu, 40.0 / sech2_width(w.profile), 1024)?;
    let err = propagate_and_compare(&w, &op, t_final, dt)?;
    let fifth_dummy = FifthOrderParams::new(1.0 / 12.0, 1.0, 0.0);
    let mut state = GridState::new(op.length, sample_wave(&w, &op, 0.0)?)?;
    let e0 = energies(&state, p3.nu, &fifth_dummy).e3;
    Integrator::new(&op, dt)?.advance(&mut state, (t_final / dt) as usize)?;
    let e1 = energies(&state, p3.nu, &fifth_dummy).e3;
    println!(
        "third order, c = 2: shape error {err:.2e}, E3 drift {:.2e}",
        ((e1 - e0) / e0).abs()
    );

    let (gamma, c) = (1.0 / 12.0, -2.0);
    let grid: Vec<f64> = (0..=2100).map(|i| -0.1 + 0.001 * i as f64).collect();
    let probe = FifthOrderParams::new(gamma, 1.0, 0.0);
    let mu2 = *scan_constraint_roots(&probe, c, Branch::Minus, &grid)
        .first()
        .ok_or("no constraint root")?;
    let p5 = FifthOrderParams::with_mu2(gamma, 1.0, mu2, c);
    let w = fifth_order_soliton(&p5, mu2, c, Branch::Minus)?;
    let op = build_fifth_order_operator(&p5, 40.0 / sech2_width(w.profile), 512)?;
    let err = propagate_and_compare(&w, &op, t_final, 0.01)?;
    println!("fifth order, c = {c}, mu2 = {mu2:.12}: shape error {err:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
