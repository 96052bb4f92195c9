//! Weierstrass waves of the third-order equation with nonzero integration
//! constants A0 = A1 = 1, checked against the ODE they solve.

use std::error::Error;

use kdvbbm::verify::{linspace, residual_elliptic, residual_third_order};
use kdvbbm::waves::{third_order_weierstrass, ThirdOrderParams, WaveContext};

pub fn run() -> Result<(), Box<dyn Error>> {
    let xis = linspace(-10.0, 10.0, 50);
    for nu in [1.0, -1.0] {
        let p = ThirdOrderParams::new(nu);
        let ctx = WaveContext::third_order(&p, 2.0, 1.0, 1.0);
        let w = third_order_weierstrass(&p, &ctx)?;
        let inv = &w.invariants;
        println!(
            "nu = {nu:+}: g2 = {:.10}, g3 = {:.10}, delta = {:.4e}, poles {:?}",
            inv.g2,
            inv.g3,
            inv.delta,
            w.singularities()
        );
        for xi in [0.5, 1.5, 3.0] {
            println!("    u({xi}) = {:+.12}", w.evaluate(xi)?);
        }
        let ell = residual_elliptic(&w, &xis);
        let ode = residual_third_order(&w, nu, &ctx, &xis);
        println!(
            "    elliptic max_rel {:.2e}, ode max_rel {:.2e} ({} samples, {} skipped)",
            ell.max_rel, ode.max_rel, ode.samples, ode.skipped
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
