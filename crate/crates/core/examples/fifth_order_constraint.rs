//! Roots of the fifth-order constraint h(μ2, c) = 0 and the family each
//! root produces, for the Hamiltonian γ = 1/12 and for γ = 1/6.

use std::error::Error;

use kdvbbm::verify::linspace;
use kdvbbm::waves::{fifth_order_coeffs_zero_bc, scan_constraint_roots, Branch, FifthOrderParams};

pub fn run() -> Result<(), Box<dyn Error>> {
    let grid = linspace(-0.1, 2.0, 2101);
    for gamma in [1.0 / 12.0, 1.0 / 6.0] {
        println!("gamma = {gamma:.6}");
        for c in [-2.0, 0.5, 0.9, 2.0] {
            for branch in [Branch::Plus, Branch::Minus] {
                let probe = FifthOrderParams::new(gamma, 1.0, 0.0);
                for mu2 in scan_constraint_roots(&probe, c, branch, &grid) {
                    let p = FifthOrderParams::with_mu2(gamma, 1.0, mu2, c);
                    let (q, h) = fifth_order_coeffs_zero_bc(&p, c, branch)?;
                    let kind = if q.a2 > 0.0 { "soliton" } else { "unbounded" };
                    println!(
                        "    c = {c:+.2} {:<5} mu2 = {mu2:+.12} h = {h:+.1e} a2 = {:+.6} amplitude = {:+.6} {kind}",
                        branch.label(),
                        q.a2,
                        -q.a2 / q.a3
                    );
                }
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
