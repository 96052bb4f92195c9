//! Fifth-order Weierstrass waves with B1 = 1 at γ = 1/12, μ2 = 1: the
//! coefficient system is solved by Newton's method and the wave is checked
//! against the fourth-order ODE.

use std::error::Error;

use kdvbbm::verify::{linspace, residual_elliptic, residual_fifth_order};
use kdvbbm::waves::{
    fifth_order_coeffs_nonzero_bc, fifth_order_weierstrass, sys2_residuals, zero_bc_seed, Branch,
    FifthOrderParams, WaveContext,
};

pub fn run() -> Result<(), Box<dyn Error>> {
    let gamma = 1.0 / 12.0;
    let xis = linspace(-10.0, 10.0, 50);
    for c in [0.0, 1.0, 2.0] {
        let p = FifthOrderParams::with_mu2(gamma, 0.0, 1.0, c);
        let ctx = WaveContext::fifth_order(&p, c, 1.0);
        let seed = zero_bc_seed(&p, c, Branch::Plus, 1.0)?;
        let q = fifth_order_coeffs_nonzero_bc(&p, &ctx, &seed)?;
        let worst = sys2_residuals(gamma, 1.0, c, 1.0, &q)
            .iter()
            .fold(0.0f64, |m, r| m.max(r.rel));
        println!(
            "c = {c}: a = [{:.12}, {:.12}, {:.12}, {:.12}], system residual {worst:.1e}",
            q.a0, q.a1, q.a2, q.a3
        );
        let w = fifth_order_weierstrass(&p, &ctx, &q)?;
        let ell = residual_elliptic(&w, &xis);
        let ode = residual_fifth_order(&w, &p, &ctx, &xis);
        println!(
            "    class {:?}, elliptic max_rel {:.2e}, ode max_rel {:.2e} ({} skipped)",
            w.invariants.class, ell.max_rel, ode.max_rel, ode.skipped
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
