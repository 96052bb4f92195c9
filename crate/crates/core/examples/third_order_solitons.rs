//! Bright and dark solitons of the third-order equation at ν = −1, with the
//! region classifier and the residual oracles.

use std::error::Error;

use kdvbbm::verify::{linspace, residual_elliptic, residual_third_order};
use kdvbbm::waves::{region_classify_third, third_order_soliton, ThirdOrderParams};

pub fn run() -> Result<(), Box<dyn Error>> {
    let p = ThirdOrderParams::new(-1.0);
    let xis = linspace(-10.0, 10.0, 50);
    for c in [2.0, -2.0] {
        let w = third_order_soliton(&p, c)?;
        let ctx = w.context.ok_or("wave without context")?;
        println!(
            "c = {c:+}: region {:?}, profile {:?}",
            region_classify_third(c, p.nu),
            w.profile
        );
        for xi in [0.0, 1.0, 2.0, 4.0] {
            println!("    u({xi}) = {:+.12}", w.evaluate(xi)?);
        }
        let ell = residual_elliptic(&w, &xis);
        let ode = residual_third_order(&w, p.nu, &ctx, &xis);
        println!(
            "    elliptic max_rel {:.2e}, ode max_rel {:.2e}",
            ell.max_rel, ode.max_rel
        );
    }
    for nu in [1.0, 0.0] {
        for c in [-2.0, 1.0, 2.0] {
            println!(
                "nu = {nu:+}, c = {c:+}: {}",
                region_classify_third(c, nu).label()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
