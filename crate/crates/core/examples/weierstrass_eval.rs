//! Germs, discriminant and class of a few cubics, and ℘ on the real line.

use std::error::Error;

use kdvbbm::elliptic::{invariants_from_cubic, wp_eval, wp_eval_degenerate, CubicCoeffs};

pub fn run() -> Result<(), Box<dyn Error>> {
    let cubics = [
        ("generic", CubicCoeffs::new(-1.5, -3.0, -1.5, 0.75)),
        ("zero-bc", CubicCoeffs::new(0.0, 0.0, 0.75, -0.375)),
        ("pure cubic", CubicCoeffs::new(0.0, 0.0, 0.0, -3.0)),
    ];
    for (name, q) in cubics {
        let inv = invariants_from_cubic(&q)?;
        println!(
            "{name:>10}: g2 = {:.6e}  g3 = {:.6e}  delta = {:.3e}  class = {:?}  omega = {:?}",
            inv.g2,
            inv.g3,
            inv.delta,
            inv.class,
            inv.real_half_period()
        );
        for z in [0.25, 1.0, 2.5] {
            let series = wp_eval(z, inv.g2, inv.g3)?;
            match inv.repeated_root() {
                Some(e) => {
                    let closed = wp_eval_degenerate(z, inv.class, e)?;
                    println!("    z = {z:<4}  wp = {series:.15e}  closed form = {closed:.15e}");
                }
                None => println!("    z = {z:<4}  wp = {series:.15e}"),
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
