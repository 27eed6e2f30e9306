// Third-order families on the cycle {π, 2π}: derived coefficients and
// composite constants.
use std::f64::consts::PI;

use hus_hill::stability::third_order_coefficients;
use hus_hill::{composite_constant, Family, PeriodicCycle, Result};

fn main() -> Result<()> {
    let h = 0.1;
    let c = PeriodicCycle::new(h, vec![PI, 2.0 * PI])?;
    for family in [Family::Pqr, Family::Pqr2, Family::Pqr3, Family::Pqr4] {
        let t = third_order_coefficients(&c, family)?;
        println!(
            "{family:>5}: p = {:?}\n       q = {:?}\n       r = {:?}\n       K = {:.12e}",
            t.p.values(),
            t.q.values(),
            t.r.values(),
            composite_constant(&c, family)?
        );
    }
    let k0 = 2.0 * (1.0 + h * PI) / (PI * (3.0 + 2.0 * h * PI));
    println!("K0(λ) closed form {k0:.12e}");
    Ok(())
}
