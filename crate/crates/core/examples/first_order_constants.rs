// First-order constants K0(λ) and K0(-λ) for a periodic cycle, and how they
// compare with the constant-coefficient closed form.
use hus_hill::{k0_constant, s_sums, PeriodicCycle, Result};

fn main() -> Result<()> {
    let c = PeriodicCycle::new(1.0, vec![0.0, 0.5, -0.5])?;
    for (label, cycle) in [("λ", c.clone()), ("-λ", c.negated())] {
        let sums = s_sums(&cycle)?;
        println!(
            "{label:>3}: e(nh) = {:.6}  S = {:?}  argmax = {}  K0 = {:.6}",
            cycle.period_product(),
            sums.values(),
            sums.argmax(),
            k0_constant(&cycle)?
        );
    }

    // constant λ > 0: K0(λ) = 1/λ, while the -λ side has e = 1 - hλ and
    // K0(-λ) = 1/λ below 1/h, h/(2 - hλ) up to 2/h and h/(hλ - 2) beyond
    let h = 0.5;
    for lam in [0.7, 2.9, 3.0, 6.0] {
        let pos = k0_constant(&PeriodicCycle::constant(h, lam)?)?;
        let neg = k0_constant(&PeriodicCycle::constant(h, -lam)?)?;
        let closed = if lam < 1.0 / h {
            1.0 / lam
        } else if lam < 2.0 / h {
            h / (2.0 - h * lam)
        } else {
            h / (h * lam - 2.0)
        };
        println!(
            "h = {h}, λ = {lam}: K0(λ) = {pos:.12}  K0(-λ) = {neg:.12}  closed form {closed:.12}"
        );
        assert!((pos - 1.0 / lam).abs() <= 1e-12 / lam);
        assert!((neg - closed).abs() <= 1e-12 * closed);
    }
    Ok(())
}
