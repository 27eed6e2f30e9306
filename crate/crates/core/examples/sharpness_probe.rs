// How close does the worst ±ε residual come to the proven constant?
use hus_hill::{extremal_ratio_oracle, Family, PeriodicCycle, Result};

fn main() -> Result<()> {
    let cases = [
        (
            "λ = 3, h = 1",
            PeriodicCycle::constant(1.0, 3.0)?,
            Family::FirstHomog,
        ),
        (
            "λ = 0.5, h = 1",
            PeriodicCycle::constant(1.0, 0.5)?,
            Family::FirstNonhomog,
        ),
        (
            "{0, ½, -½}",
            PeriodicCycle::new(1.0, vec![0.0, 0.5, -0.5])?,
            Family::FirstHomog,
        ),
        (
            "{0, ½, -½}",
            PeriodicCycle::new(1.0, vec![0.0, 0.5, -0.5])?,
            Family::Hill,
        ),
    ];
    for (label, c, family) in cases {
        let horizon = 4 * c.len().max(4);
        let est = extremal_ratio_oracle(&c, family, horizon, 1 << 16, 7)?;
        println!(
            "{label:>16} {family:>12}: best ratio {:.6} over {} patterns (exhaustive: {})",
            est.best_ratio, est.patterns_evaluated, est.exhaustive
        );
    }
    Ok(())
}
