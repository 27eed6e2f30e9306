// Case table of the three-cycle {0, A, -A}: which S-sums carry the Hill
// constant as A grows, and where stability is lost.
use hus_hill::{stability_report, PeriodicCycle, Result, Verdict};

fn main() -> Result<()> {
    let h = 1.0;
    println!(
        "{:>6} {:>8} {:>8} {:>14} {:>14}  verdict",
        "A", "argmax+", "argmax-", "K0(λ)", "K0(-λ)"
    );
    for i in 1..=30 {
        let a = 0.1 * i as f64;
        let c = PeriodicCycle::new(h, vec![0.0, a, -a])?;
        let r = stability_report(&c);
        let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.6}"));
        let arg = |s: &Option<hus_hill::SSums>| {
            s.as_ref()
                .map_or("-".to_string(), |s| s.argmax().to_string())
        };
        println!(
            "{a:>6.2} {:>8} {:>8} {:>14} {:>14}  {}",
            arg(&r.positive.sums),
            arg(&r.negative.sums),
            fmt(r.k0_pos()),
            fmt(r.k0_neg()),
            r.verdict
        );
    }
    // at A = √2/h the negative side has unit modulus
    let a = 2f64.sqrt() / h;
    let r = stability_report(&PeriodicCycle::new(h, vec![0.0, a, -a])?);
    assert_eq!(r.verdict, Verdict::NotStableUnitModulus);
    println!("A = √2: {}", r.verdict);
    Ok(())
}
