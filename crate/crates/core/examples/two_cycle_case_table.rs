// Sweep h for the two-cycle {A, B} through the report layer and print the
// selected sums per grid point.
use hus_hill::report::{cmd_sweep, AnalysisConfig, SweepSpec};
use hus_hill::Result;

fn main() -> Result<()> {
    let mut cfg = AnalysisConfig::new("1", vec!["A".into(), "B".into()]);
    cfg.params.insert("A".into(), 1.0);
    cfg.params.insert("B".into(), 0.7);
    cfg.sweep = Some(SweepSpec {
        param: "h".into(),
        min: 0.05.into(),
        max: 2.0.into(),
        count: 40,
    });
    let report = cmd_sweep(&cfg)?;
    for row in report.document["rows"].as_array().into_iter().flatten() {
        let h = row["value"].as_f64().unwrap_or(f64::NAN);
        if row["skipped"] == true {
            println!(
                "h = {h:.4}  skipped ({})",
                row["reason"].as_str().unwrap_or("")
            );
        } else {
            println!(
                "h = {h:.4}  {}  K = {:.6}",
                row["selected_sums"].as_str().unwrap_or("-"),
                row["composite"].as_f64().unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
