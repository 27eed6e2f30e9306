// Drive the report layer from a JSON config, the same way the `hus` binary
// does, and print the analysis document.
use hus_hill::report::{cmd_analyze, cmd_track, AnalysisConfig};
use hus_hill::Result;

fn main() -> Result<()> {
    let cfg = AnalysisConfig::from_json_str(
        r#"{
            "h": 0.1,
            "cycle": ["pi", "2*pi"],
            "family": "pqr",
            "epsilon": 1e-4,
            "profile": "alternating"
        }"#,
    )?;
    let analysis = cmd_analyze(&cfg)?;
    print!("{}", analysis.to_json());
    let tracked = cmd_track(&cfg, false)?;
    println!(
        "tracked {} steps: sup deviation {:.3e} <= bound {:.3e}",
        tracked.document["window"],
        tracked.document["sup_deviation"]
            .as_f64()
            .unwrap_or(f64::NAN),
        tracked.document["certified_bound"]
            .as_f64()
            .unwrap_or(f64::NAN)
    );
    Ok(())
}
