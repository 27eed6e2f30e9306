//! Report documents for the `hus` commands: `analyze`, `track`, `sweep`
//! and `oracle`. Each command yields a JSON document, a CSV table and an
//! exit code.

pub mod config;
pub mod expr;
pub mod json;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

pub use config::{AnalysisConfig, Scalar, SweepSpec};

use crate::dynamics::perturb_bounded;
use crate::error::{HusError, Result};
use crate::grid::PeriodicCycle;
use crate::stability::{stability_report, Family, StabilityReport, Verdict};
use crate::tracking::{extremal_ratio_oracle, track};

/// Sweep points whose largest S-sum leads the runner-up by less than this
/// relative margin sit on a case boundary and are skipped.
pub const TIE_TOLERANCE: f64 = 1e-9;

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NOT_STABLE: i32 = 3;
    pub const DEGENERATE: i32 = 4;
    pub const INCONCLUSIVE: i32 = 5;
}

pub fn exit_code(err: &HusError) -> i32 {
    match err {
        HusError::NotStable { .. } => exit::NOT_STABLE,
        HusError::Degenerate { .. } => exit::DEGENERATE,
        HusError::Inconclusive { .. } => exit::INCONCLUSIVE,
        HusError::Config(_)
        | HusError::InvalidStepSize(_)
        | HusError::EmptyCycle
        | HusError::NonFinite { .. }
        | HusError::NonMinimalPeriod { .. }
        | HusError::InvalidEquation(_)
        | HusError::WindowTooShort { .. } => exit::CONFIG,
        _ => exit::FAILURE,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Stable => exit::OK,
        Verdict::NotStableUnitModulus => exit::NOT_STABLE,
        Verdict::DegenerateZeroFactor => exit::DEGENERATE,
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| HusError::Config(format!("csv: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| HusError::Config(format!("csv: {e}")))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    /// One row per object, columns taken from the first object's scalar keys.
    fn from_objects(objects: &[Value]) -> Self {
        let header: Vec<String> = objects
            .first()
            .and_then(Value::as_object)
            .map(|m| {
                m.iter()
                    .filter(|(_, v)| !v.is_object())
                    .map(|(k, _)| k.clone())
                    .collect()
            })
            .unwrap_or_default();
        let rows = objects
            .iter()
            .map(|o| header.iter().map(|k| cell(&o[k])).collect())
            .collect();
        Self { header, rows }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => json::format_float(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub document: Value,
    pub table: Table,
    pub code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        json::to_string(&self.document)
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, |v| json!(v))
}

fn config_value(cfg: &AnalysisConfig) -> Value {
    serde_json::to_value(cfg).unwrap_or_default()
}

/// Stability summary of `cycle` as seen by `family`.
pub fn analysis_fields(report: &StabilityReport, family: Family) -> Map<String, Value> {
    let sums =
        |s: &Option<crate::stability::SSums>| s.as_ref().map_or(Value::Null, |s| json!(s.values()));
    let argmax =
        |s: &Option<crate::stability::SSums>| s.as_ref().map_or(Value::Null, |s| json!(s.argmax()));
    let c = &report.cycle;
    let mut m = Map::new();
    m.insert("family".into(), json!(family.name()));
    m.insert("h".into(), json!(c.h()));
    m.insert("n".into(), json!(c.len()));
    m.insert("cycle".into(), json!(c.values()));
    m.insert("e_pos".into(), json!(report.e_pos()));
    m.insert("e_neg".into(), json!(report.e_neg()));
    m.insert("sums_pos".into(), sums(&report.positive.sums));
    m.insert("sums_neg".into(), sums(&report.negative.sums));
    m.insert("argmax_pos".into(), argmax(&report.positive.sums));
    m.insert("argmax_neg".into(), argmax(&report.negative.sums));
    m.insert("k0_pos".into(), opt(report.k0_pos()));
    m.insert("k0_neg".into(), opt(report.k0_neg()));
    m.insert("minimal_pos".into(), json!(report.positive.minimal));
    m.insert("minimal_neg".into(), json!(report.negative.minimal));
    m.insert("composite".into(), opt(report.constant_for(family)));
    m.insert("hill_composite".into(), opt(report.composite));
    m.insert(
        "selected_sums".into(),
        report.selected_sums().map_or(Value::Null, Value::String),
    );
    m.insert(
        "hill_coefficient_period".into(),
        json!(report.hill_coefficient_period),
    );
    m.insert("verdict".into(), json!(report.verdict_for(family)));
    m
}

pub fn cmd_analyze(cfg: &AnalysisConfig) -> Result<Report> {
    let family = cfg.family()?;
    let cycle = cfg.cycle()?;
    let report = stability_report(&cycle);
    let fields = analysis_fields(&report, family);
    let table = Table::from_objects(&[Value::Object(fields.clone())]);
    Ok(Report {
        document: json!({ "command": "analyze", "config": config_value(cfg), "report": fields }),
        table,
        code: verdict_code(report.verdict_for(family)),
    })
}

pub fn cmd_track(cfg: &AnalysisConfig, with_trajectory: bool) -> Result<Report> {
    let family = cfg.family()?;
    let cycle = cfg.cycle()?;
    let steps = cfg.window_for(cycle.len());
    let spec = cfg.equation(&cycle, steps + 1)?;
    let psi = perturb_bounded(&spec, &cfg.profile()?, steps)?;
    let result = track(&spec, &psi)?;
    let h = cycle.h();
    let rows: Vec<Vec<String>> = psi
        .samples()
        .iter()
        .zip(result.exact.samples())
        .enumerate()
        .map(|(k, (p, x))| {
            vec![
                k.to_string(),
                json::format_float(k as f64 * h),
                json::format_float(*p),
                json::format_float(*x),
                json::format_float(p - x),
            ]
        })
        .collect();
    let mut doc = json!({
        "command": "track",
        "config": config_value(cfg),
        "family": family.name(),
        "window": result.window,
        "epsilon": result.epsilon,
        "constant": result.constant,
        "sup_deviation": result.sup_deviation,
        "certified_bound": result.certified_bound,
        "ratio": opt(result.ratio),
        "selected_sums": stability_report(&cycle).selected_sums(),
    });
    if with_trajectory {
        doc["trajectory"] = json!({
            "psi": psi.samples(),
            "exact": result.exact.samples(),
        });
    }
    Ok(Report {
        document: doc,
        table: Table {
            header: ["index", "t", "psi", "exact", "deviation"]
                .map(String::from)
                .to_vec(),
            rows,
        },
        code: exit::OK,
    })
}

/// Evenly spaced sweep values, endpoints included.
pub fn sweep_grid(cfg: &AnalysisConfig) -> Result<(String, Vec<f64>)> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| HusError::Config("sweep: missing sweep section".into()))?;
    if sweep.count == 0 {
        return Err(HusError::Config("sweep.count: must be positive".into()));
    }
    let vars = cfg.params.clone();
    let mut with_h = vars.clone();
    if sweep.param != "h" {
        if let Ok(h) = cfg.h.eval(&vars, "h") {
            with_h.insert("h".into(), h);
        }
    }
    let lo = sweep.min.eval(&with_h, "sweep.min")?;
    let hi = sweep.max.eval(&with_h, "sweep.max")?;
    let values = if sweep.count == 1 {
        vec![lo]
    } else {
        let step = (hi - lo) / (sweep.count - 1) as f64;
        (0..sweep.count).map(|i| lo + step * i as f64).collect()
    };
    Ok((sweep.param.clone(), values))
}

/// One sweep row: the analysis fields plus a skip flag for points that are
/// not stable or sit on a case boundary.
pub fn sweep_point(
    cfg: &AnalysisConfig,
    family: Family,
    param: &str,
    value: f64,
) -> Map<String, Value> {
    let mut row = Map::new();
    row.insert("param".into(), json!(param));
    row.insert("value".into(), json!(value));
    let cycle: Result<PeriodicCycle> = cfg
        .bindings(&[(param, value)])
        .and_then(|v| cfg.cycle_with(&v));
    let cycle = match cycle {
        Ok(c) => c,
        Err(e) => {
            row.insert("skipped".into(), json!(true));
            row.insert("reason".into(), json!(e.to_string()));
            return row;
        }
    };
    let report = stability_report(&cycle);
    let verdict = report.verdict_for(family);
    let tie = [&report.positive.sums, &report.negative.sums]
        .into_iter()
        .flatten()
        .any(|s| s.argmax_margin() <= TIE_TOLERANCE);
    let reason = if verdict != Verdict::Stable {
        Some(verdict.to_string())
    } else if tie {
        Some("argmax tie".to_string())
    } else {
        None
    };
    row.insert("skipped".into(), json!(reason.is_some()));
    row.insert("reason".into(), reason.map_or(Value::Null, Value::String));
    row.extend(analysis_fields(&report, family));
    row
}

pub fn cmd_sweep(cfg: &AnalysisConfig) -> Result<Report> {
    let family = cfg.family()?;
    let (param, values) = sweep_grid(cfg)?;
    let rows: Vec<Value> = values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut row = Map::new();
            row.insert("index".into(), json!(i));
            row.extend(sweep_point(cfg, family, &param, v));
            Value::Object(row)
        })
        .collect();
    let skipped = rows.iter().filter(|r| r["skipped"] == json!(true)).count();
    let header = [
        "index",
        "param",
        "value",
        "skipped",
        "reason",
        "verdict",
        "argmax_pos",
        "argmax_neg",
        "k0_pos",
        "k0_neg",
        "composite",
        "selected_sums",
    ];
    let table = Table {
        header: header.map(String::from).to_vec(),
        rows: rows
            .iter()
            .map(|r| header.iter().map(|k| cell(&r[*k])).collect())
            .collect(),
    };
    Ok(Report {
        document: json!({
            "command": "sweep",
            "config": config_value(cfg),
            "points": rows.len(),
            "skipped": skipped,
            "rows": rows,
        }),
        table,
        code: exit::OK,
    })
}

pub fn cmd_oracle(cfg: &AnalysisConfig) -> Result<Report> {
    let family = cfg.family()?;
    let cycle = cfg.cycle()?;
    let horizon = cfg.horizon_for(cycle.len());
    let est = extremal_ratio_oracle(&cycle, family, horizon, cfg.budget, cfg.seed)?;
    let mut fields = Map::new();
    fields.insert("family".into(), json!(family.name()));
    fields.insert("best_ratio".into(), json!(est.best_ratio));
    fields.insert("best_pattern".into(), json!(est.best_pattern));
    fields.insert("horizon".into(), json!(est.horizon));
    fields.insert("exhaustive".into(), json!(est.exhaustive));
    fields.insert("patterns_evaluated".into(), json!(est.patterns_evaluated));
    fields.insert("constant".into(), json!(est.constant));
    let table = Table::from_objects(&[Value::Object(fields.clone())]);
    let mut doc = json!({ "command": "oracle", "config": config_value(cfg) });
    doc.as_object_mut().expect("object").extend(fields);
    Ok(Report {
        document: doc,
        table,
        code: exit::OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg(text: &str) -> AnalysisConfig {
        AnalysisConfig::from_json_str(text).unwrap()
    }

    #[test]
    fn analyze_pi_cycle() {
        let r = cmd_analyze(&cfg(
            r#"{"h": 0.1, "cycle": ["pi", "2*pi"], "family": "pqr"}"#,
        ))
        .unwrap();
        let h = 0.1;
        let want = 2.0 * (1.0 + h * PI) / (PI * (3.0 + 2.0 * h * PI));
        let got = r.document["report"]["k0_pos"].as_f64().unwrap();
        assert!((got - want).abs() <= 1e-12 * want);
        assert_eq!(r.code, exit::OK);
    }

    #[test]
    fn analyze_verdict_codes() {
        let r = cmd_analyze(&cfg(r#"{"h": 0.5, "cycle": ["-1/h"], "family": "first"}"#)).unwrap();
        assert_eq!(r.code, exit::DEGENERATE);
        assert_eq!(r.document["report"]["verdict"], "Degenerate_ZeroFactor");
        let r = cmd_analyze(&cfg(r#"{"h": 1, "cycle": [0, 0.5, -0.5]}"#)).unwrap();
        assert!((r.document["report"]["composite"].as_f64().unwrap() - 224.0).abs() < 1e-9);
    }

    #[test]
    fn track_reports_selected_sums() {
        // A > B and 2/(A+B) < h < 1/B
        let r = cmd_track(
            &cfg(r#"{"h": 1.2, "params": {"A": 1.0, "B": 0.7}, "cycle": ["A", "B"], "epsilon": 1e-3}"#),
            false,
        )
        .unwrap();
        assert_eq!(r.document["selected_sums"], "S1(λ)S1(-λ)");
        assert!(r.document["ratio"].as_f64().unwrap() <= 1.0 + 1e-6);
        assert_eq!(r.table.header, ["index", "t", "psi", "exact", "deviation"]);
        assert_eq!(r.table.rows.len(), 129);
    }

    #[test]
    fn zero_epsilon_tracks_exactly() {
        let r = cmd_track(&cfg(r#"{"h": 1, "cycle": [0.5], "epsilon": 0}"#), true).unwrap();
        assert_eq!(r.document["sup_deviation"].as_f64(), Some(0.0));
        assert!(r.document["ratio"].is_null());
    }

    #[test]
    fn single_point_sweep_matches_analyze() {
        let c = cfg(r#"{"h": 1, "params": {"A": 0.8}, "cycle": [0, "A", "-A"],
                        "sweep": {"param": "A", "min": 0.8, "max": 0.8, "count": 1}}"#);
        let s = cmd_sweep(&c).unwrap();
        let a = cmd_analyze(&c).unwrap();
        let row = &s.document["rows"][0];
        for (k, v) in a.document["report"].as_object().unwrap() {
            assert_eq!(&row[k], v, "{k}");
        }
    }

    #[test]
    fn sweep_flags_excluded_points() {
        let c = cfg(r#"{"h": 1, "cycle": [0, "A", "-A"],
                        "sweep": {"param": "A", "min": 0, "max": 2, "count": 3}}"#);
        let s = cmd_sweep(&c).unwrap();
        let rows = s.document["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        // A = 0 is not a minimal cycle, A = 1 has a zero factor
        assert_eq!(rows[0]["skipped"], true);
        assert_eq!(rows[1]["skipped"], true);
        assert_eq!(rows[1]["reason"], "Degenerate_ZeroFactor");
        assert_eq!(rows[2]["skipped"], false);
        assert_eq!(s.table.rows.len(), 3);
    }

    #[test]
    fn oracle_document() {
        let r = cmd_oracle(&cfg(
            r#"{"h": 1, "cycle": [0.5], "family": "first", "horizon": 10, "budget": 1024}"#,
        ))
        .unwrap();
        assert_eq!(r.document["exhaustive"], true);
        assert_eq!(r.document["patterns_evaluated"], 512);
        assert!(r.document["best_ratio"].as_f64().unwrap() <= 1.0 + 1e-6);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&HusError::NotStable { modulus: 1.0 }), 3);
        assert_eq!(exit_code(&HusError::Degenerate { index: 0 }), 4);
        assert_eq!(
            exit_code(&HusError::Inconclusive {
                remainder: 1.0,
                threshold: 0.0
            }),
            5
        );
        assert_eq!(exit_code(&HusError::Config("x".into())), 2);
    }
}
