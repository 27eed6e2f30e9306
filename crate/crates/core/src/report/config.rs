use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::expr;
use crate::dynamics::{ResidualPattern, ResidualProfile};
use crate::error::{HusError, Result};
use crate::grid::{PeriodicCycle, Trajectory};
use crate::stability::{EquationSpec, Family};

/// A number or an arithmetic expression such as `"2*pi"` or `"-1/h"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(String),
}

impl Scalar {
    pub fn eval(&self, vars: &BTreeMap<String, f64>, field: &str) -> Result<f64> {
        let v = match self {
            Scalar::Number(x) => *x,
            Scalar::Expr(s) => expr::eval(s, vars).map_err(|e| prefix(field, e))?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(HusError::Config(format!("{field}: evaluates to {v}")))
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Number(x)
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Expr(s.to_string())
    }
}

fn prefix(field: &str, e: HusError) -> HusError {
    match e {
        HusError::Config(msg) => HusError::Config(format!("{field}: {msg}")),
        other => HusError::Config(format!("{field}: {other}")),
    }
}

/// `count` evenly spaced values of `param` from `min` to `max` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: String,
    pub min: Scalar,
    pub max: Scalar,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub h: Scalar,
    pub cycle: Vec<Scalar>,
    /// Named parameters usable in expressions, e.g. `A`, `B`.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default = "default_family")]
    pub family: String,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Steps; defaults to `64 n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    /// `random`, `constant_plus`, `constant_minus` or `alternating`.
    #[serde(default = "default_profile")]
    pub profile: String,
    #[serde(default)]
    pub seed: u64,
    /// Forcing values, repeated cyclically over the window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Oracle horizon in steps; defaults to `4 n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_family() -> String {
    Family::Hill.name().to_string()
}

fn default_epsilon() -> f64 {
    1e-3
}

fn default_profile() -> String {
    "random".to_string()
}

fn default_budget() -> usize {
    1 << 16
}

impl AnalysisConfig {
    pub fn new(h: impl Into<Scalar>, cycle: Vec<Scalar>) -> Self {
        Self {
            h: h.into(),
            cycle,
            params: BTreeMap::new(),
            family: default_family(),
            epsilon: default_epsilon(),
            window: None,
            profile: default_profile(),
            seed: 0,
            forcing: None,
            sweep: None,
            horizon: None,
            budget: default_budget(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| HusError::Config(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HusError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text).map_err(|e| prefix(&path.display().to_string(), e))
    }

    pub fn to_json(&self) -> String {
        super::json::to_string(&serde_json::to_value(self).unwrap_or_default())
    }

    pub fn family(&self) -> Result<Family> {
        self.family
            .parse()
            .map_err(|e: HusError| prefix("family", e))
    }

    /// Parameter bindings with `overrides` applied, plus `h`.
    pub fn bindings(&self, overrides: &[(&str, f64)]) -> Result<BTreeMap<String, f64>> {
        let mut vars = self.params.clone();
        for (k, v) in overrides {
            vars.insert((*k).to_string(), *v);
        }
        if !vars.contains_key("h") {
            let h = self.h.eval(&vars, "h")?;
            vars.insert("h".to_string(), h);
        }
        Ok(vars)
    }

    pub fn cycle_with(&self, vars: &BTreeMap<String, f64>) -> Result<PeriodicCycle> {
        let values = self
            .cycle
            .iter()
            .enumerate()
            .map(|(i, s)| s.eval(vars, &format!("cycle[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        PeriodicCycle::new(vars["h"], values).map_err(|e| prefix("cycle", e))
    }

    pub fn cycle(&self) -> Result<PeriodicCycle> {
        self.cycle_with(&self.bindings(&[])?)
    }

    pub fn window_for(&self, n: usize) -> usize {
        self.window.unwrap_or(64 * n)
    }

    pub fn horizon_for(&self, n: usize) -> usize {
        self.horizon.unwrap_or(4 * n)
    }

    pub fn profile(&self) -> Result<ResidualProfile> {
        let pattern = match self.profile.as_str() {
            "random" | "random_uniform" => ResidualPattern::RandomUniform,
            "constant_plus" => ResidualPattern::ConstantPlus,
            "constant_minus" => ResidualPattern::ConstantMinus,
            "alternating" => ResidualPattern::Alternating,
            other => {
                return Err(HusError::Config(format!(
                    "profile: unknown profile '{other}'"
                )))
            }
        };
        ResidualProfile::new(self.epsilon, pattern, Some(self.seed))
            .map_err(|e| prefix("epsilon", e))
    }

    /// The equation on `cycle`, with forcing laid out over `len` samples.
    pub fn equation(&self, cycle: &PeriodicCycle, len: usize) -> Result<EquationSpec> {
        let family = self.family()?;
        let spec = EquationSpec::new(family, cycle.clone())?;
        let Some(forcing) = &self.forcing else {
            return Ok(spec);
        };
        if forcing.is_empty() {
            return Err(HusError::Config("forcing: empty list".into()));
        }
        let vars = self.bindings(&[])?;
        let values = forcing
            .iter()
            .enumerate()
            .map(|(i, s)| s.eval(&vars, &format!("forcing[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let f = Trajectory::from_fn(cycle.step(), 0, len, |k| values[k % values.len()])?;
        spec.with_forcing(f).map_err(|e| prefix("forcing", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parses_expressions_and_defaults() {
        let cfg = AnalysisConfig::from_json_str(
            r#"{"h": 0.1, "cycle": ["pi", "2*pi"], "family": "PQR"}"#,
        )
        .unwrap();
        assert_eq!(cfg.family().unwrap(), Family::Pqr);
        assert_eq!(cfg.cycle().unwrap().values(), &[PI, 2.0 * PI]);
        assert_eq!(cfg.epsilon, 1e-3);
        assert_eq!(cfg.window_for(2), 128);
    }

    #[test]
    fn params_and_h_expressions() {
        let cfg = AnalysisConfig::from_json_str(
            r#"{"h": "(A+B)/(A*B)", "params": {"A": 1, "B": 2}, "cycle": ["A", "B"]}"#,
        )
        .unwrap();
        let c = cfg.cycle().unwrap();
        assert_eq!(c.h(), 1.5);
        let vars = cfg.bindings(&[("A", 3.0)]).unwrap();
        assert_eq!(cfg.cycle_with(&vars).unwrap().values(), &[3.0, 2.0]);
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let err = AnalysisConfig::from_json_str("{\"h\": 1,\n \"cycle\": [1, }").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err =
            AnalysisConfig::from_json_str(r#"{"h": 1, "cycle": [1], "colour": 2}"#).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
        let cfg = AnalysisConfig::from_json_str(r#"{"h": 1, "cycle": [1, "q"]}"#).unwrap();
        assert!(cfg.cycle().unwrap_err().to_string().contains("cycle[1]"));
        let cfg =
            AnalysisConfig::from_json_str(r#"{"h": 1, "cycle": [1], "family": "fourth"}"#).unwrap();
        assert!(cfg
            .family()
            .unwrap_err()
            .to_string()
            .starts_with("config: family"));
    }

    #[test]
    fn serialization_round_trips() {
        let mut cfg = AnalysisConfig::new(0.25, vec!["-A".into(), 0.1.into()]);
        cfg.params.insert("A".into(), 1.0 / 3.0);
        cfg.window = Some(40);
        let back = AnalysisConfig::from_json_str(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }
}
