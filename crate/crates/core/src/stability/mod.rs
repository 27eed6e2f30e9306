//! First-order Hyers-Ulam constants `K0(lambda)`, `K0(-lambda)` and the
//! composite constants of the Hill and third-order families.

mod family;

pub use family::{
    hill_coefficient_cycle, third_order_coefficients, Coefficients, EquationSpec, Family,
    ThirdOrderCoefficients,
};

use serde::Serialize;

use crate::error::{HusError, Result};
use crate::grid::PeriodicCycle;

/// Band around `|e(nh)| = 1` inside which an equation is reported as not
/// Hyers-Ulam stable.
pub const UNIT_MODULUS_TOL: f64 = 1e-9;

/// The sums `S_0 .. S_{n-1}`; term `j` of `S_k` is
/// `1 / prod_{i=0}^{j} |1 + h*lambda_{k+i}|` (indices mod n).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SSums {
    values: Vec<f64>,
    argmax_index: usize,
}

impl SSums {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Position of the largest sum; the lowest index wins ties.
    pub fn argmax(&self) -> usize {
        self.argmax_index
    }

    pub fn max(&self) -> f64 {
        self.values[self.argmax_index]
    }

    /// Relative gap between the largest and the runner-up sum. Zero for a
    /// tie, `inf` for a single sum.
    pub fn argmax_margin(&self) -> f64 {
        let best = self.max();
        let runner_up = self
            .values
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.argmax_index)
            .map(|(_, &v)| v)
            .fold(f64::NEG_INFINITY, f64::max);
        if runner_up == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            (best - runner_up) / best
        }
    }
}

pub fn s_sums(c: &PeriodicCycle) -> Result<SSums> {
    if let Some(index) = c.zero_factor() {
        return Err(HusError::Degenerate { index });
    }
    let n = c.len();
    let values: Vec<f64> = (0..n)
        .map(|k| {
            let mut product = 1.0;
            let mut sum = 0.0;
            for i in 0..n {
                product *= c.factor(k + i).abs();
                sum += 1.0 / product;
            }
            sum
        })
        .collect();
    let argmax_index = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best });
    Ok(SSums {
        values,
        argmax_index,
    })
}

pub fn is_unit_modulus(e: f64) -> bool {
    (e.abs() - 1.0).abs() <= UNIT_MODULUS_TOL
}

/// `K0(lambda) = h |e| / |1 - |e|| * max_k S_k` with `e = e_lambda(nh)`.
///
/// `K0(-lambda)` is `k0_constant(&c.negated())`.
pub fn k0_constant(c: &PeriodicCycle) -> Result<f64> {
    let sums = s_sums(c)?;
    let e = c.period_product();
    if is_unit_modulus(e) {
        return Err(HusError::NotStable { modulus: e.abs() });
    }
    Ok(k0_from_parts(c.h(), e, &sums))
}

fn k0_from_parts(h: f64, e: f64, sums: &SSums) -> f64 {
    let m = e.abs();
    h * m / (1.0 - m).abs() * sums.max()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Stable,
    #[serde(rename = "NotStable_UnitModulus")]
    NotStableUnitModulus,
    #[serde(rename = "Degenerate_ZeroFactor")]
    DegenerateZeroFactor,
}

impl Verdict {
    fn worst(self, other: Self) -> Self {
        use Verdict::*;
        match (self, other) {
            (DegenerateZeroFactor, _) | (_, DegenerateZeroFactor) => DegenerateZeroFactor,
            (NotStableUnitModulus, _) | (_, NotStableUnitModulus) => NotStableUnitModulus,
            _ => Stable,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "Stable",
            Verdict::NotStableUnitModulus => "NotStable_UnitModulus",
            Verdict::DegenerateZeroFactor => "Degenerate_ZeroFactor",
        })
    }
}

/// Analysis of one first-order equation `Delta_h x = mu x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideReport {
    pub e: f64,
    pub sums: Option<SSums>,
    pub k0: Option<f64>,
    /// `|e| > 1`: the constant is the least possible one.
    pub minimal: bool,
    pub verdict: Verdict,
}

impl SideReport {
    pub fn analyze(c: &PeriodicCycle) -> Self {
        let e = c.period_product();
        let sums = s_sums(c).ok();
        let verdict = match &sums {
            None => Verdict::DegenerateZeroFactor,
            Some(_) if is_unit_modulus(e) => Verdict::NotStableUnitModulus,
            Some(_) => Verdict::Stable,
        };
        let k0 = match (&sums, verdict) {
            (Some(s), Verdict::Stable) => Some(k0_from_parts(c.h(), e, s)),
            _ => None,
        };
        Self {
            e,
            sums,
            k0,
            minimal: k0.is_some() && e.abs() > 1.0,
            verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub cycle: PeriodicCycle,
    /// `e_lambda(nh)` side, governing `Delta_h x - lambda x = 0`.
    pub positive: SideReport,
    /// `e_{-lambda}(nh)` side, governing `Delta_h y + lambda y = f`.
    pub negative: SideReport,
    /// `K0(lambda) * K0(-lambda)` when both are defined.
    pub composite: Option<f64>,
    /// Combined verdict for equations that need both sides (Hill, third order).
    pub verdict: Verdict,
    /// Minimal period of the Hill coefficient; may be smaller than `n`.
    pub hill_coefficient_period: usize,
}

impl StabilityReport {
    pub fn e_pos(&self) -> f64 {
        self.positive.e
    }

    pub fn e_neg(&self) -> f64 {
        self.negative.e
    }

    pub fn k0_pos(&self) -> Option<f64> {
        self.positive.k0
    }

    pub fn k0_neg(&self) -> Option<f64> {
        self.negative.k0
    }

    /// Verdict for a particular family; first-order families only look at
    /// their own side.
    pub fn verdict_for(&self, family: Family) -> Verdict {
        let (a, b) = family.constant_powers();
        let mut v = Verdict::Stable;
        if a > 0 {
            v = v.worst(self.positive.verdict);
        }
        if b > 0 {
            v = v.worst(self.negative.verdict);
        }
        v
    }

    /// `K0(lambda)^a * K0(-lambda)^b` with the family's exponents.
    pub fn constant_for(&self, family: Family) -> Option<f64> {
        let (a, b) = family.constant_powers();
        let pos = if a > 0 { self.positive.k0? } else { 1.0 };
        let neg = if b > 0 { self.negative.k0? } else { 1.0 };
        Some(pos.powi(a) * neg.powi(b))
    }

    /// Names of the sums attaining the maxima, e.g. `S2(λ)S1(-λ)`.
    pub fn selected_sums(&self) -> Option<String> {
        let p = self.positive.sums.as_ref()?.argmax();
        let q = self.negative.sums.as_ref()?.argmax();
        Some(format!("S{p}(λ)S{q}(-λ)"))
    }
}

pub fn stability_report(c: &PeriodicCycle) -> StabilityReport {
    let positive = SideReport::analyze(c);
    let negative = SideReport::analyze(&c.negated());
    let composite = positive.k0.zip(negative.k0).map(|(a, b)| a * b);
    let verdict = positive.verdict.worst(negative.verdict);
    StabilityReport {
        cycle: c.clone(),
        positive,
        negative,
        composite,
        verdict,
        hill_coefficient_period: hill_coefficient_cycle(c).minimal_period(),
    }
}

/// Hyers-Ulam constant of `family` built on `c`:
/// first order `K0(lambda)` or `K0(-lambda)`; Hill `K0(lambda)K0(-lambda)`;
/// PQR/PQR3 `K0(lambda)K0(-lambda)^2`; PQR2/PQR4 `K0(lambda)^2 K0(-lambda)`.
pub fn composite_constant(c: &PeriodicCycle, family: Family) -> Result<f64> {
    let (a, b) = family.constant_powers();
    let pos = if a > 0 { k0_constant(c)? } else { 1.0 };
    let neg = if b > 0 {
        k0_constant(&c.negated())?
    } else {
        1.0
    };
    Ok(pos.powi(a) * neg.powi(b))
}
