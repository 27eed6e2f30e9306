use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HusError, Result};
use crate::grid::{first_difference, second_difference, PeriodicCycle, Trajectory};

/// Equation families built on a periodic coefficient `lambda`.
///
/// | family          | equation                                             |
/// |-----------------|------------------------------------------------------|
/// | `FirstHomog`    | `Δx - λx = f` (f ≡ 0 unless forced)                  |
/// | `FirstNonhomog` | `Δy + λy = f`                                        |
/// | `Hill`          | `Δ²y + [Δλ(t) - λ(t)λ(t+h)] y = 0`                   |
/// | `HillNonhomog`  | same with right-hand side `f`                        |
/// | `Pqr`..`Pqr4`   | `Δ³y + pΔ²y + qΔy + ry = 0` with the family's p,q,r  |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    FirstHomog,
    FirstNonhomog,
    Hill,
    HillNonhomog,
    Pqr,
    Pqr2,
    Pqr3,
    Pqr4,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::FirstHomog,
        Family::FirstNonhomog,
        Family::Hill,
        Family::HillNonhomog,
        Family::Pqr,
        Family::Pqr2,
        Family::Pqr3,
        Family::Pqr4,
    ];

    pub fn order(self) -> usize {
        match self {
            Family::FirstHomog | Family::FirstNonhomog => 1,
            Family::Hill | Family::HillNonhomog => 2,
            Family::Pqr | Family::Pqr2 | Family::Pqr3 | Family::Pqr4 => 3,
        }
    }

    /// Exponents `(a, b)` in `K = K0(λ)^a K0(-λ)^b`.
    pub fn constant_powers(self) -> (i32, i32) {
        match self {
            Family::FirstHomog => (1, 0),
            Family::FirstNonhomog => (0, 1),
            Family::Hill | Family::HillNonhomog => (1, 1),
            Family::Pqr | Family::Pqr3 => (1, 2),
            Family::Pqr2 | Family::Pqr4 => (2, 1),
        }
    }

    pub fn accepts_forcing(self) -> bool {
        matches!(
            self,
            Family::FirstHomog | Family::FirstNonhomog | Family::HillNonhomog
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::FirstHomog => "first-homog",
            Family::FirstNonhomog => "first-nonhomog",
            Family::Hill => "hill",
            Family::HillNonhomog => "hill-nonhomog",
            Family::Pqr => "pqr",
            Family::Pqr2 => "pqr2",
            Family::Pqr3 => "pqr3",
            Family::Pqr4 => "pqr4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Family {
    type Err = HusError;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        Ok(match key.as_str() {
            "firsthomog" | "first" => Family::FirstHomog,
            "firstnonhomog" => Family::FirstNonhomog,
            "hill" => Family::Hill,
            "hillnonhomog" => Family::HillNonhomog,
            "pqr" | "pqr1" => Family::Pqr,
            "pqr2" => Family::Pqr2,
            "pqr3" => Family::Pqr3,
            "pqr4" => Family::Pqr4,
            _ => return Err(HusError::Config(format!("unknown family `{s}`"))),
        })
    }
}

/// `p`, `q`, `r` of a third-order family, stored on the base grid with the
/// base period `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThirdOrderCoefficients {
    pub p: PeriodicCycle,
    pub q: PeriodicCycle,
    pub r: PeriodicCycle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Coefficients {
    /// `Δy - mu*y = f`; `mu = λ` for `FirstHomog`, `-λ` for `FirstNonhomog`.
    First {
        mu: PeriodicCycle,
    },
    /// `Δ²y + q*y = f`.
    Hill {
        q: PeriodicCycle,
    },
    Third(ThirdOrderCoefficients),
}

/// The Hill coefficient `Δ_h λ(t) - λ(t)λ(t+h)` as an n-periodic cycle.
pub fn hill_coefficient_cycle(c: &PeriodicCycle) -> PeriodicCycle {
    let h = c.h();
    let values = (0..c.len())
        .map(|k| first_difference(c.at(k), c.at(k + 1), h) - c.at(k) * c.at(k + 1))
        .collect();
    PeriodicCycle::new_relaxed(h, values).expect("finite inputs give finite coefficients")
}

/// Coefficients `p, q, r` for the four third-order families.
pub fn third_order_coefficients(
    c: &PeriodicCycle,
    family: Family,
) -> Result<ThirdOrderCoefficients> {
    if family.order() != 3 {
        return Err(HusError::InvalidEquation(format!(
            "{family} is not a third-order family"
        )));
    }
    let h = c.h();
    let n = c.len();
    let mut p = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for k in 0..n {
        // l(j) = λ(t + jh), dl(j) = Δ_h λ(t + jh), d2l0 = Δ²_h λ(t)
        let l = |j: usize| c.at(k + j);
        let dl = |j: usize| first_difference(l(j), l(j + 1), h);
        let d2l0 = second_difference(l(0), l(1), l(2), h);
        let (pk, qk, rk) = match family {
            Family::Pqr => (
                l(2),
                2.0 * dl(1) + dl(2) - l(2) * l(3),
                d2l0 + l(0) * dl(2) - l(0) * l(2) * l(3),
            ),
            Family::Pqr2 => (
                -l(2),
                -2.0 * dl(1) + dl(2) - l(2) * l(3),
                -d2l0 - l(0) * dl(2) + l(0) * l(2) * l(3),
            ),
            Family::Pqr3 => (
                l(2),
                dl(1) - l(1) * l(2),
                d2l0 - l(0) * dl(1) - l(0) * l(1) * l(2),
            ),
            Family::Pqr4 => (
                -l(2),
                dl(1) - l(1) * l(2),
                d2l0 - l(1) * dl(1) - (l(1) + l(2)) * dl(0) + l(0) * l(1) * l(2),
            ),
            _ => unreachable!(),
        };
        p.push(pk);
        q.push(qk);
        r.push(rk);
    }
    let cycle = |v: Vec<f64>| {
        PeriodicCycle::new_relaxed(h, v).map_err(|e| HusError::InvalidEquation(e.to_string()))
    };
    Ok(ThirdOrderCoefficients {
        p: cycle(p)?,
        q: cycle(q)?,
        r: cycle(r)?,
    })
}

/// A concrete equation: family, base cycle, derived coefficients and an
/// optional forcing term on absolute grid indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationSpec {
    family: Family,
    base_cycle: PeriodicCycle,
    coefficients: Coefficients,
    forcing: Option<Trajectory>,
}

impl EquationSpec {
    pub fn new(family: Family, base_cycle: PeriodicCycle) -> Result<Self> {
        let coefficients = match family {
            Family::FirstHomog => Coefficients::First {
                mu: base_cycle.clone(),
            },
            Family::FirstNonhomog => Coefficients::First {
                mu: base_cycle.negated(),
            },
            Family::Hill | Family::HillNonhomog => Coefficients::Hill {
                q: hill_coefficient_cycle(&base_cycle),
            },
            _ => Coefficients::Third(third_order_coefficients(&base_cycle, family)?),
        };
        Ok(Self {
            family,
            base_cycle,
            coefficients,
            forcing: None,
        })
    }

    /// Attach `f`; only first-order families and `HillNonhomog` take one.
    pub fn with_forcing(mut self, forcing: Trajectory) -> Result<Self> {
        if !self.family.accepts_forcing() {
            return Err(HusError::InvalidEquation(format!(
                "{} is homogeneous and takes no forcing",
                self.family
            )));
        }
        if forcing.step() != self.base_cycle.step() {
            return Err(HusError::InvalidEquation(
                "forcing lives on a different grid".into(),
            ));
        }
        self.forcing = Some(forcing);
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> usize {
        self.family.order()
    }

    pub fn base_cycle(&self) -> &PeriodicCycle {
        &self.base_cycle
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn forcing(&self) -> Option<&Trajectory> {
        self.forcing.as_ref()
    }

    /// `f(k)`, zero when unforced.
    pub fn forcing_at(&self, k: usize) -> Result<f64> {
        match &self.forcing {
            None => Ok(0.0),
            Some(f) => f.get(k),
        }
    }

    /// Same equation without its forcing term.
    pub fn homogeneous(&self) -> Self {
        Self {
            forcing: None,
            ..self.clone()
        }
    }
}
