//! Constructive shadowing: given an approximate solution, build an exact
//! solution of the same equation that stays within `K * epsilon` of it.
//!
//! First order (`Δx - mu x = g`): writing `d = psi - x`, `d` obeys the
//! homogeneous recursion driven by the residual. With `|e_mu(nh)| < 1` the
//! exact solution is pinned at the window start (`x(s) = psi(s)`) and
//! integrated forward; with `|e_mu(nh)| > 1` it is pinned at the window end
//! and integrated backward, which is the finite-window form of
//! `x(0) = lim psi(t) / e_mu(t)`. In both cases `|d| <= K0(mu) * epsilon`
//! holds on the whole window.
//!
//! Higher orders peel one first-order factor at a time through the
//! substitutions
//!
//! * Hill: `psi(t) = Δξ(t-h) + λ(t-h) ξ(t-h)`
//! * PQR / PQR2: `psi(t) = Δξ(t-2h) ± λ(t-2h) ξ(t-2h)` (then Hill)
//! * PQR3 / PQR4: `psi(t) = Δ²ξ(t-2h) + [Δλ(t-2h) - λ(t-2h)λ(t-h)] ξ(t-2h)`
//!
//! track the reduced equation, and solve the remaining first- or
//! second-order equation forced by the tracked solution.

mod oracle;

pub use oracle::{extremal_ratio_oracle, OracleEstimate};

use serde::Serialize;

use crate::dynamics::{integrate_first, residual, Anchor, Sign};
use crate::error::{HusError, Result};
use crate::grid::{first_difference, second_difference, PeriodicCycle, Trajectory};
use crate::stability::{
    composite_constant, hill_coefficient_cycle, k0_constant, s_sums, EquationSpec, Family,
};

/// The expanding-case tail must stay below this fraction of `K0`.
pub const TAIL_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackingResult {
    pub exact: Trajectory,
    pub epsilon: f64,
    pub constant: f64,
    pub sup_deviation: f64,
    /// `constant * epsilon`.
    pub certified_bound: f64,
    /// `sup_deviation / certified_bound`; absent when the bound is zero.
    pub ratio: Option<f64>,
    pub window: usize,
}

impl TrackingResult {
    fn new(input: &Trajectory, exact: Vec<f64>, epsilon: f64, constant: f64) -> Result<Self> {
        let exact = Trajectory::new(input.step(), input.start(), exact)?;
        let sup_deviation = sup_diff(input.samples(), exact.samples());
        let certified_bound = constant * epsilon;
        Ok(Self {
            window: input.len() - 1,
            ratio: (certified_bound > 0.0).then(|| sup_deviation / certified_bound),
            exact,
            epsilon,
            constant,
            sup_deviation,
            certified_bound,
        })
    }

    /// `sup |input - exact| <= K epsilon (1 + slack)`.
    pub fn within_bound(&self, slack: f64) -> bool {
        self.sup_deviation <= self.certified_bound * (1.0 + slack)
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tail {
    Check,
    Ignore,
}

/// Core first-order construction on `psi`'s window for `Δx - mu x = g`,
/// `g` given at `psi.start()..psi.last()`. Returns the exact samples.
pub(crate) fn shadow_first(
    mu: &PeriodicCycle,
    g: &[f64],
    psi: &Trajectory,
    tail: Tail,
) -> Result<Vec<f64>> {
    let k0 = k0_constant(mu)?;
    let s = psi.start();
    let len = psi.len();
    if len < 2 {
        return Err(HusError::WindowTooShort {
            needed: 2,
            got: len,
        });
    }
    let e = mu.period_product().abs();
    let anchor = if e < 1.0 {
        Anchor::Start(psi.samples()[0])
    } else {
        let last = psi.last();
        if tail == Tail::Check {
            let remainder = tail_sum(mu, s, last)?;
            let threshold = TAIL_FRACTION * k0;
            if remainder.is_nan() || remainder >= threshold {
                return Err(HusError::Inconclusive {
                    remainder,
                    threshold,
                });
            }
        }
        Anchor::End(psi.samples()[len - 1])
    };
    integrate_first(mu, g, s, len, anchor)
}

/// `h * sum_{j >= last} 1 / |e_mu(s -> j+1)|`: how far the window-end pin
/// can sit from the infinite-horizon one, per unit residual.
fn tail_sum(mu: &PeriodicCycle, s: usize, last: usize) -> Result<f64> {
    let sums = s_sums(mu)?;
    let e = mu.period_product().abs();
    let log_growth: f64 = (s..last).map(|j| mu.factor(j).abs().ln()).sum();
    let per_unit = mu.h() * sums.values()[last % mu.len()] * e / (e - 1.0);
    Ok((per_unit.ln() - log_growth).exp())
}

fn sup_residual(spec: &EquationSpec, tr: &Trajectory) -> Result<f64> {
    Ok(residual(spec, tr)?.sup_abs())
}

fn forcing_slice(forcing: Option<&Trajectory>, start: usize, count: usize) -> Result<Vec<f64>> {
    match forcing {
        None => Ok(vec![0.0; count]),
        Some(f) => (start..start + count).map(|k| f.get(k)).collect(),
    }
}

/// Exact solution of `Δx - λx = 0` (`Sign::Minus`) or `Δy + λy = f`
/// (`Sign::Plus`) near `psi`, certified with `K0(λ)` resp. `K0(-λ)`.
pub fn track_first_order(
    c: &PeriodicCycle,
    sign: Sign,
    forcing: Option<&Trajectory>,
    psi: &Trajectory,
) -> Result<TrackingResult> {
    let mu = sign.effective_cycle(c);
    let g = forcing_slice(forcing, psi.start(), psi.len().saturating_sub(1))?;
    let exact = shadow_first(&mu, &g, psi, Tail::Check)?;
    let mut spec = EquationSpec::new(sign.family(), c.clone())?;
    if let Some(f) = forcing {
        spec = spec.with_forcing(f.clone())?;
    }
    let epsilon = sup_residual(&spec, psi)?;
    TrackingResult::new(psi, exact, epsilon, k0_constant(&mu)?)
}

/// Hill equation forced by `f` (given at `xi.start()..=xi.last()-2`).
pub(crate) fn shadow_hill(
    lam: &PeriodicCycle,
    f: &[f64],
    xi: &Trajectory,
    tail: Tail,
) -> Result<Vec<f64>> {
    let psi = substitute(lam, Substitution::FirstPlus { shift: 1 }, xi)?;
    let x = shadow_first(lam, f, &psi, tail)?;
    shadow_first(&lam.negated(), &x, xi, tail)
}

/// Exact Hill solution near `xi`, certified with `K0(λ) K0(-λ)`.
pub fn track_hill(
    c: &PeriodicCycle,
    forcing: Option<&Trajectory>,
    xi: &Trajectory,
) -> Result<TrackingResult> {
    need(xi, 3)?;
    let f = forcing_slice(forcing, xi.start(), xi.len() - 2)?;
    let exact = shadow_hill(c, &f, xi, Tail::Check)?;
    let (family, spec) = match forcing {
        None => (Family::Hill, EquationSpec::new(Family::Hill, c.clone())?),
        Some(f) => (
            Family::HillNonhomog,
            EquationSpec::new(Family::HillNonhomog, c.clone())?.with_forcing(f.clone())?,
        ),
    };
    let epsilon = sup_residual(&spec, xi)?;
    TrackingResult::new(xi, exact, epsilon, composite_constant(c, family)?)
}

pub(crate) fn shadow_third(
    lam: &PeriodicCycle,
    family: Family,
    xi: &Trajectory,
    tail: Tail,
) -> Result<Vec<f64>> {
    match family {
        Family::Pqr | Family::Pqr2 => {
            let (sub, mu) = if family == Family::Pqr {
                (Substitution::FirstPlus { shift: 2 }, lam.negated())
            } else {
                (Substitution::FirstMinus { shift: 2 }, lam.clone())
            };
            let psi = substitute(lam, sub, xi)?;
            let x = shadow_hill(lam, &vec![0.0; psi.len() - 2], &psi, tail)?;
            shadow_first(&mu, &x, xi, tail)
        }
        Family::Pqr3 | Family::Pqr4 => {
            let mu = if family == Family::Pqr3 {
                lam.negated()
            } else {
                lam.clone()
            };
            let psi = substitute(lam, Substitution::Hill { shift: 2 }, xi)?;
            let x = shadow_first(&mu, &vec![0.0; psi.len() - 1], &psi, tail)?;
            shadow_hill(lam, &x, xi, tail)
        }
        _ => Err(HusError::InvalidEquation(format!(
            "{family} is not third order"
        ))),
    }
}

/// Exact third-order solution near `xi` for a PQR family.
pub fn track_third(c: &PeriodicCycle, family: Family, xi: &Trajectory) -> Result<TrackingResult> {
    need(xi, 4)?;
    let exact = shadow_third(c, family, xi, Tail::Check)?;
    let spec = EquationSpec::new(family, c.clone())?;
    let epsilon = sup_residual(&spec, xi)?;
    TrackingResult::new(xi, exact, epsilon, composite_constant(c, family)?)
}

/// Dispatch on the equation's family.
pub fn track(spec: &EquationSpec, psi: &Trajectory) -> Result<TrackingResult> {
    let c = spec.base_cycle();
    match spec.family() {
        Family::FirstHomog => track_first_order(c, Sign::Minus, spec.forcing(), psi),
        Family::FirstNonhomog => track_first_order(c, Sign::Plus, spec.forcing(), psi),
        Family::Hill | Family::HillNonhomog => track_hill(c, spec.forcing(), psi),
        family => track_third(c, family, psi),
    }
}

fn need(tr: &Trajectory, needed: usize) -> Result<()> {
    if tr.len() < needed {
        Err(HusError::WindowTooShort {
            needed,
            got: tr.len(),
        })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Substitution {
    /// `psi(t) = Δξ(t - shift h) + λ(t - shift h) ξ(t - shift h)`
    FirstPlus { shift: usize },
    /// `psi(t) = Δξ(t - shift h) - λ(t - shift h) ξ(t - shift h)`
    FirstMinus { shift: usize },
    /// `psi(t) = Δ²ξ(t - shift h) + q(t - shift h) ξ(t - shift h)`, q the Hill coefficient
    Hill { shift: usize },
}

/// The order-reducing substitution, defined on `xi.start() + shift` onward.
fn substitute(lam: &PeriodicCycle, sub: Substitution, xi: &Trajectory) -> Result<Trajectory> {
    let h = lam.h();
    let s = xi.start();
    let x = xi.samples();
    let (shift, values): (usize, Vec<f64>) = match sub {
        Substitution::FirstPlus { shift } | Substitution::FirstMinus { shift } => {
            need(xi, 2)?;
            let sign = if matches!(sub, Substitution::FirstPlus { .. }) {
                1.0
            } else {
                -1.0
            };
            let v = (0..x.len() - 1)
                .map(|i| first_difference(x[i], x[i + 1], h) + sign * lam.at(s + i) * x[i])
                .collect();
            (shift, v)
        }
        Substitution::Hill { shift } => {
            need(xi, 3)?;
            let q = hill_coefficient_cycle(lam);
            let v = (0..x.len() - 2)
                .map(|i| second_difference(x[i], x[i + 1], x[i + 2], h) + q.at(s + i) * x[i])
                .collect();
            (shift, v)
        }
    };
    Trajectory::new(xi.step(), s + shift, values)
}

/// The reduced operator applied to `psi` at an absolute index.
type Reduced<'a> = Box<dyn Fn(&Trajectory, usize) -> f64 + 'a>;

/// Largest pointwise gap between the two sides of the family's cascade
/// identity, e.g. for Hill `Δψ(t+h) - λ(t+h)ψ(t+h)` against
/// `Δ²ξ(t) + [Δλ(t) - λ(t)λ(t+h)]ξ(t)`. Holds for any `xi`.
pub fn cascade_residual_identity_check(
    c: &PeriodicCycle,
    family: Family,
    xi: &Trajectory,
) -> Result<f64> {
    let h = c.h();
    let spec = EquationSpec::new(family, c.clone())?;
    need(xi, family.order() + 1)?;
    // reduced operator applied to psi, evaluated at psi-index t + shift
    let (psi, reduced): (Trajectory, Reduced) = match family {
        Family::FirstHomog | Family::FirstNonhomog => {
            return Err(HusError::InvalidEquation(format!(
                "{family} has no order-reducing substitution"
            )))
        }
        Family::Hill | Family::HillNonhomog => (
            substitute(c, Substitution::FirstPlus { shift: 1 }, xi)?,
            Box::new(move |p, k| first_difference(p.at(k), p.at(k + 1), h) - c.at(k) * p.at(k)),
        ),
        Family::Pqr | Family::Pqr2 => {
            let sub = if family == Family::Pqr {
                Substitution::FirstPlus { shift: 2 }
            } else {
                Substitution::FirstMinus { shift: 2 }
            };
            let q = hill_coefficient_cycle(c);
            (
                substitute(c, sub, xi)?,
                Box::new(move |p, k| {
                    second_difference(p.at(k), p.at(k + 1), p.at(k + 2), h) + q.at(k) * p.at(k)
                }),
            )
        }
        Family::Pqr3 | Family::Pqr4 => {
            let sign = if family == Family::Pqr3 { 1.0 } else { -1.0 };
            (
                substitute(c, Substitution::Hill { shift: 2 }, xi)?,
                Box::new(move |p, k| {
                    first_difference(p.at(k), p.at(k + 1), h) + sign * c.at(k) * p.at(k)
                }),
            )
        }
    };
    let lhs = residual(&spec.homogeneous(), xi)?;
    let shift = psi.start() - xi.start();
    let max = lhs
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &direct)| {
            let k = xi.start() + i + shift;
            (reduced(&psi, k) - direct).abs()
        })
        .fold(0.0_f64, f64::max);
    Ok(max)
}
