//! Forward simulation, residuals and epsilon-perturbed trajectories.
//!
//! Every simulator returns samples on `0..=steps`. Residuals are reported on
//! the indices where the equation can be evaluated, `0..=steps - order`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HusError, Result};
use crate::grid::{
    first_difference, second_difference, third_difference, PeriodicCycle, StepSize, Trajectory,
};
use crate::stability::{Coefficients, EquationSpec, Family};

/// Samples beyond this magnitude abort a simulation.
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// Which first-order equation: `Minus` is `Δx - λx = f`, `Plus` is `Δy + λy = f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// Coefficient `mu` such that the equation reads `Δy - mu*y = f`.
    pub fn effective_cycle(self, c: &PeriodicCycle) -> PeriodicCycle {
        match self {
            Sign::Minus => c.clone(),
            Sign::Plus => c.negated(),
        }
    }

    pub fn family(self) -> Family {
        match self {
            Sign::Minus => Family::FirstHomog,
            Sign::Plus => Family::FirstNonhomog,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualPattern {
    ConstantPlus,
    ConstantMinus,
    Alternating,
    RandomUniform,
    /// Values repeated cyclically to the required length.
    Explicit(Vec<f64>),
}

/// A residual sequence bounded by `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualProfile {
    epsilon: f64,
    pattern: ResidualPattern,
    seed: Option<u64>,
}

impl ResidualProfile {
    pub fn new(epsilon: f64, pattern: ResidualPattern, seed: Option<u64>) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(HusError::Config(format!(
                "epsilon must be >= 0, got {epsilon}"
            )));
        }
        if let ResidualPattern::Explicit(values) = &pattern {
            if values.is_empty() {
                return Err(HusError::Config("explicit residual list is empty".into()));
            }
            if let Some(v) = values.iter().find(|v| v.is_nan() || v.abs() > epsilon) {
                return Err(HusError::Config(format!(
                    "explicit residual {v} exceeds epsilon {epsilon}"
                )));
            }
        }
        Ok(Self {
            epsilon,
            pattern,
            seed,
        })
    }

    pub fn constant_plus(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, ResidualPattern::ConstantPlus, None)
    }

    pub fn alternating(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, ResidualPattern::Alternating, None)
    }

    pub fn random(epsilon: f64, seed: u64) -> Result<Self> {
        Self::new(epsilon, ResidualPattern::RandomUniform, Some(seed))
    }

    /// `epsilon * s_k` for a sign pattern `s`.
    pub fn signs(epsilon: f64, signs: &[i8]) -> Result<Self> {
        let values = signs
            .iter()
            .map(|&s| epsilon * f64::from(s.signum()))
            .collect();
        Self::new(epsilon, ResidualPattern::Explicit(values), None)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn pattern(&self) -> &ResidualPattern {
        &self.pattern
    }

    pub fn realize(&self, len: usize) -> Vec<f64> {
        let eps = self.epsilon;
        match &self.pattern {
            ResidualPattern::ConstantPlus => vec![eps; len],
            ResidualPattern::ConstantMinus => vec![-eps; len],
            ResidualPattern::Alternating => (0..len)
                .map(|k| if k % 2 == 0 { eps } else { -eps })
                .collect(),
            ResidualPattern::RandomUniform => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.unwrap_or(0));
                (0..len)
                    .map(|_| {
                        if eps > 0.0 {
                            rng.random_range(-eps..=eps)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            ResidualPattern::Explicit(values) => values.iter().copied().cycle().take(len).collect(),
        }
    }
}

fn guard(value: f64, index: usize) -> Result<f64> {
    if value.is_finite() && value.abs() <= OVERFLOW_LIMIT {
        Ok(value)
    } else {
        Err(HusError::Overflow { index })
    }
}

fn need(len: usize, needed: usize) -> Result<()> {
    if len < needed {
        Err(HusError::WindowTooShort { needed, got: len })
    } else {
        Ok(())
    }
}

/// Forcing values `f(0..count)`, zero when absent.
fn forcing_values(forcing: Option<&Trajectory>, start: usize, count: usize) -> Result<Vec<f64>> {
    match forcing {
        None => Ok(vec![0.0; count]),
        Some(f) => (start..start + count).map(|k| f.get(k)).collect(),
    }
}

/// Where a first-order solve is pinned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Anchor {
    Start(f64),
    End(f64),
}

/// Solve `Δy(t) - mu(t) y(t) = g(t)` on `start..start+len`, `g` given at
/// `start..start+len-1`. `Start` integrates forward, `End` backward.
pub(crate) fn integrate_first(
    mu: &PeriodicCycle,
    g: &[f64],
    start: usize,
    len: usize,
    anchor: Anchor,
) -> Result<Vec<f64>> {
    debug_assert!(g.len() + 1 >= len);
    let h = mu.h();
    let mut y = vec![0.0; len];
    match anchor {
        Anchor::Start(v) => {
            y[0] = guard(v, start)?;
            for i in 0..len - 1 {
                let k = start + i;
                y[i + 1] = guard(mu.factor(k) * y[i] + h * g[i], k + 1)?;
            }
        }
        Anchor::End(v) => {
            y[len - 1] = guard(v, start + len - 1)?;
            for i in (0..len - 1).rev() {
                let k = start + i;
                let factor = mu.factor(k);
                if factor == 0.0 {
                    return Err(HusError::Degenerate {
                        index: k % mu.len(),
                    });
                }
                y[i] = guard((y[i + 1] - h * g[i]) / factor, k)?;
            }
        }
    }
    Ok(y)
}

/// Integrating from this end keeps the homogeneous part from growing.
pub(crate) fn stable_anchor(mu: &PeriodicCycle, value: f64) -> Anchor {
    if mu.period_product().abs() > 1.0 {
        Anchor::End(value)
    } else {
        Anchor::Start(value)
    }
}

/// Bounded solution of `Δy - mu*y = g` on `start..start+len`.
fn first_response(mu: &PeriodicCycle, g: &[f64], start: usize, len: usize) -> Result<Vec<f64>> {
    integrate_first(mu, g, start, len, stable_anchor(mu, 0.0))
}

/// Bounded solution of the Hill equation forced by `g` (given at
/// `start..start+len-2`), via `φ = Δy + λy` shifted one step:
/// `Δφ - λφ = g(t-1)` then `Δy + λy = φ(t+1)`.
fn hill_response(lam: &PeriodicCycle, g: &[f64], start: usize, len: usize) -> Result<Vec<f64>> {
    let phi = first_response(lam, g, start + 1, len - 1)?;
    first_response(&lam.negated(), &phi, start, len)
}

fn third_response(
    family: Family,
    lam: &PeriodicCycle,
    g: &[f64],
    start: usize,
    len: usize,
) -> Result<Vec<f64>> {
    match family {
        Family::Pqr | Family::Pqr2 => {
            let phi = hill_response(lam, g, start + 2, len - 1)?;
            let mu = if family == Family::Pqr {
                lam.negated()
            } else {
                lam.clone()
            };
            first_response(&mu, &phi, start, len)
        }
        Family::Pqr3 | Family::Pqr4 => {
            let mu = if family == Family::Pqr3 {
                lam.negated()
            } else {
                lam.clone()
            };
            let phi = first_response(&mu, g, start + 2, len - 2)?;
            hill_response(lam, &phi, start, len)
        }
        _ => unreachable!(),
    }
}

/// Bounded solution on `0..len` of the homogeneous equation driven by `g`.
fn bounded_response(spec: &EquationSpec, g: &[f64], len: usize) -> Result<Vec<f64>> {
    let lam = spec.base_cycle();
    match (spec.coefficients(), spec.family()) {
        (Coefficients::First { mu }, _) => first_response(mu, g, 0, len),
        (Coefficients::Hill { .. }, _) => hill_response(lam, g, 0, len),
        (Coefficients::Third(_), family) => third_response(family, lam, g, 0, len),
    }
}

/// `Δx - λx = 0` (`Minus`) or `Δy + λy = f` (`Plus`), forward from `y0`.
pub fn simulate_first_order(
    c: &PeriodicCycle,
    sign: Sign,
    forcing: Option<&Trajectory>,
    y0: f64,
    steps: usize,
) -> Result<Trajectory> {
    let mu = sign.effective_cycle(c);
    let g = forcing_values(forcing, 0, steps)?;
    let y = integrate_first(&mu, &g, 0, steps + 1, Anchor::Start(y0))?;
    Trajectory::new(c.step(), 0, y)
}

/// `y(t+2h) = 2y(t+h) - y(t) - h² q(t) y(t) + h² f(t)`.
pub fn simulate_hill(
    c: &PeriodicCycle,
    forcing: Option<&Trajectory>,
    y0: f64,
    y1: f64,
    steps: usize,
) -> Result<Trajectory> {
    need(steps, 2)?;
    let q = crate::stability::hill_coefficient_cycle(c);
    let f = forcing_values(forcing, 0, steps - 1)?;
    let h2 = c.h() * c.h();
    let mut y = Vec::with_capacity(steps + 1);
    y.push(guard(y0, 0)?);
    y.push(guard(y1, 1)?);
    for k in 0..steps - 1 {
        let next = 2.0 * y[k + 1] - y[k] - h2 * q.at(k) * y[k] + h2 * f[k];
        y.push(guard(next, k + 2)?);
    }
    Trajectory::new(c.step(), 0, y)
}

/// Third-order family solved for `y(t+3h)`.
pub fn simulate_third(
    c: &PeriodicCycle,
    family: Family,
    y0: f64,
    y1: f64,
    y2: f64,
    steps: usize,
) -> Result<Trajectory> {
    need(steps, 3)?;
    let coef = crate::stability::third_order_coefficients(c, family)?;
    third_forward(c.step(), &coef, &[y0, y1, y2], &vec![0.0; steps - 2], steps)
}

fn third_forward(
    h: StepSize,
    coef: &crate::stability::ThirdOrderCoefficients,
    initial: &[f64],
    f: &[f64],
    steps: usize,
) -> Result<Trajectory> {
    let step = h;
    let h = h.get();
    let h3 = h * h * h;
    let mut y = Vec::with_capacity(steps + 1);
    for (i, &v) in initial.iter().enumerate() {
        y.push(guard(v, i)?);
    }
    for k in 0..steps - 2 {
        let (y0, y1, y2) = (y[k], y[k + 1], y[k + 2]);
        let lower = coef.p.at(k) * second_difference(y0, y1, y2, h)
            + coef.q.at(k) * first_difference(y0, y1, h)
            + coef.r.at(k) * y0;
        let next = 3.0 * y2 - 3.0 * y1 + y0 - h3 * (lower - f[k]);
        y.push(guard(next, k + 3)?);
    }
    Trajectory::new(step, 0, y)
}

/// Forward simulation of `spec` (including its forcing) from
/// `initial.len() == order` starting values.
pub fn simulate(spec: &EquationSpec, initial: &[f64], steps: usize) -> Result<Trajectory> {
    let order = spec.order();
    if initial.len() != order {
        return Err(HusError::InvalidEquation(format!(
            "{} needs {order} initial values, got {}",
            spec.family(),
            initial.len()
        )));
    }
    need(steps, order)?;
    let lam = spec.base_cycle();
    match spec.coefficients() {
        Coefficients::First { mu } => {
            let g = forcing_values(spec.forcing(), 0, steps)?;
            let y = integrate_first(mu, &g, 0, steps + 1, Anchor::Start(initial[0]))?;
            Trajectory::new(lam.step(), 0, y)
        }
        Coefficients::Hill { .. } => {
            simulate_hill(lam, spec.forcing(), initial[0], initial[1], steps)
        }
        Coefficients::Third(coef) => {
            third_forward(lam.step(), coef, initial, &vec![0.0; steps - 2], steps)
        }
    }
}

/// Pointwise left-hand side minus forcing, on `tr.start()..=tr.last() - order`.
pub fn residual(spec: &EquationSpec, tr: &Trajectory) -> Result<Trajectory> {
    let order = spec.order();
    need(tr.len(), order + 1)?;
    let h = tr.h();
    let s = tr.samples();
    let start = tr.start();
    let count = tr.len() - order;
    let f = forcing_values(spec.forcing(), start, count)?;
    let values: Vec<f64> = (0..count)
        .map(|i| {
            let k = start + i;
            let lhs = match spec.coefficients() {
                Coefficients::First { mu } => first_difference(s[i], s[i + 1], h) - mu.at(k) * s[i],
                Coefficients::Hill { q } => {
                    second_difference(s[i], s[i + 1], s[i + 2], h) + q.at(k) * s[i]
                }
                Coefficients::Third(c) => {
                    third_difference(s[i], s[i + 1], s[i + 2], s[i + 3], h)
                        + c.p.at(k) * second_difference(s[i], s[i + 1], s[i + 2], h)
                        + c.q.at(k) * first_difference(s[i], s[i + 1], h)
                        + c.r.at(k) * s[i]
                }
            };
            lhs - f[i]
        })
        .collect();
    Trajectory::new(tr.step(), start, values)
}

/// Exact solution from `initial` plus a bounded response to the profile's
/// residual sequence, so that `residual(spec, result)` reproduces the
/// profile realization.
///
/// The response is built through the factored form of the equation, each
/// first-order factor integrated in its non-expanding direction; the result
/// stays bounded whenever the unperturbed solution does.
pub fn perturb(
    spec: &EquationSpec,
    profile: &ResidualProfile,
    initial: &[f64],
    steps: usize,
) -> Result<Trajectory> {
    let base = simulate(spec, initial, steps)?;
    let r = profile.realize(steps + 1 - spec.order());
    let response = bounded_response(&spec.homogeneous(), &r, steps + 1)?;
    let samples = base
        .samples()
        .iter()
        .zip(&response)
        .enumerate()
        .map(|(k, (u, p))| guard(u + p, k))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(base.step(), 0, samples)
}

/// The bounded exact solution of the forced equation plus the bounded
/// response to the profile's residual, on `0..=steps`.
///
/// Unlike [`perturb`], nothing is integrated in an expanding direction, so
/// the result stays bounded even when the forcing would drive a forward
/// simulation from fixed initial values off to infinity.
pub fn perturb_bounded(
    spec: &EquationSpec,
    profile: &ResidualProfile,
    steps: usize,
) -> Result<Trajectory> {
    let count = steps + 1 - spec.order();
    let f = forcing_values(spec.forcing(), 0, count)?;
    let g: Vec<f64> = profile
        .realize(count)
        .iter()
        .zip(&f)
        .map(|(r, f)| r + f)
        .collect();
    let y = bounded_response(&spec.homogeneous(), &g, steps + 1)?;
    Trajectory::new(spec.base_cycle().step(), 0, y)
}
