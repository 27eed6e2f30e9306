//! The uniform grid `{0, h, 2h, ...}`, periodic coefficients on it, forward
//! differences and the discrete exponential.
//!
//! Points are addressed by integer step index `k`; the physical time `k*h` is
//! derived on demand so that `k mod n` stays exact.

use serde::{Deserialize, Serialize};

use crate::error::{HusError, Result};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct StepSize(f64);

impl StepSize {
    pub fn new(h: f64) -> Result<Self> {
        if h.is_finite() && h > 0.0 {
            Ok(Self(h))
        } else {
            Err(HusError::InvalidStepSize(h))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for StepSize {
    type Error = HusError;

    fn try_from(h: f64) -> Result<Self> {
        Self::new(h)
    }
}

impl From<StepSize> for f64 {
    fn from(h: StepSize) -> f64 {
        h.0
    }
}

/// Grid index `k`; the point it names is `t = k*h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeIndex(pub usize);

impl TimeIndex {
    pub fn time(self, h: StepSize) -> f64 {
        self.0 as f64 * h.get()
    }
}

impl From<usize> for TimeIndex {
    fn from(k: usize) -> Self {
        Self(k)
    }
}

/// Coefficient `lambda(t) = values[(t/h) mod n]`.
///
/// [`PeriodicCycle::new`] insists that `n` is the minimal period. Derived
/// coefficient cycles (and the repetition tests) go through
/// [`PeriodicCycle::new_relaxed`], which only checks finiteness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicCycle {
    h: StepSize,
    values: Vec<f64>,
}

impl PeriodicCycle {
    pub fn new(h: f64, values: Vec<f64>) -> Result<Self> {
        let cycle = Self::new_relaxed(h, values)?;
        let period = cycle.minimal_period();
        if period != cycle.len() {
            return Err(HusError::NonMinimalPeriod {
                len: cycle.len(),
                period,
            });
        }
        Ok(cycle)
    }

    pub fn new_relaxed(h: f64, values: Vec<f64>) -> Result<Self> {
        let h = StepSize::new(h)?;
        if values.is_empty() {
            return Err(HusError::EmptyCycle);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(HusError::NonFinite { index, value });
        }
        Ok(Self { h, values })
    }

    pub fn constant(h: f64, lambda: f64) -> Result<Self> {
        Self::new(h, vec![lambda])
    }

    #[inline]
    pub fn step(&self) -> StepSize {
        self.h
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h.get()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of values stored, `n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Period in time units, `omega = n*h`.
    pub fn omega(&self) -> f64 {
        self.len() as f64 * self.h()
    }

    #[inline]
    pub fn at(&self, k: usize) -> f64 {
        self.values[k % self.values.len()]
    }

    /// `1 + h*lambda(k*h)`.
    #[inline]
    pub fn factor(&self, k: usize) -> f64 {
        1.0 + self.h() * self.at(k)
    }

    /// Smallest `d` dividing `n` with `values[i] == values[i + d]` throughout.
    pub fn minimal_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| (0..n).all(|i| self.values[i] == self.values[(i + d) % n]))
            .unwrap_or(n)
    }

    pub fn negated(&self) -> Self {
        Self {
            h: self.h,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Same coefficient function stored with period `m*n`.
    pub fn repeated(&self, m: usize) -> Self {
        let m = m.max(1);
        Self {
            h: self.h,
            values: self
                .values
                .iter()
                .copied()
                .cycle()
                .take(m * self.len())
                .collect(),
        }
    }

    /// Cycle positions whose factor `1 + h*lambda_k` vanishes.
    pub fn zero_factor(&self) -> Option<usize> {
        (0..self.len()).find(|&k| is_zero_factor(self.factor(k), self.h() * self.at(k)))
    }

    /// `e_lambda(nh)`, the product of one full period of factors.
    pub fn period_product(&self) -> f64 {
        self.exponential_from(0, self.len())
    }

    /// `prod_{j = start}^{start + steps - 1} (1 + h*lambda(j*h))`.
    pub fn exponential_from(&self, start: usize, steps: usize) -> f64 {
        (start..start + steps).map(|j| self.factor(j)).product()
    }
}

pub(crate) fn is_zero_factor(factor: f64, h_lambda: f64) -> bool {
    factor.abs() <= 1e-12 * h_lambda.abs().max(1.0)
}

/// Real samples on consecutive grid points `start, start+1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    h: StepSize,
    start: usize,
    samples: Vec<f64>,
}

impl Trajectory {
    pub fn new(h: StepSize, start: usize, samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(HusError::EmptyTrajectory);
        }
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(HusError::NonFinite {
                index: start + index,
                value,
            });
        }
        Ok(Self { h, start, samples })
    }

    pub fn from_fn(
        h: StepSize,
        start: usize,
        len: usize,
        f: impl FnMut(usize) -> f64,
    ) -> Result<Self> {
        Self::new(h, start, (start..start + len).map(f).collect())
    }

    pub fn zeros(h: StepSize, start: usize, len: usize) -> Result<Self> {
        Self::new(h, start, vec![0.0; len])
    }

    #[inline]
    pub fn step(&self) -> StepSize {
        self.h
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h.get()
    }

    #[inline]
    pub fn start(&self) -> usize {
        self.start
    }

    /// Last index covered (inclusive).
    #[inline]
    pub fn last(&self) -> usize {
        self.start + self.samples.len() - 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn contains(&self, k: usize) -> bool {
        k >= self.start && k <= self.last()
    }

    pub fn get(&self, k: usize) -> Result<f64> {
        if self.contains(k) {
            Ok(self.samples[k - self.start])
        } else {
            Err(HusError::OutOfWindow {
                index: k,
                first: self.start,
                last: self.last(),
            })
        }
    }

    /// Unchecked absolute-index read; callers guarantee `contains(k)`.
    #[inline]
    pub(crate) fn at(&self, k: usize) -> f64 {
        self.samples[k - self.start]
    }

    pub fn sup_abs(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `max(1, sup |x|)`, the reference magnitude for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.sup_abs().max(1.0)
    }

    /// Same samples relabelled to begin at `start`.
    pub fn relabel(&self, start: usize) -> Self {
        Self {
            h: self.h,
            start,
            samples: self.samples.clone(),
        }
    }

    /// Sub-window `[first, last]` (inclusive, absolute indices).
    pub fn window(&self, first: usize, last: usize) -> Result<Self> {
        self.get(first)?;
        self.get(last)?;
        Self::new(
            self.h,
            first,
            self.samples[first - self.start..=last - self.start].to_vec(),
        )
    }

    pub fn delta_h(&self, k: usize) -> Result<f64> {
        self.get(k + 1)?;
        let k0 = self.get(k)?;
        Ok((self.at(k + 1) - k0) / self.h())
    }

    pub fn delta2_h(&self, k: usize) -> Result<f64> {
        self.get(k + 2)?;
        self.get(k)?;
        Ok(second_difference(
            self.at(k),
            self.at(k + 1),
            self.at(k + 2),
            self.h(),
        ))
    }

    pub fn delta3_h(&self, k: usize) -> Result<f64> {
        self.get(k + 3)?;
        self.get(k)?;
        Ok(third_difference(
            self.at(k),
            self.at(k + 1),
            self.at(k + 2),
            self.at(k + 3),
            self.h(),
        ))
    }

    pub fn linear_combination(a: f64, u: &Self, b: f64, v: &Self) -> Result<Self> {
        if u.start != v.start || u.len() != v.len() || u.h != v.h {
            return Err(HusError::InvalidEquation(
                "linear combination of trajectories on different windows".into(),
            ));
        }
        let samples = u
            .samples
            .iter()
            .zip(&v.samples)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::new(u.h, u.start, samples)
    }
}

#[inline]
pub(crate) fn first_difference(y0: f64, y1: f64, h: f64) -> f64 {
    (y1 - y0) / h
}

#[inline]
pub(crate) fn second_difference(y0: f64, y1: f64, y2: f64, h: f64) -> f64 {
    (first_difference(y1, y2, h) - first_difference(y0, y1, h)) / h
}

#[inline]
pub(crate) fn third_difference(y0: f64, y1: f64, y2: f64, y3: f64, h: f64) -> f64 {
    (second_difference(y1, y2, y3, h) - second_difference(y0, y1, y2, h)) / h
}

pub fn coefficient_at(c: &PeriodicCycle, t: TimeIndex) -> f64 {
    c.at(t.0)
}

pub fn delta_h(tr: &Trajectory, t: TimeIndex) -> Result<f64> {
    tr.delta_h(t.0)
}

pub fn delta2_h(tr: &Trajectory, t: TimeIndex) -> Result<f64> {
    tr.delta2_h(t.0)
}

pub fn delta3_h(tr: &Trajectory, t: TimeIndex) -> Result<f64> {
    tr.delta3_h(t.0)
}

/// `e_lambda(t) = prod_{k=0}^{t/h - 1} (1 + h*lambda(k*h))`, with the empty
/// product equal to one. Plain running product: factors may be negative.
pub fn discrete_exponential(c: &PeriodicCycle, t: TimeIndex) -> f64 {
    c.exponential_from(0, t.0)
}

pub fn negate_cycle(c: &PeriodicCycle) -> PeriodicCycle {
    c.negated()
}
