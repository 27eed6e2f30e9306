//! Brute-force lower bound for the best possible shadowing constant.
//!
//! For a residual of sup-norm 1 built from a sign pattern, the smallest
//! achievable `sup |psi - x|` over exact solutions `x` is a convex function
//! of the initial values of `x`; nested golden-section search finds it. The largest
//! such minimum over patterns, divided by the proven constant, tells how
//! close the constant is to sharp on that horizon.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{shadow_first, shadow_hill, shadow_third, Tail};
use crate::dynamics::{perturb, simulate, ResidualProfile};
use crate::error::{HusError, Result};
use crate::grid::{PeriodicCycle, Trajectory};
use crate::stability::{composite_constant, Coefficients, EquationSpec, Family};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub best_ratio: f64,
    pub best_pattern: Vec<i8>,
    pub horizon: usize,
    pub exhaustive: bool,
    pub patterns_evaluated: usize,
    pub constant: f64,
}

const ITERATIONS: [usize; 3] = [200, 80, 48];

/// Evaluate residual sign patterns of length `horizon + 1 - order` (first
/// sign fixed to `+`, since a pattern and its negation give the same
/// ratio). All of them when that fits in `budget`, otherwise the constant
/// and alternating patterns plus `budget - 2` drawn from a seeded generator.
pub fn extremal_ratio_oracle(
    c: &PeriodicCycle,
    family: Family,
    horizon: usize,
    budget: usize,
    seed: u64,
) -> Result<OracleEstimate> {
    let spec = EquationSpec::new(family, c.clone())?;
    let constant = composite_constant(c, family)?;
    let order = family.order();
    if horizon < order {
        return Err(HusError::WindowTooShort {
            needed: order + 1,
            got: horizon + 1,
        });
    }
    let bits = horizon + 1 - order;
    let free = bits - 1;
    let exhaustive = free < usize::BITS as usize && (1usize << free) <= budget.max(1);
    let patterns: Vec<Vec<i8>> = if exhaustive {
        (0..1usize << free)
            .map(|m| pattern_from_mask(m, bits))
            .collect()
    } else {
        // the constant and alternating patterns are the usual extremals
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let canonical = [
            vec![1i8; bits],
            (0..bits).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect(),
        ];
        let sampled = budget.max(2) - 2;
        canonical
            .into_iter()
            .chain((0..sampled).map(|_| {
                let mut p: Vec<i8> = (0..bits)
                    .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                    .collect();
                p[0] = 1;
                p
            }))
            .collect()
    };

    let basis = (0..order)
        .map(|i| {
            let mut init = vec![0.0; order];
            init[i] = 1.0;
            simulate(&spec, &init, horizon).map(Trajectory::into_samples)
        })
        .collect::<Result<Vec<_>>>()?;

    let results = patterns
        .par_iter()
        .enumerate()
        .map(|(i, p)| best_fit(&spec, p, horizon, &basis).map(|d| (i, d)))
        .collect::<Result<Vec<_>>>()?;
    let (best, dev) =
        results.into_iter().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, d)| if d > acc.1 { (i, d) } else { acc },
        );

    Ok(OracleEstimate {
        best_ratio: dev / constant,
        best_pattern: patterns[best].clone(),
        horizon,
        exhaustive,
        patterns_evaluated: patterns.len(),
        constant,
    })
}

fn pattern_from_mask(mask: usize, bits: usize) -> Vec<i8> {
    let mut p = vec![1i8; bits];
    for (j, v) in p.iter_mut().enumerate().skip(1) {
        if mask >> (j - 1) & 1 == 1 {
            *v = -1;
        }
    }
    p
}

/// `min_x sup |psi - x|` for the unit residual `pattern`.
fn best_fit(
    spec: &EquationSpec,
    pattern: &[i8],
    horizon: usize,
    basis: &[Vec<f64>],
) -> Result<f64> {
    let order = spec.order();
    let psi = perturb(
        spec,
        &ResidualProfile::signs(1.0, pattern)?,
        &vec![0.0; order],
        horizon,
    )?;
    // Any exact solution within D of psi starts within D of psi(0..order),
    // and the shadowing construction supplies one.
    let shadow = shadow_exact(spec, &psi)?;
    let d = psi
        .samples()
        .iter()
        .zip(&shadow)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let mut y = vec![0.0; order];
    Ok(minimize(0, &mut y, psi.samples(), basis, d).min(d))
}

fn shadow_exact(spec: &EquationSpec, psi: &Trajectory) -> Result<Vec<f64>> {
    let lam = spec.base_cycle();
    match spec.coefficients() {
        Coefficients::First { mu } => {
            shadow_first(mu, &vec![0.0; psi.len() - 1], psi, Tail::Ignore)
        }
        Coefficients::Hill { .. } => shadow_hill(lam, &vec![0.0; psi.len() - 2], psi, Tail::Ignore),
        Coefficients::Third(_) => shadow_third(lam, spec.family(), psi, Tail::Ignore),
    }
}

fn sup_gap(y: &[f64], psi: &[f64], basis: &[Vec<f64>]) -> f64 {
    (0..psi.len()).fold(0.0_f64, |m, k| {
        let x: f64 = y.iter().zip(basis).map(|(c, b)| c * b[k]).sum();
        m.max((psi[k] - x).abs())
    })
}

/// Nested golden-section search over `y[level..]`; the objective is convex
/// in `y` and so is its partial minimum over the inner coordinates.
fn minimize(level: usize, y: &mut [f64], psi: &[f64], basis: &[Vec<f64>], d: f64) -> f64 {
    if level == y.len() {
        return sup_gap(y, psi, basis);
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut eval = |v: f64| {
        y[level] = v;
        minimize(level + 1, y, psi, basis, d)
    };
    let (mut lo, mut hi) = (psi[level] - d, psi[level] + d);
    let cutoff = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let (mut fa, mut fb) = (eval(a), eval(b));
    for _ in 0..ITERATIONS[basis.len() - 1] {
        if hi - lo <= cutoff {
            break;
        }
        if fa <= fb {
            hi = b;
            (b, fb) = (a, fa);
            a = hi - INV_PHI * (hi - lo);
            fa = eval(a);
        } else {
            lo = a;
            (a, fa) = (b, fb);
            b = lo + INV_PHI * (hi - lo);
            fb = eval(b);
        }
    }
    fa.min(fb).min(eval(0.5 * (lo + hi)))
}
