//! Hyers-Ulam stability of linear h-difference equations with periodic
//! coefficients.
//!
//! A coefficient cycle `λ0..λ(n-1)` on the grid `hZ` defines the first-order
//! equations `Δx = λx` and `Δy + λy = f`, the discrete Hill equation
//! `Δ²y + [Δλ(t) - λ(t)λ(t+h)] y = f` and four third-order families built
//! from the same cycle. Each is Hyers-Ulam stable exactly when
//! `|e_λ(nh)| ≠ 1` (and `|e_-λ(nh)| ≠ 1` where both sides enter), with an
//! explicit constant assembled from the S-sums of the cycle.
//!
//! * [`stability`] computes `e(nh)`, the S-sums, `K0(±λ)`, composite
//!   constants and verdicts.
//! * [`dynamics`] simulates exact solutions and builds perturbed ones.
//! * [`tracking`] constructs the exact solution that shadows a perturbed
//!   one and probes how sharp the constant is.
//! * [`report`] turns configs into the JSON/CSV documents of the `hus` tool.
//!
//! ```
//! use hus_hill::{stability_report, PeriodicCycle};
//!
//! let c = PeriodicCycle::new(1.0, vec![0.0, 0.5, -0.5]).unwrap();
//! let r = stability_report(&c);
//! assert!((r.composite.unwrap() - 224.0).abs() < 1e-9);
//! ```

pub mod dynamics;
pub mod error;
pub mod grid;
pub mod report;
pub mod stability;
pub mod tracking;

pub use dynamics::{
    perturb, perturb_bounded, residual, simulate, ResidualPattern, ResidualProfile, Sign,
};
pub use error::{HusError, Result};
pub use grid::{discrete_exponential, PeriodicCycle, StepSize, TimeIndex, Trajectory};
pub use stability::{
    composite_constant, k0_constant, s_sums, stability_report, EquationSpec, Family, SSums,
    StabilityReport, Verdict,
};
pub use tracking::{
    cascade_residual_identity_check, extremal_ratio_oracle, track, track_first_order, track_hill,
    track_third, OracleEstimate, TrackingResult,
};
