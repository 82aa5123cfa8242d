//! Stability analysis of the discrete logistic map with time delay,
//!
//! ```text
//! x[n+1] = x[n] + r * x[n] * (1 - x[n-τ] / K)
//! ```
//!
//! The crate linearizes the map at its two fixed points, decides stability
//! with the Jury criterion (cross-checked by a polynomial root finder),
//! locates the stability boundary f(τ) of the non-trivial fixed point, and
//! simulates trajectories. It also covers two one-step discretizations of
//! the underlying logistic ODE.
//!
//! The crate is `no_std` and needs only `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod delay_map;
pub mod discretization;
pub mod jury;
pub mod polynomial;
pub mod sweep;

pub use delay_map::{
    char_poly, fixed_points, jacobian, simulate, step, trivial_stability_range, DelayMapError,
    DelayParams, FixedPoint, JacobianMatrix, OpenInterval, StateVector, Trajectory,
};
pub use discretization::{Scheme, SchemeParams};
pub use jury::{
    jury_conditions, jury_verdict, oracle_verdict, verify_sparse_induction, ConditionResult,
    InductionReport, JuryTable, Method, StabilityStatus, StabilityVerdict, Witness,
};
pub use polynomial::{Complex, Polynomial, PolynomialError, RootSet};
pub use sweep::{boundary_table, critical_r, is_stable_nontrivial, BoundaryPoint, BoundaryTable};
