//! Stability boundary f(τ) of the non-trivial fixed point.
//!
//! f(τ) is found by bisection on the boolean verdict "X₂ is stable at r".
//! Marginal verdicts count as unstable: the stable range is open.

use alloc::vec::Vec;
use core::fmt;

use crate::delay_map::{char_poly, DelayParams, FixedPoint};
use crate::jury::{jury_verdict, oracle_verdict, Method, StabilityVerdict};
use crate::polynomial::PolynomialError;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// First probe when searching for a bracket.
pub const BRACKET_START: f64 = 0.1;
/// Upper limit of the doubling search.
pub const BRACKET_CAP: f64 = 4.0;
/// Lower limit of the halving search used when `BRACKET_START` is already unstable.
pub const BRACKET_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum SweepError {
    InvalidTolerance(f64),
    InvalidRate(f64),
    UnsupportedMethod(Method),
    /// No stable/unstable pair found within [`BRACKET_FLOOR`, `BRACKET_CAP`].
    Bracketing {
        tau: usize,
    },
    Oracle(PolynomialError),
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepError::InvalidTolerance(t) => write!(f, "tolerance must be positive, got {t}"),
            SweepError::InvalidRate(r) => write!(f, "rate must be finite, got {r}"),
            SweepError::UnsupportedMethod(m) => write!(f, "method {m} not usable for sweeps"),
            SweepError::Bracketing { tau } => {
                write!(
                    f,
                    "no stability change found in (0, {BRACKET_CAP}] for tau = {tau}"
                )
            }
            SweepError::Oracle(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SweepError {}

impl From<PolynomialError> for SweepError {
    fn from(e: PolynomialError) -> Self {
        SweepError::Oracle(e)
    }
}

/// Verdict for X₂ = (K, …, K) at rate `r`, via the Jury conditions or the
/// spectral-radius oracle.
pub fn is_stable_nontrivial(
    tau: usize,
    r: f64,
    method: Method,
) -> Result<StabilityVerdict, SweepError> {
    let params = DelayParams::new(r, 1.0, tau).map_err(|_| SweepError::InvalidRate(r))?;
    let p = char_poly(&params, FixedPoint::NonTrivial);
    match method {
        Method::Jury => Ok(jury_verdict(&p)),
        Method::Oracle => Ok(oracle_verdict(&p)?),
        Method::Derivative => Err(SweepError::UnsupportedMethod(method)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub tau: usize,
    pub r_critical: f64,
    pub bracket_width: f64,
    pub method: Method,
}

/// f(τ) by bisection with the Jury test.
pub fn critical_r(tau: usize, tol: f64) -> Result<BoundaryPoint, SweepError> {
    critical_r_with(tau, tol, Method::Jury)
}

pub fn critical_r_with(tau: usize, tol: f64, method: Method) -> Result<BoundaryPoint, SweepError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(SweepError::InvalidTolerance(tol));
    }
    let stable = |r: f64| is_stable_nontrivial(tau, r, method).map(|v| v.is_stable());

    let (mut lo, mut hi) = if stable(BRACKET_START)? {
        let mut lo = BRACKET_START;
        loop {
            let next = (2.0 * lo).min(BRACKET_CAP);
            if !stable(next)? {
                break (lo, next);
            }
            if next >= BRACKET_CAP {
                return Err(SweepError::Bracketing { tau });
            }
            lo = next;
        }
    } else {
        let mut hi = BRACKET_START;
        loop {
            let next = 0.5 * hi;
            if next < BRACKET_FLOOR {
                return Err(SweepError::Bracketing { tau });
            }
            if stable(next)? {
                break (next, hi);
            }
            hi = next;
        }
    };

    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BoundaryPoint {
        tau,
        r_critical: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        method,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryTable {
    pub points: Vec<BoundaryPoint>,
    /// f(τ) drops by more than 10·tol between every pair of neighbours.
    pub monotone_decreasing: bool,
}

impl BoundaryTable {
    /// Smallest drop f(τ) − f(τ+1) across the table, if it has two points.
    pub fn min_decrease(&self) -> Option<f64> {
        self.points
            .windows(2)
            .map(|w| w[0].r_critical - w[1].r_critical)
            .reduce(f64::min)
    }
}

pub fn boundary_table(tau_max: usize, tol: f64) -> Result<BoundaryTable, SweepError> {
    boundary_table_with(tau_max, tol, Method::Jury)
}

pub fn boundary_table_with(
    tau_max: usize,
    tol: f64,
    method: Method,
) -> Result<BoundaryTable, SweepError> {
    let points = (0..=tau_max)
        .map(|tau| critical_r_with(tau, tol, method))
        .collect::<Result<Vec<_>, _>>()?;
    let monotone_decreasing = points
        .windows(2)
        .all(|w| w[0].r_critical - w[1].r_critical > 10.0 * tol);
    Ok(BoundaryTable {
        points,
        monotone_decreasing,
    })
}
