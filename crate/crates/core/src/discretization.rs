//! Two one-step discretizations of the logistic ODE `dx/dt = r x (1 - x/K)`.
//!
//! * forward: `x' = (rh + 1) x - (rh/K) x²`
//! * ratio:   `x' = (1 + rh) x / (1 + (rh/K) x)`
//!
//! Both fix 0 and K. Only the ratio scheme keeps K stable for every r > 0.

use core::fmt;

use crate::jury::{Method, StabilityVerdict};

/// |f'(x*)| within this of 1 is marginal.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-12;
/// Ratio-scheme denominators closer than this to zero are a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Forward,
    Ratio,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Forward => "forward",
            Scheme::Ratio => "ratio",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SchemeError {
    InvalidParams(&'static str),
    WrongScheme { expected: Scheme },
    Pole { x: f64 },
}

impl fmt::Display for SchemeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeError::InvalidParams(msg) => f.write_str(msg),
            SchemeError::WrongScheme { expected } => {
                write!(f, "operation requires the {} scheme", expected.as_str())
            }
            SchemeError::Pole { x } => write!(f, "ratio scheme has a pole at x = {x}"),
        }
    }
}

impl core::error::Error for SchemeError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeParams {
    r: f64,
    capacity: f64,
    h: f64,
    scheme: Scheme,
}

impl SchemeParams {
    pub fn new(r: f64, capacity: f64, h: f64, scheme: Scheme) -> Result<Self, SchemeError> {
        if !r.is_finite() {
            return Err(SchemeError::InvalidParams("rate must be finite"));
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(SchemeError::InvalidParams(
                "carrying capacity must be positive",
            ));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(SchemeError::InvalidParams("step size must be positive"));
        }
        Ok(SchemeParams {
            r,
            capacity,
            h,
            scheme,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }
}

/// Forward-difference step.
///
/// Evaluated as `x + rh·x·(1 − x/K)`, algebraically the same as
/// `(rh+1)x − (rh/K)x²`; with h = 1 it is bit-identical to the τ = 0 delay map.
pub fn forward_step(p: &SchemeParams, x: f64) -> Result<f64, SchemeError> {
    if p.scheme != Scheme::Forward {
        return Err(SchemeError::WrongScheme {
            expected: Scheme::Forward,
        });
    }
    let rh = p.r * p.h;
    Ok(x + rh * x * (1.0 - x / p.capacity))
}

pub fn ratio_step(p: &SchemeParams, x: f64) -> Result<f64, SchemeError> {
    if p.scheme != Scheme::Ratio {
        return Err(SchemeError::WrongScheme {
            expected: Scheme::Ratio,
        });
    }
    let rh = p.r * p.h;
    let denom = 1.0 + rh / p.capacity * x;
    if denom.abs() <= POLE_TOLERANCE {
        return Err(SchemeError::Pole { x });
    }
    Ok((1.0 + rh) * x / denom)
}

/// One step of whichever scheme `p` selects.
pub fn scheme_step(p: &SchemeParams, x: f64) -> Result<f64, SchemeError> {
    match p.scheme {
        Scheme::Forward => forward_step(p, x),
        Scheme::Ratio => ratio_step(p, x),
    }
}

/// Closed-form derivative of the scheme map at `x`.
pub fn derivative(p: &SchemeParams, x: f64) -> Result<f64, SchemeError> {
    let rh = p.r * p.h;
    match p.scheme {
        Scheme::Forward => Ok(1.0 + rh - 2.0 * rh * x / p.capacity),
        Scheme::Ratio => {
            let denom = 1.0 + rh / p.capacity * x;
            if denom.abs() <= POLE_TOLERANCE {
                return Err(SchemeError::Pole { x });
            }
            Ok((1.0 + rh) / (denom * denom))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointVerdict {
    pub x: f64,
    pub derivative: f64,
    pub verdict: StabilityVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeStability {
    pub trivial: FixedPointVerdict,
    pub nontrivial: FixedPointVerdict,
}

/// Classifies X = 0 and X = K by |f'(x*)| against 1.
pub fn scheme_stability(p: &SchemeParams) -> SchemeStability {
    let rh = p.r * p.h;
    let (d0, dk) = match p.scheme {
        Scheme::Forward => (1.0 + rh, 1.0 - rh),
        Scheme::Ratio => (1.0 + rh, 1.0 / (1.0 + rh)),
    };
    let classify = |x: f64, d: f64| FixedPointVerdict {
        x,
        derivative: d,
        verdict: StabilityVerdict::from_modulus(d.abs(), DERIVATIVE_TOLERANCE, Method::Derivative),
    };
    SchemeStability {
        trivial: classify(0.0, d0),
        nontrivial: classify(p.capacity, dk),
    }
}
