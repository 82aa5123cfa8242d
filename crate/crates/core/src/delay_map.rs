//! The delayed logistic recurrence
//!
//! ```text
//! x[n+1] = x[n] + r * x[n] * (1 - x[n-τ] / K)
//! ```
//!
//! acting on the history `(x[n-τ], …, x[n])`, stored oldest first.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::polynomial::Polynomial;

/// Simulation stops once |x| exceeds this multiple of K.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub enum DelayMapError {
    NonPositiveCapacity(f64),
    NonFiniteRate(f64),
    HistoryLength { expected: usize, got: usize },
    NonFiniteState,
}

impl fmt::Display for DelayMapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelayMapError::NonPositiveCapacity(k) => {
                write!(f, "carrying capacity must be positive and finite, got {k}")
            }
            DelayMapError::NonFiniteRate(r) => write!(f, "rate must be finite, got {r}"),
            DelayMapError::HistoryLength { expected, got } => {
                write!(f, "history needs {expected} entries (tau + 1), got {got}")
            }
            DelayMapError::NonFiniteState => f.write_str("initial state is not finite"),
        }
    }
}

impl core::error::Error for DelayMapError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DelayParams {
    r: f64,
    capacity: f64,
    tau: usize,
}

impl DelayParams {
    pub fn new(r: f64, capacity: f64, tau: usize) -> Result<Self, DelayMapError> {
        if !r.is_finite() {
            return Err(DelayMapError::NonFiniteRate(r));
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(DelayMapError::NonPositiveCapacity(capacity));
        }
        Ok(DelayParams { r, capacity, tau })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Carrying capacity K.
    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Dimension of the state, τ + 1.
    pub fn dim(&self) -> usize {
        self.tau + 1
    }

    pub fn with_r(self, r: f64) -> Result<Self, DelayMapError> {
        DelayParams::new(r, self.capacity, self.tau)
    }
}

/// History window `(x[n-τ], …, x[n])`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    pub fn new(params: &DelayParams, history: Vec<f64>) -> Result<Self, DelayMapError> {
        if history.len() != params.dim() {
            return Err(DelayMapError::HistoryLength {
                expected: params.dim(),
                got: history.len(),
            });
        }
        Ok(StateVector(history))
    }

    /// Constant history, every entry `x0`.
    pub fn constant(params: &DelayParams, x0: f64) -> Self {
        StateVector(vec![x0; params.dim()])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn newest(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn oldest(&self) -> f64 {
        self.0[0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

/// New value of the recurrence from the oldest and newest history entries.
#[inline]
pub fn next_value(params: &DelayParams, oldest: f64, newest: f64) -> f64 {
    newest + params.r * newest * (1.0 - oldest / params.capacity)
}

/// Advances the history by one step.
pub fn step(params: &DelayParams, state: &StateVector) -> StateVector {
    let mut next = state.clone();
    step_in_place(params, &mut next);
    next
}

fn step_in_place(params: &DelayParams, state: &mut StateVector) {
    let x = next_value(params, state.oldest(), state.newest());
    let h = &mut state.0;
    h.rotate_left(1);
    let last = h.len() - 1;
    h[last] = x;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub step: i64,
    pub x: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub params: DelayParams,
    /// Initial history at steps −τ … 0, then one sample per step.
    pub samples: Vec<Sample>,
    /// Step at which the run was cut short by the divergence guard.
    pub diverged_at: Option<i64>,
}

impl Trajectory {
    pub fn values(&self) -> impl DoubleEndedIterator<Item = f64> + ExactSizeIterator + '_ {
        self.samples.iter().map(|s| s.x)
    }

    pub fn is_complete(&self) -> bool {
        self.diverged_at.is_none()
    }
}

/// Iterates the map `n_steps` times from `init`.
pub fn simulate(
    params: &DelayParams,
    init: &StateVector,
    n_steps: usize,
) -> Result<Trajectory, DelayMapError> {
    if init.len() != params.dim() {
        return Err(DelayMapError::HistoryLength {
            expected: params.dim(),
            got: init.len(),
        });
    }
    if !init.is_finite() {
        return Err(DelayMapError::NonFiniteState);
    }
    let tau = params.tau as i64;
    let mut samples = Vec::with_capacity(params.dim() + n_steps);
    samples.extend(init.as_slice().iter().enumerate().map(|(i, &x)| Sample {
        step: i as i64 - tau,
        x,
    }));

    let limit = DIVERGENCE_FACTOR * params.capacity;
    let mut state = init.clone();
    let mut diverged_at = None;
    for n in 1..=n_steps as i64 {
        step_in_place(params, &mut state);
        let x = state.newest();
        samples.push(Sample { step: n, x });
        if !x.is_finite() || x.abs() > limit {
            diverged_at = Some(n);
            break;
        }
    }
    Ok(Trajectory {
        params: *params,
        samples,
        diverged_at,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPoint {
    /// All zeros.
    Trivial,
    /// All K.
    NonTrivial,
}

impl FixedPoint {
    pub fn as_str(self) -> &'static str {
        match self {
            FixedPoint::Trivial => "trivial",
            FixedPoint::NonTrivial => "nontrivial",
        }
    }

    pub fn level(self, params: &DelayParams) -> f64 {
        match self {
            FixedPoint::Trivial => 0.0,
            FixedPoint::NonTrivial => params.capacity,
        }
    }
}

pub fn fixed_points(params: &DelayParams) -> (StateVector, StateVector) {
    (
        StateVector::constant(params, 0.0),
        StateVector::constant(params, params.capacity),
    )
}

pub fn fixed_point(params: &DelayParams, point: FixedPoint) -> StateVector {
    StateVector::constant(params, point.level(params))
}

/// Square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl JacobianMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Jacobian of `step` at a fixed point: a shift block on the superdiagonal
/// and one non-trivial last row.
pub fn jacobian(params: &DelayParams, point: FixedPoint) -> JacobianMatrix {
    let n = params.dim();
    let c = point.level(params);
    let mut entries = vec![0.0; n * n];
    for i in 0..n - 1 {
        entries[i * n + i + 1] = 1.0;
    }
    let last = (n - 1) * n;
    let r = params.r;
    let k = params.capacity;
    entries[last] += -r * c / k;
    entries[last + n - 1] += 1.0 + r * (1.0 - c / k);
    JacobianMatrix { dim: n, entries }
}

/// det(λI − J) at a fixed point, in closed form.
///
/// Trivial point: `λ^τ (λ − (1 + r))`. Non-trivial point: `λ^{τ+1} − λ^τ + r`.
pub fn char_poly(params: &DelayParams, point: FixedPoint) -> Polynomial {
    let n = params.dim();
    let r = params.r;
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    match point {
        FixedPoint::Trivial => coeffs[1] = -(1.0 + r),
        FixedPoint::NonTrivial => {
            coeffs[1] -= 1.0;
            coeffs[n] += r;
        }
    }
    Polynomial::new(coeffs).expect("finite coefficients")
}

/// Open interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpenInterval {
    pub lo: f64,
    pub hi: f64,
}

impl OpenInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Range of r for which the trivial fixed point is stable.
///
/// J(X₁) is upper triangular, so its eigenvalues are its diagonal. Each
/// diagonal entry is affine in r; the range is where all of them lie in
/// (−1, 1).
pub fn trivial_stability_range(tau: usize) -> OpenInterval {
    let at = |r: f64| {
        let p = DelayParams::new(r, 1.0, tau).expect("valid");
        jacobian(&p, FixedPoint::Trivial)
    };
    let (j0, j1) = (at(0.0), at(1.0));
    let mut range = OpenInterval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    for i in 0..j0.dim() {
        let intercept = j0.get(i, i);
        let slope = j1.get(i, i) - intercept;
        if slope == 0.0 {
            if intercept.abs() >= 1.0 {
                return OpenInterval { lo: 0.0, hi: 0.0 };
            }
            continue;
        }
        let a = (-1.0 - intercept) / slope;
        let b = (1.0 - intercept) / slope;
        range.lo = range.lo.max(a.min(b));
        range.hi = range.hi.min(a.max(b));
    }
    range
}
