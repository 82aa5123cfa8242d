//! Real-coefficient polynomials and a simultaneous-iteration root finder.
//!
//! Coefficients are stored in descending-power order: `coeffs[0]` multiplies
//! the highest power. The root finder (Aberth–Ehrlich) is deliberately kept
//! independent of the Jury machinery so it can serve as its oracle.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// Stop once every per-root correction is below this (scaled by `max(1, |z|)`).
pub const ROOT_TOLERANCE: f64 = 1e-12;
/// Iteration cap for the root finder.
pub const MAX_ROOT_ITERATIONS: usize = 1000;

// Irrational rotation of the initial guesses; breaks the symmetry of
// real-coefficient inputs.
const PHASE: f64 = 0.4;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn from_polar(modulus: f64, arg: f64) -> Self {
        Complex::new(modulus * libm::cos(arg), modulus * libm::sin(arg))
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(self, k: f64) -> Self {
        Complex::new(self.re * k, self.im * k)
    }
}

impl From<f64> for Complex {
    fn from(re: f64) -> Self {
        Complex::new(re, 0.0)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for Complex {
    type Output = Complex;
    // Smith's algorithm; avoids overflow in the denominator.
    fn div(self, o: Complex) -> Complex {
        if libm::fabs(o.re) >= libm::fabs(o.im) {
            let t = o.im / o.re;
            let d = o.re + o.im * t;
            Complex::new((self.re + self.im * t) / d, (self.im - self.re * t) / d)
        } else {
            let t = o.re / o.im;
            let d = o.re * t + o.im;
            Complex::new((self.re * t + self.im) / d, (self.im * t - self.re) / d)
        }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PolynomialError {
    Empty,
    NonFinite,
    /// Leading coefficient is zero.
    Degenerate,
    /// Root finding asked of a constant.
    ConstantPolynomial,
    NoConvergence {
        best: RootSet,
    },
}

impl fmt::Display for PolynomialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolynomialError::Empty => f.write_str("polynomial needs at least one coefficient"),
            PolynomialError::NonFinite => f.write_str("polynomial has a non-finite coefficient"),
            PolynomialError::Degenerate => {
                f.write_str("degenerate polynomial: leading coefficient is zero")
            }
            PolynomialError::ConstantPolynomial => f.write_str("constant polynomial has no roots"),
            PolynomialError::NoConvergence { best } => write!(
                f,
                "root finder did not converge after {} iterations (residual {:e})",
                best.iterations, best.residual
            ),
        }
    }
}

impl core::error::Error for PolynomialError {}

/// Polynomial with real coefficients in descending-power order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, PolynomialError> {
        if coeffs.is_empty() {
            return Err(PolynomialError::Empty);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolynomialError::NonFinite);
        }
        Ok(Polynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .fold(Complex::ZERO, |acc, &c| acc * z + Complex::from(c))
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Returns the polynomial with a positive leading coefficient, negating
    /// every coefficient if needed. The root set is unchanged.
    pub fn normalize_leading(&self) -> Result<Polynomial, PolynomialError> {
        let lead = self.leading();
        if lead == 0.0 {
            Err(PolynomialError::Degenerate)
        } else if lead > 0.0 {
            Ok(self.clone())
        } else {
            Ok(Polynomial {
                coeffs: self.coeffs.iter().map(|c| -c).collect(),
            })
        }
    }

    /// All complex roots, by Aberth–Ehrlich iteration.
    ///
    /// Exact trailing zero coefficients are deflated first and reported as
    /// exact zero roots.
    pub fn roots(&self) -> Result<RootSet, PolynomialError> {
        if self.leading() == 0.0 {
            return Err(PolynomialError::Degenerate);
        }
        if self.degree() == 0 {
            return Err(PolynomialError::ConstantPolynomial);
        }

        let zeros = self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count();
        let reduced = &self.coeffs[..self.coeffs.len() - zeros];
        let mut roots = vec![Complex::ZERO; zeros];
        let mut iterations = 0;

        if reduced.len() > 1 {
            let (found, iters, converged) = aberth(reduced);
            iterations = iters;
            roots.extend(found);
            if !converged {
                let residual = self.residual(&roots);
                return Err(PolynomialError::NoConvergence {
                    best: RootSet {
                        roots,
                        residual,
                        iterations,
                    },
                });
            }
        }

        let residual = self.residual(&roots);
        Ok(RootSet {
            roots,
            residual,
            iterations,
        })
    }

    /// Largest root modulus.
    pub fn spectral_radius(&self) -> Result<f64, PolynomialError> {
        Ok(self.roots()?.max_modulus())
    }

    fn residual(&self, roots: &[Complex]) -> f64 {
        roots
            .iter()
            .map(|&z| self.eval(z).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex>,
    /// max |P(root)| over the reported roots.
    pub residual: f64,
    pub iterations: usize,
}

impl RootSet {
    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.roots.iter().map(|z| z.norm()).collect()
    }
}

/// Runs Aberth–Ehrlich on `coeffs` (descending, non-zero leading and
/// trailing). Returns (roots, iterations, converged).
fn aberth(coeffs: &[f64]) -> (Vec<Complex>, usize, bool) {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let deriv: Vec<f64> = monic[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (n - i) as f64)
        .collect();

    let bound = 1.0
        + monic[1..]
            .iter()
            .map(|c| libm::fabs(*c))
            .fold(0.0, f64::max);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| Complex::from_polar(bound, 2.0 * PI * k as f64 / n as f64 + PHASE))
        .collect();

    let horner = |c: &[f64], x: Complex| {
        c.iter()
            .fold(Complex::ZERO, |acc, &a| acc * x + Complex::from(a))
    };

    for iter in 1..=MAX_ROOT_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let zi = z[i];
            let p = horner(&monic, zi);
            if p == Complex::ZERO {
                continue;
            }
            let dp = horner(&deriv, zi);
            let mut repulsion = Complex::ZERO;
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    repulsion = repulsion + Complex::ONE / (zi - zj);
                }
            }
            let denom = dp - p * repulsion;
            if denom == Complex::ZERO || !denom.is_finite() {
                continue;
            }
            let w = p / denom;
            if !w.is_finite() {
                continue;
            }
            z[i] = zi - w;
            max_step = max_step.max(w.norm() / zi.norm().max(1.0));
        }
        if max_step < ROOT_TOLERANCE {
            return (z, iter, true);
        }
    }
    (z, MAX_ROOT_ITERATIONS, false)
}
