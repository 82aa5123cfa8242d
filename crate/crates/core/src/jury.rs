//! Jury stability table and conditions.
//!
//! Rows are stored in descending-power order. Each reduced row is obtained
//! from the previous one by the 2×2 determinant
//!
//! ```text
//! next[k] = row[m] * row[k + 1] - row[m - 1 - k] * row[0],   k = 0 .. m-1
//! ```
//!
//! where `m` is the last index of `row`. This cancels the leading term, so a
//! reduced row is the reversal (up to sign) of the classical Schur–Cohn
//! reduction; the per-row condition is therefore `|last| > |first|`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::polynomial::{Polynomial, PolynomialError};

/// Strict inequalities closer than this to equality (relative to the size of
/// the compared quantities) are reported as marginal.
pub const CONDITION_TOLERANCE: f64 = 1e-12;
/// A reduced row whose last entry is at most this fraction of its largest
/// entry is treated as singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;
/// Rows whose largest entry leaves `[1/ROW_SCALE_LIMIT, ROW_SCALE_LIMIT]` cannot
/// be reduced further without the products under- or overflowing.
pub const ROW_SCALE_LIMIT: f64 = 1e150;
/// Spectral radius within this of 1 is marginal for the root oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Allowed discrepancy when checking the sparse-row recurrences.
pub const INDUCTION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum JuryError {
    /// Degree below 2; the closed-form low-degree conditions apply instead.
    TableNotApplicable {
        degree: usize,
    },
    NonPositiveLeading,
    /// A reduced row that still needs reducing has a vanishing last entry.
    SingularTable {
        row: usize,
    },
    /// Row entries too small or too large to reduce in double precision.
    ScaleOutOfRange {
        row: usize,
    },
    InvalidDelay {
        tau: usize,
    },
    Polynomial(PolynomialError),
}

impl fmt::Display for JuryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JuryError::TableNotApplicable { degree } => {
                write!(f, "table not applicable to degree {degree}")
            }
            JuryError::NonPositiveLeading => {
                f.write_str("leading coefficient must be positive (normalize first)")
            }
            JuryError::SingularTable { row } => write!(f, "singular table at row {}", row + 1),
            JuryError::ScaleOutOfRange { row } => {
                write!(f, "table row {} out of floating-point range", row + 1)
            }
            JuryError::InvalidDelay { tau } => {
                write!(f, "induction check needs tau >= 2, got {tau}")
            }
            JuryError::Polynomial(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for JuryError {}

impl From<PolynomialError> for JuryError {
    fn from(e: PolynomialError) -> Self {
        JuryError::Polynomial(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JuryTable {
    /// `rows[0]` is the input polynomial; each following row is one shorter.
    pub rows: Vec<Vec<f64>>,
}

impl JuryTable {
    /// Builds the table down to the three-entry row.
    pub fn build(p: &Polynomial) -> Result<Self, JuryError> {
        if p.degree() < 2 {
            return Err(JuryError::TableNotApplicable { degree: p.degree() });
        }
        if p.leading() <= 0.0 {
            return Err(JuryError::NonPositiveLeading);
        }
        let mut rows = vec![p.coeffs().to_vec()];
        while rows.last().map_or(0, Vec::len) > 3 {
            let j = rows.len() - 1;
            let row = &rows[j];
            let scale = max_abs(row);
            if !(1.0 / ROW_SCALE_LIMIT..=ROW_SCALE_LIMIT).contains(&scale) && scale != 0.0 {
                return Err(JuryError::ScaleOutOfRange { row: j });
            }
            if j > 0 && (scale == 0.0 || row[row.len() - 1].abs() <= SINGULAR_TOLERANCE * scale) {
                return Err(JuryError::SingularTable { row: j });
            }
            let next = reduce_row(row);
            rows.push(next);
        }
        Ok(JuryTable { rows })
    }

    pub fn reduced_rows(&self) -> &[Vec<f64>] {
        &self.rows[1..]
    }
}

// Entries shrink doubly exponentially down the table, so singularity is
// judged relative to the row's own scale.
fn max_abs(row: &[f64]) -> f64 {
    row.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// One determinant reduction step.
pub fn reduce_row(row: &[f64]) -> Vec<f64> {
    let m = row.len() - 1;
    (0..m)
        .map(|k| row[m] * row[k + 1] - row[m - 1 - k] * row[0])
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionResult {
    /// 1-based, in the usual Jury numbering.
    pub index: usize,
    pub description: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// Signed distance from equality, divided by the magnitude of the compared
    /// quantities; positive when the inequality holds.
    pub margin: f64,
}

impl ConditionResult {
    fn new(index: usize, description: String, lhs: f64, rhs: f64, margin: f64) -> Self {
        ConditionResult {
            index,
            description,
            lhs,
            rhs,
            satisfied: margin > CONDITION_TOLERANCE,
            margin,
        }
    }

    pub fn is_marginal(&self) -> bool {
        self.margin.abs() <= CONDITION_TOLERANCE
    }

    pub fn is_violated(&self) -> bool {
        self.margin < -CONDITION_TOLERANCE
    }
}

/// Evaluates every Jury condition of a polynomial with positive leading
/// coefficient: `degree + 1` results for degree >= 2, two for degree 1.
pub fn jury_conditions(p: &Polynomial) -> Result<Vec<ConditionResult>, JuryError> {
    if p.leading() <= 0.0 {
        return Err(JuryError::NonPositiveLeading);
    }
    let m = p.degree();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(m + 1);

    // Σ|a_i| bounds |P(±1)|.
    let eval_scale = p.coeffs().iter().map(|c| c.abs()).sum::<f64>();
    let at_one = p.eval_real(1.0);
    out.push(ConditionResult::new(
        1,
        "P(1) > 0".into(),
        at_one,
        0.0,
        at_one / eval_scale,
    ));
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let at_minus_one = sign * p.eval_real(-1.0);
    out.push(ConditionResult::new(
        2,
        format!("(-1)^{m} P(-1) > 0"),
        at_minus_one,
        0.0,
        at_minus_one / eval_scale,
    ));
    if m == 1 {
        return Ok(out);
    }

    let c = p.coeffs();
    let constant = c[m].abs();
    out.push(ConditionResult::new(
        3,
        format!("|a_{m}| < a_0"),
        constant,
        c[0],
        relative_gap(c[0], constant),
    ));

    let table = JuryTable::build(p)?;
    for (j, row) in table.reduced_rows().iter().enumerate() {
        let last = row[row.len() - 1].abs();
        let first = row[0].abs();
        out.push(ConditionResult::new(
            j + 4,
            format!("|row{} last| > |row{} first|", j + 2, j + 2),
            last,
            first,
            relative_gap(last, first),
        ));
    }
    Ok(out)
}

/// `(big - small) / max(|big|, |small|)`, zero when both vanish.
fn relative_gap(big: f64, small: f64) -> f64 {
    let scale = big.abs().max(small.abs());
    if scale == 0.0 {
        0.0
    } else {
        (big - small) / scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityStatus {
    Stable,
    Unstable,
    Marginal,
}

impl StabilityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityStatus::Stable => "stable",
            StabilityStatus::Unstable => "unstable",
            StabilityStatus::Marginal => "marginal",
        }
    }
}

impl fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which test produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Jury,
    Oracle,
    /// Closed-form derivative of a one-dimensional map.
    Derivative,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Jury => "jury",
            Method::Oracle => "oracle",
            Method::Derivative => "derivative",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Witness {
    None,
    /// First condition that failed (or sat at equality), 1-based.
    Condition(usize),
    /// Largest root modulus, or derivative magnitude for 1-D maps.
    Modulus(f64),
    /// Zero leading coefficient.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub witness: Witness,
    pub method: Method,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        self.status == StabilityStatus::Stable
    }

    /// Classifies a modulus (largest root, or |f'(x*)|) against the unit circle.
    pub fn from_modulus(modulus: f64, tolerance: f64, method: Method) -> Self {
        let status = if modulus < 1.0 - tolerance {
            StabilityStatus::Stable
        } else if modulus > 1.0 + tolerance {
            StabilityStatus::Unstable
        } else {
            StabilityStatus::Marginal
        };
        StabilityVerdict {
            status,
            witness: Witness::Modulus(modulus),
            method,
        }
    }
}

/// Verdict from the spectral-radius oracle alone.
pub fn oracle_verdict(p: &Polynomial) -> Result<StabilityVerdict, PolynomialError> {
    if p.leading() == 0.0 {
        return Ok(degenerate(Method::Oracle));
    }
    if p.degree() == 0 {
        return Ok(StabilityVerdict {
            status: StabilityStatus::Stable,
            witness: Witness::Modulus(0.0),
            method: Method::Oracle,
        });
    }
    let rho = p.spectral_radius()?;
    Ok(StabilityVerdict::from_modulus(
        rho,
        ORACLE_TOLERANCE,
        Method::Oracle,
    ))
}

fn degenerate(method: Method) -> StabilityVerdict {
    StabilityVerdict {
        status: StabilityStatus::Marginal,
        witness: Witness::Degenerate,
        method,
    }
}

/// Stable iff every Jury condition holds strictly; unstable if one is
/// violated and none sits at equality. An equality leaves the table unable to
/// tell a root on the circle from one outside it, so the root oracle decides;
/// when it confirms a marginal root the equality condition is the witness.
/// A singular table also falls back to the oracle.
pub fn jury_verdict(p: &Polynomial) -> StabilityVerdict {
    let p = match p.normalize_leading() {
        Ok(p) => p,
        Err(_) => return degenerate(Method::Jury),
    };
    let oracle = |p: &Polynomial| {
        oracle_verdict(p).unwrap_or(StabilityVerdict {
            status: StabilityStatus::Marginal,
            witness: Witness::None,
            method: Method::Oracle,
        })
    };
    let conditions = match jury_conditions(&p) {
        Ok(c) => c,
        Err(_) => return oracle(&p),
    };
    if let Some(c) = conditions.iter().find(|c| c.is_marginal()) {
        let v = oracle(&p);
        return if v.status == StabilityStatus::Marginal {
            StabilityVerdict {
                status: StabilityStatus::Marginal,
                witness: Witness::Condition(c.index),
                method: Method::Jury,
            }
        } else {
            v
        };
    }
    match conditions.iter().find(|c| c.is_violated()) {
        None => StabilityVerdict {
            status: StabilityStatus::Stable,
            witness: Witness::None,
            method: Method::Jury,
        },
        Some(c) => StabilityVerdict {
            status: StabilityStatus::Unstable,
            witness: Witness::Condition(c.index),
            method: Method::Jury,
        },
    }
}

/// Outcome of checking the sparse reduced-row structure of the table for
/// `λ^{τ+1} − λ^τ + r`.
#[derive(Clone, Debug, PartialEq)]
pub struct InductionReport {
    pub tau: usize,
    pub r: f64,
    /// Number of reduced rows inspected.
    pub rows_checked: usize,
    /// Every reduced row is zero outside positions 0, m-1 and m.
    pub sparse_pattern_holds: bool,
    /// The three closed-form recurrences hold between consecutive reduced rows.
    pub recurrences_hold: bool,
    pub max_discrepancy: f64,
    /// Whether the input row itself has the (0, m-1, m) pattern. It does not:
    /// its middle entry sits at position 1, so the pattern starts one row later.
    pub input_row_sparse: bool,
}

/// Builds the Jury table of `λ^{τ+1} − λ^τ + r` and checks that every
/// reduced row keeps three non-zero entries at positions 0, m−1, m, related
/// to the previous row by
///
/// ```text
/// first' = -mid * first
/// mid'   = last * mid
/// last'  = last^2 - first^2
/// ```
pub fn verify_sparse_induction(tau: usize, r: f64) -> Result<InductionReport, JuryError> {
    if tau < 2 {
        return Err(JuryError::InvalidDelay { tau });
    }
    let mut coeffs = vec![0.0; tau + 2];
    coeffs[0] = 1.0;
    coeffs[1] = -1.0;
    coeffs[tau + 1] = r;
    let p = Polynomial::new(coeffs)?;

    let mut report = InductionReport {
        tau,
        r,
        rows_checked: 0,
        sparse_pattern_holds: true,
        recurrences_hold: true,
        max_discrepancy: 0.0,
        input_row_sparse: is_sparse(p.coeffs()),
    };

    let table = match JuryTable::build(&p) {
        Ok(t) => t,
        Err(JuryError::SingularTable { .. } | JuryError::ScaleOutOfRange { .. }) => {
            report.sparse_pattern_holds = false;
            report.recurrences_hold = false;
            report.max_discrepancy = f64::INFINITY;
            return Ok(report);
        }
        Err(e) => return Err(e),
    };

    let reduced = table.reduced_rows();
    report.rows_checked = reduced.len();
    report.sparse_pattern_holds = reduced.iter().all(|row| is_sparse(row));

    for pair in reduced.windows(2) {
        let (row, next) = (&pair[0], &pair[1]);
        let m = row.len() - 1;
        let (first, mid, last) = (row[0], row[m - 1], row[m]);
        let n = next.len() - 1;
        let expected = [
            (next[0], -mid * first),
            (next[n - 1], last * mid),
            (next[n], last * last - first * first),
        ];
        for (got, want) in expected {
            let d = (got - want).abs();
            report.max_discrepancy = report.max_discrepancy.max(d);
        }
    }
    report.recurrences_hold = report.max_discrepancy <= INDUCTION_TOLERANCE;
    Ok(report)
}

fn is_sparse(row: &[f64]) -> bool {
    let m = row.len() - 1;
    row.iter()
        .enumerate()
        .all(|(k, &v)| k == 0 || k + 1 >= m || v == 0.0)
}
