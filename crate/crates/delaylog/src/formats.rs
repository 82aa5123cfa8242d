//! On-disk formats: trajectory CSV, boundary JSON/CSV, and the JSON views
//! of verdicts and Jury conditions.

use std::io::{Read, Write};

use delay_logistic_core::delay_map::Sample;
use delay_logistic_core::{
    BoundaryPoint, BoundaryTable, ConditionResult, StabilityVerdict, Trajectory, Witness,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Decimal rendering with at least 17 significant digits; parses back to
/// the same `f64`.
pub fn full_precision(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let mut decimals = (16 - exp).max(0) as usize;
    loop {
        let s = format!("{x:.decimals$}");
        if s.parse::<f64>() == Ok(x) || decimals > 400 {
            return s;
        }
        decimals += 1;
    }
}

/// `step,x` with one row per sample.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "x"])?;
    for s in &traj.samples {
        w.write_record([s.step.to_string(), full_precision(s.x)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct CsvSample {
    step: i64,
    x: f64,
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Vec<Sample>, CliError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["step", "x"] {
        return Err(CliError::Usage(format!(
            "expected header `step,x`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize::<CsvSample>()
        .map(|rec| {
            let rec = rec?;
            Ok(Sample {
                step: rec.step,
                x: rec.x,
            })
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct TrajectoryJson {
    pub r: f64,
    #[serde(rename = "K")]
    pub capacity: f64,
    pub tau: usize,
    pub samples: Vec<SampleJson>,
    pub diverged_at: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SampleJson {
    pub step: i64,
    pub x: f64,
}

impl From<&Trajectory> for TrajectoryJson {
    fn from(t: &Trajectory) -> Self {
        TrajectoryJson {
            r: t.params.r(),
            capacity: t.params.capacity(),
            tau: t.params.tau(),
            samples: t
                .samples
                .iter()
                .map(|s| SampleJson {
                    step: s.step,
                    x: s.x,
                })
                .collect(),
            diverged_at: t.diverged_at,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoundaryRow {
    pub tau: usize,
    pub r_critical: f64,
    pub bracket_width: f64,
    pub method: String,
}

impl From<&BoundaryPoint> for BoundaryRow {
    fn from(p: &BoundaryPoint) -> Self {
        BoundaryRow {
            tau: p.tau,
            r_critical: p.r_critical,
            bracket_width: p.bracket_width,
            method: p.method.as_str().to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundaryJson {
    pub points: Vec<BoundaryRow>,
    pub monotone_decreasing: bool,
}

impl From<&BoundaryTable> for BoundaryJson {
    fn from(t: &BoundaryTable) -> Self {
        BoundaryJson {
            points: t.points.iter().map(BoundaryRow::from).collect(),
            monotone_decreasing: t.monotone_decreasing,
        }
    }
}

pub fn write_boundary_csv<W: Write>(table: &BoundaryTable, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["tau", "r_critical", "bracket_width", "method"])?;
    for p in &table.points {
        w.write_record([
            p.tau.to_string(),
            full_precision(p.r_critical),
            full_precision(p.bracket_width),
            p.method.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    None,
    Condition { index: usize },
    Modulus { value: f64 },
    Degenerate,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct VerdictJson {
    pub status: &'static str,
    pub method: &'static str,
    pub witness: WitnessJson,
}

impl From<&StabilityVerdict> for VerdictJson {
    fn from(v: &StabilityVerdict) -> Self {
        VerdictJson {
            status: v.status.as_str(),
            method: v.method.as_str(),
            witness: match v.witness {
                Witness::None => WitnessJson::None,
                Witness::Condition(index) => WitnessJson::Condition { index },
                Witness::Modulus(value) => WitnessJson::Modulus { value },
                Witness::Degenerate => WitnessJson::Degenerate,
            },
        }
    }
}

#[derive(Debug, Serialize, PartialEq)]
pub struct ConditionJson {
    pub index: usize,
    pub description: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub margin: f64,
}

impl From<&ConditionResult> for ConditionJson {
    fn from(c: &ConditionResult) -> Self {
        ConditionJson {
            index: c.index,
            description: c.description.clone(),
            lhs: c.lhs,
            rhs: c.rhs,
            satisfied: c.satisfied,
            margin: c.margin,
        }
    }
}
