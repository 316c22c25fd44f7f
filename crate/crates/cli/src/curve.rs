//! Bound curves against concentration for a list of number precisions,
//! including the infinite-precision limit.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use phasebound_core::{lambda0_asymptotic, least_upper_bound_at_xi, KernelError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::format::{csv_writer, float, opt_float};

/// A number precision, or the limit `dk -> infinity` at fixed `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DkEntry {
    Finite(usize),
    Infinite,
}

impl FromStr for DkEntry {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(DkEntry::Infinite);
        }
        s.parse().map(DkEntry::Finite).map_err(|_| {
            CliError::Input(format!(
                "bad dk entry {s:?}: expected an integer >= 0 or \"inf\""
            ))
        })
    }
}

impl fmt::Display for DkEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DkEntry::Finite(k) => write!(f, "{k}"),
            DkEntry::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for DkEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DkEntry::Finite(k) => s.serialize_u64(*k as u64),
            DkEntry::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for DkEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(k) if k >= 0 => Ok(DkEntry::Finite(k as usize)),
            Raw::Int(k) => Err(serde::de::Error::custom(format!("negative dk {k}"))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum XAxis {
    #[default]
    Xi,
    Dalpha,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRequest {
    pub dk: Vec<DkEntry>,
    pub xi_start: f64,
    pub xi_stop: f64,
    pub xi_step: f64,
    pub format: OutputFormat,
    pub x_axis: XAxis,
}

impl Default for CurveRequest {
    fn default() -> Self {
        Self {
            dk: vec![
                DkEntry::Finite(0),
                DkEntry::Finite(1),
                DkEntry::Finite(2),
                DkEntry::Finite(3),
                DkEntry::Infinite,
            ],
            xi_start: 0.0,
            xi_stop: 4.0,
            xi_step: 0.05,
            format: OutputFormat::Csv,
            x_axis: XAxis::Xi,
        }
    }
}

impl CurveRequest {
    pub fn validate(&self) -> Result<(), CliError> {
        let finite = [self.xi_start, self.xi_stop, self.xi_step]
            .iter()
            .all(|x| x.is_finite());
        if !finite || self.xi_start < 0.0 || self.xi_start >= self.xi_stop {
            return Err(CliError::Domain(format!(
                "xi grid needs 0 <= start < stop, got start {} stop {}",
                self.xi_start, self.xi_stop
            )));
        }
        if self.xi_step.is_nan() || self.xi_step <= 0.0 {
            return Err(CliError::Domain(format!(
                "xi step must be positive, got {}",
                self.xi_step
            )));
        }
        if self.dk.is_empty() {
            return Err(CliError::Input("dk list is empty".into()));
        }
        Ok(())
    }

    /// `start + i * step` up to and including `stop` (with a small tolerance
    /// so that `stop` itself survives rounding).
    pub fn xi_grid(&self) -> Vec<f64> {
        let count = ((self.xi_stop - self.xi_start) / self.xi_step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| self.xi_start + i as f64 * self.xi_step)
            .collect()
    }

    /// Sorted, deduplicated precisions; the limit comes last.
    pub fn dk_sorted(&self) -> Vec<DkEntry> {
        let mut dk = self.dk.clone();
        dk.sort();
        dk.dedup();
        dk
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// The implied phase precision exceeds a full turn; no bound computed.
    #[serde(rename = "dalpha_exceeds_2pi")]
    DalphaExceeds2pi,
}

impl RowStatus {
    fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::DalphaExceeds2pi => "dalpha_exceeds_2pi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub xi: f64,
    pub dk: DkEntry,
    pub dalpha: Option<f64>,
    pub lambda0: Option<f64>,
    pub cauchy_bound: Option<f64>,
    /// Only for the limit rows: change between the last two Nystrom resolutions.
    pub error_estimate: Option<f64>,
    pub status: RowStatus,
}

fn compute_row(xi: f64, dk: DkEntry) -> Result<CurveRow, CliError> {
    let cauchy = Some(xi.min(1.0));
    match dk {
        DkEntry::Infinite => {
            let limit = lambda0_asymptotic(xi)?;
            Ok(CurveRow {
                xi,
                dk,
                dalpha: None,
                lambda0: Some(limit.value),
                cauchy_bound: cauchy,
                error_estimate: Some(limit.error_estimate),
                status: RowStatus::Ok,
            })
        }
        DkEntry::Finite(k) => match least_upper_bound_at_xi(xi, k) {
            Ok(bound) => Ok(CurveRow {
                xi,
                dk,
                dalpha: Some(std::f64::consts::TAU * xi / (k + 1) as f64),
                lambda0: Some(bound.lambda0),
                cauchy_bound: cauchy,
                error_estimate: None,
                status: RowStatus::Ok,
            }),
            Err(KernelError::ConcentrationTooLarge { .. }) => Ok(CurveRow {
                xi,
                dk,
                dalpha: None,
                lambda0: None,
                cauchy_bound: None,
                error_estimate: None,
                status: RowStatus::DalphaExceeds2pi,
            }),
            Err(e) => Err(e.into()),
        },
    }
}

/// All rows in `(dk, xi)` order. Points are computed in parallel and
/// collected in order, so the result does not depend on scheduling.
pub fn compute_curve(request: &CurveRequest) -> Result<Vec<CurveRow>, CliError> {
    request.validate()?;
    let grid = request.xi_grid();
    let points: Vec<(DkEntry, f64)> = request
        .dk_sorted()
        .into_iter()
        .flat_map(|dk| grid.iter().map(move |&xi| (dk, xi)))
        .collect();
    points
        .par_iter()
        .map(|&(dk, xi)| compute_row(xi, dk))
        .collect()
}

pub const CSV_HEADER: [&str; 7] = [
    "xi",
    "dk",
    "dalpha",
    "lambda0",
    "cauchy_bound",
    "error_estimate",
    "status",
];
pub const CSV_HEADER_DALPHA: [&str; 7] = [
    "dalpha",
    "dk",
    "xi",
    "lambda0",
    "cauchy_bound",
    "error_estimate",
    "status",
];

pub fn write_csv<W: Write>(rows: &[CurveRow], x_axis: XAxis, sink: W) -> Result<(), CliError> {
    let mut w = csv_writer(sink);
    match x_axis {
        XAxis::Xi => w.write_record(CSV_HEADER)?,
        XAxis::Dalpha => w.write_record(CSV_HEADER_DALPHA)?,
    }
    for r in rows {
        let (first, third) = match x_axis {
            XAxis::Xi => (float(r.xi), opt_float(r.dalpha)),
            XAxis::Dalpha => (opt_float(r.dalpha), float(r.xi)),
        };
        w.write_record([
            first,
            r.dk.to_string(),
            third,
            opt_float(r.lambda0),
            opt_float(r.cauchy_bound),
            opt_float(r.error_estimate),
            r.status.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CurveDocument<'a> {
    x_axis: XAxis,
    rows: &'a [CurveRow],
}

pub fn write_json<W: Write>(rows: &[CurveRow], x_axis: XAxis, mut sink: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut sink, &CurveDocument { x_axis, rows })?;
    sink.write_all(b"\n")?;
    sink.flush()?;
    Ok(())
}

/// Gnuplot script drawing every curve from the CSV at `csv_path`.
pub fn gnuplot_script(csv_path: &str, request: &CurveRequest) -> String {
    let (x_col, label) = match request.x_axis {
        XAxis::Xi => (1, "xi = dalpha (dk+1) / 2pi"),
        XAxis::Dalpha => (1, "dalpha [rad]"),
    };
    let keys: Vec<String> = request.dk_sorted().iter().map(|d| d.to_string()).collect();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set xlabel '{label}'\n"));
    s.push_str("set ylabel 'lambda_0'\n");
    s.push_str("set yrange [0:1.05]\n");
    s.push_str("set key bottom right\n");
    s.push_str(&format!(
        "plot for [k in \"{}\"] '{}' using (strcol(2) eq k ? ${} : 1/0):4 with lines title 'dk='.k",
        keys.join(" "),
        csv_path.replace('\'', "''"),
        x_col
    ));
    if request.x_axis == XAxis::Xi {
        s.push_str(", (x < 1 ? x : 1) with lines dashtype 2 title 'min(1, xi)'");
    }
    s.push('\n');
    s
}
