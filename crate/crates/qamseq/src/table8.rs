//! The r = 4 simulation table (f = x⁴ + x + 1): pinned values and the configurations
//! that reproduce them.

use serde::{Deserialize, Serialize};

use crate::analysis::{analyze, round2, CorrelationReport, SweepMode};
use crate::error::{Error, Result};
use crate::families::{
    build_cq, build_ip8, build_iq16, build_p2m, build_sq, CqOptions, FamilyInstance, GroundCoset,
    PartitionOrder, SqOptions,
};
use crate::galois::GaloisRing;

pub const TABLE8_R: u32 = 4;
pub const TABLE8_F: u32 = 0x13;
pub const DEFAULT_TOLERANCE: f64 = 0.01;

/// One reference row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expected {
    pub family: &'static str,
    pub constellation: &'static str,
    pub period: usize,
    pub family_size: usize,
    pub data_rate: u32,
    pub theta_max: f64,
    pub theta_norm_over_sqrt_n: f64,
    pub dmin2: i64,
    pub dmin2_norm_over_n: f64,
}

pub const EXPECTED: [Expected; 5] = [
    Expected {
        family: "IQ16",
        constellation: "16-QAM",
        period: 30,
        family_size: 8,
        data_rate: 3,
        theta_max: 100.0,
        theta_norm_over_sqrt_n: 1.82,
        dmin2: 600,
        dmin2_norm_over_n: 2.0,
    },
    Expected {
        family: "SQ16",
        constellation: "16-QAM",
        period: 15,
        family_size: 8,
        data_rate: 3,
        theta_max: 82.38,
        theta_norm_over_sqrt_n: 2.04,
        dmin2: 120,
        dmin2_norm_over_n: 0.75,
    },
    Expected {
        family: "IP8",
        constellation: "8-ary Q-PAM",
        period: 30,
        family_size: 8,
        data_rate: 3,
        theta_max: 72.11,
        theta_norm_over_sqrt_n: 1.31,
        dmin2: 600,
        dmin2_norm_over_n: 2.0,
    },
    Expected {
        family: "P8",
        constellation: "8-ary Q-PAM",
        period: 15,
        family_size: 8,
        data_rate: 3,
        theta_max: 66.48,
        theta_norm_over_sqrt_n: 1.81,
        dmin2: 120,
        dmin2_norm_over_n: 0.79,
    },
    Expected {
        family: "CQ16",
        constellation: "16-QAM",
        period: 15,
        family_size: 8,
        data_rate: 4,
        theta_max: 84.21,
        theta_norm_over_sqrt_n: 2.1,
        dmin2: 60,
        dmin2_norm_over_n: 0.34,
    },
];

pub fn expected(family: &str) -> Option<&'static Expected> {
    EXPECTED
        .iter()
        .find(|e| e.family.eq_ignore_ascii_case(family))
}

/// The family instance used for a table row.
///
/// CQ16 takes its coefficient pairs from the trace-interleaved Teichmüller order and SQ16
/// draws ground coefficients from the trace-1 coset; the other rows use the defaults.
pub fn build_row(ring: &GaloisRing, family: &str) -> Result<FamilyInstance> {
    match family.to_ascii_uppercase().as_str() {
        "IQ16" => build_iq16(ring),
        "SQ16" => build_sq(
            ring,
            2,
            &SqOptions {
                ground_coset: GroundCoset::TraceOne,
                shifts: None,
            },
        ),
        "IP8" => build_ip8(ring),
        "P8" => build_p2m(ring, 2),
        "CQ16" => build_cq(
            ring,
            2,
            &CqOptions {
                partition: PartitionOrder::TraceInterleaved,
                shifts: None,
            },
        ),
        other => Err(Error::InvalidParameter(format!(
            "no table row named {other}"
        ))),
    }
}

/// Table column selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    Period,
    FamilySize,
    DataRate,
    Theta,
    ThetaNorm,
    Dmin2,
    Dmin2Norm,
}

impl Column {
    pub const ALL: [Column; 7] = [
        Column::Period,
        Column::FamilySize,
        Column::DataRate,
        Column::Theta,
        Column::ThetaNorm,
        Column::Dmin2,
        Column::Dmin2Norm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Period => "period",
            Column::FamilySize => "size",
            Column::DataRate => "rate",
            Column::Theta => "theta",
            Column::ThetaNorm => "theta_norm",
            Column::Dmin2 => "dmin2",
            Column::Dmin2Norm => "dmin2_norm",
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Column::Theta | Column::ThetaNorm | Column::Dmin2Norm)
    }
}

impl std::str::FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .into_iter()
            .find(|c| c.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown column {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub column: Column,
    pub expected: f64,
    pub measured: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowOutcome {
    pub expected: Expected,
    pub report: CorrelationReport,
    pub cells: Vec<Cell>,
}

impl RowOutcome {
    pub fn ok(&self) -> bool {
        self.cells.iter().all(|c| c.ok)
    }

    /// Human-readable list of failing cells with the maximizing witnesses.
    pub fn diff(&self) -> Vec<String> {
        self.cells
            .iter()
            .filter(|c| !c.ok)
            .map(|c| {
                let w = match c.column {
                    Column::ThetaNorm => format!(" witness {:?}", self.report.theta_norm_witness),
                    Column::Theta => format!(" witness {:?}", self.report.theta_witness),
                    _ => String::new(),
                };
                format!(
                    "{} {}: expected {} measured {:.4}{}",
                    self.expected.family,
                    c.column.name(),
                    c.expected,
                    c.measured,
                    w
                )
            })
            .collect()
    }
}

fn compare(
    expected: &Expected,
    report: &CorrelationReport,
    tolerance: f64,
    columns: &[Column],
) -> Vec<Cell> {
    columns
        .iter()
        .map(|&column| {
            let (e, m) = match column {
                Column::Period => (expected.period as f64, report.period as f64),
                Column::FamilySize => (expected.family_size as f64, report.family_size as f64),
                Column::DataRate => (expected.data_rate as f64, report.data_rate as f64),
                Column::Theta => (expected.theta_max, report.theta_max),
                Column::ThetaNorm => (
                    expected.theta_norm_over_sqrt_n,
                    report.normalized_theta_over_sqrt_n,
                ),
                Column::Dmin2 => (expected.dmin2 as f64, report.dmin2 as f64),
                Column::Dmin2Norm => (expected.dmin2_norm_over_n, report.dmin2_norm_over_n),
            };
            let ok = if column.is_exact() {
                e == m
            } else {
                (e - m).abs() <= tolerance + 1e-9
            };
            Cell {
                column,
                expected: e,
                measured: m,
                ok,
            }
        })
        .collect()
}

/// Builds and analyzes the selected rows, all of them when `families` is empty.
pub fn run(families: &[String], columns: &[Column], tolerance: f64) -> Result<Vec<RowOutcome>> {
    let ring = GaloisRing::new(TABLE8_R, TABLE8_F)?;
    let columns: Vec<Column> = if columns.is_empty() {
        Column::ALL.to_vec()
    } else {
        columns.to_vec()
    };
    let rows: Vec<&Expected> = if families.is_empty() {
        EXPECTED.iter().collect()
    } else {
        families
            .iter()
            .map(|f| {
                expected(f)
                    .ok_or_else(|| Error::InvalidParameter(format!("no table row named {f}")))
            })
            .collect::<Result<_>>()?
    };
    rows.into_iter()
        .map(|e| {
            let fam = build_row(&ring, e.family)?;
            let report = analyze(&fam, SweepMode::Full)?;
            let cells = compare(e, &report, tolerance, &columns);
            Ok(RowOutcome {
                expected: *e,
                report,
                cells,
            })
        })
        .collect()
}

/// Fixed-width text rendering of measured rows.
pub fn render_table(rows: &[RowOutcome]) -> String {
    let mut out = format!(
        "{:<6} {:<12} {:>6} {:>5} {:>4} {:>8} {:>7} {:>6} {:>7}  {}\n",
        "Family", "Const", "Period", "Size", "Rate", "theta", "th/sqN", "d2", "d2/N", "status"
    );
    for row in rows {
        let r = &row.report;
        out.push_str(&format!(
            "{:<6} {:<12} {:>6} {:>5} {:>4} {:>8.2} {:>7.2} {:>6} {:>7.2}  {}\n",
            r.family,
            r.constellation,
            r.period,
            r.family_size,
            r.data_rate,
            round2(r.theta_max),
            round2(r.normalized_theta_over_sqrt_n),
            r.dmin2,
            round2(r.dmin2_norm_over_n),
            if row.ok() { "ok" } else { "MISMATCH" }
        ));
    }
    out
}
