//! JSON interchange formats.
//!
//! Function file: `{"w": [re, im], "k": int, "trunc": int, "coeffs": {"n": a_n}}`.
//! Weights file: `{"c0": x, "cn": {"n": x}}`.
//! Membership report: `{"phi", "bound", "margin", "member", "grid"}`.
//!
//! Keys are emitted in a fixed order and coefficient maps in ascending
//! numeric index order; floats use the shortest round-trip representation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::membership::GridReport;
use crate::operators::OracleCheck;
use crate::{Complex64, HullWeights, MembershipReport, Series};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub w: [f64; 2],
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
    #[serde(default)]
    pub coeffs: BTreeMap<u32, f64>,
}

impl FunctionFile {
    pub fn from_series(f: &Series) -> Self {
        Self {
            w: [f.w().re, f.w().im],
            k: f.k(),
            trunc: Some(f.trunc()),
            coeffs: f.coeffs().clone(),
        }
    }

    /// Validates through the series constructor under truncation cap `cap`.
    pub fn to_series(&self, cap: u32) -> Result<Series> {
        Series::with_trunc(
            Complex64::new(self.w[0], self.w[1]),
            self.k,
            self.trunc,
            self.coeffs.iter().map(|(&n, &a)| (n, a)),
            cap,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub c0: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cn: BTreeMap<u32, f64>,
}

impl WeightsFile {
    pub fn from_weights(ws: &HullWeights) -> Self {
        Self {
            c0: ws.c0(),
            cn: ws.cn().clone(),
        }
    }

    pub fn to_weights(&self, k: u32) -> Result<HullWeights> {
        HullWeights::new(self.c0, self.cn.clone(), k)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub samples: usize,
    pub failures: usize,
    pub errors: usize,
    pub worst_ratio: Option<f64>,
    pub worst_z: Option<[f64; 2]>,
}

impl GridSummary {
    pub fn from_report(g: &GridReport<f64>) -> Self {
        Self {
            samples: g.samples.len(),
            failures: g.failures,
            errors: g.errors,
            worst_ratio: g.worst.map(|s| s.ratio).filter(|r| r.is_finite()),
            worst_z: g.worst.map(|s| [s.z.re, s.z.im]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub phi: f64,
    pub bound: f64,
    pub margin: f64,
    pub member: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSummary>,
}

impl ReportFile {
    pub fn new(r: &MembershipReport, grid: Option<&GridReport<f64>>) -> Self {
        Self {
            phi: r.phi,
            bound: r.bound,
            margin: r.margin,
            member: r.member,
            grid: grid.map(GridSummary::from_report),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub op: String,
    pub factor: Option<String>,
    pub z: [f64; 2],
    pub oracle: [f64; 2],
    pub transform: [f64; 2],
    pub abs_diff: f64,
    pub tolerance: f64,
    pub agrees: bool,
    /// For H1 with the stated factor: predicted `derived - stated` value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_diff: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction_rel_error: Option<f64>,
}

impl OracleReport {
    pub fn new(op: &str, factor: Option<&str>, chk: &OracleCheck<f64>, tolerance: f64) -> Self {
        Self {
            op: op.to_string(),
            factor: factor.map(str::to_string),
            z: [chk.z.re, chk.z.im],
            oracle: [chk.oracle.re, chk.oracle.im],
            transform: [chk.transform.re, chk.transform.im],
            abs_diff: chk.abs_diff,
            tolerance,
            agrees: chk.agrees,
            predicted_diff: None,
            prediction_rel_error: None,
        }
    }
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
