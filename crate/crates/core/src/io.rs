//! On-disk formats: sample files, ground-truth sidecars and verification
//! reports. All are JSON with an explicit metric header, so the signal speed
//! travels with the data. Floats are written in shortest round-trip form.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::boost::AffineLorentzMap;
use crate::error::{Error, Result};
use crate::fit::{FieldLine, FitConfig, FitReport, SampleSet};
use crate::minkowski::{Event, Metric};

pub const SAMPLE_FORMAT: &str = "alexandrov-samples/1";
pub const REPORT_FORMAT: &str = "alexandrov-report/1";
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricHeader {
    pub n: usize,
    pub c: f64,
}

impl MetricHeader {
    pub fn to_metric(self) -> Result<Metric> {
        Metric::new(self.n, self.c)
    }
}

impl From<Metric> for MetricHeader {
    fn from(m: Metric) -> Self {
        Self { n: m.dim(), c: m.c() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Markers {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub collinear: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parallel: Vec<[usize; 4]>,
    /// Pairs null in the domain, recorded by the generator.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub null_pairs: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_line: Option<FieldLine>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleFile {
    pub format: String,
    pub metric: MetricHeader,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub pairs: Vec<SamplePair>,
    #[serde(default)]
    pub markers: Markers,
}

impl SampleFile {
    pub fn from_sample_set(
        s: &SampleSet,
        kind: Option<String>,
        seed: Option<u64>,
        null_pairs: Vec<[usize; 2]>,
    ) -> Self {
        let pairs =
            s.pairs().iter().map(|(x, y)| SamplePair { x: x.as_slice().to_vec(), y: y.as_slice().to_vec() }).collect();
        SampleFile {
            format: SAMPLE_FORMAT.to_string(),
            metric: (*s.metric()).into(),
            kind,
            seed,
            pairs,
            markers: Markers {
                collinear: s.collinear().to_vec(),
                parallel: s.parallel().to_vec(),
                null_pairs,
                field_line: s.field_line().cloned(),
            },
        }
    }

    /// Validates dimensions and marker indices.
    pub fn to_sample_set(&self) -> Result<SampleSet> {
        if self.format != SAMPLE_FORMAT {
            return Err(Error::Input(format!("unknown sample format {:?}", self.format)));
        }
        let metric = self.metric.to_metric()?;
        let pairs = self
            .pairs
            .iter()
            .map(|p| Ok((Event::from_slice(&p.x)?, Event::from_slice(&p.y)?)))
            .collect::<Result<Vec<_>>>()?;
        let n = pairs.len();
        if let Some(bad) = self.markers.null_pairs.iter().flatten().find(|&&i| i >= n) {
            return Err(Error::Input(format!("null-pair index {bad} out of range")));
        }
        let mut set = SampleSet::new(metric, pairs)?
            .with_collinear(self.markers.collinear.clone())?
            .with_parallel(self.markers.parallel.clone())?;
        if let Some(line) = &self.markers.field_line {
            set = set.with_field_line(line.clone())?;
        }
        Ok(set)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("sample file serializes");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))
    }
}

/// Generator parameters and the map that produced a sample file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthFile {
    pub kind: String,
    pub seed: u64,
    pub metric: MetricHeader,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<f64>,
    /// Ground-truth affine Lorentz map, when the kind has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<AffineLorentzMap>,
}

impl TruthFile {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("truth file serializes");
        text.push('\n');
        text
    }
}

/// `samples.json` → `samples.json.truth.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".truth.json");
    PathBuf::from(name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub path: String,
    pub metric: MetricHeader,
    pub samples: usize,
    pub kind: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReportFile {
    pub format: String,
    pub tool: String,
    pub input: InputEcho,
    pub config: FitConfig,
    pub violations: usize,
    pub verdict: String,
    pub report: FitReport,
}

impl FitReportFile {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))
    }
}
