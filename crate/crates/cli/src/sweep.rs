//! Grid sweep engine: expands one or two parameter axes, evaluates every
//! cell as an independent pure computation (in parallel), and assembles the
//! rows in row-major grid order regardless of scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use st_klein_core::kinematics::{incident_from_energy, Region, StepProblem};
use st_klein_core::scattering::scatter;
use st_klein_core::thresholds::gap_edges;
use st_klein_core::{Error as CoreError, RegimeLabel};
use std::collections::BTreeMap;

use crate::output::{ScatterRecord, ThresholdRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisScale {
    Linear,
    Log,
    /// Samples `v = 1 - 10^{-x}` with `x` linear in `[min, max]`; for
    /// velocity axes that pile up against the speed of light.
    OneMinusLog,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        if self.count < 2 {
            return Err(format!("axis `{}`: count must be at least 2", self.name));
        }
        if !(self.min < self.max) {
            return Err(format!("axis `{}`: min must be below max", self.name));
        }
        let n = self.count;
        let step = |i: usize| i as f64 / (n - 1) as f64;
        let vals = match self.scale {
            AxisScale::Linear => (0..n).map(|i| self.min + (self.max - self.min) * step(i)).collect(),
            AxisScale::Log => {
                if self.min <= 0.0 {
                    return Err(format!("axis `{}`: log scale needs min > 0", self.name));
                }
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..n).map(|i| (a + (b - a) * step(i)).exp()).collect()
            }
            AxisScale::OneMinusLog => (0..n)
                .map(|i| {
                    let x = self.min + (self.max - self.min) * step(i);
                    1.0 - 10f64.powf(-x)
                })
                .collect(),
        };
        Ok(vals)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    #[default]
    Scatter,
    Thresholds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct OutputSpec {
    /// Output file; standard output when absent.
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Declarative sweep: one or two axes, fixed parameters, output sink.
///
/// Recognized parameter names: `ei` (incident energy), `qdv` (scalar
/// offset), `vm` (front velocity) as axes; `qv1`, `qa1`, `qda`, `rav` as
/// additional fixed values. `rav` derives the vector offset as
/// `qda = rav * qdv` unless `qda` is given explicitly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(default)]
    pub target: SweepTarget,
    pub axis1: Axis,
    #[serde(default)]
    pub axis2: Option<Axis>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputSpec,
}

const AXIS_NAMES: &[&str] = &["ei", "qdv", "vm"];
const FIXED_NAMES: &[&str] = &["ei", "qdv", "vm", "qv1", "qa1", "qda", "rav"];

#[derive(Debug, Clone, Copy)]
struct CellParams {
    ei: f64,
    qdv: f64,
    vm: f64,
    qv1: f64,
    qa1: f64,
    qda: Option<f64>,
    rav: Option<f64>,
}

impl CellParams {
    fn vector_offset(&self) -> f64 {
        match (self.qda, self.rav) {
            (Some(qda), _) => qda,
            (None, Some(rav)) => rav * self.qdv,
            (None, None) => 0.0,
        }
    }
}

/// One evaluated sweep row.
#[derive(Debug, Clone)]
pub enum SweepRow {
    Scatter(ScatterRecord),
    Threshold(ThresholdRecord),
}

impl SweepRow {
    pub fn to_csv_row(&self) -> String {
        match self {
            SweepRow::Scatter(r) => r.to_csv_row(),
            SweepRow::Threshold(r) => r.to_csv_row(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SweepRow::Scatter(r) => r.to_json(),
            SweepRow::Threshold(r) => r.to_json(),
        }
    }
}

pub struct SweepResult {
    pub header: &'static str,
    pub rows: Vec<SweepRow>,
}

fn validate(spec: &SweepSpec) -> Result<(), String> {
    let mut axes = vec![&spec.axis1];
    if let Some(a) = &spec.axis2 {
        axes.push(a);
    }
    for axis in &axes {
        if !AXIS_NAMES.contains(&axis.name.as_str()) {
            return Err(format!(
                "unknown axis `{}`; expected one of {:?}",
                axis.name, AXIS_NAMES
            ));
        }
    }
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(format!("both axes sweep `{}`", axes[0].name));
    }
    for name in spec.fixed.keys() {
        if !FIXED_NAMES.contains(&name.as_str()) {
            return Err(format!(
                "unknown fixed parameter `{name}`; expected one of {FIXED_NAMES:?}"
            ));
        }
    }
    // Every parameter the target needs must come from an axis or `fixed`.
    let has = |name: &str| {
        axes.iter().any(|a| a.name == name) || spec.fixed.contains_key(name)
    };
    let needed: &[&str] = match spec.target {
        SweepTarget::Scatter => &["ei", "vm"],
        SweepTarget::Thresholds => &["ei", "vm"],
    };
    for name in needed {
        if !has(name) {
            return Err(format!("parameter `{name}` is neither an axis nor fixed"));
        }
    }
    if spec.target == SweepTarget::Thresholds && !spec.fixed.contains_key("rav") {
        return Err("thresholds sweep needs fixed `rav`".into());
    }
    Ok(())
}

fn cell_params(spec: &SweepSpec, a1: (&str, f64), a2: Option<(&str, f64)>) -> CellParams {
    let get = |name: &str| -> Option<f64> {
        if a1.0 == name {
            return Some(a1.1);
        }
        if let Some((n, v)) = a2 {
            if n == name {
                return Some(v);
            }
        }
        spec.fixed.get(name).copied()
    };
    CellParams {
        ei: get("ei").unwrap_or(4.0),
        qdv: get("qdv").unwrap_or(0.0),
        vm: get("vm").unwrap_or(0.0),
        qv1: get("qv1").unwrap_or(0.0),
        qa1: get("qa1").unwrap_or(0.0),
        qda: spec.fixed.get("qda").copied(),
        rav: get("rav"),
    }
}

fn scatter_cell(p: &CellParams) -> ScatterRecord {
    let region1 = Region::new(p.qv1, p.qa1);
    let region2 = Region::new(p.qv1 + p.qdv, p.qa1 + p.vector_offset());
    let incident = match incident_from_energy(p.ei + p.qv1, region1) {
        Ok(inc) => inc,
        Err(e) => {
            return ScatterRecord {
                e_i: p.ei + p.qv1,
                p_i: f64::NAN,
                qv1: p.qv1,
                qa1: p.qa1,
                qv2: region2.qv,
                qa2: region2.qa,
                v_m: p.vm,
                regime: String::new(),
                re_r: f64::NAN,
                im_r: f64::NAN,
                re_t: f64::NAN,
                im_t: f64::NAN,
                reflection: f64::NAN,
                transmission: f64::NAN,
                error: e.to_string(),
            }
        }
    };
    let problem = match StepProblem::new(incident, region2, p.vm) {
        Ok(pr) => pr,
        Err(e) => {
            let dummy = StepProblem::new(incident, region2, 0.0).expect("v=0 is always valid");
            let mut rec = ScatterRecord::from_failure(&dummy, None, &e.to_string());
            rec.v_m = p.vm;
            return rec;
        }
    };
    match scatter(&problem) {
        Ok(result) => ScatterRecord::from_result(&problem, &result),
        Err(CoreError::NoScattering) => {
            ScatterRecord::from_failure(&problem, Some(RegimeLabel::NoCatchUp), "")
        }
        Err(e) => ScatterRecord::from_failure(&problem, None, &e.to_string()),
    }
}

fn threshold_cell(p: &CellParams) -> ThresholdRecord {
    let rav = p.rav.unwrap_or(-1.0);
    let mut rec = ThresholdRecord {
        e_i_over_m: p.ei,
        v_m: p.vm,
        r_av: rav,
        qdv_plus: f64::NAN,
        qdv_minus: f64::NAN,
        width: f64::NAN,
        error: String::new(),
    };
    let incident = match incident_from_energy(p.ei, Region::free()) {
        Ok(inc) => inc,
        Err(e) => {
            rec.error = e.to_string();
            return rec;
        }
    };
    // Left of the velocity-matching limit the electron never reaches the
    // front and no threshold curve exists.
    if incident.group_velocity() <= p.vm {
        rec.error = "no_catch_up".into();
        return rec;
    }
    match gap_edges(&incident, p.vm, rav) {
        Ok(gap) => {
            rec.qdv_plus = gap.qdv_plus;
            rec.qdv_minus = gap.qdv_minus;
            rec.width = gap.width;
        }
        Err(e) => rec.error = e.to_string(),
    }
    rec
}

/// Runs the sweep; rows come back in row-major order (`axis1` outer,
/// `axis2` inner) no matter how the cells were scheduled.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, String> {
    validate(spec)?;
    let axis1_vals = spec.axis1.values()?;
    let axis2_vals = match &spec.axis2 {
        Some(a) => Some(a.values()?),
        None => None,
    };
    let n2 = axis2_vals.as_ref().map_or(1, Vec::len);
    let total = axis1_vals.len() * n2;

    let rows: Vec<SweepRow> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let i = idx / n2;
            let j = idx % n2;
            let a1 = (spec.axis1.name.as_str(), axis1_vals[i]);
            let a2 = spec
                .axis2
                .as_ref()
                .map(|a| (a.name.as_str(), axis2_vals.as_ref().unwrap()[j]));
            let params = cell_params(spec, a1, a2);
            match spec.target {
                SweepTarget::Scatter => SweepRow::Scatter(scatter_cell(&params)),
                SweepTarget::Thresholds => SweepRow::Threshold(threshold_cell(&params)),
            }
        })
        .collect();

    let header = match spec.target {
        SweepTarget::Scatter => ScatterRecord::CSV_HEADER,
        SweepTarget::Thresholds => ThresholdRecord::CSV_HEADER,
    };
    Ok(SweepResult { header, rows })
}

/// Serializes a sweep result to CSV (LF endings) or a JSON array.
pub fn render(result: &SweepResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(result.rows.len() * 64 + 64);
            out.push_str(result.header);
            out.push('\n');
            for row in &result.rows {
                out.push_str(&row.to_csv_row());
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let vals: Vec<serde_json::Value> = result.rows.iter().map(SweepRow::to_json).collect();
            let mut s = serde_json::to_string_pretty(&vals).expect("row json");
            s.push('\n');
            s
        }
    }
}
