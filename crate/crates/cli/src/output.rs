//! Row records and the CSV/JSON emission rules.
//!
//! CSV dialect: comma separators, `.` decimal point, one header row, LF
//! line endings, floats at 17 significant digits so files round-trip
//! losslessly and diff byte-for-byte. NaN becomes an empty CSV field and a
//! JSON `null`; the regime column says why a cell is empty.

use serde::Serialize;
use st_klein_core::{Branch, RegimeLabel, ScatterResult, StepProblem};

/// 17-significant-digit float field; NaN renders empty.
pub fn fmt_field(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.16e}")
    }
}

fn json_f64(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

/// Flat scattering row: inputs, regime, amplitudes and probabilities.
#[derive(Debug, Clone, Serialize)]
pub struct ScatterRecord {
    #[serde(rename = "E_i")]
    pub e_i: f64,
    pub p_i: f64,
    #[serde(rename = "qV1")]
    pub qv1: f64,
    #[serde(rename = "qA1")]
    pub qa1: f64,
    #[serde(rename = "qV2")]
    pub qv2: f64,
    #[serde(rename = "qA2")]
    pub qa2: f64,
    pub v_m: f64,
    pub regime: String,
    #[serde(rename = "Re_r")]
    pub re_r: f64,
    #[serde(rename = "Im_r")]
    pub im_r: f64,
    #[serde(rename = "Re_t")]
    pub re_t: f64,
    #[serde(rename = "Im_t")]
    pub im_t: f64,
    #[serde(rename = "R")]
    pub reflection: f64,
    #[serde(rename = "T")]
    pub transmission: f64,
    pub error: String,
}

impl ScatterRecord {
    pub const CSV_HEADER: &'static str =
        "E_i,p_i,qV1,qA1,qV2,qA2,v_m,regime,Re_r,Im_r,Re_t,Im_t,R,T,error";

    pub fn from_result(problem: &StepProblem, result: &ScatterResult) -> Self {
        let gap = result.regime.label == RegimeLabel::KleinGap
            || (result.regime.selected_branch.is_none()
                && result.regime.label == RegimeLabel::InvalidGapCondition);
        ScatterRecord {
            e_i: problem.incident.energy,
            p_i: problem.incident.momentum,
            qv1: problem.region1().qv,
            qa1: problem.region1().qa,
            qv2: problem.region2.qv,
            qa2: problem.region2.qa,
            v_m: problem.v_m,
            regime: result.regime.label.as_str().to_owned(),
            re_r: result.r_amp.re,
            im_r: result.r_amp.im,
            re_t: result.t_amp.re,
            im_t: result.t_amp.im,
            // Evanescent cells report the asserted exact partition.
            reflection: if gap { 1.0 } else { result.reflection },
            transmission: if gap { 0.0 } else { result.transmission },
            error: String::new(),
        }
    }

    /// Row for a cell that produced no scattering solution.
    pub fn from_failure(problem: &StepProblem, regime: Option<RegimeLabel>, error: &str) -> Self {
        ScatterRecord {
            e_i: problem.incident.energy,
            p_i: problem.incident.momentum,
            qv1: problem.region1().qv,
            qa1: problem.region1().qa,
            qv2: problem.region2.qv,
            qa2: problem.region2.qa,
            v_m: problem.v_m,
            regime: regime.map_or(String::new(), |l| l.as_str().to_owned()),
            re_r: f64::NAN,
            im_r: f64::NAN,
            re_t: f64::NAN,
            im_t: f64::NAN,
            reflection: f64::NAN,
            transmission: f64::NAN,
            error: if regime == Some(RegimeLabel::NoCatchUp) {
                String::new()
            } else {
                error.to_owned()
            },
        }
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_field(self.e_i),
            fmt_field(self.p_i),
            fmt_field(self.qv1),
            fmt_field(self.qa1),
            fmt_field(self.qv2),
            fmt_field(self.qa2),
            fmt_field(self.v_m),
            self.regime,
            fmt_field(self.re_r),
            fmt_field(self.im_r),
            fmt_field(self.re_t),
            fmt_field(self.im_t),
            fmt_field(self.reflection),
            fmt_field(self.transmission),
            self.error,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "E_i": json_f64(self.e_i),
            "p_i": json_f64(self.p_i),
            "qV1": json_f64(self.qv1),
            "qA1": json_f64(self.qa1),
            "qV2": json_f64(self.qv2),
            "qA2": json_f64(self.qa2),
            "v_m": json_f64(self.v_m),
            "regime": if self.regime.is_empty() { serde_json::Value::Null } else { self.regime.clone().into() },
            "Re_r": json_f64(self.re_r),
            "Im_r": json_f64(self.im_r),
            "Re_t": json_f64(self.re_t),
            "Im_t": json_f64(self.im_t),
            "R": json_f64(self.reflection),
            "T": json_f64(self.transmission),
            "error": if self.error.is_empty() { serde_json::Value::Null } else { self.error.clone().into() },
        })
    }
}

/// Threshold-curve row.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRecord {
    #[serde(rename = "E_i_over_m")]
    pub e_i_over_m: f64,
    pub v_m: f64,
    #[serde(rename = "r_AV")]
    pub r_av: f64,
    #[serde(rename = "qdV_plus")]
    pub qdv_plus: f64,
    #[serde(rename = "qdV_minus")]
    pub qdv_minus: f64,
    pub width: f64,
    pub error: String,
}

impl ThresholdRecord {
    pub const CSV_HEADER: &'static str = "E_i_over_m,v_m,r_AV,qdV_plus,qdV_minus,width,error";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            fmt_field(self.e_i_over_m),
            fmt_field(self.v_m),
            fmt_field(self.r_av),
            fmt_field(self.qdv_plus),
            fmt_field(self.qdv_minus),
            fmt_field(self.width),
            self.error,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "E_i_over_m": json_f64(self.e_i_over_m),
            "v_m": json_f64(self.v_m),
            "r_AV": json_f64(self.r_av),
            "qdV_plus": json_f64(self.qdv_plus),
            "qdV_minus": json_f64(self.qdv_minus),
            "width": json_f64(self.width),
            "error": if self.error.is_empty() { serde_json::Value::Null } else { self.error.clone().into() },
        })
    }
}

pub fn branch_str(branch: Option<Branch>) -> Option<&'static str> {
    branch.map(|b| match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
        Branch::Reflected => "reflected",
    })
}
