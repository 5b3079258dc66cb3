//! Critical modulation velocities and branch selection.
//!
//! Four slopes drawn from the incident state to the medium-2 dispersion
//! branches split the subluminal velocity axis into intervals; inside each
//! interval at most one transmitted branch carries a wave that actually
//! outruns the front. The interval bookkeeping here is advisory: the branch
//! that gets selected is always re-checked against the group-velocity
//! requirement `v_g,t > v_m` directly.

#[allow(unused_imports)] // `Float` supplies the math methods in no_std builds
use num_traits::Float;

use crate::error::Error;
use crate::kinematics::{transmitted_channels, Branch, IncidentState, Region, StepProblem};
use crate::Result;

/// The four critical front velocities for a given incident state and
/// second medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalVelocities {
    /// Slope to the lowest point of the medium-2 upper branch.
    pub up_min: f64,
    /// Slope to the highest point of the medium-2 lower branch.
    pub low_max: f64,
    /// Slope tangent to the upper branch, when a real tangent exists.
    pub up_tan: Option<f64>,
    /// Slope tangent to the lower branch, when a real tangent exists.
    pub low_tan: Option<f64>,
}

impl CriticalVelocities {
    /// True when the four velocities obey the ordering of an upward scalar
    /// step with ratio below one; other geometries legitimately break it.
    pub fn standard_ordering(&self) -> bool {
        match (self.up_tan, self.low_tan) {
            (Some(ut), Some(lt)) => {
                self.up_min <= ut + 1e-12
                    && ut <= lt + 1e-12
                    && lt <= self.low_max + 1e-12
            }
            _ => false,
        }
    }
}

/// Velocity-interval label of a step problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    /// Below every critical velocity; plus branch transmits.
    SubcriticalPlus,
    /// Between the upper-branch extremum slope and its tangent; plus branch.
    AboveUpMinPlus,
    /// Between the two tangents; transmitted momentum is evanescent.
    KleinGap,
    /// Between the lower tangent and the lower-branch extremum slope; minus
    /// branch transmits into the negative-energy continuum.
    BelowLowMaxMinus,
    /// Above the lower-branch extremum slope (still below the incident group
    /// velocity); minus branch.
    MinusOnly,
    /// Front at or above the incident group velocity: never overtaken.
    NoCatchUp,
    /// Positive scalar offset with a vector offset at least as large; the
    /// gap parameterization does not apply to this geometry.
    InvalidGapCondition,
}

impl RegimeLabel {
    /// Stable lowercase serialization used by the CLI and CSV output.
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::SubcriticalPlus => "subcritical_plus",
            RegimeLabel::AboveUpMinPlus => "above_up_min_plus",
            RegimeLabel::KleinGap => "klein_gap",
            RegimeLabel::BelowLowMaxMinus => "below_low_max_minus",
            RegimeLabel::MinusOnly => "minus_only",
            RegimeLabel::NoCatchUp => "no_catch_up",
            RegimeLabel::InvalidGapCondition => "invalid_gap_condition",
        }
    }
}

/// Classification result: interval label plus the admissible transmitted
/// branch, when one exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub label: RegimeLabel,
    pub selected_branch: Option<Branch>,
}

/// Slopes from the incident point to the extrema of the medium-2 branches:
/// `((E_i - qV2) - 1)/(p_i - qA2)` and `((E_i - qV2) + 1)/(p_i - qA2)`.
pub fn simple_critical_velocities(
    incident: &IncidentState,
    region2: &Region,
) -> Result<(f64, f64)> {
    let e2 = region2.kinetic_energy(incident.energy);
    let p2 = region2.kinetic_momentum(incident.momentum);
    if p2 == 0.0 {
        return Err(Error::Domain("vertical transition line: p_i - qA2 = 0"));
    }
    Ok(((e2 - 1.0) / p2, (e2 + 1.0) / p2))
}

/// Slopes of the two lines through the incident point tangent to the
/// medium-2 hyperbola.
///
/// Roots of `(p2^2 + 1) v^2 - 2 p2 e2 v + (e2^2 - 1) = 0`, computed with the
/// cancellation-free root pairing. Tangents exist iff
/// `p2^2 - e2^2 + 1 >= 0`; the incident point sitting exactly on the
/// medium-2 hyperbola is the degenerate case where both tangents coincide
/// with the local slope.
pub fn tangent_velocities(incident: &IncidentState, region2: &Region) -> Result<(f64, f64)> {
    let e2 = region2.kinetic_energy(incident.energy);
    let p2 = region2.kinetic_momentum(incident.momentum);
    let mut disc = (p2 - e2) * (p2 + e2) + 1.0;
    if disc < 0.0 {
        // Rounding can push an exactly-on-hyperbola point slightly negative.
        if disc > -1e-12 * (p2 * p2 + e2 * e2).max(1.0) {
            disc = 0.0;
        } else {
            return Err(Error::Domain("no real tangent: every line crosses a branch"));
        }
    }
    let a = p2 * p2 + 1.0;
    let half_b = p2 * e2;
    let c = (e2 - 1.0) * (e2 + 1.0);
    let root = disc.sqrt();
    let (up_tan, low_tan) = if half_b >= 0.0 {
        let big = (half_b + root) / a;
        if big == 0.0 {
            (0.0, 0.0)
        } else {
            (c / (a * big), big)
        }
    } else {
        let small = (half_b - root) / a;
        if small == 0.0 {
            (0.0, 0.0)
        } else {
            (small, c / (a * small))
        }
    };
    Ok((up_tan, low_tan))
}

/// Full critical-velocity set; tangents are `None` when no real tangent
/// exists.
pub fn critical_velocities(
    incident: &IncidentState,
    region2: &Region,
) -> Result<CriticalVelocities> {
    let (up_min, low_max) = simple_critical_velocities(incident, region2)?;
    let tans = tangent_velocities(incident, region2).ok();
    Ok(CriticalVelocities {
        up_min,
        low_max,
        up_tan: tans.map(|t| t.0),
        low_tan: tans.map(|t| t.1),
    })
}

/// Classifies a step problem into its velocity regime and selects the
/// admissible transmitted branch.
pub fn classify(problem: &StepProblem) -> Result<Regime> {
    let v = problem.v_m;
    let v_g = problem.incident.group_velocity();
    if v >= v_g {
        return Ok(Regime { label: RegimeLabel::NoCatchUp, selected_branch: None });
    }

    let invalid_gap =
        problem.scalar_offset() > 0.0 && problem.vector_offset() >= problem.scalar_offset();

    let (plus, minus, geom) = transmitted_channels(problem);
    let selected_branch = if plus.is_propagating() {
        // At most one branch outruns the front; equality (within the grazing
        // tolerance) keeps the channel as a zero-flux propagating solution.
        let admissible = |ch: &crate::kinematics::ChannelSolution| {
            ch.group_velocity(&problem.region2)
                .map(|vg| vg >= v - 1e-12)
                .unwrap_or(false)
        };
        if admissible(&plus) {
            Some(Branch::Plus)
        } else if admissible(&minus) {
            Some(Branch::Minus)
        } else {
            None
        }
    } else {
        None
    };

    if invalid_gap {
        return Ok(Regime { label: RegimeLabel::InvalidGapCondition, selected_branch });
    }

    let label = if !plus.is_propagating() {
        RegimeLabel::KleinGap
    } else {
        let crit = critical_velocities(&problem.incident, &problem.region2)?;
        interval_label(v, &crit, &geom, selected_branch)
    };
    Ok(Regime { label, selected_branch })
}

fn interval_label(
    v: f64,
    crit: &CriticalVelocities,
    geom: &crate::kinematics::TransitionGeometry,
    selected: Option<Branch>,
) -> RegimeLabel {
    match (crit.up_tan, crit.low_tan) {
        (Some(up_tan), Some(low_tan)) => {
            if v < crit.up_min {
                RegimeLabel::SubcriticalPlus
            } else if v < up_tan {
                RegimeLabel::AboveUpMinPlus
            } else if v <= low_tan {
                // Inside the tangency band but the radicand says propagating:
                // a grazing channel on the side named by the selected branch.
                match selected {
                    Some(Branch::Minus) => RegimeLabel::BelowLowMaxMinus,
                    _ => RegimeLabel::AboveUpMinPlus,
                }
            } else if v < crit.low_max {
                RegimeLabel::BelowLowMaxMinus
            } else {
                RegimeLabel::MinusOnly
            }
        }
        // No real tangent: the transition line always crosses one branch.
        // w2 tells which continuum the crossing sits in.
        _ => {
            if geom.w2 > 0.0 {
                if v < crit.up_min {
                    RegimeLabel::SubcriticalPlus
                } else {
                    RegimeLabel::AboveUpMinPlus
                }
            } else if v < crit.low_max {
                RegimeLabel::BelowLowMaxMinus
            } else {
                RegimeLabel::MinusOnly
            }
        }
    }
}
