//! Klein-gap edges, gap-width engineering and the velocity-matching
//! threshold.
//!
//! With the vector offset tied to the scalar offset through a fixed ratio
//! `r = qdA/qdV`, the evanescent window in the scalar offset has the closed
//! edges
//!
//! `qdV^± = ((E_i - qV1) - v_m (p_i - qA1) ∓ 1/gamma_m) / (1 - v_m r)`,
//!
//! valid for `r < 1` and `0 <= v_m < 1`. The lower edge `qdV^-` is the
//! Klein-tunneling threshold. All formulas work on region-1 offsets, so any
//! region-1 potentials are shifted out before evaluation.

#[allow(unused_imports)] // `Float` supplies the math methods in no_std builds
use num_traits::Float;

use crate::error::Error;
use crate::kinematics::IncidentState;
use crate::numeric::{exp_neg_rapidity, fused_sub_prod, inv_gamma, rapidity};
use crate::Result;

/// Evanescent window of the scalar offset at fixed modulation velocity and
/// offset ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSpec {
    /// Lower edge (upper-branch tangency), onset of evanescence.
    pub qdv_plus: f64,
    /// Upper edge (lower-branch tangency); the Klein-tunneling threshold.
    pub qdv_minus: f64,
    /// Window width `qdv_minus - qdv_plus`.
    pub width: f64,
    /// Vector-to-scalar offset ratio `qdA/qdV`.
    pub r_av: f64,
    pub v_m: f64,
}

/// Velocity-matching threshold data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPoint {
    /// Threshold scalar offset `qdV^th` (the `qdv_minus` edge).
    pub qdv_th: f64,
    /// Incident energy at which the threshold applies (region-1 offset).
    pub incident_energy: f64,
    pub v_m: f64,
    /// Incident electron rapidity `arctanh(v_g)`.
    pub omega_g: f64,
    /// Modulation rapidity `arctanh(v_m)`.
    pub omega_m: f64,
}

/// Both gap edges for an incident state.
///
/// Substituting either edge (with `qdA = r * qdV`) back into the transmitted
/// radicand yields zero; the width obeys
/// `width = (2/gamma_m)/(1 - v_m r)` identically.
pub fn gap_edges(incident: &IncidentState, v_m: f64, r_av: f64) -> Result<GapSpec> {
    if r_av >= 1.0 {
        return Err(Error::InvalidGapCondition);
    }
    if !(0.0..1.0).contains(&v_m) {
        return Err(Error::Domain("gap edges need 0 <= v_m < 1"));
    }
    let e1 = incident.region.kinetic_energy(incident.energy);
    let p1 = incident.region.kinetic_momentum(incident.momentum);
    // Fused forms: w collapses to 1/gamma near velocity matching and the
    // denominator to 1 - v near ratio -1 with v -> 1.
    let w = fused_sub_prod(e1, v_m, p1);
    let ig = inv_gamma(v_m);
    let denom = fused_sub_prod(1.0, v_m, r_av);
    let qdv_plus = (w - ig) / denom;
    let qdv_minus = (w + ig) / denom;
    Ok(GapSpec {
        qdv_plus,
        qdv_minus,
        width: qdv_minus - qdv_plus,
        r_av,
        v_m,
    })
}

/// Gap width as a function of the velocity alone:
/// `(2/gamma_m)/(1 - v_m r)`.
pub fn gap_width(v_m: f64, r_av: f64) -> Result<f64> {
    if r_av >= 1.0 {
        return Err(Error::InvalidGapCondition);
    }
    if !(0.0..1.0).contains(&v_m) {
        return Err(Error::Domain("gap width needs 0 <= v_m < 1"));
    }
    Ok(2.0 * inv_gamma(v_m) / fused_sub_prod(1.0, v_m, r_av))
}

/// Location and value of the gap-width maximum over `v_m` at fixed ratio.
///
/// For `0 < r < 1` the width peaks at `v_m = r` with value
/// `2/sqrt(1 - r^2)`; for `r <= 0` it is monotone decreasing and the
/// maximum `2` sits at `v_m = 0`.
pub fn gap_width_extrema(r_av: f64) -> Result<(f64, f64)> {
    if r_av >= 1.0 {
        return Err(Error::InvalidGapCondition);
    }
    if r_av <= 0.0 {
        return Ok((0.0, 2.0));
    }
    Ok((r_av, 2.0 / inv_gamma(r_av)))
}

/// Threshold at exact velocity matching (`v_m = v_g`, ratio -1):
/// `2 e^{-omega_g} = 2 sqrt((1 - v_g)/(1 + v_g))`.
pub fn velocity_matching_threshold(v_g: f64) -> Result<f64> {
    if !(v_g > 0.0 && v_g < 1.0) {
        return Err(Error::Domain("velocity matching needs 0 < v_g < 1"));
    }
    Ok(2.0 * exp_neg_rapidity(v_g))
}

/// The same threshold evaluated through the un-simplified edge formula,
/// `(gamma (1 - v^2) + 1/gamma) / (1 + v)`; agrees with
/// [`velocity_matching_threshold`] to rounding for every subluminal `v_g`.
pub fn velocity_matching_threshold_edge_form(v_g: f64) -> Result<f64> {
    if !(v_g > 0.0 && v_g < 1.0) {
        return Err(Error::Domain("velocity matching needs 0 < v_g < 1"));
    }
    let ig = inv_gamma(v_g);
    let gamma_g = 1.0 / ig;
    // gamma - v^2 gamma evaluated as gamma (1-v)(1+v) to keep the
    // cancellation exact.
    let numerator = gamma_g * ((1.0 - v_g) * (1.0 + v_g)) + ig;
    Ok(numerator / (1.0 + v_g))
}

/// Velocity-matching threshold for a given Lorentz factor; reaches far
/// beyond the largest factor representable through an f64 velocity.
pub fn velocity_matching_threshold_from_gamma(gamma_g: f64) -> Result<f64> {
    if !(gamma_g >= 1.0) {
        return Err(Error::Domain("Lorentz factor must be at least 1"));
    }
    Ok(2.0 * crate::numeric::exp_neg_rapidity_from_gamma(gamma_g))
}

/// Minimum of the threshold edge over the incident energy at fixed
/// `(v_m, r)`, subject to the catch-up constraint `v_g > v_m`.
///
/// The edge decreases towards the constraint boundary and its infimum sits
/// at `v_g -> v_m+`, i.e. at incident energy `gamma_m`; golden-section
/// search over the bracketed energy range localizes it to relative
/// tolerance 1e-10 and reports the boundary value.
pub fn min_threshold_over_energy(v_m: f64, r_av: f64) -> Result<ThresholdPoint> {
    if r_av >= 1.0 {
        return Err(Error::InvalidGapCondition);
    }
    if !(0.0 < v_m && v_m < 1.0) {
        return Err(Error::Domain("minimum threshold needs 0 < v_m < 1"));
    }
    let ig_m = inv_gamma(v_m);
    let denom = fused_sub_prod(1.0, v_m, r_av);
    let edge = |e: f64| {
        let p = ((e - 1.0) * (e + 1.0)).sqrt();
        (fused_sub_prod(e, v_m, p) + ig_m) / denom
    };

    // Energy where v_g = 1 - 1e-15; beyond it the edge keeps growing.
    let e_hi = 1.0 / (1e-15f64 * (2.0 - 1e-15)).sqrt();
    let e_lo = 1.0 + 1e-12;
    let (e_min, qdv_th) = golden_min(edge, e_lo, e_hi, 1e-10);

    let v_g = ((e_min - 1.0) * (e_min + 1.0)).sqrt() / e_min;
    Ok(ThresholdPoint {
        qdv_th,
        incident_energy: e_min,
        v_m,
        omega_g: rapidity(v_g.min(1.0 - f64::EPSILON)),
        omega_m: rapidity(v_m),
    })
}

/// Ratio of the lab field realizing the velocity-matching drop over a
/// thickness `L` (in Compton wavelengths) to the static critical field:
/// `2 e^{-omega_g} / L`.
pub fn field_ratio(v_g: f64, l_over_lambda_c: f64) -> Result<f64> {
    if !(l_over_lambda_c > 0.0) {
        return Err(Error::Domain("thickness must be positive"));
    }
    Ok(velocity_matching_threshold(v_g)? / l_over_lambda_c)
}

/// Golden-section minimization of a unimodal function on `[lo, hi]` to
/// relative tolerance `rel_tol` in the argument.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rel_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (hi - lo) > rel_tol * lo.abs().max(1.0) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{incident_from_energy, Region};

    fn inc4() -> IncidentState {
        incident_from_energy(4.0, Region::free()).unwrap()
    }

    #[test]
    fn static_gap_recovers_fig1_bounds() {
        let gap = gap_edges(&inc4(), 0.0, -1.0).unwrap();
        assert!((gap.qdv_plus - 3.0).abs() < 1e-12);
        assert!((gap.qdv_minus - 5.0).abs() < 1e-12);
        assert!((gap.width - 2.0).abs() < 1e-12);
    }

    #[test]
    fn static_width_is_two_for_any_ratio() {
        for &r in &[-5.0, -1.0, 0.0, 0.5, 0.99] {
            let gap = gap_edges(&inc4(), 0.0, r).unwrap();
            assert_eq!(gap.width, 2.0);
        }
    }

    #[test]
    fn edges_match_radicand_roots() {
        // Bisection oracle on the transmitted radicand as a function of the
        // scalar offset with qdA = r qdV.
        let inc = inc4();
        let (v, r) = (0.5, -1.0);
        let gap = gap_edges(&inc, v, r).unwrap();
        let radicand = |qdv: f64| {
            let e2 = inc.energy - qdv;
            let p2 = inc.momentum - r * qdv;
            let w2 = e2 - v * p2;
            w2 * w2 - (1.0 - v * v)
        };
        assert!(radicand(gap.qdv_plus).abs() < 1e-9);
        assert!(radicand(gap.qdv_minus).abs() < 1e-9);
    }

    #[test]
    fn edge_width_identity() {
        for &(v, r) in &[(0.0, -1.0), (0.3, -1.0), (0.7, 0.5), (0.9, -2.5)] {
            let gap = gap_edges(&inc4(), v, r).unwrap();
            let closed = gap_width(v, r).unwrap();
            assert!(
                (gap.width - closed).abs() < 1e-12 * closed.max(1.0),
                "v={v} r={r}: {} vs {closed}",
                gap.width
            );
        }
    }

    #[test]
    fn invalid_ratio_rejected() {
        assert_eq!(gap_edges(&inc4(), 0.3, 1.0), Err(Error::InvalidGapCondition));
        assert_eq!(gap_width_extrema(1.2), Err(Error::InvalidGapCondition));
    }

    #[test]
    fn width_extrema_interior_maximum() {
        let (v_at, w_max) = gap_width_extrema(0.6).unwrap();
        assert_eq!(v_at, 0.6);
        assert!((w_max - 2.5).abs() < 1e-12);
        // Golden-section oracle over the width itself.
        let (v_num, w_num) = golden_min(|v| -gap_width(v, 0.6).unwrap(), 0.0, 1.0 - 1e-9, 1e-12);
        assert!((v_num - 0.6).abs() < 1e-6);
        assert!((-w_num - 2.5).abs() < 1e-8);
    }

    #[test]
    fn width_monotone_for_nonpositive_ratio() {
        let (v_at, w_max) = gap_width_extrema(0.0).unwrap();
        assert_eq!((v_at, w_max), (0.0, 2.0));
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let v = k as f64 / 20.0;
            let w = gap_width(v, 0.0).unwrap();
            assert!(w < last + 1e-15);
            last = w;
        }
    }

    #[test]
    fn width_approaches_rapidity_form_near_unit_ratio() {
        // As r -> 1- at fixed v, width -> 2 e^{omega_m}.
        let v = 0.6;
        let w = gap_width(v, 1.0 - 1e-9).unwrap();
        let limit = 2.0 * (rapidity(v)).exp();
        assert!((w - limit).abs() < 1e-5 * limit);
    }

    #[test]
    fn gap_closes_towards_light_speed() {
        for &r in &[-1.0, 0.0, 0.5] {
            let mut last = f64::INFINITY;
            for n in 1..=12 {
                let v = 1.0 - 10f64.powi(-n);
                let w = gap_width(v, r).unwrap();
                assert!(w < last, "width must shrink, r={r} n={n}");
                last = w;
            }
            assert!(last < 1e-5);
        }
    }

    #[test]
    fn velocity_matching_closed_forms() {
        assert!((velocity_matching_threshold(0.6).unwrap() - 1.0).abs() < 1e-15);
        // v_g -> 0 limit is the static minimum 2m.
        assert!((velocity_matching_threshold(1e-12).unwrap() - 2.0).abs() < 1e-11);
        // Large Lorentz factor: e^{-omega} ~ 5e-5 at gamma = 1e4.
        let th = velocity_matching_threshold_from_gamma(1e4).unwrap();
        assert!((th - 1.0e-4).abs() < 2e-6 * 1.0e-4 + 1e-12);
    }

    #[test]
    fn threshold_agrees_with_gap_edge_at_matching() {
        // Construct the incident state from the energy and evaluate the edge
        // at v_m = v_g; f64 conditioning keeps this meaningful for moderate
        // Lorentz factors.
        for &e in &[1.2, 2.0, 4.0, 20.0, 100.0] {
            let inc = incident_from_energy(e, Region::free()).unwrap();
            let vg = inc.group_velocity();
            let gap = gap_edges(&inc, vg, -1.0).unwrap();
            let th = velocity_matching_threshold(vg).unwrap();
            assert!(
                (gap.qdv_minus - th).abs() < 1e-12,
                "E={e}: edge {} vs closed form {th}",
                gap.qdv_minus
            );
        }
    }

    #[test]
    fn min_threshold_sits_at_catchup_boundary() {
        let point = min_threshold_over_energy(0.9, -1.0).unwrap();
        // Infimum value is the velocity-matching threshold at v_m.
        let expected = velocity_matching_threshold(0.9).unwrap();
        assert!((point.qdv_th - expected).abs() < 1e-8 * expected);
        // Arg-min lies at the catch-up boundary E = gamma_m.
        let gamma_m = 1.0 / inv_gamma(0.9);
        assert!((point.incident_energy - gamma_m).abs() < 1e-4 * gamma_m);
    }

    #[test]
    fn field_ratio_scales_inversely_with_thickness() {
        let v_g = crate::numeric::velocity_from_gamma(1e4);
        let base = field_ratio(v_g, 1.0).unwrap();
        assert!((base - 1.0e-4).abs() < 2e-2 * 1.0e-4);
        assert!((field_ratio(v_g, 0.5).unwrap() - 2.0 * base).abs() < 1e-15);
        assert!((field_ratio(v_g, 2.0).unwrap() - 0.5 * base).abs() < 1e-15);
        assert!(field_ratio(v_g, 0.0).is_err());
    }
}
