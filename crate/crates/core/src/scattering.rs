//! Spinor-ratio amplitudes, worldline-projected channel fluxes and the
//! reflection/transmission probabilities.
//!
//! Continuity of the spinor across the front (imposed in the comoving
//! frame) reduces to `1 + r = t` and `G_i + r G_r = t G_t` in terms of the
//! spinor component ratios `G = (E - qV - 1)/(p - qA)`. Probabilities come
//! from the Dirac current projected on the front worldline,
//! `j = j^z - v_m rho`, evaluated per channel after dropping the rapidly
//! oscillating interference terms.

use num_complex::Complex64;
#[allow(unused_imports)] // `Float` supplies the math methods in no_std builds
use num_traits::Float;

use crate::error::Error;
use crate::kinematics::{
    reflected_channel, transmitted_channels, Branch, ChannelSolution, Region, StepProblem,
};
use crate::regime::{classify, Regime, RegimeLabel};
use crate::Result;

/// Lower/upper spinor component ratio of a plane-wave solution; complex for
/// evanescent channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorRatio {
    pub value: Complex64,
}

impl SpinorRatio {
    pub fn real(v: f64) -> Self {
        SpinorRatio { value: Complex64::new(v, 0.0) }
    }
}

/// Spinor component ratio from complex `(E, p)` in `region`.
///
/// Primary form `(E - qV - 1)/(p - qA)`; when the kinetic momentum is
/// smaller than 1e-12 in magnitude the algebraically equivalent
/// `(p - qA)/(E - qV + 1)` takes over, which removes the removable
/// singularity at rest states.
pub fn spinor_ratio_complex(energy: Complex64, momentum: Complex64, region: &Region) -> Result<SpinorRatio> {
    let ke = energy - region.qv;
    let kp = momentum - region.qa;
    if kp.norm_sqr().sqrt() >= 1e-12 {
        return Ok(SpinorRatio { value: (ke - 1.0) / kp });
    }
    let denom = ke + 1.0;
    if denom.norm_sqr() == 0.0 {
        return Err(Error::Domain("spinor ratio undefined: both forms singular"));
    }
    Ok(SpinorRatio { value: kp / denom })
}

/// Spinor component ratio for a real energy and (possibly complex) momentum.
pub fn spinor_ratio(energy: f64, momentum: Complex64, region: &Region) -> Result<SpinorRatio> {
    spinor_ratio_complex(Complex64::new(energy, 0.0), momentum, region)
}

fn incident_ratio(problem: &StepProblem) -> Result<SpinorRatio> {
    spinor_ratio(
        problem.incident.energy,
        Complex64::new(problem.incident.momentum, 0.0),
        &problem.region1(),
    )
}

/// Ratio of a transmitted channel, including the complex energy
/// continuation `Im(E) = v_m Im(p)` for evanescent channels.
fn channel_ratio(channel: &ChannelSolution, region: &Region, v_m: f64) -> Result<SpinorRatio> {
    spinor_ratio_complex(channel.complex_energy(v_m), channel.momentum, region)
}

/// Reflection and transmission amplitudes from the three spinor ratios:
/// `r = (G_i - G_t)/(G_t - G_r)`, `t = (G_i - G_r)/(G_t - G_r)`.
pub fn amplitudes(
    incident: SpinorRatio,
    reflected: SpinorRatio,
    transmitted: SpinorRatio,
) -> Result<(Complex64, Complex64)> {
    let denom = transmitted.value - reflected.value;
    if denom.norm_sqr() == 0.0 {
        return Err(Error::DegenerateChannels);
    }
    let r = (incident.value - transmitted.value) / denom;
    let t = (incident.value - reflected.value) / denom;
    Ok((r, t))
}

/// Worldline-projected flux of one channel:
/// `|amp|^2 (2 Re G - v_m (1 + |G|^2))`.
///
/// Equals `|amp|^2 (1 + |G|^2)(v_g - v_m)` for a propagating channel, so its
/// sign says whether the channel outruns the front.
pub fn channel_flux(ratio: SpinorRatio, amp: Complex64, v_m: f64) -> f64 {
    let g = ratio.value;
    amp.norm_sqr() * (2.0 * g.re - v_m * (1.0 + g.norm_sqr()))
}

/// Complete scattering result for one step problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterResult {
    pub r_amp: Complex64,
    pub t_amp: Complex64,
    /// Worldline-projected fluxes; `j_r` is negative (the reflected wave
    /// falls behind the front), and `R` is its magnitude ratio.
    pub j_i: f64,
    pub j_r: f64,
    pub j_t: f64,
    pub reflection: f64,
    pub transmission: f64,
    pub regime: Regime,
}

/// Composes kinematics, classification, amplitudes and fluxes into the
/// reflection and transmission probabilities.
pub fn scatter(problem: &StepProblem) -> Result<ScatterResult> {
    let regime = classify(problem)?;
    if regime.label == RegimeLabel::NoCatchUp {
        return Err(Error::NoScattering);
    }

    let reflected = reflected_channel(problem);
    let (plus, minus, _) = transmitted_channels(problem);
    let transmitted = match regime.selected_branch {
        Some(Branch::Minus) => minus,
        Some(_) => plus,
        // Evanescent: the decaying continuation carries the boundary match.
        None => plus,
    };

    let region1 = problem.region1();
    let g_i = incident_ratio(problem)?;
    let g_r = channel_ratio(&reflected, &region1, problem.v_m)?;
    let g_t = channel_ratio(&transmitted, &problem.region2, problem.v_m)?;

    let (r_amp, t_amp) = amplitudes(g_i, g_r, g_t)?;

    // Continuity residuals of the solved system; far below any physical
    // tolerance unless the channel data and the amplitudes disagree.
    let one = Complex64::new(1.0, 0.0);
    let res1 = (one + r_amp - t_amp).norm();
    let res2 = (g_i.value + r_amp * g_r.value - t_amp * g_t.value).norm();
    let scale = 1.0 + r_amp.norm() + t_amp.norm();
    if res1 > 1e-12 * scale || res2 > 1e-12 * scale * (1.0 + g_t.value.norm()) {
        return Err(Error::InternalConsistency("spinor continuity residual"));
    }

    let j_i = channel_flux(g_i, one, problem.v_m);
    if j_i <= 0.0 {
        return Err(Error::NoScattering);
    }
    let j_r = channel_flux(g_r, r_amp, problem.v_m);
    let j_t = channel_flux(g_t, t_amp, problem.v_m);

    let reflection = -j_r / j_i;
    let transmission = j_t / j_i;

    if !transmitted.is_propagating() {
        // The evanescent channel must carry zero flux, leaving unit
        // reflection; this is computed, not imposed.
        if (reflection - 1.0).abs() > 1e-10 || transmission.abs() > 1e-10 {
            return Err(Error::InternalConsistency("gap reflection is not unitary"));
        }
    }

    Ok(ScatterResult {
        r_amp,
        t_amp,
        j_i,
        j_r,
        j_t,
        reflection,
        transmission,
        regime,
    })
}
