//! Collinear Lorentz boosts for energy-momentum pairs and the 2-spinor,
//! plus the comoving-frame continuity verifier.
//!
//! The full 4x4 spinor boost for a z-boost acts block-diagonally on the
//! component pair used by the 1+1D problem, so only the 2x2 block
//! `[[c1, -c2], [-c2, c1]]` with `c1 = cosh(omega/2)`, `c2 = sinh(omega/2)`
//! is carried here. Boosted components are assembled from `e^{±omega/2}`
//! factors, which keeps them accurate when `c1` and `c2` nearly cancel at
//! large rapidity.

use num_complex::Complex64;
#[allow(unused_imports)] // `Float` supplies the math methods in no_std builds
use num_traits::Float;

use crate::error::Error;
use crate::kinematics::{reflected_channel, transmitted_channels, Branch, StepProblem};
use crate::numeric::fused_sub_prod;
use crate::scattering::{ScatterResult, SpinorRatio};
use crate::Result;

/// A boost along z, parameterized by rapidity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostZ {
    pub omega: f64,
    pub gamma: f64,
    pub beta: f64,
    /// `cosh(omega/2)`.
    pub cosh_half: f64,
    /// `sinh(omega/2)`.
    pub sinh_half: f64,
    exp_half: f64,
    exp_neg_half: f64,
}

impl BoostZ {
    pub fn from_velocity(v: f64) -> Result<Self> {
        if !(v.abs() < 1.0) {
            return Err(Error::Domain("boost velocity must satisfy |v| < 1"));
        }
        Ok(Self::from_rapidity(v.atanh()))
    }

    pub fn from_rapidity(omega: f64) -> Self {
        let half = 0.5 * omega;
        let exp_half = half.exp();
        let exp_neg_half = (-half).exp();
        BoostZ {
            omega,
            gamma: omega.cosh(),
            beta: omega.tanh(),
            cosh_half: half.cosh(),
            sinh_half: half.sinh(),
            exp_half,
            exp_neg_half,
        }
    }

    /// Determinant of the 2x2 spinor block, `c1^2 - c2^2`, computed as
    /// `e^{-omega/2} e^{omega/2}` so it stays 1 at large rapidity.
    #[inline]
    pub fn det(&self) -> f64 {
        self.exp_neg_half * self.exp_half
    }

    /// Boosted spinor components for a lab spinor `(1, G)`:
    /// `(c1 - c2 G, -c2 + c1 G)`, assembled from exponential halves.
    pub fn spinor_components(&self, ratio: SpinorRatio) -> (Complex64, Complex64) {
        let g = ratio.value;
        let plus = (1.0 + g) * (0.5 * self.exp_neg_half);
        let minus = (1.0 - g) * (0.5 * self.exp_half);
        (plus + minus, plus - minus)
    }

    /// `(E', p') = (gamma (E - v p), gamma (p - v E))`.
    pub fn energy_momentum(&self, energy: f64, momentum: f64) -> (f64, f64) {
        (
            self.gamma * fused_sub_prod(energy, self.beta, momentum),
            self.gamma * fused_sub_prod(momentum, self.beta, energy),
        )
    }
}

/// Energy-momentum boost: `E' = gamma (E - v p)`, `p' = gamma (p - v E)`.
pub fn boost_energy_momentum(energy: f64, momentum: f64, v: f64) -> Result<(f64, f64)> {
    if !(v.abs() < 1.0) {
        return Err(Error::Domain("boost velocity must satisfy |v| < 1"));
    }
    Ok(BoostZ::from_velocity(v)?.energy_momentum(energy, momentum))
}

/// A plane-wave spinor expressed in the boosted frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostedSpinor {
    pub upper: Complex64,
    pub lower: Complex64,
    pub energy: f64,
    pub momentum: f64,
}

impl BoostedSpinor {
    /// Ratio of the boosted components, `lower/upper`.
    pub fn ratio(&self) -> Complex64 {
        self.lower / self.upper
    }
}

/// Boosts the spinor `(1, G)` together with its `(E, p)` labels into the
/// frame moving at `v`.
pub fn boost_spinor(ratio: SpinorRatio, energy: f64, momentum: f64, v: f64) -> Result<BoostedSpinor> {
    let boost = BoostZ::from_velocity(v)?;
    let (upper, lower) = boost.spinor_components(ratio);
    let (e, p) = boost.energy_momentum(energy, momentum);
    Ok(BoostedSpinor { upper, lower, energy: e, momentum: p })
}

/// Maximum comoving-frame spinor-continuity mismatch of a scatter result.
///
/// Boosts the incident, reflected and selected transmitted spinors (with
/// amplitudes 1, r, t) into the frame of the front, where the interface is
/// static, and evaluates both components of `psi_1' - psi_2'` at the
/// interface. This re-derives every ratio from the channel kinematics, so a
/// wrong branch, boost or amplitude shows up as a large residual.
pub fn verify_continuity(problem: &StepProblem, result: &ScatterResult) -> Result<f64> {
    let boost = BoostZ::from_velocity(problem.v_m)?;
    let region1 = problem.region1();

    let reflected = reflected_channel(problem);
    let (plus, minus, _) = transmitted_channels(problem);
    let transmitted = match result.regime.selected_branch {
        Some(Branch::Minus) => minus,
        _ => plus,
    };
    if !transmitted.is_propagating() {
        return Err(Error::Domain("continuity verification needs a propagating channel"));
    }

    let g_i = crate::scattering::spinor_ratio(
        problem.incident.energy,
        Complex64::new(problem.incident.momentum, 0.0),
        &region1,
    )?;
    let g_r = crate::scattering::spinor_ratio(reflected.energy, reflected.momentum, &region1)?;
    let g_t =
        crate::scattering::spinor_ratio(transmitted.energy, transmitted.momentum, &problem.region2)?;

    let (iu, il) = boost.spinor_components(g_i);
    let (ru, rl) = boost.spinor_components(g_r);
    let (tu, tl) = boost.spinor_components(g_t);

    let upper = iu + result.r_amp * ru - result.t_amp * tu;
    let lower = il + result.r_amp * rl - result.t_amp * tl;
    Ok(upper.norm().max(lower.norm()))
}
