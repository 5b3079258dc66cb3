//! Dispersion relations, incident-state construction and the closed-form
//! lab-frame kinematics of the reflected and transmitted channels.
//!
//! Each uniform region obeys `(E - qV)^2 = (p - qA)^2 + 1` (electron mass 1).
//! A front moving at `v_m` conserves the comoving energy
//! `gamma_m (E - v_m p)`, which fixes both outgoing channels in closed form.

use num_complex::Complex64;
#[allow(unused_imports)] // `Float` supplies the math methods in no_std builds
use num_traits::Float;

use crate::error::Error;
use crate::numeric::{fused_sub_prod, gamma_sq, inv_gamma};
use crate::Result;

/// Relative tolerance used to classify the transmitted radicand as zero.
pub const RADICAND_TOL: f64 = 1e-9;

/// One side of the interface: constant `qV` (scalar) and `qA` (vector)
/// potential products, in units of the electron mass.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Region {
    pub qv: f64,
    pub qa: f64,
}

impl Region {
    pub const fn new(qv: f64, qa: f64) -> Self {
        Region { qv, qa }
    }

    /// Free region, `qV = qA = 0`.
    pub const fn free() -> Self {
        Region { qv: 0.0, qa: 0.0 }
    }

    /// Kinetic energy `E - qV`.
    #[inline]
    pub fn kinetic_energy(&self, energy: f64) -> f64 {
        energy - self.qv
    }

    /// Kinetic momentum `p - qA`.
    #[inline]
    pub fn kinetic_momentum(&self, momentum: f64) -> f64 {
        momentum - self.qa
    }

    /// `(E - qV)^2 - (p - qA)^2 - 1`; zero on shell.
    #[inline]
    pub fn on_shell_residual(&self, energy: f64, momentum: f64) -> f64 {
        let ke = self.kinetic_energy(energy);
        let kp = self.kinetic_momentum(momentum);
        (ke - kp) * (ke + kp) - 1.0
    }
}

/// Momentum on the dispersion branch: `p = sign * sqrt((E-qV)^2 - 1) + qA`.
pub fn dispersion_momentum(energy: f64, region: &Region, positive_root: bool) -> Result<f64> {
    let ke = region.kinetic_energy(energy);
    // Factored discriminant keeps accuracy near the branch extrema |E-qV| = 1.
    let disc = (ke - 1.0) * (ke + 1.0);
    if disc < 0.0 {
        return Err(Error::Domain("(E - qV)^2 < 1: momentum would be imaginary"));
    }
    let root = disc.sqrt();
    Ok(if positive_root { root + region.qa } else { -root + region.qa })
}

/// Incident electron on the positive-energy, forward-moving branch of
/// medium 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentState {
    pub energy: f64,
    pub momentum: f64,
    pub region: Region,
}

impl IncidentState {
    /// Validates a raw `(E, p)` pair against all incident-state invariants.
    pub fn new(energy: f64, momentum: f64, region: Region) -> Result<Self> {
        let state = IncidentState { energy, momentum, region };
        let ke = region.kinetic_energy(energy);
        if !(energy.is_finite() && momentum.is_finite()) {
            return Err(Error::Domain("incident state must be finite"));
        }
        if ke < 1.0 {
            return Err(Error::Domain("incident energy below positive branch minimum"));
        }
        let residual = region.on_shell_residual(energy, momentum);
        if residual.abs() > 1e-12 * ke.abs().max(1.0).powi(2) {
            return Err(Error::Domain("incident state is off shell"));
        }
        if region.kinetic_momentum(momentum) <= 0.0 {
            return Err(Error::Domain("incident electron must move forward"));
        }
        Ok(state)
    }

    /// Group velocity `(p - qA)/(E - qV)` of the incident electron.
    #[inline]
    pub fn group_velocity(&self) -> f64 {
        self.region.kinetic_momentum(self.momentum) / self.region.kinetic_energy(self.energy)
    }
}

/// Incident state from its energy alone; the momentum comes from the
/// positive dispersion root.
pub fn incident_from_energy(energy: f64, region1: Region) -> Result<IncidentState> {
    let momentum = dispersion_momentum(energy, &region1, true)?;
    IncidentState::new(energy, momentum, region1)
}

/// Group velocity `dE/dp = (p - qA)/(E - qV)` of a propagating state.
pub fn group_velocity(energy: f64, momentum: f64, region: &Region) -> Result<f64> {
    let ke = region.kinetic_energy(energy);
    if ke == 0.0 {
        return Err(Error::Domain("group velocity undefined at E - qV = 0"));
    }
    Ok(region.kinetic_momentum(momentum) / ke)
}

/// Full scattering instance: two regions and a codirectional subluminal
/// front velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepProblem {
    pub incident: IncidentState,
    pub region2: Region,
    /// Front velocity `v_m`, `0 <= v_m < 1`. The purely spatial step is the
    /// `v_m = 0` limit; contradirectional fronts (`v_m < 0`) are rejected.
    pub v_m: f64,
}

impl StepProblem {
    pub fn new(incident: IncidentState, region2: Region, v_m: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&v_m) {
            return Err(Error::Domain("front velocity must satisfy 0 <= v_m < 1"));
        }
        Ok(StepProblem { incident, region2, v_m })
    }

    #[inline]
    pub fn region1(&self) -> Region {
        self.incident.region
    }

    /// Scalar potential offset `qV2 - qV1`.
    #[inline]
    pub fn scalar_offset(&self) -> f64 {
        self.region2.qv - self.incident.region.qv
    }

    /// Vector potential offset `qA2 - qA1`.
    #[inline]
    pub fn vector_offset(&self) -> f64 {
        self.region2.qa - self.incident.region.qa
    }

    #[inline]
    pub fn gamma_m(&self) -> f64 {
        crate::numeric::gamma(self.v_m)
    }

    /// Comoving energy `gamma_m (E - v_m p)` of a lab-frame pair.
    #[inline]
    pub fn comoving_energy(&self, energy: f64, momentum: f64) -> f64 {
        fused_sub_prod(energy, self.v_m, momentum) / inv_gamma(self.v_m)
    }

    /// Transition geometry of this instance.
    pub fn geometry(&self) -> TransitionGeometry {
        TransitionGeometry::of(self)
    }
}

/// The two energy combinations that drive the outgoing channels, plus the
/// transmitted radicand.
///
/// `w1 = v_m (E_i - qV1) - (p_i - qA1)` controls the reflected channel;
/// `w2 = (E_i - qV2) - v_m (p_i - qA2)` is the comoving kinetic energy of
/// the transmitted side divided by `gamma_m`. The transmitted momentum is
/// real iff `radicand = w2^2 - 1/gamma_m^2 >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionGeometry {
    pub w1: f64,
    pub w2: f64,
    pub radicand: f64,
}

impl TransitionGeometry {
    pub fn of(problem: &StepProblem) -> Self {
        let v = problem.v_m;
        let r1 = problem.region1();
        let r2 = problem.region2;
        let e1 = r1.kinetic_energy(problem.incident.energy);
        let p1 = r1.kinetic_momentum(problem.incident.momentum);
        let e2 = r2.kinetic_energy(problem.incident.energy);
        let p2 = r2.kinetic_momentum(problem.incident.momentum);
        // Single-rounding forms; w2 cancels heavily near velocity matching.
        let w1 = fused_sub_prod(-p1, -v, e1);
        let w2 = fused_sub_prod(e2, v, p2);
        let ig = inv_gamma(v);
        // (w2 - 1/g)(w2 + 1/g) keeps the sign reliable near the gap edges.
        let radicand = (w2 - ig) * (w2 + ig);
        TransitionGeometry { w1, w2, radicand }
    }

    /// Tolerance below which the radicand counts as zero (tangency).
    #[inline]
    pub fn radicand_tolerance(&self) -> f64 {
        RADICAND_TOL * (self.w2 * self.w2).max(1.0)
    }

    /// True when the transmitted momentum is complex (strictly beyond the
    /// tangency tolerance band).
    #[inline]
    pub fn is_evanescent(&self) -> bool {
        self.radicand < -self.radicand_tolerance()
    }
}

/// Branch tag of an outgoing channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    Reflected,
}

/// Propagating or evanescent status of a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelStatus {
    Propagating,
    Evanescent,
}

/// One outgoing channel. For evanescent channels the stored energy is the
/// real part; its imaginary part is `v_m * Im(p)` and is reconstructed
/// wherever the complex continuation is needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSolution {
    pub energy: f64,
    pub momentum: Complex64,
    pub branch: Branch,
    pub status: ChannelStatus,
}

impl ChannelSolution {
    #[inline]
    pub fn is_propagating(&self) -> bool {
        self.status == ChannelStatus::Propagating
    }

    /// Group velocity of a propagating channel in `region`.
    pub fn group_velocity(&self, region: &Region) -> Result<f64> {
        if !self.is_propagating() {
            return Err(Error::Domain("group velocity of an evanescent channel"));
        }
        group_velocity(self.energy, self.momentum.re, region)
    }

    /// Complex lab-frame energy, `E + i v_m Im(p)`.
    #[inline]
    pub fn complex_energy(&self, v_m: f64) -> Complex64 {
        Complex64::new(self.energy, v_m * self.momentum.im)
    }
}

/// Reflected channel: `E_r = E_i + 2 gamma^2 v_m w1`, `p_r = p_i + 2 gamma^2 w1`.
///
/// Always lands back on the positive-energy branch of medium 1; the comoving
/// energy matches the incident one by construction.
pub fn reflected_channel(problem: &StepProblem) -> ChannelSolution {
    let g2 = gamma_sq(problem.v_m);
    let w1 = problem.geometry().w1;
    let energy = problem.incident.energy + 2.0 * g2 * problem.v_m * w1;
    let momentum = problem.incident.momentum + 2.0 * g2 * w1;
    ChannelSolution {
        energy,
        momentum: Complex64::new(momentum, 0.0),
        branch: Branch::Reflected,
        status: ChannelStatus::Propagating,
    }
}

/// Both transmitted branches and the geometry that produced them.
///
/// `E_t^± = E_i + gamma^2 v (v (E_i - qV2) - (p_i - qA2) ± s) `,
/// `p_t^± = gamma^2 (v w2 ± s) + qA2` with `s = sqrt(radicand)`. Within the
/// tangency tolerance both branches coincide (grazing but propagating);
/// below it the momentum continues to `± i sqrt(-radicand)` and the channel
/// is evanescent. The plus branch decays ahead of the front.
pub fn transmitted_channels(
    problem: &StepProblem,
) -> (ChannelSolution, ChannelSolution, TransitionGeometry) {
    let geom = problem.geometry();
    let v = problem.v_m;
    let g2 = gamma_sq(v);
    let r2 = problem.region2;
    let e2 = r2.kinetic_energy(problem.incident.energy);
    let p2 = r2.kinetic_momentum(problem.incident.momentum);
    let tol = geom.radicand_tolerance();

    let make = |s_re: f64, s_im: f64, branch: Branch, status: ChannelStatus| {
        // Anchoring on E_i keeps the static limit v = 0 exact.
        let energy = problem.incident.energy + g2 * v * (fused_sub_prod(s_re, v, -e2) - p2);
        let momentum = Complex64::new(g2 * (v * geom.w2 + s_re) + r2.qa, g2 * s_im);
        ChannelSolution { energy, momentum, branch, status }
    };

    if geom.radicand >= -tol {
        let s = if geom.radicand <= tol { 0.0 } else { geom.radicand.sqrt() };
        let plus = make(s, 0.0, Branch::Plus, ChannelStatus::Propagating);
        let minus = make(-s, 0.0, Branch::Minus, ChannelStatus::Propagating);
        (plus, minus, geom)
    } else {
        let kappa = (-geom.radicand).sqrt();
        let plus = make(0.0, kappa, Branch::Plus, ChannelStatus::Evanescent);
        let minus = make(0.0, -kappa, Branch::Minus, ChannelStatus::Evanescent);
        (plus, minus, geom)
    }
}
