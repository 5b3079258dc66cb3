//! Seeded random problem families used by the verification suites and the
//! acceptance tests.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use st_klein_core::kinematics::{incident_from_energy, transmitted_channels, Region, StepProblem};
use st_klein_core::regime::classify;
use st_klein_core::thresholds::gap_edges;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Admissible problem: on-shell forward incident state, overtakable front,
/// offsets inside the valid gap geometry (`qdA < qdV` whenever `qdV > 0`).
pub fn problem(rng: &mut ChaCha8Rng) -> StepProblem {
    loop {
        let qv1 = rng.gen_range(-2.0..2.0);
        let qa1 = rng.gen_range(-2.0..2.0);
        let e1 = rng.gen_range(1.05..12.0);
        let incident = match incident_from_energy(e1 + qv1, Region::new(qv1, qa1)) {
            Ok(inc) => inc,
            Err(_) => continue,
        };
        let v_m = rng.gen_range(0.0..0.99) * incident.group_velocity();
        let qdv = rng.gen_range(-6.0..6.0);
        let qda = if qdv > 0.0 {
            rng.gen_range((-2.0 * qdv - 2.0)..(0.99 * qdv))
        } else {
            rng.gen_range(-6.0..6.0)
        };
        if let Ok(p) = StepProblem::new(incident, Region::new(qv1 + qdv, qa1 + qda), v_m) {
            return p;
        }
    }
}

/// Admissible problem with a propagating selected branch.
pub fn propagating_problem(rng: &mut ChaCha8Rng) -> StepProblem {
    loop {
        let p = problem(rng);
        if let Ok(regime) = classify(&p) {
            if regime.selected_branch.is_some() {
                return p;
            }
        }
    }
}

/// Problem whose scalar offset lies strictly inside the Klein gap.
pub fn gap_problem(rng: &mut ChaCha8Rng) -> StepProblem {
    loop {
        let qv1 = rng.gen_range(-2.0..2.0);
        let qa1 = rng.gen_range(-2.0..2.0);
        let e1 = rng.gen_range(1.1..10.0);
        let incident = match incident_from_energy(e1 + qv1, Region::new(qv1, qa1)) {
            Ok(inc) => inc,
            Err(_) => continue,
        };
        let v_m = rng.gen_range(0.0..0.9) * incident.group_velocity();
        let r_av = rng.gen_range(-2.0..0.9);
        let gap = match gap_edges(&incident, v_m, r_av) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let qdv = gap.qdv_plus + rng.gen_range(0.15..0.85) * gap.width;
        let region2 = Region::new(qv1 + qdv, qa1 + r_av * qdv);
        let problem = match StepProblem::new(incident, region2, v_m) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let (plus, _, _) = transmitted_channels(&problem);
        if !plus.is_propagating() {
            return problem;
        }
    }
}
