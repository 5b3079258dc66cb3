//! Verification runs: oracle/closed-form equivalences and comoving
//! continuity, with pass/fail statistics for the `verify` subcommand.

use serde::Serialize;
use st_klein_core::boost::verify_continuity;
use st_klein_core::kinematics::{transmitted_channels, Region, StepProblem};
use st_klein_core::oracle::{
    intersect_line_hyperbola, radicand_root_scan, static_matching_solve, LineHyperbolaProblem,
};
use st_klein_core::regime::tangent_velocities;
use st_klein_core::scattering::scatter;
use st_klein_core::thresholds::gap_edges;

use crate::sample;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SuiteReport {
    fn new(name: &'static str, tolerance: f64) -> Self {
        SuiteReport { name, samples: 0, failures: 0, max_residual: 0.0, tolerance, pass: true }
    }

    fn record(&mut self, residual: f64) {
        self.samples += 1;
        if residual > self.max_residual {
            self.max_residual = residual;
        }
        if !(residual <= self.tolerance) {
            self.failures += 1;
            self.pass = false;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
    pub all_pass: bool,
}

/// Closed-form channels against the line-hyperbola intersection, tangent
/// velocities and gap edges against bisection, and the static matching
/// solve against the full pipeline.
pub fn run_oracle(samples: usize, seed: u64) -> Vec<SuiteReport> {
    let mut rng = sample::rng(seed);
    let mut channels = SuiteReport::new("channel_kinematics_vs_intersection", 1e-9);
    let mut partition = SuiteReport::new("flux_partition", 1e-10);
    let mut gap_reflection = SuiteReport::new("gap_unitary_reflection", 1e-10);

    while channels.samples < samples {
        let problem = sample::problem(&mut rng);
        let (plus, minus, geom) = transmitted_channels(&problem);
        if !plus.is_propagating() || geom.radicand < 1e-6 {
            continue;
        }
        let roots = intersect_line_hyperbola(&LineHyperbolaProblem {
            anchor_momentum: problem.incident.momentum,
            anchor_energy: problem.incident.energy,
            slope: problem.v_m,
            region: problem.region2,
        });
        let scale = problem.incident.energy.abs().max(1.0);
        let residual = if roots.len() == 2 {
            let pts = roots.as_slice();
            let d_minus = (pts[0].0 - minus.momentum.re)
                .abs()
                .max((pts[0].1 - minus.energy).abs());
            let d_plus =
                (pts[1].0 - plus.momentum.re).abs().max((pts[1].1 - plus.energy).abs());
            d_minus.max(d_plus) / scale
        } else {
            f64::INFINITY
        };
        channels.record(residual);
    }

    let mut rng2 = sample::rng(seed ^ 0xabcd);
    while partition.samples < samples {
        let problem = sample::propagating_problem(&mut rng2);
        match scatter(&problem) {
            Ok(res) => partition.record((res.reflection + res.transmission - 1.0).abs()),
            Err(_) => partition.record(f64::INFINITY),
        }
    }

    let mut rng3 = sample::rng(seed ^ 0x1234);
    while gap_reflection.samples < samples {
        let problem = sample::gap_problem(&mut rng3);
        match scatter(&problem) {
            Ok(res) => gap_reflection
                .record((res.reflection - 1.0).abs().max(res.transmission.abs())),
            Err(_) => gap_reflection.record(f64::INFINITY),
        }
    }

    let mut tangents = SuiteReport::new("tangent_velocities_vs_bisection", 1e-9);
    let mut edges = SuiteReport::new("gap_edges_vs_bisection", 1e-9);
    let mut rng4 = sample::rng(seed ^ 0x77aa);
    while tangents.samples < samples {
        use rand::Rng;
        let e1: f64 = rng4.gen_range(1.2..8.0);
        let qv2: f64 = rng4.gen_range(-1.0..3.5);
        let qa2: f64 = rng4.gen_range(-3.0..1.0);
        let incident = st_klein_core::kinematics::incident_from_energy(e1, Region::free()).unwrap();
        let region2 = Region::new(qv2, qa2);
        let Ok((up, low)) = tangent_velocities(&incident, &region2) else {
            continue;
        };
        let radicand = |v: f64| {
            let e2 = region2.kinetic_energy(incident.energy);
            let p2 = region2.kinetic_momentum(incident.momentum);
            let w2 = e2 - v * p2;
            w2 * w2 - (1.0 - v) * (1.0 + v)
        };
        let mut worst: f64 = 0.0;
        let mut any = false;
        for vt in [up, low] {
            if (1e-4..0.9999).contains(&vt) {
                if let Ok(roots) = radicand_root_scan(radicand, vt - 1e-3, vt + 1e-3) {
                    let best = roots
                        .as_slice()
                        .iter()
                        .fold(f64::INFINITY, |acc, r| acc.min((r - vt).abs()));
                    worst = worst.max(best);
                    any = true;
                }
            }
        }
        if any {
            tangents.record(worst);
        }
    }

    let mut rng5 = sample::rng(seed ^ 0x55ee);
    while edges.samples < samples {
        use rand::Rng;
        let e1: f64 = rng5.gen_range(1.2..10.0);
        let v_m: f64 = rng5.gen_range(0.0..0.995);
        let r_av: f64 = rng5.gen_range(-3.0..0.95);
        let incident = st_klein_core::kinematics::incident_from_energy(e1, Region::free()).unwrap();
        let gap = gap_edges(&incident, v_m, r_av).unwrap();
        let radicand = |qdv: f64| {
            let e2 = incident.energy - qdv;
            let p2 = incident.momentum - r_av * qdv;
            let w2 = e2 - v_m * p2;
            w2 * w2 - (1.0 - v_m) * (1.0 + v_m)
        };
        let mut worst: f64 = 0.0;
        for edge in [gap.qdv_plus, gap.qdv_minus] {
            match radicand_root_scan(radicand, edge - 1e-3, edge + 1e-3) {
                Ok(roots) => {
                    let best = roots
                        .as_slice()
                        .iter()
                        .fold(f64::INFINITY, |acc, r| acc.min((r - edge).abs()));
                    worst = worst.max(best);
                }
                Err(_) => worst = f64::INFINITY,
            }
        }
        edges.record(worst);
    }

    let mut statics = SuiteReport::new("static_matching_vs_pipeline", 1e-10);
    let mut rng6 = sample::rng(seed ^ 0x99cc);
    while statics.samples < samples.min(2000) {
        use rand::Rng;
        let e1: f64 = rng6.gen_range(1.2..8.0);
        let qdv: f64 = rng6.gen_range(-3.0..6.0);
        let incident = st_klein_core::kinematics::incident_from_energy(e1, Region::free()).unwrap();
        let region2 = Region::new(qdv, 0.0);
        let Ok((_, _, r_stat, t_stat)) = static_matching_solve(e1, &Region::free(), &region2)
        else {
            continue;
        };
        let problem = StepProblem::new(incident, region2, 0.0).unwrap();
        match scatter(&problem) {
            Ok(res) => statics.record(
                (res.reflection - r_stat).abs().max((res.transmission - t_stat).abs()),
            ),
            Err(_) => statics.record(f64::INFINITY),
        }
    }

    vec![channels, tangents, edges, statics, partition, gap_reflection]
}

/// Comoving continuity residuals and the perturbation sensitivity of the
/// verifier.
pub fn run_continuity(samples: usize, seed: u64) -> Vec<SuiteReport> {
    let mut residuals = SuiteReport::new("comoving_continuity_residual", 1e-10);
    let mut sensitivity = SuiteReport::new("perturbation_detection_margin", 1.0);
    let mut rng = sample::rng(seed ^ 0x4242);
    while residuals.samples < samples {
        let problem = sample::propagating_problem(&mut rng);
        let Ok(result) = scatter(&problem) else {
            residuals.record(f64::INFINITY);
            continue;
        };
        match verify_continuity(&problem, &result) {
            Ok(res) => residuals.record(res),
            Err(_) => residuals.record(f64::INFINITY),
        }
        // A 1e-3 amplitude error must blow the residual past 1e-4; record
        // the margin 1e-4/residual so values above 1 fail.
        let mut spoiled = result;
        spoiled.r_amp += num_complex::Complex64::new(1e-3, 0.0);
        match verify_continuity(&problem, &spoiled) {
            Ok(res) => sensitivity.record(1e-4 / res),
            Err(_) => sensitivity.record(f64::INFINITY),
        }
    }
    vec![residuals, sensitivity]
}

pub fn run(oracle: bool, continuity: bool, samples: usize, seed: u64) -> VerifyReport {
    let mut suites = Vec::new();
    if oracle {
        suites.extend(run_oracle(samples, seed));
    }
    if continuity {
        suites.extend(run_continuity(samples.min(1000).max(100), seed));
    }
    let all_pass = suites.iter().all(|s| s.pass);
    VerifyReport { suites, all_pass }
}
