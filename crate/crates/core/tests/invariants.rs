//! Cross-module invariants: conservation laws, dual-route equivalences and
//! robustness of the quadratic solver, over randomized problem families.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use st_klein_core::kinematics::{
    incident_from_energy, reflected_channel, transmitted_channels, Region, StepProblem,
};
use st_klein_core::oracle::{
    intersect_line_hyperbola, radicand_root_scan, static_matching_solve, LineHyperbolaProblem,
};
use st_klein_core::regime::{classify, tangent_velocities, RegimeLabel};
use st_klein_core::scattering::{scatter, spinor_ratio};
use st_klein_core::thresholds::{gap_edges, gap_width};

/// Random admissible step problem: on-shell forward incident state, a front
/// it can overtake, and offsets inside the valid gap geometry.
fn sample_problem(rng: &mut ChaCha8Rng) -> StepProblem {
    loop {
        let qv1 = rng.gen_range(-2.0..2.0);
        let qa1 = rng.gen_range(-2.0..2.0);
        let e1 = rng.gen_range(1.05..12.0);
        let incident = match incident_from_energy(e1 + qv1, Region::new(qv1, qa1)) {
            Ok(inc) => inc,
            Err(_) => continue,
        };
        let v_m = rng.gen_range(0.0..0.995) * incident.group_velocity();
        let qdv = rng.gen_range(-6.0..6.0);
        let qda = if qdv > 0.0 {
            rng.gen_range((-2.0 * qdv - 2.0)..(0.99 * qdv))
        } else {
            rng.gen_range(-6.0..6.0)
        };
        let region2 = Region::new(qv1 + qdv, qa1 + qda);
        match StepProblem::new(incident, region2, v_m) {
            Ok(p) => return p,
            Err(_) => continue,
        }
    }
}

fn sample_propagating(rng: &mut ChaCha8Rng) -> StepProblem {
    loop {
        let problem = sample_problem(rng);
        if let Ok(regime) = classify(&problem) {
            if regime.selected_branch.is_some() {
                return problem;
            }
        }
    }
}

/// Random problem whose scalar offset sits strictly inside the Klein gap.
fn sample_gap(rng: &mut ChaCha8Rng) -> StepProblem {
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
        let frac = rng.gen_range(0.15..0.85);
        let qdv = gap.qdv_plus + frac * gap.width;
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

#[test]
fn on_shell_and_comoving_conservation_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..10_000 {
        let problem = sample_problem(&mut rng);
        let region1 = problem.region1();
        let reflected = reflected_channel(&problem);
        // 1e-10 relative: channel energies scale with gamma_m^2.
        let scale1 = {
            let ke = region1.kinetic_energy(reflected.energy);
            ke.mul_add(ke, 1.0)
        };
        assert!(
            region1.on_shell_residual(reflected.energy, reflected.momentum.re).abs()
                < 1e-10 * scale1,
            "reflected channel off shell"
        );
        let ci = problem.comoving_energy(problem.incident.energy, problem.incident.momentum);
        let cr = problem.comoving_energy(reflected.energy, reflected.momentum.re);
        assert!((ci - cr).abs() < 1e-10 * ci.abs().max(1.0));

        let (plus, minus, geom) = transmitted_channels(&problem);
        if plus.is_propagating() {
            for ch in [&plus, &minus] {
                let ke = problem.region2.kinetic_energy(ch.energy);
                assert!(
                    problem.region2.on_shell_residual(ch.energy, ch.momentum.re).abs()
                        < 1e-10 * ke.mul_add(ke, 1.0),
                    "transmitted channel off shell"
                );
                let ct = problem.comoving_energy(ch.energy, ch.momentum.re);
                assert!((ci - ct).abs() < 1e-10 * ci.abs().max(1.0));
            }
            // Branch symmetry about gamma^2 v w2 + qA2.
            let center = (plus.momentum.re + minus.momentum.re) * 0.5;
            let g2 = 1.0 / ((1.0 - problem.v_m) * (1.0 + problem.v_m));
            let expected = g2 * problem.v_m * geom.w2 + problem.region2.qa;
            assert!((center - expected).abs() < 1e-9 * expected.abs().max(1.0));
        } else {
            assert!(plus.momentum.im > 0.0);
            assert!((plus.momentum.im + minus.momentum.im).abs() < 1e-12);
        }
    }
}

#[test]
fn flux_partition_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..10_000 {
        let problem = sample_propagating(&mut rng);
        let res = scatter(&problem).unwrap();
        assert!(
            (res.reflection + res.transmission - 1.0).abs() < 1e-10,
            "R + T = {} at v_m={}",
            res.reflection + res.transmission,
            problem.v_m
        );
        assert!(res.reflection >= -1e-12);
    }
}

#[test]
fn unitary_gap_reflection_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..10_000 {
        let problem = sample_gap(&mut rng);
        let res = scatter(&problem).unwrap();
        assert!(
            matches!(
                res.regime.label,
                RegimeLabel::KleinGap | RegimeLabel::InvalidGapCondition
            ),
            "gap sample classified as {:?}",
            res.regime.label
        );
        assert!((res.reflection - 1.0).abs() < 1e-10);
        assert!(res.transmission.abs() < 1e-10);
    }
}

#[test]
fn classification_matches_radicand_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for _ in 0..10_000 {
        let problem = sample_problem(&mut rng);
        let regime = match classify(&problem) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let (_, _, geom) = transmitted_channels(&problem);
        if geom.radicand.abs() <= geom.radicand_tolerance() {
            continue; // tangency band is excluded by construction
        }
        if regime.label == RegimeLabel::InvalidGapCondition {
            continue;
        }
        assert_eq!(
            regime.label == RegimeLabel::KleinGap,
            geom.radicand < 0.0,
            "label {:?} vs radicand {}",
            regime.label,
            geom.radicand
        );
    }
}

#[test]
fn selected_branch_outruns_front() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for _ in 0..10_000 {
        let problem = sample_propagating(&mut rng);
        let regime = classify(&problem).unwrap();
        let (plus, minus, _) = transmitted_channels(&problem);
        let ch = match regime.selected_branch.unwrap() {
            st_klein_core::Branch::Minus => minus,
            _ => plus,
        };
        let vg = ch.group_velocity(&problem.region2).unwrap();
        assert!(vg >= problem.v_m - 1e-9, "v_g,t = {vg} vs v_m = {}", problem.v_m);
    }
}

#[test]
fn geometric_and_radicand_tangents_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut checked = 0u32;
    while checked < 10_000 {
        let qv2 = rng.gen_range(-1.0..3.5);
        let qa2 = rng.gen_range(-3.0..1.0);
        let e1 = rng.gen_range(1.2..8.0);
        let incident = incident_from_energy(e1, Region::free()).unwrap();
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
        let mut any = false;
        for vt in [up, low] {
            if (1e-4..0.9999).contains(&vt) {
                // Bisect in a window around the closed form and compare.
                if let Ok(roots) = radicand_root_scan(radicand, vt - 1e-3, vt + 1e-3) {
                    let best = roots
                        .as_slice()
                        .iter()
                        .fold(f64::INFINITY, |acc, r| acc.min((r - vt).abs()));
                    assert!(best < 1e-9, "tangent {vt} vs scan deviation {best}");
                    any = true;
                }
            }
        }
        if any {
            checked += 1;
        }
    }
}

#[test]
fn gap_edges_match_radicand_roots_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut checked = 0u32;
    while checked < 10_000 {
        let e1 = rng.gen_range(1.2..10.0);
        let v_m = rng.gen_range(0.0..0.995);
        let r_av = rng.gen_range(-3.0..0.95);
        let incident = incident_from_energy(e1, Region::free()).unwrap();
        let gap = gap_edges(&incident, v_m, r_av).unwrap();
        let radicand = |qdv: f64| {
            let e2 = incident.energy - qdv;
            let p2 = incident.momentum - r_av * qdv;
            let w2 = e2 - v_m * p2;
            w2 * w2 - (1.0 - v_m) * (1.0 + v_m)
        };
        for edge in [gap.qdv_plus, gap.qdv_minus] {
            if let Ok(roots) = radicand_root_scan(radicand, edge - 1e-3, edge + 1e-3) {
                let best = roots
                    .as_slice()
                    .iter()
                    .fold(f64::INFINITY, |acc, r| acc.min((r - edge).abs()));
                assert!(best < 1e-9, "edge {edge} vs scan deviation {best}");
            } else {
                panic!("no radicand root near edge {edge}");
            }
        }
        checked += 1;
    }
}

#[test]
fn edge_width_identity_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for _ in 0..10_000 {
        let e1 = rng.gen_range(1.05..30.0);
        let v_m = rng.gen_range(0.0..0.999);
        let r_av = rng.gen_range(-3.0..0.99);
        let incident = incident_from_energy(e1, Region::free()).unwrap();
        let gap = gap_edges(&incident, v_m, r_av).unwrap();
        let closed = gap_width(v_m, r_av).unwrap();
        assert!(
            (gap.width - closed).abs() < 1e-12 * closed.max(1.0),
            "width {} vs closed {closed} at E={e1} v={v_m} r={r_av}",
            gap.width
        );
    }
}

#[test]
fn threshold_collapse_towards_velocity_matching() {
    // qdv_minus(v_m = v_g, r = -1) against 2 e^{-omega_g}. The identity is
    // exact in real arithmetic; through f64 incident states the comparison
    // degrades as gamma^2 ulp, so the tolerance tracks that bound.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    for _ in 0..2_000 {
        let v_g: f64 = rng.gen_range(0.1..(1.0 - 1e-12));
        let gamma_g = 1.0 / ((1.0 - v_g) * (1.0 + v_g)).sqrt();
        let incident = match incident_from_energy(gamma_g, Region::free()) {
            Ok(inc) => inc,
            Err(_) => continue,
        };
        let v_m = incident.group_velocity();
        if v_m >= 1.0 {
            continue;
        }
        let gap = gap_edges(&incident, v_m, -1.0).unwrap();
        let closed = st_klein_core::thresholds::velocity_matching_threshold(v_m).unwrap();
        let tol = (1e-12f64).max(1e-16 * gamma_g * gamma_g) * closed;
        assert!(
            (gap.qdv_minus - closed).abs() < tol + 1e-13,
            "v_g={v_g}: edge {} vs closed {closed}",
            gap.qdv_minus
        );
    }
}

#[test]
fn intersection_oracle_matches_closed_form_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000a);
    let mut checked = 0u32;
    while checked < 10_000 {
        let problem = sample_problem(&mut rng);
        let (plus, minus, geom) = transmitted_channels(&problem);
        if !plus.is_propagating() || geom.radicand < 1e-6 {
            continue; // keep clear of the tangency band
        }
        let geo = LineHyperbolaProblem {
            anchor_momentum: problem.incident.momentum,
            anchor_energy: problem.incident.energy,
            slope: problem.v_m,
            region: problem.region2,
        };
        let roots = intersect_line_hyperbola(&geo);
        assert_eq!(roots.len(), 2, "expected two intersections");
        let pts = roots.as_slice();
        let scale = problem.incident.energy.abs().max(1.0);
        assert!((pts[0].0 - minus.momentum.re).abs() < 1e-9 * scale);
        assert!((pts[0].1 - minus.energy).abs() < 1e-9 * scale);
        assert!((pts[1].0 - plus.momentum.re).abs() < 1e-9 * scale);
        assert!((pts[1].1 - plus.energy).abs() < 1e-9 * scale);
        checked += 1;
    }
}

#[test]
fn tangency_scan_brackets_evanescent_region() {
    // The two radicand roots in v must bracket exactly the velocities the
    // kinematics classifies as evanescent.
    let incident = incident_from_energy(4.0, Region::free()).unwrap();
    let region2 = Region::new(2.5, -2.5);
    let radicand = |v: f64| {
        let e2 = region2.kinetic_energy(incident.energy);
        let p2 = region2.kinetic_momentum(incident.momentum);
        let w2 = e2 - v * p2;
        w2 * w2 - (1.0 - v) * (1.0 + v)
    };
    let roots = radicand_root_scan(radicand, 0.0, 0.999).unwrap();
    assert_eq!(roots.len(), 2);
    let (lo, hi) = (roots.as_slice()[0], roots.as_slice()[1]);
    for k in 0..200 {
        let v = 0.001 + 0.997 * (k as f64) / 199.0;
        let problem = StepProblem::new(incident, region2, v).unwrap();
        let (plus, _, geom) = transmitted_channels(&problem);
        if geom.radicand.abs() <= geom.radicand_tolerance() {
            continue;
        }
        let inside = v > lo + 1e-6 && v < hi - 1e-6;
        let outside = v < lo - 1e-6 || v > hi + 1e-6;
        if inside {
            assert!(!plus.is_propagating(), "v={v} inside bracket but propagating");
        } else if outside {
            assert!(plus.is_propagating(), "v={v} outside bracket but evanescent");
        }
    }
}

#[test]
fn quadratic_solver_robust_under_cancellation() {
    // 1e5 random problems, stressing |4AC| << B^2.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000b);
    for _ in 0..100_000 {
        let region = Region::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let anchor_e = rng.gen_range(-6.0..6.0);
        let anchor_p = rng.gen_range(-6.0..6.0);
        let slope = rng.gen_range(0.0..0.999);
        let problem = LineHyperbolaProblem {
            anchor_momentum: anchor_p,
            anchor_energy: anchor_e,
            slope,
            region,
        };
        for &(p, e) in intersect_line_hyperbola(&problem).as_slice() {
            let scale = (p * p + e * e).max(1.0);
            assert!(
                region.on_shell_residual(e, p).abs() < 1e-10 * scale,
                "back-substitution residual too large"
            );
        }
    }
}

#[test]
fn static_limit_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000c);
    let mut checked = 0u32;
    while checked < 500 {
        let e1: f64 = rng.gen_range(1.2..8.0);
        let qdv: f64 = rng.gen_range(-3.0..6.0);
        // The v-derivative of R diverges at the band edges |E - qV2| = 1,
        // so continuity in v needs a margin from them.
        if ((e1 - qdv).abs() - 1.0).abs() < 0.05 {
            continue;
        }
        let incident = incident_from_energy(e1, Region::free()).unwrap();
        let region2 = Region::new(qdv, 0.0);
        let Ok((_, _, r_stat, t_stat)) =
            static_matching_solve(e1, &Region::free(), &region2)
        else {
            continue;
        };
        let problem = StepProblem::new(incident, region2, 1e-8).unwrap();
        let Ok(res) = scatter(&problem) else { continue };
        assert!((res.reflection - r_stat).abs() < 1e-6, "R mismatch at E={e1} qdv={qdv}");
        assert!((res.transmission - t_stat).abs() < 1e-6);
        // The exact static evaluation agrees to machine precision.
        let static_problem = StepProblem::new(incident, region2, 0.0).unwrap();
        let res0 = scatter(&static_problem).unwrap();
        assert!((res0.reflection - r_stat).abs() < 1e-12);
        checked += 1;
    }
}

#[test]
fn klein_paradox_monotone_in_step_height() {
    // Static supercritical region: transmission grows with the step.
    let incident = incident_from_energy(4.0, Region::free()).unwrap();
    let mut last = 0.0;
    for k in 0..30 {
        let qdv = 5.2 + 0.3 * k as f64;
        let problem = StepProblem::new(incident, Region::new(qdv, 0.0), 0.0).unwrap();
        let t = scatter(&problem).unwrap().transmission;
        assert!(t > last, "T({qdv}) = {t} did not increase");
        last = t;
    }
}

#[test]
fn continuity_residuals_for_every_scatter() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000d);
    for _ in 0..5_000 {
        let problem = sample_propagating(&mut rng);
        let res = scatter(&problem).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!((one + res.r_amp - res.t_amp).norm() < 1e-12 * (1.0 + res.r_amp.norm() + res.t_amp.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn prop_spinor_ratio_forms_agree(e1 in 1.0001f64..20.0, qv in -3.0f64..3.0, qa in -3.0f64..3.0) {
        let region = Region::new(qv, qa);
        let energy = e1 + qv;
        let momentum = ((e1 - 1.0) * (e1 + 1.0)).sqrt() + qa;
        let g = spinor_ratio(energy, Complex64::new(momentum, 0.0), &region).unwrap();
        let alt = (momentum - qa) / (e1 + 1.0);
        prop_assert!((g.value.re - alt).abs() < 1e-10 * alt.abs().max(1.0));
        prop_assert!(g.value.im.abs() < 1e-15);
    }

    #[test]
    fn prop_reflected_channel_falls_behind_front(
        e1 in 1.05f64..15.0,
        v_frac in 0.001f64..0.99,
        qv1 in -2.0f64..2.0,
        qa1 in -2.0f64..2.0,
    ) {
        // The reflected wave must lose the race against the front it came
        // from: its group velocity stays below v_m whenever the incident
        // wave overtakes (v_g > v_m).
        let incident = incident_from_energy(e1 + qv1, Region::new(qv1, qa1)).unwrap();
        let v_m = v_frac * incident.group_velocity();
        let problem = StepProblem::new(incident, Region::new(qv1, qa1), v_m).unwrap();
        let refl = reflected_channel(&problem);
        let vg_r = refl.group_velocity(&problem.region1()).unwrap();
        prop_assert!(vg_r < v_m + 1e-12, "v_g,r = {} vs v_m = {}", vg_r, v_m);
    }

    #[test]
    fn prop_static_energies_exact(
        e1 in 1.05f64..15.0,
        qv1 in -2.0f64..2.0,
        qa1 in -2.0f64..2.0,
        qdv in -4.0f64..4.0,
    ) {
        let incident = incident_from_energy(e1 + qv1, Region::new(qv1, qa1)).unwrap();
        let region2 = Region::new(qv1 + qdv, qa1);
        let problem = StepProblem::new(incident, region2, 0.0).unwrap();
        let refl = reflected_channel(&problem);
        prop_assert_eq!(refl.energy, incident.energy);
        let (plus, minus, _) = transmitted_channels(&problem);
        if plus.is_propagating() {
            prop_assert_eq!(plus.energy, incident.energy);
            prop_assert_eq!(minus.energy, incident.energy);
        }
    }
}
