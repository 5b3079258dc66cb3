//! Canned sweeps that regenerate the probability and threshold figure data,
//! plus the optional companion plotting script.

use crate::sweep::{
    render, run_sweep, Axis, AxisScale, OutputFormat, OutputSpec, SweepResult, SweepSpec,
    SweepTarget,
};
use std::collections::BTreeMap;

/// Known figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    /// Static step response: R and T versus scalar offset at `E_i = 4`.
    Fig1b,
    /// Transmission map over scalar offset and front velocity at
    /// `E_i - qV1 = 4`, offset ratio -1.
    Fig3a,
    /// Threshold curves versus incident energy for front velocities
    /// `1 - 10^{-n}`, `n = 2, 4, 7, 10`, offset ratio -1.
    Fig3b,
}

impl FigurePreset {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1b" => Some(FigurePreset::Fig1b),
            "3a" => Some(FigurePreset::Fig3a),
            "3b" => Some(FigurePreset::Fig3b),
            _ => None,
        }
    }
}

fn fixed(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Declarative spec for a preset, when it fits the generic sweep model.
pub fn preset_spec(preset: FigurePreset) -> Option<SweepSpec> {
    match preset {
        FigurePreset::Fig1b => Some(SweepSpec {
            target: SweepTarget::Scatter,
            axis1: Axis {
                name: "qdv".into(),
                min: 0.0,
                max: 8.0,
                count: 801,
                scale: AxisScale::Linear,
            },
            axis2: None,
            fixed: fixed(&[("ei", 4.0), ("vm", 0.0)]),
            output: OutputSpec::default(),
        }),
        FigurePreset::Fig3a => Some(SweepSpec {
            target: SweepTarget::Scatter,
            axis1: Axis {
                name: "qdv".into(),
                min: 0.0,
                max: 6.0,
                count: 601,
                scale: AxisScale::Linear,
            },
            // Velocity axis covers [0, 1) on 601 points; the endpoint stays
            // strictly subluminal.
            axis2: Some(Axis {
                name: "vm".into(),
                min: 0.0,
                max: 1.0 - 1.0 / 601.0,
                count: 601,
                scale: AxisScale::Linear,
            }),
            fixed: fixed(&[("ei", 4.0), ("rav", -1.0)]),
            output: OutputSpec::default(),
        }),
        FigurePreset::Fig3b => None,
    }
}

/// The exact front velocities of the threshold-curve preset.
pub const FIG3B_EXPONENTS: [i32; 4] = [2, 4, 7, 10];

/// Runs a preset to completion.
///
/// The threshold preset concatenates one energy sweep per front velocity;
/// the exact velocity list `1 - 10^{-n}` is not a uniform grid, so it runs
/// as chained sweeps with the `v_m` column separating the curves.
pub fn run_preset(preset: FigurePreset) -> Result<SweepResult, String> {
    match preset_spec(preset) {
        Some(spec) => run_sweep(&spec),
        None => {
            let mut combined: Option<SweepResult> = None;
            for n in FIG3B_EXPONENTS {
                let vm = 1.0 - 10f64.powi(-n);
                let spec = SweepSpec {
                    target: SweepTarget::Thresholds,
                    axis1: Axis {
                        name: "ei".into(),
                        min: 1.0 + 1e-6,
                        max: 1e6,
                        count: 400,
                        scale: AxisScale::Log,
                    },
                    axis2: None,
                    fixed: fixed(&[("vm", vm), ("rav", -1.0)]),
                    output: OutputSpec::default(),
                };
                let part = run_sweep(&spec)?;
                match &mut combined {
                    None => combined = Some(part),
                    Some(all) => all.rows.extend(part.rows),
                }
            }
            Ok(combined.expect("at least one velocity"))
        }
    }
}

/// Renders a preset with the CSV defaults.
pub fn render_preset(preset: FigurePreset) -> Result<String, String> {
    Ok(render(&run_preset(preset)?, OutputFormat::Csv))
}

/// Companion matplotlib script for a figure CSV.
pub fn plot_script(preset: FigurePreset, csv_name: &str) -> String {
    let body = match preset {
        FigurePreset::Fig1b => {
            r#"fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(rows["qV2"], rows["R"], label="R")
ax.plot(rows["qV2"], rows["T"], label="T")
ax.set_xlabel("scalar step (units of m)")
ax.set_ylabel("probability")
ax.legend()
"#
        }
        FigurePreset::Fig3a => {
            r#"qdv = np.unique(rows["qV2"])
vm = np.unique(rows["v_m"])
t = np.full((vm.size, qdv.size), np.nan)
iq = {v: i for i, v in enumerate(qdv)}
iv = {v: i for i, v in enumerate(vm)}
for q, v, tt in zip(rows["qV2"], rows["v_m"], rows["T"]):
    t[iv[v], iq[q]] = tt
fig, ax = plt.subplots(figsize=(6, 4))
mesh = ax.pcolormesh(qdv, vm, t, shading="nearest")
fig.colorbar(mesh, ax=ax, label="T")
ax.set_xlabel("scalar step (units of m)")
ax.set_ylabel("front velocity (units of c)")
"#
        }
        FigurePreset::Fig3b => {
            r#"fig, ax = plt.subplots(figsize=(6, 4))
for v in np.unique(rows["v_m"]):
    sel = rows["v_m"] == v
    ax.loglog(rows["E_i_over_m"][sel], rows["qdV_minus"][sel], label=f"v_m = {v}")
ax.axhline(2.0, color="gray", lw=0.8)
ax.set_xlabel("incident energy (units of m)")
ax.set_ylabel("threshold scalar step (units of m)")
ax.legend()
"#
        }
    };
    format!(
        r#"#!/usr/bin/env python3
"""Plots {csv} produced by the st-klein figure command."""
import csv

import matplotlib.pyplot as plt
import numpy as np

with open("{csv}", newline="") as fh:
    reader = csv.DictReader(fh)
    cols = {{name: [] for name in reader.fieldnames}}
    for line in reader:
        for name, value in line.items():
            cols[name].append(float(value) if value not in ("", None) and name not in ("regime", "error") else (np.nan if name not in ("regime", "error") else value))
rows = {{name: np.asarray(vals) for name, vals in cols.items()}}

{body}
plt.tight_layout()
plt.savefig("{csv}.png", dpi=200)
print("wrote {csv}.png")
"#,
        csv = csv_name,
        body = body
    )
}
