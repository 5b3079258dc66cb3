//! `st-klein`: scattering at a space-time modulated potential step.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure.

use clap::{Args, Parser, Subcommand};
use st_klein_cli::figures::{plot_script, render_preset, FigurePreset};
use st_klein_cli::output::{branch_str, fmt_field, ScatterRecord};
use st_klein_cli::sweep::{render, run_sweep, Axis, AxisScale, OutputFormat, SweepSpec};
use st_klein_cli::verify;
use st_klein_core::kinematics::{incident_from_energy, Region, StepProblem};
use st_klein_core::numeric::rapidity;
use st_klein_core::regime::{classify, critical_velocities};
use st_klein_core::scattering::scatter;
use st_klein_core::thresholds::{gap_edges, gap_width, gap_width_extrema, min_threshold_over_energy};
use st_klein_core::{Error as CoreError, RegimeLabel};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "st-klein", version, about = "Relativistic electron scattering at a moving potential step")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Shared step-problem flags; energies and momenta in units of the electron
/// mass, velocities in units of c.
#[derive(Args, Debug)]
struct ProblemArgs {
    /// Incident energy E_i.
    #[arg(long)]
    ei: f64,
    /// Scalar potential qV1 of the incident region.
    #[arg(long, default_value_t = 0.0)]
    qv1: f64,
    /// Vector potential qA1 of the incident region.
    #[arg(long, default_value_t = 0.0)]
    qa1: f64,
    /// Scalar potential qV2 beyond the front.
    #[arg(long, default_value_t = 0.0)]
    qv2: f64,
    /// Vector potential qA2 beyond the front.
    #[arg(long, default_value_t = 0.0)]
    qa2: f64,
    /// Front velocity v_m.
    #[arg(long)]
    vm: f64,
}

impl ProblemArgs {
    fn build(&self) -> Result<StepProblem, CoreError> {
        let incident = incident_from_energy(self.ei, Region::new(self.qv1, self.qa1))?;
        StepProblem::new(incident, Region::new(self.qv2, self.qa2), self.vm)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reflection and transmission at a single configuration (JSON).
    Scatter(ProblemArgs),
    /// Regime label, branch selection and critical velocities (JSON).
    Classify(ProblemArgs),
    /// Klein-gap edges, or the threshold minimum over the incident energy.
    Thresholds {
        /// Front velocity v_m.
        #[arg(long)]
        vm: f64,
        /// Vector-to-scalar offset ratio qdA/qdV.
        #[arg(long, allow_hyphen_values = true)]
        rav: f64,
        /// Incident energy (region-1 potentials zero).
        #[arg(long, conflicts_with = "min_over_ei")]
        ei: Option<f64>,
        /// Minimize the threshold over the incident energy instead.
        #[arg(long)]
        min_over_ei: bool,
    },
    /// Gap width versus front velocity at fixed offset ratio (CSV).
    Gap {
        /// Vector-to-scalar offset ratio qdA/qdV.
        #[arg(long, allow_hyphen_values = true)]
        rav: f64,
        /// Number of velocity samples.
        #[arg(long, default_value_t = 501)]
        count: usize,
        /// Print only the width maximum as JSON.
        #[arg(long)]
        extrema: bool,
        /// Output file (standard output when absent).
        #[arg(long)]
        output: Option<String>,
    },
    /// Evaluate a parameter sweep from a JSON spec or inline axes.
    Sweep {
        /// Path to a sweep spec JSON file.
        #[arg(long, conflicts_with_all = ["axis1", "axis2", "set"])]
        spec: Option<String>,
        /// Inline axis `name:min:max:count:scale`.
        #[arg(long)]
        axis1: Option<String>,
        /// Optional second inline axis.
        #[arg(long, requires = "axis1")]
        axis2: Option<String>,
        /// Fixed parameter `name=value`; repeatable.
        #[arg(long = "set")]
        set: Vec<String>,
        /// Sweep target: scatter or thresholds.
        #[arg(long, default_value = "scatter")]
        target: String,
        /// Output file (standard output when absent).
        #[arg(long)]
        output: Option<String>,
        /// Output format: csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Run the oracle and continuity verification suites (JSON).
    Verify {
        /// Closed forms against geometric/bisection oracles.
        #[arg(long)]
        oracle: bool,
        /// Comoving-frame spinor continuity.
        #[arg(long)]
        continuity: bool,
        /// Everything.
        #[arg(long)]
        all: bool,
        /// Samples per suite.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Random seed.
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Regenerate figure data: 1b, 3a or 3b.
    Figure {
        /// Which preset.
        #[arg(long)]
        which: String,
        /// Output CSV path (standard output when absent).
        #[arg(long)]
        output: Option<String>,
        /// Also write a matplotlib script next to the CSV.
        #[arg(long)]
        emit_plot_script: bool,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    let payload = serde_json::json!({ "code": "usage", "message": msg });
    eprintln!("{payload}");
    ExitCode::from(1)
}

fn emit(text: &str, path: Option<&str>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())
        }
    }
}

fn parse_inline_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 5 {
        return Err(format!("axis `{s}` must be name:min:max:count:scale"));
    }
    let scale = match parts[4] {
        "linear" => AxisScale::Linear,
        "log" => AxisScale::Log,
        "one-minus-log" => AxisScale::OneMinusLog,
        other => return Err(format!("unknown axis scale `{other}`")),
    };
    Ok(Axis {
        name: parts[0].to_string(),
        min: parts[1].parse().map_err(|e| format!("axis min: {e}"))?,
        max: parts[2].parse().map_err(|e| format!("axis max: {e}"))?,
        count: parts[3].parse().map_err(|e| format!("axis count: {e}"))?,
        scale,
    })
}

fn scatter_command(args: &ProblemArgs) -> Result<String, String> {
    let problem = args.build().map_err(|e| e.to_string())?;
    let record = match scatter(&problem) {
        Ok(result) => ScatterRecord::from_result(&problem, &result),
        Err(CoreError::NoScattering) => {
            ScatterRecord::from_failure(&problem, Some(RegimeLabel::NoCatchUp), "")
        }
        Err(e) => return Err(e.to_string()),
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&record.to_json()).unwrap()))
}

fn classify_command(args: &ProblemArgs) -> Result<String, String> {
    let problem = args.build().map_err(|e| e.to_string())?;
    let regime = classify(&problem).map_err(|e| e.to_string())?;
    let crit = critical_velocities(&problem.incident, &problem.region2).ok();
    let json = serde_json::json!({
        "regime": regime.label.as_str(),
        "selected_branch": branch_str(regime.selected_branch),
        "v_m": problem.v_m,
        "v_g": problem.incident.group_velocity(),
        "v_up_min": crit.as_ref().map(|c| c.up_min),
        "v_low_max": crit.as_ref().map(|c| c.low_max),
        "v_up_tan": crit.as_ref().and_then(|c| c.up_tan),
        "v_low_tan": crit.as_ref().and_then(|c| c.low_tan),
        "standard_ordering": crit.as_ref().map(|c| c.standard_ordering()),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn thresholds_command(vm: f64, rav: f64, ei: Option<f64>, min_over_ei: bool) -> Result<String, String> {
    if min_over_ei {
        let point = min_threshold_over_energy(vm, rav).map_err(|e| e.to_string())?;
        let json = serde_json::json!({
            "v_m": point.v_m,
            "r_AV": rav,
            "E_i_at_min": point.incident_energy,
            "qdV_th_min": point.qdv_th,
            "omega_m": point.omega_m,
            "omega_g": point.omega_g,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&json).unwrap()));
    }
    let ei = ei.ok_or("thresholds needs --ei or --min-over-ei")?;
    let incident = incident_from_energy(ei, Region::free()).map_err(|e| e.to_string())?;
    let gap = gap_edges(&incident, vm, rav).map_err(|e| e.to_string())?;
    let json = serde_json::json!({
        "E_i_over_m": ei,
        "v_m": vm,
        "r_AV": rav,
        "qdV_plus": gap.qdv_plus,
        "qdV_minus": gap.qdv_minus,
        "width": gap.width,
        "omega_m": rapidity(vm),
        "omega_g": rapidity(incident.group_velocity()),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn gap_command(rav: f64, count: usize, extrema: bool) -> Result<String, String> {
    if extrema {
        let (v_at_max, width_max) = gap_width_extrema(rav).map_err(|e| e.to_string())?;
        let json = serde_json::json!({ "r_AV": rav, "v_at_max": v_at_max, "width_max": width_max });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&json).unwrap()));
    }
    if count < 2 {
        return Err("count must be at least 2".into());
    }
    let mut out = String::from("v_m,r_AV,width\n");
    for k in 0..count {
        // Half-open [0, 1): the endpoint is not subluminal.
        let v = k as f64 / count as f64;
        let width = gap_width(v, rav).map_err(|e| e.to_string())?;
        out.push_str(&format!("{},{},{}\n", fmt_field(v), fmt_field(rav), fmt_field(width)));
    }
    Ok(out)
}

fn sweep_command(
    spec_path: Option<&str>,
    axis1: Option<&str>,
    axis2: Option<&str>,
    set: &[String],
    target: &str,
    output: Option<&str>,
    format: &str,
) -> Result<(), String> {
    let mut spec: SweepSpec = match spec_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?;
            serde_json::from_str(&text).map_err(|e| format!("parsing {path}: {e}"))?
        }
        None => {
            let axis1 = axis1.ok_or("sweep needs --spec or --axis1")?;
            let mut fixed = std::collections::BTreeMap::new();
            for kv in set {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| format!("--set `{kv}` must be name=value"))?;
                let value: f64 = v.parse().map_err(|e| format!("--set {kv}: {e}"))?;
                fixed.insert(k.to_string(), value);
            }
            SweepSpec {
                target: match target {
                    "scatter" => st_klein_cli::sweep::SweepTarget::Scatter,
                    "thresholds" => st_klein_cli::sweep::SweepTarget::Thresholds,
                    other => return Err(format!("unknown target `{other}`")),
                },
                axis1: parse_inline_axis(axis1)?,
                axis2: axis2.map(parse_inline_axis).transpose()?,
                fixed,
                output: Default::default(),
            }
        }
    };
    // Command-line output settings win over the spec file.
    if output.is_some() {
        spec.output.path = output.map(str::to_owned);
    }
    spec.output.format = match format {
        "csv" => OutputFormat::Csv,
        "json" => OutputFormat::Json,
        other => return Err(format!("unknown format `{other}`")),
    };
    let result = run_sweep(&spec)?;
    let text = render(&result, spec.output.format);
    emit(&text, spec.output.path.as_deref()).map_err(|e| e.to_string())
}

fn figure_command(which: &str, output: Option<&str>, emit_script: bool) -> Result<(), String> {
    let preset = FigurePreset::parse(which).ok_or_else(|| format!("unknown figure `{which}`"))?;
    let csv = render_preset(preset)?;
    emit(&csv, output).map_err(|e| e.to_string())?;
    if emit_script {
        let csv_name = output.unwrap_or("figure.csv");
        let script_path = format!("{}_plot.py", csv_name.trim_end_matches(".csv"));
        std::fs::write(&script_path, plot_script(preset, csv_name)).map_err(|e| e.to_string())?;
        eprintln!("wrote {script_path}");
    }
    Ok(())
}

fn main() -> ExitCode {
    // Cap worker threads; output is byte-identical for any setting.
    if let Ok(threads) = std::env::var("ST_KLEIN_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => return usage_error("ST_KLEIN_THREADS must be a positive integer"),
        }
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful output, not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return usage_error(&e.to_string());
        }
    };

    let outcome: Result<(), String> = match &cli.command {
        Command::Scatter(args) => scatter_command(args).map(|s| print!("{s}")),
        Command::Classify(args) => classify_command(args).map(|s| print!("{s}")),
        Command::Thresholds { vm, rav, ei, min_over_ei } => {
            thresholds_command(*vm, *rav, *ei, *min_over_ei).map(|s| print!("{s}"))
        }
        Command::Gap { rav, count, extrema, output } => gap_command(*rav, *count, *extrema)
            .and_then(|s| emit(&s, output.as_deref()).map_err(|e| e.to_string())),
        Command::Sweep { spec, axis1, axis2, set, target, output, format } => sweep_command(
            spec.as_deref(),
            axis1.as_deref(),
            axis2.as_deref(),
            set,
            target,
            output.as_deref(),
            format,
        ),
        Command::Verify { oracle, continuity, all, samples, seed } => {
            let (run_oracle, run_continuity) = if *all || (!*oracle && !*continuity) {
                (true, true)
            } else {
                (*oracle, *continuity)
            };
            let report = verify::run(run_oracle, run_continuity, *samples, *seed);
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if report.all_pass {
                return ExitCode::SUCCESS;
            }
            return ExitCode::from(2);
        }
        Command::Figure { which, output, emit_plot_script } => {
            figure_command(which, output.as_deref(), *emit_plot_script)
        }
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => usage_error(&msg),
    }
}
