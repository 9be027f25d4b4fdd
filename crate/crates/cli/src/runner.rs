//! Command dispatch: resolve the target scenario/spec, run the requested
//! operation, and emit stdout plus optional files.

use crate::output::{atomic_write, cost_table_csv};
use crate::{Cli, Command, Format, Mode, Target};
use diffsearch_core::amplify::{
    modified_search, original_search, IsImpl, PipelineOptions, RunReport,
};
use diffsearch_core::analysis::residual_report;
use diffsearch_core::engine::{default_q_max, success_curve, StateVector};
use diffsearch_core::pea::{approx_selective_inversion, required_ancillas, PEAConfig};
use diffsearch_core::scenario::{all_built_in, built_in, Scenario};
use diffsearch_core::spectrum::{build_diffusion, DiffusionSpec};
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};

pub enum CliError {
    Core(diffsearch_core::Error),
    Io(String, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => e.exit_code(),
            CliError::Io(..) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(what, e) => write!(f, "{what}: {e}"),
        }
    }
}

impl From<diffsearch_core::Error> for CliError {
    fn from(e: diffsearch_core::Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}", path.display()), e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    atomic_write(path, contents)
        .map_err(|e| CliError::Io(format!("writing {}", path.display()), e))
}

/// Resolve --scenario/--spec/--phi/--seed into a concrete scenario.
fn resolve_target(target: &Target, seed: Option<u64>) -> Result<Scenario> {
    let mut scenario = if let Some(name) = &target.scenario {
        if let Ok(sc) = built_in(name) {
            sc
        } else if Path::new(name).exists() {
            let text = read_file(Path::new(name))?;
            let sc: Scenario = serde_json::from_str(&text)
                .map_err(diffsearch_core::Error::from)?;
            sc.spec.validate()?;
            sc
        } else {
            return Err(diffsearch_core::Error::UnknownScenario(name.clone()).into());
        }
    } else if let Some(path) = &target.spec {
        let text = read_file(path)?;
        let spec = DiffusionSpec::from_json(&text)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "spec".into());
        Scenario {
            name,
            spec,
            phi: std::f64::consts::PI,
            epsilon: None,
        }
    } else {
        return Err(diffsearch_core::Error::InvalidSpec(
            "provide --scenario <name|file> or --spec <file>".into(),
        )
        .into());
    };
    if let Some(phi) = target.phi {
        scenario.phi = phi;
    }
    if let Some(seed) = seed {
        scenario.spec.seed = seed;
    }
    Ok(scenario)
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Analyze { target } => {
            let sc = resolve_target(target, cli.seed)?;
            cmd_analyze(&sc, cli.format, cli.out_dir.as_deref(), true)
        }
        Command::Curve { target, q_max } => {
            let sc = resolve_target(target, cli.seed)?;
            cmd_curve(&sc, *q_max, cli.out_dir.as_deref(), true)
        }
        Command::Pea {
            target,
            bits,
            sweep,
            epsilon,
        } => {
            let sc = resolve_target(target, cli.seed)?;
            let bits_list = resolve_bits(&sc, *bits, sweep.as_deref(), *epsilon)?;
            cmd_pea(&sc, &bits_list, *epsilon, cli.out_dir.as_deref(), true)
        }
        Command::Compare {
            target,
            epsilon,
            mode,
            refine,
        } => {
            let sc = resolve_target(target, cli.seed)?;
            cmd_compare(
                &sc,
                *mode,
                epsilon.or(sc.epsilon),
                *refine,
                cli.format,
                cli.out_dir.as_deref(),
                true,
            )
        }
        Command::Batch => cmd_batch(cli),
    }
}

fn out_path(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}"))
}

fn cmd_analyze(sc: &Scenario, format: Format, out_dir: Option<&Path>, stdout: bool) -> Result<()> {
    let (ds, eig) = build_diffusion(&sc.spec)?;
    let (summary, table) = residual_report(&ds, &eig, sc.spec.target, sc.phi)?;
    let json = serde_json::to_string_pretty(&summary).map_err(diffsearch_core::Error::from)?;
    let csv = table.to_csv();
    if stdout {
        match format {
            Format::Json => println!("{json}"),
            Format::Csv => print!("{csv}"),
        }
    }
    if let Some(dir) = out_dir {
        write_file(&out_path(dir, &sc.name, "summary.json"), &json)?;
        write_file(&out_path(dir, &sc.name, "residuals.csv"), &csv)?;
    }
    Ok(())
}

fn cmd_curve(
    sc: &Scenario,
    q_max: Option<usize>,
    out_dir: Option<&Path>,
    stdout: bool,
) -> Result<()> {
    let (ds, eig) = build_diffusion(&sc.spec)?;
    let summary = diffsearch_core::analysis::analyze(&eig, sc.phi)?;
    let q_max = q_max.unwrap_or_else(|| default_q_max(summary.b, summary.alpha));
    let s = StateVector::new(sc.spec.source_vector())?;
    let curve = success_curve(&ds, sc.spec.target, sc.phi, &s, q_max)?;
    let csv = curve.to_csv();
    if stdout {
        print!("{csv}");
    }
    if let Some(dir) = out_dir {
        write_file(&out_path(dir, &sc.name, "curve.csv"), &csv)?;
    }
    Ok(())
}

fn resolve_bits(
    sc: &Scenario,
    bits: Option<u32>,
    sweep: Option<&str>,
    epsilon: Option<f64>,
) -> Result<Vec<u32>> {
    if let Some(b) = bits {
        return Ok(vec![b]);
    }
    if let Some(spec) = sweep {
        let (lo, hi) = spec
            .split_once(':')
            .and_then(|(a, b)| Some((a.parse::<u32>().ok()?, b.parse::<u32>().ok()?)))
            .ok_or_else(|| {
                diffsearch_core::Error::InvalidSpec(format!(
                    "--sweep expects b0:b1, got `{spec}`"
                ))
            })?;
        if lo > hi {
            return Err(diffsearch_core::Error::InvalidSpec(format!(
                "--sweep range {lo}:{hi} is empty"
            ))
            .into());
        }
        return Ok((lo..=hi).collect());
    }
    // default: the sizing rule's b for the requested error budget
    let (_, eig) = build_diffusion(&sc.spec)?;
    let eps = epsilon.unwrap_or(0.05);
    let (b, _) = required_ancillas(eig.theta_min(), eps)?;
    Ok(vec![b])
}

fn cmd_pea(
    sc: &Scenario,
    bits_list: &[u32],
    epsilon: Option<f64>,
    out_dir: Option<&Path>,
    stdout: bool,
) -> Result<()> {
    let (_, eig) = build_diffusion(&sc.spec)?;
    let theta_min = eig.theta_min();
    let eps = epsilon.unwrap_or(0.05);
    let mut csv = String::from("b,queries,worst_error,leakage\n");
    for &b in bits_list {
        let cfg = PEAConfig::new(b, theta_min, eps);
        let w = approx_selective_inversion(&eig, &cfg)?;
        let report = w.report();
        csv.push_str(&format!(
            "{},{},{},{}\n",
            b, report.queries, report.worst_error, report.worst_leakage
        ));
    }
    if stdout {
        print!("{csv}");
    }
    if let Some(dir) = out_dir {
        write_file(&out_path(dir, &sc.name, "pea.csv"), &csv)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    original: Option<RunReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    modified: Option<RunReport>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    sc: &Scenario,
    mode: Mode,
    epsilon: Option<f64>,
    refine: bool,
    format: Format,
    out_dir: Option<&Path>,
    stdout: bool,
) -> Result<()> {
    let original = match mode {
        Mode::Original | Mode::Both => Some(original_search(&sc.spec, sc.phi)?),
        Mode::Modified => None,
    };
    let modified = match mode {
        Mode::Modified | Mode::Both => {
            let opts = PipelineOptions {
                is_impl: IsImpl::Pea,
                refine_qm: refine,
                ..Default::default()
            };
            Some(modified_search(&sc.spec, sc.phi, epsilon, &opts)?)
        }
        Mode::Original => None,
    };
    let doc = CompareDoc { original, modified };
    let json = serde_json::to_string_pretty(&doc).map_err(diffsearch_core::Error::from)?;
    let csv = cost_table_csv(doc.original.as_ref(), doc.modified.as_ref());
    if stdout {
        match format {
            Format::Json => println!("{json}"),
            Format::Csv => print!("{csv}"),
        }
    }
    if let Some(dir) = out_dir {
        write_file(&out_path(dir, &sc.name, "compare.json"), &json)?;
        write_file(&out_path(dir, &sc.name, "costs.csv"), &csv)?;
    }
    Ok(())
}

/// Run every built-in scenario: analyze, curve, a small PEA sweep, and the
/// original-vs-modified comparison, all written under --out-dir.
fn cmd_batch(cli: &Cli) -> Result<()> {
    let dir = cli
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("out"));
    for mut sc in all_built_in() {
        if let Some(seed) = cli.seed {
            sc.spec.seed = seed;
        }
        cmd_analyze(&sc, cli.format, Some(&dir), false)?;
        cmd_curve(&sc, None, Some(&dir), false)?;
        let (_, eig) = build_diffusion(&sc.spec)?;
        let floor = (std::f64::consts::TAU / eig.theta_min())
            .log2()
            .ceil()
            .max(1.0) as u32;
        let bits: Vec<u32> = (floor..floor + 4).collect();
        cmd_pea(&sc, &bits, sc.epsilon, Some(&dir), false)?;
        cmd_compare(
            &sc,
            Mode::Both,
            sc.epsilon,
            true,
            cli.format,
            Some(&dir),
            false,
        )?;
        println!("{}: analyze, curve, pea, compare written", sc.name);
    }
    Ok(())
}
