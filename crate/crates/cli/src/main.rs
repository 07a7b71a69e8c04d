//! `ergfam`: batch front end for exact ergodic-family experiments.
//!
//! Exit status: 0 on success, 1 when a check ran and failed (identity or
//! invariance), 2 on configuration, input or resource errors.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use config::{ExperimentConfig, FamilySource};
use ergfam::boundary::ratio_set_witness;
use ergfam::engine::{
    check_identities, convergence_experiment, maximal_function, pushforward_family, rows_to_csv, sphere_convergence,
    MaximalReport, PushforwardSpec,
};
use ergfam::maharam::maharam_sweep;
use ergfam::rational;
use ergfam::{GroupMeasure, InstanceKind};

#[derive(Parser)]
#[command(
    name = "ergfam",
    version,
    about = "Exact experiments with pointwise ergodic families on free groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent); written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print raw rationals instead of floats in CSV output.
    #[arg(long, global = true)]
    exact: bool,
    /// Ceiling on enumerated items per command.
    #[arg(long, global = true)]
    cap: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Compare each push-forward family with its closed form.
    Identity,
    /// Convergence table of π(ζ_i)f against E[f | target].
    Converge,
    /// Maximal-inequality ratios over one action or a corpus.
    Maximal,
    /// Bounded search for ratio-set witnesses.
    Witness,
    /// Maharam-extension invariance sweep.
    Invariance,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Identity => "identity",
            Command::Converge => "converge",
            Command::Maximal => "maximal",
            Command::Witness => "witness",
            Command::Invariance => "invariance",
        }
    }
}

/// Output and whether the command's checks held.
struct Outcome {
    body: String,
    passed: bool,
    note: Option<String>,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

fn identity(cfg: &ExperimentConfig, cap: Option<u64>) -> Result<Outcome> {
    let group = cfg.group(cap)?;
    let kinds = cfg.instances.clone().unwrap_or_else(|| {
        vec![
            InstanceKind::Tail,
            InstanceKind::RandomWalk,
            InstanceKind::DoubleBoundaryShift,
        ]
    });
    let instances = kinds
        .into_iter()
        .map(|k| cfg.relation(group, k))
        .collect::<Result<Vec<_>>>()?;
    let report = check_identities(&instances, cfg.truncation)?;
    let note = report.first_failure.as_ref().map(|d| {
        format!(
            "identity fails: instance {} n={} γ={} lhs={} rhs={}",
            d.instance,
            d.n,
            d.element,
            rational::fmt(&d.lhs),
            rational::fmt(&d.rhs)
        )
    });
    Ok(Outcome {
        body: json(&report),
        passed: report.passed,
        note,
    })
}

fn family(cfg: &ExperimentConfig, cap: Option<u64>) -> Result<Vec<GroupMeasure>> {
    match cfg.family {
        FamilySource::Identity => Ok(vec![GroupMeasure::identity(); cfg.truncation]),
        FamilySource::Pushforward => {
            let group = cfg.group(cap)?;
            let spec = PushforwardSpec {
                system: cfg.relation(group, cfg.instance)?,
                truncation: cfg.truncation,
                density: cfg.density()?,
                k: cfg.k_group(),
            };
            Ok(pushforward_family(&spec)?)
        }
        other => anyhow::bail!("family {other:?} is only available for converge"),
    }
}

fn converge(cfg: &ExperimentConfig, cap: Option<u64>, exact: bool) -> Result<Outcome> {
    let act = cfg.load_action()?;
    act.check_rank(cfg.r)?;
    let f = cfg.observable.build(&act)?;
    let rows = match cfg.family.sphere_family() {
        Some(kind) => sphere_convergence(kind, cfg.truncation, &act, &f, cfg.target)?,
        None => convergence_experiment(&family(cfg, cap)?, &act, &f, cfg.target)?,
    };
    Ok(Outcome {
        body: rows_to_csv(&rows, exact),
        passed: true,
        note: None,
    })
}

#[derive(Serialize)]
struct MaximalEntry {
    action: String,
    points: usize,
    #[serde(flatten)]
    report: MaximalReport,
}

#[derive(Serialize)]
struct MaximalSummary {
    family_size: usize,
    entries: Vec<MaximalEntry>,
    /// Largest weak (1,1) ratio over the corpus.
    #[serde(with = "rational::serde_q")]
    max_weak_ratio: ergfam::Q,
}

fn maximal(cfg: &ExperimentConfig, cap: Option<u64>) -> Result<Outcome> {
    let fam = family(cfg, cap)?;
    let mut entries = Vec::new();
    for (name, act) in cfg.actions()? {
        act.check_rank(cfg.r)?;
        let f = cfg.observable.build(&act)?;
        let (_, report) = maximal_function(&fam, &f, &act)?;
        entries.push(MaximalEntry {
            action: name,
            points: act.len(),
            report,
        });
    }
    let max_weak_ratio = entries
        .iter()
        .map(|e| e.report.weak_ratio.clone())
        .max()
        .unwrap_or_else(|| rational::q(0, 1));
    let summary = MaximalSummary {
        family_size: fam.len(),
        entries,
        max_weak_ratio,
    };
    Ok(Outcome {
        body: json(&summary),
        passed: true,
        note: None,
    })
}

#[derive(Serialize)]
struct WitnessEntry {
    #[serde(with = "rational::serde_q")]
    target: ergfam::Q,
    found: bool,
    witness: Option<ergfam::boundary::Witness>,
}

fn witness(cfg: &ExperimentConfig, cap: Option<u64>) -> Result<Outcome> {
    let spec = cfg.witness.as_ref().context("config needs a \"witness\" section")?;
    let group = cfg.group(cap)?;
    let a = spec.cylinder()?;
    let mut entries = Vec::new();
    for target in spec.targets()? {
        let found = ratio_set_witness(&group, &a, &target, spec.bounds)?;
        entries.push(WitnessEntry {
            target,
            found: found.is_some(),
            witness: found,
        });
    }
    Ok(Outcome {
        body: json(&entries),
        passed: true,
        note: None,
    })
}

fn invariance(cfg: &ExperimentConfig, cap: Option<u64>) -> Result<Outcome> {
    let group = cfg.group(cap)?;
    let inv = &cfg.invariance;
    let report = maharam_sweep(&group, inv.max_len, inv.depth, inv.t_min..=inv.t_max)?;
    #[derive(Serialize)]
    struct Summary<'a> {
        passed: bool,
        checked: usize,
        failures: &'a [ergfam::maharam::InvarianceReport],
    }
    let passed = report.passed();
    let note = report
        .failures
        .first()
        .map(|f| format!("invariance fails for {} on {} at t={}", f.element, f.cylinder, f.t));
    let body = json(&Summary {
        passed,
        checked: report.checked,
        failures: &report.failures,
    });
    Ok(Outcome { body, passed, note })
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomically(path: &Path, body: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(body.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let path = cli.config.as_ref().context("--config is required")?;
    let cfg = ExperimentConfig::load(path)?;
    cfg.check_command(cli.command.name())?;
    let outcome = match cli.command {
        Command::Identity => identity(&cfg, cli.cap)?,
        Command::Converge => converge(&cfg, cli.cap, cli.exact)?,
        Command::Maximal => maximal(&cfg, cli.cap)?,
        Command::Witness => witness(&cfg, cli.cap)?,
        Command::Invariance => invariance(&cfg, cli.cap)?,
    };
    match &cli.out {
        Some(p) => write_atomically(p, &outcome.body)?,
        None => std::io::stdout().write_all(outcome.body.as_bytes())?,
    }
    if let Some(note) = outcome.note {
        eprintln!("{note}");
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
