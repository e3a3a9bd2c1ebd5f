use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracebola::integrators::IntegratorKind;
use fracebola::scenario::{self, CommandOutput, ScenarioConfig, ScenarioError, Status};

#[derive(Debug, Parser)]
#[command(
    name = "fracebola",
    version,
    about = "Fractional-order Ebola scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the model and write the trajectory.
    Simulate(Common),
    /// Reproduction number, equilibria, stability and sensitivity.
    Analyze(Common),
    /// Run the forward-backward sweep for the optimal controls.
    Control(Common),
    /// Compare the constant-control intervention strategies.
    Strategies(Common),
    /// Write a noisy synthetic dataset plus its ground truth.
    ExportDinn {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_points: Option<usize>,
        #[arg(long)]
        noise_level: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario JSON; repeat for a batch. Defaults apply when omitted.
    #[arg(long = "config", value_name = "PATH")]
    configs: Vec<PathBuf>,
    /// Output directory (batch runs write one subdirectory per config).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    integrator: Option<Engine>,
    /// Configs run concurrently in batch mode.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Engine {
    Rkf45,
    Abm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Outcome {
    Ok = 0,
    Io = 1,
    Config = 2,
    Numerical = 3,
    NotConverged = 4,
}

impl From<&ScenarioError> for Outcome {
    fn from(e: &ScenarioError) -> Self {
        match e {
            ScenarioError::Config(_) => Outcome::Config,
            ScenarioError::Model(_) | ScenarioError::Schema { .. } => Outcome::Numerical,
            ScenarioError::Io { .. } => Outcome::Io,
        }
    }
}

type Runner = fn(&ScenarioConfig) -> Result<CommandOutput, ScenarioError>;

struct Job {
    label: String,
    source: Option<PathBuf>,
    out: Option<PathBuf>,
}

struct Overrides {
    seed: Option<u64>,
    integrator: Option<Engine>,
    n_points: Option<usize>,
    noise_level: Option<f64>,
}

fn load(source: Option<&Path>, o: &Overrides) -> Result<ScenarioConfig, ScenarioError> {
    let mut cfg = match source {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ScenarioError::Config(format!("{}: {e}", path.display())))?;
            ScenarioConfig::from_json(&text)
                .map_err(|e| ScenarioError::Config(format!("{}: {e}", path.display())))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    if let Some(engine) = o.integrator {
        cfg.integrator = match engine {
            Engine::Rkf45 => IntegratorKind::Rkf45,
            Engine::Abm => IntegratorKind::Abm,
        };
    }
    if let Some(n) = o.n_points {
        cfg.export.n_points = n;
    }
    if let Some(level) = o.noise_level {
        cfg.export.noise_level = level;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_job(job: &Job, runner: Runner, o: &Overrides) -> Outcome {
    let result = load(job.source.as_deref(), o).and_then(|cfg| {
        let out = job
            .out
            .clone()
            .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        let output = runner(&cfg)?;
        let written = scenario::write_artifacts(&out, &output.artifacts)?;
        Ok((output.status, written))
    });
    match result {
        Ok((status, written)) => {
            for path in written {
                println!("{}: wrote {}", job.label, path.display());
            }
            if status == Status::NotConverged {
                eprintln!("{}: sweep did not converge within max_iter", job.label);
                Outcome::NotConverged
            } else {
                Outcome::Ok
            }
        }
        Err(e) => {
            eprintln!("{}: {e}", job.label);
            Outcome::from(&e)
        }
    }
}

fn plan(common: &Common) -> Vec<Job> {
    if common.configs.len() <= 1 {
        let source = common.configs.first().cloned();
        let label = source
            .as_ref()
            .map_or_else(|| "defaults".to_string(), |p| p.display().to_string());
        return vec![Job {
            label,
            source,
            out: common.out.clone(),
        }];
    }
    let base = common.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    common
        .configs
        .iter()
        .map(|path| {
            let stem = path
                .file_stem()
                .map_or_else(|| "config".into(), |s| s.to_string_lossy().into_owned());
            Job {
                label: path.display().to_string(),
                source: Some(path.clone()),
                out: Some(base.join(stem)),
            }
        })
        .collect()
}

fn run_batch(jobs: &[Job], workers: usize, runner: Runner, o: &Overrides) -> Outcome {
    let next = AtomicUsize::new(0);
    let worst = Mutex::new(Outcome::Ok);
    std::thread::scope(|s| {
        for _ in 0..workers.clamp(1, jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let outcome = run_job(job, runner, o);
                let mut w = worst.lock().unwrap();
                *w = (*w).max(outcome);
            });
        }
    });
    worst.into_inner().unwrap()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, runner, n_points, noise_level): (_, Runner, _, _) = match &cli.command {
        Command::Simulate(c) => (c, scenario::simulate, None, None),
        Command::Analyze(c) => (c, scenario::analyze, None, None),
        Command::Control(c) => (c, scenario::control, None, None),
        Command::Strategies(c) => (c, scenario::strategies, None, None),
        Command::ExportDinn {
            common,
            n_points,
            noise_level,
        } => (common, scenario::export_dinn, *n_points, *noise_level),
    };
    let overrides = Overrides {
        seed: common.seed,
        integrator: common.integrator,
        n_points,
        noise_level,
    };
    let jobs = plan(common);
    let outcome = run_batch(&jobs, common.jobs, runner, &overrides);
    ExitCode::from(outcome as u8)
}
