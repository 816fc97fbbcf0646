//! `qfb`: steady states, trajectory ensembles and (ω, λ) sweeps as CSV.

mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use log::info;

use qfb_core::algebra::conserved_r;
use qfb_core::entanglement::concurrence;
use qfb_core::master::{build_generator, steady_state, GeneratorMode};
use qfb_core::sweep::{bayesian_refined_sweep, sweep, ControlMode, MonteCarloParams, SweepResult};
use qfb_core::trajectories::{ensemble_average, Controller, TrajectoryConfig};

use config::{ConfigFile, Settings};
use output::{num, sibling, write_csv, write_manifest};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid setting `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("numerical failure: {0}")]
    Numerical(#[from] qfb_core::Error),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

#[derive(Parser, Debug)]
#[command(name = "qfb", version, about = "Two-qubit stationary entanglement under feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stationary state reached from the initial state, per (ω, λ).
    SteadyState(RunArgs),
    /// Ensemble of conditioned trajectories at one (ω, λ).
    Trajectory(RunArgs),
    /// Stationary concurrence over an (ω, λ) grid and its per-ω optimum.
    Sweep(RunArgs),
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// none, markovian or bayesian.
    #[arg(long, allow_hyphen_values = true)]
    mode: Option<String>,
    /// 00, 01, 10, 11, singlet, mixed, or 16 comma-separated complex entries.
    #[arg(long, allow_hyphen_values = true)]
    initial: Option<String>,
    /// Drive strength: a value or min:max:step.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Feedback strength: a value or min:max:step.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_final: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n_traj: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Record every `stride` integrator steps.
    #[arg(long, allow_hyphen_values = true)]
    stride: Option<String>,
    /// positive-map or euler-maruyama.
    #[arg(long, allow_hyphen_values = true)]
    scheme: Option<String>,
    /// Bayesian comparison window in integrator steps.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Bayesian λ refinement step around the coarse optimum (0 disables).
    #[arg(long, allow_hyphen_values = true)]
    fine_step: Option<String>,
    /// Results CSV; the manifest and any second table go next to it.
    #[arg(long, allow_hyphen_values = true)]
    output: Option<String>,
    /// Key-value config file; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "QFB_THREADS", allow_hyphen_values = true)]
    threads: Option<String>,
}

impl RunArgs {
    fn flags(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("mode", &self.mode),
            ("initial", &self.initial),
            ("omega", &self.omega),
            ("lambda", &self.lambda),
            ("dt", &self.dt),
            ("t_final", &self.t_final),
            ("n_traj", &self.n_traj),
            ("seed", &self.seed),
            ("stride", &self.stride),
            ("scheme", &self.scheme),
            ("window", &self.window),
            ("fine_step", &self.fine_step),
            ("output", &self.output),
            ("threads", &self.threads),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

fn resolve(command: &str, args: &RunArgs) -> Result<Settings, CliError> {
    let file = match &args.config {
        Some(path) => ConfigFile::read(path)?.for_command(command),
        None => BTreeMap::new(),
    };
    let mut s = Settings::merge(command, file, args.flags())?;
    s.set_default("mode", "none");
    s.set_default("initial", "00");
    s.set_default("output", format!("{command}.csv"));
    let bayesian = s.get("mode") == Some("bayesian");
    match command {
        "steady-state" => {
            s.set_default("omega", "0.4");
            s.set_default("lambda", "0");
        }
        "trajectory" => {
            s.set_default("omega", "0.4");
            s.set_default("lambda", "0");
            s.set_default("t_final", "20");
        }
        _ => {
            s.set_default("omega", "0:5:0.05");
            s.set_default("lambda", if bayesian { "-2:2:0.2" } else { "-2:2:0.05" });
            s.set_default("t_final", "5");
            s.set_default("fine_step", "0.05");
        }
    }
    if command != "steady-state" {
        s.set_default("dt", "1e-4");
        s.set_default("n_traj", "1000");
        s.set_default("seed", "0");
        s.set_default("stride", "100");
        s.set_default("scheme", "positive-map");
        s.set_default("window", "1");
    }
    Ok(s)
}

fn generator_mode(s: &Settings) -> Result<GeneratorMode, CliError> {
    match s.mode()? {
        ControlMode::NoFeedback => Ok(GeneratorMode::NoFeedback),
        ControlMode::Markovian => Ok(GeneratorMode::Markovian),
        ControlMode::Bayesian => Err(CliError::Config {
            key: "mode".into(),
            message: "bayesian control has no master equation; use `trajectory` or `sweep`".into(),
        }),
    }
}

fn trajectory_config(s: &Settings) -> Result<TrajectoryConfig, CliError> {
    let dt = s.positive_f64("dt")?;
    let t_final = s.positive_f64("t_final")?;
    if t_final < dt {
        return Err(CliError::Config { key: "t_final".into(), message: format!("must be ≥ dt = {dt}") });
    }
    Ok(TrajectoryConfig::new(dt, t_final).with_stride(s.positive_usize("stride")?).with_scheme(s.scheme()?))
}

fn run_steady_state(s: &Settings) -> Result<Vec<PathBuf>, CliError> {
    let mode = generator_mode(s)?;
    let rho0 = s.initial()?;
    let omegas = s.values_list("omega")?;
    let lambdas = match mode {
        GeneratorMode::NoFeedback => vec![0.0],
        GeneratorMode::Markovian => s.values_list("lambda")?,
    };
    let mut header: Vec<String> = ["omega", "lambda", "R", "C"].map(String::from).to_vec();
    for i in 0..4 {
        for j in 0..4 {
            header.push(format!("rho_{i}{j}_re"));
            header.push(format!("rho_{i}{j}_im"));
        }
    }
    let r = conserved_r(&rho0);
    let mut rows = Vec::new();
    for &w in &omegas {
        for &l in &lambdas {
            let st = steady_state(&rho0, &build_generator(w, l, mode)?)?;
            let mut row = vec![num(w), num(l), num(r), num(concurrence(&st.rho_inf).value)];
            for z in st.rho_inf.matrix().transpose().iter() {
                row.push(num(z.re));
                row.push(num(z.im));
            }
            rows.push(row);
        }
    }
    let path = PathBuf::from(s.get("output").expect("defaulted"));
    write_csv(&path, &header, &rows)?;
    Ok(vec![path])
}

fn run_trajectory(s: &Settings) -> Result<Vec<PathBuf>, CliError> {
    let omega = s.scalar("omega")?;
    let lambda = s.scalar("lambda")?;
    let controller = match s.mode()? {
        ControlMode::NoFeedback => Controller::None,
        ControlMode::Markovian => Controller::Markovian { lambda },
        ControlMode::Bayesian => Controller::Bayesian { lambda, window: s.positive_usize("window")? },
    };
    let cfg = trajectory_config(s)?;
    let ens = ensemble_average(&s.initial()?, omega, controller, &cfg, s.positive_usize("n_traj")?, s.u64("seed")?)?;
    let header = ["t", "C_mean_state", "C_mean_of_C", "stderr", "I_mean"].map(String::from);
    let rows: Vec<Vec<String>> = (0..ens.times.len())
        .map(|k| {
            vec![
                num(ens.times[k]),
                num(ens.concurrence_of_mean[k]),
                num(ens.mean_of_concurrence[k]),
                num(ens.standard_error[k]),
                num(ens.mean_current[k]),
            ]
        })
        .collect();
    let path = PathBuf::from(s.get("output").expect("defaulted"));
    write_csv(&path, &header, &rows)?;
    Ok(vec![path])
}

fn run_sweep(s: &Settings) -> Result<Vec<PathBuf>, CliError> {
    let mode = s.mode()?;
    let rho0 = s.initial()?;
    let omegas = s.values_list("omega")?;
    let res: SweepResult = match mode {
        ControlMode::NoFeedback => sweep(mode, &rho0, &omegas, &[0.0], None)?,
        ControlMode::Markovian => sweep(mode, &rho0, &omegas, &s.values_list("lambda")?, None)?,
        ControlMode::Bayesian => {
            let mut mc = MonteCarloParams::new(trajectory_config(s)?, s.positive_usize("n_traj")?, s.u64("seed")?);
            mc.window = s.positive_usize("window")?;
            let lambdas = s.values_list("lambda")?;
            let fine = s.f64("fine_step")?;
            if fine < 0.0 {
                return Err(CliError::Config { key: "fine_step".into(), message: "must be ≥ 0".into() });
            }
            if fine > 0.0 {
                bayesian_refined_sweep(&rho0, &omegas, &lambdas, fine, &mc)?
            } else {
                sweep(mode, &rho0, &omegas, &lambdas, Some(&mc))?
            }
        }
    };
    let header = ["omega", "lambda", "C", "stderr"].map(String::from);
    let rows: Vec<Vec<String>> = res
        .cells
        .iter()
        .map(|c| {
            vec![
                num(c.omega),
                num(c.lambda),
                num(c.concurrence),
                c.standard_error.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    let path = PathBuf::from(s.get("output").expect("defaulted"));
    write_csv(&path, &header, &rows)?;

    let opt_path = sibling(&path, "_optimum.csv");
    let header = ["omega", "c_hat", "lambda_hat"].map(String::from);
    let rows: Vec<Vec<String>> =
        res.optima.iter().map(|o| vec![num(o.omega), num(o.c_hat), num(o.lambda_hat)]).collect();
    write_csv(&opt_path, &header, &rows)?;
    Ok(vec![path, opt_path])
}

fn run(command: &str, args: &RunArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let settings = resolve(command, args)?;
    if settings.get("threads").is_some() {
        let n = settings.positive_usize("threads")?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config { key: "threads".into(), message: e.to_string() })?;
    }
    info!("{command}: {:?}", settings.values());
    let outputs = match command {
        "steady-state" => run_steady_state(&settings)?,
        "trajectory" => run_trajectory(&settings)?,
        _ => run_sweep(&settings)?,
    };
    let main = &outputs[0];
    let manifest = sibling(main, ".manifest");
    write_manifest(&manifest, &settings, &outputs, start.elapsed().as_secs_f64())?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Command::SteadyState(a) => ("steady-state", a),
        Command::Trajectory(a) => ("trajectory", a),
        Command::Sweep(a) => ("sweep", a),
    };
    match run(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qfb {command}: {e}");
            match e {
                CliError::Config { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
