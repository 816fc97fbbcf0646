//! (ω, λ) grids and the per-ω optimum Ĉ(ω) = max_λ C(ω, λ), λ̂(ω) = argmax.

use log::warn;
use rayon::prelude::*;

use crate::algebra::{conserved_r, DensityMatrix};
use crate::entanglement::concurrence_of_stationary;
use crate::error::{Error, Result};
use crate::master::GeneratorMode;
use crate::trajectories::{ensemble_average, Controller, TrajectoryConfig};

/// Values closer than this are treated as tied when taking the argmax.
const ARGMAX_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ControlMode {
    NoFeedback,
    Markovian,
    Bayesian,
}

impl ControlMode {
    pub fn name(self) -> &'static str {
        match self {
            ControlMode::NoFeedback => "none",
            ControlMode::Markovian => "markovian",
            ControlMode::Bayesian => "bayesian",
        }
    }
}

/// Monte Carlo settings for Bayesian cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloParams {
    pub config: TrajectoryConfig,
    pub n_traj: usize,
    pub master_seed: u64,
    /// Controller comparison window in integrator steps.
    pub window: usize,
    /// Trailing fraction of the time window treated as stationary.
    pub tail_fraction: f64,
}

impl MonteCarloParams {
    pub fn new(config: TrajectoryConfig, n_traj: usize, master_seed: u64) -> Self {
        Self { config, n_traj, master_seed, window: 1, tail_fraction: 0.1 }
    }
}

/// One evaluated grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepCell {
    pub omega: f64,
    pub lambda: f64,
    pub concurrence: f64,
    /// Monte Carlo standard error (Bayesian cells only).
    pub standard_error: Option<f64>,
    /// Tail average of the conditioned states' mean concurrence (Bayesian
    /// cells only).
    pub mean_of_concurrence: Option<f64>,
    /// False when a Bayesian cell had not settled by `t_final`; such cells
    /// are left out of the argmax.
    pub stationary: bool,
}

/// Best λ at one ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimum {
    pub omega: f64,
    pub c_hat: f64,
    pub lambda_hat: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub mode: ControlMode,
    pub initial_state: DensityMatrix,
    pub omega_grid: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    /// Cells ordered by ω, then by λ.
    pub cells: Vec<SweepCell>,
    pub optima: Vec<Optimum>,
}

impl SweepResult {
    /// Concurrence values as an ω × λ grid (full-grid sweeps only).
    pub fn concurrence_grid(&self) -> Vec<Vec<f64>> {
        self.cells
            .chunks(self.lambda_grid.len().max(1))
            .map(|row| row.iter().map(|c| c.concurrence).collect())
            .collect()
    }

    /// Optimum with the largest Ĉ over all ω.
    pub fn global_optimum(&self) -> Option<Optimum> {
        self.optima
            .iter()
            .copied()
            .filter(|o| o.c_hat.is_finite())
            .fold(None, |best: Option<Optimum>, o| match best {
                Some(b) if b.c_hat >= o.c_hat => Some(b),
                _ => Some(o),
            })
    }
}

/// Inclusive grid `min, min + step, …` up to `max` (with a half-step guard
/// against roundoff).
pub fn grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(max >= min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidParameter(format!("grid {min}:{max}:{step}")));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| clean(min + k as f64 * step)).collect())
}

/// Rounds away accumulated binary noise so grid labels print cleanly.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn argmax(cells: &[SweepCell]) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for c in cells.iter().filter(|c| c.stationary && c.concurrence.is_finite()) {
        best = match best {
            None => Some((c.concurrence, c.lambda)),
            Some((bc, bl)) => {
                if c.concurrence > bc + ARGMAX_TIE_TOL
                    || ((c.concurrence - bc).abs() <= ARGMAX_TIE_TOL && c.lambda.abs() < bl.abs())
                {
                    Some((c.concurrence, c.lambda))
                } else {
                    Some((bc, bl))
                }
            }
        };
    }
    best
}

fn optimum_of_row(omega: f64, row: &[SweepCell]) -> Optimum {
    match argmax(row) {
        Some((c_hat, lambda_hat)) => Optimum { omega, c_hat, lambda_hat },
        None => Optimum { omega, c_hat: f64::NAN, lambda_hat: f64::NAN },
    }
}

/// Evaluates every (ω, λ) cell and the per-ω optimum.
///
/// Closed-form modes use the analytic stationary state with R taken from
/// `initial_state`; Bayesian cells run an ensemble each and require `mc`.
/// Without feedback λ plays no role and callers usually pass `[0.0]`.
pub fn sweep(
    mode: ControlMode,
    initial_state: &DensityMatrix,
    omega_grid: &[f64],
    lambda_grid: &[f64],
    mc: Option<&MonteCarloParams>,
) -> Result<SweepResult> {
    if omega_grid.is_empty() || lambda_grid.is_empty() {
        return Err(Error::InvalidParameter("empty ω or λ grid".into()));
    }
    let cells = match mode {
        ControlMode::NoFeedback | ControlMode::Markovian => {
            let gmode = if mode == ControlMode::Markovian {
                GeneratorMode::Markovian
            } else {
                GeneratorMode::NoFeedback
            };
            closed_form_cells(gmode, initial_state, omega_grid, lambda_grid)?
        }
        ControlMode::Bayesian => {
            let mc = mc.ok_or_else(|| {
                Error::InvalidParameter("Bayesian sweep needs Monte Carlo parameters".into())
            })?;
            let mut cells = Vec::with_capacity(omega_grid.len() * lambda_grid.len());
            for &w in omega_grid {
                for &l in lambda_grid {
                    cells.push(bayesian_cell(initial_state, w, l, mc)?);
                }
            }
            cells
        }
    };
    let optima = omega_grid
        .iter()
        .zip(cells.chunks(lambda_grid.len()))
        .map(|(&w, row)| optimum_of_row(w, row))
        .collect();
    Ok(SweepResult {
        mode,
        initial_state: *initial_state,
        omega_grid: omega_grid.to_vec(),
        lambda_grid: lambda_grid.to_vec(),
        cells,
        optima,
    })
}

fn closed_form_cells(
    mode: GeneratorMode,
    initial_state: &DensityMatrix,
    omega_grid: &[f64],
    lambda_grid: &[f64],
) -> Result<Vec<SweepCell>> {
    let r = conserved_r(initial_state).clamp(0.0, 2.0);
    let rows: Vec<Vec<SweepCell>> = omega_grid
        .par_iter()
        .map(|&w| {
            lambda_grid
                .iter()
                .map(|&l| {
                    let lambda = if mode == GeneratorMode::NoFeedback { 0.0 } else { l };
                    Ok(SweepCell {
                        omega: w,
                        lambda: l,
                        concurrence: concurrence_of_stationary(w, lambda, mode, r)?,
                        standard_error: None,
                        mean_of_concurrence: None,
                        stationary: true,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Stationary mean-state concurrence of one Bayesian cell.
///
/// The value is the average of C(ρ̄(t)) over the trailing `tail_fraction` of
/// the time window. The cell counts as stationary when the least-squares
/// drift of C(ρ̄) across that tail is below the cell's standard error.
pub fn bayesian_cell(
    initial_state: &DensityMatrix,
    omega: f64,
    lambda: f64,
    mc: &MonteCarloParams,
) -> Result<SweepCell> {
    let ctrl = Controller::Bayesian { lambda, window: mc.window };
    let ens = ensemble_average(initial_state, omega, ctrl, &mc.config, mc.n_traj, mc.master_seed)?;
    let (value, se, drift) = tail_statistics(
        &ens.times,
        &ens.concurrence_of_mean,
        &ens.standard_error,
        mc.tail_fraction,
    );
    let (mean_of_c, _, _) = tail_statistics(
        &ens.times,
        &ens.mean_of_concurrence,
        &ens.concurrence_standard_error,
        mc.tail_fraction,
    );
    let stationary = drift.abs() < se;
    if !stationary {
        warn!(
            "Bayesian cell (ω = {omega}, λ = {lambda}) not stationary by t = {}: \
             tail drift {drift:.3e} vs standard error {se:.3e}",
            mc.config.t_final
        );
    }
    Ok(SweepCell {
        omega,
        lambda,
        concurrence: value,
        standard_error: Some(se),
        mean_of_concurrence: Some(mean_of_c),
        stationary,
    })
}

/// Mean, mean standard error, and fitted change over the tail of a series.
pub fn tail_statistics(times: &[f64], values: &[f64], errors: &[f64], fraction: f64) -> (f64, f64, f64) {
    let n = values.len();
    let k = ((n as f64 * fraction).ceil() as usize).clamp(1, n);
    let t = &times[n - k..];
    let v = &values[n - k..];
    let e = &errors[n - k..];
    let mean = v.iter().sum::<f64>() / k as f64;
    let se = e.iter().sum::<f64>() / k as f64;
    if k < 2 {
        return (mean, se, 0.0);
    }
    let t_mean = t.iter().sum::<f64>() / k as f64;
    let sxx: f64 = t.iter().map(|x| (x - t_mean).powi(2)).sum();
    let sxy: f64 = t.iter().zip(v).map(|(x, y)| (x - t_mean) * (y - mean)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (mean, se, slope * (t[k - 1] - t[0]))
}

/// Two-stage Bayesian search: the coarse λ grid first, then a fine grid of
/// step `fine_step` spanning one coarse step either side of each row's
/// coarse argmax. Cells of both stages are kept, ordered by ω then λ.
pub fn bayesian_refined_sweep(
    initial_state: &DensityMatrix,
    omega_grid: &[f64],
    coarse_lambda: &[f64],
    fine_step: f64,
    mc: &MonteCarloParams,
) -> Result<SweepResult> {
    let coarse = sweep(ControlMode::Bayesian, initial_state, omega_grid, coarse_lambda, Some(mc))?;
    if coarse_lambda.len() < 2 {
        return Ok(coarse);
    }
    let coarse_step = (coarse_lambda[1] - coarse_lambda[0]).abs();
    let (lo, hi) = coarse_lambda
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));

    let mut cells = Vec::new();
    let mut optima = Vec::new();
    for (row, &w) in coarse.cells.chunks(coarse_lambda.len()).zip(omega_grid) {
        let mut row_cells = row.to_vec();
        let center = argmax(row).map(|(_, l)| l).unwrap_or(0.0);
        let fine = grid((center - coarse_step).max(lo), (center + coarse_step).min(hi), fine_step)?;
        for l in fine {
            if row_cells.iter().any(|c| (c.lambda - l).abs() < 1e-9) {
                continue;
            }
            row_cells.push(bayesian_cell(initial_state, w, l, mc)?);
        }
        row_cells.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        optima.push(optimum_of_row(w, &row_cells));
        cells.extend(row_cells);
    }
    Ok(SweepResult { cells, optima, ..coarse })
}
