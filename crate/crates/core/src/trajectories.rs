//! Stochastic master equation for homodyne detection of Σ.
//!
//! A conditioned state evolves as
//!
//! ```text
//! dρ = {−i(ω + f)[Σ_x, ρ] + 𝒟[Σ]ρ} dt + ℋ[Σ]ρ dW,    I dt = Tr(Σρ + ρΣ†) dt + dW
//! ```
//!
//! with f the controller output (0 without control). Two first-order steps
//! are available, both followed by Hermitian symmetrization and exact trace
//! renormalization:
//!
//! * [`StepScheme::PositiveMap`] (default) applies the single Kraus operator
//!   `M = I − (iH + ½L†L)dt + L dy + ½L²(dy² − dt)` with `dy = I dt`. Its
//!   Itô expansion is the linear SME, so after normalization it integrates
//!   the same equation, and `MρM†` is positive by construction.
//! * [`StepScheme::EulerMaruyama`] adds `drift·dt + ℋ[L]ρ·dW` literally. Its
//!   positivity error grows like √dt per unit time on nearly pure states,
//!   so long runs at dt = 10⁻⁴ routinely cross the instability threshold.
//!
//! Ensembles give every trajectory its own ChaCha stream keyed by
//! (master seed, trajectory index) and reduce in index order, so results
//! are bit-identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::algebra::{commutator, dissipator, h_superoperator, operators, DensityMatrix};
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::feedback::BayesianController;
use crate::linalg::{Mat4, C64};

/// Minimum eigenvalue below which a stochastic step is rejected.
pub const INSTABILITY_TOL: f64 = 1e-4;

pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_STRIDE: usize = 100;
pub const DEFAULT_N_TRAJ: usize = 1000;

/// Trajectories per reduction batch; bounds memory independently of n_traj.
const ENSEMBLE_BATCH: usize = 64;

/// Gaussian increment with mean 0 and variance dt.
pub fn wiener_increment<R: Rng + ?Sized>(rng: &mut R, dt: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    z * dt.sqrt()
}

/// Random stream for trajectory `index` of an ensemble seeded with `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Signal part of the homodyne current, Tr(Σρ + ρΣ†).
pub fn homodyne_signal(rho: &Mat4) -> f64 {
    // Tr(Σρ + ρΣ†) = 2 Re Tr(Σρ)
    let s = &operators().big_sigma;
    2.0 * (s * rho).trace().re
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StepScheme {
    #[default]
    PositiveMap,
    EulerMaruyama,
}

impl StepScheme {
    pub fn name(self) -> &'static str {
        match self {
            StepScheme::PositiveMap => "positive-map",
            StepScheme::EulerMaruyama => "euler-maruyama",
        }
    }
}

/// Hamiltonian and measured operator of one step: dρ = −i[H, ρ]dt + 𝒟[L]ρ dt + ℋ[L]ρ dW.
#[derive(Clone, Copy, Debug)]
struct Generator {
    h: Mat4,
    l: Mat4,
    /// I − (iH + ½L†L)dt.
    k0: Mat4,
    /// ½L².
    half_l2: Mat4,
}

impl Generator {
    fn new(h: Mat4, l: Mat4, dt: f64) -> Self {
        let k0 = Mat4::identity()
            - (h * C64::new(0.0, 1.0) + l.adjoint() * l * C64::new(0.5, 0.0)) * C64::new(dt, 0.0);
        Self { h, l, k0, half_l2: l * l * C64::new(0.5, 0.0) }
    }

    /// Drive (ω + f)Σ_x, measured Σ.
    fn driven(drive: f64, dt: f64) -> Self {
        let ops = operators();
        Self::new(ops.big_sigma_x * C64::new(drive, 0.0), ops.big_sigma, dt)
    }

    /// Current feedback λIΣ_x folded into H and L; the jump operator becomes
    /// Σ − iλΣ_x and the Hamiltonian picks up (λ/2)(Σ†Σ_x + Σ_xΣ).
    fn markovian(omega: f64, lambda: f64, dt: f64) -> Self {
        let ops = operators();
        let sx = &ops.big_sigma_x;
        let h = sx * C64::new(omega, 0.0)
            + (ops.big_sigma_dag * sx + sx * ops.big_sigma) * C64::new(0.5 * lambda, 0.0);
        Self::new(h, ops.big_sigma - sx * C64::new(0.0, lambda), dt)
    }

    fn step(&self, rho: &Mat4, dt: f64, dw: f64, scheme: StepScheme) -> Mat4 {
        let l = &self.l;
        let m = match scheme {
            StepScheme::EulerMaruyama => {
                let drift = commutator(&self.h, rho) * C64::new(0.0, -1.0) + dissipator(l, rho);
                rho + drift * C64::new(dt, 0.0) + h_superoperator(l, rho) * C64::new(dw, 0.0)
            }
            StepScheme::PositiveMap => {
                // Tr(Lρ + ρL†) = 2 Re Tr(Lρ)
                let lr = l * rho;
                let dy = 2.0 * lr.trace().re * dt + dw;
                let k = self.k0 + l * C64::new(dy, 0.0) + self.half_l2 * C64::new(dy * dy - dt, 0.0);
                k * rho * k.adjoint()
            }
        };
        let m = (m + m.adjoint()) * C64::new(0.5, 0.0);
        let tr = m.trace().re;
        m / C64::new(tr, 0.0)
    }
}

fn check_positive(rho: &DensityMatrix, step: usize) -> Result<()> {
    let min = rho.min_eigenvalue();
    if !(min >= -INSTABILITY_TOL) {
        return Err(Error::StepInstability { step, min_eigenvalue: min });
    }
    Ok(())
}

fn checked_step(
    gen: &Generator,
    rho: &DensityMatrix,
    dt: f64,
    dw: f64,
    scheme: StepScheme,
) -> Result<(DensityMatrix, f64)> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt = {dt}")));
    }
    let r = rho.matrix();
    let next = DensityMatrix::from_matrix_unchecked(gen.step(r, dt, dw, scheme));
    check_positive(&next, 0)?;
    Ok((next, homodyne_signal(r) + dw / dt))
}

/// One step of the controlled SME with the default scheme.
///
/// Returns the updated conditioned state and the current sample
/// `I = Tr(Σρ + ρΣ†) + dW/dt` evaluated on the incoming state.
pub fn sme_step(rho: &DensityMatrix, omega: f64, f: f64, dt: f64, dw: f64) -> Result<(DensityMatrix, f64)> {
    sme_step_with(rho, omega, f, dt, dw, StepScheme::default())
}

pub fn sme_step_with(
    rho: &DensityMatrix,
    omega: f64,
    f: f64,
    dt: f64,
    dw: f64,
    scheme: StepScheme,
) -> Result<(DensityMatrix, f64)> {
    checked_step(&Generator::driven(omega + f, dt), rho, dt, dw, scheme)
}

/// One step of the Markovian-feedback SME (see
/// [`markovian_trajectory_drift`](crate::feedback::markovian_trajectory_drift)).
pub fn markovian_sme_step(
    rho: &DensityMatrix,
    omega: f64,
    lambda: f64,
    dt: f64,
    dw: f64,
    scheme: StepScheme,
) -> Result<(DensityMatrix, f64)> {
    checked_step(&Generator::markovian(omega, lambda, dt), rho, dt, dw, scheme)
}

/// Control applied along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Controller {
    /// f ≡ 0.
    None,
    /// Sign-of-concurrence-change drive ±λ, comparing over `window` steps.
    Bayesian { lambda: f64, window: usize },
    /// Current feedback λ I(t) Σ_x at the trajectory level.
    Markovian { lambda: f64 },
}

impl Controller {
    pub fn bayesian(lambda: f64) -> Self {
        Controller::Bayesian { lambda, window: 1 }
    }
}

/// Time grid and storage options for a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryConfig {
    pub dt: f64,
    pub t_final: f64,
    /// States, current and controller output are stored every `stride` steps.
    pub stride: usize,
    /// Store the current and controller output at every step instead.
    pub full_rate_signals: bool,
    pub scheme: StepScheme,
}

impl TrajectoryConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self { dt, t_final, stride: DEFAULT_STRIDE, full_rate_signals: false, scheme: StepScheme::default() }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_scheme(mut self, scheme: StepScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !(self.t_final >= self.dt) || self.stride == 0 {
            return Err(Error::InvalidParameter(format!(
                "need dt > 0, t_final ≥ dt, stride ≥ 1 (dt = {}, t_final = {}, stride = {})",
                self.dt, self.t_final, self.stride
            )));
        }
        Ok(())
    }

    /// Step indices at which states are recorded: 0, stride, 2·stride, …
    pub fn record_steps(&self) -> impl Iterator<Item = usize> {
        let n = self.n_steps();
        let s = self.stride;
        (0..=n).filter(move |k| k % s == 0)
    }
}

/// One conditioned trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    /// Times of the stored states.
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Concurrence of each stored state.
    pub concurrence: Vec<f64>,
    /// Times of the stored current / controller samples.
    pub signal_times: Vec<f64>,
    /// Homodyne current samples I(t).
    pub current: Vec<f64>,
    /// Controller output f(t) (λ I(t) under Markovian feedback).
    pub controller_output: Vec<f64>,
    pub seed: u64,
    pub stream: u64,
    pub dt: f64,
}

/// Integrates one trajectory with its own random stream.
pub fn simulate_trajectory(
    rho0: &DensityMatrix,
    omega: f64,
    controller: Controller,
    config: &TrajectoryConfig,
    seed: u64,
) -> Result<TrajectoryRecord> {
    simulate_stream(rho0, omega, controller, config, seed, 0)
}

fn simulate_stream(
    rho0: &DensityMatrix,
    omega: f64,
    controller: Controller,
    config: &TrajectoryConfig,
    seed: u64,
    stream: u64,
) -> Result<TrajectoryRecord> {
    config.validate()?;
    let dt = config.dt;
    let n_steps = config.n_steps();
    let n_records = n_steps / config.stride + 1;
    let n_signals = if config.full_rate_signals { n_steps + 1 } else { n_records };
    let mut rec = TrajectoryRecord {
        times: Vec::with_capacity(n_records),
        states: Vec::with_capacity(n_records),
        concurrence: Vec::with_capacity(n_records),
        signal_times: Vec::with_capacity(n_signals),
        current: Vec::with_capacity(n_signals),
        controller_output: Vec::with_capacity(n_signals),
        seed,
        stream,
        dt,
    };
    let mut rng = trajectory_rng(seed, stream);
    let mut bayes = match controller {
        Controller::Bayesian { lambda, window } => Some(BayesianController::new(lambda, window)?),
        _ => None,
    };

    // the drive only takes the values ω, ω ± λ, so all generators are built once
    let (gen_plain, gen_plus, gen_minus) = match controller {
        Controller::None => (Generator::driven(omega, dt), None, None),
        Controller::Bayesian { lambda, .. } => (
            Generator::driven(omega, dt),
            Some(Generator::driven(omega + lambda, dt)),
            Some(Generator::driven(omega - lambda, dt)),
        ),
        Controller::Markovian { lambda } => (Generator::markovian(omega, lambda, dt), None, None),
    };

    let mut rho = *rho0.matrix();
    for step in 0..=n_steps {
        let record_state = step % config.stride == 0;
        let state = DensityMatrix::from_matrix_unchecked(rho);
        let c_now = if record_state || bayes.is_some() {
            Some(concurrence(&state).value)
        } else {
            None
        };
        if record_state {
            if step > 0 {
                check_positive(&state, step)?;
            }
            rec.times.push(step as f64 * dt);
            rec.states.push(state);
            rec.concurrence.push(c_now.expect("computed for recorded steps"));
        }
        // the last sample pairs the final state with one more increment so
        // signals line up with stored states
        let dw = wiener_increment(&mut rng, dt);
        let current = homodyne_signal(&rho) + dw / dt;
        let (gen, f) = match controller {
            Controller::None => (&gen_plain, 0.0),
            Controller::Bayesian { .. } => {
                let ctrl = bayes.as_mut().expect("bayesian state");
                let f = ctrl.update(c_now.expect("computed under bayesian control"));
                let gen = if ctrl.last_sign() > 0.0 { &gen_plus } else { &gen_minus };
                (gen.as_ref().expect("bayesian generators"), f)
            }
            Controller::Markovian { lambda } => (&gen_plain, lambda * current),
        };
        if config.full_rate_signals || record_state {
            rec.signal_times.push(step as f64 * dt);
            rec.current.push(current);
            rec.controller_output.push(f);
        }
        if step == n_steps {
            break;
        }
        rho = gen.step(&rho, dt, dw, config.scheme);
        if !rho[(0, 0)].re.is_finite() {
            return Err(Error::StepInstability { step: step + 1, min_eigenvalue: f64::NAN });
        }
    }
    Ok(rec)
}

/// Entrywise ensemble mean of conditioned trajectories.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    pub mean_state: Vec<DensityMatrix>,
    /// C of the mean (unconditional) state.
    pub concurrence_of_mean: Vec<f64>,
    /// Mean of the conditioned states' concurrences.
    pub mean_of_concurrence: Vec<f64>,
    /// Frobenius standard error of the mean state, √(Σⱼ‖ρⱼ − ρ̄‖²_F / (n(n−1))).
    /// It bounds the expected trace-distance error of `mean_state`.
    pub standard_error: Vec<f64>,
    /// Standard error of `mean_of_concurrence`.
    pub concurrence_standard_error: Vec<f64>,
    /// Mean current at the recorded steps.
    pub mean_current: Vec<f64>,
    pub n_trajectories: usize,
}

#[derive(Clone)]
struct Accumulator {
    state: Vec<Mat4>,
    state_sq: Vec<f64>,
    conc: Vec<f64>,
    conc_sq: Vec<f64>,
    current: Vec<f64>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Self {
            state: vec![Mat4::zeros(); n],
            state_sq: vec![0.0; n],
            conc: vec![0.0; n],
            conc_sq: vec![0.0; n],
            current: vec![0.0; n],
        }
    }

    fn add(&mut self, rec: &TrajectoryRecord) {
        for k in 0..self.state.len() {
            let s = rec.states[k].matrix();
            self.state[k] += s;
            self.state_sq[k] += s.norm_squared();
            self.conc[k] += rec.concurrence[k];
            self.conc_sq[k] += rec.concurrence[k] * rec.concurrence[k];
            self.current[k] += rec.current[k];
        }
    }
}

/// Runs `n_traj` trajectories in parallel and averages them.
///
/// Trajectory j uses stream j of `master_seed`; any failing trajectory
/// aborts the ensemble (it signals a step size problem shared by all).
pub fn ensemble_average(
    rho0: &DensityMatrix,
    omega: f64,
    controller: Controller,
    config: &TrajectoryConfig,
    n_traj: usize,
    master_seed: u64,
) -> Result<EnsembleResult> {
    if n_traj == 0 {
        return Err(Error::InvalidParameter("n_traj must be ≥ 1".into()));
    }
    config.validate()?;
    // signals are reduced at the state stride
    let config = TrajectoryConfig { full_rate_signals: false, ..*config };
    let n_records = config.n_steps() / config.stride + 1;
    let mut acc = Accumulator::new(n_records);
    let mut times = Vec::new();

    let mut start = 0;
    while start < n_traj {
        let end = (start + ENSEMBLE_BATCH).min(n_traj);
        let batch: Vec<TrajectoryRecord> = (start..end)
            .into_par_iter()
            .map(|j| simulate_stream(rho0, omega, controller, &config, master_seed, j as u64))
            .collect::<Result<_>>()?;
        for rec in &batch {
            acc.add(rec);
        }
        if times.is_empty() {
            times = batch[0].times.clone();
        }
        start = end;
    }

    let n = n_traj as f64;
    let mut out = EnsembleResult {
        times,
        mean_state: Vec::with_capacity(n_records),
        concurrence_of_mean: Vec::with_capacity(n_records),
        mean_of_concurrence: Vec::with_capacity(n_records),
        standard_error: Vec::with_capacity(n_records),
        concurrence_standard_error: Vec::with_capacity(n_records),
        mean_current: Vec::with_capacity(n_records),
        n_trajectories: n_traj,
    };
    for k in 0..n_records {
        let mean = acc.state[k] / C64::new(n, 0.0);
        let mean_state = DensityMatrix::from_matrix_unchecked(mean);
        let spread = (acc.state_sq[k] - n * mean.norm_squared()).max(0.0);
        let c_mean = acc.conc[k] / n;
        let c_spread = (acc.conc_sq[k] - n * c_mean * c_mean).max(0.0);
        let (se, cse) = if n_traj > 1 {
            ((spread / (n * (n - 1.0))).sqrt(), (c_spread / (n * (n - 1.0))).sqrt())
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        out.concurrence_of_mean.push(concurrence(&mean_state).value);
        out.mean_state.push(mean_state);
        out.mean_of_concurrence.push(c_mean);
        out.standard_error.push(se);
        out.concurrence_standard_error.push(cse);
        out.mean_current.push(acc.current[k] / n);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{conserved_r, trace_distance};
    use crate::master::{markovian_me_rhs, me_rhs};

    fn max_abs(m: &Mat4) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn singlet_is_dark_under_measurement() {
        let a = DensityMatrix::singlet();
        for dw in [-0.03, 0.0, 0.02] {
            let (next, i) = sme_step(&a, 0.7, 0.0, 1e-4, dw).unwrap();
            assert!(trace_distance(&next, &a) < 1e-14);
            assert!((i - dw / 1e-4).abs() < 1e-9);
        }
    }

    #[test]
    fn undriven_ground_state_is_unchanged() {
        let g = DensityMatrix::ground();
        let (next, _) = sme_step(&g, 0.0, 0.0, 1e-3, 0.05).unwrap();
        assert_eq!(next, g);
    }

    #[test]
    fn mean_step_follows_master_equation() {
        // an antithetic pair with dW² = dt cancels the noise to O(dt^{3/2})
        let rho = DensityMatrix::random(&mut rand::rng(), 4);
        let dt: f64 = 1e-6;
        let dw = dt.sqrt();
        for scheme in [StepScheme::PositiveMap, StepScheme::EulerMaruyama] {
            let (a, _) = sme_step_with(&rho, 0.4, 0.0, dt, dw, scheme).unwrap();
            let (b, _) = sme_step_with(&rho, 0.4, 0.0, dt, -dw, scheme).unwrap();
            let mean_update = (a.matrix() + b.matrix()) * C64::new(0.5, 0.0) - rho.matrix();
            let want = me_rhs(&rho, 0.4) * C64::new(dt, 0.0);
            let err = max_abs(&(mean_update - want));
            assert!(err < 50.0 * dt.powf(1.5), "{scheme:?}: {err}");
        }
    }

    #[test]
    fn markovian_mean_step_follows_feedback_master_equation() {
        let rho = DensityMatrix::random(&mut rand::rng(), 4);
        let dt: f64 = 1e-6;
        let dw = dt.sqrt();
        for scheme in [StepScheme::PositiveMap, StepScheme::EulerMaruyama] {
            let (a, _) = markovian_sme_step(&rho, 0.4, -0.8, dt, dw, scheme).unwrap();
            let (b, _) = markovian_sme_step(&rho, 0.4, -0.8, dt, -dw, scheme).unwrap();
            let mean_update = (a.matrix() + b.matrix()) * C64::new(0.5, 0.0) - rho.matrix();
            let want = markovian_me_rhs(&rho, 0.4, -0.8) * C64::new(dt, 0.0);
            let err = max_abs(&(mean_update - want));
            assert!(err < 50.0 * dt.powf(1.5), "{scheme:?}: {err}");
        }
    }

    #[test]
    fn euler_maruyama_rejects_large_noise() {
        let rho = DensityMatrix::excited().mix(&DensityMatrix::ground(), 0.5);
        let err = sme_step_with(&rho, 0.0, 0.0, 1e-2, 3.0, StepScheme::EulerMaruyama).unwrap_err();
        assert!(matches!(err, Error::StepInstability { .. }), "{err}");
    }

    #[test]
    fn positive_map_survives_large_noise() {
        let rho = DensityMatrix::excited().mix(&DensityMatrix::ground(), 0.5);
        for dw in [-3.0, -0.5, 0.5, 3.0] {
            let (next, _) = sme_step(&rho, 2.0, 0.3, 1e-2, dw).unwrap();
            assert!(next.min_eigenvalue() > -1e-12);
            assert!((next.trace().re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn wiener_increments_are_reproducible() {
        let mut a = trajectory_rng(9, 3);
        let mut b = trajectory_rng(9, 3);
        let mut c = trajectory_rng(9, 4);
        let xa: Vec<f64> = (0..16).map(|_| wiener_increment(&mut a, 1e-4)).collect();
        let xb: Vec<f64> = (0..16).map(|_| wiener_increment(&mut b, 1e-4)).collect();
        let xc: Vec<f64> = (0..16).map(|_| wiener_increment(&mut c, 1e-4)).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn trajectory_is_seed_deterministic() {
        let cfg = TrajectoryConfig::new(1e-3, 0.5).with_stride(10);
        let run = || {
            simulate_trajectory(&DensityMatrix::excited(), 0.4, Controller::bayesian(0.6), &cfg, 42)
                .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn singlet_trajectory_is_constant() {
        let cfg = TrajectoryConfig::new(1e-3, 0.2).with_stride(10);
        let rec = simulate_trajectory(&DensityMatrix::singlet(), 2.0, Controller::None, &cfg, 1).unwrap();
        assert_eq!(rec.states.len(), 21);
        for s in &rec.states {
            assert!(trace_distance(s, &DensityMatrix::singlet()) < 1e-12);
        }
    }

    #[test]
    fn symmetric_subspace_is_closed() {
        let cfg = TrajectoryConfig::new(1e-4, 1.0).with_stride(50);
        for ctrl in [Controller::None, Controller::bayesian(0.9), Controller::Markovian { lambda: -0.8 }] {
            let rec = simulate_trajectory(&DensityMatrix::ground(), 0.8, ctrl, &cfg, 5).unwrap();
            for s in &rec.states {
                assert!((conserved_r(s) - 2.0).abs() < 1e-6);
                assert!((s.trace().re - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_trajectory_ensemble_matches_simulation() {
        let cfg = TrajectoryConfig::new(1e-3, 0.3).with_stride(7);
        let rho0 = DensityMatrix::basis(crate::algebra::IDX_10);
        let rec = simulate_trajectory(&rho0, 1.0, Controller::bayesian(0.5), &cfg, 11).unwrap();
        let ens = ensemble_average(&rho0, 1.0, Controller::bayesian(0.5), &cfg, 1, 11).unwrap();
        assert_eq!(ens.mean_state, rec.states);
        assert_eq!(ens.times, rec.times);
        assert_eq!(ens.n_trajectories, 1);
    }

    #[test]
    fn ensemble_rejects_zero_trajectories() {
        let cfg = TrajectoryConfig::new(1e-3, 0.1);
        assert!(ensemble_average(&DensityMatrix::ground(), 0.4, Controller::None, &cfg, 0, 1).is_err());
    }
}
