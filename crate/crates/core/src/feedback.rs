//! Control laws acting through the Σ_x drive.
//!
//! * Markovian feedback feeds the homodyne current straight back,
//!   `H_fb = λ I(t) Σ_x`. Its ensemble average is the master equation in
//!   [`crate::master::markovian_me_rhs`]; the trajectory-level equation here
//!   exists to check that claim.
//! * Bayesian feedback drives with `f = λ·sgn[C(t) − C(t − Δt)]`, computed
//!   from the conditioned state. There is no averaged master equation for it.

use std::collections::VecDeque;

use crate::algebra::{commutator, dissipator, h_superoperator, operators, DensityMatrix};
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::linalg::{Mat4, C64};

/// Concurrence differences at or below this magnitude count as "no change".
pub const SIGN_TIE_TOL: f64 = 1e-12;

/// Sign-of-concurrence-change controller.
///
/// Keeps the last `window` concurrence values; the output at step n compares
/// C(n) with C(n − window). Ties (and the first `window` steps, which have no
/// reference value yet) keep the previous sign, starting from +1, so the
/// output is always ±λ.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesianController {
    lambda: f64,
    window: usize,
    last_sign: f64,
    last_concurrence: Option<f64>,
    history: VecDeque<f64>,
}

impl BayesianController {
    pub fn new(lambda: f64, window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidParameter("controller window must be ≥ 1 step".into()));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("feedback strength λ = {lambda}")));
        }
        Ok(Self {
            lambda,
            window,
            last_sign: 1.0,
            last_concurrence: None,
            history: VecDeque::with_capacity(window),
        })
    }

    /// Window given as a comparison interval Δt, rounded to integrator steps.
    pub fn from_interval(lambda: f64, delta_t: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !(delta_t > 0.0) {
            return Err(Error::InvalidParameter(format!("Δt = {delta_t}, dt = {dt}")));
        }
        Self::new(lambda, ((delta_t / dt).round() as usize).max(1))
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn last_sign(&self) -> f64 {
        self.last_sign
    }

    pub fn last_concurrence(&self) -> Option<f64> {
        self.last_concurrence
    }

    /// Feeds the current concurrence and returns the drive f.
    pub fn update(&mut self, c_now: f64) -> f64 {
        if self.history.len() == self.window {
            let c_then = self.history.pop_front().expect("non-empty window");
            let diff = c_now - c_then;
            if diff.abs() > SIGN_TIE_TOL {
                // keep driving the same way while C rises, reverse when it falls
                if diff < 0.0 {
                    self.last_sign = -self.last_sign;
                }
            }
        }
        self.history.push_back(c_now);
        self.last_concurrence = Some(c_now);
        self.lambda * self.last_sign
    }

    /// Computes C(ρ) and feeds it to [`update`](Self::update).
    pub fn control(&mut self, rho: &DensityMatrix) -> f64 {
        self.update(concurrence(rho).value)
    }
}

/// Drift and dW-coefficient of the Markovian-feedback stochastic master
/// equation with actuator Σ_x:
///
/// drift = −iω[Σ_x, ρ] + 𝒟[Σ]ρ − iλ[Σ_x, Σρ + ρΣ†] + λ²𝒟[Σ_x]ρ,
/// diffusion = ℋ[Σ − iλΣ_x]ρ.
pub fn markovian_trajectory_drift(rho: &DensityMatrix, omega: f64, lambda: f64) -> (Mat4, Mat4) {
    let ops = operators();
    let r = rho.matrix();
    let sx = &ops.big_sigma_x;
    let measured = ops.big_sigma * r + r * ops.big_sigma_dag;
    let drift = commutator(sx, r) * C64::new(0.0, -omega)
        + dissipator(&ops.big_sigma, r)
        + commutator(sx, &measured) * C64::new(0.0, -lambda)
        + dissipator(sx, r) * C64::new(lambda * lambda, 0.0);
    let jump = ops.big_sigma - sx * C64::new(0.0, lambda);
    (drift, h_superoperator(&jump, r))
}
