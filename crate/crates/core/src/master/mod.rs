//! Deterministic master-equation machinery.
//!
//! Two dynamics are covered: the uncontrolled collective decay with a
//! resonant Σ_x drive, and its Markovian current-feedback modification. Both
//! are affine in the 15-parameter state vector, `v̇ = M v − w`, and their
//! generators are singular: the symmetric-subspace weight R is conserved, so
//! the stationary state depends on the initial one.

mod closed_form;
mod tables;

use nalgebra::{DMatrix, DVector, SMatrix, SVector};

use crate::algebra::{
    self, commutator, conserved_r, devectorize, dissipator, operators, vectorize, vectorize_matrix,
    DensityMatrix, StateVector15,
};
use crate::error::{Error, Result};
use crate::linalg::{Mat4, C64};

pub use closed_form::{feedback_symmetric_fixed_point, symmetric_fixed_point, FeedbackCoefficients};

pub type GenMatrix = SMatrix<f64, 15, 15>;
pub type GenVector = SVector<f64, 15>;

/// Default step for deterministic integration.
pub const DEFAULT_DT: f64 = 1e-3;

/// Relative singular-value threshold separating the null space of a
/// generator from the rest of its spectrum.
const NULL_SPACE_RTOL: f64 = 1e-10;

const R_DRIFT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorMode {
    NoFeedback,
    Markovian,
}

/// `−iω[Σ_x, ρ] + 𝒟[Σ]ρ`.
pub fn me_rhs(rho: &DensityMatrix, omega: f64) -> Mat4 {
    let ops = operators();
    let r = rho.matrix();
    commutator(&ops.big_sigma_x, r) * C64::new(0.0, -omega) + dissipator(&ops.big_sigma, r)
}

/// `−iω[Σ_x, ρ] − i(λ/2)[Σ†Σ_x + Σ_xΣ, ρ] + 𝒟[Σ − iλΣ_x]ρ`.
pub fn markovian_me_rhs(rho: &DensityMatrix, omega: f64, lambda: f64) -> Mat4 {
    let ops = operators();
    let r = rho.matrix();
    let h = ops.big_sigma_x * C64::new(omega, 0.0)
        + (ops.big_sigma_dag * ops.big_sigma_x + ops.big_sigma_x * ops.big_sigma)
            * C64::new(lambda / 2.0, 0.0);
    let jump = ops.big_sigma - ops.big_sigma_x * C64::new(0.0, lambda);
    commutator(&h, r) * C64::new(0.0, -1.0) + dissipator(&jump, r)
}

/// Right-hand side selected by mode (λ is ignored without feedback).
pub fn rhs(rho: &DensityMatrix, omega: f64, lambda: f64, mode: GeneratorMode) -> Mat4 {
    match mode {
        GeneratorMode::NoFeedback => me_rhs(rho, omega),
        GeneratorMode::Markovian => markovian_me_rhs(rho, omega, lambda),
    }
}

/// [`rhs`] expressed on the 15-parameter vector.
pub fn vector_rhs(v: &StateVector15, omega: f64, lambda: f64, mode: GeneratorMode) -> StateVector15 {
    vectorize_matrix(&rhs(&devectorize(v), omega, lambda, mode))
}

/// `v̇ = M v − w` for one operating point.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineGenerator {
    pub m: GenMatrix,
    pub w: GenVector,
    pub omega: f64,
    pub lambda: f64,
    pub mode: GeneratorMode,
}

impl AffineGenerator {
    pub fn apply(&self, v: &StateVector15) -> StateVector15 {
        self.m * v - self.w
    }

    /// Singular values of `M`, descending.
    pub fn singular_values(&self) -> GenVector {
        self.m.singular_values()
    }
}

/// Evaluates the hard-coded generator tables at (ω, λ).
pub fn build_generator(omega: f64, lambda: f64, mode: GeneratorMode) -> Result<AffineGenerator> {
    if !omega.is_finite() || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "non-finite generator parameters (ω, λ) = ({omega}, {lambda})"
        )));
    }
    let (m, w, lambda) = match mode {
        GeneratorMode::NoFeedback => {
            let (m, w) = tables::no_feedback(omega);
            (m, w, 0.0)
        }
        GeneratorMode::Markovian => {
            let (m, w) = tables::markovian(omega, lambda);
            (m, w, lambda)
        }
    };
    Ok(AffineGenerator { m, w, omega, lambda, mode })
}

/// Time series produced by [`integrate_me`].
#[derive(Clone, Debug, Default)]
pub struct MeSolution {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl MeSolution {
    pub fn last(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }
}

/// Classical 4th-order Runge–Kutta for `v̇ = M v − w`, emitting every step.
pub fn integrate_me(
    rho0: &DensityMatrix,
    gen: &AffineGenerator,
    t_final: f64,
    dt: f64,
) -> Result<MeSolution> {
    integrate_me_strided(rho0, gen, t_final, dt, 1)
}

/// As [`integrate_me`], emitting the initial state, every `stride`-th step,
/// and the final step. Invariants (positivity, R conservation) are checked
/// on every emitted state.
pub fn integrate_me_strided(
    rho0: &DensityMatrix,
    gen: &AffineGenerator,
    t_final: f64,
    dt: f64,
    stride: usize,
) -> Result<MeSolution> {
    if !(dt > 0.0) || !(t_final >= dt) {
        return Err(Error::InvalidParameter(format!(
            "need dt > 0 and t_final ≥ dt (dt = {dt}, t_final = {t_final})"
        )));
    }
    let stride = stride.max(1);
    let n_steps = (t_final / dt).round() as usize;
    let (prop, offset) = rk4_affine_step(gen, dt);
    let r0 = conserved_r(rho0);

    let mut v = vectorize(rho0);
    let mut out = MeSolution {
        times: Vec::with_capacity(n_steps / stride + 2),
        states: Vec::with_capacity(n_steps / stride + 2),
    };
    out.times.push(0.0);
    out.states.push(*rho0);
    for step in 1..=n_steps {
        v = prop * v + offset;
        if step % stride == 0 || step == n_steps {
            let rho = devectorize(&v);
            check_deterministic_invariants(&rho, r0, step)?;
            out.times.push(step as f64 * dt);
            out.states.push(rho);
        }
    }
    Ok(out)
}

/// One RK4 step of an affine system is itself affine: `v ← P v + q` with
/// `P = Σ_{k≤4} (hM)^k / k!` and `q = −h Σ_{k≤3} (hM)^k / (k+1)! · w`.
fn rk4_affine_step(gen: &AffineGenerator, dt: f64) -> (GenMatrix, GenVector) {
    let hm = gen.m * dt;
    let hm2 = hm * hm;
    let hm3 = hm2 * hm;
    let hm4 = hm3 * hm;
    let id = GenMatrix::identity();
    let prop = id + hm + hm2 / 2.0 + hm3 / 6.0 + hm4 / 24.0;
    let q = (id + hm / 2.0 + hm2 / 6.0 + hm3 / 24.0) * gen.w * (-dt);
    (prop, q)
}

fn check_deterministic_invariants(rho: &DensityMatrix, r0: f64, step: usize) -> Result<()> {
    if rho.matrix().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::IntegrationDiverged { step, reason: "non-finite state".into() });
    }
    let min = rho.min_eigenvalue();
    if min < -algebra::POSITIVITY_TOL {
        return Err(Error::IntegrationDiverged {
            step,
            reason: format!("minimum eigenvalue {min:.3e}"),
        });
    }
    let r = conserved_r(rho);
    if (r - r0).abs() > R_DRIFT_TOL {
        return Err(Error::IntegrationDiverged {
            step,
            reason: format!("conserved R drifted from {r0} to {r}"),
        });
    }
    Ok(())
}

/// Stationary state split into its symmetric and singlet parts,
/// `ρ(∞) = (R/2)ρ_s + ((2 − R)/2)ρ_a`.
///
/// At ω = 0 the generator has extra conserved coherences between `|00⟩` and
/// the singlet; for initial states carrying such coherences `rho_inf` keeps
/// them and is not a plain mixture of `rho_s` and `rho_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationaryState {
    pub rho_inf: DensityMatrix,
    pub rho_s: DensityMatrix,
    pub rho_a: DensityMatrix,
    pub r: f64,
}

impl StationaryState {
    fn from_parts(rho_s: DensityMatrix, r: f64) -> Self {
        let rho_a = DensityMatrix::singlet();
        let rho_inf = rho_s.mix(&rho_a, r / 2.0);
        Self { rho_inf, rho_s, rho_a, r }
    }
}

/// Steady state reached from `rho0`, by a constrained linear solve.
///
/// `M v = w` is singular; every left null vector `u` of `M` is a conserved
/// linear functional (`u·v̇ = −u·w = 0`), so the system is augmented with
/// `u·v = u·v(0)` for each of them. The R conservation row is one of these.
/// The augmented system is solved in the least-squares sense by SVD; if it
/// is still rank deficient the steady state is ambiguous.
pub fn steady_state(rho0: &DensityMatrix, gen: &AffineGenerator) -> Result<StationaryState> {
    let rho_inf = constrained_solve(rho0, gen)?;
    let rho_s = constrained_solve(&DensityMatrix::ground(), gen)?;
    Ok(StationaryState {
        rho_inf,
        rho_s,
        rho_a: DensityMatrix::singlet(),
        r: conserved_r(rho0),
    })
}

fn constrained_solve(rho0: &DensityMatrix, gen: &AffineGenerator) -> Result<DensityMatrix> {
    let svd = gen.m.svd(true, false);
    let u = svd.u.as_ref().expect("requested U");
    let smax = svd.singular_values.max();
    let null: Vec<usize> = (0..15)
        .filter(|&k| svd.singular_values[k] <= NULL_SPACE_RTOL * smax.max(1.0))
        .collect();
    let v0 = vectorize(rho0);

    let rows = 15 + null.len();
    let mut a = DMatrix::<f64>::zeros(rows, 15);
    let mut b = DVector::<f64>::zeros(rows);
    a.view_mut((0, 0), (15, 15)).copy_from(&gen.m);
    b.rows_mut(0, 15).copy_from(&gen.w);
    for (extra, &k) in null.iter().enumerate() {
        let uk = u.column(k);
        a.row_mut(15 + extra).copy_from(&uk.transpose());
        b[15 + extra] = uk.dot(&v0);
    }

    let aug = a.svd(true, true);
    let amax = aug.singular_values.max();
    let rank = aug.singular_values.iter().filter(|&&s| s > NULL_SPACE_RTOL * amax).count();
    if rank < 15 {
        return Err(Error::AmbiguousSteadyState { null_dim: null.len() });
    }
    let x = aug
        .solve(&b, NULL_SPACE_RTOL * amax)
        .map_err(|e| Error::InvalidParameter(format!("steady-state solve failed: {e}")))?;
    Ok(devectorize(&StateVector15::from_iterator(x.iter().copied())))
}

/// Closed-form stationary state for conserved weight `r ∈ [0, 2]`.
/// Without feedback λ is ignored.
pub fn analytic_stationary(
    omega: f64,
    lambda: f64,
    mode: GeneratorMode,
    r: f64,
) -> Result<StationaryState> {
    if !(0.0..=2.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("R = {r} outside [0, 2]")));
    }
    if !omega.is_finite() || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "non-finite parameters (ω, λ) = ({omega}, {lambda})"
        )));
    }
    let rho_s = match mode {
        GeneratorMode::NoFeedback => symmetric_fixed_point(omega),
        GeneratorMode::Markovian => feedback_symmetric_fixed_point(omega, lambda)?,
    };
    Ok(StationaryState::from_parts(rho_s, r))
}
