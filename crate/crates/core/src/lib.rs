//! Stationary entanglement of two qubits decaying into a common environment.
//!
//! The crate covers the uncontrolled collective-decay master equation, its
//! Markovian (current-feedback) modification, and a Bayesian controller that
//! flips the sign of a Σ_x drive according to the latest change of the
//! conditioned state's concurrence.
//!
//! * [`algebra`]: operators, dissipators, the 15-parameter state vector.
//! * [`master`]: deterministic right-hand sides, the affine 15×15 generators,
//!   integration, steady states and their closed forms.
//! * [`entanglement`]: Wootters concurrence.
//! * [`trajectories`]: stochastic master equation, first-order stepping
//!   (positivity-preserving map by default, Euler–Maruyama optional),
//!   seeded ensembles.
//! * [`feedback`]: the Bayesian controller and the trajectory-level
//!   Markovian feedback equation.
//! * [`sweep`]: (ω, λ) grids and per-ω optima.
//!
//! All matrices use the basis order `|11⟩, |10⟩, |01⟩, |00⟩`; see
//! [`algebra`].

pub mod algebra;
pub mod entanglement;
pub mod error;
pub mod feedback;
pub mod linalg;
pub mod master;
pub mod sweep;
pub mod trajectories;

pub use algebra::{DensityMatrix, StateVector15};
pub use entanglement::{concurrence, ConcurrenceValue};
pub use error::{Error, Result};
pub use master::{AffineGenerator, GeneratorMode, StationaryState};
