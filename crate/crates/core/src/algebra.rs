//! Two-qubit operator algebra and state parametrization.
//!
//! # Basis ordering
//!
//! Every 4×4 matrix in this crate is written in the computational basis
//! ordered as
//!
//! ```text
//!   index 0 -> |11⟩   index 1 -> |10⟩   index 2 -> |01⟩   index 3 -> |00⟩
//! ```
//!
//! where `|1⟩` is the excited state of a qubit and the first label belongs to
//! qubit 1. This is the reverse of the `|00⟩, |01⟩, |10⟩, |11⟩` order used by
//! most toolkits; mixing the two silently transposes the 15×15 generators in
//! [`crate::master`].

use std::sync::OnceLock;

use nalgebra::{Matrix2, SVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat4, C64};

pub const IDX_11: usize = 0;
pub const IDX_10: usize = 1;
pub const IDX_01: usize = 2;
pub const IDX_00: usize = 3;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// The 15 real parameters of a trace-one Hermitian 4×4 matrix.
///
/// Component order: 𝒜, ℬ_R, ℬ_I, 𝒞_R, 𝒞_I, 𝒟_R, 𝒟_I, ℰ, ℱ_R, ℱ_I, 𝒢_R, 𝒢_I,
/// ℋ, ℐ_R, ℐ_I. The diagonal is (𝒜, ℰ, ℋ, 1 − 𝒜 − ℰ − ℋ); the upper triangle
/// is ρ₀₁ = ℬ, ρ₀₂ = 𝒞, ρ₀₃ = 𝒟, ρ₁₂ = ℱ, ρ₁₃ = 𝒢, ρ₂₃ = ℐ.
pub type StateVector15 = SVector<f64, 15>;

/// Positions of the diagonal components inside [`StateVector15`].
pub mod component {
    pub const A: usize = 0;
    pub const B_RE: usize = 1;
    pub const B_IM: usize = 2;
    pub const C_RE: usize = 3;
    pub const C_IM: usize = 4;
    pub const D_RE: usize = 5;
    pub const D_IM: usize = 6;
    pub const E: usize = 7;
    pub const F_RE: usize = 8;
    pub const F_IM: usize = 9;
    pub const G_RE: usize = 10;
    pub const G_IM: usize = 11;
    pub const H: usize = 12;
    pub const I_RE: usize = 13;
    pub const I_IM: usize = 14;
}

/// (row, col) of the off-diagonal entry stored at components (2k+1, 2k+2),
/// in vector order ℬ, 𝒞, 𝒟, then ℱ, 𝒢, and ℐ (with ℰ, ℋ interleaved).
const OFF_DIAGONAL_SLOTS: [(usize, usize, usize); 6] = [
    (0, 1, component::B_RE),
    (0, 2, component::C_RE),
    (0, 3, component::D_RE),
    (1, 2, component::F_RE),
    (1, 3, component::G_RE),
    (2, 3, component::I_RE),
];

/// Two-qubit density matrix in the `|11⟩, |10⟩, |01⟩, |00⟩` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Mat4) -> Result<Self> {
        let herm = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max |ρ − ρ†| = {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let rho = Self(m);
        let min = rho.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (minimum eigenvalue {min:.3e})"
            )));
        }
        Ok(rho)
    }

    /// Wraps a matrix without checking the invariants.
    ///
    /// Used by integrators that monitor the invariants themselves.
    pub fn from_matrix_unchecked(m: Mat4) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) amplitude vector.
    pub fn pure(amplitudes: [C64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(amplitudes);
        let n = v.norm_squared();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        Ok(Self(v * v.adjoint() / c(n)))
    }

    pub fn basis(index: usize) -> Self {
        let mut m = Mat4::zeros();
        m[(index, index)] = c(1.0);
        Self(m)
    }

    pub fn ground() -> Self {
        Self::basis(IDX_00)
    }

    pub fn excited() -> Self {
        Self::basis(IDX_11)
    }

    /// The singlet projector ρ_a, the dark state of the collective decay.
    pub fn singlet() -> Self {
        let mut m = Mat4::zeros();
        m[(1, 1)] = c(0.5);
        m[(2, 2)] = c(0.5);
        m[(1, 2)] = c(-0.5);
        m[(2, 1)] = c(-0.5);
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat4::identity() * c(0.25))
    }

    /// ρ₁ ⊗ ρ₂ with each factor in the single-qubit `|1⟩, |0⟩` order.
    pub fn product(q1: &Matrix2<C64>, q2: &Matrix2<C64>) -> Self {
        Self(q1.kronecker(q2))
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        linalg::hermitian_eigenvalues(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Convex combination `a·self + (1 − a)·other`.
    pub fn mix(&self, other: &Self, a: f64) -> Self {
        Self(self.0 * c(a) + other.0 * c(1.0 - a))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Mat4) -> Self {
        Self(u * self.0 * u.adjoint())
    }

    /// Random state from the induced (Ginibre) measure with the given rank.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Self {
        let rank = rank.clamp(1, 4);
        let mut g = Mat4::zeros();
        for i in 0..4 {
            for j in 0..rank {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                g[(i, j)] = C64::new(re, im);
            }
        }
        let m = g * g.adjoint();
        let tr = m.trace();
        Self(m / tr)
    }
}

impl std::ops::Index<(usize, usize)> for DensityMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Collective and single-qubit operators of the two-qubit register.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    /// Lowering operators σ₁, σ₂.
    pub sigma: [Mat4; 2],
    pub sigma_dag: [Mat4; 2],
    pub pauli_x: [Mat4; 2],
    pub pauli_y: [Mat4; 2],
    pub pauli_z: [Mat4; 2],
    /// Σ = σ₁ + σ₂.
    pub big_sigma: Mat4,
    pub big_sigma_dag: Mat4,
    /// Σ_x = Σ + Σ†.
    pub big_sigma_x: Mat4,
    /// I + SWAP; commutes with Σ and Σ_x.
    pub conserved_op: Mat4,
    /// σ_y ⊗ σ_y, the spin-flip used by the concurrence.
    pub spin_flip: Mat4,
}

impl OperatorSet {
    fn build() -> Self {
        let zero = C64::new(0.0, 0.0);
        let one = c(1.0);
        let i = C64::new(0.0, 1.0);
        // single-qubit basis (|1⟩, |0⟩): σ|1⟩ = |0⟩
        let lower = Matrix2::new(zero, zero, one, zero);
        let px = Matrix2::new(zero, one, one, zero);
        let py = Matrix2::new(zero, -i, i, zero);
        let pz = Matrix2::new(one, zero, zero, -one);
        let id = Matrix2::<C64>::identity();
        let both = |m: &Matrix2<C64>| [m.kronecker(&id), id.kronecker(m)];

        let sigma = both(&lower);
        let sigma_dag = [sigma[0].adjoint(), sigma[1].adjoint()];
        let big_sigma = sigma[0] + sigma[1];
        let big_sigma_dag = big_sigma.adjoint();

        let mut swap = Mat4::zeros();
        for (a, b) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(a, b)] = one;
        }

        Self {
            sigma,
            sigma_dag,
            pauli_x: both(&px),
            pauli_y: both(&py),
            pauli_z: both(&pz),
            big_sigma,
            big_sigma_dag,
            big_sigma_x: big_sigma + big_sigma_dag,
            conserved_op: Mat4::identity() + swap,
            spin_flip: py.kronecker(&py),
        }
    }
}

/// Shared operator table.
pub fn operators() -> &'static OperatorSet {
    static OPS: OnceLock<OperatorSet> = OnceLock::new();
    OPS.get_or_init(OperatorSet::build)
}

pub fn commutator(a: &Mat4, b: &Mat4) -> Mat4 {
    a * b - b * a
}

/// Lindblad dissipator 𝒟[L]ρ = LρL† − ½(L†Lρ + ρL†L).
pub fn dissipator(l: &Mat4, rho: &Mat4) -> Mat4 {
    let ld = l.adjoint();
    let ldl = ld * l;
    l * rho * ld - (ldl * rho + rho * ldl) * c(0.5)
}

/// Measurement superoperator ℋ[L]ρ = (Lρ + ρL†) − Tr(Lρ + ρL†)ρ.
pub fn h_superoperator(l: &Mat4, rho: &Mat4) -> Mat4 {
    let s = l * rho + rho * l.adjoint();
    let tr = s.trace();
    s - rho * tr
}

pub fn vectorize(rho: &DensityMatrix) -> StateVector15 {
    vectorize_matrix(&rho.0)
}

/// Reads the 15 parameters from any matrix, ignoring its lower triangle and
/// the (3,3) entry.
pub fn vectorize_matrix(m: &Mat4) -> StateVector15 {
    let mut v = StateVector15::zeros();
    v[component::A] = m[(0, 0)].re;
    v[component::E] = m[(1, 1)].re;
    v[component::H] = m[(2, 2)].re;
    for (r, col, k) in OFF_DIAGONAL_SLOTS {
        v[k] = m[(r, col)].re;
        v[k + 1] = m[(r, col)].im;
    }
    v
}

/// Inverse of [`vectorize`]; the (3,3) entry is 1 − 𝒜 − ℰ − ℋ.
pub fn devectorize(v: &StateVector15) -> DensityMatrix {
    let mut m = Mat4::zeros();
    m[(0, 0)] = c(v[component::A]);
    m[(1, 1)] = c(v[component::E]);
    m[(2, 2)] = c(v[component::H]);
    m[(3, 3)] = c(1.0 - v[component::A] - v[component::E] - v[component::H]);
    for (r, col, k) in OFF_DIAGONAL_SLOTS {
        let z = C64::new(v[k], v[k + 1]);
        m[(r, col)] = z;
        m[(col, r)] = z.conj();
    }
    DensityMatrix(m)
}

/// Linear (traceless) counterpart of [`devectorize`]: maps a tangent vector
/// to the traceless Hermitian matrix it parametrizes.
pub fn devectorize_tangent(v: &StateVector15) -> Mat4 {
    let mut m = devectorize(v).0;
    m[(3, 3)] -= c(1.0);
    m
}

/// R = Tr(ρ(I + SWAP)) = 2 + 2ℱ_R − ℋ − ℰ, the conserved weight of the
/// symmetric subspace (2 for symmetric states, 0 for the singlet).
pub fn conserved_r(rho: &DensityMatrix) -> f64 {
    (operators().conserved_op * rho.0).trace().re
}

/// ½‖ρ₁ − ρ₂‖₁.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let d = a.0 - b.0;
    let d = (d + d.adjoint()) * c(0.5);
    0.5 * linalg::hermitian_eigenvalues(&d).iter().map(|x| x.abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_abs(m: &Mat4) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn collective_lowering_action() {
        let ops = operators();
        let ket = |i: usize| {
            let mut v = nalgebra::Vector4::<C64>::zeros();
            v[i] = c(1.0);
            v
        };
        assert!((ops.big_sigma * ket(IDX_00)).norm() == 0.0);
        let out = ops.big_sigma * ket(IDX_11);
        assert_eq!(out, ket(IDX_10) + ket(IDX_01));
    }

    #[test]
    fn conserved_operator_commutes_exactly() {
        let ops = operators();
        assert_eq!(commutator(&ops.conserved_op, &ops.big_sigma), Mat4::zeros());
        assert_eq!(commutator(&ops.conserved_op, &ops.big_sigma_x), Mat4::zeros());
        let expected = [
            [2.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(ops.conserved_op[(i, j)], c(expected[i][j]));
            }
        }
    }

    #[test]
    fn dissipator_examples() {
        let s = &operators().big_sigma;
        assert_eq!(max_abs(&dissipator(s, DensityMatrix::ground().matrix())), 0.0);
        assert!(max_abs(&dissipator(s, DensityMatrix::singlet().matrix())) < 1e-15);
        let out = dissipator(s, DensityMatrix::excited().matrix());
        assert!(out.trace().norm() < 1e-15);
        assert_eq!(out[(0, 0)], c(-2.0));
    }

    #[test]
    fn h_superoperator_examples() {
        let ops = operators();
        let s = &ops.big_sigma;
        assert_eq!(max_abs(&h_superoperator(s, DensityMatrix::ground().matrix())), 0.0);
        let out = h_superoperator(s, DensityMatrix::maximally_mixed().matrix());
        assert!(max_abs(&(out - ops.big_sigma_x * c(0.25))) < 1e-15);
    }

    #[test]
    fn vectorize_examples() {
        assert_eq!(vectorize(&DensityMatrix::ground()), StateVector15::zeros());
        let mut e = StateVector15::zeros();
        e[component::A] = 1.0;
        assert_eq!(vectorize(&DensityMatrix::excited()), e);
        let v = vectorize(&DensityMatrix::singlet());
        for k in 0..15 {
            let want = match k {
                component::E | component::H => 0.5,
                component::F_RE => -0.5,
                _ => 0.0,
            };
            assert_eq!(v[k], want, "component {k}");
        }
    }

    #[test]
    fn conserved_r_examples() {
        assert_eq!(conserved_r(&DensityMatrix::ground()), 2.0);
        assert!(conserved_r(&DensityMatrix::singlet()).abs() < 1e-15);
        assert_eq!(conserved_r(&DensityMatrix::basis(IDX_10)), 1.0);
    }

    #[test]
    fn conserved_r_matches_component_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let rho = DensityMatrix::random(&mut rng, 4);
            let v = vectorize(&rho);
            let by_components = 2.0 + 2.0 * v[component::F_RE] - v[component::H] - v[component::E];
            assert!((conserved_r(&rho) - by_components).abs() < 1e-13);
        }
    }

    #[test]
    fn new_rejects_invalid_matrices() {
        let mut m = *DensityMatrix::ground().matrix();
        m[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState(_))));
        let m = Mat4::identity() * c(0.3);
        assert!(DensityMatrix::new(m).is_err());
        let mut m = Mat4::zeros();
        m[(0, 0)] = c(1.5);
        m[(3, 3)] = c(-0.5);
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::new(*DensityMatrix::singlet().matrix()).is_ok());
    }

    #[test]
    fn trace_distance_of_orthogonal_states_is_one() {
        let d = trace_distance(&DensityMatrix::ground(), &DensityMatrix::excited());
        assert!((d - 1.0).abs() < 1e-14);
        assert_eq!(trace_distance(&DensityMatrix::ground(), &DensityMatrix::ground()), 0.0);
    }
}
