//! Wootters concurrence of two-qubit states.

use crate::algebra::{operators, DensityMatrix};
use crate::error::Result;
use crate::linalg::{self, Mat4, C64};
use crate::master::{analytic_stationary, GeneratorMode};

/// Concurrence together with the decreasingly sorted roots λ₁ ≥ … ≥ λ₄.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceValue {
    pub value: f64,
    pub eigenroots: [f64; 4],
}

impl ConcurrenceValue {
    fn from_roots(mut roots: [f64; 4]) -> Self {
        roots.sort_by(|a, b| b.total_cmp(a));
        let value = (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0);
        Self { value, eigenroots: roots }
    }
}

/// Spin-flip operator used to build ρ̃.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinFlip {
    /// σ_y ⊗ σ_y.
    PauliY,
    /// (σ₁ − σ₁†)(σ₂ − σ₂†); equals −σ_y ⊗ σ_y, the sign cancels in ρ̃.
    LadderDifference,
}

impl SpinFlip {
    pub fn matrix(self) -> Mat4 {
        let ops = operators();
        match self {
            SpinFlip::PauliY => ops.spin_flip,
            SpinFlip::LadderDifference => {
                (ops.sigma[0] - ops.sigma_dag[0]) * (ops.sigma[1] - ops.sigma_dag[1])
            }
        }
    }
}

/// Concurrence of `rho`.
///
/// The roots λᵢ are the singular values of `τ = Wᵀ(σ_y⊗σ_y)W` for any factor
/// `ρ = W W†`, since `ρρ̃` is similar to `τ†τ`. With a pivoted Cholesky
/// factor and a Jacobi SVD this avoids the square root of tiny eigenvalues
/// that the direct route suffers from on nearly pure states.
pub fn concurrence(rho: &DensityMatrix) -> ConcurrenceValue {
    debug_assert!(
        (rho.matrix() - rho.matrix().adjoint()).iter().all(|z| z.norm() < 1e-9),
        "concurrence of a non-Hermitian matrix"
    );
    let (w, _) = linalg::psd_factor(rho.matrix());
    let tau = w.transpose() * operators().spin_flip * w;
    ConcurrenceValue::from_roots(linalg::singular_values(&tau))
}

/// Concurrence straight from the eigenvalues of `ρ S ρ* S`.
///
/// General complex eigensolver on the non-Hermitian product; the roots are
/// the square roots of the eigenvalue moduli.
pub fn concurrence_reference(rho: &DensityMatrix, flip: SpinFlip) -> ConcurrenceValue {
    let s = flip.matrix();
    let r = rho.matrix();
    let product = r * s * r.map(|z| z.conj()) * s;
    let ev = linalg::eigenvalues(&product);
    let roots = ev.map(|z: C64| {
        // roundoff can leave small negative real parts; the modulus absorbs them
        let z = if z.re < 0.0 && z.re > -1e-10 { C64::new(0.0, z.im) } else { z };
        z.norm().sqrt()
    });
    ConcurrenceValue::from_roots(roots)
}

/// Concurrence of the closed-form stationary state.
pub fn concurrence_of_stationary(omega: f64, lambda: f64, mode: GeneratorMode, r: f64) -> Result<f64> {
    let st = analytic_stationary(omega, lambda, mode, r)?;
    Ok(concurrence(&st.rho_inf).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IDX_10;

    #[test]
    fn named_states() {
        assert!((concurrence(&DensityMatrix::singlet()).value - 1.0).abs() < 1e-14);
        assert_eq!(concurrence(&DensityMatrix::ground()).value, 0.0);
        assert_eq!(concurrence(&DensityMatrix::basis(IDX_10)).value, 0.0);
        let half = DensityMatrix::ground().mix(&DensityMatrix::singlet(), 0.5);
        assert!((concurrence(&half).value - 0.5).abs() < 1e-14);
    }

    #[test]
    fn eigenroots_are_sorted_and_nonnegative() {
        let mut rng = rand::rng();
        for _ in 0..20 {
            let c = concurrence(&DensityMatrix::random(&mut rng, 3));
            assert!(c.eigenroots.windows(2).all(|p| p[0] >= p[1]));
            assert!(c.eigenroots.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn ladder_difference_is_minus_pauli_y() {
        let d = SpinFlip::LadderDifference.matrix() + SpinFlip::PauliY.matrix();
        assert!(d.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn reference_route_agrees_on_werner_family() {
        // p·singlet + (1−p)·I/4 has C = max(0, (3p − 1)/2)
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let rho = DensityMatrix::singlet().mix(&DensityMatrix::maximally_mixed(), p);
            let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence(&rho).value - want).abs() < 1e-12, "p = {p}");
            let r = concurrence_reference(&rho, SpinFlip::PauliY).value;
            assert!((r - want).abs() < 1e-7, "p = {p}: {r}");
        }
    }

    #[test]
    fn stationary_examples() {
        let c0 = concurrence_of_stationary(0.0, 0.0, GeneratorMode::NoFeedback, 2.0).unwrap();
        assert_eq!(c0, 0.0);
        let c = concurrence_of_stationary(0.4, 0.0, GeneratorMode::NoFeedback, 2.0).unwrap();
        assert!((c - 0.11).abs() < 0.01, "{c}");
    }
}
