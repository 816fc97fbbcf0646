//! Hard-coded 15×15 affine generators `v̇ = M v − w`.
//!
//! Rows and columns follow the [`StateVector15`](crate::StateVector15) order.
//! The test suite re-derives both tables from the right-hand sides by finite
//! differences; keep them in sync if either side changes.

use super::{GenMatrix, GenVector};

/// Generator of `ρ̇ = −iω[Σ_x, ρ] + 𝒟[Σ]ρ`.
pub fn no_feedback(omega: f64) -> (GenMatrix, GenVector) {
    let w = omega;
    #[rustfmt::skip]
    let rows: [[f64; 15]; 15] = [
        [-2.0, 0.0, -2.0*w, 0.0, -2.0*w, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, -1.5, 0.0, -0.5, 0.0, 0.0, -w, 0.0, 0.0, -w, 0.0, 0.0, 0.0, 0.0, 0.0],
        [w, 0.0, -1.5, 0.0, -0.5, w, 0.0, -w, -w, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, -0.5, 0.0, -1.5, 0.0, 0.0, -w, 0.0, 0.0, w, 0.0, 0.0, 0.0, 0.0, 0.0],
        [w, 0.0, -0.5, 0.0, -1.5, w, 0.0, 0.0, -w, 0.0, 0.0, 0.0, -w, 0.0, 0.0],
        [0.0, 0.0, -w, 0.0, -w, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, w, 0.0, 0.0, w],
        [0.0, w, 0.0, w, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -w, 0.0, 0.0, -w, 0.0],
        [1.0, 0.0, 2.0*w, 0.0, 0.0, 0.0, 0.0, -1.0, -1.0, 0.0, 0.0, -2.0*w, 0.0, 0.0, 0.0],
        [1.0, 0.0, w, 0.0, w, 0.0, 0.0, -0.5, -1.0, 0.0, 0.0, -w, -0.5, 0.0, -w],
        [0.0, w, 0.0, -w, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, w, 0.0, 0.0, -w, 0.0],
        [0.0, 1.0, 0.0, 1.0, 0.0, 0.0, w, 0.0, 0.0, -w, -0.5, 0.0, 0.0, -0.5, 0.0],
        [w, 0.0, 1.0, 0.0, 1.0, -w, 0.0, 2.0*w, w, 0.0, 0.0, -0.5, w, 0.0, -0.5],
        [1.0, 0.0, 0.0, 0.0, 2.0*w, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 0.0, -2.0*w],
        [0.0, 1.0, 0.0, 1.0, 0.0, 0.0, w, 0.0, 0.0, w, -0.5, 0.0, 0.0, -0.5, 0.0],
        [w, 0.0, 1.0, 0.0, 1.0, -w, 0.0, w, w, 0.0, 0.0, -0.5, 2.0*w, 0.0, -0.5],
    ];
    let mut drift = GenVector::zeros();
    drift[11] = w;
    drift[14] = w;
    (GenMatrix::from_fn(|i, j| rows[i][j]), drift)
}

/// Generator of the Markovian-feedback master equation
/// `ρ̇ = −iω[Σ_x, ρ] − i(λ/2)[Σ†Σ_x + Σ_xΣ, ρ] + 𝒟[Σ − iλΣ_x]ρ`,
/// assembled from three 15×5 column blocks.
pub fn markovian(omega: f64, lambda: f64) -> (GenMatrix, GenVector) {
    let w = omega;
    let l = lambda;
    let l2 = l * l;
    let a = |n: f64| -l2 - n / 2.0;
    let b = |n: f64| -2.0 * l2 - n / 2.0;
    let c = |n: f64| -3.0 * l2 - n / 2.0;

    #[rustfmt::skip]
    let m1: [[f64; 5]; 15] = [
        [2.0*a(2.0), 0.0, -2.0*w, 0.0, -2.0*w],
        [0.0, a(3.0), 0.0, -0.5, -2.0*l],
        [w, -2.0*l, c(3.0), 0.0, b(1.0)],
        [0.0, -0.5, -2.0*l, a(3.0), 0.0],
        [w, 0.0, b(1.0), -2.0*l, c(3.0)],
        [0.0, 0.0, -w, 0.0, -w],
        [2.0*l, w, 0.0, w, 0.0],
        [1.0, 0.0, 2.0*w, 0.0, 0.0],
        [1.0, 0.0, w, 0.0, w],
        [0.0, w, 0.0, -w, 0.0],
        [0.0, 1.0, 2.0*l, -a(2.0), 0.0],
        [w, 2.0*l, -b(2.0), 0.0, -a(2.0)],
        [1.0, 0.0, 0.0, 0.0, 2.0*w],
        [0.0, -a(2.0), 0.0, 1.0, 2.0*l],
        [w, 0.0, -a(2.0), 2.0*l, -b(2.0)],
    ];
    #[rustfmt::skip]
    let m2: [[f64; 5]; 15] = [
        [b(0.0), 0.0, -a(0.0), -b(0.0), 0.0],
        [0.0, -w, 0.0, 0.0, -w],
        [w, 0.0, -w, -w, 0.0],
        [0.0, -w, 0.0, 0.0, w],
        [w, 0.0, 0.0, -w, 0.0],
        [b(2.0), 2.0*l, -b(0.0), -b(0.0), 0.0],
        [-2.0*l, b(2.0), -l, -2.0*l, 0.0],
        [-b(0.0), -2.0*l, c(2.0), b(2.0), -2.0*l],
        [-b(0.0), -2.0*l, b(1.0), b(2.0), 0.0],
        [0.0, 0.0, l, 0.0, b(2.0)],
        [0.0, w, 0.0, 0.0, -w],
        [-w, 0.0, 2.0*w, w, 0.0],
        [-b(0.0), -2.0*l, a(0.0), b(2.0), 2.0*l],
        [0.0, w, 0.0, 0.0, w],
        [-w, 0.0, w, w, 0.0],
    ];
    #[rustfmt::skip]
    let m3: [[f64; 5]; 15] = [
        [0.0, 0.0, -a(0.0), 0.0, 0.0],
        [0.0, 0.0, 0.0, -a(0.0), 0.0],
        [0.0, -b(0.0), 0.0, 0.0, -a(0.0)],
        [-a(0.0), 0.0, 0.0, 0.0, 0.0],
        [0.0, -a(0.0), -w, 0.0, -b(0.0)],
        [0.0, w, -b(0.0), 0.0, w],
        [-w, 0.0, -l, -w, 0.0],
        [0.0, -2.0*w, a(0.0), 0.0, 0.0],
        [0.0, -w, b(1.0), 0.0, -w],
        [w, 0.0, -l, -w, 0.0],
        [a(1.0), 0.0, 0.0, -0.5, 0.0],
        [-2.0*l, c(1.0), w, -2.0*l, b(1.0)],
        [0.0, 0.0, c(2.0), 0.0, -2.0*w],
        [-0.5, 0.0, 0.0, a(1.0), 0.0],
        [-2.0*l, b(1.0), 2.0*w, -2.0*l, c(1.0)],
    ];

    let m = GenMatrix::from_fn(|i, j| match j {
        0..=4 => m1[i][j],
        5..=9 => m2[i][j - 5],
        _ => m3[i][j - 10],
    });
    let mut drift = GenVector::zeros();
    drift[5] = l2;
    drift[7] = -l2;
    drift[8] = -l2;
    drift[11] = w;
    drift[12] = -l2;
    drift[14] = w;
    (m, drift)
}
