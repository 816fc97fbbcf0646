//! The hard-coded 15×15 generators against numerical Jacobians of the
//! operator-level right-hand sides.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfb_core::algebra::{vectorize, DensityMatrix, StateVector15};
use qfb_core::master::{build_generator, vector_rhs, GenMatrix, GenVector, GeneratorMode};

/// Central-difference Jacobian and offset of the (affine) vector field.
fn numerical_generator(omega: f64, lambda: f64, mode: GeneratorMode) -> (GenMatrix, GenVector) {
    let h = 1e-3;
    let base = StateVector15::zeros();
    let mut m = GenMatrix::zeros();
    for j in 0..15 {
        let mut plus = base;
        let mut minus = base;
        plus[j] += h;
        minus[j] -= h;
        let col = (vector_rhs(&plus, omega, lambda, mode) - vector_rhs(&minus, omega, lambda, mode)) / (2.0 * h);
        m.set_column(j, &col);
    }
    // v̇ = M v − w, so w = −v̇(0)
    let w = -vector_rhs(&base, omega, lambda, mode);
    (m, w)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn tables_match_numerical_jacobians() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let omega = rng.random_range(-5.0..5.0);
        let lambda = rng.random_range(-2.0..2.0);
        for mode in [GeneratorMode::NoFeedback, GeneratorMode::Markovian] {
            let gen = build_generator(omega, lambda, mode).unwrap();
            let (m, w) = numerical_generator(omega, lambda, mode);
            let dm = max_diff(gen.m.as_slice(), m.as_slice());
            let dw = max_diff(gen.w.as_slice(), w.as_slice());
            assert!(dm < 1e-8 && dw < 1e-8, "{mode:?} at ({omega}, {lambda}): {dm:e}, {dw:e}");
        }
    }
}

#[test]
fn feedback_table_at_zero_strength_is_the_plain_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let omega = rng.random_range(-5.0..5.0);
        let a = build_generator(omega, 0.0, GeneratorMode::NoFeedback).unwrap();
        let b = build_generator(omega, 0.0, GeneratorMode::Markovian).unwrap();
        assert!(max_diff(a.m.as_slice(), b.m.as_slice()) <= 1e-14);
        assert!(max_diff(a.w.as_slice(), b.w.as_slice()) <= 1e-14);
    }
}

#[test]
fn generator_reproduces_rhs_on_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..50 {
        let rho = DensityMatrix::random(&mut rng, 1 + k % 4);
        let omega = rng.random_range(-5.0..5.0);
        let lambda = rng.random_range(-2.0..2.0);
        let v = vectorize(&rho);
        for mode in [GeneratorMode::NoFeedback, GeneratorMode::Markovian] {
            let gen = build_generator(omega, lambda, mode).unwrap();
            let d = max_diff(gen.apply(&v).as_slice(), vector_rhs(&v, omega, lambda, mode).as_slice());
            assert!(d < 1e-10, "{d:e}");
        }
    }
}

#[test]
fn generators_are_singular() {
    // R conservation gives a left null vector for every (ω, λ)
    for &(w, l) in &[(0.4, -0.8), (2.0, 1.0), (0.1, 0.0)] {
        for mode in [GeneratorMode::NoFeedback, GeneratorMode::Markovian] {
            let sv = build_generator(w, l, mode).unwrap().singular_values();
            assert!(sv.min() < 1e-12 * sv.max(), "{mode:?} ({w}, {l})");
        }
    }
}
