//! Closed-form stationary states against long-time integration, and the
//! stochastic unraveling against its master equation at reduced scale.

use qfb_core::algebra::{conserved_r, trace_distance, DensityMatrix, IDX_10};
use qfb_core::entanglement::concurrence;
use qfb_core::master::{
    analytic_stationary, build_generator, integrate_me_strided, steady_state, GeneratorMode,
};
use qfb_core::trajectories::{
    ensemble_average, simulate_trajectory, Controller, StepScheme, TrajectoryConfig,
};
use qfb_core::Error;

fn initial_with_r(r: f64) -> DensityMatrix {
    // R = 2 on |00⟩, 0 on the singlet; mixtures interpolate linearly
    DensityMatrix::ground().mix(&DensityMatrix::singlet(), r / 2.0)
}

#[test]
fn closed_form_matches_long_time_integration() {
    for &(omega, lambda) in &[(0.4, -0.8), (1.3, 0.6), (3.0, -1.7)] {
        for mode in [GeneratorMode::NoFeedback, GeneratorMode::Markovian] {
            for r in [0.0, 1.0, 2.0] {
                let rho0 = initial_with_r(r);
                let gen = build_generator(omega, lambda, mode).unwrap();
                let sol = integrate_me_strided(&rho0, &gen, 100.0, 1e-2, 10_000).unwrap();
                let st = analytic_stationary(omega, lambda, mode, conserved_r(&rho0)).unwrap();
                let d = trace_distance(sol.last().unwrap(), &st.rho_inf);
                assert!(d < 1e-6, "{mode:?} ({omega}, {lambda}) R = {r}: {d:e}");
            }
        }
    }
}

#[test]
fn linear_solve_matches_closed_form() {
    for &(omega, lambda) in &[(0.4, -0.8), (0.35, 0.15), (4.0, 2.0)] {
        for mode in [GeneratorMode::NoFeedback, GeneratorMode::Markovian] {
            let rho0 = DensityMatrix::basis(IDX_10);
            let gen = build_generator(omega, lambda, mode).unwrap();
            let st = steady_state(&rho0, &gen).unwrap();
            let cf = analytic_stationary(omega, lambda, mode, 1.0).unwrap();
            assert!(trace_distance(&st.rho_inf, &cf.rho_inf) < 1e-10);
            assert!(trace_distance(&st.rho_s, &cf.rho_s) < 1e-10);
        }
    }
}

#[test]
fn excited_initial_state_gives_the_ground_stationary_state() {
    // |11⟩ and |00⟩ both have R = 2
    let gen = build_generator(0.4, 0.0, GeneratorMode::NoFeedback).unwrap();
    let a = steady_state(&DensityMatrix::excited(), &gen).unwrap();
    let b = steady_state(&DensityMatrix::ground(), &gen).unwrap();
    assert!(trace_distance(&a.rho_inf, &b.rho_inf) < 1e-10);
    assert!((concurrence(&a.rho_inf).value - 0.11).abs() < 0.01);
}

fn unraveling_error(controller: Controller, mode: GeneratorMode, lambda: f64, scheme: StepScheme) -> (f64, f64) {
    let rho0 = DensityMatrix::ground();
    let cfg = TrajectoryConfig::new(1e-3, 4.0).with_stride(1000).with_scheme(scheme);
    let ens = ensemble_average(&rho0, 0.4, controller, &cfg, 400, 21).unwrap();
    let gen = build_generator(0.4, lambda, mode).unwrap();
    let sol = integrate_me_strided(&rho0, &gen, 4.0, 1e-3, 1000).unwrap();
    let mut worst = (0.0_f64, 0.0_f64);
    for (k, mean) in ens.mean_state.iter().enumerate().skip(1) {
        let d = trace_distance(mean, &sol.states[k]);
        if d / ens.standard_error[k] > worst.0 / worst.1.max(f64::MIN_POSITIVE) {
            worst = (d, ens.standard_error[k]);
        }
    }
    worst
}

#[test]
fn ensemble_mean_follows_master_equation() {
    let (d, se) = unraveling_error(Controller::None, GeneratorMode::NoFeedback, 0.0, StepScheme::PositiveMap);
    assert!(d < 4.0 * se && d < 0.05, "{d} vs se {se}");
}

#[test]
fn euler_maruyama_loses_positivity_on_long_runs() {
    // strong-order-½ error piles up along nearly pure conditioned states
    let cfg = TrajectoryConfig::new(1e-4, 2.0).with_scheme(StepScheme::EulerMaruyama);
    let res = simulate_trajectory(&DensityMatrix::ground(), 5.0, Controller::None, &cfg, 1);
    assert!(matches!(res, Err(Error::StepInstability { .. })), "{res:?}");
    let cfg = cfg.with_scheme(StepScheme::PositiveMap);
    let rec = simulate_trajectory(&DensityMatrix::ground(), 5.0, Controller::None, &cfg, 1).unwrap();
    assert!(rec.states.iter().all(|s| s.min_eigenvalue() > -1e-10));
}

#[test]
fn trajectory_markovian_feedback_follows_its_master_equation() {
    let ctrl = Controller::Markovian { lambda: -0.8 };
    let (d, se) = unraveling_error(ctrl, GeneratorMode::Markovian, -0.8, StepScheme::PositiveMap);
    assert!(d < 4.0 * se && d < 0.05, "{d} vs se {se}");
}

#[test]
fn ensembles_are_identical_across_thread_counts() {
    let cfg = TrajectoryConfig::new(1e-3, 0.5).with_stride(50);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            ensemble_average(&DensityMatrix::excited(), 2.0, Controller::bayesian(0.7), &cfg, 150, 5)
                .unwrap()
        })
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a, b);
}
