use std::f64::consts::{PI, TAU};

use friction_phase::experiments::{run_sweep, Axis, Parameter, SweepSpec, Target};
use friction_phase::model::{decoherence_factor, decoherence_time, decoherence_time_analytic};
use friction_phase::phase::{gp_exact, gp_perturbative, unitary_gp};
use friction_phase::{
    BlochAngle, BlochAngle32, DimensionlessTime, Error, ModelParams, ModelParams32, QuadratureSpec,
    QuadratureSpec32,
};

#[test]
fn single_and_double_precision_agree() {
    let p = ModelParams::new(0.05, 5.0, 0.03, 0.5).unwrap();
    let p32 = ModelParams32::new(0.05, 5.0, 0.03, 0.5).unwrap();
    let a = gp_exact(
        &p,
        BlochAngle::from_pi_fraction(0.2).unwrap(),
        DimensionlessTime::new(TAU).unwrap(),
        &QuadratureSpec::default(),
    )
    .unwrap();
    let b = gp_exact(
        &p32,
        BlochAngle32::from_pi_fraction(0.2).unwrap(),
        friction_phase::model::DimensionlessTime::new(std::f32::consts::TAU).unwrap(),
        &QuadratureSpec32::default(),
    )
    .unwrap();
    assert!((a.phase - b.phase as f64).abs() < 1e-4);
}

#[test]
fn root_finder_matches_closed_form() {
    for v in [0.0, 0.2, 0.6, 0.95] {
        let p = ModelParams::new(0.05, 15.0, 0.03, v).unwrap();
        let a = decoherence_time(&p).unwrap().value();
        let b = decoherence_time_analytic(&p).unwrap().value();
        assert!((a - b).abs() <= 1e-10 * b);
        let r = decoherence_factor(&p, DimensionlessTime::new(a).unwrap());
        assert!((r - (-1.0f64).exp()).abs() < 1e-12);
    }
}

#[test]
fn no_coupling_has_no_decoherence_time() {
    let p = ModelParams::new(0.0, 5.0, 0.03, 0.5).unwrap();
    assert!(matches!(decoherence_time(&p), Err(Error::NoDecoherence)));
}

#[test]
fn perturbative_tracks_exact_for_weak_coupling() {
    let theta = BlochAngle::from_pi_fraction(0.3).unwrap();
    let p = ModelParams::new(1e-3, 1.0, 0.03, 0.3).unwrap();
    let exact = gp_exact(
        &p,
        theta,
        DimensionlessTime::one_period(),
        &QuadratureSpec::default(),
    )
    .unwrap();
    let approx = gp_perturbative(&p, theta.value()).unwrap();
    let unitary = unitary_gp(theta.value());
    assert!(exact.phase > unitary && approx > unitary);
    assert!((exact.phase - approx).abs() < 1e-3 * unitary);
}

#[test]
fn user_sweep_over_time() {
    let spec = SweepSpec::new("time", Target::GpExact)
        .fix(Parameter::Gamma0, 0.05)
        .fix(Parameter::Lambda, 1.0)
        .fix(Parameter::Omega, 0.03)
        .fix(Parameter::Velocity, 0.5)
        .fix(Parameter::Theta, 0.25 * PI)
        .axis(Axis::range(Parameter::Time, 0.5, 4.0 * PI, 16));
    let data = run_sweep(&spec).unwrap();
    let phase = data.column("phase").unwrap();
    assert_eq!(phase.len(), 16);
    assert!(phase.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(run_sweep(&spec).unwrap(), data);
}
