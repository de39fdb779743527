use skewshift_core::setgeom::EpsBall;
use skewshift_core::skewshift::{SkewShiftSystem, TorusPoint};
use skewshift_core::sublinear::{
    dyadic_grid, run_experiment, weyl_exponent, ExperimentConfig, Mode, OrbitSource, Target,
};
use skewshift_core::Frequency;

fn source() -> OrbitSource {
    OrbitSource::Skew {
        system: SkewShiftSystem::new(2, Frequency::golden().value).unwrap(),
        x: TorusPoint::from_f64(&[0.1, 0.2]).unwrap(),
    }
}

#[test]
fn coupled_balls_grow_sublinearly() {
    let cfg = ExperimentConfig {
        mode: Mode::Weyl,
        ..ExperimentConfig::default()
    };
    let center = TorusPoint::from_f64(&[0.3, 0.6]).unwrap();
    let report = run_experiment(&source(), &Target::CoupledBall { center }, &dyadic_grid(10, 16), &cfg).unwrap();
    let limit = weyl_exponent(2, 2, 1.001) + 0.1;
    assert!(report.pass, "{report:?}");
    assert!(report.fitted_slope <= limit, "{} > {limit}", report.fitted_slope);
}

#[test]
fn fixed_ball_scales_linearly() {
    let ball = EpsBall::new(TorusPoint::from_f64(&[0.3, 0.6]).unwrap(), 0.05).unwrap();
    let target = Target::Fixed {
        region: &ball,
        degree: 4,
        eta: 0.01,
    };
    let report = run_experiment(&source(), &target, &dyadic_grid(10, 16), &ExperimentConfig::default()).unwrap();
    assert!((report.fitted_slope - 1.0).abs() <= 0.05, "{report:?}");
}
