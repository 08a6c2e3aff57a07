use cslwalk_core::constraints::{evaluate_named, lambda_gravitational, GravityMode};
use cslwalk_core::diffusion::{csl_rms_rotation, table1, time_to_angle};
use cslwalk_core::factors::f_sphere;
use cslwalk_core::mc::{f_mc_oracle, Axis, McConfig, McMode};
use cslwalk_core::{Body, CslParams};

#[test]
fn table1_rows_scale_as_three_halves_power() {
    let rows = table1(&CslParams::GRW).unwrap();
    for row in rows {
        assert!((row[1] / row[0] / 1e3 - 1.0).abs() < 1e-9);
        assert!((row[2] / row[1] / 1e3 - 1.0).abs() < 1e-9);
    }
}

#[test]
fn target_time_inverts_rotation_curve() {
    let csl = CslParams::GRW;
    let t = time_to_angle(&csl, 0.3, 1.0).unwrap();
    let back = csl_rms_rotation(&csl, 0.3, t, 0.0).unwrap();
    assert!((back - 1.0).abs() < 1e-12);
}

#[test]
fn sequential_oracle_matches_sphere_factor() {
    let cfg = McConfig {
        pairs: 200_000,
        seed: 3,
        block_size: 1 << 14,
    };
    let body = Body::sphere(CslParams::GRW.a, 1.0).unwrap();
    let mc = f_mc_oracle(&body, &CslParams::GRW, McMode::Translate(Axis::X), &cfg);
    let q = f_sphere(1.0).unwrap().value;
    assert!(
        (mc.value - q).abs() < 4.0 * mc.est_error,
        "{} vs {q}",
        mc.value
    );
}

#[test]
fn grw_point_and_gravity_scale() {
    let ok = evaluate_named(1e16, 1e-5, &["ge-radiation", "trans-null"]).unwrap();
    assert_eq!(ok, [true, false]);
    assert!(evaluate_named(1e16, 1e-5, &["nope"]).is_err());
    let point = lambda_gravitational(1e-5, GravityMode::Point).unwrap();
    let sphere = lambda_gravitational(1e-5, GravityMode::Sphere { radius: 2e-5 }).unwrap();
    assert!((sphere / point - 0.125).abs() < 1e-12);
}
