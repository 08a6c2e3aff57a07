//! Quadrature against the Monte Carlo oracle for every disc factor, on the
//! points of {0.25, 1, 4}² that satisfy the body bound b ≤ 2L (β ≤ 2α),
//! plus three intermediate points to keep nine in total.

use cslwalk::parallel::mc_factor;
use cslwalk_core::factors::{
    f_disc_edge, f_disc_perp, f_rot_disc, f_sphere, DiscAspect, FactorResult,
};
use cslwalk_core::mc::{Axis, McConfig, McMode};
use cslwalk_core::{Body, CslParams};

const GRID: [f64; 3] = [0.25, 1.0, 4.0];
const POINTS: [(f64, f64); 9] = [
    (0.25, 0.25),
    (1.0, 0.25),
    (1.0, 1.0),
    (4.0, 0.25),
    (4.0, 1.0),
    (4.0, 4.0),
    (0.5, 1.0),
    (2.0, 0.25),
    (2.0, 4.0),
];
const PAIRS: u64 = 8_000_000;

fn cfg(seed: u64) -> McConfig {
    McConfig {
        pairs: PAIRS,
        seed,
        block_size: 1 << 16,
    }
}

fn z_score(q: &FactorResult, mc: &FactorResult) -> f64 {
    (q.value - mc.value).abs() / mc.est_error.hypot(q.est_error)
}

fn sweep(
    mode: McMode,
    factor: fn(DiscAspect) -> cslwalk_core::Result<FactorResult>,
) -> Vec<(f64, f64, f64)> {
    let a = CslParams::GRW.a;
    let mut out = Vec::new();
    for (k, &(alpha, beta)) in POINTS.iter().enumerate() {
        let body = Body::disc(2.0 * alpha * a, 2.0 * beta * a, 1.0).unwrap();
        let q = factor(DiscAspect::new(alpha, beta).unwrap()).unwrap();
        let mc = mc_factor(&body, &CslParams::GRW, mode, &cfg(100 + k as u64));
        out.push((alpha, beta, z_score(&q, &mc)));
    }
    out
}

fn assert_sweep(name: &str, zs: &[(f64, f64, f64)]) {
    for &(alpha, beta, z) in zs {
        println!("{name} alpha={alpha} beta={beta} z={z:.2}");
    }
    let worst = zs.iter().map(|z| z.2).fold(0.0, f64::max);
    assert!(worst <= 3.0, "{name}: worst {worst:.2} SE");
}

#[test]
fn perpendicular_translation() {
    assert_sweep("perp", &sweep(McMode::Translate(Axis::Z), f_disc_perp));
}

#[test]
fn edge_translation() {
    assert_sweep("edge", &sweep(McMode::Translate(Axis::X), f_disc_edge));
}

#[test]
fn rotation_about_diameter() {
    assert_sweep("rot", &sweep(McMode::Rotate, f_rot_disc));
}

#[test]
fn sphere_translation() {
    for (k, x) in GRID.into_iter().enumerate() {
        let body = Body::sphere(x * CslParams::GRW.a, 1.0).unwrap();
        let q = f_sphere(x).unwrap();
        let mc = mc_factor(
            &body,
            &CslParams::GRW,
            McMode::Translate(Axis::Y),
            &cfg(7 + k as u64),
        );
        let z = z_score(&q, &mc);
        assert!(z <= 3.0, "x={x}: {z:.2} SE");
    }
}
