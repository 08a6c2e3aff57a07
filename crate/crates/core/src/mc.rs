//! Monte Carlo evaluation of the defining double volume integrals of the
//! collapse factors, used as an independent check on the closed forms and
//! quadratures in [`crate::factors`].
//!
//! Pairs of points are drawn uniformly in the body. Translation along axis j
//! averages Φ(d)(1 − d_j²/2a²) with Φ = exp(−d²/4a²). Rotation about the
//! body's x axis averages 2(aM/I)²[z⊥·z'⊥ − (z⊥×z'⊥)²/2a²]Φ with
//! z⊥ = (y, z). Disc faces are normal to z.
//!
//! Samples are split into fixed-size blocks; block k draws from stream k of
//! the seed, so any partition of blocks across workers, merged in block
//! order, reproduces the sequential result bit for bit.

use core::f64::consts::PI;

use num_traits::Float;
use rand_core::RngCore;

use crate::body::{Body, Shape};
use crate::constants::CslParams;
use crate::factors::{FactorResult, Method};
use crate::rng::{stream, uniform};
use crate::stats::Moments;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMode {
    Translate(Axis),
    /// About the x axis (a diameter lying in a disc's face).
    Rotate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub pairs: u64,
    pub seed: u64,
    pub block_size: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            pairs: 10_000_000,
            seed: 0,
            block_size: 1 << 16,
        }
    }
}

impl McConfig {
    pub fn blocks(&self) -> u64 {
        self.pairs.div_ceil(self.block_size)
    }

    fn block_len(&self, block: u64) -> u64 {
        let start = block * self.block_size;
        self.block_size.min(self.pairs - start)
    }
}

fn sample_point<R: RngCore>(shape: Shape, rng: &mut R) -> [f64; 3] {
    match shape {
        Shape::Sphere { radius } => loop {
            let p = [
                radius * (2.0 * uniform(rng) - 1.0),
                radius * (2.0 * uniform(rng) - 1.0),
                radius * (2.0 * uniform(rng) - 1.0),
            ];
            if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= radius * radius {
                return p;
            }
        },
        Shape::Disc { radius, thickness } => {
            let r = radius * uniform(rng).sqrt();
            let phi = 2.0 * PI * uniform(rng);
            let z = thickness * (uniform(rng) - 0.5);
            [r * phi.cos(), r * phi.sin(), z]
        }
    }
}

/// Integrand for one pair of points, including the rotational prefactor.
fn pair_value(p: &[f64; 3], q: &[f64; 3], a: f64, mode: McMode, rot_scale: f64) -> f64 {
    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let phi = (-d2 / (4.0 * a * a)).exp();
    match mode {
        McMode::Translate(axis) => {
            let dj = match axis {
                Axis::X => d[0],
                Axis::Y => d[1],
                Axis::Z => d[2],
            };
            phi * (1.0 - dj * dj / (2.0 * a * a))
        }
        McMode::Rotate => {
            let dot = p[1] * q[1] + p[2] * q[2];
            let cross = p[1] * q[2] - p[2] * q[1];
            rot_scale * (dot - cross * cross / (2.0 * a * a)) * phi
        }
    }
}

fn rotation_scale(body: &Body, a: f64) -> f64 {
    let s = a * body.mass() / body.moment_of_inertia();
    2.0 * s * s
}

/// Moments of the integrand over block `block` of the configuration.
pub fn mc_block(body: &Body, csl: &CslParams, mode: McMode, cfg: &McConfig, block: u64) -> Moments {
    let mut rng = stream(cfg.seed, block);
    let scale = rotation_scale(body, csl.a);
    let mut m = Moments::default();
    for _ in 0..cfg.block_len(block) {
        let p = sample_point(body.shape, &mut rng);
        let q = sample_point(body.shape, &mut rng);
        m.push(pair_value(&p, &q, csl.a, mode, scale));
    }
    m
}

pub fn finish(m: &Moments) -> FactorResult {
    FactorResult {
        value: m.mean(),
        method: Method::MonteCarlo,
        est_error: m.std_error(),
    }
}

/// Sequential evaluation over all blocks, in order.
pub fn f_mc_oracle(body: &Body, csl: &CslParams, mode: McMode, cfg: &McConfig) -> FactorResult {
    let mut total = Moments::default();
    for k in 0..cfg.blocks() {
        total.merge(&mc_block(body, csl, mode, cfg, k));
    }
    finish(&total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::{f_disc_edge, f_disc_perp, f_rot_disc, f_sphere, DiscAspect};

    fn cfg(pairs: u64, seed: u64) -> McConfig {
        McConfig {
            pairs,
            seed,
            block_size: 1 << 12,
        }
    }

    fn agrees(mc: FactorResult, exact: FactorResult) -> bool {
        let se = (mc.est_error.powi(2) + exact.est_error.powi(2)).sqrt();
        (mc.value - exact.value).abs() < 3.0 * se
    }

    #[test]
    fn sphere_translation() {
        let csl = CslParams::GRW;
        let body = Body::sphere(csl.a, 1.0).unwrap();
        let mc = f_mc_oracle(&body, &csl, McMode::Translate(Axis::Z), &cfg(400_000, 1));
        assert!(agrees(mc, f_sphere(1.0).unwrap()), "{mc:?}");
    }

    #[test]
    fn sphere_rotation_is_zero() {
        let csl = CslParams::GRW;
        let body = Body::sphere(csl.a, 1.0).unwrap();
        let mc = f_mc_oracle(&body, &csl, McMode::Rotate, &cfg(400_000, 2));
        assert!(mc.value.abs() < 3.0 * mc.est_error, "{mc:?}");
    }

    #[test]
    fn disc_translation_and_rotation() {
        let csl = CslParams::GRW;
        let body = Body::disc(2.0 * csl.a, 0.5 * csl.a, 1.0).unwrap();
        let aspect = DiscAspect::new(1.0, 0.25).unwrap();
        let c = cfg(400_000, 3);
        assert!(agrees(
            f_mc_oracle(&body, &csl, McMode::Translate(Axis::Z), &c),
            f_disc_perp(aspect).unwrap()
        ));
        assert!(agrees(
            f_mc_oracle(&body, &csl, McMode::Translate(Axis::X), &c),
            f_disc_edge(aspect).unwrap()
        ));
        assert!(agrees(
            f_mc_oracle(&body, &csl, McMode::Rotate, &c),
            f_rot_disc(aspect).unwrap()
        ));
    }

    #[test]
    fn block_partition_is_irrelevant() {
        let csl = CslParams::GRW;
        let body = Body::disc(2e-5, 0.5e-5, 1.0).unwrap();
        let c = cfg(20_000, 9);
        let whole = f_mc_oracle(&body, &csl, McMode::Rotate, &c);
        let mut rev = Moments::default();
        let parts: alloc::vec::Vec<_> = (0..c.blocks())
            .map(|k| mc_block(&body, &csl, McMode::Rotate, &c, k))
            .collect();
        for p in &parts {
            rev.merge(p);
        }
        assert_eq!(finish(&rev), whole);
        assert_eq!(f_mc_oracle(&body, &csl, McMode::Rotate, &c), whole);
    }

    #[test]
    fn partial_last_block() {
        let c = cfg(10_000, 0);
        assert_eq!(c.blocks(), 3);
        assert_eq!(c.block_len(2), 10_000 - 2 * 4096);
    }
}
