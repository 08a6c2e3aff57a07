//! Collapse-induced (CSL) and Brownian random walk of small bodies.
//!
//! Everything is in CGS units. The crate is `no_std` (with `alloc`) and holds
//! the formulas, geometric collapse factors, quadrature, the Monte Carlo and
//! stochastic-simulation oracles, and the (λ, a) constraint map. File formats,
//! the CLI and thread-parallel drivers live in the `cslwalk` crate.
#![no_std]
// `num_traits::Float` supplies libm-backed math without std; when std is
// also in the build graph the same calls resolve to inherent methods.
#![allow(unused_imports)]

extern crate alloc;

pub mod body;
pub mod brownian;
pub mod constants;
pub mod constraints;
pub mod diffusion;
pub mod environment;
pub mod error;
pub mod factors;
pub mod mc;
pub mod quad;
pub mod rng;
pub mod sde;
pub mod special;
pub mod stats;
pub mod units;
pub mod wavepacket;

pub use body::{Body, BodyDerived, Shape};
pub use constants::{CslParams, PhysicalConstants};
pub use environment::Environment;
pub use error::{Error, Result};
