//! Rayon drivers. Work is split into the same blocks (Monte Carlo) or chunks
//! (trajectory ensembles) as the sequential core routines, each with its own
//! random stream, and partial results are merged in index order. The output
//! is therefore bit-identical to the sequential run for any worker count.

use cslwalk_core::diffusion::WavepacketEquilibrium;
use cslwalk_core::mc::{self, McConfig, McMode};
use cslwalk_core::sde::{self, EnsemblePartial, EnsembleStats, SimConfig};
use cslwalk_core::stats::Moments;
use cslwalk_core::{Body, CslParams, Result};
use rayon::prelude::*;

pub fn mc_factor(
    body: &Body,
    csl: &CslParams,
    mode: McMode,
    cfg: &McConfig,
) -> cslwalk_core::factors::FactorResult {
    let parts: Vec<Moments> = (0..cfg.blocks())
        .into_par_iter()
        .map(|k| mc::mc_block(body, csl, mode, cfg, k))
        .collect();
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    mc::finish(&total)
}

pub fn simulate_ensemble(eq: &WavepacketEquilibrium, cfg: &SimConfig) -> Result<EnsembleStats> {
    cfg.validate(eq)?;
    let parts: Vec<EnsemblePartial> = (0..cfg.chunks())
        .into_par_iter()
        .map(|c| sde::simulate_chunk(eq, cfg, c))
        .collect();
    let mut iter = parts.into_iter();
    let mut total = iter
        .next()
        .expect("validated config has at least one chunk");
    for p in iter {
        total.merge(&p);
    }
    Ok(sde::finish(eq, cfg, &total))
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cslwalk_core::diffusion::equilibrium_width;
    use cslwalk_core::factors::f_sphere;
    use cslwalk_core::mc::f_mc_oracle;
    use cslwalk_core::sde::SdeMethod;

    #[test]
    fn mc_matches_sequential_bits() {
        let body = Body::disc(2e-5, 0.5e-5, 1.0).unwrap();
        let cfg = McConfig {
            pairs: 50_000,
            seed: 3,
            block_size: 4096,
        };
        let seq = f_mc_oracle(&body, &CslParams::GRW, McMode::Rotate, &cfg);
        for w in [1, 3] {
            let par = with_workers(w, || {
                mc_factor(&body, &CslParams::GRW, McMode::Rotate, &cfg)
            });
            assert_eq!(par.value.to_bits(), seq.value.to_bits());
            assert_eq!(par.est_error.to_bits(), seq.est_error.to_bits());
        }
    }

    #[test]
    fn ensemble_matches_sequential_bits() {
        let body = Body::sphere(1e-5, 1.0).unwrap();
        let f = f_sphere(1.0).unwrap().value;
        let eq = equilibrium_width(&CslParams::GRW, &body, f).unwrap();
        let mut cfg = SimConfig::for_equilibrium(&eq, 600, 11, SdeMethod::ExactB15);
        cfg.t_end = eq.tau_s;
        let seq = sde::simulate_ensemble(&eq, &cfg).unwrap();
        let par = with_workers(4, || simulate_ensemble(&eq, &cfg)).unwrap();
        assert_eq!(seq, par);
    }
}
