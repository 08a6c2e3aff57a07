//! Ensemble simulation of the centre-of-mass drift once the wavepacket has
//! reached its equilibrium width. One axis; the three axes are independent.
//!
//! With b = b_R + i b_I the packet centre, b(0) = 0 and B a Wiener process,
//!
//!   db_R = (b_I/τ_s) dt + c dB,   db_I = c dB,   c = s_inf/(2τ_s^{1/2}),
//!
//! and ⟨Q⟩ = b_R + b_I, ⟨P⟩ = ħ b_I/s_inf². Work is done in units of s_inf
//! and τ_s, where c = 1/2.
//!
//! Trajectory k draws from random stream k of the seed. Trajectories are
//! grouped in fixed chunks whose partial sums are merged in chunk order, so
//! the result does not depend on how chunks are scheduled.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::constants::CGS;
use crate::diffusion::WavepacketEquilibrium;
use crate::error::{Error, Result};
use crate::rng::{normal, stream};
use crate::stats::Moments;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdeMethod {
    EulerMaruyama,
    /// Samples (B, ∫B) exactly on the grid.
    ExactB15,
}

impl SdeMethod {
    pub fn name(self) -> &'static str {
        match self {
            SdeMethod::EulerMaruyama => "euler-maruyama",
            SdeMethod::ExactB15 => "exact-b15",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_traj: u64,
    /// Step, s.
    pub dt: f64,
    /// End time, s.
    pub t_end: f64,
    pub seed: u64,
    pub method: SdeMethod,
    /// Record statistics every this many steps.
    pub record_every: usize,
    pub chunk_size: u64,
}

impl SimConfig {
    /// dt = τ_s/100 up to 10τ_s, recording every 10 steps.
    pub fn for_equilibrium(
        eq: &WavepacketEquilibrium,
        n_traj: u64,
        seed: u64,
        method: SdeMethod,
    ) -> Self {
        SimConfig {
            n_traj,
            dt: eq.tau_s / 100.0,
            t_end: 10.0 * eq.tau_s,
            seed,
            method,
            record_every: 10,
            chunk_size: 256,
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn chunks(&self) -> u64 {
        self.n_traj.div_ceil(self.chunk_size)
    }

    fn record_steps(&self) -> usize {
        self.steps() / self.record_every
    }

    pub fn validate(&self, eq: &WavepacketEquilibrium) -> Result<()> {
        if self.n_traj < 100 {
            return Err(Error::InvalidParameter {
                name: "n_traj",
                reason: "at least 100 trajectories are required",
            });
        }
        if !(self.dt > 0.0) || !(self.t_end >= self.dt) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: "need 0 < dt <= t_end",
            });
        }
        if self.method == SdeMethod::EulerMaruyama && self.dt > eq.tau_s / 50.0 * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: "euler-maruyama needs dt <= tau_s/50",
            });
        }
        if self.record_every == 0 || self.record_steps() == 0 || self.chunk_size == 0 {
            return Err(Error::InvalidParameter {
                name: "record_every",
                reason: "must be positive and leave at least one recorded time",
            });
        }
        Ok(())
    }
}

/// (b_R, b_I) at time t, cm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub b_real: f64,
    pub b_imag: f64,
    pub t: f64,
}

/// Dimensionless one-axis path in units of s_inf and τ_s.
#[derive(Debug, Clone, Copy, Default)]
struct Path {
    b: f64,
    int_b: f64,
    b_re: f64,
    b_im: f64,
}

impl Path {
    /// Advance by h with two standard normals; the exact scheme uses both,
    /// Euler–Maruyama only the first, so the two see the same increments.
    fn step(&mut self, method: SdeMethod, h: f64, z1: f64, z2: f64) {
        let db = h.sqrt() * z1;
        match method {
            SdeMethod::ExactB15 => {
                self.int_b += self.b * h + 0.5 * h * db + h * h.sqrt() * z2 / 12.0f64.sqrt();
                self.b += db;
                self.b_im = 0.5 * self.b;
                self.b_re = 0.5 * (self.int_b + self.b);
            }
            SdeMethod::EulerMaruyama => {
                self.b_re += self.b_im * h + 0.5 * db;
                self.b_im += 0.5 * db;
            }
        }
    }

    fn q(&self) -> f64 {
        self.b_re + self.b_im
    }
}

/// Ordinary least squares projector for q²(u) ≈ c₁u + c₂u² + c₃u³ on the
/// recorded times: rows of (XᵀX)⁻¹Xᵀ.
fn ols_projector(u: &[f64]) -> [Vec<f64>; 3] {
    let mut xtx = [[0.0; 3]; 3];
    for &t in u {
        let x = [t, t * t, t * t * t];
        for i in 0..3 {
            for j in 0..3 {
                xtx[i][j] += x[i] * x[j];
            }
        }
    }
    let inv = invert3(xtx);
    let mut rows = [vec![0.0; u.len()], vec![0.0; u.len()], vec![0.0; u.len()]];
    for (k, &t) in u.iter().enumerate() {
        let x = [t, t * t, t * t * t];
        for i in 0..3 {
            rows[i][k] = (0..3).map(|j| inv[i][j] * x[j]).sum();
        }
    }
    rows
}

fn invert3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
    };
    let det = m[0][0] * c(0, 0) + m[0][1] * c(0, 1) + m[0][2] * c(0, 2);
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[j][i] = c(i, j) / det;
        }
    }
    inv
}

/// Per-time and per-coefficient moments from a set of trajectories, in
/// dimensionless units.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsemblePartial {
    pub q: Vec<Moments>,
    pub q2: Vec<Moments>,
    pub p2: Vec<Moments>,
    pub coef: [Moments; 3],
}

impl EnsemblePartial {
    fn new(n: usize) -> Self {
        EnsemblePartial {
            q: vec![Moments::default(); n],
            q2: vec![Moments::default(); n],
            p2: vec![Moments::default(); n],
            coef: [Moments::default(); 3],
        }
    }

    pub fn merge(&mut self, other: &EnsemblePartial) {
        for (a, b) in self.q.iter_mut().zip(&other.q) {
            a.merge(b);
        }
        for (a, b) in self.q2.iter_mut().zip(&other.q2) {
            a.merge(b);
        }
        for (a, b) in self.p2.iter_mut().zip(&other.p2) {
            a.merge(b);
        }
        for (a, b) in self.coef.iter_mut().zip(&other.coef) {
            a.merge(b);
        }
    }
}

fn recorded_u(eq: &WavepacketEquilibrium, cfg: &SimConfig) -> Vec<f64> {
    let h = cfg.dt / eq.tau_s;
    (1..=cfg.record_steps())
        .map(|k| (k * cfg.record_every) as f64 * h)
        .collect()
}

/// Simulates the trajectories of chunk `chunk`.
pub fn simulate_chunk(eq: &WavepacketEquilibrium, cfg: &SimConfig, chunk: u64) -> EnsemblePartial {
    let u = recorded_u(eq, cfg);
    let proj = ols_projector(&u);
    let h = cfg.dt / eq.tau_s;
    let steps = cfg.record_steps() * cfg.record_every;
    let mut acc = EnsemblePartial::new(u.len());
    let first = chunk * cfg.chunk_size;
    let last = (first + cfg.chunk_size).min(cfg.n_traj);
    let mut q2_path = vec![0.0; u.len()];
    for traj in first..last {
        let mut rng = stream(cfg.seed, traj);
        let mut path = Path::default();
        for k in 1..=steps {
            let (z1, z2) = (normal(&mut rng), normal(&mut rng));
            path.step(cfg.method, h, z1, z2);
            if k % cfg.record_every == 0 {
                let i = k / cfg.record_every - 1;
                let q = path.q();
                acc.q[i].push(q);
                acc.q2[i].push(q * q);
                acc.p2[i].push(path.b_im * path.b_im);
                q2_path[i] = q * q;
            }
        }
        for (c, row) in acc.coef.iter_mut().zip(&proj) {
            c.push(row.iter().zip(&q2_path).map(|(a, b)| a * b).sum());
        }
    }
    acc
}

/// Ensemble averages with standard errors, in CGS units.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub n_traj: u64,
    pub method: SdeMethod,
    pub s_inf: f64,
    pub tau_s: f64,
    pub times: Vec<f64>,
    pub mean_q: Vec<f64>,
    pub se_mean_q: Vec<f64>,
    pub mean_sq_q: Vec<f64>,
    pub se_mean_sq_q: Vec<f64>,
    pub mean_sq_p: Vec<f64>,
    pub se_mean_sq_p: Vec<f64>,
    /// Least-squares coefficients of ⟨Q⟩² ≈ s²(c₁u + c₂u² + c₃u³), u = t/τ_s,
    /// as (mean, standard error) over trajectories. Expected (1, 1/2, 1/12).
    pub fit: [(f64, f64); 3],
}

impl EnsembleStats {
    /// E⟨Q⟩²(t) = s²[u + u²/2 + u³/12]
    pub fn expected_mean_sq_q(&self, t: f64) -> f64 {
        let u = t / self.tau_s;
        self.s_inf * self.s_inf * (u + u * u / 2.0 + u * u * u / 12.0)
    }

    /// E⟨P⟩²(t) = ħ²t/(4s²τ_s)
    pub fn expected_mean_sq_p(&self, t: f64) -> f64 {
        CGS.hbar * CGS.hbar * t / (4.0 * self.s_inf * self.s_inf * self.tau_s)
    }
}

pub fn finish(eq: &WavepacketEquilibrium, cfg: &SimConfig, acc: &EnsemblePartial) -> EnsembleStats {
    let s = eq.s_inf;
    let p_unit = CGS.hbar / s;
    let u = recorded_u(eq, cfg);
    let q_scale = s * s;
    let p_scale = p_unit * p_unit;
    EnsembleStats {
        n_traj: cfg.n_traj,
        method: cfg.method,
        s_inf: s,
        tau_s: eq.tau_s,
        times: u.iter().map(|u| u * eq.tau_s).collect(),
        mean_q: acc.q.iter().map(|m| s * m.mean()).collect(),
        se_mean_q: acc.q.iter().map(|m| s * m.std_error()).collect(),
        mean_sq_q: acc.q2.iter().map(|m| q_scale * m.mean()).collect(),
        se_mean_sq_q: acc.q2.iter().map(|m| q_scale * m.std_error()).collect(),
        mean_sq_p: acc.p2.iter().map(|m| p_scale * m.mean()).collect(),
        se_mean_sq_p: acc.p2.iter().map(|m| p_scale * m.std_error()).collect(),
        fit: [0, 1, 2].map(|i| (acc.coef[i].mean(), acc.coef[i].std_error())),
    }
}

/// Sequential run over all chunks, in order.
pub fn simulate_ensemble(eq: &WavepacketEquilibrium, cfg: &SimConfig) -> Result<EnsembleStats> {
    cfg.validate(eq)?;
    let mut total = EnsemblePartial::new(cfg.record_steps());
    for c in 0..cfg.chunks() {
        total.merge(&simulate_chunk(eq, cfg, c));
    }
    Ok(finish(eq, cfg, &total))
}

/// Final state of a single trajectory, for inspection.
pub fn trajectory_end(eq: &WavepacketEquilibrium, cfg: &SimConfig, traj: u64) -> TrajectoryState {
    let mut rng = stream(cfg.seed, traj);
    let mut path = Path::default();
    let h = cfg.dt / eq.tau_s;
    let steps = cfg.steps();
    for _ in 0..steps {
        let (z1, z2) = (normal(&mut rng), normal(&mut rng));
        path.step(cfg.method, h, z1, z2);
    }
    TrajectoryState {
        b_real: eq.s_inf * path.b_re,
        b_imag: eq.s_inf * path.b_im,
        t: steps as f64 * cfg.dt,
    }
}

/// Root-mean-square pathwise gap between Euler–Maruyama and the exact scheme
/// in b_R at time `t_end` (units of s_inf, τ_s), for step `h` and `h/2`,
/// driving all three with the same fine-grid Brownian increments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongOrder {
    pub coarse: f64,
    pub fine: f64,
}

impl StrongOrder {
    pub fn ratio(&self) -> f64 {
        self.coarse / self.fine
    }
}

pub fn strong_error(h: f64, t_end: f64, n_paths: u64, seed: u64) -> StrongOrder {
    let fine_h = 0.5 * h;
    let coarse_steps = (t_end / h).round() as usize;
    let (mut coarse, mut fine) = (Moments::default(), Moments::default());
    for p in 0..n_paths {
        let mut rng = stream(seed, p);
        let (mut exact, mut em_fine, mut em_coarse) =
            (Path::default(), Path::default(), Path::default());
        for _ in 0..coarse_steps {
            let mut db_sum = 0.0;
            for _ in 0..2 {
                let (z1, z2) = (normal(&mut rng), normal(&mut rng));
                exact.step(SdeMethod::ExactB15, fine_h, z1, z2);
                em_fine.step(SdeMethod::EulerMaruyama, fine_h, z1, z2);
                db_sum += fine_h.sqrt() * z1;
            }
            em_coarse.step(SdeMethod::EulerMaruyama, h, db_sum / h.sqrt(), 0.0);
        }
        coarse.push((em_coarse.b_re - exact.b_re).powi(2));
        fine.push((em_fine.b_re - exact.b_re).powi(2));
    }
    StrongOrder {
        coarse: coarse.mean().sqrt(),
        fine: fine.mean().sqrt(),
    }
}
