//! Monte Carlo oracle for the closed forms.
//!
//! Samples are split into fixed-size chunks. Chunk `k` draws from a ChaCha8
//! stream keyed by `seed`, on stream `stream_id`, starting at word position
//! `k·2³²`, so every sample's randomness depends only on its index. Chunk
//! statistics are merged pairwise in index order, which makes the estimate
//! bit-identical for any number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{GaseError, Result};

/// Samples per chunk (the unit of parallel work and of stream positioning).
pub const CHUNK: u64 = 8192;

/// Largest excluded-tail fraction accepted by [`mc_affected_area`].
pub const TAIL_LIMIT: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub stream_id: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, stream_id: u64) -> Result<Self> {
        if samples < 1 {
            return Err(GaseError::domain("samples must be >= 1", 0.0));
        }
        Ok(Self {
            samples,
            seed,
            stream_id,
        })
    }

    pub fn with_stream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }

    pub fn with_samples(self, samples: u64) -> Self {
        Self {
            samples: samples.max(1),
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub stream_id: u64,
}

impl McEstimate {
    /// (value − mean)/std_error; 0 when both agree exactly.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = value - self.mean;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }

    pub fn within_sigma(&self, value: f64, k: f64) -> bool {
        (value - self.mean).abs() <= k * self.std_error
    }
}

/// Random source handed to samplers.
pub struct Draws {
    rng: ChaCha8Rng,
}

impl Draws {
    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Unit-mean exponential by inversion.
    pub fn exponential(&mut self) -> f64 {
        -(-self.uniform()).ln_1p()
    }

    /// Exponential with the given mean (a Rayleigh-faded power or SNR).
    pub fn exponential_mean(&mut self, mean: f64) -> f64 {
        mean * self.exponential()
    }

    /// Uniform point in the disk of radius `radius` centred at the origin.
    pub fn point_in_disk(&mut self, radius: f64) -> (f64, f64) {
        let r = radius * self.uniform().sqrt();
        let th = std::f64::consts::TAU * self.uniform();
        (r * th.cos(), r * th.sin())
    }
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments {
        n: 0,
        mean: 0.0,
        m2: 0.0,
    };

    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * (other.n as f64 / n as f64);
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64 / n as f64);
        Moments { n, mean, m2 }
    }
}

fn chunk_rng(cfg: &McConfig, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(cfg.stream_id);
    rng.set_word_pos(u128::from(chunk) << 32);
    rng
}

fn pairwise(mut parts: Vec<Moments>) -> Moments {
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|p| if p.len() == 2 { p[0].merge(p[1]) } else { p[0] })
            .collect();
    }
    parts.pop().unwrap_or(Moments::EMPTY)
}

fn run<F>(cfg: &McConfig, f: F) -> Moments
where
    F: Fn(&mut Draws) -> f64 + Sync,
{
    let n_chunks = cfg.samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..n_chunks)
        .into_par_iter()
        .map(|k| {
            let mut draws = Draws {
                rng: chunk_rng(cfg, k),
            };
            let len = CHUNK.min(cfg.samples - k * CHUNK);
            let mut m = Moments::EMPTY;
            for _ in 0..len {
                m.push(f(&mut draws));
            }
            m
        })
        .collect();
    pairwise(parts)
}

fn estimate(cfg: &McConfig, mean: f64, std_error: f64) -> McEstimate {
    McEstimate {
        mean,
        std_error,
        samples: cfg.samples,
        seed: cfg.seed,
        stream_id: cfg.stream_id,
    }
}

/// Sample mean of `f` with standard error s/√n.
pub fn mc_mean<F>(cfg: &McConfig, f: F) -> McEstimate
where
    F: Fn(&mut Draws) -> f64 + Sync,
{
    let m = run(cfg, f);
    let se = if m.n > 1 {
        (m.m2.max(0.0) / (m.n - 1) as f64 / m.n as f64).sqrt()
    } else {
        0.0
    };
    estimate(cfg, m.mean, se)
}

/// Mean of log2(1 + γ) over draws of `snr_sampler`. Half-duplex factors are
/// left to the caller.
pub fn mc_ergodic_capacity<F>(snr_sampler: F, cfg: &McConfig) -> McEstimate
where
    F: Fn(&mut Draws) -> f64 + Sync,
{
    mc_mean(cfg, |d| snr_sampler(d).ln_1p() / std::f64::consts::LN_2)
}

/// Frequency of `event` with binomial standard error √(p(1−p)/n).
pub fn mc_mode_probability<F>(event: F, cfg: &McConfig) -> McEstimate
where
    F: Fn(&mut Draws) -> bool + Sync,
{
    let m = run(cfg, |d| if event(d) { 1.0 } else { 0.0 });
    let p = m.mean;
    let se = (p * (1.0 - p) / m.n as f64).max(0.0).sqrt();
    estimate(cfg, p, se)
}

/// Affected area by uniform sampling of positions in a disk of radius
/// `radius` (centred on the origin) and of the fading inside `power_field`.
///
/// `tail_bound` must bound the expected affected area outside the disk; a
/// positive estimate is refused when the bound exceeds [`TAIL_LIMIT`] of it.
/// A run without a single hit returns the zero estimate as is.
pub fn mc_affected_area<F>(
    power_field: F,
    p_min: f64,
    radius: f64,
    tail_bound: f64,
    cfg: &McConfig,
) -> Result<McEstimate>
where
    F: Fn(f64, f64, &mut Draws) -> f64 + Sync,
{
    if !(radius > 0.0) {
        return Err(GaseError::domain("sampling radius must be positive", radius));
    }
    let p = mc_mode_probability(
        |d| {
            let (x, y) = d.point_in_disk(radius);
            power_field(x, y, d) >= p_min
        },
        cfg,
    );
    let measure = std::f64::consts::PI * radius * radius;
    let est = estimate(cfg, measure * p.mean, measure * p.std_error);
    if est.mean > 0.0 && !(tail_bound <= TAIL_LIMIT * est.mean) {
        return Err(GaseError::TailCertification {
            tail: tail_bound,
            limit: TAIL_LIMIT * est.mean,
        });
    }
    Ok(est)
}

/// Bound on 2π∫_R^∞ e^(−P_min·rᵃ/P_t)·r dr, the Rayleigh affected area
/// outside radius R (requires a ≥ 1).
pub fn rayleigh_tail_bound(p_t: f64, p_min: f64, a: f64, radius: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    if radius <= 0.0 || a < 1.0 {
        return f64::INFINITY;
    }
    if a >= 2.0 {
        // rᵃ ≥ R^(a−2)·r² beyond R
        let k = p_min * radius.powf(a - 2.0) / p_t;
        0.5 * tau * (-k * radius * radius).exp() / k
    } else {
        // rᵃ ≥ R^(a−1)·r beyond R
        let k = p_min * radius.powf(a - 1.0) / p_t;
        tau * (-k * radius).exp() * (radius / k + 1.0 / (k * k))
    }
}

/// Tail bound for two Rayleigh sources, the second at distance `d0` from the
/// origin: P{X₁ + X₂ ≥ P_min} ≤ P{X₁ ≥ P_min/2} + P{X₂ ≥ P_min/2}.
pub fn two_source_tail_bound(p1: f64, p2: f64, p_min: f64, a: f64, d0: f64, radius: f64) -> f64 {
    rayleigh_tail_bound(p1, 0.5 * p_min, a, radius)
        + rayleigh_tail_bound(p2, 0.5 * p_min, a, radius - d0)
}

/// Smallest radius on the grid r₀·1.1ᵏ (r₀ the footprint radius, k < 400)
/// whose Rayleigh tail bound is at most `frac` of `area`.
pub fn certified_radius(p_t: f64, p_min: f64, a: f64, area: f64, frac: f64) -> Result<f64> {
    let r0 = (p_t / p_min).powf(1.0 / a);
    let mut r = r0;
    for _ in 0..400 {
        if rayleigh_tail_bound(p_t, p_min, a, r) <= frac * area {
            return Ok(r);
        }
        r *= 1.1;
    }
    Err(GaseError::TailCertification {
        tail: rayleigh_tail_bound(p_t, p_min, a, r),
        limit: frac * area,
    })
}
