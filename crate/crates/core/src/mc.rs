//! Seeded, chunked Monte Carlo estimation.
//!
//! Samples are split into fixed-size chunks; chunk `i` of task `t` draws from
//! the ChaCha stream `(t << 32) | i` of the run seed. Chunk totals are merged in
//! chunk order, so estimates are bit-identical for any number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;

pub const CHUNK_SIZE: usize = 1 << 15;

/// Root of a family of independent RNG substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    pub seed: u64,
    pub task: u32,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, task: 0 }
    }

    /// Substream family for the `task`-th independent estimate of a run.
    pub fn for_task(self, task: u32) -> Self {
        Self { task, ..self }
    }

    pub fn rng(&self, chunk: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((self.task as u64) << 32) | chunk as u64);
        rng
    }
}

/// Running mean and centred second moment (Welford updates, pairwise merge).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if other.n == 0 {
            return self;
        }
        if self.n == 0 {
            return other;
        }
        let n = self.n + other.n;
        let (na, nb) = (self.n as f64, other.n as f64);
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * nb / n as f64,
            m2: self.m2 + other.m2 + d * d * na * nb / n as f64,
        }
    }

    pub fn estimate(&self) -> Estimate {
        let n = self.n as f64;
        let mean = self.mean;
        let var = if self.n > 1 {
            (self.m2 / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error: (var / n).sqrt(),
            n: self.n,
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

impl Estimate {
    /// `(mean − reference)/std_error`; infinite when the error vanishes and the
    /// means differ.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = self.mean - reference;
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            d.signum() * f64::INFINITY
        }
    }

    pub fn within_sigmas(&self, reference: f64, k: f64) -> bool {
        (self.mean - reference).abs() <= k * self.std_error
    }
}

/// Runs `n_samples` draws of `sample` over parallel chunks. `sample` may
/// push any number of values per call into each accumulator it is given.
pub fn run_chunked<const K: usize, F>(
    n_samples: usize,
    streams: SeedStream,
    sample: F,
) -> Result<[Moments; K]>
where
    F: Fn(&mut ChaCha8Rng, &mut [Moments; K]) -> Result<()> + Sync,
{
    let n_chunks = n_samples.div_ceil(CHUNK_SIZE);
    let partials: Vec<Result<[Moments; K]>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = streams.rng(chunk as u32);
            let len = CHUNK_SIZE.min(n_samples - chunk * CHUNK_SIZE);
            let mut acc = [Moments::default(); K];
            for _ in 0..len {
                sample(&mut rng, &mut acc)?;
            }
            Ok(acc)
        })
        .collect();
    let mut total = [Moments::default(); K];
    for part in partials {
        let part = part?;
        for k in 0..K {
            total[k] = total[k].merge(part[k]);
        }
    }
    Ok(total)
}
