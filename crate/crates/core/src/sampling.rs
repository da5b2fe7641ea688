//! Seeded sampling: i.i.d. Monte Carlo and randomly shifted Kronecker
//! (low-discrepancy) point sets. Every estimator splits its work into a fixed
//! set of streams and merges them in index order, so results depend only on
//! the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::expsum::frac_product;
use crate::summation::{Moments, NeumaierSum};

/// Samples per i.i.d. Monte-Carlo stream.
const MC_STREAM: u64 = 8192;

/// Deterministic RNG for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Kronecker sequence `{i·α}` with the generalized golden-ratio frequencies
/// `α_j = φ_d^{-j}`, where `φ_d` is the positive root of `x^{d+1} = x + 1`.
#[derive(Debug, Clone)]
pub struct Kronecker {
    alpha: Vec<f64>,
}

impl Kronecker {
    pub fn new(dim: usize) -> Self {
        let mut phi = 2.0f64;
        for _ in 0..200 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim)
            .map(|j| {
                let a = phi.powi(-(j as i32));
                a - a.floor()
            })
            .collect();
        Self { alpha }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// `i`-th point shifted by `shift` (Cranley–Patterson rotation), in `[0,1)^d`.
    pub fn point_into(&self, i: u64, shift: &[f64], out: &mut [f64]) {
        for ((o, a), s) in out.iter_mut().zip(&self.alpha).zip(shift) {
            let v = s + frac_product(i as f64, *a);
            *o = v - v.floor();
        }
    }
}

/// Randomized quasi-Monte-Carlo mean of `f` over `[0,1)^dim`: `replicates`
/// independent random shifts of a Kronecker set of `samples / replicates`
/// points. The standard error is that of the replicate means.
pub fn rqmc_mean<F>(dim: usize, samples: u64, replicates: u64, seed: u64, f: F) -> Estimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(replicates >= 2, "need at least two replicates");
    let per = (samples / replicates).max(1);
    let lattice = Kronecker::new(dim);
    let means: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(seed, rep);
            let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let mut point = vec![0.0; dim];
            let mut acc = NeumaierSum::new();
            for i in 0..per {
                lattice.point_into(i, &shift, &mut point);
                acc.add(f(&point));
            }
            acc.value() / per as f64
        })
        .collect();
    let mut m = Moments::default();
    means.iter().for_each(|&x| m.push(x));
    Estimate {
        mean: m.mean,
        stderr: m.stderr(),
        samples: per * replicates,
    }
}

/// Plain Monte-Carlo mean of `f` over `[0,1)^dim` with i.i.d. uniform points;
/// the standard error is the sample standard deviation of the mean.
pub fn mc_mean<F>(dim: usize, samples: u64, seed: u64, f: F) -> Estimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let streams = samples.div_ceil(MC_STREAM);
    let parts: Vec<Moments> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, s);
            let count = MC_STREAM.min(samples - s * MC_STREAM);
            let mut point = vec![0.0; dim];
            let mut m = Moments::default();
            for _ in 0..count {
                point.iter_mut().for_each(|p| *p = rng.random::<f64>());
                m.push(f(&point));
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    parts.iter().for_each(|p| total.merge(p));
    Estimate {
        mean: total.mean,
        stderr: total.stderr(),
        samples,
    }
}
