//! Seeded Monte Carlo estimation of the exactly computed averages.
//!
//! Reproducibility contract: a run is determined by `(seed, n)` alone.
//! Samples are drawn in fixed batches of [`BATCH_SIZE`]; batch `b` uses a
//! ChaCha8 generator seeded with the run seed on stream `b`, batches are
//! accumulated independently, and the per-batch sums are combined by
//! pairwise reduction in batch order. Worker threads only decide who runs
//! which batch, so the estimate is bit-identical for every thread count.
//! Thread count comes from `DESIGN_ENTROPY_THREADS` (default: available
//! parallelism).

use crate::moments::{ChoiPartitionSpec, StatePartition};
use crate::quantum::{
    choi_state, trace_power, DensityMatrix, EntropySelector, PureState, UnitaryMatrix,
};
use crate::{Complex64, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Identifies the sampling scheme in machine-readable reports.
pub const GENERATOR_ID: &str = "chacha8-ziggurat-batch1024-v1";
/// Samples per independent RNG stream.
pub const BATCH_SIZE: u64 = 1024;
/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: u64 = 100;

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

impl McEstimate {
    /// Whether `exact` lies within `sigmas` standard errors of the mean
    /// (with a small absolute slack for zero-variance estimators).
    pub fn within(&self, exact: f64, sigmas: f64) -> bool {
        (self.mean - exact).abs() <= sigmas * self.std_error + 1e-12
    }
}

fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

fn batch_len(n: u64, batch: u64) -> u64 {
    BATCH_SIZE.min(n - batch * BATCH_SIZE)
}

fn run_batch<F>(seed: u64, batch: u64, len: u64, f: &F) -> Result<(f64, f64)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64>,
{
    let mut rng = batch_rng(seed, batch);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..len {
        let x = f(&mut rng)?;
        sum += x;
        sumsq += x * x;
    }
    Ok((sum, sumsq))
}

fn pairwise_sum(mut values: Vec<f64>) -> f64 {
    while values.len() > 1 {
        values = values.chunks(2).map(|c| c.iter().sum()).collect();
    }
    values.first().copied().unwrap_or(0.0)
}

fn threads_from_env() -> usize {
    std::env::var("DESIGN_ENTROPY_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Averages `f` over `n` seeded samples with the thread count taken from
/// the environment. See the module docs for the determinism contract.
pub fn mc_average<F>(n: u64, seed: u64, f: &F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    mc_average_with_threads(n, seed, threads_from_env(), f)
}

/// [`mc_average`] with an explicit worker count; the estimate does not
/// depend on it.
pub fn mc_average_with_threads<F>(n: u64, seed: u64, threads: usize, f: &F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if n < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    let batches = n.div_ceil(BATCH_SIZE);
    let threads = threads.clamp(1, batches as usize);
    let mut slots: Vec<Option<Result<(f64, f64)>>> = (0..batches).map(|_| None).collect();
    if threads == 1 {
        for (b, slot) in slots.iter_mut().enumerate() {
            *slot = Some(run_batch(seed, b as u64, batch_len(n, b as u64), f));
        }
    } else {
        let chunks: Vec<Vec<(usize, Result<(f64, f64)>)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        let mut b = t;
                        while (b as u64) < batches {
                            out.push((b, run_batch(seed, b as u64, batch_len(n, b as u64), f)));
                            b += threads;
                        }
                        out
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("sampling worker panicked")).collect()
        });
        for chunk in chunks {
            for (b, r) in chunk {
                slots[b] = Some(r);
            }
        }
    }
    let mut sums = Vec::with_capacity(slots.len());
    let mut sumsqs = Vec::with_capacity(slots.len());
    for slot in slots {
        let (s, s2) = slot.expect("every batch was scheduled")?;
        sums.push(s);
        sumsqs.push(s2);
    }
    let nf = n as f64;
    let mean = pairwise_sum(sums) / nf;
    let variance = ((pairwise_sum(sumsqs) - nf * mean * mean) / (nf - 1.0)).max(0.0);
    Ok(McEstimate { mean, std_error: (variance / nf).sqrt(), n })
}

/// A Haar-random pure state on `C^d`: normalized standard complex normals.
pub fn sample_haar_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> PureState {
    loop {
        let amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-150 {
            let amps = amps.into_iter().map(|z| z / norm).collect();
            return PureState::new(amps, &[d]).expect("normalized by construction");
        }
    }
}

/// A Haar-random unitary on `C^d`: QR of a complex Ginibre matrix by
/// modified Gram-Schmidt with reorthogonalization, which leaves the
/// diagonal of `R` real and positive and therefore needs no phase fix.
pub fn sample_haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> UnitaryMatrix {
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for _ in 0..d {
        loop {
            let mut v: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            for _pass in 0..2 {
                for col in &q {
                    let proj: Complex64 =
                        col.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
                    for (vi, qi) in v.iter_mut().zip(col) {
                        *vi -= proj * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for z in &mut v {
                    *z /= norm;
                }
                q.push(v);
                break;
            }
        }
    }
    let mut mat = crate::quantum::CMatrix::zeros(d, d);
    for (k, col) in q.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            mat.set(i, k, *z);
        }
    }
    UnitaryMatrix::from_matrix_unchecked(mat)
}

/// A Hilbert-Schmidt random density matrix on `C^d`: partial trace of a
/// Haar pure state on `C^d x C^d`.
pub fn sample_hs_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    sample_haar_state(rng, d * d)
        .with_dims(&[d, d])
        .and_then(|psi| psi.reduced(&[0]))
        .expect("construction keeps the state valid")
}

/// Monte Carlo estimate of the Haar-averaged `tr rho_A^alpha` of a random
/// bipartite pure state.
pub fn mc_state_moment(p: &StatePartition, alpha: u32, n: u64, seed: u64) -> Result<McEstimate> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    let (da, db) = (p.d_a as usize, p.d_b as usize);
    mc_average(n, seed, &|rng: &mut ChaCha8Rng| {
        let rho = sample_haar_state(rng, da * db).with_dims(&[da, db])?.reduced(&[0])?;
        trace_power(&rho, alpha)
    })
}

/// Monte Carlo estimate of the Haar-averaged `tr rho_AC^alpha` of the Choi
/// state of a random unitary.
pub fn mc_choi_moment(spec: &ChoiPartitionSpec, alpha: u32, n: u64, seed: u64) -> Result<McEstimate> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    let d = spec.total() as usize;
    let dims =
        [spec.d_a as usize, spec.d_b as usize, spec.d_c as usize, spec.d_d as usize];
    mc_average(n, seed, &|rng: &mut ChaCha8Rng| {
        let u = sample_haar_unitary(rng, d);
        let rho = choi_state(&u)?.with_dims(&dims)?.reduced(&[0, 2])?;
        trace_power(&rho, alpha)
    })
}

/// Monte Carlo estimate of a Haar-averaged marginal entropy of a random
/// bipartite pure state.
pub fn mc_entropy_average(
    p: &StatePartition,
    selector: EntropySelector,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    let (da, db) = (p.d_a as usize, p.d_b as usize);
    mc_average(n, seed, &|rng: &mut ChaCha8Rng| {
        let rho = sample_haar_state(rng, da * db).with_dims(&[da, db])?.reduced(&[0])?;
        selector.evaluate(&rho)
    })
}
