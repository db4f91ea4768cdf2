//! Deterministic sharded sampling.
//!
//! A run of `samples` draws is cut into fixed-size shards. Shard `i` draws
//! from its own ChaCha stream `(seed, i)` and shard results are merged in
//! shard order. The shard layout depends only on `samples`, so the result
//! is bit-identical whether shards execute on one thread or many, and with
//! or without the `parallel` feature.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Draws per shard.
pub const SHARD_SIZE: u64 = 1 << 15;

/// How many worker threads a sampling loop may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parallelism {
    threads: usize,
}

impl Parallelism {
    pub const fn sequential() -> Self {
        Self { threads: 1 }
    }

    /// `0` means "all available cores".
    pub fn threads(threads: usize) -> Self {
        let threads = if threads == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            threads
        };
        Self { threads }
    }

    pub fn thread_count(&self) -> usize {
        self.threads
    }

    pub fn is_sequential(&self) -> bool {
        self.threads <= 1 || !cfg!(feature = "parallel")
    }
}

impl Default for Parallelism {
    fn default() -> Self {
        Self::sequential()
    }
}

/// RNG for one shard (or any other independent unit of work).
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer; maps `(seed, index)` to a well-mixed child seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sizes of the shards covering `samples` draws.
pub fn shard_sizes(samples: u64) -> Vec<u64> {
    let full = samples / SHARD_SIZE;
    let rest = samples % SHARD_SIZE;
    let mut sizes = vec![SHARD_SIZE; full as usize];
    if rest > 0 {
        sizes.push(rest);
    }
    sizes
}

/// Runs `work(rng, count)` on every shard and folds the results with `merge`.
pub fn run_sharded<A, W, M>(par: Parallelism, seed: u64, samples: u64, work: W, merge: M) -> Option<A>
where
    A: Send,
    W: Fn(&mut ChaCha8Rng, u64) -> A + Sync + Send,
    M: Fn(A, A) -> A,
{
    let jobs: Vec<(u64, u64)> = shard_sizes(samples)
        .into_iter()
        .enumerate()
        .map(|(i, size)| (i as u64, size))
        .collect();
    let run = |&(shard, size): &(u64, u64)| work(&mut stream_rng(seed, shard), size);
    let partials: Vec<A> = map_jobs(par, &jobs, run);
    partials.into_iter().reduce(merge)
}

/// Histogram of `draw(rng)` over `samples` draws.
pub fn sharded_histogram<F>(par: Parallelism, seed: u64, samples: u64, draw: F) -> Vec<u64>
where
    F: Fn(&mut ChaCha8Rng) -> usize + Sync + Send,
{
    run_sharded(
        par,
        seed,
        samples,
        |rng, count| {
            let mut counts = Vec::new();
            for _ in 0..count {
                let outcome = draw(rng);
                if outcome >= counts.len() {
                    counts.resize(outcome + 1, 0u64);
                }
                counts[outcome] += 1;
            }
            counts
        },
        merge_counts,
    )
    .unwrap_or_default()
}

pub fn merge_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if b.len() > a.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Maps `f` over `jobs`, in parallel when allowed, preserving order.
pub fn map_jobs<J, A, F>(par: Parallelism, jobs: &[J], f: F) -> Vec<A>
where
    J: Sync,
    A: Send,
    F: Fn(&J) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !par.is_sequential() {
        use rayon::prelude::*;
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(par.threads).build() {
            return pool.install(|| jobs.par_iter().map(&f).collect());
        }
    }
    let _ = par;
    jobs.iter().map(f).collect()
}
