use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::samplers::RngStream;

/// Replicate-level parallel map. Replicate `r` of part `p` always draws from
/// `RngStream(seed, p << 32 | r)`, and results come back in replicate order,
/// so output does not depend on the number of workers.
pub struct Runner {
    pool: ThreadPool,
    seed: u64,
}

impl Runner {
    pub fn new(workers: usize, seed: u64) -> Self {
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .expect("thread pool");
        Self { pool, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, part: u32, replicate: u64) -> RngStream {
        assert!(replicate < 1 << 32, "replicate index out of range");
        RngStream::new(self.seed, (u64::from(part) << 32) | replicate)
    }

    pub fn replicates<T, E, F>(&self, part: u32, reps: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(&mut RngStream) -> Result<T, E> + Sync,
    {
        self.pool.install(|| {
            (0..reps as u64)
                .into_par_iter()
                .map(|r| f(&mut self.stream(part, r)))
                .collect()
        })
    }

    /// Runs `f` inside the pool, so nested rayon calls use its workers.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        self.pool.install(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn independent_of_worker_count() {
        let draw = |w| {
            Runner::new(w, 7)
                .replicates(1, 500, |rng| Ok::<u64, ()>(rng.random()))
                .unwrap()
        };
        assert_eq!(draw(1), draw(8));
    }
}
