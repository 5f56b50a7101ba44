//! Thread-pool trial runner.

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use szego_core::concentration::TrialRunner;

/// Runs trials on a dedicated pool; results come back in trial order, so
/// output does not depend on the number of workers.
pub struct RayonRunner {
    pool: ThreadPool,
    workers: usize,
}

impl RayonRunner {
    pub fn new(workers: usize) -> anyhow::Result<Self> {
        let workers = workers.max(1);
        let pool = ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(Self { pool, workers })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

impl TrialRunner for RayonRunner {
    fn run<T, F>(&self, trials: u64, task: F) -> szego_core::Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> szego_core::Result<T> + Sync + Send,
    {
        self.pool.install(|| (0..trials).into_par_iter().map(&task).collect())
    }
}
