use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use shadowlab_core::exec::Executor;

/// Grid evaluation on a private rayon pool. Results keep their index order, so output does
/// not depend on the thread count.
pub struct Pool {
    pool: ThreadPool,
}

impl Pool {
    /// `threads = 0` lets rayon pick.
    pub fn new(threads: usize) -> Result<Pool, rayon::ThreadPoolBuildError> {
        Ok(Pool { pool: ThreadPoolBuilder::new().num_threads(threads).build()? })
    }
}

impl Executor for Pool {
    fn map_indexed<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
