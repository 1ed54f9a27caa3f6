use rayon::prelude::*;

/// Worker pool for order-preserving parallel maps. One worker means a plain
/// serial loop; zero means the global rayon pool.
pub(crate) struct Pool {
    workers: usize,
    pool: Option<rayon::ThreadPool>,
}

impl Pool {
    pub(crate) fn new(workers: usize) -> Pool {
        let pool = (workers > 1).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("thread pool")
        });
        Pool { workers, pool }
    }

    /// `items.map(f)` with results in input order.
    pub(crate) fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match (&self.pool, self.workers) {
            (_, 1) => items.iter().map(f).collect(),
            (Some(pool), _) => pool.install(|| items.par_iter().map(f).collect()),
            (None, _) => items.par_iter().map(f).collect(),
        }
    }
}

/// Splits `0..total` into contiguous ranges of at most `size`.
pub(crate) fn ranges(total: u64, size: u64) -> Vec<std::ops::Range<u64>> {
    let size = size.max(1);
    (0..total.div_ceil(size)).map(|i| i * size..((i + 1) * size).min(total)).collect()
}
