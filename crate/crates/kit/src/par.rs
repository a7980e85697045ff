use congruence_kit_core::genus::ParMap;
use rayon::prelude::*;

/// [`ParMap`] on a dedicated rayon pool. Results come back in index order
/// for every thread count.
pub struct Threads {
    pool: rayon::ThreadPool,
}

impl Threads {
    /// `None` uses one thread per available core.
    pub fn new(threads: Option<usize>) -> Self {
        let n = threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool");
        Threads { pool }
    }

    pub fn count(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `f` inside the pool, so nested rayon iterators respect the cap.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

impl ParMap for Threads {
    fn map_indexed<R: Send>(&self, n: usize, f: &(dyn Fn(usize) -> R + Sync)) -> Vec<R> {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
