//! Fan-out of independent trials. With the `parallel` feature trials run on a
//! rayon pool; without it they run in order on the calling thread. Results
//! are always returned in trial order, so output does not depend on the
//! schedule.

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HODGE_WRES_THREADS";

/// Runs `f(0..count)` and collects the results in index order.
pub fn map_trials<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pool().install(|| (0..count).into_par_iter().map(&f).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_trials_sequential(count, f)
    }
}

/// The sequential path, available regardless of features.
pub fn map_trials_sequential<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Whether [`map_trials`] uses worker threads in this build.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
fn pool() -> &'static rayon::ThreadPool {
    use std::sync::OnceLock;
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(k) = thread_cap() {
            b = b.num_threads(k);
        }
        b.build().expect("failed to build worker pool")
    })
}

/// The worker cap from the environment, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&k| k > 0)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A per-trial seed derived from the run seed, a stream label and the trial
/// index. Independent of thread count and schedule.
pub fn trial_seed(base: u64, stream: &str, index: usize) -> u64 {
    // FNV-1a keeps the label hash stable across builds.
    let label = stream.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    splitmix64(splitmix64(base ^ label).wrapping_add(index as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let par = map_trials(100, |i| i * i);
        let seq = map_trials_sequential(100, |i| i * i);
        assert_eq!(par, seq);
    }

    #[test]
    fn seeds_separate_streams_and_indices() {
        assert_ne!(trial_seed(7, "curvature", 0), trial_seed(7, "curvature", 1));
        assert_ne!(trial_seed(7, "curvature", 0), trial_seed(7, "forms", 0));
        assert_eq!(trial_seed(7, "forms", 3), trial_seed(7, "forms", 3));
    }
}
