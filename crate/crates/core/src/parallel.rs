//! Deterministic fan-out over integer ranges.

use std::thread;

/// Applies `f` to every integer in `lo..=hi`, splitting the range into at most
/// `jobs` contiguous chunks. Results come back in ascending order of input
/// regardless of `jobs`.
pub fn map_range<T, F>(lo: u64, hi: u64, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    if hi < lo {
        return Vec::new();
    }
    let len = hi - lo + 1;
    let jobs = (jobs.max(1) as u64).min(len);
    if jobs == 1 {
        return (lo..=hi).map(&f).collect();
    }
    let chunk = len.div_ceil(jobs);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let start = lo + j * chunk;
                let end = (start + chunk - 1).min(hi);
                s.spawn(move || (start..=end).map(f).collect::<Vec<T>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}
