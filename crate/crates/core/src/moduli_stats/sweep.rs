//! Sharded modular Gray-code enumeration and the worker pool.
//!
//! A family of equations is a box `F_p^D` of digit vectors. Consecutive
//! vectors in the modular Gray order differ in one digit, which moves by `+1`
//! mod `p`, so per-point values are maintained by adding one column per step.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;

/// Per-key equation counts; keys are point-count vectors.
pub type Tally = BTreeMap<Vec<i64>, u64>;

pub(crate) fn merge(mut a: Tally, b: Tally) -> Tally {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

fn env_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var("WEILSTATS_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
    })
}

/// Runs `f` on the pool sized by `WEILSTATS_THREADS`, unless already inside a
/// pool (for example one installed by [`with_threads`]).
pub fn in_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    if rayon::current_thread_index().is_some() {
        f()
    } else {
        env_pool().install(f)
    }
}

/// Runs `f` with exactly `n` workers.
pub fn with_threads<R: Send>(n: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build()
        .expect("worker pool")
        .install(f)
}

/// Incremental state driven by a Gray sweep.
pub(crate) trait GrayState {
    /// Recomputes everything for the digit vector `digits`.
    fn reset(&mut self, digits: &[u32]);
    /// Digit `pos` has just moved by `+1` mod `p` to `new`.
    fn bump(&mut self, pos: usize, new: u32);
    /// Records the current equation.
    fn visit(&mut self, tally: &mut HashMap<Vec<i64>, u64>);
}

/// Sweeps all of `F_p^ndigits` with states built by `make`, sharding on the
/// high digits.
pub(crate) fn gray_sweep<S, F>(p: u32, ndigits: usize, make: F) -> Tally
where
    S: GrayState,
    F: Fn() -> S + Sync,
{
    // Low block of about 4096 vectors per shard.
    let mut low = 0;
    while low < ndigits && (p as u64).pow(low as u32 + 1) <= 4096 {
        low += 1;
    }
    let low = low.max(1).min(ndigits);
    let shards = (p as u64).pow((ndigits - low) as u32);
    let block = (p as u64).pow(low as u32);
    in_pool(|| {
        (0..shards)
            .into_par_iter()
            .fold(HashMap::new, |mut tally, shard| {
                let mut state = make();
                run_shard(
                    p,
                    ndigits,
                    low,
                    shard * block,
                    block,
                    &mut state,
                    &mut tally,
                );
                tally
            })
            .map(|t| t.into_iter().collect::<Tally>())
            .reduce(Tally::new, merge)
    })
}

/// Sequential sweep of all of `F_p^ndigits` through one state.
pub(crate) fn gray_full<S: GrayState>(
    p: u32,
    ndigits: usize,
    state: &mut S,
    tally: &mut HashMap<Vec<i64>, u64>,
) {
    let block = (p as u64).pow(ndigits as u32);
    run_shard(p, ndigits, ndigits, 0, block, state, tally);
}

fn digits_of(p: u32, mut n: u64, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (n % p as u64) as u32;
            n /= p as u64;
            d
        })
        .collect()
}

fn gray_of(p: u32, n: &[u32]) -> Vec<u32> {
    (0..n.len())
        .map(|i| {
            let next = n.get(i + 1).copied().unwrap_or(0);
            (n[i] + p - next) % p
        })
        .collect()
}

fn run_shard<S: GrayState>(
    p: u32,
    ndigits: usize,
    low: usize,
    start: u64,
    block: u64,
    state: &mut S,
    tally: &mut HashMap<Vec<i64>, u64>,
) {
    let mut n = digits_of(p, start, ndigits);
    let mut g = gray_of(p, &n);
    state.reset(&g);
    state.visit(tally);
    for _ in 1..block {
        let mut t = 0;
        while n[t] == p - 1 {
            n[t] = 0;
            t += 1;
        }
        n[t] += 1;
        debug_assert!(t < low);
        g[t] = (g[t] + 1) % p;
        state.bump(t, g[t]);
        state.visit(tally);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Collect {
        cur: Vec<u32>,
    }

    impl GrayState for Collect {
        fn reset(&mut self, digits: &[u32]) {
            self.cur = digits.to_vec();
        }
        fn bump(&mut self, pos: usize, new: u32) {
            self.cur[pos] = new;
        }
        fn visit(&mut self, tally: &mut HashMap<Vec<i64>, u64>) {
            let key = self.cur.iter().map(|&d| d as i64).collect();
            *tally.entry(key).or_default() += 1;
        }
    }

    #[test]
    fn sweep_visits_every_vector_once() {
        for (p, d) in [(2u32, 13usize), (3, 9), (5, 4), (7, 2)] {
            let t = gray_sweep(p, d, || Collect { cur: vec![] });
            assert_eq!(t.len() as u64, (p as u64).pow(d as u32));
            assert!(t.values().all(|&c| c == 1));
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let run = || gray_sweep(3, 10, || Collect { cur: vec![] });
        let one = with_threads(1, run);
        assert_eq!(one, with_threads(4, run));
        assert_eq!(one, with_threads(16, run));
    }
}
