//! Trial-batch execution. With the `parallel` feature (default) batches
//! run on rayon; without it they run sequentially. Results are in trial
//! order either way, and callers derive per-trial seeds with
//! `seed.split(i)`, so outputs are identical across both modes and any
//! thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting in order.
#[cfg(feature = "parallel")]
pub fn map_trials<T: Send>(n: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_trials<T: Send>(n: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    map_trials_seq(n, f)
}

/// Always-sequential variant; the benchmark baseline and the `parallel`
/// fallback implementation.
pub fn map_trials_seq<T>(n: u64, f: impl Fn(u64) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;
    use rand::Rng;

    #[test]
    fn parallel_and_sequential_agree() {
        let seed = Seed(99);
        let f = |i: u64| -> u64 { seed.split(i).rng().gen() };
        assert_eq!(map_trials(64, f), map_trials_seq(64, f));
    }
}
