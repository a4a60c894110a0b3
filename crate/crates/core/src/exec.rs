//! Execution strategy for the data-parallel scan loops.
//!
//! Audits and oracles are embarrassingly parallel scans over enumeration
//! indices. With the `parallel` feature (default) they fan out over rayon;
//! without it, or with [`Executor::Sequential`], they run as plain loops.
//! Witness selection is deterministic either way: the smallest violating
//! index wins.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

#[allow(clippy::derivable_impls)] // the default arm depends on the feature set
impl Default for Executor {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Executor::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Executor::Sequential
        }
    }
}

impl Executor {
    /// First `Some` produced over `0..n`, scanning in index order.
    pub fn find_first<W, F>(&self, n: u64, probe: F) -> Option<W>
    where
        F: Fn(u64) -> Option<W> + Sync + Send,
        W: Send,
    {
        match self {
            Executor::Sequential => (0..n).find_map(probe),
            #[cfg(feature = "parallel")]
            Executor::Parallel => (0..n).into_par_iter().find_map_first(probe),
        }
    }

    /// Map every index and collect in order.
    pub fn map_collect<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        F: Fn(u64) -> T + Sync + Send,
        T: Send,
    {
        match self {
            Executor::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// Collect all `Some` results, ordered by index.
    pub fn filter_collect<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        F: Fn(u64) -> Option<T> + Sync + Send,
        T: Send,
    {
        match self {
            Executor::Sequential => (0..n).filter_map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Parallel => (0..n).into_par_iter().filter_map(f).collect(),
        }
    }

    /// Fold index results with an associative, commutative merge.
    pub fn fold_commutative<T, F, M>(&self, n: u64, init: T, f: F, merge: M) -> T
    where
        F: Fn(u64) -> T + Sync + Send,
        M: Fn(T, T) -> T + Sync + Send,
        T: Send + Sync + Clone,
    {
        match self {
            Executor::Sequential => (0..n).map(f).fold(init, &merge),
            #[cfg(feature = "parallel")]
            Executor::Parallel => (0..n)
                .into_par_iter()
                .map(f)
                .reduce(|| init.clone(), &merge),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_is_deterministic() {
        let probe = |i: u64| (i % 97 == 13).then_some(i);
        assert_eq!(Executor::Sequential.find_first(10_000, probe), Some(13));
        #[cfg(feature = "parallel")]
        assert_eq!(Executor::Parallel.find_first(10_000, probe), Some(13));
    }

    #[test]
    fn fold_matches_sequential() {
        let f = |i: u64| i * i;
        let seq = Executor::Sequential.fold_commutative(1000, 0u64, f, |a, b| a + b);
        #[cfg(feature = "parallel")]
        {
            let par = Executor::Parallel.fold_commutative(1000, 0u64, f, |a, b| a + b);
            assert_eq!(seq, par);
        }
        assert_eq!(seq, (0..1000u64).map(|i| i * i).sum::<u64>());
    }
}
