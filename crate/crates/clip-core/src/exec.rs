//! Data-parallel execution helpers with a sequential fallback.
//!
//! All parallel loops in this crate are ordered map-collect operations: work
//! items are mapped independently and the results are gathered back in input
//! order, with any reduction done sequentially afterwards. Parallel and
//! sequential execution therefore produce bit-identical results.
//!
//! When built without the `parallel` feature, [`map_collect`] is plain
//! sequential iteration and rayon is not linked at all. With the feature,
//! parallelism can still be disabled at runtime via [`set_parallel`], which
//! the benchmarks use to compare both modes in one process.

#[cfg(feature = "parallel")]
use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Globally enables or disables the rayon path at runtime.
///
/// No-op without the `parallel` feature.
pub fn set_parallel(enabled: bool) {
    #[cfg(feature = "parallel")]
    PARALLEL.store(enabled, Ordering::Relaxed);
    #[cfg(not(feature = "parallel"))]
    let _ = enabled;
}

/// True when the next [`map_collect`] call may use the rayon pool.
pub fn parallel_enabled() -> bool {
    #[cfg(feature = "parallel")]
    {
        PARALLEL.load(Ordering::Relaxed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        false
    }
}

/// Maps `f` over `0..len` and collects the results in index order.
///
/// The closure must be a pure function of its index (plus captured shared
/// state); ordering of side effects is not defined under the parallel path.
pub fn map_collect<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if PARALLEL.load(Ordering::Relaxed) && len > 1 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    (0..len).map(f).collect()
}

/// Sequential variant of [`map_collect`], independent of the global switch.
///
/// Exists so benchmarks and timing-sensitive tests can pin the sequential
/// path without touching process-global state.
pub fn map_collect_seq<U, F>(len: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..len).map(f).collect()
}
