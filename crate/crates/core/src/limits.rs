//! Process-wide resource caps.
//!
//! Exceeding a cap surfaces as [`Error::ResourceLimit`](crate::Error::ResourceLimit),
//! never as a partial answer.

use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_MAX_GENERATORS: usize = 200_000;
pub const DEFAULT_MAX_SUBSETS: usize = 4_096;

static MAX_GENERATORS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_GENERATORS);
static MAX_SUBSETS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_SUBSETS);

/// Cap on the number of intermediate generators kept by one double description run.
pub fn max_generators() -> usize {
    MAX_GENERATORS.load(Ordering::Relaxed)
}

pub fn set_max_generators(n: usize) {
    MAX_GENERATORS.store(n, Ordering::Relaxed);
}

/// Cap on the number of candidate multiplier supports examined per exact membership query.
pub fn max_subsets() -> usize {
    MAX_SUBSETS.load(Ordering::Relaxed)
}

pub fn set_max_subsets(n: usize) {
    MAX_SUBSETS.store(n, Ordering::Relaxed);
}
