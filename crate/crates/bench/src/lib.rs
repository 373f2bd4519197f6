//! Shared inputs for the benchmark targets.

use eqmf::eisenstein::GeneratorCache;

/// Orders the kernel benchmarks sweep over (integer powers of q).
pub const KERNEL_ORDERS: [i64; 3] = [50, 100, 200];

pub fn cache_at(order: i64) -> GeneratorCache {
    GeneratorCache::new(order)
}
