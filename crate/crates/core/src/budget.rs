//! Search budgets and the parallelism hint.
//!
//! Every exhaustive search in the crate takes a [`Budget`] and fails with
//! [`Error::BudgetExceeded`](crate::Error::BudgetExceeded) instead of
//! truncating its output.

use rayon::prelude::*;

/// Environment variable overriding [`Budget::max_hs_size`].
pub const MAX_SIZE_ENV: &str = "CRITLAT_MAX_SIZE";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest product lattice that gets materialized with full tables.
    pub max_product_size: usize,
    /// Largest diagram node kept as an untabled product.
    pub max_node_size: usize,
    /// Largest host lattice for subuniverse enumeration.
    pub max_subuniverse_host: usize,
    /// Maximum number of subuniverses returned by one enumeration.
    pub max_subuniverses: usize,
    /// Largest lattice accepted by HS-membership and variety containment.
    pub max_hs_size: usize,
    /// Largest host lattice for congruence-lattice computation.
    pub max_con_host: usize,
    /// Maximum number of congruences in one congruence lattice.
    pub max_congruences: usize,
    /// Node budget for backtracking searches (embeddings, chains).
    pub max_search_nodes: usize,
    /// Parallelism hint; results never depend on it.
    pub threads: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_product_size: 4096,
            max_node_size: 1 << 22,
            max_subuniverse_host: 10,
            max_subuniverses: 100_000,
            max_hs_size: 8,
            max_con_host: 4096,
            max_congruences: 4096,
            max_search_nodes: 2_000_000,
            threads: 1,
        }
    }
}

impl Budget {
    /// Defaults, with `CRITLAT_MAX_SIZE` applied when set to a number.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var(MAX_SIZE_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            b.max_hs_size = n;
            b.max_subuniverse_host = b.max_subuniverse_host.max(n);
        }
        b
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

/// Order-preserving map, run on a dedicated pool when `threads > 1`.
pub(crate) fn par_map<T, R, F>(threads: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if threads <= 1 || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

/// First `Some` in item order, regardless of completion order.
pub(crate) fn par_find_first<T, R, F>(threads: usize, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    if threads <= 1 || items.len() < 2 {
        return items.iter().find_map(f);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| items.par_iter().find_map_first(&f)),
        Err(_) => items.iter().find_map(f),
    }
}
