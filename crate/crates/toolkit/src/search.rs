//! Extremal search with restarts spread over the rayon pool.

use bergman_core::extremal::{merge, run_restart, SearchConfig, SearchResult};
use rayon::prelude::*;

/// Same result as `bergman_core::extremal::search`, bit for bit: restarts
/// are independent and the merge orders them by index.
pub fn search_parallel(config: &SearchConfig) -> bergman_core::Result<SearchResult> {
    config.validate()?;
    let outcomes = (0..config.restarts)
        .into_par_iter()
        .map(|i| run_restart(config, i))
        .collect::<bergman_core::Result<Vec<_>>>()?;
    merge(outcomes)
}
