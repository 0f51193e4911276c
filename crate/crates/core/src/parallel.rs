//! Thread cap for sweeps, enumeration and Monte Carlo.

use crate::error::{Error, Result};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FANO_EXT_THREADS";

/// Reads [`THREADS_ENV`]; `None` when unset or empty.
pub fn thread_cap_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::domain(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `f` on a pool with at most `cap` threads, or on rayon's global
/// pool when `cap` is `None`.
pub fn run_with_cap<R, F>(cap: Option<usize>, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match cap {
        None => Ok(f()),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::domain(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
