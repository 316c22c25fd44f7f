//! Reports behind the `phasebound` binary: bounds, spectra, phase
//! distributions and bound curves, written as CSV or JSON.

pub mod commands;
pub mod config;
pub mod curve;
pub mod error;
pub mod format;

pub use error::CliError;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "PHASEBOUND_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`] when it is set.
pub fn init_threads() -> Result<(), CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    CliError::Input(format!(
                        "{THREADS_ENV} must be a positive integer, got {v:?}"
                    ))
                })?,
        ),
        Err(_) => None,
    };
    if let Some(n) = threads {
        // a second initialization (tests) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}
