//! Worker-count control.
//!
//! Every parallel routine in the crate collects results in input order and
//! reduces them with order-independent operations, so outputs are bitwise
//! identical for any worker count.

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "THURSTON_KIT_THREADS";

/// Worker cap requested through [`THREADS_ENV`], if set to a positive integer.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
}

/// Run `f` inside a dedicated pool with `threads` workers, or in the global
/// pool when `threads` is `None`.
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
    }
}
