//! Workbench for series over primitive sequences,
//! `S(A, x) = Σ_{a ∈ A} 1 / (a (log a + x))`.
//!
//! ```text
//! primes      sieved prime and Ω tables, explicit prime estimates
//! sequences   primitive sequences, Ω-classes P_k, homogeneous products
//! series      rigorous two-sided enclosures of S(A, x) and tail bounds
//! witness     the homogeneous witness construction and its proof chain
//! optimizer   re-derivation of the constants 2310 and 363
//! cli         the `primseq` command-line front end
//! ```
//!
//! Runnable walkthroughs for each capability live in `examples/`:
//!
//! ```bash
//! cargo run --release --example erdos_sum
//! ```

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod cli;
pub mod error;
pub mod optimizer;
pub mod precise;
pub mod primes;
pub mod report;
pub mod sequences;
pub mod series;
pub mod summation;
pub mod witness;

pub use error::{Error, Result};
pub use primes::{OmegaTable, PrimeTable};
pub use sequences::{HomogeneousSpec, PrimitiveSequence};
pub use series::SumEnclosure;

/// Runs `f` on a dedicated pool of `workers` threads.
///
/// Every parallel routine in the crate partitions work independently of the
/// pool size, so results are identical for any `workers`.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}
