//! Exact and high-precision kernels for Ramanujan-type series for 1/pi:
//! binomial-sum sequences, truncated power series, nested-radical constants,
//! prime-sweep congruence checking, and PSLQ constant identification.

pub mod bigfloat;
pub mod closedform;
pub mod congruence;
pub mod cornacchia;
pub mod discovery;
pub mod exact;
pub mod modular;
pub mod par;
pub mod powerseries;
pub mod primes;
pub mod sequences;
pub mod series;

pub use exact::{Int, Rat};

/// Seed for randomized tests; override with PI_SERIES_LAB_TEST_SEED.
pub fn test_seed() -> u64 {
    std::env::var("PI_SERIES_LAB_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0xC0FFEE)
}
