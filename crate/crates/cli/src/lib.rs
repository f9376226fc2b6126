//! Command-line front end and HTTP service for the workbench.

pub mod render;
pub mod server;
pub mod store;

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

pub const ADDR_ENV: &str = "ICTIMPACT_ADDR";
pub const DEFAULT_SEED_ENV: &str = "ICTIMPACT_DEFAULT_SEED";
pub const STORE_CAPACITY_ENV: &str = "ICTIMPACT_STORE_CAPACITY";

pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";
pub const DEFAULT_STORE_CAPACITY: usize = 256;

/// Where seeds come from when a randomized run does not name one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedPolicy {
    Fixed(u64),
    /// A fresh seed per run. It is echoed in the report.
    Generate,
}

impl SeedPolicy {
    /// Reads `ICTIMPACT_DEFAULT_SEED`; unset or `random` means generate.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(DEFAULT_SEED_ENV) {
            Err(_) => Ok(SeedPolicy::Generate),
            Ok(v) => Self::parse(&v),
        }
    }

    pub fn parse(v: &str) -> Result<Self, String> {
        let v = v.trim();
        if v.is_empty() || v.eq_ignore_ascii_case("random") {
            return Ok(SeedPolicy::Generate);
        }
        v.parse()
            .map(SeedPolicy::Fixed)
            .map_err(|_| format!("{DEFAULT_SEED_ENV} must be an unsigned integer or `random`, got `{v}`"))
    }

    /// The explicit seed if given, otherwise the policy's. Second value says
    /// whether the seed was generated.
    pub fn resolve(self, explicit: Option<u64>) -> (u64, bool) {
        match (explicit, self) {
            (Some(seed), _) => (seed, false),
            (None, SeedPolicy::Fixed(seed)) => (seed, false),
            (None, SeedPolicy::Generate) => (fresh_seed(), true),
        }
    }
}

fn fresh_seed() -> u64 {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    let mut z = nanos
        ^ (u64::from(std::process::id()) << 32)
        ^ COUNTER.fetch_add(1, Ordering::Relaxed).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    // splitmix64 finaliser
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn store_capacity_from_env() -> Result<usize, String> {
    match std::env::var(STORE_CAPACITY_ENV) {
        Err(_) => Ok(DEFAULT_STORE_CAPACITY),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{STORE_CAPACITY_ENV} must be an unsigned integer, got `{v}`")),
    }
}
