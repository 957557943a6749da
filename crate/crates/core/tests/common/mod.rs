use proptest::test_runner::{Config, RngSeed};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// The seed for randomized tests: `LCA_TEST_SEED` if set, else the default.
pub fn seed() -> u64 {
    match std::env::var("LCA_TEST_SEED") {
        Ok(v) => {
            let v = v.trim();
            let parsed = match v.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16),
                None => v.parse(),
            };
            parsed.unwrap_or_else(|_| panic!("LCA_TEST_SEED must be an integer, got `{v}`"))
        }
        Err(_) => DEFAULT_SEED,
    }
}

#[allow(dead_code)]
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: None,
        ..Config::default()
    }
}
