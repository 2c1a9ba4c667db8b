use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Counter-based stream derivation: trial `i` of master seed `s` always gets
/// the ChaCha8 stream `i` keyed by `s`, on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub master_seed: u64,
}

impl RngSpec {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(index);
        rng
    }
}
