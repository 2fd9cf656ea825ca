//! Deterministic pseudo-random generator (splitmix64).
//!
//! All internal randomness in the crate (equal-degree splitting, trace-based
//! root finding) is drawn from this generator, seeded by a hash of the object
//! being processed, so results are reproducible run to run with no seed
//! plumbing in the public API.

#[derive(Debug, Clone)]
pub struct DetRng {
    state: u64,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // modulo bias is irrelevant for the desk-scale uses here
        self.next_u64() % bound
    }
}

/// FNV-1a over a word stream; used to derive seeds from polynomial contents.
pub fn fnv1a(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xCBF29CE484222325;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001B3);
        }
    }
    h
}
