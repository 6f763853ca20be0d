//! Counter-based seed splitting.
//!
//! Every stochastic stage draws its RNG seed from `(master, stream, index)`
//! alone, so any subset of a run reproduces the values of the full run.

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Named seed streams used by the generation pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    TileWeights = 1,
    Solve = 2,
    Restart = 3,
}

/// Sub-seed for item `index` of `stream` under `master`.
pub fn derive(master: u64, stream: Stream, index: u64) -> u64 {
    mix64(mix64(master ^ mix64(stream as u64)) ^ index)
}
