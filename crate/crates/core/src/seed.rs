//! Deterministic seed derivation.
//!
//! Every random stream in a run is keyed by a 64-bit seed derived with
//! [`mix_seed`], so cells and replications can run on any thread in any order
//! and still reproduce bit-for-bit.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(parent ^ splitmix64(index))`.
///
/// Used for parent -> child derivation: base seed -> cell seed, cell seed ->
/// replication seed, replication seed -> per-purpose streams.
pub fn mix_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index))
}

/// Stream keys for [`mix_seed`] inside a replication.
pub(crate) mod stream {
    pub const GRAPH: u64 = 0x6772_6170_6800_0001;
    pub const INIT: u64 = 0x696e_6974_0000_0002;
    pub const STEP: u64 = 0x7374_6570_0000_0003;
}
