//! Seed derivation and hashing helpers shared across the pipeline.
//!
//! Every stage derives its RNG stream from a global seed plus a stage label,
//! so reruns are bit-reproducible and stages stay independent.

/// splitmix64 finalizer; good avalanche, stable across platforms.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combine a seed with a label and counters into a fresh stream seed.
pub fn derive_seed(base: u64, label: &str, counters: &[u64]) -> u64 {
    let mut h = mix64(base);
    for b in label.bytes() {
        h = mix64(h ^ u64::from(b));
    }
    for &c in counters {
        h = mix64(h ^ c);
    }
    h
}

/// Hash a few integers to a float in [0, 1).
pub fn hash01(parts: &[u64]) -> f64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &p in parts {
        h = mix64(h ^ p);
    }
    (h >> 11) as f64 / (1u64 << 53) as f64
}
