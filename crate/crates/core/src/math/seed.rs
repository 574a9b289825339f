//! Deterministic seed derivation and uniform draws on the open unit interval.

use rand::Rng;

/// SplitMix64 finalizer; good avalanche for composing seeds.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `stream`, element `index`, under `master`. The mapping is
/// a fixed function of the three inputs, so results do not depend on
/// scheduling or worker counts.
#[inline]
pub fn derive(master: u64, stream: u64, index: u64) -> u64 {
    let s0 = mix(master);
    let s1 = mix(s0 ^ stream.wrapping_mul(0xA076_1D64_78BD_642F));
    mix(s1 ^ index.wrapping_mul(0xE703_7ED1_A0B4_28DB))
}

/// Uniform draw in the open interval `(0, 1)`.
///
/// `gen::<f64>()` yields `[0, 1)`; zero (probability 2^-53) is rejected so
/// inverse-transform sampling never evaluates a quantile at 0.
#[inline]
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return u;
        }
    }
}
