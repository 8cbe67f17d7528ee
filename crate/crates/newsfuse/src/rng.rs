//! Deterministic splittable random streams.
//!
//! Each unit of work (bootstrap replicate, simulation replication) gets its
//! own ChaCha stream keyed by `(seed, index, attempt, domain)`. Streams are
//! independent by construction, so results do not depend on evaluation
//! order or thread count, and a failed draw can move to the next `attempt`
//! stream without disturbing any other unit.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::normal::normal_inverse_cdf;
use crate::num::{c, Real};

pub(crate) const DOMAIN_BOOTSTRAP: u64 = 0;
pub(crate) const DOMAIN_SIM_DATA: u64 = 1;
pub(crate) const DOMAIN_SIM_SEED: u64 = 2;

pub(crate) fn stream_rng(seed: u64, index: u64, attempt: u64, domain: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(&attempt.to_le_bytes());
    key[24..32].copy_from_slice(&domain.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Collapses a stream into a fresh 64-bit seed (used to give each
/// simulation replication its own bootstrap seed).
pub(crate) fn derive_seed(seed: u64, index: u64, domain: u64) -> u64 {
    stream_rng(seed, index, 0, domain).next_u64()
}

/// Uniform draw in the open interval (0, 1), 53-bit resolution.
pub(crate) fn open_uniform<R: Real>(rng: &mut impl RngCore) -> R {
    let u = ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0);
    c(u)
}

/// Standard normal draw via the inverse-CDF transform.
pub(crate) fn standard_normal<R: Real>(rng: &mut impl RngCore) -> R {
    normal_inverse_cdf(open_uniform::<R>(rng)).expect("uniform draw lies in (0, 1)")
}
