//! Counter-based random streams.
//!
//! Every stream is ChaCha8 keyed by the master seed with a stream number
//! derived from `(path index, role)`, so path `i` draws the same numbers no
//! matter which thread runs it or in which order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// What a stream is used for within one Monte Carlo path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// The time change (𝔙, 𝔈, 𝔎, L).
    Clock,
    /// The outer Lévy process.
    Levy,
    /// Everything else (test samplers, auxiliary draws).
    Aux,
}

impl Role {
    const COUNT: u64 = 3;

    fn index(self) -> u64 {
        match self {
            Role::Clock => 0,
            Role::Levy => 1,
            Role::Aux => 2,
        }
    }
}

/// Provenance of a stream: `(master seed, path, role)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamTag {
    pub seed: u64,
    pub path: u64,
    pub role: Role,
}

#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    tag: StreamTag,
}

impl RngStream {
    pub fn new(seed: u64, path: u64, role: Role) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(path.wrapping_mul(Role::COUNT).wrapping_add(role.index()));
        RngStream { rng, tag: StreamTag { seed, path, role } }
    }

    pub fn tag(&self) -> StreamTag {
        self.tag
    }

    /// Uniform on the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        loop {
            // 53 random bits
            let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Hands out streams for a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamFactory {
    pub seed: u64,
}

impl StreamFactory {
    pub fn new(seed: u64) -> Self {
        StreamFactory { seed }
    }

    pub fn stream(&self, path: u64, role: Role) -> RngStream {
        RngStream::new(self.seed, path, role)
    }
}

/// Fails when two components that must be independent share a stream.
pub fn ensure_independent(a: &RngStream, b: &RngStream) -> Result<()> {
    if a.tag == b.tag {
        let t = a.tag;
        return Err(Error::StreamReuse(format!("seed {} path {} role {:?}", t.seed, t.path, t.role)));
    }
    Ok(())
}
