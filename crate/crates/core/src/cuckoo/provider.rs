//! Hash-pair providers: map a key to its two candidate bins.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maps a key to two bins in `[0, n)`. The pair must be stable for the
/// provider's lifetime; the two bins may coincide.
pub trait HashPairProvider: Send + Sync {
    fn n(&self) -> usize;
    fn bins(&self, key: u64) -> (usize, usize);
}

impl<P: HashPairProvider + ?Sized> HashPairProvider for Box<P> {
    fn n(&self) -> usize {
        (**self).n()
    }

    fn bins(&self, key: u64) -> (usize, usize) {
        (**self).bins(key)
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Lemire's multiply-shift reduction of a 64-bit hash to `[0, n)`.
#[inline]
fn reduce(h: u64, n: usize) -> usize {
    ((h as u128 * n as u128) >> 64) as usize
}

/// Two independently seeded splitmix64 finalizers.
#[derive(Debug, Clone)]
pub struct SeededProvider {
    n: usize,
    seeds: [u64; 2],
}

impl SeededProvider {
    pub fn new(seed: u64, n: usize) -> Self {
        assert!(n > 0, "provider needs at least one bin");
        Self {
            n,
            seeds: [splitmix64(seed), splitmix64(seed ^ 0x5851_f42d_4c95_7f2d)],
        }
    }
}

impl HashPairProvider for SeededProvider {
    fn n(&self) -> usize {
        self.n
    }

    fn bins(&self, key: u64) -> (usize, usize) {
        let h1 = splitmix64(key ^ self.seeds[0]);
        let h2 = splitmix64(key.rotate_left(32) ^ self.seeds[1]);
        (reduce(h1, self.n), reduce(h2, self.n))
    }
}

/// Simple tabulation hashing: one 256-entry table per key byte, XOR-combined,
/// drawn independently for each of the two functions.
#[derive(Debug, Clone)]
pub struct TabulationProvider {
    n: usize,
    tables: Box<[[[u64; 256]; 8]; 2]>,
}

impl TabulationProvider {
    pub fn new(seed: u64, n: usize) -> Self {
        assert!(n > 0, "provider needs at least one bin");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tables = Box::new([[[0u64; 256]; 8]; 2]);
        for f in tables.iter_mut() {
            for byte_table in f.iter_mut() {
                for slot in byte_table.iter_mut() {
                    *slot = rng.next_u64();
                }
            }
        }
        Self { n, tables }
    }

    #[inline]
    fn hash(&self, which: usize, key: u64) -> u64 {
        key.to_le_bytes()
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc ^ self.tables[which][i][b as usize])
    }
}

impl HashPairProvider for TabulationProvider {
    fn n(&self) -> usize {
        self.n
    }

    fn bins(&self, key: u64) -> (usize, usize) {
        (reduce(self.hash(0, key), self.n), reduce(self.hash(1, key), self.n))
    }
}

/// Explicit key-to-pair table, for hand-built scenarios. Unlisted keys fall
/// back to a seeded provider.
#[derive(Debug, Clone)]
pub struct FixedProvider {
    pairs: std::collections::HashMap<u64, (usize, usize)>,
    fallback: SeededProvider,
}

impl FixedProvider {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (u64, (usize, usize))>) -> Self {
        let pairs: std::collections::HashMap<_, _> = pairs.into_iter().collect();
        assert!(
            pairs.values().all(|&(a, b)| a < n && b < n),
            "fixed pair out of range"
        );
        Self {
            pairs,
            fallback: SeededProvider::new(0, n),
        }
    }
}

impl HashPairProvider for FixedProvider {
    fn n(&self) -> usize {
        self.fallback.n()
    }

    fn bins(&self, key: u64) -> (usize, usize) {
        self.pairs
            .get(&key)
            .copied()
            .unwrap_or_else(|| self.fallback.bins(key))
    }
}
