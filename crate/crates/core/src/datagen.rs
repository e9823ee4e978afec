//! Seeded synthetic two-dimensional Zipf streams.
//!
//! Primary ranks are drawn from `Zipf(ρ, m1)` and relabeled through a seeded
//! permutation of `[1, m1]`. Secondary ranks are drawn independently from
//! `Zipf(ρ, m2)` and, in the default [`PairModel::Permuted`] model, relabeled
//! through a permutation keyed by the primary, so each primary has its own
//! heavy secondaries. Permutations are keyed Feistel networks with cycle
//! walking, so none is ever materialized.

use rand::SeedableRng;
use rand_distr::{Distribution, Zipf};
use rand_pcg::Pcg64;

use crate::error::{ChhError, Result};

/// Default universe size for both dimensions.
pub const DEFAULT_UNIVERSE: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairModel {
    /// Secondary labels permuted per primary.
    #[default]
    Permuted,
    /// One secondary permutation shared by all primaries.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamSpec {
    pub n: u64,
    pub rho: f64,
    pub m1: u64,
    pub m2: u64,
    pub seed: u64,
    pub model: PairModel,
}

impl StreamSpec {
    pub fn new(n: u64, rho: f64, seed: u64) -> Self {
        Self {
            n,
            rho,
            m1: DEFAULT_UNIVERSE,
            m2: DEFAULT_UNIVERSE,
            seed,
            model: PairModel::Permuted,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(ChhError::InvalidParams(
                "stream length must be at least 1".into(),
            ));
        }
        for (name, m) in [("m1", self.m1), ("m2", self.m2)] {
            if m == 0 || m > u32::MAX as u64 {
                return Err(ChhError::InvalidParams(format!(
                    "{name} must be in [1, 2^32 - 1], got {m}"
                )));
            }
        }
        if !self.rho.is_finite() || self.rho < 0.0 {
            return Err(ChhError::InvalidParams(format!(
                "skew must be finite and >= 0, got {}",
                self.rho
            )));
        }
        Ok(())
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Keyed bijection on `[0, m)`.
#[derive(Debug, Clone)]
pub struct Permutation {
    m: u64,
    half_bits: u32,
    mask: u64,
    keys: [u64; 4],
}

impl Permutation {
    pub fn new(m: u64, key: u64) -> Self {
        assert!(m >= 1, "permutation domain must be non-empty");
        let bits = (64 - (m - 1).leading_zeros()).max(2);
        let half_bits = bits.div_ceil(2);
        let mut k = key;
        let keys = std::array::from_fn(|_| {
            k = splitmix64(k);
            k
        });
        Self {
            m,
            half_bits,
            mask: (1u64 << half_bits) - 1,
            keys,
        }
    }

    #[inline]
    pub fn apply(&self, v: u64) -> u64 {
        debug_assert!(v < self.m);
        if self.m == 1 {
            return 0;
        }
        let mut x = v;
        loop {
            x = self.feistel(x);
            if x < self.m {
                return x;
            }
        }
    }

    #[inline]
    fn feistel(&self, v: u64) -> u64 {
        let (mut l, mut r) = (v >> self.half_bits, v & self.mask);
        for &k in &self.keys {
            let f = splitmix64(r ^ k) & self.mask;
            (l, r) = (r, l ^ f);
        }
        (l << self.half_bits) | r
    }
}

/// Zipf rank sampler on `[1, m]` with `P(i) ∝ i^-ρ`.
#[derive(Debug, Clone, Copy)]
pub struct ZipfSampler {
    dist: Zipf<f64>,
}

impl ZipfSampler {
    pub fn new(rho: f64, m: u64) -> Result<Self> {
        let dist = Zipf::new(m as f64, rho)
            .map_err(|e| ChhError::InvalidParams(format!("zipf(rho={rho}, m={m}): {e}")))?;
        Ok(Self { dist })
    }

    #[inline]
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.dist.sample(rng) as u64
    }
}

/// One draw from `Zipf(ρ, m)`. Prefer [`ZipfSampler`] in loops.
pub fn zipf_sample<R: rand::Rng + ?Sized>(rho: f64, m: u64, rng: &mut R) -> Result<u64> {
    Ok(ZipfSampler::new(rho, m)?.sample(rng))
}

/// Lazily generated stream; see [`gen_stream`].
#[derive(Debug, Clone)]
pub struct PairStream {
    remaining: u64,
    rng: Pcg64,
    primary: ZipfSampler,
    secondary: ZipfSampler,
    primary_perm: Permutation,
    shared_secondary: Permutation,
    secondary_key: u64,
    m2: u64,
    model: PairModel,
}

impl PairStream {
    pub fn new(spec: &StreamSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            remaining: spec.n,
            rng: Pcg64::seed_from_u64(spec.seed),
            primary: ZipfSampler::new(spec.rho, spec.m1)?,
            secondary: ZipfSampler::new(spec.rho, spec.m2)?,
            primary_perm: Permutation::new(spec.m1, splitmix64(spec.seed ^ 0x5052_494d)),
            shared_secondary: Permutation::new(spec.m2, splitmix64(spec.seed ^ 0x5345_434f)),
            secondary_key: splitmix64(spec.seed.rotate_left(17) ^ 0x434f_5252),
            m2: spec.m2,
            model: spec.model,
        })
    }
}

impl Iterator for PairStream {
    type Item = (u32, u32);

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let rx = self.primary.sample(&mut self.rng);
        let ry = self.secondary.sample(&mut self.rng);
        let x = self.primary_perm.apply(rx - 1) + 1;
        let y = match self.model {
            PairModel::Permuted => {
                Permutation::new(self.m2, splitmix64(self.secondary_key ^ x)).apply(ry - 1) + 1
            }
            PairModel::Plain => self.shared_secondary.apply(ry - 1) + 1,
        };
        Some((x as u32, y as u32))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

/// Materializes the whole stream. Deterministic in `spec`.
pub fn gen_stream(spec: &StreamSpec) -> Result<Vec<(u32, u32)>> {
    Ok(PairStream::new(spec)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn permutation_is_bijective() {
        for (m, key) in [(1u64, 3u64), (2, 1), (7, 99), (1000, 5), (4096, 42)] {
            let p = Permutation::new(m, key);
            let mut seen = vec![false; m as usize];
            for v in 0..m {
                let w = p.apply(v);
                assert!(w < m);
                assert!(!seen[w as usize], "m={m}: {w} hit twice");
                seen[w as usize] = true;
            }
        }
    }

    #[test]
    fn deterministic_and_in_range() {
        let mut spec = StreamSpec::new(5, 1.1, 42);
        assert_eq!(gen_stream(&spec).unwrap(), gen_stream(&spec).unwrap());
        spec.n = 20_000;
        spec.m1 = 37;
        spec.m2 = 5;
        for (x, y) in gen_stream(&spec).unwrap() {
            assert!((1..=37).contains(&x));
            assert!((1..=5).contains(&y));
        }
        spec.seed = 43;
        let other = gen_stream(&spec).unwrap();
        spec.seed = 42;
        assert_ne!(gen_stream(&spec).unwrap(), other);
    }

    #[test]
    fn uniform_when_unskewed() {
        let sampler = ZipfSampler::new(0.0, 4).unwrap();
        let mut rng = Pcg64::seed_from_u64(9);
        let mut counts = [0u32; 4];
        let draws = 200_000;
        for _ in 0..draws {
            counts[(sampler.sample(&mut rng) - 1) as usize] += 1;
        }
        for c in counts {
            let p = c as f64 / draws as f64;
            assert!((p - 0.25).abs() < 0.005, "{counts:?}");
        }
    }

    #[test]
    fn heavy_skew_concentrates_on_rank_one() {
        let mut rng = Pcg64::seed_from_u64(1);
        let ones = (0..10_000)
            .filter(|_| zipf_sample(60.0, 4, &mut rng).unwrap() == 1)
            .count();
        assert!(ones >= 9_999, "{ones}");
    }

    #[test]
    fn per_primary_secondaries_differ() {
        let mut spec = StreamSpec::new(200_000, 1.4, 3);
        spec.m1 = 1000;
        spec.m2 = 1000;
        let mut top: HashMap<u32, HashMap<u32, u32>> = HashMap::new();
        for (x, y) in gen_stream(&spec).unwrap() {
            *top.entry(x).or_default().entry(y).or_default() += 1;
        }
        let mut heads: Vec<(u32, u32)> = top
            .iter()
            .map(|(x, ys)| (*x, *ys.iter().max_by_key(|e| e.1).unwrap().0))
            .collect();
        heads.sort_by_key(|h| std::cmp::Reverse(top[&h.0].values().sum::<u32>()));
        let leaders: std::collections::HashSet<u32> = heads.iter().take(5).map(|h| h.1).collect();
        assert!(leaders.len() > 1, "top primaries share one heavy secondary");

        spec.model = PairModel::Plain;
        let mut per_x: HashMap<u32, HashMap<u32, u32>> = HashMap::new();
        for (x, y) in gen_stream(&spec).unwrap() {
            *per_x.entry(x).or_default().entry(y).or_default() += 1;
        }
        let mut biggest: Vec<_> = per_x
            .iter()
            .map(|(x, ys)| (ys.values().sum::<u32>(), *x))
            .collect();
        biggest.sort_unstable_by(|a, b| b.cmp(a));
        let leaders: std::collections::HashSet<u32> = biggest
            .iter()
            .take(3)
            .map(|(_, x)| *per_x[x].iter().max_by_key(|e| e.1).unwrap().0)
            .collect();
        assert_eq!(leaders.len(), 1);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = StreamSpec::new(0, 1.0, 1);
        assert!(spec.validate().is_err());
        spec.n = 1;
        spec.rho = -0.5;
        assert!(spec.validate().is_err());
        spec.rho = 1.0;
        spec.m2 = 0;
        assert!(gen_stream(&spec).is_err());
    }
}
