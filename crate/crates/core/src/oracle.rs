//! Exact counting. Memory grows with the number of distinct tuples.

use rustc_hash::FxHashMap;

use crate::algo::ChhAlgorithm;
use crate::report::{Chh, ChhReport, Primary};
use crate::{pair_key, unpack_pair, Item};

/// Distinct-tuple count above which callers should warn about memory.
pub const DEFAULT_PAIR_CAP: usize = 100_000_000;

#[derive(Debug, Clone, Default)]
pub struct ExactCounts {
    n: u64,
    fx: FxHashMap<Item, u64>,
    fxy: FxHashMap<u128, u64>,
}

impl ExactCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Item, Item)>>(pairs: I) -> Self {
        let mut o = Self::new();
        for (x, y) in pairs {
            o.ingest(x, y);
        }
        o
    }

    #[inline]
    pub fn ingest(&mut self, x: Item, y: Item) {
        self.n += 1;
        *self.fx.entry(x).or_default() += 1;
        *self.fxy.entry(pair_key(x, y)).or_default() += 1;
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn fx(&self, x: Item) -> u64 {
        self.fx.get(&x).copied().unwrap_or(0)
    }

    pub fn fxy(&self, x: Item, y: Item) -> u64 {
        self.fxy.get(&pair_key(x, y)).copied().unwrap_or(0)
    }

    pub fn distinct_primaries(&self) -> usize {
        self.fx.len()
    }

    pub fn distinct_pairs(&self) -> usize {
        self.fxy.len()
    }

    pub fn primaries(&self) -> impl Iterator<Item = (Item, u64)> + '_ {
        self.fx.iter().map(|(&x, &f)| (x, f))
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((Item, Item), u64)> + '_ {
        self.fxy.iter().map(|(&k, &f)| (unpack_pair(k), f))
    }

    /// Exact answer: `f_x > φ1·N` and `f_xy > φ2·f_x`, both strict.
    pub fn echh(&self, phi1: f64, phi2: f64) -> ChhReport {
        let cut = phi1 * self.n as f64;
        let mut report = ChhReport::default();
        for (&x, &f) in &self.fx {
            if f as f64 > cut {
                report.primaries.push(Primary { item: x, freq: f });
            }
        }
        for (&key, &f) in &self.fxy {
            let (x, y) = unpack_pair(key);
            let fx = self.fx[&x];
            if fx as f64 > cut && f as f64 > phi2 * fx as f64 {
                report.chhs.push(Chh {
                    primary: x,
                    secondary: y,
                    freq: f,
                });
            }
        }
        report.sort();
        report
    }
}

impl ChhAlgorithm for ExactCounts {
    fn update(&mut self, x: Item, y: Item) {
        self.ingest(x, y)
    }

    fn query(&self, phi1: f64, phi2: f64) -> ChhReport {
        self.echh(phi1, phi2)
    }

    fn processed(&self) -> u64 {
        self.n
    }

    fn space_bytes_model(&self) -> Option<u64> {
        None
    }

    fn name(&self) -> &'static str {
        "exact"
    }
}
