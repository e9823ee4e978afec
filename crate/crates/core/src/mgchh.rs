//! Nested Misra-Gries baseline for correlated heavy hitters.
//!
//! Every monitored primary `d` carries its own Misra-Gries summary `H_d`
//! over the secondaries seen with it. When a new primary meets a full table,
//! every primary counter is decremented and, for each one that survives, a
//! uniformly chosen secondary counter of its `H_d` is decremented too, which
//! keeps `Σ_s f̂_{d,s} ≤ f̂_d`.
//!
//! Newcomers that trigger a decrement are not installed in the same step,
//! neither in the primary table nor inside `H_d`.

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;

use crate::algo::ChhAlgorithm;
use crate::csschh::{ceil_count, ChhParams};
use crate::error::{ChhError, Result};
use crate::report::{Chh, ChhReport, Primary};
use crate::summaries::MgSummary;
use crate::Item;

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

/// Counter sizing `(s1, s2)` for the baseline.
///
/// With `α = (1 + φ2)/(φ1 − ε1)`: if `ε1 ≥ ε2/(2α)` then `s1 = 2α/ε2`,
/// `s2 = 2/ε2`; otherwise `s1 = 1/ε1`, `s2 = 1/(ε2 − α·ε1)`. Both rounded up.
/// Additionally requires `ε1 ≤ φ1/2`.
pub fn mgchh_sizing(p: &ChhParams) -> Result<(u64, u64)> {
    p.validate()?;
    if p.eps1 > p.phi1 / 2.0 {
        return Err(ChhError::InvalidParams(format!(
            "the Misra-Gries baseline needs eps1 <= phi1/2, got eps1={} phi1={}",
            p.eps1, p.phi1
        )));
    }
    let alpha = (1.0 + p.phi2) / (p.phi1 - p.eps1);
    if p.eps1 >= p.eps2 / (2.0 * alpha) {
        Ok((ceil_count(2.0 * alpha / p.eps2), ceil_count(2.0 / p.eps2)))
    } else {
        Ok((
            ceil_count(1.0 / p.eps1),
            ceil_count(1.0 / (p.eps2 - alpha * p.eps1)),
        ))
    }
}

#[derive(Debug, Clone)]
pub struct MgchhSketch {
    s1: usize,
    s2: usize,
    table: MgSummary<Item, MgSummary<Item>>,
    n: u64,
    rng: Pcg64,
}

impl MgchhSketch {
    pub fn new(s1: usize, s2: usize, seed: u64) -> Result<Self> {
        if s2 == 0 {
            return Err(ChhError::InvalidCapacity(s2));
        }
        Ok(Self {
            s1,
            s2,
            table: MgSummary::new(s1)?,
            n: 0,
            rng: Pcg64::seed_from_u64(seed),
        })
    }

    pub fn from_params(p: &ChhParams, seed: u64) -> Result<Self> {
        let (s1, s2) = mgchh_sizing(p)?;
        Self::new(s1 as usize, s2 as usize, seed)
    }

    pub fn s1(&self) -> usize {
        self.s1
    }

    pub fn s2(&self) -> usize {
        self.s2
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn table(&self) -> &MgSummary<Item, MgSummary<Item>> {
        &self.table
    }

    pub fn update(&mut self, x: Item, y: Item) {
        self.n += 1;
        if let Some(entry) = self.table.get_mut(&x) {
            entry.count += 1;
            entry.payload.update(y);
            return;
        }
        if !self.table.is_full() {
            let mut secondaries = MgSummary::new(self.s2).expect("s2 checked at construction");
            secondaries.insert(y, ());
            self.table.insert(x, secondaries);
            return;
        }
        let rng = &mut self.rng;
        self.table.decrement_all(|_, entry| {
            let h = &mut entry.payload;
            if !h.is_empty() {
                let i = rng.random_range(0..h.len());
                h.decrement_at(i);
            }
        });
    }

    /// Reports `d` when `f̂_d ≥ (φ1 − 1/s1)·N`, and `(d, t)` when
    /// `f̂_{d,t} ≥ (φ2 − 1/s2)·f̂_d − N/s1`.
    pub fn query(&self, phi1: f64, phi2: f64) -> ChhReport {
        let n = self.n as f64;
        let s1 = self.s1 as f64;
        let s2 = self.s2 as f64;
        let primary_cut = (phi1 - 1.0 / s1) * n;
        let mut report = ChhReport::default();
        if self.n == 0 {
            return report;
        }
        for (&d, entry) in self.table.iter() {
            let fd = entry.count as f64;
            if fd < primary_cut {
                continue;
            }
            report.primaries.push(Primary {
                item: d,
                freq: entry.count,
            });
            let cut = (phi2 - 1.0 / s2) * fd - n / s1;
            for (&t, e) in entry.payload.iter() {
                if e.count as f64 >= cut {
                    report.chhs.push(Chh {
                        primary: d,
                        secondary: t,
                        freq: e.count,
                    });
                }
            }
        }
        report.sort();
        report
    }

    /// 12 bytes per counter over `s1 + s1·s2` counters.
    pub fn space_bytes_model(&self) -> u64 {
        12 * (self.s1 as u64 + self.s1 as u64 * self.s2 as u64)
    }

    /// Checks the capacity bounds and that no secondary table outweighs its
    /// primary counter.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.table.len() > self.s1 {
            return Err(format!(
                "{} primaries exceed s1={}",
                self.table.len(),
                self.s1
            ));
        }
        for (d, entry) in self.table.iter() {
            if entry.count == 0 {
                return Err(format!("primary {d} kept with zero count"));
            }
            if entry.payload.len() > self.s2 {
                return Err(format!(
                    "H_{d} holds {} > s2={}",
                    entry.payload.len(),
                    self.s2
                ));
            }
            let sum = entry.payload.total();
            if sum > entry.count {
                return Err(format!("H_{d} sums to {sum} > f̂_d={}", entry.count));
            }
        }
        Ok(())
    }
}

impl ChhAlgorithm for MgchhSketch {
    fn update(&mut self, x: Item, y: Item) {
        MgchhSketch::update(self, x, y)
    }

    fn query(&self, phi1: f64, phi2: f64) -> ChhReport {
        MgchhSketch::query(self, phi1, phi2)
    }

    fn processed(&self) -> u64 {
        self.n
    }

    fn space_bytes_model(&self) -> Option<u64> {
        Some(MgchhSketch::space_bytes_model(self))
    }

    fn name(&self) -> &'static str {
        "mgchh"
    }
}
