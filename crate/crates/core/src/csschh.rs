//! Cascaded Space Saving for correlated heavy hitters.
//!
//! Primaries and whole tuples are tracked by two independent
//! [`StreamSummary`] instances. A tuple `(r, s)` is reported when `r` passes
//! the primary threshold and the tuple counter exceeds
//! `φ2·(f̂_r − N/k1)`; the `N/k1` slack compensates for the primary
//! overestimate, which is what makes the report free of false negatives.
//!
//! The query reads the tuple counter's own frequency for `f̂_rs`. A literal
//! reading of the published pseudocode indexes the primary summary there,
//! which is inconsistent with its surrounding description.

use rustc_hash::FxHashMap;

use crate::algo::ChhAlgorithm;
use crate::error::{ChhError, Result};
use crate::report::{Chh, ChhReport, Primary};
use crate::summaries::StreamSummary;
use crate::{pair_key, unpack_pair, Item};

/// Relative slack used when turning real-valued counter counts into
/// integers, so float noise such as `880.0000000001` does not round up.
const CEIL_TOLERANCE: f64 = 1e-9;

pub(crate) fn ceil_count(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= CEIL_TOLERANCE * r.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// Thresholds and error tolerances of the approximate problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChhParams {
    pub phi1: f64,
    pub phi2: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl ChhParams {
    pub fn new(phi1: f64, phi2: f64, eps1: f64, eps2: f64) -> Result<Self> {
        let p = Self {
            phi1,
            phi2,
            eps1,
            eps2,
        };
        p.validate()?;
        Ok(p)
    }

    /// Requires `0 < eps1 < phi1 < 1` and `0 < eps2 < phi2 < 1`.
    pub fn validate(&self) -> Result<()> {
        let ok = |eps: f64, phi: f64| eps > 0.0 && eps < phi && phi < 1.0;
        if !ok(self.eps1, self.phi1) {
            return Err(ChhError::InvalidParams(format!(
                "need 0 < eps1 < phi1 < 1, got eps1={} phi1={}",
                self.eps1, self.phi1
            )));
        }
        if !ok(self.eps2, self.phi2) {
            return Err(ChhError::InvalidParams(format!(
                "need 0 < eps2 < phi2 < 1, got eps2={} phi2={}",
                self.eps2, self.phi2
            )));
        }
        Ok(())
    }
}

/// Counter allocation for the two summaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChhSizing {
    pub beta: f64,
    pub gamma: f64,
    pub k1: u64,
    pub k2: u64,
}

impl ChhSizing {
    /// `(k2·φ2 + k1) / (k2·(k1·φ1 − 1))`: the worst relative slack on a
    /// reported tuple, which must not exceed `eps2`.
    pub fn tuple_slack(k1: u64, k2: u64, phi1: f64, phi2: f64) -> f64 {
        let (k1, k2) = (k1 as f64, k2 as f64);
        (k2 * phi2 + k1) / (k2 * (k1 * phi1 - 1.0))
    }
}

/// Minimum-total-counter sizing that still satisfies both tolerances.
///
/// With `β = 1/(ε2·φ1)` and `γ = (ε2 + φ2)/(ε2·φ1)`:
/// `k1 = ⌈max(1/ε1, γ + √(βγ))⌉` and `k2 = ⌈β·k1/(k1 − γ)⌉`, with `k2`
/// recomputed from the integer `k1`.
pub fn chh_sizing(p: &ChhParams) -> Result<ChhSizing> {
    p.validate()?;
    let beta = 1.0 / (p.eps2 * p.phi1);
    let gamma = (p.eps2 + p.phi2) / (p.eps2 * p.phi1);
    let k1 = ceil_count((1.0 / p.eps1).max(gamma + (beta * gamma).sqrt()));
    let k2 = ceil_count(beta * k1 as f64 / (k1 as f64 - gamma));
    Ok(ChhSizing {
        beta,
        gamma,
        k1,
        k2,
    })
}

#[derive(Debug, Clone)]
pub struct ChhSketch {
    k1: usize,
    k2: usize,
    params: Option<ChhParams>,
    primaries: StreamSummary<Item>,
    tuples: StreamSummary<u128>,
    n: u64,
}

impl ChhSketch {
    /// Sizes the summaries from the problem parameters and keeps `φ1`, `φ2`
    /// as query defaults.
    pub fn new(params: ChhParams) -> Result<Self> {
        let sizing = chh_sizing(&params)?;
        let mut sketch = Self::with_counters(sizing.k1 as usize, sizing.k2 as usize)?;
        sketch.params = Some(params);
        Ok(sketch)
    }

    pub fn with_counters(k1: usize, k2: usize) -> Result<Self> {
        Ok(Self {
            k1,
            k2,
            params: None,
            primaries: StreamSummary::new(k1)?,
            tuples: StreamSummary::new(k2)?,
            n: 0,
        })
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn params(&self) -> Option<&ChhParams> {
        self.params.as_ref()
    }

    pub fn primary_summary(&self) -> &StreamSummary<Item> {
        &self.primaries
    }

    pub fn tuple_summary(&self) -> &StreamSummary<u128> {
        &self.tuples
    }

    #[inline]
    pub fn update(&mut self, x: Item, y: Item) {
        self.primaries.update(x);
        self.tuples.update(pair_key(x, y));
        self.n += 1;
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn query(&self, phi1: f64, phi2: f64) -> ChhReport {
        let n = self.n as f64;
        let primary_cut = phi1 * n;
        let slack = n / self.k1 as f64;

        let mut frequent: FxHashMap<Item, u64> = FxHashMap::default();
        for (&r, f) in self.primaries.iter() {
            if f as f64 > primary_cut {
                frequent.insert(r, f);
            }
        }

        let mut chhs = Vec::new();
        for (&key, f) in self.tuples.iter() {
            let (r, s) = unpack_pair(key);
            if let Some(&fr) = frequent.get(&r) {
                if f as f64 > phi2 * (fr as f64 - slack) {
                    chhs.push(Chh {
                        primary: r,
                        secondary: s,
                        freq: f,
                    });
                }
            }
        }

        let mut report = ChhReport {
            primaries: frequent
                .into_iter()
                .map(|(item, freq)| Primary { item, freq })
                .collect(),
            chhs,
        };
        report.sort();
        report
    }

    /// Query with the thresholds given at construction.
    pub fn query_default(&self) -> Result<ChhReport> {
        let p = self.params.ok_or_else(|| {
            ChhError::Usage("sketch built from explicit counters: pass phi1 and phi2".into())
        })?;
        Ok(self.query(p.phi1, p.phi2))
    }

    /// 12 bytes per primary counter plus 16 per tuple counter.
    pub fn space_bytes_model(&self) -> u64 {
        12 * self.k1 as u64 + 16 * self.k2 as u64
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        self.primaries.validate()?;
        self.tuples.validate()?;
        if self.primaries.processed() != self.n || self.tuples.processed() != self.n {
            return Err("summary lengths disagree with sketch".into());
        }
        Ok(())
    }
}

impl ChhAlgorithm for ChhSketch {
    fn update(&mut self, x: Item, y: Item) {
        ChhSketch::update(self, x, y)
    }

    fn query(&self, phi1: f64, phi2: f64) -> ChhReport {
        ChhSketch::query(self, phi1, phi2)
    }

    fn processed(&self) -> u64 {
        self.n
    }

    fn space_bytes_model(&self) -> Option<u64> {
        Some(ChhSketch::space_bytes_model(self))
    }

    fn name(&self) -> &'static str {
        "csschh"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(phi1: f64, phi2: f64, eps1: f64, eps2: f64) -> ChhParams {
        ChhParams::new(phi1, phi2, eps1, eps2).unwrap()
    }

    #[test]
    fn sizing_balanced_branch() {
        let s = chh_sizing(&params(0.1, 0.1, 0.05, 0.05)).unwrap();
        assert!((s.beta - 200.0).abs() < 1e-9);
        assert!((s.gamma - 30.0).abs() < 1e-9);
        assert_eq!((s.k1, s.k2), (108, 277));
    }

    #[test]
    fn sizing_eps1_dominates() {
        let s = chh_sizing(&params(0.1, 0.5, 0.001, 0.4)).unwrap();
        assert!((s.beta - 25.0).abs() < 1e-9);
        assert!((s.gamma - 22.5).abs() < 1e-9);
        assert_eq!((s.k1, s.k2), (1000, 26));
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(
            ChhParams::new(0.1, 0.1, 0.2, 0.05),
            Err(ChhError::InvalidParams(_))
        ));
        assert!(ChhParams::new(0.1, 0.1, 0.05, 0.1).is_err());
        assert!(ChhParams::new(1.0, 0.1, 0.05, 0.05).is_err());
        assert!(ChhParams::new(0.1, 0.1, 0.0, 0.05).is_err());
        let bad = ChhParams {
            phi1: 0.1,
            phi2: 0.1,
            eps1: 0.2,
            eps2: 0.05,
        };
        assert!(chh_sizing(&bad).is_err());
    }

    #[test]
    fn ceil_count_snaps_float_noise() {
        assert_eq!(ceil_count(880.000_000_000_1), 880);
        assert_eq!(ceil_count(879.999_999_999_9), 880);
        assert_eq!(ceil_count(276.92), 277);
        assert_eq!(ceil_count(25.0001), 26);
    }

    #[test]
    fn construction() {
        let s = ChhSketch::new(params(0.1, 0.1, 0.05, 0.05)).unwrap();
        assert_eq!((s.k1(), s.k2()), (108, 277));
        let s = ChhSketch::with_counters(4200, 63000).unwrap();
        assert_eq!(s.space_bytes_model(), 1_058_400);
        assert_eq!(s.n(), 0);
        assert!(matches!(
            ChhSketch::with_counters(0, 10),
            Err(ChhError::InvalidCapacity(0))
        ));
        assert!(s.query_default().is_err());
    }

    #[test]
    fn update_feeds_both_summaries() {
        let mut s = ChhSketch::with_counters(4, 4).unwrap();
        s.update(1, 10);
        assert_eq!(s.primary_summary().estimate(&1), Some(1));
        assert_eq!(s.tuple_summary().estimate(&pair_key(1, 10)), Some(1));
        s.update(1, 10);
        s.update(2, 20);
        assert_eq!(s.primary_summary().estimate(&1), Some(2));
        assert_eq!(s.primary_summary().estimate(&2), Some(1));
        assert_eq!(s.tuple_summary().estimate(&pair_key(1, 10)), Some(2));
        assert_eq!(s.tuple_summary().estimate(&pair_key(2, 20)), Some(1));
        assert_eq!(s.n(), 3);
        s.validate().unwrap();

        let mut one = ChhSketch::with_counters(1, 4).unwrap();
        one.update(1, 10);
        one.update(2, 20);
        let p: Vec<_> = one.primary_summary().iter().map(|(i, f)| (*i, f)).collect();
        assert_eq!(p, vec![(2, 2)]);
    }

    #[test]
    fn query_thresholds_are_strict() {
        let (a, b, x, y) = (1, 2, 10, 11);
        let mut s = ChhSketch::with_counters(8, 8).unwrap();
        for (p, q) in [(a, x), (a, x), (a, y), (b, x)] {
            s.update(p, q);
        }
        let r = s.query(0.4, 0.5);
        assert_eq!(r.primaries, vec![Primary { item: a, freq: 3 }]);
        // 2 > 0.5·(3 − 4/8) = 1.25 while 1 is not.
        assert_eq!(
            r.chhs,
            vec![Chh {
                primary: a,
                secondary: x,
                freq: 2
            }]
        );

        assert!(s.query(0.8, 0.5).is_empty());
        // f̂_a = 3 is not > 0.75·4.
        assert!(s.query(0.75, 0.5).is_empty());
        assert!(ChhSketch::with_counters(2, 2)
            .unwrap()
            .query(0.1, 0.1)
            .is_empty());
    }
}
