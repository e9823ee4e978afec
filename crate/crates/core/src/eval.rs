//! Accuracy metrics, equal-space configuration and throughput timing.

use std::collections::HashMap;
use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algo::ChhAlgorithm;
use crate::error::{ChhError, Result};
use crate::report::ChhReport;
use crate::Item;

/// Metrics for one report against the exact answer. Error statistics are
/// taken over the true CHHs that were reported.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalResult {
    pub recall: f64,
    pub precision: f64,
    pub abs_err_max: f64,
    pub abs_err_mean: f64,
    pub rel_err_max: f64,
    pub rel_err_mean: f64,
    pub updates_per_ms: Option<f64>,
    pub space_bytes_model: Option<u64>,
}

/// Scores `report` against `truth`, which must carry exact tuple
/// frequencies (as produced by the oracle for the same stream and
/// thresholds). An empty truth gives recall 1; an empty report gives
/// precision 1.
pub fn score(report: &ChhReport, truth: &ChhReport) -> EvalResult {
    let exact: HashMap<(Item, Item), u64> = truth
        .chhs
        .iter()
        .map(|c| ((c.primary, c.secondary), c.freq))
        .collect();

    let mut hits = 0usize;
    let mut abs_sum = 0.0;
    let mut rel_sum = 0.0;
    let mut abs_max: f64 = 0.0;
    let mut rel_max: f64 = 0.0;
    let mut seen = std::collections::HashSet::new();
    for c in &report.chhs {
        if !seen.insert((c.primary, c.secondary)) {
            continue;
        }
        if let Some(&f) = exact.get(&(c.primary, c.secondary)) {
            hits += 1;
            let abs = (f as f64 - c.freq as f64).abs();
            let rel = abs / f as f64;
            abs_sum += abs;
            rel_sum += rel;
            abs_max = abs_max.max(abs);
            rel_max = rel_max.max(rel);
        }
    }

    let ratio = |num: usize, den: usize| {
        if den == 0 {
            1.0
        } else {
            num as f64 / den as f64
        }
    };
    let mean = |sum: f64| if hits == 0 { 0.0 } else { sum / hits as f64 };
    EvalResult {
        recall: ratio(hits, exact.len()),
        precision: ratio(hits, seen.len()),
        abs_err_max: abs_max,
        abs_err_mean: mean(abs_sum),
        rel_err_max: rel_max,
        rel_err_mean: mean(rel_sum),
        updates_per_ms: None,
        space_bytes_model: None,
    }
}

/// Counter counts giving both algorithms the same modeled memory:
/// `12·k1 + 16·k2 = 12·(s1 + s1·s2)` with `k1 = s1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualSpace {
    pub k1: u64,
    pub k2: u64,
    pub s1: u64,
    pub s2: u64,
}

impl EqualSpace {
    pub fn bytes(&self) -> u64 {
        12 * self.k1 + 16 * self.k2
    }

    pub fn mgchh_bytes(&self) -> u64 {
        12 * (self.s1 + self.s1 * self.s2)
    }
}

/// Primary counters per secondary counter used by [`equal_space_config`];
/// every row of the reference synthetic configurations has `k1 = 210·s2`.
pub const PRIMARY_PER_SECONDARY: u64 = 210;

const MIB: f64 = 1_048_576.0;

/// Largest equal-space configuration with `k1 = 210·s2` that fits in
/// `space_bytes`.
pub fn equal_space_config(space_bytes: u64) -> Result<EqualSpace> {
    equal_space_config_with_ratio(space_bytes, PRIMARY_PER_SECONDARY)
}

/// Like [`equal_space_config`] with `k1 = ratio·s2`. Equality of the two
/// byte totals forces `k2 = 3·k1·s2/4`, so configurations where that is not
/// an integer are skipped.
pub fn equal_space_config_with_ratio(space_bytes: u64, ratio: u64) -> Result<EqualSpace> {
    if ratio == 0 {
        return Err(ChhError::InvalidParams("ratio must be positive".into()));
    }
    let cost = |s2: u64| 12u128 * ratio as u128 * s2 as u128 * (s2 as u128 + 1);
    let budget = space_bytes as u128;
    // Largest s2 within budget, then walk down to a realizable one.
    let mut s2 = ((budget as f64 / (12.0 * ratio as f64)).sqrt() as u64).max(1) + 1;
    while s2 > 0 && cost(s2) > budget {
        s2 -= 1;
    }
    while s2 > 0 {
        let k1 = ratio * s2;
        if (3 * k1 * s2).is_multiple_of(4) {
            let cfg = EqualSpace {
                k1,
                k2: 3 * k1 * s2 / 4,
                s1: k1,
                s2,
            };
            debug_assert_eq!(cfg.bytes(), cfg.mgchh_bytes());
            return Ok(cfg);
        }
        s2 -= 1;
    }
    Err(ChhError::InfeasibleSpace(space_bytes))
}

/// Byte budget for a size quoted in MiB with three decimals: the largest
/// byte count that still displays as `mib`.
pub fn mib_display_budget(mib: f64) -> u64 {
    ((mib + 0.0005) * MIB).floor() as u64
}

pub fn bytes_to_mib(bytes: u64) -> f64 {
    bytes as f64 / MIB
}

/// [`equal_space_config`] for a size quoted as `x.xxx` MiB.
pub fn equal_space_config_mib(mib: f64) -> Result<EqualSpace> {
    equal_space_config(mib_display_budget(mib))
}

/// Update rates of repeated timing runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub median: f64,
    pub min: f64,
    pub max: f64,
    pub samples: Vec<f64>,
}

impl Throughput {
    /// Summarises per-run rates. `samples` must not be empty.
    pub fn from_samples(samples: Vec<f64>) -> Self {
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Throughput {
            median,
            min: sorted[0],
            max: sorted[n - 1],
            samples,
        }
    }
}

/// Feeds `stream` to `alg` once and returns updates per millisecond. Only
/// the update loop is timed.
pub fn time_updates<A: ChhAlgorithm>(mut alg: A, stream: &[(u32, u32)]) -> Result<f64> {
    if stream.is_empty() {
        return Err(ChhError::EmptyStream);
    }
    let start = Instant::now();
    for &(x, y) in stream {
        alg.update(x as Item, y as Item);
    }
    let elapsed = start.elapsed();
    black_box(&alg);
    let ms = (elapsed.as_secs_f64() * 1e3).max(1e-6);
    Ok(stream.len() as f64 / ms)
}

/// Times the update loop only, on a fresh instance from `make` each run,
/// and reports updates per millisecond. Runs at least 3 times.
pub fn throughput<A, F>(mut make: F, stream: &[(u32, u32)], runs: usize) -> Result<Throughput>
where
    A: ChhAlgorithm,
    F: FnMut() -> Result<A>,
{
    if stream.is_empty() {
        return Err(ChhError::EmptyStream);
    }
    let samples = (0..runs.max(3))
        .map(|_| time_updates(make()?, stream))
        .collect::<Result<Vec<_>>>()?;
    Ok(Throughput::from_samples(samples))
}
