//! Independent reference computations shared by the integration tests.
//!
//! Parameters are rationals `P / d` so every comparison below is exact
//! integer arithmetic, with no dependence on the library's floating point.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use chh::{Item, MgSummary, StreamSummary};
use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;

/// Thresholds and tolerances as integer numerators over `d`.
#[derive(Debug, Clone, Copy)]
pub struct Rational {
    pub d: i128,
    pub p1: i128,
    pub p2: i128,
    pub e1: i128,
    pub e2: i128,
}

impl Rational {
    pub fn floats(&self) -> (f64, f64, f64, f64) {
        let d = self.d as f64;
        (
            self.p1 as f64 / d,
            self.p2 as f64 / d,
            self.e1 as f64 / d,
            self.e2 as f64 / d,
        )
    }

    /// `k1 ≥ 1/ε1`.
    pub fn c2(&self, k1: i128) -> bool {
        k1 * self.e1 >= self.d
    }

    /// `ε2·k1·φ1 − ε2 − φ2`, scaled by `d²`.
    fn c4_factor(&self, k1: i128) -> i128 {
        self.e2 * k1 * self.p1 - self.d * (self.e2 + self.p2)
    }

    /// `k2·(ε2·k1·φ1 − ε2 − φ2) ≥ k1` with a positive factor.
    pub fn c4(&self, k1: i128, k2: i128) -> bool {
        let a = self.c4_factor(k1);
        a > 0 && k2 * a >= k1 * self.d * self.d
    }

    /// Smallest `k2` satisfying the tuple constraint for this `k1`.
    pub fn min_k2(&self, k1: i128) -> Option<i128> {
        let a = self.c4_factor(k1);
        (a > 0).then(|| div_ceil(k1 * self.d * self.d, a))
    }

    /// Closed-form sizing: `k1 = ⌈max(1/ε1, γ + √(βγ))⌉`,
    /// `k2 = ⌈β·k1/(k1 − γ)⌉`, found by exact integer search.
    pub fn csschh_sizing(&self) -> (i128, i128) {
        let q = self.e2 * self.p1;
        let g = self.d * (self.e2 + self.p2);
        let bg = self.d * self.d * self.d * (self.e2 + self.p2);
        // With γ = g/q and βγ = bg/q², k ≥ γ + √(βγ) ⇔ k·q − g ≥ 0 and (k·q − g)² ≥ bg.
        let root_ok = |k: i128| {
            let t = k * q - g;
            t >= 0 && t * t >= bg
        };
        let mut k = div_ceil(g, q).max(1);
        while !root_ok(k) {
            k += 1;
        }
        let k1 = k.max(div_ceil(self.d, self.e1));
        let k2 = div_ceil(self.d * self.d * k1, k1 * q - g);
        (k1, k2)
    }

    /// Baseline sizing, evaluated on rationals.
    pub fn mgchh_sizing(&self) -> (i128, i128) {
        let (d, p1, p2, e1, e2) = (self.d, self.p1, self.p2, self.e1, self.e2);
        // α = (d + p2)/(p1 − e1); ε1 ≥ ε2/(2α) ⇔ 2(d + p2)e1 ≥ e2(p1 − e1).
        if 2 * (d + p2) * e1 >= e2 * (p1 - e1) {
            (
                div_ceil(2 * (d + p2) * d, (p1 - e1) * e2),
                div_ceil(2 * d, e2),
            )
        } else {
            let den = e2 * (p1 - e1) - (d + p2) * e1;
            (div_ceil(d, e1), div_ceil(d * (p1 - e1), den))
        }
    }
}

pub fn div_ceil(a: i128, b: i128) -> i128 {
    assert!(b > 0 && a >= 0);
    (a + b - 1) / b
}

/// Brute-force counts of a pair stream.
#[derive(Debug, Default)]
pub struct Brute {
    pub n: u64,
    pub fx: HashMap<Item, u64>,
    pub fxy: HashMap<(Item, Item), u64>,
}

impl Brute {
    pub fn new(stream: &[(Item, Item)]) -> Self {
        let mut b = Brute::default();
        for &(x, y) in stream {
            b.n += 1;
            *b.fx.entry(x).or_default() += 1;
            *b.fxy.entry((x, y)).or_default() += 1;
        }
        b
    }

    pub fn fx(&self, x: Item) -> u64 {
        self.fx.get(&x).copied().unwrap_or(0)
    }

    pub fn fxy(&self, x: Item, y: Item) -> u64 {
        self.fxy.get(&(x, y)).copied().unwrap_or(0)
    }

    /// Exact answer for thresholds `p1/d`, `p2/d`: `f_x > φ1·N` and
    /// `f_xy > φ2·f_x`, compared on integers.
    pub fn echh(&self, p1: i128, p2: i128, d: i128) -> (HashSet<Item>, HashSet<(Item, Item)>) {
        let n = self.n as i128;
        let primaries: HashSet<Item> = self
            .fx
            .iter()
            .filter(|(_, &f)| f as i128 * d > p1 * n)
            .map(|(&x, _)| x)
            .collect();
        let tuples = self
            .fxy
            .iter()
            .filter(|(&(x, _), &f)| {
                primaries.contains(&x) && f as i128 * d > p2 * self.fx(x) as i128
            })
            .map(|(&k, _)| k)
            .collect();
        (primaries, tuples)
    }
}

/// Random stream over `[0, m1) × [0, m2)` with mild skew.
pub fn random_stream(rng: &mut Pcg64, n: usize, m1: u64, m2: u64) -> Vec<(Item, Item)> {
    (0..n)
        .map(|_| {
            let a: u64 = rng.random_range(0..m1);
            let b: u64 = rng.random_range(0..m1);
            (a.min(b), rng.random_range(0..m2))
        })
        .collect()
}

pub fn rng(seed: u64) -> Pcg64 {
    Pcg64::seed_from_u64(seed)
}

/// Asserts the Space Saving bounds for every item seen in `stream`.
pub fn check_space_saving(s: &StreamSummary<Item>, stream: &[Item], k: usize) {
    let mut exact: HashMap<Item, u64> = HashMap::new();
    for &v in stream {
        *exact.entry(v).or_default() += 1;
    }
    let n = stream.len() as u64;
    let total: u64 = s.iter().map(|(_, f)| f).sum();
    assert_eq!(total, n, "sum law");
    assert!(s.len() <= k);
    let min = s.min_freq();
    assert!(min * k as u64 <= n, "min {min} > N/k");
    for (&v, &f) in &exact {
        let est = s.estimate(&v).unwrap_or(min);
        assert!(est >= f, "item {v}: {est} < {f}");
        assert!(est - f <= min, "item {v}: error {} > min {min}", est - f);
    }
}

/// Asserts the Misra-Gries bounds for every item seen in `stream`.
pub fn check_misra_gries(s: &MgSummary<Item>, stream: &[Item], k: usize) {
    let mut exact: HashMap<Item, u64> = HashMap::new();
    for &v in stream {
        *exact.entry(v).or_default() += 1;
    }
    let n = stream.len() as u64;
    assert!(s.len() <= k);
    for (&v, &f) in &exact {
        let est = s.estimate(&v);
        assert!(est <= f, "item {v}: {est} > {f}");
        assert!((f - est) * k as u64 <= n, "N/k bound for {v}");
        assert!((f - est) * (k as u64 + 1) <= n, "N/(k+1) bound for {v}");
    }
}
