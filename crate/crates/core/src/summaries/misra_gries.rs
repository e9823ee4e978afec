//! Misra-Gries ("Frequent") summary with an optional per-entry payload.
//!
//! The payload lets a summary carry a nested structure per monitored item,
//! which is how the Misra-Gries correlated baseline keeps one secondary
//! summary under every primary counter.

use std::hash::Hash;

use indexmap::IndexMap;
use rustc_hash::FxBuildHasher;

use crate::error::{ChhError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MgEntry<P> {
    pub count: u64,
    pub payload: P,
}

/// Fixed-capacity decrement-all counter set. Estimates never exceed the
/// true frequency and undershoot it by at most N/(k+1).
#[derive(Debug, Clone)]
pub struct MgSummary<K, P = ()> {
    capacity: usize,
    entries: IndexMap<K, MgEntry<P>, FxBuildHasher>,
    processed: u64,
}

impl<K: Hash + Eq, P> MgSummary<K, P> {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(ChhError::InvalidCapacity(capacity));
        }
        Ok(Self {
            capacity,
            entries: IndexMap::with_capacity_and_hasher(capacity, FxBuildHasher),
            processed: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.capacity
    }

    /// Items fed through [`MgSummary::update`]. Nested use that drives the
    /// summary through `get_mut`/`insert` does not advance this.
    pub fn processed(&self) -> u64 {
        self.processed
    }

    pub fn get(&self, item: &K) -> Option<&MgEntry<P>> {
        self.entries.get(item)
    }

    pub fn get_mut(&mut self, item: &K) -> Option<&mut MgEntry<P>> {
        self.entries.get_mut(item)
    }

    /// Estimated count; 0 when unmonitored.
    pub fn estimate(&self, item: &K) -> u64 {
        self.entries.get(item).map_or(0, |e| e.count)
    }

    /// Installs `item` with count 1. Returns false (and drops the payload)
    /// when the summary is full or the item is already present.
    pub fn insert(&mut self, item: K, payload: P) -> bool {
        if self.is_full() || self.entries.contains_key(&item) {
            return false;
        }
        self.entries.insert(item, MgEntry { count: 1, payload });
        true
    }

    /// Decrements every counter by one and evicts those reaching zero.
    /// `hook` runs once for each entry that survives, after its decrement.
    pub fn decrement_all<F>(&mut self, mut hook: F)
    where
        F: FnMut(&K, &mut MgEntry<P>),
    {
        self.entries.retain(|k, e| {
            e.count -= 1;
            if e.count == 0 {
                return false;
            }
            hook(k, e);
            true
        });
    }

    /// Decrements the entry at `index` (insertion order, see [`iter`]) and
    /// evicts it at zero.
    ///
    /// [`iter`]: MgSummary::iter
    pub fn decrement_at(&mut self, index: usize) {
        let Some((_, e)) = self.entries.get_index_mut(index) else {
            return;
        };
        e.count -= 1;
        if e.count == 0 {
            self.entries.swap_remove_index(index);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &MgEntry<P>)> + '_ {
        self.entries.iter()
    }

    /// Sum of all counts.
    pub fn total(&self) -> u64 {
        self.entries.values().map(|e| e.count).sum()
    }
}

impl<K: Hash + Eq, P: Default> MgSummary<K, P> {
    /// Standard Misra-Gries step. A newcomer that meets a full summary only
    /// triggers the decrement; it is not installed in the same step.
    pub fn update(&mut self, item: K) {
        self.processed += 1;
        if let Some(e) = self.entries.get_mut(&item) {
            e.count += 1;
        } else if !self.is_full() {
            self.entries.insert(
                item,
                MgEntry {
                    count: 1,
                    payload: P::default(),
                },
            );
        } else {
            self.decrement_all(|_, _| {});
        }
    }
}
