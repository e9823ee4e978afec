//! Space Saving over a bucket-list "stream summary".
//!
//! Counters live in a slab and are threaded into doubly linked lists, one
//! list per distinct frequency. The buckets themselves form a doubly linked
//! list sorted by ascending frequency, so the minimum is always the head
//! bucket and every update touches a constant number of links.

use std::hash::{BuildHasher, Hash};

use hashbrown::HashTable;
use rustc_hash::FxBuildHasher;

use crate::error::{ChhError, Result};

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Slot<K> {
    item: K,
    bucket: u32,
    prev: u32,
    next: u32,
}

#[derive(Debug, Clone)]
struct Bucket {
    freq: u64,
    prev: u32,
    next: u32,
    head: u32,
    tail: u32,
}

/// Fixed-capacity Space Saving summary with O(1) worst-case update.
///
/// On eviction the victim is the counter that entered the minimum bucket
/// earliest.
#[derive(Debug, Clone)]
pub struct StreamSummary<K> {
    capacity: usize,
    slots: Vec<Slot<K>>,
    buckets: Vec<Bucket>,
    free_buckets: Vec<u32>,
    min_bucket: u32,
    /// Slot numbers keyed by the hash of the slot's item. Keeping only
    /// `u32`s here keeps the table small enough to stay in cache.
    index: HashTable<u32>,
    processed: u64,
    #[cfg(any(test, feature = "op-counters"))]
    link_ops: u64,
}

impl<K: Hash + Eq> StreamSummary<K> {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 || capacity >= NIL as usize {
            return Err(ChhError::InvalidCapacity(capacity));
        }
        Ok(Self {
            capacity,
            slots: Vec::new(),
            buckets: Vec::new(),
            free_buckets: Vec::new(),
            min_bucket: NIL,
            index: HashTable::new(),
            processed: 0,
            #[cfg(any(test, feature = "op-counters"))]
            link_ops: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Number of occupied counters.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() == self.capacity
    }

    /// Stream length seen so far.
    pub fn processed(&self) -> u64 {
        self.processed
    }

    #[inline]
    pub fn update(&mut self, item: K) {
        self.processed += 1;
        let hash = FxBuildHasher.hash_one(&item);
        if let Some(slot) = self.find_hashed(hash, &item) {
            self.increment(slot);
            return;
        }
        let slot = if self.slots.len() < self.capacity {
            self.install(item);
            self.slots.len() as u32 - 1
        } else {
            let victim = self.buckets[self.min_bucket as usize].head;
            let old_hash = FxBuildHasher.hash_one(&self.slots[victim as usize].item);
            self.index
                .find_entry(old_hash, |&s| s == victim)
                .expect("victim is indexed")
                .remove();
            self.slots[victim as usize].item = item;
            self.increment(victim);
            victim
        };
        let slots = &self.slots;
        self.index.insert_unique(hash, slot, |&s| {
            FxBuildHasher.hash_one(&slots[s as usize].item)
        });
    }

    #[inline]
    fn find_hashed(&self, hash: u64, item: &K) -> Option<u32> {
        self.index
            .find(hash, |&s| self.slots[s as usize].item == *item)
            .copied()
    }

    fn find(&self, item: &K) -> Option<u32> {
        self.find_hashed(FxBuildHasher.hash_one(item), item)
    }

    /// Estimated frequency, or `None` if the item is not monitored.
    pub fn estimate(&self, item: &K) -> Option<u64> {
        self.find(item)
            .map(|s| self.buckets[self.slots[s as usize].bucket as usize].freq)
    }

    /// Minimum counter value; 0 while free counters remain.
    pub fn min_freq(&self) -> u64 {
        if !self.is_full() {
            return 0;
        }
        self.buckets[self.min_bucket as usize].freq
    }

    /// Every occupied counter exactly once, in slab order.
    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> + '_ {
        self.slots
            .iter()
            .map(move |s| (&s.item, self.buckets[s.bucket as usize].freq))
    }

    /// Counters by descending frequency, walking the bucket list.
    pub fn iter_desc(&self) -> impl Iterator<Item = (&K, u64)> + '_ {
        let mut tail = self.min_bucket;
        if tail != NIL {
            while self.buckets[tail as usize].next != NIL {
                tail = self.buckets[tail as usize].next;
            }
        }
        BucketWalk {
            summary: self,
            bucket: tail,
            slot: if tail == NIL {
                NIL
            } else {
                self.buckets[tail as usize].head
            },
        }
    }

    /// Total number of link rewrites performed so far.
    #[cfg(any(test, feature = "op-counters"))]
    pub fn link_ops(&self) -> u64 {
        self.link_ops
    }

    /// Walks the whole structure and checks its internal consistency. O(k).
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.slots.len() > self.capacity {
            return Err(format!(
                "{} counters exceed capacity {}",
                self.slots.len(),
                self.capacity
            ));
        }
        if self.index.len() != self.slots.len() {
            return Err("lookup is not a bijection onto counters".into());
        }
        let mut seen = 0usize;
        let mut sum = 0u64;
        let mut prev_freq = 0u64;
        let mut prev_bucket = NIL;
        let mut b = self.min_bucket;
        while b != NIL {
            let bucket = &self.buckets[b as usize];
            if bucket.prev != prev_bucket {
                return Err(format!("bucket {b} has a broken back link"));
            }
            if bucket.freq <= prev_freq {
                return Err("bucket frequencies not strictly increasing".into());
            }
            if bucket.head == NIL {
                return Err(format!("empty bucket {b} left in list"));
            }
            let mut s = bucket.head;
            let mut prev_slot = NIL;
            while s != NIL {
                let slot = &self.slots[s as usize];
                if slot.bucket != b || slot.prev != prev_slot {
                    return Err(format!("slot {s} mislinked"));
                }
                if self.find(&slot.item) != Some(s) {
                    return Err(format!("slot {s} not indexed"));
                }
                seen += 1;
                sum += bucket.freq;
                prev_slot = s;
                s = slot.next;
            }
            if bucket.tail != prev_slot {
                return Err(format!("bucket {b} tail mismatch"));
            }
            prev_freq = bucket.freq;
            prev_bucket = b;
            b = bucket.next;
        }
        if seen != self.slots.len() {
            return Err(format!(
                "{seen} counters reachable, {} allocated",
                self.slots.len()
            ));
        }
        if sum != self.processed {
            return Err(format!("counter sum {sum} != processed {}", self.processed));
        }
        Ok(())
    }

    /// Appends a counter for `item`; the caller indexes it.
    fn install(&mut self, item: K) {
        let slot = self.slots.len() as u32;
        self.slots.push(Slot {
            item,
            bucket: NIL,
            prev: NIL,
            next: NIL,
        });
        let head = self.min_bucket;
        let bucket = if head != NIL && self.buckets[head as usize].freq == 1 {
            head
        } else {
            let b = self.alloc_bucket(1);
            self.link_bucket_after(b, NIL);
            b
        };
        self.push_back(bucket, slot);
    }

    #[inline]
    fn increment(&mut self, slot: u32) {
        let bucket = self.slots[slot as usize].bucket;
        let freq = self.buckets[bucket as usize].freq + 1;
        let next = self.buckets[bucket as usize].next;
        if next != NIL && self.buckets[next as usize].freq == freq {
            self.unlink_slot(slot);
            self.push_back(next, slot);
            if self.buckets[bucket as usize].head == NIL {
                self.release_bucket(bucket);
            }
        } else if self.buckets[bucket as usize].head == self.buckets[bucket as usize].tail {
            // Sole occupant: the bucket can move up in place.
            self.buckets[bucket as usize].freq = freq;
        } else {
            self.unlink_slot(slot);
            let fresh = self.alloc_bucket(freq);
            self.link_bucket_after(fresh, bucket);
            self.push_back(fresh, slot);
        }
    }

    #[inline]
    fn alloc_bucket(&mut self, freq: u64) -> u32 {
        let bucket = Bucket {
            freq,
            prev: NIL,
            next: NIL,
            head: NIL,
            tail: NIL,
        };
        match self.free_buckets.pop() {
            Some(b) => {
                self.buckets[b as usize] = bucket;
                b
            }
            None => {
                self.buckets.push(bucket);
                (self.buckets.len() - 1) as u32
            }
        }
    }

    /// Links `b` after `after`; `NIL` means at the head of the list.
    #[inline]
    fn link_bucket_after(&mut self, b: u32, after: u32) {
        self.count_op();
        let next = if after == NIL {
            self.min_bucket
        } else {
            self.buckets[after as usize].next
        };
        self.buckets[b as usize].prev = after;
        self.buckets[b as usize].next = next;
        if next != NIL {
            self.buckets[next as usize].prev = b;
        }
        if after == NIL {
            self.min_bucket = b;
        } else {
            self.buckets[after as usize].next = b;
        }
    }

    #[inline]
    fn release_bucket(&mut self, b: u32) {
        self.count_op();
        let Bucket { prev, next, .. } = self.buckets[b as usize];
        if prev != NIL {
            self.buckets[prev as usize].next = next;
        } else {
            self.min_bucket = next;
        }
        if next != NIL {
            self.buckets[next as usize].prev = prev;
        }
        self.free_buckets.push(b);
    }

    #[inline]
    fn push_back(&mut self, b: u32, slot: u32) {
        self.count_op();
        let tail = self.buckets[b as usize].tail;
        {
            let s = &mut self.slots[slot as usize];
            s.bucket = b;
            s.prev = tail;
            s.next = NIL;
        }
        if tail != NIL {
            self.slots[tail as usize].next = slot;
        } else {
            self.buckets[b as usize].head = slot;
        }
        self.buckets[b as usize].tail = slot;
    }

    #[inline]
    fn unlink_slot(&mut self, slot: u32) {
        self.count_op();
        let Slot {
            bucket, prev, next, ..
        } = self.slots[slot as usize];
        if prev != NIL {
            self.slots[prev as usize].next = next;
        } else {
            self.buckets[bucket as usize].head = next;
        }
        if next != NIL {
            self.slots[next as usize].prev = prev;
        } else {
            self.buckets[bucket as usize].tail = prev;
        }
    }

    #[inline(always)]
    fn count_op(&mut self) {
        #[cfg(any(test, feature = "op-counters"))]
        {
            self.link_ops += 1;
        }
    }
}

struct BucketWalk<'a, K> {
    summary: &'a StreamSummary<K>,
    bucket: u32,
    slot: u32,
}

impl<'a, K> Iterator for BucketWalk<'a, K> {
    type Item = (&'a K, u64);

    fn next(&mut self) -> Option<Self::Item> {
        while self.slot == NIL {
            if self.bucket == NIL {
                return None;
            }
            self.bucket = self.summary.buckets[self.bucket as usize].prev;
            if self.bucket == NIL {
                return None;
            }
            self.slot = self.summary.buckets[self.bucket as usize].head;
        }
        let slot = &self.summary.slots[self.slot as usize];
        self.slot = slot.next;
        Some((&slot.item, self.summary.buckets[self.bucket as usize].freq))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(k: usize, stream: &[char]) -> StreamSummary<char> {
        let mut s = StreamSummary::new(k).unwrap();
        for &c in stream {
            s.update(c);
            s.validate().unwrap();
        }
        s
    }

    fn sorted(s: &StreamSummary<char>) -> Vec<(char, u64)> {
        let mut v: Vec<_> = s.iter().map(|(c, f)| (*c, f)).collect();
        v.sort();
        v
    }

    #[test]
    fn zero_capacity_rejected() {
        assert!(matches!(
            StreamSummary::<u64>::new(0),
            Err(ChhError::InvalidCapacity(0))
        ));
    }

    #[test]
    fn empty_summary() {
        let s = StreamSummary::<u64>::new(2).unwrap();
        assert_eq!(s.len(), 0);
        assert_eq!(s.min_freq(), 0);
        assert_eq!(s.iter().count(), 0);
        assert_eq!(s.iter_desc().count(), 0);
        assert_eq!(StreamSummary::<u64>::new(4200).unwrap().capacity(), 4200);
    }

    #[test]
    fn eviction_replaces_minimum() {
        let s = run(2, &['a', 'b', 'a', 'c']);
        assert_eq!(sorted(&s), vec![('a', 2), ('c', 2)]);
        assert_eq!(s.estimate(&'a'), Some(2));
        assert_eq!(s.estimate(&'b'), None);
        assert_eq!(s.processed(), 4);
    }

    #[test]
    fn no_eviction_with_room() {
        let s = run(4, &['a', 'b', 'a', 'c']);
        assert_eq!(sorted(&s), vec![('a', 2), ('b', 1), ('c', 1)]);
        assert_eq!(s.min_freq(), 0);
        let s = run(3, &['a', 'b', 'a', 'c']);
        assert_eq!(sorted(&s), vec![('a', 2), ('b', 1), ('c', 1)]);
        assert_eq!(s.min_freq(), 1);
    }

    #[test]
    fn single_counter_overestimates() {
        let s = run(1, &['a', 'b']);
        assert_eq!(sorted(&s), vec![('b', 2)]);
        assert_eq!(s.min_freq(), 2);
    }

    #[test]
    fn ties_evict_oldest_in_min_bucket() {
        // b entered the 1-bucket before c, so b goes first.
        let s = run(3, &['a', 'a', 'b', 'c', 'd']);
        assert_eq!(sorted(&s), vec![('a', 2), ('c', 1), ('d', 2)]);
        // c is now the lone minimum.
        let s = run(3, &['a', 'a', 'b', 'c', 'd', 'e']);
        assert_eq!(sorted(&s), vec![('a', 2), ('d', 2), ('e', 2)]);
    }

    #[test]
    fn descending_walk() {
        let s = run(4, &['a', 'b', 'a', 'c', 'a', 'b']);
        let v: Vec<_> = s.iter_desc().map(|(c, f)| (*c, f)).collect();
        assert_eq!(v, vec![('a', 3), ('b', 2), ('c', 1)]);
    }

    #[test]
    fn link_ops_per_update_independent_of_capacity() {
        for k in [1usize, 8, 64, 1024, 1 << 16] {
            let mut s = StreamSummary::new(k).unwrap();
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            let mut worst = 0;
            for _ in 0..50_000 {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let before = s.link_ops();
                s.update(state % 5000);
                worst = worst.max(s.link_ops() - before);
            }
            assert!(worst <= 4, "k={k}: {worst} link ops in one update");
        }
    }
}
