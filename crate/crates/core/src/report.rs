//! Query results and their JSON-lines / CSV encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracle::ExactCounts;
use crate::Item;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Primary {
    pub item: Item,
    pub freq: u64,
}

/// One reported correlated heavy hitter with its estimated tuple frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chh {
    pub primary: Item,
    pub secondary: Item,
    pub freq: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChhReport {
    pub primaries: Vec<Primary>,
    pub chhs: Vec<Chh>,
}

#[derive(Serialize)]
struct Record {
    primary: Item,
    secondary: Item,
    est_freq: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_freq: Option<u64>,
}

impl ChhReport {
    pub fn is_empty(&self) -> bool {
        self.primaries.is_empty() && self.chhs.is_empty()
    }

    /// Puts the report in canonical order: primaries by descending
    /// frequency, tuples grouped by primary then descending frequency.
    pub fn sort(&mut self) {
        self.primaries
            .sort_unstable_by(|a, b| b.freq.cmp(&a.freq).then(a.item.cmp(&b.item)));
        self.chhs.sort_unstable_by(|a, b| {
            a.primary
                .cmp(&b.primary)
                .then(b.freq.cmp(&a.freq))
                .then(a.secondary.cmp(&b.secondary))
        });
    }

    pub fn contains_primary(&self, item: Item) -> bool {
        self.primaries.iter().any(|p| p.item == item)
    }

    pub fn contains(&self, primary: Item, secondary: Item) -> bool {
        self.chhs
            .iter()
            .any(|c| c.primary == primary && c.secondary == secondary)
    }

    /// True when every primary and tuple of `other` is also in `self`.
    pub fn covers(&self, other: &ChhReport) -> bool {
        let prim: std::collections::HashSet<Item> = self.primaries.iter().map(|p| p.item).collect();
        let tup: std::collections::HashSet<(Item, Item)> =
            self.chhs.iter().map(|c| (c.primary, c.secondary)).collect();
        other.primaries.iter().all(|p| prim.contains(&p.item))
            && other
                .chhs
                .iter()
                .all(|c| tup.contains(&(c.primary, c.secondary)))
    }

    fn records<'a>(&'a self, exact: Option<&'a ExactCounts>) -> impl Iterator<Item = Record> + 'a {
        self.chhs.iter().map(move |c| Record {
            primary: c.primary,
            secondary: c.secondary,
            est_freq: c.freq,
            exact_freq: exact.map(|e| e.fxy(c.primary, c.secondary)),
        })
    }

    /// One JSON object per line: `{"primary":..,"secondary":..,"est_freq":..}`,
    /// plus `"exact_freq"` when an oracle is supplied.
    pub fn write_json_lines<W: Write>(&self, mut w: W, exact: Option<&ExactCounts>) -> Result<()> {
        for rec in self.records(exact) {
            serde_json::to_writer(&mut w, &rec)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }

    /// CSV with header `primary,secondary,est_freq[,exact_freq]`.
    pub fn write_csv<W: Write>(&self, w: W, exact: Option<&ExactCounts>) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        if exact.is_some() {
            out.write_record(["primary", "secondary", "est_freq", "exact_freq"])?;
        } else {
            out.write_record(["primary", "secondary", "est_freq"])?;
        }
        for rec in self.records(exact) {
            let mut row = vec![
                rec.primary.to_string(),
                rec.secondary.to_string(),
                rec.est_freq.to_string(),
            ];
            if let Some(f) = rec.exact_freq {
                row.push(f.to_string());
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}
