//! Counter-based frequency summaries used by the correlated algorithms.

mod misra_gries;
mod space_saving;

pub use misra_gries::{MgEntry, MgSummary};
pub use space_saving::StreamSummary;
