//! Fairness auditing and fair consensus generation for rankings.
//!
//! Given candidates split into groups by a protected attribute and a set of
//! base rankings from several rankers, this crate measures how each ranking
//! treats every group (FPR, ARP), compares rankings by Kendall-Tau distance,
//! and builds Copeland consensus rankings whose ARP is pushed under a
//! user-chosen bound.
//!
//! ```
//! use fairfuse_core::{consensus, ingestion, metrics};
//!
//! let ds = ingestion::parse_dataset("id,g\na1,A\na2,A\nb1,B\nb2,B\n".as_bytes(), "g").unwrap();
//! let base = ingestion::parse_rankings("position,R1\n1,a1\n2,a2\n3,b1\n4,b2\n".as_bytes()).unwrap();
//! assert_eq!(metrics::arp(&ds, &base[0]).unwrap(), 1.0);
//!
//! let req = consensus::GenerationRequest::new(0.75).unwrap();
//! let fair = consensus::fair_copeland(&base, &ds, req).unwrap();
//! assert!(fair.feasible);
//! assert_eq!(fair.ranking.order, ["a1", "b1", "b2", "a2"]);
//! ```

pub mod consensus;
pub mod error;
pub mod ingestion;
pub mod metrics;
mod names;
pub mod oracle;
pub mod types;

pub use error::{Error, Result};
pub use types::{AttributeValue, Candidate, Dataset, Group, Ranking, RankingKind, Ratio};
