//! JSON shapes returned by the HTTP API and the CLI.
//!
//! Fairness values are written as decimals with exactly six fractional digits,
//! always next to the integer counts they were computed from.

use std::collections::BTreeMap;

use fairfuse_core::consensus::{ConsensusResult, SwapStep};
use fairfuse_core::metrics::{FairnessReport, SimilarityMatrix};
use fairfuse_core::{Dataset, Group, Ranking, RankingKind};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: u32 = 1;

/// A real number serialized with six fractional digits, e.g. `0.750000`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Fixed6(pub f64);

impl Fixed6 {
    pub fn render(&self) -> String {
        format!("{:.6}", self.0)
    }
}

impl Serialize for Fixed6 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.render()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupView {
    pub label: String,
    pub size: usize,
    pub fpr: Fixed6,
    pub wins: u64,
    pub mixed_pair_count: u64,
    pub positions: Vec<usize>,
    pub histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportView {
    pub ranking_id: String,
    pub arp: Fixed6,
    pub arp_numerator: u64,
    pub arp_denominator: u64,
    pub most_favored_group: String,
    pub least_favored_group: String,
    pub groups: Vec<GroupView>,
}

impl From<&FairnessReport> for ReportView {
    fn from(r: &FairnessReport) -> Self {
        ReportView {
            ranking_id: r.ranking_id.clone(),
            arp: Fixed6(r.arp),
            arp_numerator: r.arp_exact.num,
            arp_denominator: r.arp_exact.den,
            most_favored_group: r.extreme_groups.0.clone(),
            least_favored_group: r.extreme_groups.1.clone(),
            groups: r
                .per_group
                .iter()
                .map(|(label, g)| GroupView {
                    label: label.clone(),
                    size: g.positions.len(),
                    fpr: Fixed6(g.fpr),
                    wins: g.wins,
                    mixed_pair_count: g.mixed_pair_count,
                    positions: g.positions.clone(),
                    histogram: g.histogram.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityView {
    pub ranking_ids: Vec<String>,
    pub kt: Vec<Vec<u64>>,
    pub similarity: Vec<Vec<Fixed6>>,
}

impl From<&SimilarityMatrix> for SimilarityView {
    fn from(m: &SimilarityMatrix) -> Self {
        SimilarityView {
            ranking_ids: m.ranking_ids.clone(),
            kt: m.kt.clone(),
            similarity: m
                .similarity
                .iter()
                .map(|row| row.iter().copied().map(Fixed6).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingView {
    pub id: String,
    pub label: String,
    pub kind: RankingKind,
    pub order: Vec<String>,
}

impl From<&Ranking> for RankingView {
    fn from(r: &Ranking) -> Self {
        RankingView {
            id: r.id.clone(),
            label: r.label.clone(),
            kind: r.kind,
            order: r.order.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusView {
    pub ranking: RankingView,
    pub achieved_arp: Fixed6,
    pub feasible: bool,
    pub threshold: Fixed6,
    pub max_arp: Fixed6,
    pub total_kt_cost: u64,
    pub copeland_scores: BTreeMap<String, f64>,
    pub swap_trace: Vec<SwapStep>,
    pub edits: u32,
}

impl ConsensusView {
    pub fn new(result: &ConsensusResult, edits: u32) -> Self {
        ConsensusView {
            ranking: (&result.ranking).into(),
            achieved_arp: Fixed6(result.achieved_arp),
            feasible: result.feasible,
            threshold: Fixed6(result.threshold_used),
            max_arp: Fixed6(1.0 - result.threshold_used),
            total_kt_cost: result.total_kt_cost,
            copeland_scores: result.copeland_scores.clone(),
            swap_trace: result.swap_trace.clone(),
            edits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateView {
    pub id: String,
    pub name: String,
    pub group: String,
    pub attributes: BTreeMap<String, fairfuse_core::AttributeValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetView {
    pub protected_attribute: String,
    pub attribute_names: Vec<String>,
    pub candidates: Vec<CandidateView>,
    pub groups: Vec<Group>,
}

impl From<&Dataset> for DatasetView {
    fn from(ds: &Dataset) -> Self {
        DatasetView {
            protected_attribute: ds.protected_attribute().to_string(),
            attribute_names: ds.attribute_names().to_vec(),
            candidates: ds
                .candidates()
                .iter()
                .map(|c| CandidateView {
                    id: c.id.clone(),
                    name: c.name.clone(),
                    group: c.protected_value.clone(),
                    attributes: c.attributes.clone(),
                })
                .collect(),
            groups: ds.groups().to_vec(),
        }
    }
}

/// Slider metadata: below `t_effective_min` the fairness constraint is already
/// met by the unconstrained consensus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliderView {
    pub t_effective_min: Fixed6,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed6_renders_six_digits() {
        assert_eq!(serde_json::to_string(&Fixed6(0.75)).unwrap(), "0.750000");
        assert_eq!(serde_json::to_string(&Fixed6(1.0 / 3.0)).unwrap(), "0.333333");
        assert_eq!(serde_json::to_string(&Fixed6(1.0)).unwrap(), "1.000000");
        let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&[Fixed6(0.5)]).unwrap()).unwrap();
        assert_eq!(v[0].as_f64(), Some(0.5));
    }
}
