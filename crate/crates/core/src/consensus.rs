//! Consensus generation: Copeland aggregation and the fairness-constrained
//! variant that repairs a Copeland ranking by adjacent cross-group swaps until
//! its ARP falls under `1 − t`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{arp_from_wins, group_sizes, group_wins};
use crate::types::{Dataset, Ranking, RankingKind};

/// `counts[i][j]` is the number of base rankings placing candidate `i` above
/// candidate `j`; candidates are indexed in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceMatrix {
    candidate_ids: Vec<String>,
    counts: Vec<Vec<u32>>,
    rankings: u32,
}

impl PreferenceMatrix {
    pub fn candidate_ids(&self) -> &[String] {
        &self.candidate_ids
    }

    pub fn counts(&self) -> &[Vec<u32>] {
        &self.counts
    }

    /// Number of base rankings, m.
    pub fn rankings(&self) -> u32 {
        self.rankings
    }

    pub fn len(&self) -> usize {
        self.candidate_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidate_ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.candidate_ids.binary_search_by(|c| c.as_str().cmp(id)).ok()
    }

    /// Rankings that place `a` above `b`.
    pub fn count(&self, a: &str, b: &str) -> Option<u32> {
        Some(self.counts[self.index_of(a)?][self.index_of(b)?])
    }

    /// Σ over base rankings of the Kendall-Tau distance to `order`, read off the
    /// matrix: every pair placed `x` above `y` costs the rankings preferring `y`.
    pub fn disagreement(&self, order: &[String]) -> Result<u64> {
        let idx = order
            .iter()
            .map(|id| self.index_of(id).ok_or(Error::CandidateSetMismatch))
            .collect::<Result<Vec<_>>>()?;
        if idx.len() != self.len() {
            return Err(Error::CandidateSetMismatch);
        }
        let mut cost = 0u64;
        for (a, &x) in idx.iter().enumerate() {
            for &y in &idx[a + 1..] {
                cost += self.counts[y][x] as u64;
            }
        }
        Ok(cost)
    }
}

pub fn preference_matrix(base: &[Ranking]) -> Result<PreferenceMatrix> {
    let first = base.first().ok_or(Error::EmptyRankingSet)?;
    let mut candidate_ids = first.order.clone();
    candidate_ids.sort();
    candidate_ids.dedup();
    let n = candidate_ids.len();
    if n != first.len() {
        return Err(Error::CandidateSetMismatch);
    }

    let mut counts = vec![vec![0u32; n]; n];
    let mut position = vec![usize::MAX; n];
    for ranking in base {
        if ranking.len() != n {
            return Err(Error::CandidateSetMismatch);
        }
        position.fill(usize::MAX);
        for (p, id) in ranking.order.iter().enumerate() {
            let i = candidate_ids
                .binary_search(id)
                .map_err(|_| Error::CandidateSetMismatch)?;
            if position[i] != usize::MAX {
                return Err(Error::CandidateSetMismatch);
            }
            position[i] = p;
        }
        for i in 0..n {
            for j in 0..n {
                if position[i] < position[j] {
                    counts[i][j] += 1;
                }
            }
        }
    }

    Ok(PreferenceMatrix {
        candidate_ids,
        counts,
        rankings: base.len() as u32,
    })
}

/// Copeland score of every candidate: one point per pairwise majority win,
/// half a point per pairwise tie.
pub fn copeland_scores(pm: &PreferenceMatrix) -> BTreeMap<String, f64> {
    half_points(pm)
        .into_iter()
        .zip(&pm.candidate_ids)
        .map(|(h, id)| (id.clone(), h as f64 / 2.0))
        .collect()
}

/// Copeland scores doubled, so ties stay integral.
fn half_points(pm: &PreferenceMatrix) -> Vec<u32> {
    let n = pm.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| match pm.counts[i][j].cmp(&pm.counts[j][i]) {
                    std::cmp::Ordering::Greater => 2,
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Less => 0,
                })
                .sum()
        })
        .collect()
}

/// Candidate ids by Copeland score descending, ties by id ascending.
fn copeland_order(pm: &PreferenceMatrix) -> Vec<String> {
    let points = half_points(pm);
    let mut idx: Vec<usize> = (0..pm.len()).collect();
    // ids are already ascending, so a stable sort keeps the id tie-break
    idx.sort_by(|&a, &b| points[b].cmp(&points[a]));
    idx.into_iter().map(|i| pm.candidate_ids[i].clone()).collect()
}

/// Fairness threshold `t`; the generated ranking must reach ARP ≤ `1 − t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationRequest {
    threshold: f64,
}

impl GenerationRequest {
    pub fn new(threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::ThresholdOutOfRange(threshold));
        }
        Ok(GenerationRequest { threshold })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Maximum permitted ARP.
    pub fn delta(&self) -> f64 {
        1.0 - self.threshold
    }
}

/// One repair step: the occupants of positions `position` and `position + 1`
/// traded places.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapStep {
    pub position: usize,
    pub up: String,
    pub down: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusResult {
    pub ranking: Ranking,
    pub achieved_arp: f64,
    pub feasible: bool,
    pub threshold_used: f64,
    pub copeland_scores: BTreeMap<String, f64>,
    pub swap_trace: Vec<SwapStep>,
    pub total_kt_cost: u64,
}

/// Unconstrained Copeland consensus; the same as [`fair_copeland`] at `t = 0`.
pub fn copeland_ranking(base: &[Ranking], dataset: &Dataset) -> Result<ConsensusResult> {
    fair_copeland(base, dataset, GenerationRequest { threshold: 0.0 })
}

/// Copeland consensus repaired toward ARP ≤ `1 − t`.
///
/// Starting from the Copeland order, while the ARP exceeds the bound: take the
/// most favored group A and least favored group B (ties by label), and swap the
/// deepest adjacent pair with an A member directly above a B member. Without
/// such a pair, the deepest A member directly above any non-A candidate is
/// swapped instead. The loop stops on success, when no swap applies, or after
/// n³ steps; in the last two cases the lowest-ARP state seen is returned with
/// `feasible = false` and the trace cut at that state.
///
/// Swaps always cross groups, so the order within each group is the Copeland
/// order.
pub fn fair_copeland(
    base: &[Ranking],
    dataset: &Dataset,
    req: GenerationRequest,
) -> Result<ConsensusResult> {
    let pm = preference_matrix(base)?;
    if dataset.groups().len() < 2 {
        return Err(Error::SingleGroup);
    }
    let start = copeland_order(&pm);
    let start_ranking = consensus_ranking(start, req.threshold);
    let mut seq = dataset.group_sequence(&start_ranking)?;
    let mut order = start_ranking.order;

    let n = order.len();
    let sizes = group_sizes(dataset);
    let delta = req.delta();
    let mut wins = group_wins(&seq, &sizes);
    let (mut arp, mut hi, mut lo) = arp_from_wins(&wins, &sizes, n);

    let mut trace = Vec::new();
    let (mut best_arp, mut best_len) = (arp, 0);
    let cap = n.pow(3);
    while arp.to_f64() > delta && trace.len() < cap {
        let deepest = |pred: &dyn Fn(usize, usize) -> bool| {
            (0..n - 1).rev().find(|&k| pred(seq[k], seq[k + 1]))
        };
        let Some(k) = deepest(&|a, b| a == hi && b == lo).or_else(|| deepest(&|a, b| a == hi && b != hi))
        else {
            break;
        };

        wins[seq[k]] -= 1;
        wins[seq[k + 1]] += 1;
        seq.swap(k, k + 1);
        order.swap(k, k + 1);
        trace.push(SwapStep {
            position: k + 1,
            up: order[k].clone(),
            down: order[k + 1].clone(),
        });

        (arp, hi, lo) = arp_from_wins(&wins, &sizes, n);
        if arp < best_arp {
            (best_arp, best_len) = (arp, trace.len());
        }
    }

    let achieved = if arp.to_f64() <= delta {
        arp
    } else {
        // rewind to the best state on the trajectory
        for step in trace.drain(best_len..).rev() {
            order.swap(step.position - 1, step.position);
        }
        best_arp
    };

    let achieved_arp = achieved.to_f64();
    Ok(ConsensusResult {
        total_kt_cost: pm.disagreement(&order)?,
        ranking: consensus_ranking(order, req.threshold),
        achieved_arp,
        feasible: achieved_arp <= delta,
        threshold_used: req.threshold,
        copeland_scores: copeland_scores(&pm),
        swap_trace: trace,
    })
}

fn consensus_ranking(order: Vec<String>, threshold: f64) -> Ranking {
    Ranking::new(
        "consensus",
        format!("Fair-Copeland t={threshold}"),
        order,
        RankingKind::Consensus,
    )
}

/// Moves `candidate_id` to the 1-based `new_position`, shifting the candidates
/// in between by one. All other relative orders are kept.
pub fn apply_edit(ranking: &Ranking, candidate_id: &str, new_position: usize) -> Result<Ranking> {
    let from = ranking
        .order
        .iter()
        .position(|id| id == candidate_id)
        .ok_or_else(|| Error::UnknownCandidate(candidate_id.to_string()))?;
    let n = ranking.len();
    if !(1..=n).contains(&new_position) {
        return Err(Error::PositionOutOfRange {
            position: new_position,
            n,
        });
    }
    let mut order = ranking.order.clone();
    let id = order.remove(from);
    order.insert(new_position - 1, id);
    Ok(Ranking {
        order,
        kind: RankingKind::Edited,
        ..ranking.clone()
    })
}
