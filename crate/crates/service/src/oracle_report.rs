//! Random-instance comparison of the consensus heuristics against the
//! exhaustive solvers.

use std::collections::BTreeMap;

use fairfuse_core::consensus::{copeland_ranking, fair_copeland, GenerationRequest};
use fairfuse_core::ingestion::synthesize_rankings;
use fairfuse_core::oracle::{brute_force_fair_kemeny, brute_force_kemeny};
use fairfuse_core::{AttributeValue, Candidate, Dataset, Ranking};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const THRESHOLDS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// A dataset of `n` candidates `c00..` spread over `groups` groups `G0..`
/// (every group non-empty), attribute `group`.
pub fn random_dataset(rng: &mut impl Rng, n: usize, groups: usize) -> Dataset {
    assert!(groups >= 1 && groups <= n);
    let mut labels: Vec<usize> = (0..n).map(|i| if i < groups { i } else { rng.random_range(0..groups) }).collect();
    labels.shuffle(rng);
    let candidates = labels
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let label = format!("G{g}");
            Candidate {
                id: format!("c{i:02}"),
                name: format!("Candidate {i}"),
                protected_value: label.clone(),
                attributes: BTreeMap::from([("group".to_string(), AttributeValue::Text(label))]),
            }
        })
        .collect();
    Dataset::new(candidates, "group", vec!["group".into()]).expect("valid random dataset")
}

/// `m` base rankings: a random ranking perturbed by up to n² adjacent swaps
/// per ranker, so rankers partly agree.
pub fn random_base(rng: &mut impl Rng, dataset: &Dataset, m: usize) -> Vec<Ranking> {
    let mut ids = dataset.ids();
    ids.shuffle(rng);
    let n = ids.len();
    let swaps = rng.random_range(0..=n * n);
    let seed = rng.random();
    synthesize_rankings(&Ranking::base("seed", ids), m, swaps, seed)
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub n: usize,
    pub m: usize,
    pub groups: usize,
    pub t: f64,
    pub copeland_cost: u64,
    pub kemeny_cost: u64,
    pub heuristic_cost: u64,
    pub heuristic_arp: f64,
    pub heuristic_feasible: bool,
    pub oracle_cost: Option<u64>,
    pub min_achievable_arp: f64,
}

impl Comparison {
    pub fn oracle_feasible(&self) -> bool {
        self.oracle_cost.is_some()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub max_n: usize,
    pub seed: u64,
    pub instances: usize,
    pub comparisons: usize,
    /// Instances where the Kemeny optimum cost more than the Copeland ranking.
    pub kemeny_dominance_violations: usize,
    /// Comparisons where the fair optimum cost less than the Kemeny optimum.
    pub fair_dominance_violations: usize,
    /// Comparisons where heuristic and oracle agree on feasibility.
    pub feasibility_agreement_rate: f64,
    /// Heuristic cost minus fair-optimal cost, over comparisons where both are
    /// feasible.
    pub mean_cost_gap: f64,
    pub max_cost_gap: u64,
    pub optimal_rate: f64,
    pub details: Vec<Comparison>,
}

/// Runs `instances` random instances with 3 ≤ n ≤ `max_n`, 2–3 groups and
/// m ∈ {2, 3, 5}, each at every threshold in [`THRESHOLDS`].
pub fn run(max_n: usize, instances: usize, seed: u64) -> fairfuse_core::Result<OracleReport> {
    let max_n = max_n.max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut details = Vec::new();
    let mut kemeny_violations = 0;
    for _ in 0..instances {
        let n = rng.random_range(3..=max_n);
        let groups = rng.random_range(2..=3.min(n));
        let m = [2, 3, 5][rng.random_range(0..3)];
        let dataset = random_dataset(&mut rng, n, groups);
        let base = random_base(&mut rng, &dataset, m);

        let copeland = copeland_ranking(&base, &dataset)?;
        let kemeny = brute_force_kemeny(&base, max_n)?;
        if kemeny.cost > copeland.total_kt_cost {
            kemeny_violations += 1;
        }
        for t in THRESHOLDS {
            let req = GenerationRequest::new(t)?;
            let heuristic = fair_copeland(&base, &dataset, req)?;
            let oracle = brute_force_fair_kemeny(&base, &dataset, req.delta(), max_n)?;
            details.push(Comparison {
                n,
                m,
                groups,
                t,
                copeland_cost: copeland.total_kt_cost,
                kemeny_cost: kemeny.cost,
                heuristic_cost: heuristic.total_kt_cost,
                heuristic_arp: heuristic.achieved_arp,
                heuristic_feasible: heuristic.feasible,
                oracle_cost: oracle.best.map(|b| b.cost),
                min_achievable_arp: oracle.min_achievable_arp,
            });
        }
    }

    let fair_violations = details
        .iter()
        .filter(|c| c.oracle_cost.is_some_and(|o| o < c.kemeny_cost))
        .count();
    let agree = details.iter().filter(|c| c.heuristic_feasible == c.oracle_feasible()).count();
    let gaps: Vec<u64> = details
        .iter()
        .filter(|c| c.heuristic_feasible)
        .filter_map(|c| c.oracle_cost.map(|o| c.heuristic_cost.saturating_sub(o)))
        .collect();
    let rate = |k: usize, of: usize| if of == 0 { 1.0 } else { k as f64 / of as f64 };
    Ok(OracleReport {
        max_n,
        seed,
        instances,
        comparisons: details.len(),
        kemeny_dominance_violations: kemeny_violations,
        fair_dominance_violations: fair_violations,
        feasibility_agreement_rate: rate(agree, details.len()),
        mean_cost_gap: if gaps.is_empty() { 0.0 } else { gaps.iter().sum::<u64>() as f64 / gaps.len() as f64 },
        max_cost_gap: gaps.iter().copied().max().unwrap_or(0),
        optimal_rate: rate(gaps.iter().filter(|&&g| g == 0).count(), gaps.len()),
        details,
    })
}

impl OracleReport {
    pub fn summary(&self) -> String {
        format!(
            "oracle comparison: {} instances (n <= {}), {} threshold runs\n\
             kemeny <= copeland violations: {}\n\
             fair-kemeny >= kemeny violations: {}\n\
             feasibility agreement: {:.4}\n\
             cost gap (heuristic - fair optimum): mean {:.4}, max {}, optimal in {:.4} of feasible runs\n",
            self.instances,
            self.max_n,
            self.comparisons,
            self.kemeny_dominance_violations,
            self.fair_dominance_violations,
            self.feasibility_agreement_rate,
            self.mean_cost_gap,
            self.max_cost_gap,
            self.optimal_rate,
        )
    }
}
