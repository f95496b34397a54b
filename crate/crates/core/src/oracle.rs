//! Exhaustive reference solvers for small instances.
//!
//! Permutations are visited depth-first in lexicographic order of candidate
//! id, and an incumbent is only replaced by a strictly cheaper one, so ties go
//! to the lexicographically smallest id sequence. Subtrees whose cost lower
//! bound cannot beat the incumbent are skipped.

use serde::{Deserialize, Serialize};

use crate::consensus::{preference_matrix, PreferenceMatrix};
use crate::error::{Error, Result};
use crate::metrics::{arp_from_wins, group_sizes};
use crate::types::{Dataset, Ranking, Ratio};

pub const DEFAULT_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KemenyResult {
    pub order: Vec<String>,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairKemenyResult {
    /// Cheapest permutation with ARP ≤ δ, if any exists.
    pub best: Option<KemenyResult>,
    pub min_achievable_arp: f64,
}

impl FairKemenyResult {
    pub fn feasible(&self) -> bool {
        self.best.is_some()
    }
}

/// Minimum-cost (Σ Kendall-Tau to the base rankings) permutation.
pub fn brute_force_kemeny(base: &[Ranking], max_n: usize) -> Result<KemenyResult> {
    let pm = preference_matrix(base)?;
    check_size(pm.len(), max_n)?;
    let mut search = Search::new(&pm, None);
    search.run();
    Ok(search.result().expect("unconstrained search always finds a permutation"))
}

/// Minimum-cost permutation among those with ARP ≤ `delta`, together with the
/// smallest ARP any permutation attains.
pub fn brute_force_fair_kemeny(
    base: &[Ranking],
    dataset: &Dataset,
    delta: f64,
    max_n: usize,
) -> Result<FairKemenyResult> {
    let pm = preference_matrix(base)?;
    check_size(pm.len(), max_n)?;
    if dataset.groups().len() < 2 {
        return Err(Error::SingleGroup);
    }
    dataset.dataset_indices(&Ranking::base("ids", pm.candidate_ids().to_vec()))?;
    let groups: Vec<usize> = pm
        .candidate_ids()
        .iter()
        .map(|id| dataset.group_index(dataset.index_of(id).expect("checked above")))
        .collect();

    let mut search = Search::new(
        &pm,
        Some(FairnessConstraint {
            groups,
            sizes: group_sizes(dataset),
            delta,
        }),
    );
    search.run();
    Ok(FairKemenyResult {
        best: search.result(),
        min_achievable_arp: min_achievable_arp(dataset, max_n)?.to_f64(),
    })
}

/// Smallest ARP over every ordering of the dataset. ARP depends only on the
/// sequence of group labels, so distinct label sequences are enumerated.
pub fn min_achievable_arp(dataset: &Dataset, max_n: usize) -> Result<Ratio> {
    check_size(dataset.len(), max_n)?;
    if dataset.groups().len() < 2 {
        return Err(Error::SingleGroup);
    }
    let sizes = group_sizes(dataset);
    let n = dataset.len() as u64;

    fn walk(
        sizes: &[usize],
        left: &mut [usize],
        placed: usize,
        n: u64,
        wins: &mut [u64],
        best: &mut Option<Ratio>,
    ) {
        if placed as u64 == n {
            let (arp, _, _) = arp_from_wins(wins, sizes, n as usize);
            if best.is_none_or(|b| arp < b) {
                *best = Some(arp);
            }
            return;
        }
        for g in 0..sizes.len() {
            if left[g] == 0 {
                continue;
            }
            // outsiders still to come are the ones this member beats
            let outsiders_below = (n - placed as u64 - 1) - (left[g] as u64 - 1);
            left[g] -= 1;
            wins[g] += outsiders_below;
            walk(sizes, left, placed + 1, n, wins, best);
            wins[g] -= outsiders_below;
            left[g] += 1;
        }
    }

    let mut best = None;
    walk(&sizes, &mut sizes.clone(), 0, n, &mut vec![0; sizes.len()], &mut best);
    Ok(best.expect("at least one ordering exists"))
}

fn check_size(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        return Err(Error::TooLarge { n, max_n });
    }
    Ok(())
}

struct FairnessConstraint {
    /// Group index of each candidate, in preference-matrix order.
    groups: Vec<usize>,
    sizes: Vec<usize>,
    delta: f64,
}

struct Search<'a> {
    pm: &'a PreferenceMatrix,
    fairness: Option<FairnessConstraint>,
    /// `pair_floor[x][y]` = min(counts[x][y], counts[y][x])
    pair_floor: Vec<Vec<u64>>,
    prefix: Vec<usize>,
    used: Vec<bool>,
    wins: Vec<u64>,
    placed_per_group: Vec<usize>,
    best: Option<(u64, Vec<usize>)>,
}

impl<'a> Search<'a> {
    fn new(pm: &'a PreferenceMatrix, fairness: Option<FairnessConstraint>) -> Self {
        let n = pm.len();
        let c = pm.counts();
        let pair_floor = (0..n)
            .map(|x| (0..n).map(|y| c[x][y].min(c[y][x]) as u64).collect())
            .collect();
        let groups = fairness.as_ref().map_or(0, |f| f.sizes.len());
        Search {
            pm,
            fairness,
            pair_floor,
            prefix: Vec::with_capacity(n),
            used: vec![false; n],
            wins: vec![0; groups],
            placed_per_group: vec![0; groups],
            best: None,
        }
    }

    fn run(&mut self) {
        let n = self.pm.len();
        let floor: u64 = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .map(|(x, y)| self.pair_floor[x][y])
            .sum();
        self.descend(0, floor);
    }

    /// `cost` covers every pair with at least one placed member; `floor` is a
    /// lower bound on the pairs among unplaced candidates.
    fn descend(&mut self, cost: u64, floor: u64) {
        if let Some((best, _)) = &self.best {
            if cost + floor >= *best {
                return;
            }
        }
        let n = self.pm.len();
        if self.prefix.len() == n {
            if self.satisfies_fairness() {
                self.best = Some((cost, self.prefix.clone()));
            }
            return;
        }
        let counts = self.pm.counts();
        #[allow(clippy::needless_range_loop)]
        for x in 0..n {
            if self.used[x] {
                continue;
            }
            // x goes above every other unplaced candidate
            let (mut added, mut released) = (0u64, 0u64);
            for y in (0..n).filter(|&y| !self.used[y] && y != x) {
                added += counts[y][x] as u64;
                released += self.pair_floor[x][y];
            }
            let gained = self.place(x);
            self.descend(cost + added, floor - released);
            self.unplace(x, gained);
        }
    }

    fn place(&mut self, x: usize) -> u64 {
        self.used[x] = true;
        self.prefix.push(x);
        let Some(f) = &self.fairness else { return 0 };
        let g = f.groups[x];
        let n = self.pm.len();
        let remaining_after = n - self.prefix.len();
        let own_left = f.sizes[g] - self.placed_per_group[g] - 1;
        let gained = (remaining_after - own_left) as u64;
        self.wins[g] += gained;
        self.placed_per_group[g] += 1;
        gained
    }

    fn unplace(&mut self, x: usize, gained: u64) {
        self.used[x] = false;
        self.prefix.pop();
        if let Some(f) = &self.fairness {
            let g = f.groups[x];
            self.wins[g] -= gained;
            self.placed_per_group[g] -= 1;
        }
    }

    fn satisfies_fairness(&self) -> bool {
        match &self.fairness {
            None => true,
            Some(f) => {
                let (arp, _, _) = arp_from_wins(&self.wins, &f.sizes, self.pm.len());
                arp.to_f64() <= f.delta
            }
        }
    }

    fn result(&self) -> Option<KemenyResult> {
        self.best.as_ref().map(|(cost, idx)| KemenyResult {
            order: idx.iter().map(|&i| self.pm.candidate_ids()[i].clone()).collect(),
            cost: *cost,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consensus::copeland_ranking;
    use crate::metrics::{arp, kendall_tau};
    use crate::types::test_support::dataset_from_ids;

    fn r(ids: &[&str]) -> Ranking {
        Ranking::from_ids("r", ids)
    }

    /// Every permutation of `items` in lexicographic order, without pruning.
    fn all_permutations(items: &[String]) -> Vec<Vec<String>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut tail in all_permutations(&rest) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
        out
    }

    fn naive(base: &[Ranking], dataset: &Dataset, delta: f64) -> (Option<KemenyResult>, f64) {
        let mut ids = base[0].order.clone();
        ids.sort();
        let mut best: Option<KemenyResult> = None;
        let mut min_arp = f64::INFINITY;
        for perm in all_permutations(&ids) {
            let cand = Ranking::base("p", perm.clone());
            let a = arp(dataset, &cand).unwrap();
            min_arp = min_arp.min(a);
            if a > delta {
                continue;
            }
            let cost: u64 = base.iter().map(|b| kendall_tau(&cand, b).unwrap()).sum();
            if best.as_ref().is_none_or(|b| cost < b.cost) {
                best = Some(KemenyResult { order: perm, cost });
            }
        }
        (best, min_arp)
    }

    #[test]
    fn kemeny_examples() {
        let unanimous = vec![r(&["c", "a", "b"]); 3];
        let res = brute_force_kemeny(&unanimous, DEFAULT_MAX_N).unwrap();
        assert_eq!((res.order.as_slice(), res.cost), (&["c", "a", "b"].map(String::from)[..], 0));

        let base = [r(&["a", "b", "c"]), r(&["a", "b", "c"]), r(&["b", "a", "c"])];
        let res = brute_force_kemeny(&base, DEFAULT_MAX_N).unwrap();
        assert_eq!(res.order, ["a", "b", "c"]);
        assert_eq!(res.cost, 1);

        let ids: Vec<String> = (0..11).map(|i| format!("c{i:02}")).collect();
        assert_eq!(
            brute_force_kemeny(&[Ranking::base("big", ids)], DEFAULT_MAX_N),
            Err(Error::TooLarge { n: 11, max_n: 10 })
        );
    }

    #[test]
    fn kemeny_ties_pick_smallest_sequence() {
        let split = [r(&["b", "a"]), r(&["a", "b"])];
        assert_eq!(brute_force_kemeny(&split, 10).unwrap().order, ["a", "b"]);
        let cycle = [r(&["a", "b", "c"]), r(&["b", "c", "a"]), r(&["c", "a", "b"])];
        let res = brute_force_kemeny(&cycle, 10).unwrap();
        assert_eq!(res.order, ["a", "b", "c"]);
        assert_eq!(res.cost, 4);
    }

    #[test]
    fn fair_kemeny_examples() {
        let ds = dataset_from_ids(&["a1", "a2", "b1", "b2"]);
        let base = vec![r(&["a1", "a2", "b1", "b2"]); 3];

        let loose = brute_force_fair_kemeny(&base, &ds, 1.0, 10).unwrap();
        assert_eq!(loose.best, Some(brute_force_kemeny(&base, 10).unwrap()));

        let tight = brute_force_fair_kemeny(&base, &ds, 0.25, 10).unwrap();
        let (expected, min_arp) = naive(&base, &ds, 0.25);
        assert_eq!(tight.min_achievable_arp, 0.0);
        assert_eq!(min_arp, 0.0);
        assert_eq!(tight.best, expected);
        // the repair heuristic lands on one of the optimal ARP-0 orders here
        let best = tight.best.unwrap();
        assert_eq!(best.order, ["a1", "b1", "b2", "a2"]);
        assert_eq!(best.cost, 6);

        let pair = dataset_from_ids(&["a", "b"]);
        let res = brute_force_fair_kemeny(&[r(&["a", "b"])], &pair, 0.5, 10).unwrap();
        assert!(!res.feasible());
        assert_eq!(res.min_achievable_arp, 1.0);
    }

    #[test]
    fn pruned_search_matches_naive_enumeration() {
        let ds = dataset_from_ids(&["a1", "a2", "b1", "b2", "b3", "c1"]);
        let base = [
            r(&["a1", "b1", "a2", "c1", "b2", "b3"]),
            r(&["b2", "a1", "c1", "b3", "a2", "b1"]),
            r(&["c1", "a2", "b1", "a1", "b3", "b2"]),
            r(&["a2", "a1", "b3", "b2", "c1", "b1"]),
        ];
        let k = brute_force_kemeny(&base, 10).unwrap();
        assert_eq!(Some(k.clone()), naive(&base, &ds, 1.0).0);
        assert!(k.cost <= copeland_ranking(&base, &ds).unwrap().total_kt_cost);
        for delta in [0.0, 0.1, 0.2, 0.3, 0.5, 0.8] {
            let fair = brute_force_fair_kemeny(&base, &ds, delta, 10).unwrap();
            let (best, min_arp) = naive(&base, &ds, delta);
            assert_eq!(fair.best, best, "delta {delta}");
            assert_eq!(fair.min_achievable_arp, min_arp);
            if let Some(b) = fair.best {
                assert!(b.cost >= k.cost);
            }
        }
    }
}
