//! Pairwise ranking metrics: Kendall-Tau distance, similarity, and the
//! group-fairness measures FPR (favored pair representation) and ARP
//! (attribute rank parity).
//!
//! All metrics are pair counts. A *mixed pair* is a pair of candidates from
//! different groups; a group *wins* a mixed pair when its member is ranked
//! above the other candidate. FPR is the fraction of a group's mixed pairs it
//! wins (0.5 is parity), ARP the largest FPR gap between any two groups.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Dataset, Group, Ranking, Ratio};

/// Rankings up to this length use direct pair counting, longer ones merge-sort
/// inversion counting.
pub const PAIR_COUNT_LIMIT: usize = 64;

/// Default number of histogram bins in a [`FairnessReport`].
pub const DEFAULT_BINS: usize = 10;

/// Number of discordant candidate pairs between two rankings.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<u64> {
    let seq = relative_positions(r1, r2)?;
    Ok(if seq.len() <= PAIR_COUNT_LIMIT {
        count_discordant_pairs(&seq)
    } else {
        count_inversions(&seq)
    })
}

/// Kendall-Tau by explicit enumeration of every pair, O(n²).
pub fn kendall_tau_pairwise(r1: &Ranking, r2: &Ranking) -> Result<u64> {
    relative_positions(r1, r2).map(|s| count_discordant_pairs(&s))
}

/// Kendall-Tau by merge-sort inversion counting, O(n log n).
pub fn kendall_tau_inversions(r1: &Ranking, r2: &Ranking) -> Result<u64> {
    relative_positions(r1, r2).map(|s| count_inversions(&s))
}

/// `1 − kt / (n(n−1)/2)`; 1 for identical rankings, 0 for a full reversal.
pub fn similarity(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let kt = kendall_tau(r1, r2)?;
    Ok(similarity_from_kt(kt, r1.len()))
}

pub(crate) fn total_pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

fn similarity_from_kt(kt: u64, n: usize) -> f64 {
    match total_pairs(n) {
        0 => 1.0,
        pairs => 1.0 - kt as f64 / pairs as f64,
    }
}

/// Positions in `r2` of the candidates of `r1`, in `r1` order. Discordant pairs
/// between the rankings are exactly the inversions of this sequence.
fn relative_positions(r1: &Ranking, r2: &Ranking) -> Result<Vec<usize>> {
    if r1.len() != r2.len() {
        return Err(Error::CandidateSetMismatch);
    }
    let pos: HashMap<&str, usize> = r2
        .order
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    if pos.len() != r2.len() {
        return Err(Error::CandidateSetMismatch);
    }
    let mut seen = vec![false; r1.len()];
    r1.order
        .iter()
        .map(|id| {
            let p = *pos.get(id.as_str()).ok_or(Error::CandidateSetMismatch)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::CandidateSetMismatch);
            }
            Ok(p)
        })
        .collect()
}

fn count_discordant_pairs(seq: &[usize]) -> u64 {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

fn count_inversions(seq: &[usize]) -> u64 {
    fn sort(v: &mut [usize], buf: &mut Vec<usize>) -> u64 {
        let n = v.len();
        if n < 2 {
            return 0;
        }
        let mid = n / 2;
        let mut inv = sort(&mut v[..mid], buf) + sort(&mut v[mid..], buf);
        buf.clear();
        let (mut i, mut j) = (0, mid);
        while i < mid && j < n {
            if v[i] <= v[j] {
                buf.push(v[i]);
                i += 1;
            } else {
                // every remaining left element exceeds v[j]
                inv += (mid - i) as u64;
                buf.push(v[j]);
                j += 1;
            }
        }
        buf.extend_from_slice(&v[i..mid]);
        buf.extend_from_slice(&v[j..]);
        v.copy_from_slice(buf);
        inv
    }
    let mut v = seq.to_vec();
    sort(&mut v, &mut Vec::with_capacity(seq.len()))
}

/// FPR of a single group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FprResult {
    pub fpr: f64,
    pub wins: u64,
    pub mixed_pair_count: u64,
}

impl FprResult {
    fn from_counts(wins: u64, mixed_pair_count: u64) -> Self {
        FprResult {
            fpr: Ratio::new(wins, mixed_pair_count).to_f64(),
            wins,
            mixed_pair_count,
        }
    }

    pub fn ratio(&self) -> Ratio {
        Ratio::new(self.wins, self.mixed_pair_count)
    }
}

/// FPR of `group` in `ranking`; candidates of the ranking outside the group are
/// the non-members.
pub fn fpr(group: &Group, ranking: &Ranking) -> Result<FprResult> {
    let members: HashSet<&str> = group.member_ids.iter().map(String::as_str).collect();
    if let Some(missing) = members.iter().find(|id| ranking.position_of(id).is_none()) {
        return Err(Error::UnknownCandidate(missing.to_string()));
    }
    let n = ranking.len() as u64;
    let g = members.len() as u64;
    if g == 0 || g >= n {
        return Err(Error::NoMixedPairs {
            group: group.label.clone(),
        });
    }
    let mut outsiders_above = 0;
    let mut wins = 0;
    for id in &ranking.order {
        if members.contains(id.as_str()) {
            wins += (n - g) - outsiders_above;
        } else {
            outsiders_above += 1;
        }
    }
    Ok(FprResult::from_counts(wins, g * (n - g)))
}

/// Mixed pairs won by each group, given the group index of the occupant of
/// every position and the size of every group. Single pass.
pub(crate) fn group_wins(sequence: &[usize], sizes: &[usize]) -> Vec<u64> {
    let n = sequence.len() as u64;
    let mut placed = vec![0u64; sizes.len()];
    let mut wins = vec![0u64; sizes.len()];
    for (k, &g) in sequence.iter().enumerate() {
        let outsiders_above = k as u64 - placed[g];
        wins[g] += (n - sizes[g] as u64) - outsiders_above;
        placed[g] += 1;
    }
    wins
}

pub(crate) fn mixed_pairs(n: usize, size: usize) -> u64 {
    size as u64 * (n - size) as u64
}

pub(crate) fn group_sizes(dataset: &Dataset) -> Vec<usize> {
    dataset.groups().iter().map(Group::size).collect()
}

/// Exact ARP from per-group win counts, plus the (argmax, argmin) group
/// indices. Ties go to the lower index, i.e. the smaller label.
pub(crate) fn arp_from_wins(wins: &[u64], sizes: &[usize], n: usize) -> (Ratio, usize, usize) {
    let ratios: Vec<Ratio> = wins
        .iter()
        .zip(sizes)
        .map(|(&w, &g)| Ratio::new(w, mixed_pairs(n, g)))
        .collect();
    let (mut hi, mut lo) = (0, 0);
    for (i, r) in ratios.iter().enumerate() {
        if *r > ratios[hi] {
            hi = i;
        }
        if *r < ratios[lo] {
            lo = i;
        }
    }
    (ratios[hi].abs_diff(ratios[lo]), hi, lo)
}

fn check_groups(dataset: &Dataset) -> Result<()> {
    if dataset.groups().len() < 2 {
        return Err(Error::SingleGroup);
    }
    Ok(())
}

/// FPR of every group of the dataset, in group-label order.
pub fn group_fprs(dataset: &Dataset, ranking: &Ranking) -> Result<Vec<FprResult>> {
    check_groups(dataset)?;
    let seq = dataset.group_sequence(ranking)?;
    let sizes = group_sizes(dataset);
    let wins = group_wins(&seq, &sizes);
    Ok(wins
        .iter()
        .zip(&sizes)
        .map(|(&w, &g)| FprResult::from_counts(w, mixed_pairs(seq.len(), g)))
        .collect())
}

/// ARP as an exact rational.
pub fn arp_exact(dataset: &Dataset, ranking: &Ranking) -> Result<Ratio> {
    check_groups(dataset)?;
    let seq = dataset.group_sequence(ranking)?;
    let sizes = group_sizes(dataset);
    Ok(arp_from_wins(&group_wins(&seq, &sizes), &sizes, seq.len()).0)
}

/// Largest absolute FPR difference between any two groups.
pub fn arp(dataset: &Dataset, ranking: &Ranking) -> Result<f64> {
    arp_exact(dataset, ranking).map(Ratio::to_f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFairness {
    pub fpr: f64,
    pub wins: u64,
    pub mixed_pair_count: u64,
    /// 1-based rank positions of the group's members, ascending.
    pub positions: Vec<usize>,
    pub histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub ranking_id: String,
    pub per_group: BTreeMap<String, GroupFairness>,
    pub arp: f64,
    pub arp_exact: Ratio,
    /// (most favored group, least favored group)
    pub extreme_groups: (String, String),
}

/// Full fairness audit of one ranking.
pub fn audit(dataset: &Dataset, ranking: &Ranking, bins: usize) -> Result<FairnessReport> {
    if bins == 0 {
        return Err(Error::InvalidBins);
    }
    check_groups(dataset)?;
    let seq = dataset.group_sequence(ranking)?;
    let n = seq.len();
    let sizes = group_sizes(dataset);
    let wins = group_wins(&seq, &sizes);
    let (arp, hi, lo) = arp_from_wins(&wins, &sizes, n);

    let mut positions = vec![Vec::new(); sizes.len()];
    for (k, &g) in seq.iter().enumerate() {
        positions[g].push(k + 1);
    }

    let per_group = dataset
        .groups()
        .iter()
        .zip(positions)
        .enumerate()
        .map(|(g, (group, positions))| {
            let fpr = FprResult::from_counts(wins[g], mixed_pairs(n, sizes[g]));
            let histogram = position_histogram(&positions, n, bins);
            let report = GroupFairness {
                fpr: fpr.fpr,
                wins: fpr.wins,
                mixed_pair_count: fpr.mixed_pair_count,
                positions,
                histogram,
            };
            (group.label.clone(), report)
        })
        .collect();

    let label = |g: usize| dataset.groups()[g].label.clone();
    Ok(FairnessReport {
        ranking_id: ranking.id.clone(),
        per_group,
        arp: arp.to_f64(),
        arp_exact: arp,
        extreme_groups: (label(hi), label(lo)),
    })
}

/// Counts of 1-based `positions` in `bins` equal-width slices of 1..=n. The
/// width is `max(n / bins, 1)`; the last bin absorbs the remainder.
pub fn position_histogram(positions: &[usize], n: usize, bins: usize) -> Vec<usize> {
    let width = (n / bins.max(1)).max(1);
    let mut hist = vec![0; bins.max(1)];
    for &p in positions {
        let b = ((p - 1) / width).min(hist.len() - 1);
        hist[b] += 1;
    }
    hist
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub ranking_ids: Vec<String>,
    pub kt: Vec<Vec<u64>>,
    pub similarity: Vec<Vec<f64>>,
}

/// Pairwise Kendall-Tau and similarity of `rankings`, rows in input order.
pub fn similarity_matrix(rankings: &[Ranking]) -> Result<SimilarityMatrix> {
    if rankings.is_empty() {
        return Err(Error::EmptyRankingSet);
    }
    let k = rankings.len();
    let n = rankings[0].len();
    let mut kt = vec![vec![0; k]; k];
    let mut sim = vec![vec![1.0; k]; k];
    for i in 0..k {
        if i > 0 {
            // validates rankings that have no off-diagonal partner below
            relative_positions(&rankings[0], &rankings[i])?;
        }
        for j in i + 1..k {
            let d = kendall_tau(&rankings[i], &rankings[j])?;
            kt[i][j] = d;
            kt[j][i] = d;
            sim[i][j] = similarity_from_kt(d, n);
            sim[j][i] = sim[i][j];
        }
    }
    Ok(SimilarityMatrix {
        ranking_ids: rankings.iter().map(|r| r.id.clone()).collect(),
        kt,
        similarity: sim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::test_support::dataset_from_ids;
    use proptest::prelude::*;

    fn r(ids: &[&str]) -> Ranking {
        Ranking::from_ids("r", ids)
    }

    fn group(label: &str, ids: &[&str]) -> Group {
        Group::new(label, ids.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn kendall_tau_examples() {
        assert_eq!(kendall_tau(&r(&["a", "b", "c"]), &r(&["a", "b", "c"])), Ok(0));
        assert_eq!(kendall_tau(&r(&["a", "b", "c"]), &r(&["c", "b", "a"])), Ok(3));
        assert_eq!(kendall_tau(&r(&["a", "b", "c", "d"]), &r(&["b", "a", "d", "c"])), Ok(2));
    }

    #[test]
    fn kendall_tau_rejects_mismatched_sets() {
        let base = r(&["a", "b", "c"]);
        for other in [&["a", "b"][..], &["a", "b", "x"], &["a", "a", "b"]] {
            assert_eq!(kendall_tau(&base, &r(other)), Err(Error::CandidateSetMismatch));
            assert_eq!(kendall_tau(&r(other), &base), Err(Error::CandidateSetMismatch));
        }
    }

    #[test]
    fn kendall_tau_uses_inversions_above_limit() {
        let ids: Vec<String> = (0..200).map(|i| format!("c{i:03}")).collect();
        let a = Ranking::base("a", ids.clone());
        let mut rev = ids.clone();
        rev.reverse();
        let b = Ranking::base("b", rev);
        assert_eq!(kendall_tau(&a, &b), Ok(200 * 199 / 2));
        assert_eq!(kendall_tau_pairwise(&a, &b), kendall_tau_inversions(&a, &b));
    }

    #[test]
    fn similarity_examples() {
        let abc = r(&["a", "b", "c"]);
        assert_eq!(similarity(&abc, &abc), Ok(1.0));
        assert_eq!(similarity(&abc, &abc.reversed()), Ok(0.0));
        let s = similarity(&r(&["a", "b", "c", "d"]), &r(&["b", "a", "d", "c"])).unwrap();
        assert!((s - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn fpr_examples() {
        let a = group("A", &["a1", "a2"]);
        let top = fpr(&a, &r(&["a1", "a2", "b1", "b2"])).unwrap();
        assert_eq!((top.fpr, top.wins, top.mixed_pair_count), (1.0, 4, 4));
        assert_eq!(fpr(&a, &r(&["b1", "b2", "a1", "a2"])).unwrap().fpr, 0.0);
        let mid = fpr(&a, &r(&["a1", "b1", "a2", "b2"])).unwrap();
        assert_eq!((mid.wins, mid.mixed_pair_count, mid.fpr), (3, 4, 0.75));
    }

    #[test]
    fn fpr_degenerate_groups() {
        let ranking = r(&["a1", "a2"]);
        assert!(matches!(fpr(&group("A", &["a1", "a2"]), &ranking), Err(Error::NoMixedPairs { .. })));
        assert!(matches!(fpr(&group("A", &[]), &ranking), Err(Error::NoMixedPairs { .. })));
        assert_eq!(
            fpr(&group("A", &["zz"]), &ranking),
            Err(Error::UnknownCandidate("zz".into()))
        );
    }

    #[test]
    fn arp_examples() {
        let ds = dataset_from_ids(&["a1", "a2", "b1", "b2"]);
        assert_eq!(arp(&ds, &r(&["a1", "a2", "b1", "b2"])), Ok(1.0));
        assert_eq!(arp(&ds, &r(&["a1", "b1", "a2", "b2"])), Ok(0.5));
        assert_eq!(arp(&ds, &r(&["a1", "b1", "b2", "a2"])), Ok(0.0));
    }

    #[test]
    fn arp_requires_two_groups() {
        let ds = dataset_from_ids(&["a1", "a2"]);
        assert_eq!(arp(&ds, &r(&["a1", "a2"])), Err(Error::SingleGroup));
        assert!(matches!(audit(&ds, &r(&["a1", "a2"]), 2), Err(Error::SingleGroup)));
    }

    #[test]
    fn audit_histograms() {
        let ds = dataset_from_ids(&["a1", "a2", "b1", "b2"]);
        let rep = audit(&ds, &r(&["a1", "b1", "a2", "b2"]), 2).unwrap();
        assert_eq!(rep.per_group["A"].positions, [1, 3]);
        assert_eq!(rep.per_group["A"].histogram, [1, 1]);
        assert_eq!(rep.per_group["B"].positions, [2, 4]);
        assert_eq!(rep.per_group["B"].histogram, [1, 1]);
        assert_eq!(rep.extreme_groups, ("A".into(), "B".into()));

        let rep = audit(&ds, &r(&["a1", "a2", "b1", "b2"]), 2).unwrap();
        assert_eq!(rep.per_group["A"].histogram, [2, 0]);
        assert_eq!(rep.per_group["B"].histogram, [0, 2]);
        assert_eq!(rep.arp, 1.0);

        assert_eq!(audit(&ds, &r(&["a1", "a2", "b1", "b2"]), 0), Err(Error::InvalidBins));
    }

    #[test]
    fn audit_extreme_ties_pick_smallest_label() {
        let ds = dataset_from_ids(&["a1", "a2", "b1", "b2"]);
        let rep = audit(&ds, &r(&["a1", "b1", "b2", "a2"]), 1).unwrap();
        assert_eq!(rep.arp, 0.0);
        assert_eq!(rep.extreme_groups, ("A".into(), "A".into()));
    }

    #[test]
    fn histogram_last_bin_absorbs_remainder() {
        assert_eq!(position_histogram(&[1, 3, 4, 7, 10], 10, 3), [2, 1, 2]);
        // more bins than positions: one position per bin, trailing bins empty
        assert_eq!(position_histogram(&[1, 3], 3, 5), [1, 0, 1, 0, 0]);
    }

    #[test]
    fn similarity_matrix_examples() {
        let a = r(&["a", "b", "c"]);
        let m = similarity_matrix(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(m.kt, [[0, 0], [0, 0]]);
        assert_eq!(m.similarity, [[1.0, 1.0], [1.0, 1.0]]);
        let m = similarity_matrix(&[a.clone(), a.reversed()]).unwrap();
        assert_eq!(m.kt, [[0, 3], [3, 0]]);
        assert_eq!(m.similarity, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(
            similarity_matrix(&[a.clone(), a.clone(), r(&["a", "b", "z"])]),
            Err(Error::CandidateSetMismatch)
        );
        assert_eq!(similarity_matrix(&[]), Err(Error::EmptyRankingSet));
    }

    fn permutation(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
        (1..=max_n).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    }

    fn to_ranking(p: &[usize]) -> Ranking {
        Ranking::base("p", p.iter().map(|i| format!("c{i}")).collect())
    }

    fn labelled(labels: &[u8]) -> (Dataset, Ranking) {
        let ids: Vec<String> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{}{i}", (b'a' + l) as char))
            .collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        (dataset_from_ids(&refs), Ranking::base("r", ids))
    }

    fn group_pattern() -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0u8..4, 2..12).prop_filter("two groups", |v| {
            v.iter().any(|&l| l != v[0])
        })
    }

    proptest! {
        #[test]
        fn kendall_tau_is_a_metric((a, b, c) in (1usize..10).prop_flat_map(|n| {
            let shuffled = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            (shuffled.clone(), shuffled.clone(), shuffled)
        })) {
            let (a, b, c) = (to_ranking(&a), to_ranking(&b), to_ranking(&c));
            let ab = kendall_tau(&a, &b).unwrap();
            prop_assert_eq!(ab, kendall_tau(&b, &a).unwrap());
            prop_assert_eq!(ab == 0, a.order == b.order);
            prop_assert!(ab <= kendall_tau(&a, &c).unwrap() + kendall_tau(&c, &b).unwrap());
            prop_assert_eq!(kendall_tau(&a, &a.reversed()).unwrap(), total_pairs(a.len()));
        }

        #[test]
        fn pairwise_and_inversion_counts_agree(p in permutation(150), q_seed in any::<u64>()) {
            let a = to_ranking(&p);
            let mut q = p.clone();
            q.rotate_left((q_seed as usize) % p.len());
            let b = to_ranking(&q);
            prop_assert_eq!(kendall_tau_pairwise(&a, &b), kendall_tau_inversions(&a, &b));
        }

        #[test]
        fn fpr_depends_only_on_group_pattern(labels in group_pattern()) {
            let (ds, ranking) = labelled(&labels);
            let before = group_fprs(&ds, &ranking).unwrap();
            // rename every candidate, keep the label pattern
            let renamed: Vec<String> = ranking.order.iter().map(|id| format!("{}x{id}", &id[..1])).collect();
            let refs: Vec<&str> = renamed.iter().map(String::as_str).collect();
            let ds2 = dataset_from_ids(&refs);
            let after = group_fprs(&ds2, &Ranking::base("r", renamed.clone())).unwrap();
            prop_assert_eq!(before, after);
        }

        #[test]
        fn wins_and_mixed_pairs_balance(labels in group_pattern()) {
            let (ds, ranking) = labelled(&labels);
            let fprs = group_fprs(&ds, &ranking).unwrap();
            let total_mixed: u64 = (0..labels.len())
                .flat_map(|i| (i + 1..labels.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| labels[i] != labels[j])
                .count() as u64;
            prop_assert_eq!(fprs.iter().map(|f| f.wins).sum::<u64>(), total_mixed);
            prop_assert_eq!(fprs.iter().map(|f| f.mixed_pair_count).sum::<u64>(), 2 * total_mixed);
            for f in &fprs {
                prop_assert!(f.wins <= f.mixed_pair_count);
            }
        }

        #[test]
        fn two_groups_complement(labels in prop::collection::vec(0u8..2, 2..14)
            .prop_filter("both groups", |v| v.contains(&0) && v.contains(&1))) {
            let (ds, ranking) = labelled(&labels);
            let f = group_fprs(&ds, &ranking).unwrap();
            // same denominator g(n−g) for both groups
            prop_assert_eq!(f[0].mixed_pair_count, f[1].mixed_pair_count);
            prop_assert_eq!(f[0].wins + f[1].wins, f[0].mixed_pair_count);
        }

        #[test]
        fn reversal_complements_fpr_and_keeps_arp(labels in group_pattern()) {
            let (ds, ranking) = labelled(&labels);
            let fwd = group_fprs(&ds, &ranking).unwrap();
            let rev = group_fprs(&ds, &ranking.reversed()).unwrap();
            for (a, b) in fwd.iter().zip(&rev) {
                prop_assert_eq!(a.wins + b.wins, a.mixed_pair_count);
            }
            prop_assert_eq!(arp_exact(&ds, &ranking).unwrap(), arp_exact(&ds, &ranking.reversed()).unwrap());
        }

        #[test]
        fn report_arp_matches_pairwise_max(labels in group_pattern()) {
            let (ds, ranking) = labelled(&labels);
            let rep = audit(&ds, &ranking, DEFAULT_BINS).unwrap();
            let ratios: Vec<Ratio> = rep.per_group.values().map(|g| Ratio::new(g.wins, g.mixed_pair_count)).collect();
            let brute = ratios.iter()
                .flat_map(|a| ratios.iter().map(move |b| a.abs_diff(*b)))
                .max()
                .unwrap();
            prop_assert_eq!(rep.arp_exact, brute);
            prop_assert_eq!(rep.arp == 0.0, ratios.iter().all(|r| *r == ratios[0]));
            for g in rep.per_group.values() {
                prop_assert_eq!(g.histogram.iter().sum::<usize>(), g.positions.len());
            }
        }
    }
}
