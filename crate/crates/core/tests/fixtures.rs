use std::path::PathBuf;

use fairfuse_core::consensus::{copeland_ranking, fair_copeland, GenerationRequest};
use fairfuse_core::ingestion::{
    load_base_rankings, load_dataset, load_scores, scores_to_ranking, write_dataset,
};
use fairfuse_core::metrics::{audit, kendall_tau, similarity, similarity_matrix};
use fairfuse_core::oracle::brute_force_kemeny;
use fairfuse_core::Error;

fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path)
}

#[test]
fn scholarship_dataset_shape() {
    let ds = load_dataset(fixture("scholarship/candidates.csv"), "race").unwrap();
    assert_eq!(ds.len(), 60);
    assert_eq!(ds.groups().len(), 5);

    let table = load_scores(fixture("scholarship/scores.csv")).unwrap();
    let labels: Vec<&str> = table.columns().iter().map(|c| c.name.as_str()).collect();
    assert_eq!(labels, ["math", "reading", "writing"]);
    for col in &labels {
        let r = scores_to_ranking(&table, col).unwrap();
        let report = audit(&ds, &r, 10).unwrap();
        assert_eq!(report.per_group.len(), 5);
        assert_eq!(report.per_group.values().map(|g| g.positions.len()).sum::<usize>(), 60);
    }
}

#[test]
fn employee_hr_group_is_advantaged_in_every_base_ranking() {
    let ds = load_dataset(fixture("employee/candidates.csv"), "job_role").unwrap();
    let base = load_base_rankings(fixture("employee/rankings.csv")).unwrap();
    assert_eq!(base.iter().map(|r| r.label.as_str()).collect::<Vec<_>>(), ["R1", "R2", "R3"]);
    let hr = ds.groups().iter().find(|g| g.label == "Human Resources").unwrap();
    assert_eq!(hr.size(), 1);
    for r in &base {
        let report = audit(&ds, r, 10).unwrap();
        assert!(report.per_group["Human Resources"].fpr > 0.5);
        assert!(report.per_group["Research Director"].fpr < 0.5);
    }

    // fairness pressure moves the lone HR employee down
    let hr_id = &hr.member_ids[0];
    let plain = copeland_ranking(&base, &ds).unwrap();
    let fair = fair_copeland(&base, &ds, GenerationRequest::new(0.8).unwrap()).unwrap();
    assert!(fair.achieved_arp < plain.achieved_arp);
    assert!(fair.ranking.position_of(hr_id) > plain.ranking.position_of(hr_id));
}

#[test]
fn employee_similarity_matrix_matches_pairwise_calls() {
    let base = load_base_rankings(fixture("employee/rankings.csv")).unwrap();
    let m = similarity_matrix(&base).unwrap();
    assert_eq!(m.ranking_ids, ["R1", "R2", "R3"]);
    for i in 0..3 {
        assert_eq!(m.kt[i][i], 0);
        assert_eq!(m.similarity[i][i], 1.0);
        for j in 0..3 {
            assert_eq!(m.kt[i][j], kendall_tau(&base[i], &base[j]).unwrap());
            assert_eq!(m.kt[i][j], m.kt[j][i]);
            assert_eq!(m.similarity[i][j], similarity(&base[i], &base[j]).unwrap());
            assert!((0.0..=1.0).contains(&m.similarity[i][j]));
        }
    }
}

#[test]
fn fixture_datasets_round_trip_through_csv() {
    for (file, protected) in [
        ("scholarship/candidates.csv", "race"),
        ("employee/candidates.csv", "job_role"),
        ("pair/candidates.csv", "group"),
    ] {
        let ds = load_dataset(fixture(file), protected).unwrap();
        let mut out = Vec::new();
        write_dataset(&ds, &mut out).unwrap();
        let back = fairfuse_core::ingestion::parse_dataset(out.as_slice(), protected).unwrap();
        assert_eq!(back, ds, "{file}");
    }
}

#[test]
fn pair_fixture_is_never_fair() {
    let ds = load_dataset(fixture("pair/candidates.csv"), "group").unwrap();
    let base = load_base_rankings(fixture("pair/rankings.csv")).unwrap();
    let res = fair_copeland(&base, &ds, GenerationRequest::new(1.0).unwrap()).unwrap();
    assert!(!res.feasible);
    assert_eq!(res.achieved_arp, 1.0);
}

#[test]
fn oracle_rejects_fixture_scale() {
    let base = load_base_rankings(fixture("employee/rankings.csv")).unwrap();
    assert_eq!(brute_force_kemeny(&base, 10), Err(Error::TooLarge { n: 25, max_n: 10 }));
}
