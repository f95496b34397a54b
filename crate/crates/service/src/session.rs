//! Decision sessions: one dataset, its base rankings, and the consensus
//! rankings generated and edited from them.
//!
//! Ranking ids are `base:<label>` for uploaded rankings and `gen:<k>` for
//! generated ones; the `k`-th edit of a generated ranking is
//! `gen:<k>:edited:<e>`. Generated rankings may be addressed by either their
//! current id or their `gen:<k>` root.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use fairfuse_core::consensus::{
    apply_edit, copeland_ranking, fair_copeland, preference_matrix, ConsensusResult, GenerationRequest,
};
use fairfuse_core::ingestion::{parse_base_rankings, parse_dataset, IngestError};
use fairfuse_core::metrics::{audit, similarity_matrix, FairnessReport, SimilarityMatrix, DEFAULT_BINS};
use fairfuse_core::{Dataset, Ranking, RankingKind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wire::SCHEMA_VERSION;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("session `{0}` not found")]
    SessionNotFound(String),
    #[error("ranking `{0}` not found")]
    RankingNotFound(String),
    #[error("ranking `{0}` is pinned and cannot be deleted")]
    CannotDeletePinned(String),
    #[error("ranking `{0}` is a base ranking and cannot be changed")]
    BaseRankingImmutable(String),
    #[error("fairness threshold {0} is outside [0, 1]")]
    ThresholdOutOfRange(f64),
    #[error("{file}: {source}")]
    Ingest {
        file: &'static str,
        #[source]
        source: IngestError,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] fairfuse_core::Error),
    #[error("snapshot {path}: {message}")]
    Snapshot { path: String, message: String },
}

impl ServiceError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::SessionNotFound(_) => "SessionNotFound",
            ServiceError::RankingNotFound(_) => "RankingNotFound",
            ServiceError::CannotDeletePinned(_) => "CannotDeletePinned",
            ServiceError::BaseRankingImmutable(_) => "BaseRankingImmutable",
            ServiceError::ThresholdOutOfRange(_) => "ThresholdOutOfRange",
            ServiceError::Ingest { source, .. } => match source {
                IngestError::Io { .. } => "Io",
                IngestError::Csv { .. } => "MalformedCsv",
                IngestError::EmptyFile => "EmptyFile",
                IngestError::MissingColumn { .. } => "MissingColumn",
                IngestError::DuplicateId { .. } => "DuplicateId",
                IngestError::UnknownColumn { .. } => "UnknownColumn",
                IngestError::NonFiniteScore { .. } => "NonFiniteScore",
                IngestError::InvalidPosition { .. } => "InvalidPosition",
                IngestError::Invalid(_) => "InvalidDataset",
            },
            ServiceError::Invalid(_) => "InvalidRequest",
            ServiceError::Core(e) => match e {
                fairfuse_core::Error::CandidateSetMismatch => "CandidateSetMismatch",
                fairfuse_core::Error::SingleGroup => "SingleGroup",
                fairfuse_core::Error::UnknownCandidate(_) => "UnknownCandidate",
                fairfuse_core::Error::PositionOutOfRange { .. } => "PositionOutOfRange",
                fairfuse_core::Error::ThresholdOutOfRange(_) => "ThresholdOutOfRange",
                fairfuse_core::Error::EmptyRankingSet => "EmptyRankingSet",
                _ => "InvalidRequest",
            },
            ServiceError::Snapshot { .. } => "SnapshotError",
        }
    }
}

pub type Result<T> = std::result::Result<T, ServiceError>;

/// A generated consensus ranking and how many times it has been edited.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedRanking {
    pub root_id: String,
    pub edits: u32,
    pub result: ConsensusResult,
}

impl GeneratedRanking {
    pub fn id(&self) -> &str {
        &self.result.ranking.id
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub dataset: Dataset,
    pub bins: usize,
    pub base_rankings: Vec<Ranking>,
    pub generated: Vec<GeneratedRanking>,
    pub pinned_ids: BTreeSet<String>,
    pub next_generated: u64,
    pub created_at: u64,
    pub updated_at: u64,
    /// Audit of every ranking, kept in step with every mutation and rebuilt on
    /// restore.
    #[serde(skip)]
    audit_cache: BTreeMap<String, FairnessReport>,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    schema: u32,
    session: Session,
}

fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

fn base_id(label: &str) -> String {
    format!("base:{label}")
}

impl Session {
    pub fn new(id: String, dataset: Dataset, base: Vec<Ranking>, bins: usize) -> Result<Self> {
        if base.is_empty() {
            return Err(fairfuse_core::Error::EmptyRankingSet.into());
        }
        if bins == 0 {
            return Err(ServiceError::Invalid("bins must be at least 1".into()));
        }
        let mut labels = BTreeSet::new();
        let base_rankings = base
            .into_iter()
            .map(|r| {
                if !labels.insert(r.label.clone()) {
                    return Err(ServiceError::Invalid(format!("duplicate ranker label `{}`", r.label)));
                }
                Ok(Ranking::new(base_id(&r.label), r.label, r.order, RankingKind::Base))
            })
            .collect::<Result<Vec<_>>>()?;
        let now = now_millis();
        let mut session = Session {
            id,
            dataset,
            bins,
            base_rankings,
            generated: Vec::new(),
            pinned_ids: BTreeSet::new(),
            next_generated: 1,
            created_at: now,
            updated_at: now,
            audit_cache: BTreeMap::new(),
        };
        session.rebuild_cache()?;
        Ok(session)
    }

    /// Builds a session from uploaded CSV text.
    pub fn from_csv(id: String, candidates_csv: &str, rankings_csv: &str, protected: &str, bins: usize) -> Result<Self> {
        let dataset = parse_dataset(candidates_csv.as_bytes(), protected)
            .map_err(|source| ServiceError::Ingest { file: "candidates", source })?;
        let base = parse_base_rankings(rankings_csv.as_bytes())
            .map_err(|source| ServiceError::Ingest { file: "rankings", source })?;
        Session::new(id, dataset, base, bins)
    }

    fn rebuild_cache(&mut self) -> Result<()> {
        self.audit_cache = self
            .rankings()
            .map(|r| Ok((r.id.clone(), audit(&self.dataset, r, self.bins)?)))
            .collect::<Result<_>>()?;
        Ok(())
    }

    /// Base rankings followed by generated rankings, in creation order.
    pub fn rankings(&self) -> impl Iterator<Item = &Ranking> {
        self.base_rankings
            .iter()
            .chain(self.generated.iter().map(|g| &g.result.ranking))
    }

    pub fn ranking(&self, id: &str) -> Option<&Ranking> {
        self.rankings().find(|r| r.id == id).or_else(|| {
            self.generated
                .iter()
                .find(|g| g.root_id == id)
                .map(|g| &g.result.ranking)
        })
    }

    fn generated_index(&self, id: &str) -> Result<usize> {
        if self.base_rankings.iter().any(|r| r.id == id) {
            return Err(ServiceError::BaseRankingImmutable(id.to_string()));
        }
        self.generated
            .iter()
            .position(|g| g.id() == id || g.root_id == id)
            .ok_or_else(|| ServiceError::RankingNotFound(id.to_string()))
    }

    pub fn report(&self, id: &str) -> Result<&FairnessReport> {
        let ranking = self
            .ranking(id)
            .ok_or_else(|| ServiceError::RankingNotFound(id.to_string()))?;
        Ok(self
            .audit_cache
            .get(&ranking.id)
            .expect("audit cache covers every ranking"))
    }

    pub fn reports(&self) -> impl Iterator<Item = &FairnessReport> {
        self.rankings().map(|r| &self.audit_cache[&r.id])
    }

    pub fn similarity(&self) -> Result<SimilarityMatrix> {
        let all: Vec<Ranking> = self.rankings().cloned().collect();
        Ok(similarity_matrix(&all)?)
    }

    /// Threshold below which generation returns the unconstrained consensus:
    /// `1 − ARP` of the plain Copeland ranking.
    pub fn t_effective_min(&self) -> Result<f64> {
        let plain = copeland_ranking(&self.base_rankings, &self.dataset)?;
        Ok(1.0 - plain.achieved_arp)
    }

    /// Generates a consensus ranking at threshold `t` and appends it.
    pub fn generate(&mut self, t: f64) -> Result<&GeneratedRanking> {
        let req = GenerationRequest::new(t).map_err(|_| ServiceError::ThresholdOutOfRange(t))?;
        let mut result = fair_copeland(&self.base_rankings, &self.dataset, req)?;
        let root_id = format!("gen:{}", self.next_generated);
        self.next_generated += 1;
        result.ranking.id = root_id.clone();
        let report = audit(&self.dataset, &result.ranking, self.bins)?;
        self.audit_cache.insert(root_id.clone(), report);
        self.generated.push(GeneratedRanking {
            root_id,
            edits: 0,
            result,
        });
        self.touch();
        Ok(self.generated.last().expect("just pushed"))
    }

    /// Moves a candidate within a generated ranking. Moving a candidate to its
    /// current position leaves the ranking, its id and its report untouched.
    pub fn edit(&mut self, ranking_id: &str, candidate: &str, position: usize) -> Result<&GeneratedRanking> {
        let i = self.generated_index(ranking_id)?;
        let current = &self.generated[i].result.ranking;
        let edited = apply_edit(current, candidate, position)?;
        if edited.order == current.order {
            return Ok(&self.generated[i]);
        }

        let old_id = current.id.clone();
        let entry = &mut self.generated[i];
        entry.edits += 1;
        let new_id = format!("{}:edited:{}", entry.root_id, entry.edits);
        let report = audit(&self.dataset, &edited, self.bins)?;
        let cost = preference_matrix(&self.base_rankings)?.disagreement(&edited.order)?;

        let result = &mut entry.result;
        result.ranking = Ranking { id: new_id.clone(), ..edited };
        result.achieved_arp = report.arp;
        result.feasible = report.arp <= 1.0 - result.threshold_used;
        result.total_kt_cost = cost;

        self.audit_cache.remove(&old_id);
        self.audit_cache.insert(new_id.clone(), FairnessReport { ranking_id: new_id.clone(), ..report });
        if self.pinned_ids.remove(&old_id) {
            self.pinned_ids.insert(new_id);
        }
        self.touch();
        Ok(&self.generated[i])
    }

    /// Pins a ranking; returns its current id.
    pub fn pin(&mut self, ranking_id: &str) -> Result<String> {
        let id = self
            .ranking(ranking_id)
            .ok_or_else(|| ServiceError::RankingNotFound(ranking_id.to_string()))?
            .id
            .clone();
        self.pinned_ids.insert(id.clone());
        self.touch();
        Ok(id)
    }

    /// Deletes an unpinned generated ranking; returns its current id.
    pub fn delete(&mut self, ranking_id: &str) -> Result<String> {
        let i = self.generated_index(ranking_id)?;
        let id = self.generated[i].id().to_string();
        if self.pinned_ids.contains(&id) {
            return Err(ServiceError::CannotDeletePinned(id));
        }
        self.generated.remove(i);
        self.audit_cache.remove(&id);
        self.touch();
        Ok(id)
    }

    fn touch(&mut self) {
        self.updated_at = now_millis().max(self.updated_at);
    }

    /// Self-describing JSON snapshot.
    pub fn to_snapshot(&self) -> Vec<u8> {
        let snap = SnapshotRef {
            schema: SCHEMA_VERSION,
            session: self,
        };
        let mut bytes = serde_json::to_vec_pretty(&snap).expect("session serializes");
        bytes.push(b'\n');
        bytes
    }

    pub fn from_snapshot(bytes: &[u8]) -> std::result::Result<Self, String> {
        let snap: Snapshot = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
        if snap.schema != SCHEMA_VERSION {
            return Err(format!("unsupported snapshot schema {}", snap.schema));
        }
        let mut session = snap.session;
        session.rebuild_cache().map_err(|e| e.to_string())?;
        Ok(session)
    }
}

#[derive(Serialize)]
struct SnapshotRef<'a> {
    schema: u32,
    session: &'a Session,
}

/// All live sessions, optionally persisted as one JSON file per session.
///
/// Each session sits behind its own lock: mutations of one session are
/// serialized and its snapshot is written while the write lock is held.
#[derive(Debug, Default)]
pub struct SessionStore {
    data_dir: Option<PathBuf>,
    sessions: RwLock<HashMap<String, Arc<RwLock<Session>>>>,
    counter: AtomicU64,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        SessionStore::default()
    }

    /// Opens a store backed by `dir`, restoring every snapshot found there.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        let snapshot_err = |path: &Path, message: String| ServiceError::Snapshot {
            path: path.display().to_string(),
            message,
        };
        fs::create_dir_all(&dir).map_err(|e| snapshot_err(&dir, e.to_string()))?;
        let mut sessions = HashMap::new();
        let mut max_seq = 0;
        let entries = fs::read_dir(&dir).map_err(|e| snapshot_err(&dir, e.to_string()))?;
        for entry in entries {
            let path = entry.map_err(|e| snapshot_err(&dir, e.to_string()))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let bytes = fs::read(&path).map_err(|e| snapshot_err(&path, e.to_string()))?;
            let session = Session::from_snapshot(&bytes).map_err(|m| snapshot_err(&path, m))?;
            if let Some(seq) = session.id.strip_prefix('s').and_then(|s| s.parse::<u64>().ok()) {
                max_seq = max_seq.max(seq);
            }
            sessions.insert(session.id.clone(), Arc::new(RwLock::new(session)));
        }
        tracing::info!(sessions = sessions.len(), dir = %dir.display(), "restored sessions");
        Ok(SessionStore {
            data_dir: Some(dir),
            sessions: RwLock::new(sessions),
            counter: AtomicU64::new(max_seq),
        })
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.data_dir.as_deref()
    }

    pub fn snapshot_path(&self, session_id: &str) -> Option<PathBuf> {
        self.data_dir.as_ref().map(|d| d.join(format!("{session_id}.json")))
    }

    fn next_id(&self) -> String {
        format!("s{:06}", self.counter.fetch_add(1, Ordering::SeqCst) + 1)
    }

    pub fn create(&self, candidates_csv: &str, rankings_csv: &str, protected: &str, bins: Option<usize>) -> Result<String> {
        let id = self.next_id();
        let session = Session::from_csv(id.clone(), candidates_csv, rankings_csv, protected, bins.unwrap_or(DEFAULT_BINS))?;
        self.persist(&session)?;
        self.sessions
            .write()
            .expect("session map lock")
            .insert(id.clone(), Arc::new(RwLock::new(session)));
        Ok(id)
    }

    fn get(&self, id: &str) -> Result<Arc<RwLock<Session>>> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::SessionNotFound(id.to_string()))
    }

    pub fn read<T>(&self, id: &str, f: impl FnOnce(&Session) -> Result<T>) -> Result<T> {
        let session = self.get(id)?;
        let guard = session.read().expect("session lock");
        f(&guard)
    }

    /// Runs a mutation and persists the result. A failed mutation or snapshot
    /// write leaves the in-memory session unchanged.
    pub fn write<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T>) -> Result<T> {
        let session = self.get(id)?;
        let mut guard = session.write().expect("session lock");
        let mut draft = guard.clone();
        let out = f(&mut draft)?;
        self.persist(&draft)?;
        *guard = draft;
        Ok(out)
    }

    fn persist(&self, session: &Session) -> Result<()> {
        let Some(path) = self.snapshot_path(&session.id) else {
            return Ok(());
        };
        let tmp = path.with_extension("json.tmp");
        let io_err = |e: std::io::Error| ServiceError::Snapshot {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        fs::write(&tmp, session.to_snapshot()).map_err(io_err)?;
        fs::rename(&tmp, &path).map_err(io_err)
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().expect("session map lock").keys().cloned().collect();
        ids.sort();
        ids
    }
}
