//! CSV ingestion and synthetic ranking generation.
//!
//! Three comma-separated, UTF-8, RFC 4180 formats with a header row:
//!
//! - candidates: `id,name,<attribute>...` (`name` optional)
//! - scores: `id,<ranker>...`, one numeric score per ranker, higher is better
//! - explicit rankings: `position,<ranker>...`, each cell a candidate id
//!
//! Line numbers in errors are 1-based file lines, the header being line 1.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::Error;
use crate::names::generated_name;
use crate::types::{AttributeValue, Candidate, Dataset, Ranking, RankingKind};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV at line {}: {message}", line.map_or("?".to_string(), |l| l.to_string()))]
    Csv { line: Option<u64>, message: String },
    #[error("file has no header or no data rows")]
    EmptyFile,
    #[error("missing required column `{column}`")]
    MissingColumn { column: String },
    #[error("duplicate candidate id `{id}` at line {line}")]
    DuplicateId { id: String, line: u64 },
    #[error("unknown score column `{column}`")]
    UnknownColumn { column: String },
    #[error("non-finite score `{value}` in column `{column}` at line {line}")]
    NonFiniteScore { column: String, line: u64, value: String },
    #[error("invalid position `{value}` at line {line}")]
    InvalidPosition { line: u64, value: String },
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl From<csv::Error> for IngestError {
    fn from(e: csv::Error) -> Self {
        IngestError::Csv {
            line: e.position().map(|p| p.line()),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, IngestError>;

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Data records, each with its file line number.
type Rows = Vec<(u64, csv::StringRecord)>;

/// Header plus data records.
fn read_table<R: Read>(reader: R) -> Result<(Vec<String>, Rows)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if headers.iter().all(String::is_empty) {
        return Err(IngestError::EmptyFile);
    }
    let rows = rdr
        .records()
        .map(|rec| {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            Ok((line, rec))
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(IngestError::EmptyFile);
    }
    Ok((headers, rows))
}

fn column(headers: &[String], name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| IngestError::MissingColumn {
            column: name.to_string(),
        })
}

pub fn load_dataset(path: impl AsRef<Path>, protected: &str) -> Result<Dataset> {
    parse_dataset(open(path.as_ref())?, protected)
}

/// Reads a candidates CSV. Groups come from the distinct values of the
/// `protected` column, which is always treated as categorical.
pub fn parse_dataset<R: Read>(reader: R, protected: &str) -> Result<Dataset> {
    let (headers, rows) = read_table(reader)?;
    let id_col = column(&headers, "id")?;
    column(&headers, protected)?;
    let name_col = headers.iter().position(|h| h == "name");

    let attr_cols: Vec<usize> = (0..headers.len())
        .filter(|&c| c != id_col && Some(c) != name_col)
        .collect();
    let numeric: HashSet<usize> = attr_cols
        .iter()
        .copied()
        .filter(|&c| headers[c] != protected)
        .filter(|&c| rows.iter().all(|(_, r)| parse_finite(&r[c]).is_some()))
        .collect();

    let mut seen = HashSet::new();
    let mut candidates = Vec::with_capacity(rows.len());
    for (i, (line, rec)) in rows.iter().enumerate() {
        let id = rec[id_col].to_string();
        if !seen.insert(id.clone()) {
            return Err(IngestError::DuplicateId { id, line: *line });
        }
        let attributes: BTreeMap<String, AttributeValue> = attr_cols
            .iter()
            .map(|&c| {
                let value = match numeric.contains(&c) {
                    true => AttributeValue::Number(parse_finite(&rec[c]).expect("checked numeric")),
                    false => AttributeValue::Text(rec[c].to_string()),
                };
                (headers[c].clone(), value)
            })
            .collect();
        candidates.push(Candidate {
            name: name_col.map_or_else(|| generated_name(i), |c| rec[c].to_string()),
            protected_value: attributes[protected].to_string(),
            id,
            attributes,
        });
    }

    let attribute_names = attr_cols.iter().map(|&c| headers[c].clone()).collect();
    Ok(Dataset::new(candidates, protected, attribute_names)?)
}

/// Writes a dataset as a candidates CSV (always with a `name` column).
pub fn write_dataset<W: Write>(dataset: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["id", "name"];
    header.extend(dataset.attribute_names().iter().map(String::as_str));
    w.write_record(&header)?;
    for c in dataset.candidates() {
        let mut row = vec![c.id.clone(), c.name.clone()];
        row.extend(
            dataset
                .attribute_names()
                .iter()
                .map(|a| c.attributes.get(a).map(|v| v.to_string()).unwrap_or_default()),
        );
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| IngestError::Io {
        path: "<writer>".into(),
        source,
    })
}

fn parse_finite(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Whether larger or smaller values of a score column are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreDirection {
    #[default]
    HigherIsBetter,
    LowerIsBetter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreColumn {
    pub name: String,
    pub scores: Vec<f64>,
}

/// Per-ranker numeric scores for each candidate, columns in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    candidate_ids: Vec<String>,
    columns: Vec<ScoreColumn>,
}

impl ScoreTable {
    pub fn new(candidate_ids: Vec<String>, columns: Vec<ScoreColumn>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, id) in candidate_ids.iter().enumerate() {
            if !seen.insert(id) {
                return Err(IngestError::DuplicateId {
                    id: id.clone(),
                    line: i as u64 + 2,
                });
            }
        }
        for col in &columns {
            if col.scores.len() != candidate_ids.len() {
                return Err(IngestError::Csv {
                    line: None,
                    message: format!(
                        "column `{}` has {} scores for {} candidates",
                        col.name,
                        col.scores.len(),
                        candidate_ids.len()
                    ),
                });
            }
            check_finite(col)?;
        }
        Ok(ScoreTable {
            candidate_ids,
            columns,
        })
    }

    pub fn candidate_ids(&self) -> &[String] {
        &self.candidate_ids
    }

    pub fn columns(&self) -> &[ScoreColumn] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&ScoreColumn> {
        self.columns.iter().find(|c| c.name == name)
    }
}

fn check_finite(col: &ScoreColumn) -> Result<()> {
    match col.scores.iter().position(|s| !s.is_finite()) {
        Some(i) => Err(IngestError::NonFiniteScore {
            column: col.name.clone(),
            line: i as u64 + 2,
            value: col.scores[i].to_string(),
        }),
        None => Ok(()),
    }
}

pub fn load_scores(path: impl AsRef<Path>) -> Result<ScoreTable> {
    parse_scores(open(path.as_ref())?)
}

pub fn parse_scores<R: Read>(reader: R) -> Result<ScoreTable> {
    let (headers, rows) = read_table(reader)?;
    let id_col = column(&headers, "id")?;
    let mut ids = Vec::with_capacity(rows.len());
    let mut seen = HashSet::new();
    let mut columns: Vec<ScoreColumn> = (0..headers.len())
        .filter(|&c| c != id_col)
        .map(|c| ScoreColumn {
            name: headers[c].clone(),
            scores: Vec::with_capacity(rows.len()),
        })
        .collect();
    for (line, rec) in &rows {
        let id = rec[id_col].to_string();
        if !seen.insert(id.clone()) {
            return Err(IngestError::DuplicateId { id, line: *line });
        }
        ids.push(id);
        for (col, c) in columns.iter_mut().zip((0..headers.len()).filter(|&c| c != id_col)) {
            let score = parse_finite(&rec[c]).ok_or_else(|| IngestError::NonFiniteScore {
                column: col.name.clone(),
                line: *line,
                value: rec[c].to_string(),
            })?;
            col.scores.push(score);
        }
    }
    ScoreTable::new(ids, columns)
}

/// Ranks candidates by a score column, best first; equal scores fall back to
/// ascending candidate id.
pub fn scores_to_ranking(table: &ScoreTable, column: &str) -> Result<Ranking> {
    scores_to_ranking_with(table, column, ScoreDirection::HigherIsBetter)
}

pub fn scores_to_ranking_with(
    table: &ScoreTable,
    column: &str,
    direction: ScoreDirection,
) -> Result<Ranking> {
    let col = table.column(column).ok_or_else(|| IngestError::UnknownColumn {
        column: column.to_string(),
    })?;
    check_finite(col)?;
    let mut idx: Vec<usize> = (0..table.candidate_ids.len()).collect();
    idx.sort_by(|&a, &b| {
        let by_score = match direction {
            ScoreDirection::HigherIsBetter => col.scores[b].total_cmp(&col.scores[a]),
            ScoreDirection::LowerIsBetter => col.scores[a].total_cmp(&col.scores[b]),
        };
        by_score.then_with(|| table.candidate_ids[a].cmp(&table.candidate_ids[b]))
    });
    let order = idx.into_iter().map(|i| table.candidate_ids[i].clone()).collect();
    Ok(Ranking::base(column, order))
}

pub fn load_rankings(path: impl AsRef<Path>) -> Result<Vec<Ranking>> {
    parse_rankings(open(path.as_ref())?)
}

/// Reads an explicit-rankings CSV. Rows may appear in any order but the
/// positions must be exactly 1..=n.
pub fn parse_rankings<R: Read>(reader: R) -> Result<Vec<Ranking>> {
    let (headers, rows) = read_table(reader)?;
    let pos_col = column(&headers, "position")?;
    let n = rows.len();
    let mut slots: Vec<Option<&csv::StringRecord>> = vec![None; n];
    for (line, rec) in &rows {
        let value = &rec[pos_col];
        let invalid = || IngestError::InvalidPosition {
            line: *line,
            value: value.to_string(),
        };
        let p: usize = value.trim().parse().map_err(|_| invalid())?;
        if !(1..=n).contains(&p) || slots[p - 1].is_some() {
            return Err(invalid());
        }
        slots[p - 1] = Some(rec);
    }
    let slots: Vec<&csv::StringRecord> = slots.into_iter().map(|s| s.expect("all filled")).collect();
    Ok((0..headers.len())
        .filter(|&c| c != pos_col)
        .map(|c| {
            let order = slots.iter().map(|rec| rec[c].to_string()).collect();
            Ranking::base(&headers[c], order)
        })
        .collect())
}

/// Writes rankings as an explicit-rankings CSV, one column per ranking label.
pub fn write_rankings<W: Write>(rankings: &[Ranking], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["position".to_string()];
    header.extend(rankings.iter().map(|r| r.label.clone()));
    w.write_record(&header)?;
    let n = rankings.first().map_or(0, Ranking::len);
    for p in 0..n {
        let mut row = vec![(p + 1).to_string()];
        row.extend(rankings.iter().map(|r| r.order.get(p).cloned().unwrap_or_default()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| IngestError::Io {
        path: "<writer>".into(),
        source,
    })
}

/// Base rankings from either a scores CSV (one ranking per score column) or an
/// explicit-rankings CSV, told apart by the first header cell.
pub fn parse_base_rankings<R: Read>(mut reader: R) -> Result<Vec<Ranking>> {
    let mut text = String::new();
    reader.read_to_string(&mut text).map_err(|source| IngestError::Io {
        path: "<reader>".into(),
        source,
    })?;
    let first = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes())
        .records()
        .next()
        .transpose()?
        .and_then(|r| r.get(0).map(str::to_string));
    match first.as_deref() {
        Some("position") => parse_rankings(text.as_bytes()),
        Some(_) => {
            let table = parse_scores(text.as_bytes())?;
            table
                .columns()
                .iter()
                .map(|c| scores_to_ranking(&table, &c.name))
                .collect()
        }
        None => Err(IngestError::EmptyFile),
    }
}

pub fn load_base_rankings(path: impl AsRef<Path>) -> Result<Vec<Ranking>> {
    parse_base_rankings(open(path.as_ref())?)
}

/// `count` perturbed copies of `seed_ranking`, each made by `swaps` uniformly
/// random adjacent transpositions.
///
/// The generator is ChaCha8 seeded through `seed_from_u64(seed)`; every swap
/// draws its upper index `k` from `0..n-1` with `random_range` and exchanges
/// positions `k` and `k + 1`. Outputs are produced in order from one stream.
pub fn synthesize_rankings(seed_ranking: &Ranking, count: usize, swaps: usize, seed: u64) -> Vec<Ranking> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = seed_ranking.len();
    (0..count)
        .map(|i| {
            let mut order = seed_ranking.order.clone();
            if n >= 2 {
                for _ in 0..swaps {
                    let k = rng.random_range(0..n - 1);
                    order.swap(k, k + 1);
                }
            }
            let label = format!("S{}", i + 1);
            Ranking::new(label.clone(), label, order, RankingKind::Base)
        })
        .collect()
}

/// Index of candidate ids to their dataset row, for callers joining score
/// tables against a dataset.
pub fn id_index(ids: &[String]) -> HashMap<&str, usize> {
    ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect()
}
