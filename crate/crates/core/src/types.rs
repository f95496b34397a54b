//! Candidates, datasets, groups and rankings.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single attribute cell. Columns whose every cell parses as a finite number
/// are numeric; everything else is categorical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttributeValue {
    Number(f64),
    Text(String),
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeValue::Number(x) => write!(f, "{x}"),
            AttributeValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: String,
    pub name: String,
    pub protected_value: String,
    pub attributes: BTreeMap<String, AttributeValue>,
}

/// All candidates sharing one value of the protected attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub label: String,
    pub member_ids: Vec<String>,
}

impl Group {
    pub fn new(label: impl Into<String>, member_ids: Vec<String>) -> Self {
        Group {
            label: label.into(),
            member_ids,
        }
    }

    pub fn size(&self) -> usize {
        self.member_ids.len()
    }
}

/// The candidate set together with the chosen protected attribute.
///
/// Groups are derived on construction, ordered by label, and members keep the
/// candidate order of the dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "DatasetRepr", into = "DatasetRepr")]
pub struct Dataset {
    candidates: Vec<Candidate>,
    protected_attribute: String,
    attribute_names: Vec<String>,
    groups: Vec<Group>,
    index: HashMap<String, usize>,
    group_of: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DatasetRepr {
    protected_attribute: String,
    attribute_names: Vec<String>,
    candidates: Vec<Candidate>,
}

impl TryFrom<DatasetRepr> for Dataset {
    type Error = Error;

    fn try_from(repr: DatasetRepr) -> Result<Self> {
        Dataset::new(repr.candidates, repr.protected_attribute, repr.attribute_names)
    }
}

impl From<Dataset> for DatasetRepr {
    fn from(ds: Dataset) -> Self {
        DatasetRepr {
            protected_attribute: ds.protected_attribute,
            attribute_names: ds.attribute_names,
            candidates: ds.candidates,
        }
    }
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.candidates == other.candidates
            && self.protected_attribute == other.protected_attribute
            && self.attribute_names == other.attribute_names
    }
}

impl Dataset {
    /// Builds a dataset. `attribute_names` fixes the column order used when the
    /// dataset is written back out; it must list every attribute key.
    pub fn new(
        candidates: Vec<Candidate>,
        protected_attribute: impl Into<String>,
        attribute_names: Vec<String>,
    ) -> Result<Self> {
        let protected_attribute = protected_attribute.into();
        if candidates.len() < 2 {
            return Err(Error::InvalidDataset(format!(
                "at least 2 candidates required, got {}",
                candidates.len()
            )));
        }
        if !attribute_names.contains(&protected_attribute) {
            return Err(Error::InvalidDataset(format!(
                "protected attribute `{protected_attribute}` is not a dataset attribute"
            )));
        }

        let mut index = HashMap::with_capacity(candidates.len());
        let mut by_label: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, c) in candidates.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::InvalidDataset(format!("duplicate candidate id `{}`", c.id)));
            }
            match c.attributes.get(&protected_attribute) {
                Some(v) if v.to_string() == c.protected_value => {}
                _ => {
                    return Err(Error::InvalidDataset(format!(
                        "candidate `{}` protected value disagrees with attribute `{protected_attribute}`",
                        c.id
                    )))
                }
            }
            if let Some(key) = c.attributes.keys().find(|k| !attribute_names.contains(k)) {
                return Err(Error::InvalidDataset(format!(
                    "candidate `{}` has undeclared attribute `{key}`",
                    c.id
                )));
            }
            by_label.entry(c.protected_value.as_str()).or_default().push(i);
        }

        let mut group_of = vec![0; candidates.len()];
        let groups = by_label
            .into_iter()
            .enumerate()
            .map(|(g, (label, members))| {
                for &m in &members {
                    group_of[m] = g;
                }
                Group::new(label, members.iter().map(|&m| candidates[m].id.clone()).collect())
            })
            .collect();

        Ok(Dataset {
            candidates,
            protected_attribute,
            attribute_names,
            groups,
            index,
            group_of,
        })
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn protected_attribute(&self) -> &str {
        &self.protected_attribute
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn candidate(&self, id: &str) -> Option<&Candidate> {
        self.index.get(id).map(|&i| &self.candidates[i])
    }

    /// Candidate ids in dataset order.
    pub fn ids(&self) -> Vec<String> {
        self.candidates.iter().map(|c| c.id.clone()).collect()
    }

    pub(crate) fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Index into [`Dataset::groups`] of the candidate at dataset index `i`.
    pub(crate) fn group_index(&self, i: usize) -> usize {
        self.group_of[i]
    }

    /// Maps a ranking to the group index of the occupant at each position.
    pub(crate) fn group_sequence(&self, ranking: &Ranking) -> Result<Vec<usize>> {
        Ok(self
            .dataset_indices(ranking)?
            .into_iter()
            .map(|i| self.group_of[i])
            .collect())
    }

    /// Dataset indices of the ranking's occupants, verifying that the ranking is
    /// a permutation of this dataset's candidates.
    pub(crate) fn dataset_indices(&self, ranking: &Ranking) -> Result<Vec<usize>> {
        if ranking.order.len() != self.len() {
            return Err(Error::CandidateSetMismatch);
        }
        let mut seen = vec![false; self.len()];
        ranking
            .order
            .iter()
            .map(|id| {
                let i = self.index_of(id).ok_or(Error::CandidateSetMismatch)?;
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::CandidateSetMismatch);
                }
                Ok(i)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankingKind {
    Base,
    Consensus,
    Edited,
}

/// A complete ordering of the candidates. Position 1 (index 0) is the most
/// favorable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    pub id: String,
    pub label: String,
    pub order: Vec<String>,
    pub kind: RankingKind,
}

impl Ranking {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        order: Vec<String>,
        kind: RankingKind,
    ) -> Self {
        Ranking {
            id: id.into(),
            label: label.into(),
            order,
            kind,
        }
    }

    /// A base ranking whose id and label are both `label`.
    pub fn base(label: &str, order: Vec<String>) -> Self {
        Ranking::new(label, label, order, RankingKind::Base)
    }

    pub fn from_ids<S: AsRef<str>>(id: &str, order: &[S]) -> Self {
        Ranking::base(id, order.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based position of `id`.
    pub fn position_of(&self, id: &str) -> Option<usize> {
        self.order.iter().position(|c| c == id).map(|p| p + 1)
    }

    pub fn reversed(&self) -> Self {
        let mut r = self.clone();
        r.order.reverse();
        r
    }
}

/// A non-negative rational with a positive denominator, used for exact
/// comparisons of FPR and ARP values.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };

    /// Correctly rounded, so equal rationals always map to the same float.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// |self − other|
    pub fn abs_diff(self, other: Ratio) -> Ratio {
        let a = self.num as u128 * other.den as u128;
        let b = other.num as u128 * self.den as u128;
        let num = a.abs_diff(b);
        let den = self.den as u128 * other.den as u128;
        let g = gcd128(num, den);
        Ratio {
            num: (num / g) as u64,
            den: (den / g) as u64,
        }
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Dataset whose candidates are named by their group: `a1`, `a2` belong to
    /// group `A`, `b1` to `B`, and so on.
    pub fn dataset_from_ids(ids: &[&str]) -> Dataset {
        let candidates = ids
            .iter()
            .map(|id| {
                let label = id[..1].to_uppercase();
                Candidate {
                    id: id.to_string(),
                    name: id.to_string(),
                    protected_value: label.clone(),
                    attributes: BTreeMap::from([("group".to_string(), AttributeValue::Text(label))]),
                }
            })
            .collect();
        Dataset::new(candidates, "group", vec!["group".into()]).unwrap()
    }
}
