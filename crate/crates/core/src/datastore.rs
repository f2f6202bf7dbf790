//! Synthetic per-peer relations `R(score, data)` and local top-k selection.

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::seed::{self, TAG_DATA};
use crate::{Error, PeerId, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TupleRow {
    /// Relevance score in `[0, 1]`.
    pub score: f64,
    /// Size of the `data` attribute shipped when the row is retrieved.
    pub payload_bytes: u32,
}

/// How a query scores rows. Only the workload's own ordering exists today;
/// other scoring functions plug in here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum ScoringSpec {
    /// `ORDER BY R.score` descending.
    #[default]
    ScoreDescending,
}

impl ScoringSpec {
    pub fn score(self, row: &TupleRow) -> f64 {
        match self {
            ScoringSpec::ScoreDescending => row.score,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataGenConfig {
    pub tuple_count_min: u32,
    pub tuple_count_max: u32,
    pub payload_mean_bytes: f64,
    /// Variance of the payload size, in bytes squared.
    pub payload_variance_bytes: f64,
    pub seed: u64,
}

impl Default for DataGenConfig {
    /// More than 1000 and fewer than 20,000 rows per peer, 1 KB payloads.
    fn default() -> Self {
        Self {
            tuple_count_min: 1001,
            tuple_count_max: 19_999,
            payload_mean_bytes: 1024.0,
            payload_variance_bytes: 64.0,
            seed: 0,
        }
    }
}

impl DataGenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tuple_count_min < 1 || self.tuple_count_min > self.tuple_count_max {
            return Err(Error::InvalidDataConfig(format!(
                "need 1 <= tuple_count_min <= tuple_count_max, got {}..{}",
                self.tuple_count_min, self.tuple_count_max
            )));
        }
        if !(self.payload_mean_bytes.is_finite() && self.payload_mean_bytes > 0.0) {
            return Err(Error::InvalidDataConfig(
                "payload mean must be positive".into(),
            ));
        }
        if !(self.payload_variance_bytes.is_finite() && self.payload_variance_bytes >= 0.0) {
            return Err(Error::InvalidDataConfig(
                "payload variance must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeerDatabase {
    pub rows: Vec<TupleRow>,
}

/// One row of a local top-k answer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalHit {
    pub row: u32,
    pub score: f64,
}

/// Descending score, then ascending row index.
pub(crate) fn hit_order(a: &LocalHit, b: &LocalHit) -> Ordering {
    b.score.total_cmp(&a.score).then(a.row.cmp(&b.row))
}

/// Generates the relation held by `peer`. A pure function of
/// `(config.seed, peer)`.
pub fn generate_database(peer: PeerId, config: &DataGenConfig) -> Result<PeerDatabase> {
    config.validate()?;
    let mut rng = seed::rng(config.seed, &[TAG_DATA, peer as u64]);
    let count = rng.random_range(config.tuple_count_min..=config.tuple_count_max);
    let payload = Normal::new(
        config.payload_mean_bytes,
        config.payload_variance_bytes.sqrt(),
    )
    .map_err(|e| Error::InvalidDataConfig(e.to_string()))?;
    let rows = (0..count)
        .map(|_| {
            let score = rng.random::<f64>();
            let bytes = payload.sample(&mut rng).round().max(1.0);
            TupleRow {
                score,
                payload_bytes: bytes.min(u32::MAX as f64) as u32,
            }
        })
        .collect();
    Ok(PeerDatabase { rows })
}

impl PeerDatabase {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The `k` best rows under `spec`, best first.
    pub fn top_k(&self, spec: ScoringSpec, k: usize) -> Vec<LocalHit> {
        let mut hits: Vec<LocalHit> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| LocalHit {
                row: i as u32,
                score: spec.score(r),
            })
            .collect();
        let k = k.min(hits.len());
        if k == 0 {
            return Vec::new();
        }
        if k < hits.len() {
            hits.select_nth_unstable_by(k - 1, hit_order);
            hits.truncate(k);
        }
        hits.sort_unstable_by(hit_order);
        hits
    }
}

/// `ScoreDescending` top-k of `db`.
pub fn local_top_k(db: &PeerDatabase, k: usize) -> Vec<LocalHit> {
    db.top_k(ScoringSpec::ScoreDescending, k)
}

/// The part of a peer's relation the simulator keeps resident: its row count
/// (which drives local execution time) and its best rows up to a cap.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeerContent {
    pub row_count: u32,
    /// Best rows first, with their payload sizes.
    pub top: Vec<(LocalHit, u32)>,
}

impl PeerContent {
    pub fn summarize(db: &PeerDatabase, cap: usize) -> Self {
        let top = local_top_k(db, cap)
            .into_iter()
            .map(|h| (h, db.rows[h.row as usize].payload_bytes))
            .collect();
        Self {
            row_count: db.len() as u32,
            top,
        }
    }

    /// Top `k` of the summarized rows; `None` if the cap is too small to
    /// answer exactly.
    pub fn top_k(&self, k: usize) -> Option<&[(LocalHit, u32)]> {
        if k <= self.top.len() || self.top.len() == self.row_count as usize {
            Some(&self.top[..k.min(self.top.len())])
        } else {
            None
        }
    }
}
