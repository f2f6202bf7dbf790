//! Per-neighbour statistics about returned score-lists, and the heuristics
//! that use them to prune forwarding.

use std::collections::{BTreeMap, HashMap};

use super::query::HeuristicConfig;
use super::scorelist::ScoreList;
use crate::datastore::ScoringSpec;
use crate::PeerId;

/// Statistics are kept per repeated query shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateKey {
    pub scoring: ScoringSpec,
    pub k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NeighborRecord {
    /// Entries of the neighbour's list that survived into the merged list.
    pub hits_in_merged_list: u32,
    /// 1-based rank of the neighbour's best surviving entry.
    pub best_position: Option<u32>,
    pub executions: u32,
    /// Entries the neighbour returned.
    pub returned: u32,
    /// Length of the merged list the ranks refer to.
    pub merged_len: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatisticsStore {
    records: BTreeMap<(TemplateKey, PeerId), NeighborRecord>,
}

impl StatisticsStore {
    pub fn get(&self, template: TemplateKey, neighbor: PeerId) -> Option<&NeighborRecord> {
        self.records.get(&(template, neighbor))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn clear(&mut self) {
        self.records.clear();
    }
}

/// Records how each neighbour's list fared in `merged`. Each merged entry is
/// credited to at most one neighbour (lowest id first), so hits never add up
/// to more than the merged length.
pub fn update_statistics(
    store: &mut StatisticsStore,
    template: TemplateKey,
    merged: &ScoreList,
    per_neighbor: &BTreeMap<PeerId, ScoreList>,
) {
    let mut first_pos: HashMap<(PeerId, u64), u32> = HashMap::new();
    let mut remaining: HashMap<(PeerId, u64), u32> = HashMap::new();
    for (i, e) in merged.entries().iter().enumerate() {
        first_pos.entry(e.key()).or_insert(i as u32 + 1);
        *remaining.entry(e.key()).or_default() += 1;
    }
    for (&neighbor, list) in per_neighbor {
        let mut hits = 0;
        let mut best = None;
        for e in list.entries() {
            if let Some(left) = remaining.get_mut(&e.key()).filter(|n| **n > 0) {
                *left -= 1;
                hits += 1;
                let pos = first_pos[&e.key()];
                best = Some(best.map_or(pos, |b: u32| b.min(pos)));
            }
        }
        let rec = store.records.entry((template, neighbor)).or_default();
        rec.hits_in_merged_list = hits;
        rec.best_position = best;
        rec.executions += 1;
        rec.returned = list.len() as u32;
        rec.merged_len = merged.len() as u32;
    }
}

/// Filters forwarding candidates. Neighbours without a record always pass,
/// so the first execution of a query reaches everybody.
pub fn select_neighbors_heuristic(
    store: &StatisticsStore,
    template: TemplateKey,
    candidates: &[PeerId],
    config: &HeuristicConfig,
) -> Vec<PeerId> {
    candidates
        .iter()
        .copied()
        .filter(|&n| match store.get(template, n) {
            None => true,
            Some(rec) if rec.executions == 0 => true,
            Some(rec) => keep(rec, config),
        })
        .collect()
}

fn keep(rec: &NeighborRecord, config: &HeuristicConfig) -> bool {
    match *config {
        HeuristicConfig::ExcludeZeroHit => rec.hits_in_merged_list > 0,
        HeuristicConfig::MinHitFraction { x } => {
            rec.returned > 0 && rec.hits_in_merged_list as f64 >= x * rec.returned as f64
        }
        HeuristicConfig::PositionThreshold { z } => rec
            .best_position
            .is_some_and(|p| p as f64 <= z * rec.merged_len as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::scorelist::ScoreEntry;
    use proptest::prelude::*;

    const T: TemplateKey = TemplateKey {
        scoring: ScoringSpec::ScoreDescending,
        k: 20,
    };

    fn list(items: &[(PeerId, f64)]) -> ScoreList {
        ScoreList::from_entries(items.iter().map(|&(o, s)| ScoreEntry::new(o, s)).collect())
    }

    #[test]
    fn dominated_neighbor_has_no_hits() {
        let mut store = StatisticsStore::default();
        let merged = list(&[(1, 0.9)]);
        let lists = BTreeMap::from([(1, list(&[(1, 0.9)])), (2, list(&[(2, 0.1)]))]);
        update_statistics(&mut store, T, &merged, &lists);
        let rec = store.get(T, 2).unwrap();
        assert_eq!(
            (rec.hits_in_merged_list, rec.best_position, rec.executions),
            (0, None, 1)
        );
        assert_eq!(store.get(T, 1).unwrap().best_position, Some(1));
    }

    #[test]
    fn exclude_zero_hit() {
        let mut store = StatisticsStore::default();
        store.records.insert(
            (T, 4),
            NeighborRecord {
                executions: 1,
                ..Default::default()
            },
        );
        let kept = select_neighbors_heuristic(&store, T, &[3, 4], &HeuristicConfig::ExcludeZeroHit);
        assert_eq!(kept, vec![3]);
    }

    #[test]
    fn position_threshold_boundary() {
        let mut store = StatisticsStore::default();
        let rec = NeighborRecord {
            hits_in_merged_list: 2,
            best_position: Some(15),
            executions: 1,
            returned: 20,
            merged_len: 20,
        };
        store.records.insert((T, 7), rec);
        let cfg = HeuristicConfig::PositionThreshold { z: 0.8 };
        assert_eq!(select_neighbors_heuristic(&store, T, &[7], &cfg), vec![7]);
        let cfg = HeuristicConfig::PositionThreshold { z: 0.7 };
        assert!(select_neighbors_heuristic(&store, T, &[7], &cfg).is_empty());
    }

    #[test]
    fn min_hit_fraction() {
        let mut store = StatisticsStore::default();
        let rec = NeighborRecord {
            hits_in_merged_list: 2,
            executions: 1,
            returned: 20,
            ..Default::default()
        };
        store.records.insert((T, 1), rec);
        assert_eq!(
            select_neighbors_heuristic(
                &store,
                T,
                &[1],
                &HeuristicConfig::MinHitFraction { x: 0.1 }
            ),
            vec![1]
        );
        assert!(select_neighbors_heuristic(
            &store,
            T,
            &[1],
            &HeuristicConfig::MinHitFraction { x: 0.11 }
        )
        .is_empty());
    }

    #[test]
    fn no_statistics_keeps_everyone() {
        let store = StatisticsStore::default();
        for cfg in [
            HeuristicConfig::ExcludeZeroHit,
            HeuristicConfig::MinHitFraction { x: 1.0 },
            HeuristicConfig::PositionThreshold { z: 0.0 },
        ] {
            assert_eq!(
                select_neighbors_heuristic(&store, T, &[1, 2, 3], &cfg),
                vec![1, 2, 3]
            );
        }
    }

    #[test]
    fn templates_are_separate() {
        let mut store = StatisticsStore::default();
        update_statistics(
            &mut store,
            T,
            &list(&[]),
            &BTreeMap::from([(1, list(&[(1, 0.2)]))]),
        );
        let other = TemplateKey { k: 5, ..T };
        assert!(store.get(other, 1).is_none());
    }

    proptest! {
        #[test]
        fn hits_bounded_and_filters_are_subsets(
            raw in prop::collection::vec(prop::collection::vec((0u32..4, 0u8..6), 0..6), 1..5),
            k in 1usize..10,
            z in 0.0f64..=1.0,
        ) {
            let lists: BTreeMap<PeerId, ScoreList> = raw
                .iter()
                .enumerate()
                .map(|(i, v)| (i as PeerId, list(&v.iter().map(|&(o, s)| (o, s as f64 / 6.0)).collect::<Vec<_>>())))
                .collect();
            let merged = crate::protocol::merge_score_lists(lists.values(), k);
            let mut store = StatisticsStore::default();
            update_statistics(&mut store, T, &merged, &lists);
            let total: u32 = lists.keys().map(|&n| store.get(T, n).unwrap().hits_in_merged_list).sum();
            prop_assert_eq!(total as usize, merged.len());
            for &n in lists.keys() {
                if let Some(p) = store.get(T, n).unwrap().best_position {
                    prop_assert!(p >= 1 && p as usize <= k);
                }
            }
            let cands: Vec<PeerId> = (0..8).collect();
            let kept = select_neighbors_heuristic(&store, T, &cands, &HeuristicConfig::PositionThreshold { z });
            prop_assert!(kept.iter().all(|c| cands.contains(c)));
        }
    }
}
