use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::PeerId;

/// Accounted bytes per score-list element: 4 for the score, 6 for the
/// owner's address (IPv4 + port).
pub const ENTRY_BYTES: usize = 10;

/// An `(address, score)` couple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreEntry {
    pub owner: PeerId,
    pub score: f64,
}

impl ScoreEntry {
    pub fn new(owner: PeerId, score: f64) -> Self {
        Self { owner, score }
    }

    /// Identity used for duplicate counting and accuracy.
    pub fn key(&self) -> (PeerId, u64) {
        (self.owner, self.score.to_bits())
    }
}

/// Global result order: higher score first, then smaller owner id.
pub fn entry_order(a: &ScoreEntry, b: &ScoreEntry) -> Ordering {
    b.score.total_cmp(&a.score).then(a.owner.cmp(&b.owner))
}

/// A sorted list of at most `k` couples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreList {
    entries: Vec<ScoreEntry>,
}

impl ScoreList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sorts `entries` into the global order.
    pub fn from_entries(mut entries: Vec<ScoreEntry>) -> Self {
        entries.sort_by(entry_order);
        Self { entries }
    }

    pub fn entries(&self) -> &[ScoreEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn byte_len(&self) -> usize {
        ENTRY_BYTES * self.entries.len()
    }

    pub fn truncate(&mut self, k: usize) {
        self.entries.truncate(k);
    }

    pub fn into_entries(self) -> Vec<ScoreEntry> {
        self.entries
    }
}

struct HeapItem<'a> {
    entry: ScoreEntry,
    list: usize,
    rest: &'a [ScoreEntry],
}

impl PartialEq for HeapItem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapItem<'_> {}
impl PartialOrd for HeapItem<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        entry_order(&self.entry, &other.entry).then(self.list.cmp(&other.list))
    }
}

/// k-way merge of sorted score-lists, keeping the `k` best couples.
/// Identical couples from different lists are kept as separate entries.
pub fn merge_score_lists<'a, I>(lists: I, k: usize) -> ScoreList
where
    I: IntoIterator<Item = &'a ScoreList>,
{
    let mut heap: BinaryHeap<Reverse<HeapItem<'a>>> = lists
        .into_iter()
        .enumerate()
        .filter_map(|(i, l)| {
            l.entries.split_first().map(|(&entry, rest)| {
                Reverse(HeapItem {
                    entry,
                    list: i,
                    rest,
                })
            })
        })
        .collect();
    let mut out = Vec::with_capacity(k.min(64));
    while out.len() < k {
        let Some(Reverse(item)) = heap.pop() else {
            break;
        };
        out.push(item.entry);
        if let Some((&entry, rest)) = item.rest.split_first() {
            heap.push(Reverse(HeapItem {
                entry,
                list: item.list,
                rest,
            }));
        }
    }
    ScoreList { entries: out }
}
