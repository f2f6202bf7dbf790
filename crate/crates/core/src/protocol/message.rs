//! Message kinds and their accounted sizes. Nothing is encoded on a wire;
//! the sizes feed byte counters.

use super::query::{QueryDescriptor, QueryId};
use super::scorelist::{ScoreList, ENTRY_BYTES};
use crate::PeerId;

pub const HEADER_BYTES: usize = 16;
/// qid (10) + ttl (1) + originator address (6) + strategy byte (1).
pub const FORWARD_FIXED_BYTES: usize = 10 + 1 + 6 + 1;
pub const PEER_ID_BYTES: usize = 6;
pub const RETRIEVE_COUNT_BYTES: usize = 2;

/// A data item delivered to the originator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultItem {
    pub owner: PeerId,
    pub row: u32,
    pub score: f64,
    pub payload_bytes: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ListKind {
    /// The one regular merged list a peer sends to its parent (or, for CN*,
    /// straight to the originator).
    Backward,
    /// Late or rerouted list bubbled up without waiting.
    Urgent { hops: u32 },
    /// Orphaned list sent straight to the originator.
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Message {
    Forward(QueryDescriptor),
    ScoreList {
        qid: QueryId,
        list: ScoreList,
        kind: ListKind,
    },
    RetrieveRequest {
        qid: QueryId,
        count: u32,
    },
    RetrieveResponse {
        qid: QueryId,
        items: Vec<ResultItem>,
    },
    /// CN: a peer's top items shipped directly to the originator.
    ItemResponse {
        qid: QueryId,
        items: Vec<ResultItem>,
    },
}

impl Message {
    pub fn accounted_bytes(&self) -> usize {
        HEADER_BYTES
            + match self {
                Message::Forward(q) => {
                    FORWARD_FIXED_BYTES + PEER_ID_BYTES * q.attached.as_ref().map_or(0, Vec::len)
                }
                Message::ScoreList { list, .. } => list.byte_len(),
                Message::RetrieveRequest { .. } => RETRIEVE_COUNT_BYTES,
                Message::RetrieveResponse { items, .. } | Message::ItemResponse { items, .. } => {
                    items.iter().map(|i| i.payload_bytes as usize).sum()
                }
            }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Message::Forward(_) => "FORWARD",
            Message::ScoreList {
                kind: ListKind::Backward,
                ..
            } => "SCORELIST",
            Message::ScoreList {
                kind: ListKind::Urgent { .. },
                ..
            } => "URGENT",
            Message::ScoreList {
                kind: ListKind::Direct,
                ..
            } => "DIRECT",
            Message::RetrieveRequest { .. } => "RETRIEVE-REQ",
            Message::RetrieveResponse { .. } => "RETRIEVE-RESP",
            Message::ItemResponse { .. } => "ITEMS",
        }
    }
}

/// Largest score-list message for `k` entries.
pub fn score_list_bytes(k: usize) -> usize {
    HEADER_BYTES + ENTRY_BYTES * k
}

/// Forward message carrying `attached` peer ids.
pub fn forward_bytes(attached: usize) -> usize {
    HEADER_BYTES + FORWARD_FIXED_BYTES + PEER_ID_BYTES * attached
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{ScoreEntry, Strategy};

    #[test]
    fn sizes() {
        let mut q = QueryDescriptor::new(1, 0, 20, 5, Strategy::Basic);
        assert_eq!(Message::Forward(q.clone()).accounted_bytes(), 34);
        q.attached = Some(vec![1, 2, 3]);
        assert_eq!(Message::Forward(q.clone()).accounted_bytes(), 34 + 18);
        let list = ScoreList::from_entries((0..20).map(|i| ScoreEntry::new(i, 0.5)).collect());
        let m = Message::ScoreList {
            qid: q.qid,
            list,
            kind: ListKind::Backward,
        };
        assert_eq!(m.accounted_bytes(), 216);
        assert_eq!(score_list_bytes(20), 216);
        let items = vec![
            ResultItem {
                owner: 1,
                row: 0,
                score: 0.1,
                payload_bytes: 1000,
            },
            ResultItem {
                owner: 1,
                row: 1,
                score: 0.1,
                payload_bytes: 24,
            },
        ];
        assert_eq!(
            Message::RetrieveResponse { qid: q.qid, items }.accounted_bytes(),
            16 + 1024
        );
        assert_eq!(
            Message::RetrieveRequest {
                qid: q.qid,
                count: 3
            }
            .accounted_bytes(),
            18
        );
    }
}
